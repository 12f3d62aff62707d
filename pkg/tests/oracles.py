"""Brute-force reference implementations used only by the tests.

They share no code with the package's search routines.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def _all_colorings(num_pairs: int, k: int) -> np.ndarray:
    """Every coloring of ``num_pairs`` pairs with ``k`` colors, one per row."""
    grids = np.indices((k,) * num_pairs).reshape(num_pairs, -1).T
    return np.ascontiguousarray(grids)


def naive_colorable(n: int, edges, triples, k: int) -> bool:
    """Try every ordering and every coloring of all ``C(n, 2)`` pairs."""
    pairs = list(itertools.combinations(range(n), 2))
    index = {p: t for t, p in enumerate(pairs)}
    if not edges:
        return True
    colorings = _all_colorings(len(pairs), k)
    allowed = np.zeros(k**3, dtype=bool)
    for x, y, z in triples:
        allowed[(x * k + y) * k + z] = True
    for ordering in itertools.permutations(range(n)):
        pos = {v: p for p, v in enumerate(ordering)}
        ok = np.ones(len(colorings), dtype=bool)
        for e in edges:
            a, b, c = sorted(e, key=pos.__getitem__)
            cij = colorings[:, index[tuple(sorted((a, b)))]]
            cjk = colorings[:, index[tuple(sorted((b, c)))]]
            cik = colorings[:, index[tuple(sorted((a, c)))]]
            ok &= allowed[(cij * k + cjk) * k + cik]
            if not ok.any():
                break
        if ok.any():
            return True
    return False


def fixed_ordering_feasible(n: int, edges, triples, k: int, ordering) -> bool:
    pairs = list(itertools.combinations(range(n), 2))
    index = {p: t for t, p in enumerate(pairs)}
    pos = {v: p for p, v in enumerate(ordering)}
    triples = set(triples)
    for colors in itertools.product(range(k), repeat=len(pairs)):
        good = True
        for e in edges:
            a, b, c = sorted(e, key=pos.__getitem__)
            t = (
                colors[index[tuple(sorted((a, b)))]],
                colors[index[tuple(sorted((b, c)))]],
                colors[index[tuple(sorted((a, c)))]],
            )
            if t not in triples:
                good = False
                break
        if good:
            return True
    return False


def canonical_form(n: int, edges) -> tuple:
    """Lexicographically least relabeled edge list (brute force over n!)."""
    best = None
    for perm in itertools.permutations(range(n)):
        image = tuple(sorted(tuple(sorted(perm[v] for v in e)) for e in edges))
        if best is None or image < best:
            best = image
    return best


def isomorphism_classes(n: int) -> list[tuple]:
    """One representative edge list per isomorphism class of 3-graphs on n vertices."""
    triples = list(itertools.combinations(range(n), 3))
    seen = set()
    reps = []
    for mask in range(1 << len(triples)):
        edges = tuple(t for b, t in enumerate(triples) if (mask >> b) & 1)
        form = canonical_form(n, edges)
        if form not in seen:
            seen.add(form)
            reps.append(form)
    return reps


def pairwise_linear(edges) -> bool:
    return all(len(set(e) & set(f)) <= 1 for e, f in itertools.combinations(edges, 2))


def count_lines_through_pairs(n: int, edges) -> dict:
    counts = {}
    for e in edges:
        for p in itertools.combinations(e, 2):
            counts[p] = counts.get(p, 0) + 1
    return counts


def affine_lines_oracle(d: int) -> set:
    """Lines as point sets, from every (a, b) pair with b nonzero."""
    points = list(itertools.product(range(5), repeat=d))
    encode = lambda p: sum(c * 5**t for t, c in enumerate(p))  # noqa: E731
    lines = set()
    for a in points:
        for b in points:
            if not any(b):
                continue
            line = frozenset(encode(tuple((a[t] + x * b[t]) % 5 for t in range(d))) for x in range(5))
            lines.add(line)
    return lines


def log_factorial(n: int) -> float:
    return math.fsum(math.log(i) for i in range(2, n + 1))


def brute_min_density(n: int, edges, floor: int):
    from fractions import Fraction

    edge_set = set(edges)
    best = None
    for size in range(floor, n + 1):
        for subset in itertools.combinations(range(n), size):
            spanned = sum(1 for t in itertools.combinations(subset, 3) if t in edge_set)
            d = Fraction(spanned, math.comb(size, 3))
            if best is None or d < best:
                best = d
    return best


def all_maximal_linear_free_sets(n: int, k: int, edges):
    """k-sets sharing at most one vertex with every edge (slow scan)."""
    used = set()
    for e in edges:
        used.update(itertools.combinations(e, 2))
    return [c for c in itertools.combinations(range(n), k) if not any(p in used for p in itertools.combinations(c, 2))]
