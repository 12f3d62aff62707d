"""Generators: random palette hypergraphs, affine lines, greedy linear
hypergraphs, fan expansion with its Phi_3 coloring, and the growth bound."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    ALPHA1,
    ALPHA2,
    BETA1,
    BETA3,
    GAMMA2,
    GAMMA3,
    OMEGA,
    ColoringCertificate,
    Hypergraph,
    Palette,
    Pair,
    canonicalize,
    is_linear,
    pair,
)
from .errors import MalformedInputError
from .rng import SeededRng


def random_palette_hypergraph(palette: Palette, n: int, rng: SeededRng) -> tuple[Hypergraph, ColoringCertificate]:
    """Color every pair uniformly and keep the triples whose colors fit.

    Pairs ``(i, j)``, ``i < j``, are colored in lexicographic order, one
    ``rng.below(k)`` draw each. The triple ``i < j < l`` is an edge iff
    ``(c_ij, c_jl, c_il)`` is in the palette. Returns the hypergraph and the
    pair coloring as a certificate under the identity ordering.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    k = palette.color_count
    colors = np.zeros((n, n), dtype=np.int64)
    pair_colors: dict[Pair, int] = {}
    for i, j in itertools.combinations(range(n), 2):
        c = rng.below(k)
        colors[i, j] = colors[j, i] = c
        pair_colors[(i, j)] = c
    lookup = palette.lookup
    blocks = []
    for i in range(n - 2):
        js, ls = np.triu_indices(n - i - 1, k=1)
        js = js + i + 1
        ls = ls + i + 1
        code = (colors[i, js] * k + colors[js, ls]) * k + colors[i, ls]
        keep = lookup[code]
        if keep.any():
            blocks.append(np.column_stack([np.full(int(keep.sum()), i), js[keep], ls[keep]]))
    # Rows come out in lexicographic order already.
    edges = tuple(map(tuple, np.concatenate(blocks).tolist())) if blocks else ()
    return Hypergraph(3, n, edges), ColoringCertificate(tuple(range(n)), pair_colors)


def affine_lines(d: int) -> Hypergraph:
    """All lines of the affine space over the 5-element field in dimension ``d``.

    Point ``(x_0, ..., x_{d-1})`` is vertex ``sum(x_t * 5**t)``.
    """
    if not 1 <= d <= 5:
        raise ValueError(f"dimension {d} outside 1..5")
    n = 5**d
    weights = 5 ** np.arange(d)
    points = (np.arange(n)[:, None] // weights) % 5
    lines = []
    # One direction per projective point: first nonzero coordinate equal to 1.
    for b in range(1, n):
        direction = points[b]
        if direction[np.flatnonzero(direction)[0]] != 1:
            continue
        steps = (points[:, None, :] + np.arange(5)[None, :, None] * direction) % 5
        members = np.sort(steps @ weights, axis=1)
        lines.append(np.unique(members, axis=0))
    edges = np.unique(np.concatenate(lines), axis=0)
    return Hypergraph(5, n, tuple(map(tuple, edges.tolist())))


def _free_neighbors(n: int, edges: Sequence[tuple[int, ...]]) -> list[int]:
    full = (1 << n) - 1
    free = [full & ~(1 << v) for v in range(n)]
    for e in edges:
        for u, v in itertools.combinations(e, 2):
            free[u] &= ~(1 << v)
            free[v] &= ~(1 << u)
    return free


def _first_free_clique(free: list[int], size: int, start: int) -> tuple[int, ...] | None:
    """Lexicographically first ``size``-set with least element ``start``
    whose pairs are all unused."""

    def extend(chosen: list[int], cand: int) -> tuple[int, ...] | None:
        if len(chosen) == size:
            return tuple(chosen)
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            higher = cand & free[v]
            if (higher.bit_count()) >= size - len(chosen) - 1:
                found = extend(chosen + [v], higher)
                if found is not None:
                    return found
        return None

    return extend([start], free[start] & ~((1 << (start + 1)) - 1))


def find_addable_edge(h: Hypergraph) -> tuple[int, ...] | None:
    """A k-set whose addition keeps ``h`` linear, or ``None`` if ``h`` is maximal."""
    free = _free_neighbors(h.n, h.edges)
    for start in range(h.n):
        found = _first_free_clique(free, h.k, start)
        if found is not None:
            return found
    return None


_SCAN_CHUNK = 4096
_PAIR_SLOTS = tuple(itertools.combinations(range(5), 2))


def greedy_linear(n: int, rng: SeededRng, *, shuffle_limit: int = 40) -> Hypergraph:
    """Edge-maximal 5-uniform linear hypergraph grown in seeded random order.

    For ``n <= shuffle_limit`` all 5-sets are shuffled and scanned once. For
    larger ``n``, random 5-sets (``rng.sample(n, 5)``) are tried until ``4n``
    consecutive rejections, then a lexicographic sweep adds whatever still
    fits. Either way the result admits no further 5-set.
    """
    if n < 5:
        raise ValueError("greedy_linear needs n >= 5")
    free = _free_neighbors(n, ())
    edges: list[tuple[int, ...]] = []

    def fits(e) -> bool:
        return all((free[u] >> v) & 1 for u, v in itertools.combinations(e, 2))

    def add(e) -> None:
        edges.append(tuple(e))
        for u, v in itertools.combinations(e, 2):
            free[u] &= ~(1 << v)
            free[v] &= ~(1 << u)

    if n <= shuffle_limit:
        total = math.comb(n, 5)
        order = list(range(total))
        rng.shuffle(order)
        flat = itertools.chain.from_iterable(itertools.combinations(range(n), 5))
        candidates = np.fromiter(flat, dtype=np.int64, count=5 * total).reshape(total, 5)[order]
        used = np.zeros((n, n), dtype=bool)
        # A set blocked at the start of a chunk stays blocked, so the
        # vectorized prefilter only drops sets the plain scan would skip.
        for lo in range(0, len(candidates), _SCAN_CHUNK):
            chunk = candidates[lo : lo + _SCAN_CHUNK]
            open_ = np.ones(len(chunk), dtype=bool)
            for a, b in _PAIR_SLOTS:
                open_ &= ~used[chunk[:, a], chunk[:, b]]
            for e in chunk[open_].tolist():
                if fits(e):
                    add(e)
                    for u, v in itertools.combinations(e, 2):
                        used[u, v] = used[v, u] = True
    else:
        misses = 0
        while misses < 4 * n:
            e = rng.sample(n, 5)
            if fits(e):
                add(e)
                misses = 0
            else:
                misses += 1
        for start in range(n):
            while (e := _first_free_clique(free, 5, start)) is not None:
                add(e)
    return canonicalize(Hypergraph(5, n, tuple(edges)))


@dataclass(frozen=True)
class FanChoice:
    """The chosen (unordered) vertex pair of every 5-edge, in edge order."""

    pairs: tuple[Pair, ...]


def fan_expansion(
    h5: Hypergraph,
    choice: FanChoice | None = None,
    rng: SeededRng | None = None,
) -> tuple[Hypergraph, FanChoice]:
    """Replace every 5-edge by the three triples through its chosen pair.

    Without an explicit ``choice`` each edge (in canonical order) takes pair
    number ``rng.below(10)`` of its lexicographic pair list.
    """
    if h5.k != 5:
        raise MalformedInputError("fan expansion takes a 5-uniform hypergraph")
    if not is_linear(h5):
        raise MalformedInputError("fan expansion needs a linear hypergraph")
    if choice is None:
        if rng is None:
            raise ValueError("pass either a FanChoice or an rng")
        choice = FanChoice(tuple(list(itertools.combinations(e, 2))[rng.below(10)] for e in h5.edges))
    if len(choice.pairs) != h5.m:
        raise MalformedInputError("one chosen pair per edge required")
    triples = []
    for e, (v, w) in zip(h5.edges, choice.pairs):
        if v == w or v not in e or w not in e:
            raise MalformedInputError(f"chosen pair {(v, w)} is not inside edge {e}")
        triples.extend(tuple(sorted((v, w, x))) for x in e if x != v and x != w)
    return canonicalize(Hypergraph(3, h5.n, tuple(triples))), FanChoice(tuple(pair(v, w) for v, w in choice.pairs))


def phi3_witness(h5: Hypergraph, choice: FanChoice, ordering: Sequence[int] | None = None) -> ColoringCertificate:
    """Phi_3 coloring of the fan expansion of ``h5`` under ``ordering``.

    With the chosen pair at positions ``i < j`` and another edge vertex at
    position ``k``::

        c_ij = omega
        i < k < j:  c_ik = alpha1, c_kj = beta1
        k < i:      c_ki = alpha2, c_kj = gamma2
        k > j:      c_jk = beta3,  c_ik = gamma3

    Pairs outside every 5-edge get omega.
    """
    if not is_linear(h5):
        raise MalformedInputError("the Phi_3 coloring needs a linear hypergraph")
    n = h5.n
    ordering = tuple(range(n)) if ordering is None else tuple(ordering)
    if sorted(ordering) != list(range(n)):
        raise MalformedInputError("ordering is not a permutation")
    position = [0] * n
    for p, v in enumerate(ordering):
        position[v] = p
    colors: dict[Pair, int] = {}
    for e, (v, w) in zip(h5.edges, choice.pairs):
        a, b = (v, w) if position[v] < position[w] else (w, v)
        colors[pair(a, b)] = OMEGA
        for x in e:
            if x == a or x == b:
                continue
            if position[x] < position[a]:
                colors[pair(x, a)], colors[pair(x, b)] = ALPHA2, GAMMA2
            elif position[x] < position[b]:
                colors[pair(a, x)], colors[pair(x, b)] = ALPHA1, BETA1
            else:
                colors[pair(b, x)], colors[pair(a, x)] = BETA3, GAMMA3
    full = {p: colors.get(p, OMEGA) for p in itertools.combinations(range(n), 2)}
    return ColoringCertificate(ordering, full)


@dataclass(frozen=True)
class GrowthBound:
    holds: bool
    log_margin: float


def growth_and_union_bound(n: int, m: int) -> GrowthBound:
    """Test ``n! < (10/9)**m`` in log space: ``ln n! + m ln(9/10) < 0``."""
    if n < 0 or m < 0:
        raise ValueError("n and m must be nonnegative")
    margin = math.lgamma(n + 1) + m * math.log(0.9)
    return GrowthBound(margin < 0, margin)
