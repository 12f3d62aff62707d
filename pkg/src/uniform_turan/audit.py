"""Density measurements with exact rational arithmetic."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np

from .core import Hypergraph, Palette, as_fraction
from .errors import CapExceededError, DegenerateSubsetError
from .partitioned import PartitionedHypergraph, degree_profile, triad_density
from .rng import SeededRng

EXACT_CAP = 20


def palette_density(palette: Palette) -> Fraction:
    return Fraction(len(palette.triples), palette.color_count**3)


@dataclass(frozen=True)
class DensityReport:
    mode: Literal["sampled", "exact"]
    epsilon: Fraction
    sample_count: int
    min_density: Fraction
    argmin_subset: tuple[int, ...]
    seed: int | None = None


def spanned_edges(h: Hypergraph, subset) -> int:
    """Number of edges of ``h`` with every vertex in ``subset``."""
    if h.m == 0:
        return 0
    mask = np.zeros(h.n, dtype=bool)
    mask[list(subset)] = True
    return int(mask[h.edge_array].all(axis=1).sum())


def subset_density(h: Hypergraph, subset) -> Fraction:
    return Fraction(spanned_edges(h, subset), math.comb(len(subset), 3))


def _threshold(eps: Fraction, n: int) -> int:
    if not 0 < eps <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    return math.ceil(eps * n)


def sampled_min_density(h: Hypergraph, eps, samples: int, rng: SeededRng) -> DensityReport:
    """Minimum spanned-edge density over random subsets of size ``ceil(eps n)``.

    Each sample is one :meth:`SeededRng.sample` call, so the draws consumed
    are exactly ``size`` per sample.
    """
    eps = as_fraction(eps)
    size = _threshold(eps, h.n)
    if size < 3:
        raise DegenerateSubsetError(f"subsets of size {size} span no triples")
    if samples < 1:
        raise ValueError("need at least one sample")
    best = None
    best_subset: tuple[int, ...] = ()
    for _ in range(samples):
        subset = rng.sample(h.n, size)
        d = subset_density(h, subset)
        if best is None or d < best:
            best, best_subset = d, tuple(subset)
    return DensityReport("sampled", eps, samples, best, best_subset, rng.seed)


def exact_min_density(h: Hypergraph, eps, *, cap: int | None = EXACT_CAP) -> DensityReport:
    """Minimum density over every subset with at least ``max(3, ceil(eps n))`` vertices.

    Subsets are enumerated depth first (vertex included before excluded),
    counting edges incrementally: adding ``v`` to ``S`` adds the edges
    ``{a, b, v}`` with ``a < b`` in ``S``. Ties keep the first subset found.
    """
    eps = as_fraction(eps)
    n = h.n
    if cap is not None and n > cap:
        raise CapExceededError(f"exact density audit refused: n={n} exceeds cap {cap}")
    floor = max(3, _threshold(eps, n))
    if floor > n:
        raise DegenerateSubsetError(f"no subset of {n} vertices has {floor} or more")

    # link[v][a]: bitmask of b with a < b < v and {a, b, v} an edge.
    link: list[dict[int, int]] = [dict() for _ in range(n)]
    for a, b, v in h.edges:
        link[v][a] = link[v].get(a, 0) | (1 << b)

    best_num, best_den = 2, 1
    best_subset: tuple[int, ...] = ()
    evaluated = 0
    chosen: list[int] = []

    def visit(v: int, mask: int, count: int) -> None:
        nonlocal best_num, best_den, best_subset, evaluated
        size = len(chosen)
        if v == n:
            if size >= floor:
                evaluated += 1
                den = math.comb(size, 3)
                if count * best_den < best_num * den:
                    best_num, best_den, best_subset = count, den, tuple(chosen)
            return
        if size + (n - v) < floor:
            return
        gained = sum((bits & mask).bit_count() for a, bits in link[v].items() if (mask >> a) & 1)
        chosen.append(v)
        visit(v + 1, mask | (1 << v), count + gained)
        chosen.pop()
        visit(v + 1, mask, count)

    visit(0, 0, 0)
    return DensityReport("exact", eps, evaluated, Fraction(best_num, best_den), best_subset)


@dataclass(frozen=True)
class TriadCheck:
    triad: tuple[int, int, int]
    density: Fraction
    a: Fraction
    b: Fraction
    c: Fraction
    slack: Fraction

    @property
    def ok(self) -> bool:
        return self.slack >= 0


def triad_product_check(ph: PartitionedHypergraph, eps) -> list[TriadCheck]:
    """Check ``density <= a*b*c + 3 eps`` on every triad.

    ``a, b, c`` are the fractions of ``eps``-significant vertices in the three
    parts. Edges inside the significant sets number at most ``a b c s^3``;
    every other edge passes through an insignificant vertex, and each part's
    insignificant vertices carry fewer than ``eps s^3`` edges in total.
    """
    eps = as_fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    rows = []
    profile = degree_profile(ph, eps)
    for t in ph.all_triads():
        a, b, c = profile[t]
        d = triad_density(ph, *t)
        rows.append(TriadCheck(t, d, a, b, c, a * b * c + 3 * eps - d))
    return rows


def am_gm_holds(a: Fraction, b: Fraction, c: Fraction) -> bool:
    """``abc >= 8/27`` forces ``a + b + c >= 2``; True unless that implication fails."""
    return a * b * c < Fraction(8, 27) or a + b + c >= 2
