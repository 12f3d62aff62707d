"""Domain types: uniform hypergraphs, palettes and coloring certificates."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import MalformedCertificateError, MalformedInputError

SUPPORTED_UNIFORMITIES = (3, 5)

Edge = tuple[int, ...]
Pair = tuple[int, int]


def as_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float.

    Floats go through their shortest repr, so ``0.3`` becomes ``3/10``.
    """
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def pair(u: int, v: int) -> Pair:
    """Unordered pair key with the smaller label first."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Hypergraph:
    """A k-uniform hypergraph on vertices ``0 .. n-1``.

    Instances built by :func:`canonicalize` (and by every generator in the
    package) hold ascending edges in lexicographic order without duplicates.
    A raw instance may be constructed directly; run it through
    :func:`canonicalize` before handing it to anything else.
    """

    k: int
    n: int
    edges: tuple[Edge, ...] = ()

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_array(self) -> np.ndarray:
        """Edges as an ``(m, k)`` int64 array (read-only)."""
        arr = np.array(self.edges, dtype=np.int64).reshape(-1, self.k)
        arr.setflags(write=False)
        return arr

    def is_canonical(self) -> bool:
        if any(len(e) != self.k for e in self.edges):
            return False
        if any(not (0 <= e[0] and e[-1] < self.n) for e in self.edges):
            return False
        if any(e[t] >= e[t + 1] for e in self.edges for t in range(self.k - 1)):
            return False
        return all(a < b for a, b in zip(self.edges, self.edges[1:]))

    def relabel(self, perm: Sequence[int]) -> Hypergraph:
        """Image of the hypergraph under ``v -> perm[v]``, canonicalized."""
        return canonicalize(
            Hypergraph(self.k, self.n, tuple(tuple(perm[v] for v in e) for e in self.edges))
        )

    def restrict(self, edges: Iterable[Edge]) -> Hypergraph:
        """Same vertex set, keeping only the given edges."""
        return canonicalize(Hypergraph(self.k, self.n, tuple(edges)))


def canonicalize(h: Hypergraph) -> Hypergraph:
    """Sort every edge, drop duplicate edges and order edges lexicographically.

    Raises :class:`MalformedInputError` for an unsupported uniformity, a
    vertex outside ``[0, n)`` or an edge with a repeated vertex.
    """
    if h.k not in SUPPORTED_UNIFORMITIES:
        raise MalformedInputError(f"unsupported uniformity k={h.k}")
    if h.n < 0:
        raise MalformedInputError(f"negative vertex count {h.n}")
    if not h.edges:
        return Hypergraph(h.k, h.n, ())
    for e in h.edges:
        if len(e) != h.k:
            raise MalformedInputError(f"edge {e} does not have {h.k} vertices")
    arr = np.array(h.edges, dtype=np.int64)
    if arr.min() < 0 or arr.max() >= h.n:
        bad = next(e for e in h.edges if min(e) < 0 or max(e) >= h.n)
        raise MalformedInputError(f"edge {tuple(bad)} has a vertex outside [0, {h.n})")
    arr.sort(axis=1)
    repeated = (arr[:, 1:] == arr[:, :-1]).any(axis=1)
    if repeated.any():
        raise MalformedInputError(f"edge {tuple(arr[repeated.argmax()])} repeats a vertex")
    arr = np.unique(arr, axis=0)
    return Hypergraph(h.k, h.n, tuple(map(tuple, arr.tolist())))


def _pair_codes(h: Hypergraph) -> np.ndarray:
    arr = h.edge_array
    cols = [arr[:, a] * h.n + arr[:, b] for a, b in itertools.combinations(range(h.k), 2)]
    return np.concatenate(cols) if cols else np.empty(0, dtype=np.int64)


def is_linear(h: Hypergraph) -> bool:
    """True iff any two distinct edges share at most one vertex.

    Two edges share two vertices exactly when some vertex pair is covered
    twice, so the check reduces to uniqueness of covered pairs.
    """
    if h.m < 2:
        return True
    codes = _pair_codes(h)
    return np.unique(codes).size == codes.size


def covers_every_pair_once(h: Hypergraph) -> bool:
    """True iff every pair of distinct vertices lies in exactly one edge."""
    codes = _pair_codes(h)
    return codes.size == h.n * (h.n - 1) // 2 and np.unique(codes).size == codes.size


@dataclass(frozen=True)
class Palette:
    """A set of ordered color triples over colors ``0 .. color_count-1``."""

    color_count: int
    triples: frozenset[tuple[int, int, int]]
    name: str | None = None
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.color_count < 1:
            raise MalformedInputError("palette needs at least one color")
        seen: set[int] = set()
        for t in self.triples:
            if len(t) != 3 or any(not 0 <= c < self.color_count for c in t):
                raise MalformedInputError(f"palette triple {t} out of range")
            seen.update(t)
        # The empty palette is accepted as a degenerate case.
        if self.triples and len(seen) != self.color_count:
            missing = sorted(set(range(self.color_count)) - seen)
            raise MalformedInputError(f"colors {missing} appear in no triple")
        if self.labels is not None and len(self.labels) != self.color_count:
            raise MalformedInputError("one label per color required")

    def __contains__(self, triple: object) -> bool:
        return triple in self.triples

    def __len__(self) -> int:
        return len(self.triples)

    def label(self, color: int) -> str:
        return self.labels[color] if self.labels else str(color)

    @cached_property
    def sorted_triples(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(sorted(self.triples))

    @cached_property
    def lookup(self) -> np.ndarray:
        """Boolean table indexed by ``x*k*k + y*k + z``."""
        k = self.color_count
        table = np.zeros(k**3, dtype=bool)
        for x, y, z in self.triples:
            table[(x * k + y) * k + z] = True
        return table


# Color indices used by the built-in palettes.
ALPHA, BETA, GAMMA = 0, 1, 2
OMEGA, ALPHA1, BETA1, ALPHA2, GAMMA2, BETA3, GAMMA3 = range(7)

PHI0 = Palette(3, frozenset({(ALPHA, BETA, GAMMA)}), "phi0", ("alpha", "beta", "gamma"))
PHI3 = Palette(
    7,
    frozenset({(ALPHA1, BETA1, OMEGA), (ALPHA2, OMEGA, GAMMA2), (OMEGA, BETA3, GAMMA3)}),
    "phi3",
    ("omega", "alpha1", "beta1", "alpha2", "gamma2", "beta3", "gamma3"),
)
PHI8 = Palette(
    3,
    frozenset(itertools.product((BETA, GAMMA), (ALPHA, GAMMA), (ALPHA, BETA))),
    "phi8",
    ("alpha", "beta", "gamma"),
)

BUILTIN_PALETTES: dict[str, Palette] = {"phi0": PHI0, "phi3": PHI3, "phi8": PHI8}


def complete_palette(k: int) -> Palette:
    """The palette containing all ``k**3`` triples."""
    return Palette(k, frozenset(itertools.product(range(k), repeat=3)), f"all{k}")


@dataclass(frozen=True)
class ColoringCertificate:
    """A vertex ordering plus a color for every pair of distinct vertices.

    ``ordering[p]`` is the vertex placed at position ``p``; ``pair_colors``
    is keyed by ``(u, v)`` with ``u < v`` in original labels.
    """

    ordering: tuple[int, ...]
    pair_colors: Mapping[Pair, int]

    @property
    def n(self) -> int:
        return len(self.ordering)

    @cached_property
    def position(self) -> tuple[int, ...]:
        pos = [0] * self.n
        for p, v in enumerate(self.ordering):
            pos[v] = p
        return tuple(pos)

    def color(self, u: int, v: int) -> int:
        return self.pair_colors[pair(u, v)]

    def validate(self, n: int, palette: Palette | None = None) -> None:
        """Raise :class:`MalformedCertificateError` unless structurally sound."""
        if sorted(self.ordering) != list(range(n)):
            raise MalformedCertificateError("ordering is not a permutation of the vertices")
        expected = n * (n - 1) // 2
        if len(self.pair_colors) != expected:
            missing = next(
                (p for p in itertools.combinations(range(n), 2) if p not in self.pair_colors),
                None,
            )
            if missing is not None:
                raise MalformedCertificateError(f"pair {missing} has no color")
            raise MalformedCertificateError("certificate colors pairs outside the vertex set")
        for (u, v), c in self.pair_colors.items():
            if not 0 <= u < v < n:
                raise MalformedCertificateError(f"bad pair key {(u, v)}")
            if palette is not None and not 0 <= c < palette.color_count:
                raise MalformedCertificateError(
                    f"pair {(u, v)} has color {c} outside the palette's {palette.color_count}"
                )

    def restricted_to(self, vertices: Sequence[int]) -> ColoringCertificate:
        """Certificate induced on ``vertices`` after relabeling them to ``0..len-1``."""
        index = {v: t for t, v in enumerate(vertices)}
        ordering = tuple(index[v] for v in self.ordering if v in index)
        colors = {
            pair(index[u], index[v]): self.color(u, v)
            for u, v in itertools.combinations(vertices, 2)
        }
        return ColoringCertificate(ordering, colors)
