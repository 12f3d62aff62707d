"""Partitioned hypergraphs: triads, relative degrees, degree profiles,
index-selection searches, the Phi_3 skeleton pipeline and embeddings.

Parts ``V_ij`` are indexed by 1-based pairs ``i < j`` and all have ``s``
vertices ``0 .. s-1``. An edge of the ``(i, j, k)``-triad is stored as
``(a, b, c)`` with ``a`` in ``V_ij``, ``b`` in ``V_jk`` and ``c`` in
``V_ik``; these three positions are called slots 0, 1 and 2.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Literal, Mapping, Sequence

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
    as_fraction,
    pair,
)
from .csp import Constraint, Problem
from .errors import CapExceededError, MalformedInputError
from .rng import SeededRng

log = logging.getLogger(__name__)

Triad = tuple[int, int, int]
TriadEdge = tuple[int, int, int]

DEFAULT_EXHAUSTIVE_CAP = 12


@dataclass(frozen=True)
class PartitionedHypergraph:
    N: int
    s: int
    triads: Mapping[Triad, frozenset[TriadEdge]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.N < 0 or self.s < 1:
            raise MalformedInputError("need N >= 0 and part size s >= 1")
        for (i, j, k), edges in self.triads.items():
            if not 1 <= i < j < k <= self.N:
                raise MalformedInputError(f"bad triad {(i, j, k)} for N={self.N}")
            for e in edges:
                if len(e) != 3 or any(not 0 <= x < self.s for x in e):
                    raise MalformedInputError(f"triad {(i, j, k)} edge {e} outside [0, {self.s})")

    @classmethod
    def from_edges(cls, N: int, s: int, edges: Iterable[tuple[int, int, int, int, int, int]]) -> PartitionedHypergraph:
        """Build from ``(i, j, k, a, b, c)`` rows."""
        grouped: dict[Triad, set[TriadEdge]] = {}
        for i, j, k, a, b, c in edges:
            grouped.setdefault((i, j, k), set()).add((a, b, c))
        return cls(N, s, {t: frozenset(es) for t, es in grouped.items() if es})

    def triad(self, i: int, j: int, k: int) -> frozenset[TriadEdge]:
        if not 1 <= i < j < k <= self.N:
            raise MalformedInputError(f"bad triad {(i, j, k)} for N={self.N}")
        return self.triads.get((i, j, k), frozenset())

    def all_triads(self) -> Iterable[Triad]:
        return itertools.combinations(range(1, self.N + 1), 3)

    def edge_rows(self) -> list[tuple[int, int, int, int, int, int]]:
        """All edges as ``(i, j, k, a, b, c)`` in canonical order."""
        return [t + e for t in sorted(self.triads) for e in sorted(self.triads[t])]

    @property
    def edge_count(self) -> int:
        return sum(len(es) for es in self.triads.values())

    @cached_property
    def _degree_counts(self) -> dict[Triad, tuple[Counter, Counter, Counter]]:
        out = {}
        for t, edges in self.triads.items():
            out[t] = tuple(Counter(e[slot] for e in edges) for slot in range(3))
        return out

    def slot_degrees(self, triad: Triad, slot: int) -> Counter:
        """Edge counts per vertex of the part occupying ``slot`` of ``triad``."""
        counts = self._degree_counts.get(triad)
        return counts[slot] if counts else Counter()


def triad_slot(part: Pair, toward: int) -> tuple[Triad, int]:
    """The triad formed by ``part`` and index ``toward``, and the part's slot in it."""
    p, q = sorted(part)
    if toward in (p, q) or p == q:
        raise MalformedInputError(f"part {part} and index {toward} do not form a triad")
    i, j, k = sorted((p, q, toward))
    slot = {(i, j): 0, (j, k): 1, (i, k): 2}[(p, q)]
    return (i, j, k), slot


def triad_density(ph: PartitionedHypergraph, i: int, j: int, k: int) -> Fraction:
    return Fraction(len(ph.triad(i, j, k)), ph.s**3)


def min_density(ph: PartitionedHypergraph) -> Fraction:
    if ph.N < 3:
        raise MalformedInputError("minimum triad density needs N >= 3")
    return min(triad_density(ph, *t) for t in ph.all_triads())


def relative_degree(ph: PartitionedHypergraph, part: Pair, v: int, toward: int) -> Fraction:
    """Share of the ``s*s`` possible triad edges through ``v`` that are present.

    ``part=(i, j), toward=k`` is ``d_{ij->k}(v)`` whatever the order of
    ``i, j, k``.
    """
    triad, slot = triad_slot(part, toward)
    if not (1 <= triad[0] and triad[2] <= ph.N):
        raise MalformedInputError(f"triad {triad} outside 1..{ph.N}")
    if not 0 <= v < ph.s:
        raise MalformedInputError(f"vertex {v} outside [0, {ph.s})")
    return Fraction(ph.slot_degrees(triad, slot)[v], ph.s**2)


def significant_vertices(ph: PartitionedHypergraph, triad: Triad, slot: int, threshold: Fraction) -> frozenset[int]:
    """Vertices of the slot's part whose relative degree in the triad is at least ``threshold``."""
    need = threshold * ph.s**2
    if need <= 0:
        return frozenset(range(ph.s))
    return frozenset(v for v, cnt in ph.slot_degrees(triad, slot).items() if cnt >= need)


def degree_profile(
    ph: PartitionedHypergraph, eps, triads: Iterable[Triad] | None = None
) -> dict[Triad, tuple[Fraction, Fraction, Fraction]]:
    """Per triad, the fractions of each part's vertices that are ``eps``-significant."""
    eps = as_fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    out = {}
    for t in ph.all_triads() if triads is None else triads:
        out[t] = tuple(Fraction(len(significant_vertices(ph, t, slot, eps)), ph.s) for slot in range(3))
    return out


@dataclass(frozen=True)
class ProfileWindow:
    indices: tuple[int, ...]
    a: Fraction
    b: Fraction
    c: Fraction
    eps: Fraction


def _check_cap(size: int, cap: int | None) -> None:
    if cap is not None and size > cap:
        raise CapExceededError(f"exhaustive subset search over {size} indices exceeds cap {cap}")


def find_uniform_profile_subset(
    ph: PartitionedHypergraph,
    eps,
    target_size: int,
    mode: Literal["exhaustive", "greedy"] = "exhaustive",
    *,
    cap: int | None = DEFAULT_EXHAUSTIVE_CAP,
    indices: Sequence[int] | None = None,
    threshold=None,
) -> ProfileWindow | None:
    """Index set on which every triad's profile lies in one window of width ``eps``.

    Significance uses ``threshold`` (``eps`` by default). The window lower
    ends are the minima over the set's triads. Exhaustive mode returns the
    first qualifying ``target_size``-subset in lexicographic order; greedy
    mode grows a set in ascending index order as far as it will go and
    succeeds if it reaches ``target_size``.
    """
    eps = as_fraction(eps)
    threshold = eps if threshold is None else as_fraction(threshold)
    pool = list(range(1, ph.N + 1)) if indices is None else sorted(indices)
    profile = degree_profile(ph, threshold, itertools.combinations(pool, 3))

    def window(idx: Sequence[int]) -> tuple[Fraction, Fraction, Fraction] | None:
        rows = [profile[t] for t in itertools.combinations(idx, 3)]
        if not rows:
            return Fraction(0), Fraction(0), Fraction(0)
        lows = []
        for slot in range(3):
            vals = [r[slot] for r in rows]
            if max(vals) - min(vals) >= eps:
                return None
            lows.append(min(vals))
        return tuple(lows)

    if mode == "exhaustive":
        _check_cap(len(pool), cap)
        for idx in itertools.combinations(pool, target_size):
            w = window(idx)
            if w is not None:
                return ProfileWindow(idx, *w, eps)
        return None
    if mode != "greedy":
        raise ValueError(f"unknown mode {mode!r}")
    chosen: list[int] = []
    for t in pool:
        if window(chosen + [t]) is not None:
            chosen.append(t)
    if len(chosen) < target_size:
        return None
    return ProfileWindow(tuple(chosen), *window(chosen), eps)


# -- selector searches -------------------------------------------------------

Shape = Literal["ik", "ij", "jk", "first"]
SHAPES = ("ik", "ij", "jk", "first")


@dataclass(frozen=True)
class Selection:
    indices: tuple[int, ...]
    witnesses: dict[Pair, int]


def _quantifiers(shape: str, p: int, q: int, idx: Sequence[int]) -> list[tuple]:
    """Arguments of the W-sets a witness for part ``(p, q)`` must lie in."""
    if shape == "ij":
        return [(p, q, k) for k in idx if k > q]
    if shape == "jk":
        return [(i, p, q) for i in idx if i < p]
    if shape == "ik":
        return [(p, j, q) for j in idx if p < j < q]
    if shape == "first":
        before = [a for a in idx if a < p]
        between = [b for b in idx if p < b < q]
        after = [c for c in idx if c > q]
        return [(p, q, a, b, c) for a in before for b in between for c in after]
    raise ValueError(f"unknown selector shape {shape!r}")


def selector_search(
    ph: PartitionedHypergraph,
    shape: Shape,
    family: Callable[..., Iterable[int]],
    target_size: int,
    mode: Literal["exhaustive", "greedy"] = "greedy",
    *,
    cap: int | None = DEFAULT_EXHAUSTIVE_CAP,
    indices: Sequence[int] | None = None,
    choose: Callable[[Pair, frozenset[int], tuple[int, ...]], int] | None = None,
) -> Selection | None:
    """Find indices and one witness vertex per part meeting every W-set.

    ``family`` gives the W-sets: ``family(i, j, k)`` for shapes ``ij``
    (a subset of ``V_ij``, needed for every ``k > j``), ``jk`` (subset of
    ``V_jk``, every ``i < j``) and ``ik`` (subset of ``V_ik``, every
    ``i < j < k``); ``family(i, j, a, b, c)`` for shape ``first`` (subset of
    ``V_ij``, every ``a < i < b < j < c``). A witness is drawn from the
    intersection of its W-sets (the whole part when none apply), by ``choose``
    or else as the smallest vertex.

    Exhaustive mode returns the first ``target_size``-subset that works;
    greedy mode grows a maximal set in ascending order and succeeds if it
    reaches ``target_size``.
    """
    if shape not in SHAPES:
        raise ValueError(f"unknown selector shape {shape!r}")
    pool = list(range(1, ph.N + 1)) if indices is None else sorted(indices)
    everything = frozenset(range(ph.s))
    cache: dict[tuple, frozenset[int]] = {}

    def wset(args: tuple) -> frozenset[int]:
        if args not in cache:
            cache[args] = frozenset(family(*args))
        return cache[args]

    def candidates(p: int, q: int, idx: Sequence[int]) -> frozenset[int]:
        out = everything
        for args in _quantifiers(shape, p, q, idx):
            out = out & wset(args)
            if not out:
                break
        return out

    def feasible(idx: Sequence[int]) -> bool:
        return all(candidates(p, q, idx) for p, q in itertools.combinations(idx, 2))

    def finish(idx: Sequence[int]) -> Selection:
        idx = tuple(idx)
        witnesses = {}
        for p, q in itertools.combinations(idx, 2):
            cand = candidates(p, q, idx)
            witnesses[(p, q)] = choose((p, q), cand, idx) if choose else min(cand)
        return Selection(idx, witnesses)

    if mode == "exhaustive":
        _check_cap(len(pool), cap)
        for idx in itertools.combinations(pool, target_size):
            if feasible(idx):
                return finish(idx)
        return None
    if mode != "greedy":
        raise ValueError(f"unknown mode {mode!r}")
    chosen: list[int] = []
    for t in pool:
        trial = chosen + [t]
        if all(candidates(p, q, trial) for p, q in itertools.combinations(trial, 2)):
            chosen = trial
    if len(chosen) < target_size:
        return None
    return finish(chosen)


# -- hosts -------------------------------------------------------------------


def _from_part_colors(palette: Palette, N: int, s: int, colors: Mapping[Pair, Sequence[int]]) -> PartitionedHypergraph:
    by_color: dict[Pair, dict[int, list[int]]] = {}
    for part, cols in colors.items():
        groups: dict[int, list[int]] = {}
        for v, c in enumerate(cols):
            groups.setdefault(c, []).append(v)
        by_color[part] = groups
    triads = {}
    for i, j, k in itertools.combinations(range(1, N + 1), 3):
        gij, gjk, gik = by_color[(i, j)], by_color[(j, k)], by_color[(i, k)]
        edges = set()
        for x, y, z in palette.triples:
            edges.update(itertools.product(gij.get(x, ()), gjk.get(y, ()), gik.get(z, ())))
        if edges:
            triads[(i, j, k)] = frozenset(edges)
    return PartitionedHypergraph(N, s, triads)


def random_partitioned_from_palette(palette: Palette, N: int, s: int, rng: SeededRng) -> PartitionedHypergraph:
    """Color part vertices uniformly; keep triad edges whose colors fit the palette.

    Colors are drawn part by part (parts in lexicographic order), vertices
    ascending, one ``rng.below(k)`` each.
    """
    if N < 3 or s < 1:
        raise ValueError("need N >= 3 and s >= 1")
    colors = {
        part: [rng.below(palette.color_count) for _ in range(s)]
        for part in itertools.combinations(range(1, N + 1), 2)
    }
    return _from_part_colors(palette, N, s, colors)


def palette_role_host(palette: Palette, N: int) -> PartitionedHypergraph:
    """Host with one vertex per color in every part (vertex ``c`` has color ``c``)."""
    k = palette.color_count
    colors = {part: list(range(k)) for part in itertools.combinations(range(1, N + 1), 2)}
    return _from_part_colors(palette, N, k, colors)


# -- skeleton extraction -----------------------------------------------------

ROLE_NAMES = {
    OMEGA: "omega",
    ALPHA1: "alpha1",
    BETA1: "beta1",
    ALPHA2: "alpha2",
    GAMMA2: "gamma2",
    BETA3: "beta3",
    GAMMA3: "gamma3",
}
STAGES = ("profile", "omega", "alpha1", "beta1", "alpha2", "gamma2", "beta3", "gamma3")


@dataclass(frozen=True)
class Skeleton:
    indices: tuple[int, ...]
    roles: dict[str, dict[Pair, int]]

    def vertex(self, role: str, i: int, j: int) -> int:
        return self.roles[role][(i, j)]


@dataclass(frozen=True)
class SkeletonResult:
    success: bool
    stage: str
    skeleton: Skeleton | None = None
    window: ProfileWindow | None = None
    eps: Fraction = Fraction(0)
    trail: tuple[tuple[str, int], ...] = ()

    @property
    def surplus(self) -> Fraction | None:
        """``a + b + c - (2 + 3 eps)`` of the profile window, when one was found."""
        if self.window is None:
            return None
        w = self.window
        return w.a + w.b + w.c - 2 - 3 * self.eps


def skeleton_patterns(skeleton: Skeleton) -> Iterable[tuple[Triad, TriadEdge]]:
    """The three required triad edges for every ``i < j < k`` of the skeleton."""
    r = skeleton.roles
    for i, j, k in itertools.combinations(skeleton.indices, 3):
        yield (i, j, k), (r["alpha1"][(i, j)], r["beta1"][(j, k)], r["omega"][(i, k)])
        yield (i, j, k), (r["alpha2"][(i, j)], r["omega"][(j, k)], r["gamma2"][(i, k)])
        yield (i, j, k), (r["omega"][(i, j)], r["beta3"][(j, k)], r["gamma3"][(i, k)])


def skeleton_holds(ph: PartitionedHypergraph, skeleton: Skeleton) -> bool:
    return all(edge in ph.triad(*t) for t, edge in skeleton_patterns(skeleton))


def extract_phi3_skeleton(
    ph: PartitionedHypergraph,
    delta,
    target_size: int = 3,
    *,
    profile_mode: Literal["exhaustive", "greedy"] = "greedy",
    cap: int | None = DEFAULT_EXHAUSTIVE_CAP,
) -> SkeletonResult:
    """Pick omega, alpha/beta/gamma vertices realizing the three Phi_3 shapes.

    Runs with ``eps = delta / 20``: a degree-profile window (threshold and
    width ``2 eps``), then omega vertices significant in every direction,
    then the pairs (alpha1, beta1), (alpha2, gamma2), (beta3, gamma3), each
    stage narrowing the index set with a greedy selector. A window whose
    lower ends include a zero fails at the profile stage. The returned
    ``trail`` records the index-set size after each stage.
    """
    if ph.N < 3:
        raise MalformedInputError("skeleton extraction needs N >= 3")
    eps = as_fraction(delta) / 20
    two_eps = 2 * eps
    s = ph.s
    trail: list[tuple[str, int]] = []

    def fail(stage: str, window=None) -> SkeletonResult:
        log.info("skeleton extraction failed at stage %s", stage)
        return SkeletonResult(False, stage, window=window, eps=eps, trail=tuple(trail))

    window = find_uniform_profile_subset(
        ph, two_eps, target_size, profile_mode, cap=cap, threshold=two_eps
    )
    if window is None or min(window.a, window.b, window.c) == 0:
        return fail("profile", window)
    idx = window.indices
    trail.append(("profile", len(idx)))

    sig_cache: dict[tuple[Pair, int], frozenset[int]] = {}

    def significant(part: Pair, toward: int) -> frozenset[int]:
        key = (part, toward)
        if key not in sig_cache:
            sig_cache[key] = significant_vertices(ph, *triad_slot(part, toward), two_eps)
        return sig_cache[key]

    def omega_sets(i, j, a, b, c):
        return significant((i, j), c) & significant((i, j), a) & significant((i, j), b)

    def prefer_everywhere(part: Pair, cand: frozenset[int], chosen: tuple[int, ...]) -> int:
        good = [v for v in sorted(cand) if all(v in significant(part, k) for k in chosen if k not in part)]
        return good[0] if good else min(cand)

    roles: dict[str, dict[Pair, int]] = {}

    def stage(name: str, shape: str, family, choose=None) -> bool:
        nonlocal idx
        sel = selector_search(ph, shape, family, target_size, "greedy", indices=idx, choose=choose)
        if sel is None:
            return False
        idx = sel.indices
        roles[name] = sel.witnesses
        trail.append((name, len(idx)))
        return True

    def with_count(triad: Triad, fixed: dict[int, int], free_slot: int) -> Counter:
        return Counter(
            e[free_slot] for e in ph.triad(*triad) if all(e[sl] == v for sl, v in fixed.items())
        )

    need = eps * s

    def alpha1_sets(i, j, k):
        cnt = with_count((i, j, k), {2: roles["omega"][(i, k)]}, 0)
        return [v for v, c in cnt.items() if c >= need]

    def beta1_sets(i, j, k):
        return with_count((i, j, k), {0: roles["alpha1"][(i, j)], 2: roles["omega"][(i, k)]}, 1)

    def alpha2_sets(i, j, k):
        cnt = with_count((i, j, k), {1: roles["omega"][(j, k)]}, 0)
        return [v for v, c in cnt.items() if c >= need]

    def gamma2_sets(i, j, k):
        return with_count((i, j, k), {0: roles["alpha2"][(i, j)], 1: roles["omega"][(j, k)]}, 2)

    def beta3_sets(i, j, k):
        cnt = with_count((i, j, k), {0: roles["omega"][(i, j)]}, 1)
        return [v for v, c in cnt.items() if c >= need]

    def gamma3_sets(i, j, k):
        return with_count((i, j, k), {0: roles["omega"][(i, j)], 1: roles["beta3"][(j, k)]}, 2)

    plan = [
        ("omega", "first", omega_sets, prefer_everywhere),
        ("alpha1", "ij", alpha1_sets, None),
        ("beta1", "jk", beta1_sets, None),
        ("alpha2", "ij", alpha2_sets, None),
        ("gamma2", "ik", gamma2_sets, None),
        ("beta3", "jk", beta3_sets, None),
        ("gamma3", "ik", gamma3_sets, None),
    ]
    for name, shape, family, choose in plan:
        if not stage(name, shape, family, choose):
            return fail(name, window)

    final = {
        role: {p: w for p, w in table.items() if p[0] in idx and p[1] in idx}
        for role, table in roles.items()
    }
    skeleton = Skeleton(tuple(idx), final)
    if not skeleton_holds(ph, skeleton):
        return fail("verify", window)
    return SkeletonResult(True, "done", skeleton, window, eps, tuple(trail))


# -- embeddings --------------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    """Guest vertex ``v`` goes to index ``indices[v]``; pair ``(u, v)``,
    ``u < v``, to vertex ``witnesses[(u, v)]`` of part ``V_{a_u a_v}``."""

    indices: tuple[int, ...]
    witnesses: dict[Pair, int]


def _edge_image(edge, indices: Sequence[int], witnesses: Mapping[Pair, int]) -> tuple[Triad, TriadEdge]:
    x, y, z = sorted(edge, key=lambda v: indices[v])
    triad = (indices[x], indices[y], indices[z])
    return triad, (witnesses[pair(x, y)], witnesses[pair(y, z)], witnesses[pair(x, z)])


def verify_embedding(ph: PartitionedHypergraph, guest: Hypergraph, emb: Embedding) -> bool:
    """Recheck the definition: distinct indices, in-range witnesses, every guest edge lands on a triad edge."""
    if len(emb.indices) != guest.n or len(set(emb.indices)) != guest.n:
        return False
    if any(not 1 <= a <= ph.N for a in emb.indices):
        return False
    for u, v in itertools.combinations(range(guest.n), 2):
        w = emb.witnesses.get((u, v))
        if w is None or not 0 <= w < ph.s:
            return False
    for e in guest.edges:
        triad, image = _edge_image(e, emb.indices, emb.witnesses)
        if image not in ph.triad(*triad):
            return False
    return True


def embed_search(ph: PartitionedHypergraph, guest: Hypergraph) -> Embedding | None:
    """Backtracking embedding search.

    Index sets ``a_1 < ... < a_n`` are enumerated lexicographically and, for
    each, guest vertex orderings lexicographically; the witness vertices are
    then found by constraint search with arc consistency.
    """
    if guest.k != 3:
        raise MalformedInputError("guest must be 3-uniform")
    n = guest.n
    if n > ph.N:
        return None
    full = (1 << ph.s) - 1
    sorted_triads = {t: sorted(es) for t, es in ph.triads.items()}
    for combo in itertools.combinations(range(1, ph.N + 1), n):
        for order in itertools.permutations(range(n)):
            indices = [0] * n
            for p, v in enumerate(order):
                indices[v] = combo[p]
            problem = Problem({})
            ok = True
            for e in guest.edges:
                x, y, z = sorted(e, key=indices.__getitem__)
                triad = (indices[x], indices[y], indices[z])
                allowed = sorted_triads.get(triad)
                if not allowed:
                    ok = False
                    break
                scope = (pair(x, y), pair(y, z), pair(x, z))
                for p in scope:
                    problem.domains[p] = full
                problem.add(Constraint(scope, allowed, tag=e))
            if not ok:
                continue
            found = problem.solve()
            if found is None:
                continue
            witnesses = {p: found.get(p, 0) for p in itertools.combinations(range(n), 2)}
            return Embedding(tuple(indices), witnesses)
    return None



def embed_from_skeleton(skeleton: Skeleton, guest: Hypergraph, cert: ColoringCertificate) -> Embedding:
    """Embed a Phi_3-colored guest using the skeleton's role vertices.

    The guest vertex at position ``p`` of the certificate ordering goes to
    the ``p``-th smallest skeleton index, and pair ``(u, v)`` to the skeleton
    vertex whose role is the pair's color.
    """
    if guest.n > len(skeleton.indices):
        raise MalformedInputError("skeleton has fewer indices than the guest has vertices")
    indices = [0] * guest.n
    for p, v in enumerate(cert.ordering):
        indices[v] = skeleton.indices[p]
    witnesses = {}
    for u, v in itertools.combinations(range(guest.n), 2):
        a, b = sorted((indices[u], indices[v]))
        witnesses[(u, v)] = skeleton.vertex(ROLE_NAMES[cert.color(u, v)], a, b)
    return Embedding(tuple(indices), witnesses)
