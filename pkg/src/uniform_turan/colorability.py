"""Deciding whether a 3-uniform hypergraph is colorable by a palette.

A hypergraph is colorable by a palette when some vertex ordering and some
coloring of vertex pairs put every edge's ordered pair-color triple
``(c_ij, c_jk, c_ik)`` (positions ``i < j < k``) inside the palette.

For a fixed ordering this is a constraint problem over pair colors. The
exhaustive search enumerates orderings vertex by vertex; an edge's triple
becomes fully determined as soon as two of its vertices are placed (the third
necessarily comes later), so infeasible prefixes are cut early.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from typing import Literal, Sequence

from .core import ColoringCertificate, Edge, Hypergraph, Palette, Pair, pair
from .csp import BudgetExhausted, Constraint, Problem, mask_values
from .errors import CapExceededError, MalformedInputError
from .rng import SeededRng

log = logging.getLogger(__name__)

DEFAULT_EXHAUSTIVE_CAP = 10
DEFAULT_HEURISTIC_BUDGET = 1000


@dataclass(frozen=True)
class PositionProfile:
    first: frozenset[int]
    second: frozenset[int]
    third: frozenset[int]
    is_product: bool

    @property
    def product_size(self) -> int:
        return len(self.first) * len(self.second) * len(self.third)


def position_profile(palette: Palette) -> PositionProfile:
    xs = frozenset(t[0] for t in palette.triples)
    ys = frozenset(t[1] for t in palette.triples)
    zs = frozenset(t[2] for t in palette.triples)
    return PositionProfile(xs, ys, zs, len(xs) * len(ys) * len(zs) == len(palette.triples))


@dataclass(frozen=True)
class InfeasibilityWitness:
    """A pair with no color left, and what each of its edges still allowed."""

    pair: Pair
    edges: tuple[Edge, ...]
    domains: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class FixedOrderingResult:
    feasible: bool
    certificate: ColoringCertificate | None = None
    witness: InfeasibilityWitness | None = None


def _check_ordering(ordering: Sequence[int], n: int) -> tuple[int, ...]:
    ordering = tuple(ordering)
    if sorted(ordering) != list(range(n)):
        raise MalformedInputError(f"ordering {ordering} is not a permutation of range({n})")
    return ordering


def _edge_scope(edge: Edge, position: Sequence[int]) -> tuple[Pair, Pair, Pair]:
    x, y, z = sorted(edge, key=position.__getitem__)
    return pair(x, y), pair(y, z), pair(x, z)


def _full_mask(palette: Palette) -> int:
    return (1 << palette.color_count) - 1


def _certificate(n: int, ordering: Sequence[int], colors: dict[Pair, int]) -> ColoringCertificate:
    full = {p: colors.get(p, 0) for p in itertools.combinations(range(n), 2)}
    return ColoringCertificate(tuple(ordering), full)


def check_fixed_ordering(h: Hypergraph, palette: Palette, ordering: Sequence[int]) -> FixedOrderingResult:
    """Try to color pairs so that every edge fits the palette under ``ordering``.

    On failure during propagation the result carries the pair whose domain
    emptied together with, per edge through that pair, the colors that edge
    alone still permits there. When propagation is consistent but the
    backtracking search still fails, no witness is attached.
    """
    ordering = _check_ordering(ordering, h.n)
    position = [0] * h.n
    for p, v in enumerate(ordering):
        position[v] = p

    allowed = palette.sorted_triples
    full = _full_mask(palette)
    problem = Problem({})
    for e in h.edges:
        scope = _edge_scope(e, position)
        for p in scope:
            problem.domains[p] = full
        problem.add(Constraint(scope, allowed, tag=e))

    domains = dict(problem.domains)
    wipe = problem.propagate(domains)
    if wipe is not None:
        witness = InfeasibilityWitness(
            wipe.var,
            tuple(con.tag for con, _ in wipe.supports),
            tuple(frozenset(mask_values(mask)) for _, mask in wipe.supports),
        )
        return FixedOrderingResult(False, witness=witness)
    colors = problem.solve(domains)
    if colors is None:
        return FixedOrderingResult(False)
    return FixedOrderingResult(True, certificate=_certificate(h.n, ordering, colors))


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    violating_edge: Edge | None = None

    def __bool__(self) -> bool:
        return self.ok


def edge_triple(edge: Edge, cert: ColoringCertificate) -> tuple[int, int, int]:
    """The ordered color triple ``(c_ij, c_jk, c_ik)`` an edge reads under ``cert``."""
    x, y, z = sorted(edge, key=cert.position.__getitem__)
    return cert.color(x, y), cert.color(y, z), cert.color(x, z)


def verify_certificate(h: Hypergraph, palette: Palette, cert: ColoringCertificate) -> VerifyResult:
    cert.validate(h.n, palette)
    for e in h.edges:
        if edge_triple(e, cert) not in palette.triples:
            return VerifyResult(False, e)
    return VerifyResult(True)


# -- exhaustive ordering search ---------------------------------------------


def connected_components(h: Hypergraph) -> list[list[int]]:
    """Vertex sets of the connected components, each sorted, ordered by minimum."""
    parent = list(range(h.n))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in h.edges:
        root = find(e[0])
        for v in e[1:]:
            other = find(v)
            if other != root:
                parent[other] = root
    groups: dict[int, list[int]] = {}
    for v in range(h.n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def twin_predecessors(vertices: Sequence[int], edges: Sequence[Edge]) -> dict[int, tuple[int, ...]]:
    """For each vertex, the smaller vertices it may be swapped with.

    Swapping two vertices whose transposition preserves the edge set maps
    colorable orderings to colorable orderings, so the search only needs
    orderings listing every such twin class in ascending label order.
    """
    edge_set = set(edges)
    incident: dict[int, list[Edge]] = {v: [] for v in vertices}
    for e in edges:
        for v in e:
            incident[v].append(e)
    before: dict[int, list[int]] = {v: [] for v in vertices}
    for u, v in itertools.combinations(vertices, 2):
        if len(incident[u]) != len(incident[v]):
            continue
        swap = {u: v, v: u}
        if all(
            tuple(sorted(swap.get(x, x) for x in e)) in edge_set
            for e in incident[u]
        ):
            before[v].append(u)
    return {v: tuple(us) for v, us in before.items()}


class _ComponentSearch:
    """Depth-first search over orderings of one connected component."""

    def __init__(self, vertices: Sequence[int], edges: Sequence[Edge], palette: Palette, budget: int | None):
        self.vertices = list(vertices)
        self.edges = list(edges)
        self.palette = palette
        self.allowed = palette.sorted_triples
        self.budget = None if budget is None else [budget]
        self.nodes = 0
        self.before = twin_predecessors(self.vertices, self.edges)
        self.incident: dict[int, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            for v in e:
                self.incident[v].append(e)
        self.problem = Problem({})
        full = _full_mask(palette)
        for e in self.edges:
            for p in itertools.combinations(e, 2):
                self.problem.domains[p] = full

    def _tick(self) -> None:
        self.nodes += 1
        if self.budget is not None:
            if self.budget[0] <= 0:
                raise BudgetExhausted
            self.budget[0] -= 1

    def candidates(self, placed: dict[int, int]) -> list[int]:
        return [
            v
            for v in self.vertices
            if v not in placed and all(u in placed for u in self.before[v])
        ]

    def run(self, first: Sequence[int] = ()) -> tuple[list[int], dict[Pair, int]] | None:
        """Search orderings starting with ``first``; return (ordering, colors)."""
        placed: dict[int, int] = {}
        prefix: list[int] = []
        domains = dict(self.problem.domains)
        added = 0
        for v in first:
            self._tick()
            added_here = self._place(v, placed, prefix)
            added += added_here
            if self.problem.propagate(domains, range(len(self.problem.constraints) - added_here, len(self.problem.constraints))) is not None:
                for _ in range(added):
                    self.problem.pop()
                return None
        try:
            return self._dfs(placed, prefix, domains)
        finally:
            for _ in range(added):
                self.problem.pop()

    def _place(self, v: int, placed: dict[int, int], prefix: list[int]) -> int:
        """Append ``v`` and add the constraints of edges it determines."""
        count = 0
        for e in self.incident[v]:
            others = [u for u in e if u != v]
            done = [u for u in others if u in placed]
            if len(done) == 1:
                x = done[0]
                w = others[0] if others[1] == x else others[1]
                self.problem.add(Constraint((pair(x, v), pair(v, w), pair(x, w)), self.allowed, tag=e))
                count += 1
        placed[v] = len(prefix)
        prefix.append(v)
        return count

    def _unplace(self, v: int, count: int, placed: dict[int, int], prefix: list[int]) -> None:
        for _ in range(count):
            self.problem.pop()
        del placed[v]
        prefix.pop()

    def _dfs(self, placed, prefix, domains):
        if len(prefix) == len(self.vertices):
            colors = self.problem.solve(domains, budget=self.budget)
            return None if colors is None else (list(prefix), colors)
        for v in self.candidates(placed):
            self._tick()
            total = len(self.problem.constraints)
            count = self._place(v, placed, prefix)
            child = dict(domains)
            found = None
            if self.problem.propagate(child, range(total, total + count)) is None:
                found = self._dfs(placed, prefix, child)
            self._unplace(v, count, placed, prefix)
            if found is not None:
                return found
        return None


def _run_branch(args):
    vertices, edges, palette, first, budget = args
    search = _ComponentSearch(vertices, edges, palette, budget)
    try:
        return "done", search.run(first), search.nodes
    except BudgetExhausted:
        return "budget", None, search.nodes


@dataclass(frozen=True)
class SearchResult:
    status: Literal["colorable", "not_colorable", "unknown"]
    certificate: ColoringCertificate | None = None
    nodes: int = 0
    details: dict = field(default_factory=dict)

    @property
    def colorable(self) -> bool | None:
        return {"colorable": True, "not_colorable": False}.get(self.status)


def _search_component_parallel(vertices, edges, palette, budget, threads, deterministic):
    search = _ComponentSearch(vertices, edges, palette, None)
    firsts = search.candidates({})
    jobs = [(vertices, edges, palette, (v,), budget) for v in firsts]
    outcomes: list = [None] * len(jobs)
    nodes = 0
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = {pool.submit(_run_branch, job): t for t, job in enumerate(jobs)}
        pending = set(futures)
        while pending:
            finished, pending = wait(pending, return_when=FIRST_COMPLETED)
            for fut in finished:
                outcomes[futures[fut]] = fut.result()
                nodes += outcomes[futures[fut]][2]
            if deterministic:
                for outcome in outcomes:
                    if outcome is None or outcome[0] == "budget":
                        break
                    if outcome[1] is not None:
                        for fut in pending:
                            fut.cancel()
                        return "done", outcome[1], nodes
            else:
                for outcome in outcomes:
                    if outcome is not None and outcome[1] is not None:
                        for fut in pending:
                            fut.cancel()
                        return "done", outcome[1], nodes
    if any(o[0] == "budget" for o in outcomes):
        return "budget", None, nodes
    return "done", None, nodes


def search_colorable(
    h: Hypergraph,
    palette: Palette,
    mode: Literal["exhaustive", "heuristic"] = "exhaustive",
    budget: int | None = None,
    *,
    cap: int | None = DEFAULT_EXHAUSTIVE_CAP,
    seed: int = 0,
    threads: int = 1,
    deterministic: bool = True,
) -> SearchResult:
    """Decide colorability of ``h`` by ``palette``.

    Exhaustive mode answers ``colorable`` or ``not_colorable`` unless the
    node ``budget`` runs out (``unknown``). Components are searched
    independently and their orderings concatenated, since pairs across
    components carry no constraint. Heuristic mode tries ``budget`` seeded
    random orderings and answers ``colorable`` or ``unknown``.

    Raises :class:`CapExceededError` in exhaustive mode when ``h.n > cap``.
    """
    if h.k != 3:
        raise MalformedInputError("colorability is defined for 3-uniform hypergraphs")
    if mode == "heuristic":
        return _heuristic(h, palette, DEFAULT_HEURISTIC_BUDGET if budget is None else budget, seed)
    if mode != "exhaustive":
        raise ValueError(f"unknown search mode {mode!r}")
    if cap is not None and h.n > cap:
        raise CapExceededError(f"exhaustive search refused: n={h.n} exceeds cap {cap}")

    ordering: list[int] = []
    colors: dict[Pair, int] = {}
    nodes = 0
    remaining = budget
    for comp in connected_components(h):
        comp_set = set(comp)
        edges = [e for e in h.edges if e[0] in comp_set]
        if not edges:
            ordering.extend(comp)
            continue
        if threads > 1:
            status, found, used = _search_component_parallel(comp, edges, palette, remaining, threads, deterministic)
        else:
            status, found, used = _run_branch((comp, edges, palette, (), remaining))
        nodes += used
        if remaining is not None:
            remaining = max(remaining - used, 0)
        if status == "budget":
            return SearchResult("unknown", nodes=nodes, details={"reason": "budget_exhausted"})
        if found is None:
            log.info("component %s is not colorable", comp)
            return SearchResult("not_colorable", nodes=nodes, details={"component": comp})
        comp_order, comp_colors = found
        ordering.extend(comp_order)
        colors.update(comp_colors)
    return SearchResult("colorable", _certificate(h.n, ordering, colors), nodes)


def _heuristic(h: Hypergraph, palette: Palette, attempts: int, seed: int) -> SearchResult:
    rng = SeededRng(seed)
    for attempt in range(attempts):
        ordering = rng.permutation(h.n)
        result = check_fixed_ordering(h, palette, ordering)
        if result.feasible:
            return SearchResult("colorable", result.certificate, attempt + 1)
    return SearchResult("unknown", nodes=attempts, details={"reason": "budget_exhausted"})
