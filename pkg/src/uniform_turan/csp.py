"""Small finite-domain solver for ternary table constraints.

Domains are int bitmasks over value indices. Propagation is generalized arc
consistency: each constraint keeps only the allowed tuples whose components
are all still in their domains, and every variable's domain is cut down to
what those surviving tuples project onto. Used both for pair colorings
(values = palette colors) and for embedding witnesses (values = part vertices).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

Var = Hashable
Value = tuple[int, int, int]


@dataclass(frozen=True)
class Constraint:
    scope: tuple[Var, Var, Var]
    allowed: Sequence[Value]
    tag: object = None


@dataclass(frozen=True)
class Wipeout:
    """A variable whose domain became empty.

    ``supports`` lists, for every constraint on the variable, the values that
    constraint still admits for it given the other variables' domains.
    """

    var: Var
    supports: tuple[tuple[Constraint, int], ...]


def mask_values(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def _projection(con: Constraint, domains: dict, slot: int) -> int:
    x, y, z = con.scope
    dx, dy, dz = domains[x], domains[y], domains[z]
    masks = [dx, dy, dz]
    masks[slot] = -1
    mx, my, mz = masks
    out = 0
    for t in con.allowed:
        if (mx >> t[0]) & 1 and (my >> t[1]) & 1 and (mz >> t[2]) & 1:
            out |= 1 << t[slot]
    return out


@dataclass
class Problem:
    """Variables with bitmask domains plus ternary table constraints."""

    domains: dict[Var, int]
    constraints: list[Constraint] = field(default_factory=list)
    watch: dict[Var, list[int]] = field(default_factory=dict)

    def add(self, con: Constraint) -> int:
        idx = len(self.constraints)
        self.constraints.append(con)
        for v in con.scope:
            self.watch.setdefault(v, []).append(idx)
        return idx

    def pop(self) -> None:
        """Remove the most recently added constraint."""
        idx = len(self.constraints) - 1
        for v in self.constraints.pop().scope:
            self.watch[v].remove(idx)

    def wipeout(self, var: Var, domains: dict[Var, int]) -> Wipeout:
        supports = []
        for idx in self.watch.get(var, ()):
            con = self.constraints[idx]
            supports.append((con, _projection(con, domains, con.scope.index(var))))
        return Wipeout(var, tuple(supports))

    def propagate(self, domains: dict[Var, int], pending: Iterable[int] | None = None) -> Wipeout | None:
        """Shrink ``domains`` in place to the GAC fixpoint.

        Only constraints in ``pending`` (all of them when ``None``) are revised
        first; changes re-queue the constraints watching the changed variable.
        """
        order = list(range(len(self.constraints))) if pending is None else list(pending)
        queue = deque(order)
        queued = set(order)
        while queue:
            idx = queue.popleft()
            queued.discard(idx)
            con = self.constraints[idx]
            x, y, z = con.scope
            dx, dy, dz = domains[x], domains[y], domains[z]
            nx = ny = nz = 0
            for a, b, c in con.allowed:
                if (dx >> a) & 1 and (dy >> b) & 1 and (dz >> c) & 1:
                    nx |= 1 << a
                    ny |= 1 << b
                    nz |= 1 << c
            for var, old, new in ((x, dx, nx), (y, dy, ny), (z, dz, nz)):
                if new == old:
                    continue
                if new == 0:
                    return self.wipeout(var, domains)
                domains[var] = new
                for other in self.watch[var]:
                    if other != idx and other not in queued:
                        queue.append(other)
                        queued.add(other)
        return None

    def solve(
        self,
        domains: dict[Var, int] | None = None,
        order_key=None,
        budget: list[int] | None = None,
    ) -> dict[Var, int] | None:
        """Backtracking search with GAC after every assignment.

        Branches on the undecided variable with the fewest remaining values,
        ties broken by ``order_key`` (the variable itself by default); values
        are tried in ascending order. ``budget`` is a one-element list of
        remaining search nodes, decremented in place; exhausting it raises
        :class:`BudgetExhausted`.
        """
        doms = dict(self.domains if domains is None else domains)
        if self.propagate(doms) is not None:
            return None
        key = order_key or (lambda v: v)
        return self._search(doms, key, budget)

    def _search(self, doms, key, budget):
        if budget is not None:
            if budget[0] <= 0:
                raise BudgetExhausted
            budget[0] -= 1
        best = None
        best_rank = None
        for var, dom in doms.items():
            if dom & (dom - 1):
                rank = (dom.bit_count(), key(var))
                if best_rank is None or rank < best_rank:
                    best, best_rank = var, rank
        if best is None:
            return {var: dom.bit_length() - 1 for var, dom in doms.items()}
        for value in mask_values(doms[best]):
            trial = dict(doms)
            trial[best] = 1 << value
            if self.propagate(trial, self.watch.get(best, ())) is None:
                found = self._search(trial, key, budget)
                if found is not None:
                    return found
        return None


class BudgetExhausted(Exception):
    """Raised inside a search when its node budget runs out."""
