"""Exhaustive branch-and-bound search for an optimal lp-norm multiway cut.

Non-terminals are assigned in increasing vertex order and parts are tried in
increasing index order, so the search visits complete assignments in
lexicographic order. The incumbent is only replaced by a strictly better
assignment, which makes the first optimum found the lexicographically
smallest one.

The bound used for pruning is admissible for every p >= 1. Let ``c`` be the
per-part cut restricted to edges whose endpoints are both assigned. For an
unassigned vertex u, assigning it to part j adds its edge weight towards
assigned vertices of other parts to those parts and to part j. Because
``x -> x**p`` is convex, the increase of ``sum(c**p)`` caused by several
vertices together is at least the sum of the increases each would cause on
its own, so ``sum(c**p) + sum_u min_j delta_u(j)`` never exceeds the value
of any completion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Instance, MultiwayCut, lp_objective
from .errors import BudgetExceeded

DEFAULT_BUDGET = 2**27

# Relative tie tolerance on the p-th power sum. Gadget instances separate
# YES from NO by ~1e-11 relative, well below the 1e-9 used for comparisons
# elsewhere, so the oracle needs a tighter one.
TIE_TOL = 1e-13


@dataclass(frozen=True)
class ExactReport:
    optimum: MultiwayCut
    objective: float
    power_sum: float
    states_explored: int


def state_count(inst: Instance) -> int:
    return inst.k ** (inst.n - inst.k)


def solve_exact(inst: Instance, budget: int = DEFAULT_BUDGET,
                upper_bound: float | None = None) -> ExactReport:
    """Globally optimal multiway cut by enumeration with pruning.

    ``upper_bound`` optionally seeds the search with a known objective value
    (e.g. from a heuristic); it only speeds up pruning and never changes the
    returned optimum.

    Raises:
        BudgetExceeded: if ``k ** (n - k)`` exceeds ``budget``.
    """
    k, n, p = inst.k, inst.n, inst.p
    states = state_count(inst)
    if states > budget:
        raise BudgetExceeded(f"{k}^{n - k} = {states} states exceeds budget {budget}")
    search = _Search(inst)
    if upper_bound is None:
        upper_bound = _seed_bound(inst)
    assignment, value = search.run(search.to_internal(upper_bound))
    cut = MultiwayCut(tuple(assignment))
    objective = lp_objective(inst, cut)
    power_sum = value if not math.isinf(p) else objective
    return ExactReport(cut, objective, power_sum, search.nodes)


def _seed_bound(inst: Instance) -> float:
    from .approx import trivial_solve  # deferred: approx depends on this module's callers

    return lp_objective(inst, trivial_solve(inst))


class _Search:
    def __init__(self, inst: Instance):
        self.inst = inst
        self.k = inst.k
        self.p = inst.p
        self.max_mode = math.isinf(self.p)
        n = inst.n
        term_part = {t: i for i, t in enumerate(inst.terminals)}
        self.order = [v for v in range(n) if v not in term_part]
        self.assign = np.full(n, -1, dtype=np.intp)
        adj = inst.graph.adjacency
        self.nbrs = [np.fromiter(adj[v].keys(), dtype=np.intp, count=len(adj[v])) for v in range(n)]
        self.nw = [np.fromiter(adj[v].values(), dtype=float, count=len(adj[v])) for v in range(n)]
        # toward[v, j] = weight from v to assigned vertices in part j
        self.toward = np.zeros((n, self.k))
        self.cuts = np.zeros(self.k)
        for t, i in term_part.items():
            self._place(t, i)
        self.nodes = 0

    def to_internal(self, objective: float) -> float:
        if self.max_mode:
            return objective
        return objective ** self.p

    def _place(self, v: int, j: int) -> None:
        self.assign[v] = j
        nb, w = self.nbrs[v], self.nw[v]
        if len(nb):
            parts = self.assign[nb]
            done = parts >= 0
            # edges to already-assigned vertices of other parts become cut
            other = done & (parts != j)
            if other.any():
                np.add.at(self.cuts, parts[other], w[other])
                self.cuts[j] += w[other].sum()
            np.add.at(self.toward, (nb, np.full(len(nb), j)), w)

    def _value(self) -> float:
        c = np.maximum(self.cuts, 0.0)
        return float(c.max()) if self.max_mode else float(np.sum(c ** self.p))

    def _bound(self, depth: int) -> float:
        rest = self.order[depth:]
        c = np.maximum(self.cuts, 0.0)
        base = self._value()
        if not rest:
            return base
        a = self.toward[rest]                       # (r, k)
        total = a.sum(axis=1)                       # (r,)
        if self.max_mode:
            # value after assigning u to j: max over parts of c + (a, with column j = total - a_j)
            with_all = c[None, :] + a
            best = np.empty(len(rest))
            for j in range(self.k):
                col = with_all.copy()
                col[:, j] = c[j] + total - a[:, j]
                m = col.max(axis=1)
                best = m if j == 0 else np.minimum(best, m)
            return max(base, float(best.max()))
        fc = c ** self.p
        inc = (c[None, :] + a) ** self.p - fc[None, :]
        inc_sum = inc.sum(axis=1)
        own = (c[None, :] + total[:, None] - a) ** self.p - fc[None, :]
        delta = inc_sum[:, None] - inc + own
        return base + float(delta.min(axis=1).sum())

    def run(self, upper: float) -> tuple[list[int], float]:
        self.best_value = upper * (1 + 1e-9) + 1e-300
        self.best: list[int] | None = None
        self._dfs(0)
        assert self.best is not None, "seed bound below optimum"
        return self.best, self.best_value

    def _dfs(self, depth: int) -> None:
        self.nodes += 1
        lb = self._bound(depth)
        limit = self.best_value * (1 - TIE_TOL) if self.best is not None else self.best_value
        if lb > limit:
            return
        if depth == len(self.order):
            value = lb
            if self.best is None or value < self.best_value * (1 - TIE_TOL):
                self.best_value = value
                self.best = self.assign.tolist()
            return
        v = self.order[depth]
        # restore by copy rather than subtracting, so sums never drift
        cuts, toward = self.cuts.copy(), self.toward.copy()
        for j in range(self.k):
            self._place(v, j)
            self._dfs(depth + 1)
            self.cuts[:] = cuts
            self.toward[:] = toward
            self.assign[v] = -1
