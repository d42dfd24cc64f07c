"""Unbalanced terminal cut: a cheap cut holding a given share of vertex mass.

Given vertex weights ``y`` and a fraction ``tau``, look for a set S with at
most one terminal and ``y(S) >= tau * y(V)`` whose cut is small. The exact
mode enumerates all subsets; the heuristic mode grows regions from every
seed and only promises a quarter of the requested mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .core import Graph, cut_weight
from .errors import Infeasible, SizeLimit

EXACT_MAX_N = 24
HEURISTIC_MASS_FACTOR = 0.25
_CHUNK = 1 << 20


@dataclass(frozen=True)
class UtcQuery:
    graph: Graph
    y: tuple[float, ...]
    tau: float
    terminals: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "y", tuple(float(v) for v in self.y))
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        if len(self.y) != self.graph.n:
            raise ValueError("y must have one entry per vertex")
        if any(v < 0 for v in self.y):
            raise ValueError("vertex weights must be nonnegative")
        if not 0 <= self.tau <= 1:
            raise ValueError(f"tau must lie in [0, 1], got {self.tau}")

    @property
    def total_mass(self) -> float:
        return math.fsum(self.y)


@dataclass(frozen=True)
class UtcResult:
    set: frozenset[int]
    cut: float
    y_mass: float
    mode: str


def _result(q: UtcQuery, s, mode: str) -> UtcResult:
    s = frozenset(s)
    return UtcResult(s, cut_weight(q.graph, s), math.fsum(q.y[v] for v in s), mode)


@lru_cache(maxsize=16)
def _subset_cuts(g: Graph) -> np.ndarray:
    """Cut value of every vertex subset, indexed by bitmask."""
    size = 1 << g.n
    cuts = np.zeros(size)
    for lo in range(0, size, _CHUNK):
        masks = np.arange(lo, min(size, lo + _CHUNK), dtype=np.int64)
        block = np.zeros(len(masks))
        for u, v, w in g.edges:
            block += w * (((masks >> u) ^ (masks >> v)) & 1)
        cuts[lo:lo + len(masks)] = block
    return cuts


@lru_cache(maxsize=16)
def _terminal_counts(n: int, terminals: frozenset[int]) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    count = np.zeros(1 << n, dtype=np.int8)
    for t in terminals:
        count += ((masks >> t) & 1).astype(np.int8)
    return count


def _masses(n: int, y: Sequence[float]) -> np.ndarray:
    # built bit by bit: mass[m | 1<<v] = mass[m] + y[v]
    mass = np.zeros(1 << n)
    for v in range(n):
        half = 1 << v
        mass[half:2 * half] = mass[:half] + y[v]
    return mass


def _lex_key(mask: int, n: int) -> tuple[int, ...]:
    return tuple(v for v in range(n) if mask >> v & 1)


def utc_exact(q: UtcQuery) -> UtcResult:
    """Minimum cut over all sets with ``y(S) >= tau*y(V)`` and ``|S & T| <= 1``.

    Ties go to the lexicographically smallest sorted vertex list.
    """
    n = q.graph.n
    if n > EXACT_MAX_N:
        raise SizeLimit(f"exact UTC enumerates 2^n subsets; n={n} > {EXACT_MAX_N}")
    need = q.tau * q.total_mass
    cuts = _subset_cuts(q.graph)
    feasible = (_masses(n, q.y) >= need) & (_terminal_counts(n, q.terminals) <= 1)
    if not feasible.any():
        raise Infeasible(f"no set carries {q.tau} of the mass with at most one terminal")
    best = cuts[feasible].min()
    # summation order differs between subsets; treat 1e-12 relative as a tie
    ties = np.flatnonzero(feasible & (cuts <= best + 1e-12 * max(1.0, best)))
    mask = min(ties.tolist(), key=lambda m: _lex_key(m, n))
    return _result(q, _lex_key(mask, n), "exact")


def utc_heuristic(q: UtcQuery, mass_factor: float = HEURISTIC_MASS_FACTOR) -> UtcResult:
    """Region growing from every vertex; no approximation guarantee.

    Each growth repeatedly absorbs the neighbour whose absorption gives the
    smallest cut (lowest id on ties) and stops at the first prefix holding
    ``mass_factor * tau * y(V)``, which becomes a candidate. A region that
    already holds a terminal never absorbs another one, and a region whose
    component is used up continues with the cheapest outside vertex. Heavy
    enough single vertices are candidates too. The cheapest candidate wins.
    """
    g = q.graph
    total = q.total_mass
    if total <= 0:
        raise Infeasible("vertex mass is zero")
    need = mass_factor * q.tau * total
    adj = g.adjacency
    deg = [sum(a.values()) for a in adj]
    candidates: dict[frozenset[int], float] = {}

    for v in range(g.n):
        if q.y[v] >= need:
            candidates[frozenset([v])] = cut_weight(g, [v])

    for seed in range(g.n):
        inside = {seed}
        mass = q.y[seed]
        terms = 1 if seed in q.terminals else 0
        cut = deg[seed]
        # gain[x] = weight from x into the region
        gain: dict[int, float] = dict(adj[seed])
        while True:
            if mass >= need:
                candidates.setdefault(frozenset(inside), cut)
                break
            # a second terminal would make every later prefix infeasible
            pool = [x for x in gain if not (terms and x in q.terminals)]
            if not pool:
                # component used up: continue from any admissible outside vertex
                pool = [x for x in range(g.n)
                        if x not in inside and not (terms and x in q.terminals)]
                if not pool:
                    break
            x = min(pool, key=lambda x: (cut + deg[x] - 2 * gain.get(x, 0.0), x))
            cut = cut + deg[x] - 2 * gain.pop(x, 0.0)
            inside.add(x)
            mass = math.fsum(q.y[z] for z in inside)
            terms += x in q.terminals
            for z, w in adj[x].items():
                if z not in inside:
                    gain[z] = gain.get(z, 0.0) + w

    if not candidates:
        raise Infeasible("region growing found no set with enough mass")
    best = min(candidates, key=lambda s: (cut_weight(g, s), sorted(s)))
    return _result(q, best, "heuristic")


def solve_utc(q: UtcQuery, mode: str = "auto") -> UtcResult:
    """Dispatch: exact for ``n <= 24`` unless a mode is forced."""
    if mode == "auto":
        mode = "exact" if q.graph.n <= EXACT_MAX_N else "heuristic"
    if mode == "exact":
        return utc_exact(q)
    if mode == "heuristic":
        return utc_heuristic(q)
    raise ValueError(f"unknown UTC mode {mode!r}")
