"""Minimum s-t cuts via Dinic's algorithm with super-source/super-sink."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .core import Graph, cut_weight
from .errors import InvalidInstance


@dataclass(frozen=True)
class StCut:
    source_side: frozenset[int]
    value: float


class _Network:
    """Residual network stored as parallel edge arrays (edge i^1 is the reverse of i)."""

    def __init__(self, n: int):
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[float] = []

    def add(self, u: int, v: int, c: float, rc: float = 0.0) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(rc)

    def _levels(self, s: int, t: int, eps: float) -> list[int] | None:
        level = [-1] * self.n
        level[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for e in self.head[x]:
                y = self.to[e]
                if level[y] < 0 and self.cap[e] > eps:
                    level[y] = level[x] + 1
                    queue.append(y)
        return level if level[t] >= 0 else None

    def max_flow(self, s: int, t: int, eps: float) -> float:
        total = 0.0
        while True:
            level = self._levels(s, t, eps)
            if level is None:
                return total
            it = [0] * self.n
            while True:
                pushed = self._augment(s, t, level, it, eps)
                if pushed <= eps:
                    break
                total += pushed

    def _augment(self, s: int, t: int, level: list[int], it: list[int], eps: float) -> float:
        # iterative DFS along the level graph, one path per call
        path: list[int] = []
        x = s
        while True:
            if x == t:
                bottleneck = min(self.cap[e] for e in path)
                for e in path:
                    self.cap[e] -= bottleneck
                    self.cap[e ^ 1] += bottleneck
                return bottleneck
            edges = self.head[x]
            advanced = False
            while it[x] < len(edges):
                e = edges[it[x]]
                y = self.to[e]
                if self.cap[e] > eps and level[y] == level[x] + 1:
                    path.append(e)
                    x = y
                    advanced = True
                    break
                it[x] += 1
            if advanced:
                continue
            if x == s:
                return 0.0
            level[x] = -1  # dead end
            e = path.pop()
            x = self.to[e ^ 1]
            it[x] += 1

    def reachable(self, s: int, eps: float) -> set[int]:
        seen = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for e in self.head[x]:
                y = self.to[e]
                if y not in seen and self.cap[e] > eps:
                    seen.add(y)
                    stack.append(y)
        return seen


def min_st_cut(g: Graph, sources: Iterable[int], sinks: Iterable[int]) -> StCut:
    """Minimum-weight cut separating every source from every sink.

    The returned source side is the set of vertices reachable from the
    sources in the final residual network, i.e. the unique inclusion-minimal
    minimum cut.
    """
    sources, sinks = frozenset(sources), frozenset(sinks)
    if not sources or not sinks:
        raise InvalidInstance("sources and sinks must be nonempty")
    if sources & sinks:
        raise InvalidInstance("sources and sinks must be disjoint")
    n = g.n
    big = 1.0 + g.total_weight
    # residual noise floor; weights are summed in floating point
    eps = 1e-12 * big
    net = _Network(n + 2)
    s, t = n, n + 1
    for u, v, w in g.edges:
        if w > 0:
            net.add(u, v, w, w)
    for x in sorted(sources):
        net.add(s, x, big)
    for x in sorted(sinks):
        net.add(x, t, big)
    net.max_flow(s, t, eps)
    side = frozenset(net.reachable(s, eps) - {s})
    return StCut(side, cut_weight(g, side))


def isolating_cuts(g: Graph, terminals: Iterable[int]) -> list[StCut]:
    """Minimum (t_i, T - t_i) cut for every terminal, in terminal order."""
    terminals = list(terminals)
    return [min_st_cut(g, [t], [x for x in terminals if x != t]) for t in terminals]
