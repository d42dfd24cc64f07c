"""Weighted graphs, multiway cuts and the lp-norm objective."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import InvalidInstance, InvalidP

# Relative tolerance for every cut-value comparison.
REL_TOL = 1e-9

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class Graph:
    """Undirected multigraph on vertices ``0..n-1``.

    Parallel edges are kept as given and summed whenever a cut is evaluated.
    Zero-weight edges are kept too; they do not change cut values but they
    do connect vertices for :func:`part_connectivity`.
    """

    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInstance(f"negative vertex count {self.n}")
        clean = []
        for e in self.edges:
            u, v, w = e
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidInstance(f"edge ({u}, {v}) out of range for n={self.n}")
            if u == v:
                raise InvalidInstance(f"self-loop at vertex {u}")
            if not w >= 0 or math.isinf(w):
                raise InvalidInstance(f"edge ({u}, {v}) has invalid weight {w}")
            clean.append((u, v, w))
        object.__setattr__(self, "edges", tuple(clean))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if not self.edges:
            return (np.zeros(0, dtype=np.intp), np.zeros(0, dtype=np.intp), np.zeros(0))
        u, v, w = zip(*self.edges)
        return np.array(u, dtype=np.intp), np.array(v, dtype=np.intp), np.array(w, dtype=float)

    @cached_property
    def adjacency(self) -> list[dict[int, float]]:
        """Neighbour -> total weight map per vertex (parallel edges merged)."""
        adj: list[dict[int, float]] = [{} for _ in range(self.n)]
        for u, v, w in self.edges:
            adj[u][v] = adj[u].get(v, 0.0) + w
            adj[v][u] = adj[v].get(u, 0.0) + w
        return adj

    @cached_property
    def total_weight(self) -> float:
        return math.fsum(w for _, _, w in self.edges)

    def mask(self, s: Iterable[int]) -> np.ndarray:
        out = np.zeros(self.n, dtype=bool)
        idx = list(s)
        if idx:
            out[idx] = True
        return out


@dataclass(frozen=True)
class GadgetMeta:
    """Provenance of a generated instance: its kind and construction parameters."""

    kind: str
    params: dict[str, Any] = field(default_factory=dict)
    threshold: float | None = None

    def __hash__(self):
        return hash((self.kind, tuple(sorted((k, str(v)) for k, v in self.params.items())), self.threshold))


@dataclass(frozen=True)
class Instance:
    graph: Graph
    terminals: tuple[int, ...]
    p: float
    meta: GadgetMeta | None = field(default=None, compare=True)

    def __post_init__(self):
        terms = tuple(int(t) for t in self.terminals)
        object.__setattr__(self, "terminals", terms)
        object.__setattr__(self, "p", float(self.p))
        if not self.p >= 1:
            raise InvalidP(f"p must be >= 1, got {self.p}")
        k = len(terms)
        if not 2 <= k <= self.graph.n:
            raise InvalidInstance(f"need 2 <= k <= n, got k={k}, n={self.graph.n}")
        if len(set(terms)) != k:
            raise InvalidInstance("terminals must be distinct")
        for t in terms:
            if not 0 <= t < self.graph.n:
                raise InvalidInstance(f"terminal {t} out of range")

    @property
    def k(self) -> int:
        return len(self.terminals)

    @property
    def n(self) -> int:
        return self.graph.n

    def with_p(self, p: float) -> Instance:
        return Instance(self.graph, self.terminals, p, self.meta)

    def with_terminals(self, terminals: Sequence[int]) -> Instance:
        return Instance(self.graph, tuple(terminals), self.p, self.meta)


@dataclass(frozen=True)
class MultiwayCut:
    """Assignment of every vertex to a part index ``0..k-1``.

    Part ``i`` is the part of terminal ``terminals[i]``. Indices are 0-based
    here; the text formats use 1-based part numbers.
    """

    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(a) for a in self.assignment))

    @classmethod
    def from_parts(cls, n: int, parts: Sequence[Iterable[int]]) -> MultiwayCut:
        assignment = [-1] * n
        for i, part in enumerate(parts):
            for v in part:
                if assignment[v] != -1:
                    raise InvalidInstance(f"vertex {v} appears in two parts")
                assignment[v] = i
        missing = [v for v, a in enumerate(assignment) if a < 0]
        if missing:
            raise InvalidInstance(f"vertices {missing} not assigned to any part")
        return cls(tuple(assignment))

    def parts(self, k: int) -> list[frozenset[int]]:
        buckets: list[set[int]] = [set() for _ in range(k)]
        for v, a in enumerate(self.assignment):
            buckets[a].add(v)
        return [frozenset(b) for b in buckets]

    def validate(self, inst: Instance) -> None:
        if len(self.assignment) != inst.n:
            raise InvalidInstance(
                f"assignment covers {len(self.assignment)} vertices, instance has {inst.n}")
        for v, a in enumerate(self.assignment):
            if not 0 <= a < inst.k:
                raise InvalidInstance(f"vertex {v} assigned to part {a} outside [0, {inst.k})")
        for i, t in enumerate(inst.terminals):
            if self.assignment[t] != i:
                raise InvalidInstance(f"terminal {t} must be in part {i}")


def cut_weight(g: Graph, s: Iterable[int]) -> float:
    """Total weight of the edges with exactly one endpoint in ``s``."""
    s = set(s)
    if not s or len(s) == g.n or not g.edges:
        return 0.0
    u, v, w = g.arrays
    inside = g.mask(s)
    return float(w[inside[u] != inside[v]].sum())


def part_cuts(inst: Instance, cut: MultiwayCut) -> np.ndarray:
    """Cut value of every part, indexed by part."""
    cuts = np.zeros(inst.k)
    u, v, w = inst.graph.arrays
    if len(w):
        a = np.asarray(cut.assignment)
        crossing = a[u] != a[v]
        np.add.at(cuts, a[u][crossing], w[crossing])
        np.add.at(cuts, a[v][crossing], w[crossing])
    return cuts


def lp_norm(values: Iterable[float], p: float) -> float:
    """p-norm of nonnegative values, factoring out the maximum first.

    Values are summed in sorted order so equal multisets give bit-identical
    results regardless of part order.
    """
    vals = np.sort(np.asarray(list(values), dtype=float))
    if vals.size == 0:
        return 0.0
    top = float(vals.max())
    if top == 0.0:
        return 0.0
    if math.isinf(p):
        return top
    return top * float(np.sum((vals / top) ** p)) ** (1.0 / p)


def lp_objective(inst: Instance, cut: MultiwayCut) -> float:
    cut.validate(inst)
    return lp_norm(part_cuts(inst, cut), inst.p)


def part_connectivity(inst: Instance, cut: MultiwayCut) -> list[bool]:
    """Whether each part induces a connected subgraph (zero-weight edges count)."""
    adj = inst.graph.adjacency
    flags = []
    for part in cut.parts(inst.k):
        if len(part) <= 1:
            flags.append(True)
            continue
        start = min(part)
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in part and y not in seen:
                    seen.add(y)
                    stack.append(y)
        flags.append(len(seen) == len(part))
    return flags


def close(a: float, b: float, rel: float = REL_TOL) -> bool:
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))
