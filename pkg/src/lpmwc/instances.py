"""Instance generators: the star, the disconnected-optimum example, the two
hardness gadgets, the equipartition reduction and seeded random graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import GadgetMeta, Graph, Instance, MultiwayCut, cut_weight, lp_norm
from .errors import ConstraintViolation, InvalidInstance, InvalidP, OddN


def _require_gadget_p(p: float) -> float:
    p = float(p)
    if not (p > 1 and math.isfinite(p)):
        raise InvalidP(f"gadget constructions need finite p > 1, got {p}")
    return p


def gen_star(k: int, p: float = 2.0) -> Instance:
    """Unit-weight star; the k leaves are the terminals, the center is vertex 0."""
    if k < 3:
        raise InvalidInstance(f"star needs k >= 3, got {k}")
    edges = tuple((0, i, 1.0) for i in range(1, k + 1))
    return Instance(Graph(k + 1, edges), tuple(range(1, k + 1)), p,
                    GadgetMeta("star", {"k": k}))


# vertex ids of the disconnected-optimum example
U1, U2, V1, V2, V3, V4 = range(6)


def fig1_weight(p: float) -> float:
    return 8.0 ** (p / (p - 1))


def gen_fig1(p: float) -> Instance:
    """Six-vertex example whose unique optimum has a disconnected part for p > 1.

    Terminals are u1, v1..v4 (in that order). The v's form a clique of
    weight ``a = 8**(p/(p-1))``; u1 and u2 are each joined to every v by a
    unit edge and not to each other. Singleton v parts cut ``3a+2``,
    ``{u1, u2}`` cuts 8, and grouping u2 with some v_j instead costs
    ``3a+4`` on that part and 4 on ``{u1}``.
    """
    p = _require_gadget_p(p)
    a = fig1_weight(p)
    vs = (V1, V2, V3, V4)
    edges = [(x, y, a) for i, x in enumerate(vs) for y in vs[i + 1:]]
    edges += [(U2, v, 1.0) for v in vs]
    edges += [(U1, v, 1.0) for v in vs]
    return Instance(Graph(6, tuple(edges)), (U1, V1, V2, V3, V4), p,
                    GadgetMeta("fig1", {"a": a, "p": p}))


def bisection_params(n: int, C: int, p: float) -> tuple[float, float]:
    a = max(1.0, 8 * n ** 3 / (p - 1), 2 * C + 1.0)
    b = 1 + max(1.0, (2 * a * n + C) ** (p / (p - 1)), 3 * a * n)
    return a, b


def bisection_threshold(a: float, b: float, n: int, C: int, p: float) -> float:
    return lp_norm([b + a * n, b + a * n, 2 * a * n + C, 2 * a * n + C], p)


def gen_bisection(g: Graph, C: int, p: float) -> Instance:
    """Four-terminal gadget: a cheap multiway cut exists iff g has a bisection of cut <= C.

    Adds terminals u, d, l, r (ids n..n+3, in that order), joins every
    original vertex to each of them with weight a, and joins u and d with
    weight b.
    """
    p = _require_gadget_p(p)
    n = g.n
    if n % 2:
        raise OddN(f"bisection needs an even vertex count, got {n}")
    if any(w != 1.0 for _, _, w in g.edges):
        raise InvalidInstance("bisection input must have unit edge weights")
    a, b = bisection_params(n, C, p)
    u, d, l, r = n, n + 1, n + 2, n + 3
    edges = list(g.edges) + [(u, d, b)]
    for v in range(n):
        edges += [(v, u, a), (v, d, a), (v, l, a), (v, r, a)]
    meta = GadgetMeta("bisection", {"n": n, "C": C, "p": p, "a": a, "b": b},
                      bisection_threshold(a, b, n, C, p))
    return Instance(Graph(n + 4, tuple(edges)), (u, d, l, r), p, meta)


def three_partition_d(m: int, p: float) -> float:
    return (12 * m + 12) ** (1 / (p - 1))


def three_partition_threshold(d: float, B: float, m: int, p: float) -> float:
    return lp_norm([2 * d * B] * (9 * m) + [B] * m, p)


def gen_3partition(weights: Sequence[float], B: float, p: float) -> Instance:
    """Planar gadget: a cheap multiway cut exists iff the weights split into
    triples of sum B.

    Item i gets terminals x_i^1..x_i^3 (a triangle of weight ``dB - a_i/6``)
    each joined to a non-terminal v_i with weight ``a_i/3``; ids are
    ``4i .. 4i+3`` with v_i last. The m isolated terminals t_j follow.
    Terminal order: all x's by item, then the t's.
    """
    p = _require_gadget_p(p)
    weights = [float(x) for x in weights]
    if not weights or len(weights) % 3:
        raise ConstraintViolation("need 3m weights")
    m = len(weights) // 3
    B = float(B)
    if not math.isclose(math.fsum(weights), m * B, rel_tol=1e-12):
        raise ConstraintViolation(f"weights sum to {math.fsum(weights)}, expected m*B = {m * B}")
    for x in weights:
        if not B / 4 < x < B / 2:
            raise ConstraintViolation(f"weight {x} outside (B/4, B/2) = ({B / 4}, {B / 2})")
    d = three_partition_d(m, p)
    edges = []
    terminals = []
    for i, ai in enumerate(weights):
        x = [4 * i, 4 * i + 1, 4 * i + 2]
        v = 4 * i + 3
        side = d * B - ai / 6
        edges += [(x[0], x[1], side), (x[0], x[2], side), (x[1], x[2], side)]
        edges += [(xr, v, ai / 3) for xr in x]
        terminals += x
    terminals += [4 * len(weights) + j for j in range(m)]
    meta = GadgetMeta("three_partition", {"m": m, "B": B, "p": p, "d": d, "weights": weights},
                      three_partition_threshold(d, B, m, p))
    return Instance(Graph(4 * len(weights) + m, tuple(edges)), tuple(terminals), p, meta)


def gen_mskp(g: Graph, k: int, B: float, p: float = 2.0) -> Instance:
    """Join k new terminals (ids n..n+k-1) to every original vertex with weight B/n."""
    if k < 2:
        raise InvalidInstance(f"need k >= 2, got {k}")
    if not B > 0:
        raise InvalidInstance(f"need B > 0, got {B}")
    n = g.n
    w = B / n
    edges = list(g.edges) + [(n + i, v, w) for i in range(k) for v in range(n)]
    return Instance(Graph(n + k, tuple(edges)), tuple(range(n, n + k)), p,
                    GadgetMeta("mskp", {"n": n, "k": k, "B": B}))


@dataclass(frozen=True)
class MskpExtraction:
    parts: list[frozenset[int]]
    sum_of_cuts: float
    max_part_size: int


def extract_mskp(g: Graph, inst: Instance, cut: MultiwayCut) -> MskpExtraction:
    """Restrict a multiway cut of the augmented graph to the original vertices."""
    parts = [q & frozenset(range(g.n)) for q in cut.parts(inst.k)]
    return MskpExtraction(parts, math.fsum(cut_weight(g, q) for q in parts),
                          max(len(q) for q in parts))


def gen_random(n: int, k: int, edge_density: float = 0.5,
               weight_range: tuple[float, float] = (1.0, 10.0), seed: int = 0,
               p: float = 2.0, integer_weights: bool = False) -> Instance:
    """Erdos-Renyi style graph with uniform weights and k random terminals."""
    if not 2 <= k <= n:
        raise InvalidInstance(f"need 2 <= k <= n, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    lo, hi = weight_range
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < edge_density:
                w = rng.integers(int(lo), int(hi) + 1) if integer_weights else rng.uniform(lo, hi)
                edges.append((u, v, float(w)))
    terminals = tuple(int(t) for t in rng.choice(n, size=k, replace=False))
    meta = GadgetMeta("random", {"n": n, "k": k, "density": float(edge_density),
                                 "lo": float(lo), "hi": float(hi), "seed": seed,
                                 "integer": int(integer_weights)})
    return Instance(Graph(n, tuple(edges)), terminals, p, meta)


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1, 1.0) for i in range(n - 1)))


def recompute_threshold(meta: GadgetMeta) -> float | None:
    """Threshold implied by a gadget's recorded parameters (None for other kinds)."""
    q = meta.params
    if meta.kind == "bisection":
        return bisection_threshold(q["a"], q["b"], q["n"], q["C"], q["p"])
    if meta.kind == "three_partition":
        return three_partition_threshold(q["d"], q["B"], q["m"], q["p"])
    return None
