"""Three-stage approximation pipeline and the isolating-cut baseline.

Stage 1 (:func:`mwu_cover`) covers every vertex about ``log2 n`` times with
sets that hold at most one terminal, using multiplicative weights over
vertex masses and an unbalanced-terminal-cut oracle. Stage 2
(:func:`uncross`) turns that cover into a partition without increasing
``sum(cut**p)``, relying on posimodularity of the cut function. Stage 3
(:func:`aggregate`) merges terminal-free parts into the k terminal parts in
small buckets. :func:`approx_solve` runs the pipeline over a geometric grid
of guesses D for ``OPT**p`` and keeps the best result, with
:func:`trivial_solve` always in the candidate pool.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .core import REL_TOL, Graph, Instance, MultiwayCut, cut_weight, lp_norm, lp_objective
from .errors import Infeasible, IterationCap, UnionNotV, UnsupportedP
from .flow import StCut, isolating_cuts
from .utc import UtcQuery, solve_utc

log = logging.getLogger(__name__)


def default_beta(n: int, k: int, c_beta: float = 1.0) -> float:
    return c_beta * math.sqrt(max(1.0, math.log2(n)) * max(1.0, math.log2(2 * k)))


def iteration_cap(n: int, k: int) -> int:
    return 64 * k * max(1, math.ceil(math.log2(n)))


@dataclass
class CutCollection:
    """Sets produced by :func:`mwu_cover`, with bookkeeping about the run."""

    sets: list[frozenset[int]]
    coverage: list[int] = field(default_factory=list)
    certified: bool = True
    levels: list[int] = field(default_factory=list)

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)


def mwu_cover(inst: Instance, D: float, beta: float | None = None,
              utc_mode: str = "auto") -> CutCollection:
    """Multiplicative-weights cover of V by sets with at most one terminal.

    Every vertex starts with mass 1 and its mass halves each time a chosen
    set contains it, so the loop stops once total mass drops to ``1/n``,
    i.e. once every vertex has been covered at least ``log2 n`` times.
    In each round, fractions ``tau = 2**-i`` for ``i = 1..ceil(log2 2k)`` are
    tried in turn and the first UTC answer with cut at most
    ``beta * (4D / 2**i) ** (1/p)`` is taken. If none passes, the answer with
    the smallest ``cut**p * 2**i / (4D)`` is taken and the collection is
    marked uncertified.
    """
    if not D > 0:
        raise ValueError(f"D must be positive, got {D}")
    if math.isinf(inst.p):
        raise UnsupportedP("the cover thresholds need finite p")
    g, n, k, p = inst.graph, inst.n, inst.k, inst.p
    if beta is None:
        beta = default_beta(n, k)
    terminals = frozenset(inst.terminals)
    levels = math.ceil(math.log2(2 * k))
    cap = iteration_cap(n, k)
    hits = [0] * n
    out = CutCollection([], hits)

    def mass() -> float:
        return math.fsum(2.0 ** -h for h in hits)

    while mass() > 1.0 / n:
        if len(out.sets) >= cap:
            raise IterationCap(f"cover did not finish within {cap} iterations")
        y = tuple(2.0 ** -h for h in hits)
        chosen = None
        fallback = None
        for i in range(1, levels + 1):
            try:
                res = solve_utc(UtcQuery(g, y, 2.0 ** -i, terminals), utc_mode)
            except Infeasible:
                continue
            threshold = beta * (4 * D / 2 ** i) ** (1 / p)
            if res.cut <= threshold * (1 + REL_TOL):
                chosen = (res.set, i)
                break
            violation = res.cut ** p * 2 ** i / (4 * D)
            if fallback is None or violation < fallback[0]:
                fallback = (violation, res.set, i)
        if chosen is None:
            if fallback is None:
                raise Infeasible("no UTC query was feasible in this round")
            out.certified = False
            chosen = fallback[1:]
        s, i = chosen
        if not s:
            raise IterationCap("UTC returned an empty set; cover cannot progress")
        out.sets.append(s)
        out.levels.append(i)
        for v in s:
            hits[v] += 1
    return out


@dataclass
class UncrossResult:
    parts: list[frozenset[int]]
    steps: int


def uncross(g: Graph, sets: Iterable[Iterable[int]],
            on_step: Callable[[list[frozenset[int]]], None] | None = None) -> UncrossResult:
    """Uncross a cover of V into a partition using posimodularity.

    For the first crossing pair (A, B) in insertion order, A becomes A - B if
    that does not raise its cut, otherwise B becomes B - A. Emptied sets are
    dropped. A pair that has been made disjoint stays disjoint since sets
    only shrink, so one pass over the pairs in order suffices.
    """
    work: list[frozenset[int] | None] = [frozenset(s) for s in sets]
    covered = frozenset().union(*work) if work else frozenset()
    if covered != frozenset(range(g.n)):
        raise UnionNotV(f"sets miss vertices {sorted(set(range(g.n)) - covered)}")
    work = [s if s else None for s in work]
    steps = 0
    for a in range(len(work)):
        for b in range(a + 1, len(work)):
            A, B = work[a], work[b]
            if A is None:
                break
            if B is None or not (A & B):
                continue
            if cut_weight(g, A) >= cut_weight(g, A - B):
                work[a] = (A - B) or None
            else:
                work[b] = (B - A) or None
            steps += 1
            if on_step is not None:
                on_step([s for s in work if s is not None])
    return UncrossResult([s for s in work if s is not None], steps)


def plan_buckets(cuts: Sequence[float], k: int) -> list[list[int]]:
    """Split terminal-free parts (given by their cut values) into k buckets.

    Heaviest part first, each goes to the bucket with the smallest cut sum
    among those still below ``ceil(len(cuts) / k)`` members.
    """
    cap = math.ceil(len(cuts) / k) if cuts else 0
    buckets: list[list[int]] = [[] for _ in range(k)]
    sums = [0.0] * k
    for idx in sorted(range(len(cuts)), key=lambda j: (-cuts[j], j)):
        open_ = [b for b in range(k) if len(buckets[b]) < cap]
        b = min(open_, key=lambda b: (sums[b], b))
        buckets[b].append(idx)
        sums[b] += cuts[idx]
    return buckets


def aggregate(inst: Instance, parts: Sequence[Iterable[int]]) -> MultiwayCut:
    """Merge a partition whose parts hold at most one terminal into k parts.

    Buckets are paired heaviest-first with terminal parts lightest-first.
    """
    g, k = inst.graph, inst.k
    parts = [frozenset(q) for q in parts]
    seen: set[int] = set()
    for q in parts:
        if seen & q:
            raise ValueError("parts overlap")
        seen |= q
    if seen != set(range(inst.n)):
        raise UnionNotV("parts do not cover V")
    where = {t: i for i, t in enumerate(inst.terminals)}
    home: list[frozenset[int] | None] = [None] * k
    free: list[frozenset[int]] = []
    for q in parts:
        hit = [where[v] for v in q if v in where]
        if len(hit) > 1:
            raise ValueError(f"part holds {len(hit)} terminals")
        if hit:
            home[hit[0]] = q
        else:
            free.append(q)
    free.sort(key=min)
    free_cuts = [cut_weight(g, q) for q in free]
    buckets = plan_buckets(free_cuts, k)
    sums = [math.fsum(free_cuts[j] for j in b) for b in buckets]
    by_weight = sorted(range(k), key=lambda b: (-sums[b], b))
    home_cuts = [cut_weight(g, q) for q in home]
    by_light = sorted(range(k), key=lambda i: (home_cuts[i], i))
    assignment = [-1] * inst.n
    for i, q in enumerate(home):
        for v in q:
            assignment[v] = i
    for b, i in zip(by_weight, by_light):
        for j in buckets[b]:
            for v in free[j]:
                assignment[v] = i
    return MultiwayCut(tuple(assignment))


def uncrossed_isolating_cuts(inst: Instance) -> list[StCut]:
    """Minimum isolating cuts made pairwise disjoint.

    For crossing S_i, S_j both differences are still isolating cuts for their
    own terminals, and posimodularity plus minimality force both to keep the
    minimum value, so both are replaced at once.
    """
    g = inst.graph
    cuts = isolating_cuts(g, inst.terminals)
    sides = [c.source_side for c in cuts]
    for i in range(len(sides)):
        for j in range(i + 1, len(sides)):
            if sides[i] & sides[j]:
                sides[i], sides[j] = sides[i] - sides[j], sides[j] - sides[i]
    return [StCut(s, cut_weight(g, s)) for s in sides]


def trivial_solve(inst: Instance) -> MultiwayCut:
    """Isolating-cut baseline: part i is S_i, leftovers join part 0."""
    sides = uncrossed_isolating_cuts(inst)
    assignment = [0] * inst.n
    for i, c in enumerate(sides):
        for v in c.source_side:
            assignment[v] = i
    return MultiwayCut(tuple(assignment))


@dataclass
class DRun:
    D: float
    objective: float | None
    certified: bool
    mwu_sets: int
    uncross_steps: int
    error: str | None = None


@dataclass
class PipelineReport:
    cut: MultiwayCut
    objective: float
    D_used: float | None
    mwu_sets: int
    uncross_steps: int
    certified: bool
    algorithm: str
    lower_bound: float
    trivial_objective: float
    runs: list[DRun] = field(default_factory=list)

    @property
    def d_grid(self) -> list[float]:
        return [r.D for r in self.runs]


def d_grid(upper_pow: float, lower_pow: float, p: float, k: int, max_steps: int = 64) -> list[float]:
    """Guesses ``upper_pow / 2**j`` down to the last one still >= ``lower_pow``.

    Without a positive lower bound, stop after enough halvings to pass below
    ``OPT**p`` given the baseline's ``2 k**(1-1/p)`` factor.
    """
    if upper_pow <= 0:
        return []
    if lower_pow > 0:
        steps = int(math.floor(math.log2(upper_pow / lower_pow) + 1e-12))
    else:
        steps = math.ceil(p + (p - 1) * math.log2(k)) + 1
    return [upper_pow / 2 ** j for j in range(min(steps, max_steps) + 1)]


def run_pipeline(inst: Instance, D: float, beta: float | None = None,
                 utc_mode: str = "auto") -> tuple[MultiwayCut, CutCollection, UncrossResult]:
    cover = mwu_cover(inst, D, beta, utc_mode)
    flat = uncross(inst.graph, cover.sets)
    return aggregate(inst, flat.parts), cover, flat


def approx_solve(inst: Instance, utc_mode: str = "auto", beta: float | None = None,
                 c_beta: float = 1.0) -> PipelineReport:
    """Best multiway cut over the D grid, never worse than :func:`trivial_solve`."""
    if math.isinf(inst.p):
        raise UnsupportedP("the pipeline is defined for finite p only")
    p = inst.p
    if beta is None:
        beta = default_beta(inst.n, inst.k, c_beta)
    base = trivial_solve(inst)
    upper = lp_objective(inst, base)
    iso = [c.value for c in isolating_cuts(inst.graph, inst.terminals)]
    lower_pow = math.fsum(v ** p for v in iso)
    lower = lp_norm(iso, p)

    runs: list[DRun] = []
    best: tuple[float, float, MultiwayCut, DRun] | None = None
    for D in d_grid(upper ** p, lower_pow, p, inst.k):
        try:
            cut, cover, flat = run_pipeline(inst, D, beta, utc_mode)
        except (IterationCap, Infeasible) as exc:
            log.info("D=%g run failed: %s", D, exc)
            runs.append(DRun(D, None, False, 0, 0, str(exc)))
            continue
        obj = lp_objective(inst, cut)
        run = DRun(D, obj, cover.certified, len(cover.sets), flat.steps)
        runs.append(run)
        log.debug("D=%g objective=%g certified=%s", D, obj, cover.certified)
        if best is None or (obj, D) < (best[0], best[1]):
            best = (obj, D, cut, run)

    if best is not None and best[0] < upper * (1 - REL_TOL):
        obj, D, cut, run = best
        return PipelineReport(cut, obj, D, run.mwu_sets, run.uncross_steps, run.certified,
                              "pipeline", lower, upper, runs)
    certified = best[3].certified if best is not None else False
    return PipelineReport(base, upper, None, 0, 0, certified, "trivial", lower, upper, runs)
