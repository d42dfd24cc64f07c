import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import brute_cut, brute_exact
from lpmwc.approx import (aggregate, approx_solve, d_grid, default_beta, iteration_cap,
                          mwu_cover, plan_buckets, trivial_solve, uncross,
                          uncrossed_isolating_cuts)
from lpmwc.core import Graph, Instance, close, cut_weight, lp_objective
from lpmwc.errors import UnionNotV, UnsupportedP
from lpmwc.exact import solve_exact
from lpmwc.flow import isolating_cuts, min_st_cut
from lpmwc.instances import gen_random, gen_star


def test_beta_and_cap():
    assert default_beta(2, 1) == 1.0
    assert default_beta(16, 4) == pytest.approx(math.sqrt(4 * 3))
    assert default_beta(16, 4, c_beta=2) == pytest.approx(2 * math.sqrt(12))
    assert iteration_cap(16, 3) == 64 * 3 * 4


def test_mwu_star_k3():
    inst = gen_star(3)
    D = solve_exact(inst).objective ** 2
    cover = mwu_cover(inst, D, utc_mode="exact")
    assert min(cover.coverage) >= 2
    assert frozenset().union(*cover.sets) == frozenset(range(4))
    for s in cover:
        assert len(s & set(inst.terminals)) <= 1
    assert len(cover) <= iteration_cap(4, 3)


def test_mwu_rejects_bad_input():
    with pytest.raises(ValueError):
        mwu_cover(gen_star(3), 0.0)
    with pytest.raises(UnsupportedP):
        mwu_cover(gen_star(3, math.inf), 1.0)


def test_mwu_tiny_D_is_uncertified_but_terminates():
    inst = gen_random(8, 3, seed=2)
    cover = mwu_cover(inst, 1e-9, utc_mode="exact")
    assert not cover.certified
    assert min(cover.coverage) >= 3


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 10), st.integers(2, 4), st.integers(0, 10 ** 6),
       st.sampled_from(["exact", "heuristic"]))
def test_mwu_structure(n, k, seed, mode):
    inst = gen_random(n, min(k, n), seed=seed)
    D = max(solve_exact(inst).objective ** 2, 1e-6)
    cover = mwu_cover(inst, D, utc_mode=mode)
    assert frozenset().union(*cover.sets) == frozenset(range(n))
    assert min(cover.coverage) >= math.log2(n)
    assert all(len(s & set(inst.terminals)) <= 1 for s in cover)
    assert cover.coverage == [sum(v in s for s in cover) for v in range(n)]


def test_uncross_path(path3):
    res = uncross(path3, [{0, 1}, {1, 2}])
    assert res.parts == [frozenset({0}), frozenset({1, 2})]
    assert res.steps == 1


def test_uncross_disjoint_unchanged(path3):
    res = uncross(path3, [{0}, {1, 2}])
    assert res.parts == [frozenset({0}), frozenset({1, 2})]
    assert res.steps == 0


def test_uncross_nested_drops_inner(path3):
    # A inside B: A - B is empty with cut 0 <= cut(A), so A disappears
    res = uncross(path3, [{1}, {0, 1, 2}])
    assert res.parts == [frozenset({0, 1, 2})]


def test_uncross_requires_cover(path3):
    with pytest.raises(UnionNotV):
        uncross(path3, [{0}, {1}])


def random_cover(rng, n, m):
    sets = [set(rng.sample(range(n), rng.randint(1, n))) for _ in range(m)]
    for v in range(n):
        if not any(v in s for s in sets):
            rng.choice(sets).add(v)
    return sets


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 9), st.integers(1, 8), st.integers(0, 10 ** 6),
       st.sampled_from([1.0, 1.5, 2.0, 3.0]))
def test_uncross_invariants(n, m, seed, p):
    rng = random.Random(seed)
    inst = gen_random(n, 2, seed=seed)
    g = inst.graph
    sets = random_cover(rng, n, m)
    scale = max(1.0, g.total_weight ** p)
    potentials = [math.fsum(cut_weight(g, s) ** p for s in sets)]

    def check(state):
        assert frozenset().union(*state) == frozenset(range(n))
        potentials.append(math.fsum(cut_weight(g, s) ** p for s in state))
        assert potentials[-1] <= potentials[-2] + 1e-9 * scale

    res = uncross(g, sets, on_step=check)
    assert sum(len(q) for q in res.parts) == n
    for q in res.parts:
        assert any(q <= s for s in sets)


def test_plan_buckets_cap_and_balance():
    buckets = plan_buckets([5, 4, 3, 2, 1], 2)
    assert sorted(len(b) for b in buckets) == [2, 3]
    assert sorted(i for b in buckets for i in b) == [0, 1, 2, 3, 4]
    assert plan_buckets([], 3) == [[], [], []]


def test_aggregate_no_free_parts():
    inst = gen_star(3)
    parts = [{1, 0}, {2}, {3}]
    cut = aggregate(inst, parts)
    assert cut.parts(3) == [frozenset({0, 1}), frozenset({2}), frozenset({3})]


def test_aggregate_k2_goes_to_lighter_terminal():
    # terminal 0 part cuts 5, terminal 3 part cuts 1 + 0.5; free part {1} joins terminal 3
    g = Graph(4, ((0, 1, 5.0), (1, 3, 1.0), (2, 3, 0.5)))
    inst = Instance(g, (0, 3), 2)
    cut = aggregate(inst, [{0}, {1}, {2, 3}])
    assert cut.assignment == (0, 1, 1, 1)


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 10), st.integers(2, 4), st.integers(0, 10 ** 6),
       st.sampled_from([1.0, 1.5, 2.0, 3.0]))
def test_aggregate_jensen_bound(n, k, seed, p):
    k = min(k, n)
    inst = gen_random(n, k, seed=seed, p=p)
    rng = random.Random(seed)
    # random partition: each terminal alone plus random blocks of the rest
    rest = [v for v in range(n) if v not in inst.terminals]
    rng.shuffle(rest)
    parts = [{t} for t in inst.terminals]
    while rest:
        cut_at = rng.randint(1, len(rest))
        block, rest = rest[:cut_at], rest[cut_at:]
        if rng.random() < 0.5:
            rng.choice(parts[:k]).update(block)
        else:
            parts.append(set(block))
    free = len(parts) - k
    cut = aggregate(inst, parts)
    cut.validate(inst)
    assert len(cut.parts(k)) == k
    bound = (math.ceil(free / k) + 1) ** (p - 1) * math.fsum(cut_weight(inst.graph, q) ** p
                                                            for q in parts)
    assert lp_objective(inst, cut) ** p <= bound * (1 + 1e-9) + 1e-12


def test_trivial_star():
    inst = gen_star(4)
    cut = trivial_solve(inst)
    assert cut.assignment == (0, 0, 1, 2, 3)
    assert lp_objective(inst, cut) == pytest.approx(math.sqrt(12))


@pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
def test_trivial_k2(p):
    inst = gen_random(9, 2, seed=5, p=p)
    mc = min_st_cut(inst.graph, inst.terminals[:1], inst.terminals[1:]).value
    expected = mc if math.isinf(p) else 2 ** (1 / p) * mc
    assert close(lp_objective(inst, trivial_solve(inst)), expected)


@settings(max_examples=80, deadline=None)
@given(st.integers(3, 9), st.integers(2, 4), st.integers(0, 10 ** 6),
       st.sampled_from([1.0, 2.0, 3.0, math.inf]))
def test_trivial_ratio_and_uncrossing(n, k, seed, p):
    k = min(k, n)
    inst = gen_random(n, k, seed=seed, p=p)
    sides = uncrossed_isolating_cuts(inst)
    mins = isolating_cuts(inst.graph, inst.terminals)
    for i, (s, m) in enumerate(zip(sides, mins)):
        assert inst.terminals[i] in s.source_side
        assert close(s.value, m.value)
        assert close(s.value, brute_cut(inst.graph.edges, s.source_side))
    for i in range(k):
        for j in range(i + 1, k):
            assert not sides[i].source_side & sides[j].source_side
    opt = brute_exact(inst)[0]
    got = lp_objective(inst, trivial_solve(inst))
    factor = 2 * k ** (1 - (0 if math.isinf(p) else 1 / p))
    assert got <= factor * opt * (1 + 1e-9) + 1e-12


def test_d_grid():
    assert d_grid(16, 2, 2, 3) == [16, 8, 4, 2]
    assert d_grid(16, 3, 2, 3) == [16, 8, 4]
    assert d_grid(0, 0, 2, 3) == []
    # no lower bound: enough halvings to cover the baseline factor
    assert len(d_grid(16, 0, 2, 4)) == math.ceil(2 + math.log2(4)) + 2


def test_approx_star():
    inst = gen_star(4)
    rep = approx_solve(inst, utc_mode="exact")
    assert rep.objective >= math.sqrt(12) * (1 - 1e-9)
    rep.cut.validate(inst)
    assert rep.lower_bound == pytest.approx(2.0)


def test_approx_rejects_inf():
    with pytest.raises(UnsupportedP):
        approx_solve(gen_star(3, math.inf))


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 9), st.integers(2, 4), st.integers(0, 10 ** 6),
       st.sampled_from([1.0, 1.5, 2.0, 3.0]), st.sampled_from(["exact", "heuristic"]))
def test_approx_sandwich(n, k, seed, p, mode):
    k = min(k, n)
    inst = gen_random(n, k, seed=seed, p=p)
    rep = approx_solve(inst, utc_mode=mode)
    rep.cut.validate(inst)
    assert rep.objective == lp_objective(inst, rep.cut)
    assert rep.objective <= rep.trivial_objective
    opt = brute_exact(inst)[0]
    assert rep.objective >= opt * (1 - 1e-9)
    assert rep.lower_bound <= opt * (1 + 1e-9)
    for run in rep.runs:
        if run.objective is not None:
            assert run.objective >= opt * (1 - 1e-9)
