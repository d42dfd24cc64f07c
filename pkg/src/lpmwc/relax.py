"""Objective of the convex relaxation and the star integrality gap."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import Instance, MultiwayCut, lp_norm
from .errors import InfeasibleAssignment, InvalidInstance

ROW_TOL = 1e-9


@dataclass(frozen=True)
class FractionalAssignment:
    """Row v holds the fraction of vertex v placed in each part."""

    x: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        if x.ndim != 2:
            raise InvalidInstance(f"fractional assignment must be 2-dimensional, got shape {x.shape}")
        x.setflags(write=False)
        object.__setattr__(self, "x", x)

    @classmethod
    def indicator(cls, cut: MultiwayCut, k: int) -> FractionalAssignment:
        x = np.zeros((len(cut.assignment), k))
        x[np.arange(len(cut.assignment)), cut.assignment] = 1.0
        return cls(x)

    @property
    def shape(self) -> tuple[int, int]:
        return self.x.shape

    def check(self, inst: Instance) -> None:
        """Raise InfeasibleAssignment naming the first violated constraint."""
        x = self.x
        if x.shape != (inst.n, inst.k):
            raise InfeasibleAssignment(
                f"assignment has shape {x.shape}, instance needs {(inst.n, inst.k)}", "shape")
        bad = np.flatnonzero(~np.isfinite(x).all(axis=1) | (x < 0).any(axis=1))
        if len(bad):
            raise InfeasibleAssignment(f"vertex {bad[0]} has a negative or non-finite entry",
                                       "nonnegative", int(bad[0]))
        rows = x.sum(axis=1)
        bad = np.flatnonzero(np.abs(rows - 1.0) > ROW_TOL)
        if len(bad):
            v = int(bad[0])
            raise InfeasibleAssignment(f"row of vertex {v} sums to {rows[v]}, not 1", "row_sum", v)
        for i, t in enumerate(inst.terminals):
            if abs(x[t, i] - 1.0) > ROW_TOL:
                raise InfeasibleAssignment(f"terminal {t} has x[{t}, {i}] = {x[t, i]}, not 1",
                                           "terminal", t)


def part_costs(inst: Instance, fa: FractionalAssignment) -> np.ndarray:
    fa.check(inst)
    u, v, w = inst.graph.arrays
    if not len(w):
        return np.zeros(inst.k)
    return (w[:, None] * np.abs(fa.x[u] - fa.x[v])).sum(axis=0)


def cp_objective(inst: Instance, fa: FractionalAssignment) -> float:
    """p-norm over parts of sum_uv w(uv) |x(u,i) - x(v,i)|."""
    return lp_norm(part_costs(inst, fa), inst.p)


def uniform_star_assignment(inst: Instance) -> FractionalAssignment:
    """Terminals integral, every other vertex spread evenly over the parts."""
    x = np.full((inst.n, inst.k), 1.0 / inst.k)
    for i, t in enumerate(inst.terminals):
        x[t] = 0.0
        x[t, i] = 1.0
    return FractionalAssignment(x)


class StarGap(NamedTuple):
    integral_opt: float
    fractional_value: float
    gap_lower_bound: float

    @property
    def ratio(self) -> float:
        return self.integral_opt / self.fractional_value

    @property
    def holds(self) -> bool:
        return self.ratio >= self.gap_lower_bound * (1 - 1e-12)


def star_integral_opt(k: int, p: float) -> float:
    return ((k - 1) ** p + k - 1) ** (1 / p)


def star_fractional_value(k: int, p: float) -> float:
    return (2 * k - 2) / k * k ** (1 / p)


def star_gap(k: int, p: float, verify: bool = True) -> StarGap:
    """Integral optimum, uniform fractional value and the gap bound on the k-leaf star.

    With ``verify`` the closed forms are checked against the exact solver and
    the direct evaluation of the uniform assignment.
    """
    if k < 3:
        raise InvalidInstance(f"star needs k >= 3, got {k}")
    p = float(p)
    if not (p >= 1 and math.isfinite(p)):
        raise InvalidInstance(f"star gap needs finite p >= 1, got {p}")
    gap = StarGap(star_integral_opt(k, p), star_fractional_value(k, p), k ** (1 - 1 / p) / 2)
    if verify:
        from .exact import solve_exact
        from .instances import gen_star

        inst = gen_star(k, p)
        exact = solve_exact(inst).objective
        frac = cp_objective(inst, uniform_star_assignment(inst))
        assert math.isclose(exact, gap.integral_opt, rel_tol=1e-9), (exact, gap.integral_opt)
        assert math.isclose(frac, gap.fractional_value, rel_tol=1e-9), (frac, gap.fractional_value)
    assert gap.holds, f"ratio {gap.ratio} below k^(1-1/p)/2 = {gap.gap_lower_bound}"
    return gap
