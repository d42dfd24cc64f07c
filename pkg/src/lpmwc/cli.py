"""Command line: ``lpmwc gen | solve | eval | gap``."""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path
from typing import Any

from .approx import approx_solve, trivial_solve
from .core import Graph, Instance, MultiwayCut, lp_objective, part_connectivity, part_cuts
from .errors import (BudgetExceeded, Infeasible, InfeasibleAssignment, InvalidInstance,
                     LpmwcError, ParseError, UnsupportedP)
from .exact import DEFAULT_BUDGET, solve_exact, state_count
from .formats import dump_instance, dump_partition, fmt_num, parse_instance, parse_partition
from .instances import (gen_3partition, gen_bisection, gen_fig1, gen_mskp, gen_random, gen_star,
                        path_graph)
from .relax import FractionalAssignment, cp_objective, part_costs, star_gap

EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_BUDGET = 4
EXIT_UNSUPPORTED = 5
EXIT_INVALID = 1


def _floats(s: str) -> list[float]:
    return [float(x) for x in s.split(",") if x]


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _load_graph(args) -> Graph:
    if args.graph:
        return parse_instance(_read(args.graph)).graph
    return path_graph(args.path)


def _emit(report: dict[str, Any]) -> None:
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _num(x: float | None) -> Any:
    # JSON has no infinity; write it as a string
    if x is None:
        return None
    return x if math.isfinite(x) else fmt_num(x)


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "star":
        inst = gen_star(args.k, args.p)
    elif kind == "fig1":
        inst = gen_fig1(args.p)
    elif kind == "bisection":
        inst = gen_bisection(_load_graph(args), args.C, args.p)
    elif kind == "3partition":
        inst = gen_3partition(_floats(args.weights), args.B, args.p)
    elif kind == "mskp":
        inst = gen_mskp(_load_graph(args), args.k, args.B, args.p)
    else:
        inst = gen_random(args.n, args.k, args.density, (args.wmin, args.wmax), args.seed,
                          args.p, args.integer)
    sys.stdout.write(dump_instance(inst))
    return 0


def _cut_report(inst: Instance, cut: MultiwayCut, algorithm: str) -> dict[str, Any]:
    return {
        "algorithm": algorithm,
        "objective": lp_objective(inst, cut),
        "part_cuts": part_cuts(inst, cut).tolist(),
        "partition": [sorted(q) for q in cut.parts(inst.k)],
    }


def _run(inst: Instance, algo: str, args) -> tuple[MultiwayCut, dict[str, Any]]:
    t0 = time.perf_counter()
    extra: dict[str, Any] = {}
    if algo == "exact":
        rep = solve_exact(inst, budget=args.budget)
        cut = rep.optimum
        extra["states_explored"] = rep.states_explored
    elif algo == "trivial":
        cut = trivial_solve(inst)
    else:
        rep = approx_solve(inst, utc_mode=args.utc, beta=args.beta)
        cut = rep.cut
        extra.update(certified=rep.certified, d_grid=rep.d_grid, D_used=rep.D_used,
                     winner=rep.algorithm, mwu_sets=rep.mwu_sets,
                     uncross_steps=rep.uncross_steps, lower_bound=rep.lower_bound)
    extra["seconds"] = time.perf_counter() - t0
    return cut, extra


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.instance))
    report: dict[str, Any] = {"n": inst.n, "k": inst.k, "p": _num(inst.p), "seed": args.seed}
    if inst.meta is not None and inst.meta.threshold is not None:
        report["threshold"] = inst.meta.threshold

    if args.algo != "compare":
        cut, extra = _run(inst, args.algo, args)
        report.update(_cut_report(inst, cut, args.algo))
        report["certified"] = extra.pop("certified", None)
        report["d_grid"] = extra.pop("d_grid", [])
        report["timings"] = {args.algo: extra.pop("seconds")}
        report["details"] = extra
        oracle = None
        if args.algo == "exact":
            oracle = report["objective"]
        elif args.oracle:
            oracle = solve_exact(inst, budget=args.budget).objective
    else:
        algos = ["exact", "approx", "trivial"]
        results: dict[str, Any] = {}
        timings: dict[str, float] = {}
        best: tuple[float, int, str, MultiwayCut, dict] | None = None
        for rank, algo in enumerate(algos):
            if algo == "approx" and math.isinf(inst.p):
                results[algo] = {"skipped": "p = inf unsupported"}
                continue
            if algo == "exact" and state_count(inst) > args.budget:
                results[algo] = {"skipped": f"state count exceeds budget {args.budget}"}
                continue
            cut, extra = _run(inst, algo, args)
            timings[algo] = extra.pop("seconds")
            obj = lp_objective(inst, cut)
            results[algo] = {"objective": obj, **extra}
            if best is None or (obj, rank) < (best[0], best[1]):
                best = (obj, rank, algo, cut, extra)
        assert best is not None
        report.update(_cut_report(inst, best[3], best[2]))
        report["certified"] = results.get("approx", {}).get("certified")
        report["d_grid"] = results.get("approx", {}).get("d_grid", [])
        report["timings"] = timings
        report["algorithms"] = results
        oracle = results["exact"].get("objective")
    report["oracle_objective"] = oracle
    report["ratio_vs_oracle"] = (report["objective"] / oracle if oracle else
                                 (1.0 if oracle == 0 and report["objective"] == 0 else None))
    if args.partition_out:
        cut = MultiwayCut.from_parts(inst.n, report["partition"])
        Path(args.partition_out).write_text(dump_partition(cut, inst.k))
    _emit(report)
    return 0


def cmd_eval(args) -> int:
    inst = parse_instance(_read(args.instance))
    part = parse_partition(_read(args.partition), inst.n, inst.k)
    report: dict[str, Any] = {"n": inst.n, "k": inst.k, "p": _num(inst.p)}
    if isinstance(part, FractionalAssignment):
        costs = part_costs(inst, part)
        report.update(kind="fractional", objective=cp_objective(inst, part),
                      part_cuts=costs.tolist(), feasible=True)
    else:
        try:
            part.validate(inst)
        except InvalidInstance as exc:
            raise InfeasibleAssignment(str(exc), "terminal") from exc
        report.update(kind="integral", objective=lp_objective(inst, part),
                      part_cuts=part_cuts(inst, part).tolist(),
                      partition=[sorted(q) for q in part.parts(inst.k)],
                      connected=part_connectivity(inst, part))
    _emit(report)
    return 0


def cmd_gap(args) -> int:
    gap = star_gap(args.k, args.p)
    _emit({"k": args.k, "p": args.p, "integral_opt": gap.integral_opt,
           "fractional_value": gap.fractional_value, "gap_lower_bound": gap.gap_lower_bound,
           "ratio": gap.ratio, "holds": gap.holds})
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lpmwc", description="Minimum lp-norm multiway cut tools.")
    sub = ap.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a generated instance to stdout")
    gen.add_argument("kind", choices=["star", "fig1", "bisection", "3partition", "mskp", "random"])
    gen.add_argument("--k", type=int, default=4)
    gen.add_argument("--p", type=float, default=2.0)
    gen.add_argument("--C", type=int, default=1, help="bisection cut bound")
    gen.add_argument("--B", type=float, default=20.0)
    gen.add_argument("--weights", default="6,7,7", help="comma-separated 3-partition weights")
    gen.add_argument("--path", type=int, default=4, help="use a path on this many vertices as input graph")
    gen.add_argument("--graph", help="instance file whose graph is the input graph")
    gen.add_argument("--n", type=int, default=10)
    gen.add_argument("--density", type=float, default=0.5)
    gen.add_argument("--wmin", type=float, default=1.0)
    gen.add_argument("--wmax", type=float, default=10.0)
    gen.add_argument("--integer", action="store_true", help="integer random weights")
    gen.add_argument("--seed", type=int, default=0)
    gen.set_defaults(func=cmd_gen)

    solve = sub.add_parser("solve", help="solve an instance file, print a JSON report")
    solve.add_argument("instance")
    solve.add_argument("--algo", choices=["exact", "trivial", "approx", "compare"], default="compare")
    solve.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    solve.add_argument("--beta", type=float, default=None)
    solve.add_argument("--utc", choices=["auto", "exact", "heuristic"], default="auto")
    solve.add_argument("--seed", type=int, default=0,
                       help="recorded in the report; every solver is deterministic")
    solve.add_argument("--oracle", action="store_true", help="also run the exact solver for the ratio")
    solve.add_argument("--partition-out", help="write the returned partition to this file")
    solve.set_defaults(func=cmd_solve)

    ev = sub.add_parser("eval", help="evaluate a partition or fractional assignment")
    ev.add_argument("instance")
    ev.add_argument("partition")
    ev.set_defaults(func=cmd_eval)

    gap = sub.add_parser("gap", help="star integrality gap")
    gap.add_argument("--k", type=int, required=True)
    gap.add_argument("--p", type=float, required=True)
    gap.set_defaults(func=cmd_gap)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    codes = [(ParseError, EXIT_PARSE), (InfeasibleAssignment, EXIT_INFEASIBLE),
             (Infeasible, EXIT_INFEASIBLE), (BudgetExceeded, EXIT_BUDGET),
             (UnsupportedP, EXIT_UNSUPPORTED), (LpmwcError, EXIT_INVALID)]
    try:
        return args.func(args)
    except LpmwcError as exc:
        print(f"lpmwc: {exc}", file=sys.stderr)
        return next(code for cls, code in codes if isinstance(exc, cls))

if __name__ == "__main__":
    sys.exit(main())
