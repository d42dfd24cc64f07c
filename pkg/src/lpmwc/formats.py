"""Plain-text instance and partition files.

Instance file::

    lpmwc 1
    # kind three_partition
    # B 20
    # threshold 2880.0694436072197
    p 2
    graph 13 18
    terminals 10 0 1 2 ...
    0 1 119.0
    ...

Metadata lives in ``#`` comments between the header and the ``p`` line;
other comments and blank lines are ignored. Partition files hold either
``part <i> <ids...>`` lines (1-based part numbers) or one
``frac <v> <x_1> ... <x_k>`` line per vertex.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from .core import GadgetMeta, Graph, Instance, MultiwayCut
from .errors import InvalidInstance, ParseError
from .relax import FractionalAssignment

HEADER = "lpmwc 1"


def fmt_num(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x.is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(x)


def _fmt_param(v: Any) -> str:
    if isinstance(v, (list, tuple)):
        return ",".join(fmt_num(x) for x in v)
    if isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool):
        return fmt_num(v)
    return str(v)


def _parse_param(s: str) -> Any:
    if "," in s:
        return [float(x) for x in s.split(",")]
    try:
        x = float(s)
    except ValueError:
        return s
    return int(x) if x.is_integer() and "." not in s and "e" not in s.lower() else x


def dump_instance(inst: Instance) -> str:
    lines = [HEADER]
    if inst.meta is not None:
        lines.append(f"# kind {inst.meta.kind}")
        for key, val in inst.meta.params.items():
            lines.append(f"# {key} {_fmt_param(val)}")
        if inst.meta.threshold is not None:
            lines.append(f"# threshold {fmt_num(inst.meta.threshold)}")
    g = inst.graph
    lines.append(f"p {fmt_num(inst.p)}")
    lines.append(f"graph {g.n} {g.m}")
    lines.append(f"terminals {inst.k} " + " ".join(str(t) for t in inst.terminals))
    lines += [f"{u} {v} {fmt_num(w)}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"line {lineno}: expected integers, got {' '.join(tokens)!r}") from None


def parse_instance(text: str) -> Instance:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise ParseError(f"line 1: expected header {HEADER!r}")
    kind = None
    params: dict[str, Any] = {}
    threshold = None
    p = n = m = None
    terminals: list[int] | None = None
    edges = []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            # metadata comments are only recognized before the body starts
            tok = line[1:].split()
            if p is None and len(tok) == 2:
                if tok[0] == "kind":
                    kind = tok[1]
                elif tok[0] == "threshold":
                    threshold = float(tok[1])
                else:
                    params[tok[0]] = _parse_param(tok[1])
            continue
        tok = line.split("#", 1)[0].split()
        if p is None:
            if tok[0] != "p" or len(tok) != 2:
                raise ParseError(f"line {lineno}: expected 'p <value>'")
            try:
                p = float(tok[1])
            except ValueError:
                raise ParseError(f"line {lineno}: bad p {tok[1]!r}") from None
        elif n is None:
            if tok[0] != "graph" or len(tok) != 3:
                raise ParseError(f"line {lineno}: expected 'graph <n> <m>'")
            n, m = _ints(tok[1:], lineno)
        elif terminals is None:
            if tok[0] != "terminals" or len(tok) < 2:
                raise ParseError(f"line {lineno}: expected 'terminals <k> <ids...>'")
            k, *ids = _ints(tok[1:], lineno)
            if len(ids) != k:
                raise ParseError(f"line {lineno}: declared {k} terminals, listed {len(ids)}")
            terminals = ids
        else:
            if len(tok) != 3:
                raise ParseError(f"line {lineno}: expected '<u> <v> <w>'")
            u, v = _ints(tok[:2], lineno)
            try:
                w = float(tok[2])
            except ValueError:
                raise ParseError(f"line {lineno}: bad weight {tok[2]!r}") from None
            edges.append((u, v, w))
    if terminals is None:
        raise ParseError("missing p, graph or terminals line")
    if len(edges) != m:
        raise ParseError(f"declared {m} edges, found {len(edges)}")
    meta = GadgetMeta(kind, params, threshold) if kind is not None else None
    try:
        return Instance(Graph(n, tuple(edges)), tuple(terminals), p, meta)
    except InvalidInstance as exc:
        raise ParseError(str(exc)) from exc


def dump_partition(cut: MultiwayCut, k: int) -> str:
    lines = []
    for i, part in enumerate(cut.parts(k), start=1):
        lines.append(f"part {i} " + " ".join(str(v) for v in sorted(part)))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def dump_fractional(fa: FractionalAssignment) -> str:
    return "".join(f"frac {v} " + " ".join(fmt_num(x) for x in row) + "\n"
                   for v, row in enumerate(fa.x))


def parse_partition(text: str, n: int, k: int) -> MultiwayCut | FractionalAssignment:
    """Read either variant; the first non-comment line decides which."""
    parts: dict[int, list[int]] = {}
    rows: dict[int, list[float]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tok = raw.split("#", 1)[0].split()
        if not tok:
            continue
        if tok[0] == "part" and not rows:
            if len(tok) < 2:
                raise ParseError(f"line {lineno}: expected 'part <i> <ids...>'")
            i, *ids = _ints(tok[1:], lineno)
            if not 1 <= i <= k:
                raise ParseError(f"line {lineno}: part number {i} outside 1..{k}")
            if i in parts:
                raise ParseError(f"line {lineno}: part {i} listed twice")
            parts[i] = ids
        elif tok[0] == "frac" and not parts:
            if len(tok) != k + 2:
                raise ParseError(f"line {lineno}: expected vertex id and {k} fractions")
            v = _ints(tok[1:2], lineno)[0]
            if not 0 <= v < n or v in rows:
                raise ParseError(f"line {lineno}: bad or repeated vertex {v}")
            try:
                rows[v] = [float(x) for x in tok[2:]]
            except ValueError:
                raise ParseError(f"line {lineno}: bad fraction") from None
        else:
            raise ParseError(f"line {lineno}: unexpected {tok[0]!r}")
    if rows:
        missing = [v for v in range(n) if v not in rows]
        if missing:
            raise ParseError(f"fractional rows missing for vertices {missing}")
        return FractionalAssignment(np.array([rows[v] for v in range(n)]))
    if not parts:
        raise ParseError("empty partition file")
    for ids in parts.values():
        for v in ids:
            if not 0 <= v < n:
                raise ParseError(f"vertex {v} out of range for n={n}")
    try:
        return MultiwayCut.from_parts(n, [parts.get(i, []) for i in range(1, k + 1)])
    except InvalidInstance as exc:
        raise ParseError(str(exc)) from exc
