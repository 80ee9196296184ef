"""Command-line interface: ``l2alex {alex,classical,fox,det,weighted} ...``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np
import sympy

from .alexander import l2_alexander
from .dsl import parse_presentation
from .errors import L2AlexError, ParseError
from .fk import ENGINES, TraceSeriesConfig, det_truncation, fk_determinant, laurent_to_ring
from .fox import LaurentPoly, classical_alexander, delete_column, fox_matrix
from .groups import FreeAbelianGroup, FreeGroup, GroupModel, TorusKnotGroup, trefoil_model
from .knots import (
    knot_input,
    load_crossing_table,
    model_for,
    parse_knot_spec,
    phi_from_abelianization,
)
from .ring import PhiGrading, RingElement, RingMatrix
from .weighted import ChainComplexW, restriction_check, weighted_bettis, weighted_torsion_z

EXIT_OK, EXIT_EVAL, EXIT_PARSE = 0, 1, 2


class CliParseError(Exception):
    pass


# ---------------------------------------------------------------- inputs


def parse_grid(single: float | None, spec: str | None) -> list[float]:
    """``--t`` value or ``lo:hi:n`` / ``lo:hi:nlog`` range."""
    if spec is None:
        if single is None:
            raise CliParseError("give --t or --t-range")
        return [single]
    parts = spec.split(":")
    if len(parts) != 3:
        raise CliParseError(f"bad range {spec!r}, expected lo:hi:n or lo:hi:nlog")
    log = parts[2].endswith("log")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        n = int(parts[2][:-3] if log else parts[2])
    except ValueError as exc:
        raise CliParseError(f"bad range {spec!r}") from exc
    if n < 1:
        raise CliParseError("grid must be nonempty")
    if log:
        if lo <= 0 or hi <= 0:
            raise CliParseError("log range needs positive endpoints")
        return [float(v) for v in np.geomspace(lo, hi, n)]
    return [float(v) for v in np.linspace(lo, hi, n)]


def parse_laurent(text: str, var: str = "z") -> LaurentPoly:
    z = sympy.Symbol(var)
    try:
        expr = sympy.expand(sympy.sympify(text, locals={var: z}))
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise CliParseError(f"cannot parse polynomial {text!r}") from exc
    out: dict[int, complex] = {}
    for term in sympy.Add.make_args(expr):
        coef, exp = term.as_coeff_exponent(z)
        if coef.has(z) or not exp.is_integer or coef.free_symbols:
            raise CliParseError(f"term {term} is not a Laurent monomial in {var}")
        c = complex(coef)
        out[int(exp)] = out.get(int(exp), 0) + (int(c.real) if c.imag == 0 and c.real.is_integer() else c)
    return LaurentPoly(out)


def load_presentation_source(args) -> tuple:
    """(presentation, φ, model) from --knot, --presentation or --file."""
    if args.knot:
        return knot_input(parse_knot_spec(args.knot))
    if args.presentation:
        pres = parse_presentation(args.presentation)
    elif args.file:
        path = Path(args.file)
        if path.suffix == ".json":
            return knot_input(load_crossing_table(path))
        pres = parse_presentation(path.read_text())
    else:
        raise CliParseError("give --knot, --presentation or --file")
    phi = phi_from_abelianization(pres)
    return pres, phi, model_for(pres)


def model_from_name(name: str) -> GroupModel:
    if name == "Z":
        return FreeAbelianGroup(["z"])
    if name == "trefoil":
        return trefoil_model()
    if name.startswith("torus:"):
        spec = parse_knot_spec(name)
        return TorusKnotGroup(spec.p, spec.q)
    if name.startswith("free:"):
        return FreeGroup(name[len("free:"):].split(","))
    raise CliParseError(f"unknown group {name!r}")


# ---------------------------------------------------------------- output


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def _emit(out: TextIO, records: list[dict], table: bool) -> None:
    if table:
        out.write("t\tvalue\trigorous\terror\n")
        for r in records:
            t = r.get("t", {})
            tv = t.get("re") if isinstance(t, dict) and not t.get("im") else t
            out.write(f"{tv}\t{r.get('value')}\t{r.get('rigorous')}\t{r.get('error_bound')}\n")
    else:
        for r in records:
            out.write(_dump(r) + "\n")


# ---------------------------------------------------------------- commands


def _config(args) -> TraceSeriesConfig:
    if args.max_order < 1:
        raise CliParseError("--max-order must be at least 1")
    if args.tol <= 0:
        raise CliParseError("--tol must be positive")
    return TraceSeriesConfig(max_order=args.max_order, tol=args.tol)


def cmd_alex(args) -> tuple[list[dict], int]:
    grid = parse_grid(args.t, args.t_range)
    config = _config(args)
    pres, phi, model = load_presentation_source(args)
    records, code = [], EXIT_OK
    for t in grid:
        try:
            res = l2_alexander(pres, phi, model, t, j=args.j, engine=args.engine, config=config, radius=args.radius)
            records.append(res.to_json())
        except L2AlexError as exc:
            code = EXIT_EVAL
            records.append({"t": {"re": t, "im": 0.0}, "error": type(exc).__name__, "message": str(exc)})
    return records, code


def cmd_classical(args) -> tuple[list[dict], int]:
    pres, phi, _ = load_presentation_source(args)
    poly = classical_alexander(pres, phi, args.j)
    return [{"presentation": pres.format(), "polynomial": poly.format("t"), "coefficients": poly.to_json()}], EXIT_OK


def cmd_fox(args) -> tuple[list[dict], int]:
    pres, _, _ = load_presentation_source(args)
    F = fox_matrix(pres)
    if args.drop is not None:
        F = delete_column(F, args.drop, len(pres.generators))
    text = [[e.format() for e in row] for row in F.entries]
    return [{"presentation": pres.format(), "drop": args.drop, "matrix": text, "json": F.to_json()}], EXIT_OK


def cmd_det(args) -> tuple[list[dict], int]:
    model = model_from_name(args.group)
    if args.poly is not None:
        if not isinstance(model, FreeAbelianGroup):
            raise CliParseError("--poly needs --group Z")
        A = RingMatrix(model, [[laurent_to_ring(parse_laurent(args.poly), model)]])
    elif args.element is not None:
        raw = args.element
        if not raw.lstrip().startswith("["):
            raw = Path(raw).read_text()
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON: {exc.msg}", exc.lineno, exc.colno) from exc
        if data and isinstance(data[0], list):
            A = RingMatrix.from_json(model, data)
        else:
            A = RingMatrix(model, [[RingElement.from_json(model, data)]])
    else:
        raise CliParseError("give --poly or --element")
    phi = None
    if args.phi:
        phi = PhiGrading(tuple(int(x) for x in args.phi.split(",")))
    elif isinstance(model, FreeAbelianGroup):
        phi = PhiGrading((1,))
    if args.engine == "truncation":
        res = det_truncation(A, args.radius)
        rec = res.estimate.to_json()
        rec["previous_value"] = res.previous
        return [rec], EXIT_OK
    est = fk_determinant(A, args.engine, phi, _config(args), args.radius)
    rec = est.to_json()
    if "order" in est.diagnostics:
        rec["order"] = est.diagnostics["order"]
    return [rec], EXIT_OK


def cmd_weighted(args) -> tuple[list[dict], int]:
    if args.restriction is not None:
        p = parse_laurent(args.restriction)
        whole, sub = restriction_check(p, args.index)
        return [{"polynomial": p.format("z"), "index": args.index, "n_log_det": whole, "restricted_log_det": sub}], EXIT_OK
    if not args.file:
        raise CliParseError("give --file with a complex description or --restriction")
    try:
        data = json.loads(Path(args.file).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    C = ChainComplexW.from_json(data)
    bettis = weighted_bettis(C)
    records = [{"betti": [str(b) for b in bettis], "euler": C.euler_characteristic()}]
    if args.x is not None or args.x_range is not None:
        for x in parse_grid(args.x, args.x_range):
            records.append({"x": x, "torsion": weighted_torsion_z(C, x)})
    return records, EXIT_OK


# ---------------------------------------------------------------- parser


def _add_source(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--knot", help="torus:p,q | trefoil | figure-eight | unknot | file:PATH")
    g.add_argument("--presentation", help="e.g. '<a,b | a b a = b a b>'")
    g.add_argument("--file", help="presentation text file or crossing-table JSON")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--engine", choices=ENGINES, default="auto")
    p.add_argument("--max-order", type=int, default=400)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--radius", type=int, default=6, help="ball radius for the truncation engine")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--table", action="store_true", help="TSV (t, value, rigorous, error) instead of JSON lines")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="l2alex", description="L²-Alexander invariants of knots")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("alex", help="L²-Alexander invariant over a t-grid")
    _add_source(p)
    p.add_argument("--t", type=float)
    p.add_argument("--t-range")
    p.add_argument("--j", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_alex)

    p = sub.add_parser("classical", help="classical Alexander polynomial")
    _add_source(p)
    p.add_argument("--j", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classical, table=False)

    p = sub.add_parser("fox", help="Fox matrix, optionally with one column deleted")
    _add_source(p)
    p.add_argument("--drop", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fox, table=False)

    p = sub.add_parser("det", help="Fuglede–Kadison determinant of a group-ring element or matrix")
    p.add_argument("--group", default="Z", help="Z | trefoil | torus:p,q | free:a,b,...")
    p.add_argument("--poly", help="Laurent polynomial in z (group Z)")
    p.add_argument("--element", help="ring-element or matrix JSON (inline or path)")
    p.add_argument("--phi", help="grading on the group's generators, comma separated")
    _add_common(p)
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("weighted", help="weighted Betti numbers and torsion of a complex")
    p.add_argument("--file")
    p.add_argument("--x", type=float)
    p.add_argument("--x-range")
    p.add_argument("--restriction", help="Laurent polynomial for the finite-index restriction check")
    p.add_argument("--index", type=int, default=2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_weighted, table=False)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        records, code = args.func(args)
    except ParseError as exc:
        print(f"parse error at line {exc.line}, column {exc.column}: {exc.message}", file=sys.stderr)
        return EXIT_PARSE
    except CliParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except L2AlexError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_EVAL
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            _emit(fh, records, args.table)
    else:
        _emit(sys.stdout, records, args.table)
    return code


if __name__ == "__main__":
    sys.exit(main())
