"""Command-line front end: ``weil <subcommand> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on a usage
error (bad arguments, unreadable or malformed input).  Reports go to
standard output as single-line ``key=value`` records.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import io, linalg
from .algebra import REALS, AlgebraError, AlgMorphism, LocalAlgebra, ModeMismatch, MorphismError, same_table
from .checks import SUITES, run_suite
from .constructions import ConstructionError, ConstructionResult, biproduct, pullback, pushout, relative_product, tensor
from .expr import ExprSyntaxError, UnknownIdentifier, default_var_names, parse_expr
from .ideals import IdealError
from .points import DomainError, PoleAtPoint, eval_apoint, jet, lift, parse_map
from .polarization import PolarizationTooLarge, multidir_derivative_fd, polarize, unidirectional
from .truncated import (
    InclusionFails,
    ParameterOutOfRange,
    TruncSpec,
    build_B,
    build_C,
    categorical_B,
    categorical_C,
    certify_non_isomorphic,
)

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# failures of the objects themselves, as opposed to malformed requests
_VERIFICATION = (AlgebraError, MorphismError, IdealError, ConstructionError, InclusionFails, PoleAtPoint, DomainError)


def num(x) -> str:
    if isinstance(x, Fraction):
        return linalg.format_rat(x)
    x = float(x)
    return str(int(x)) if x.is_integer() and abs(x) < 2 ** 53 else repr(x)


def record(**fields) -> str:
    return " ".join(f"{k}={v}" for k, v in fields.items())


def invariant_fields(a: LocalAlgebra) -> dict:
    return {"dim": a.dim, "height": a.height, "hilbert": ",".join(map(str, a.hilbert_vector()))}


def _write(value, path: str | None) -> None:
    if path:
        io.save(value, path)


def _parse_number(x: str):
    x = x.strip()
    if any(c in x for c in ".eE") and "/" not in x:
        return float(x)
    return linalg.parse_rat(x)


def _numbers(text: str) -> list:
    try:
        return [_parse_number(x) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad number list {text!r}: {exc}") from None


# -- subcommands -------------------------------------------------------------------------


def cmd_verify(args) -> int:
    try:
        loaded = io.load(args.file, exact=args.exact)
    except _VERIFICATION as exc:
        print(record(status="fail", error=type(exc).__name__, message=json.dumps(str(exc))))
        return FAILED
    extra = {}
    if loaded.kind == "algebra":
        extra = invariant_fields(loaded.value)
    elif loaded.kind == "morphism":
        extra = {"source_dim": loaded.value.source.dim, "target_dim": loaded.value.target.dim}
    elif loaded.kind == "ideal":
        extra = {"dim": loaded.value.dim}
    print(record(status="ok", kind=loaded.kind, **extra))
    return OK


def cmd_invariants(args) -> int:
    a = io.load_algebra(args.file)
    print(record(**invariant_fields(a)))
    return OK


def _emit_construction(result: ConstructionResult, out: str | None) -> None:
    if out:
        _save_construction(result, out)
    print(record(kind=result.kind, **invariant_fields(result.algebra), legs=",".join(result.legs)))


def cmd_construct(args) -> int:
    kind, inputs = args.kind, list(args.inputs)
    base = Path(".")
    if args.request:
        kind, inputs = _read_request(Path(args.request))
        base = Path(args.request).parent
    if kind is None:
        raise UsageError("construction kind required")
    if kind in ("product", "tensor"):
        algs = [_algebra_input(x, base) for x in inputs]
        if kind == "tensor" and len(algs) != 2:
            raise UsageError("tensor takes exactly two algebras")
        if len(algs) < 2:
            raise UsageError("product takes at least two algebras")
        result = tensor(*algs) if kind == "tensor" else biproduct(*algs)
    elif kind in ("relative", "pullback", "pushout"):
        maps = [_morphism_input(x, base) for x in inputs]
        if kind != "relative" and len(maps) != 2:
            raise UsageError(f"{kind} takes exactly two morphisms")
        result = {"relative": relative_product, "pullback": pullback, "pushout": pushout}[kind](*maps)
    else:
        raise UsageError(f"unknown construction {kind!r}")
    _emit_construction(result, args.output)
    return OK


def _read_request(path: Path):
    """``{"kind", "inputs": [...]}`` or numbered keys such as ``phi1``, ``phi2``."""
    req = io._read_json(path)
    if not isinstance(req, dict) or "kind" not in req:
        raise io.SchemaError("$", "request needs a 'kind'")
    if "inputs" in req:
        return req["kind"], io._list(req["inputs"], "$.inputs")
    numbered = sorted(
        (k for k in req if k != "kind" and k.rstrip("0123456789") != k),
        key=lambda k: int(k[len(k.rstrip("0123456789")):]),
    )
    if not numbered:
        raise io.SchemaError("$", "request needs 'inputs' or numbered inputs such as 'phi1'")
    return req["kind"], [req[k] for k in numbered]


def _algebra_input(x, base: Path) -> LocalAlgebra:
    if isinstance(x, dict):
        return io.algebra_from_json(x)
    if x in io.BUILTINS:
        return io.BUILTINS[x]
    p = Path(x) if Path(x).is_absolute() or base == Path(".") else base / x
    return io.load_algebra(str(p))


def _morphism_input(x, base: Path) -> AlgMorphism:
    if isinstance(x, dict):
        return io.morphism_from_json(x, base)
    p = Path(x) if Path(x).is_absolute() or base == Path(".") else base / x
    return io.load_morphism(p)


def _spec_from_args(args) -> TruncSpec:
    base = io.load_algebra(args.base)
    names = tuple(n.strip() for n in args.names.split(",")) if args.names else None
    if (args.total is None) == (args.degrees is None):
        raise UsageError("give exactly one of --total or --degrees")
    if args.total is not None:
        if args.vars is None:
            raise UsageError("--total needs --vars")
        return TruncSpec.total_degree(base, args.vars, args.total, names)
    degrees = [int(k) for k in args.degrees.split(",")]
    if args.vars is not None and args.vars != len(degrees):
        raise UsageError("--vars disagrees with the number of --degrees")
    return TruncSpec.per_variable(base, degrees, names)


def cmd_truncated(args) -> int:
    try:
        spec = _spec_from_args(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    a = spec.build()
    _write(a, args.output)
    print(record(**invariant_fields(a)))
    return OK


def cmd_family(args) -> int:
    params = list(args.params)
    family = params.pop(0) if params and params[0] in ("B", "C", "compare") else args.flag
    if family is None:
        raise UsageError("choose a family: B, C or compare")
    if args.flag and family != args.flag:
        raise UsageError("conflicting family choices")
    try:
        r, t, s = (int(x) for x in params)
    except ValueError:
        raise UsageError("family needs three integers r t s") from None
    args.family = family
    base = io.load_algebra(args.base)
    try:
        if args.family == "compare":
            cert = certify_non_isomorphic(build_B(r, t, s, base).algebra, build_C(r, t, s, base).algebra)
            print(record(verdict=cert.verdict, reason=json.dumps(cert.reason)))
            return OK
        build, categorical = (build_B, categorical_B) if args.family == "B" else (build_C, categorical_C)
        result = build(r, t, s, base)
    except ParameterOutOfRange as exc:
        raise UsageError(str(exc)) from None
    fields = invariant_fields(result.algebra)
    fields["module_rank"] = result.algebra.dim // base.dim
    status = OK
    if args.check:
        agree = same_table(result.algebra, categorical(r, t, s, base).algebra)
        fields["categorical"] = "agree" if agree else "differ"
        status = OK if agree else FAILED
    if args.output:
        _save_construction(result, args.output)
    print(record(family=args.family, **fields))
    return status


def _save_construction(result: ConstructionResult, out: str) -> None:
    """The algebra goes to ``out``, each leg to ``<stem>.<leg>.json`` beside it."""
    io.save(result.algebra, out)
    stem = Path(out)
    for name, leg in result.legs.items():
        io.save(leg, stem.with_name(f"{stem.stem}.{name}.json"))


def _point_input(text: str, algebra: LocalAlgebra, exact: bool):
    text = text.strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"inline point is not valid JSON: {exc.msg}") from None
        return io.point_from_json(obj, algebra=algebra, exact=exact)
    path = Path(text)
    return io.point_from_json(io._read_json(path), algebra=algebra, exact=exact, base_dir=path.parent)


def _fmt_point(u) -> str:
    base = "[" + ",".join(num(b) for b in u.base) + "]"
    nils = "[" + ",".join("[" + ",".join(num(c) for c in n.coeffs[1:]) + "]" for n in u.nilpotents) + "]"
    return record(base=base, nilpotents=nils)


def cmd_lift(args) -> int:
    algebra = io.load_algebra(args.algebra)
    names = [n.strip() for n in args.vars.split(",")] if args.vars else None
    try:
        phi = parse_map(args.map, names)
    except (ExprSyntaxError, UnknownIdentifier, ValueError) as exc:
        raise UsageError(f"bad map: {exc}") from None
    u = _point_input(args.point, algebra, args.exact)
    if u.arity != phi.arity_in:
        raise UsageError(f"point has {u.arity} coordinates but the map reads {phi.arity_in} ({','.join(phi.in_names)})")
    v = lift(phi, u)
    _write(v, args.output)
    print(_fmt_point(v))
    return OK


def cmd_jet(args) -> int:
    at = _numbers(args.at)
    if len(at) != args.vars:
        raise UsageError(f"--at has {len(at)} coordinates, expected {args.vars}")
    names = [n.strip() for n in args.names.split(",")] if args.names else default_var_names(args.vars)
    try:
        f = parse_expr(args.expr, names)
    except (ExprSyntaxError, UnknownIdentifier) as exc:
        raise UsageError(f"bad expression: {exc}") from None
    if args.exact and any(isinstance(a, float) for a in at):
        raise UsageError("--exact needs rational coordinates")
    coeffs = jet(f, args.order, at if args.exact else [float(a) for a in at], exact=args.exact)
    spec = TruncSpec.total_degree(REALS, args.vars, args.order, ("t",) if args.vars == 1 else tuple(f"t{i}" for i in range(1, args.vars + 1)))
    labels = spec.build().labels
    order = spec.basis_index()
    items = sorted(coeffs.items(), key=lambda kv: order[(kv[0], 0)])
    print(" ".join(f"{labels[order[(m, 0)]]}={num(c)}" for m, c in items))
    return OK


def cmd_polarize(args) -> int:
    at = _numbers(args.at)
    names = [n.strip() for n in args.names.split(",")] if args.names else default_var_names(len(at))
    try:
        f = parse_expr(args.expr, names)
    except (ExprSyntaxError, UnknownIdentifier) as exc:
        raise UsageError(f"bad expression: {exc}") from None
    if args.unidirectional:
        dirs = [_numbers(args.unidirectional)] * args.order
    else:
        dirs = [_numbers(d) for d in args.dirs.split(";")] if args.dirs else []
    if len(dirs) != args.order:
        raise UsageError(f"--order {args.order} needs {args.order} directions, got {len(dirs)}")
    if any(len(d) != len(at) for d in dirs):
        raise UsageError("directions must have as many coordinates as --at")
    if args.fd:
        step = _parse_number(args.step) if args.step else Fraction(1, 2)
        res = multidir_derivative_fd(f, args.order, at, dirs, step=step)
        print(record(value=num(res.value), error=f"{res.error:.3g}", exact=str(res.exact).lower(),
                     converged=str(res.converged).lower()))
        return OK if res.converged else FAILED
    value = unidirectional(f, args.order, at, dirs[0]) if args.unidirectional and args.order else polarize(f, args.order, at, dirs)
    print(record(value=num(value), exact=str(isinstance(value, Fraction)).lower()))
    return OK


def cmd_check(args) -> int:
    rows = run_suite(args.suite)
    failed = 0
    for suite, name, passed, detail in rows:
        failed += not passed
        fields = {"suite": suite, "result": "pass" if passed else "fail", "property": json.dumps(name)}
        if detail:
            fields["detail"] = json.dumps(detail)
        print(record(**fields))
    return FAILED if failed else OK


# -- parser --------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="weil", description="Local (Weil) algebras, their constructions and jet evaluation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("verify", help="load a JSON object and run its verifier")
    s.add_argument("file")
    s.add_argument("--exact", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("invariants", help="dimension, height and hilbert vector")
    s.add_argument("file", help="algebra JSON or a built-in name (R, dual)")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("construct", help="build a product, relative product, pullback, pushout or tensor")
    s.add_argument("kind", nargs="?", choices=["product", "relative", "pullback", "pushout", "tensor"])
    s.add_argument("inputs", nargs="*")
    s.add_argument("--request", help="JSON file with 'kind' and 'inputs'")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("truncated", help="truncated polynomial algebra")
    s.add_argument("--base", default="R")
    s.add_argument("--vars", type=int)
    s.add_argument("--total", "--total-degree", dest="total", type=int)
    s.add_argument("--degrees")
    s.add_argument("--names")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_truncated)

    s = sub.add_parser("family", help="the B and C families over a base algebra")
    s.add_argument("params", nargs="+", metavar="[B|C|compare] r t s")
    s.add_argument("--B", dest="flag", action="store_const", const="B")
    s.add_argument("--C", dest="flag", action="store_const", const="C")
    s.add_argument("--base", default="R")
    s.add_argument("--check", action="store_true", help="compare with the categorical construction")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_family)

    s = sub.add_parser("lift", help="push a point through a smooth map")
    s.add_argument("--algebra", required=True)
    s.add_argument("--map", required=True)
    s.add_argument("--point", required=True, help="point JSON file or inline JSON")
    s.add_argument("--vars", help="input variable names in order")
    s.add_argument("--exact", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("jet", help="Taylor coefficients through a truncated algebra")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--vars", type=int, default=1)
    s.add_argument("--expr", required=True)
    s.add_argument("--at", required=True)
    s.add_argument("--names")
    s.add_argument("--exact", action="store_true")
    s.set_defaults(func=cmd_jet)

    s = sub.add_parser("polarize", help="polarization and finite-difference derivatives")
    s.add_argument("--expr", required=True)
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--at", required=True)
    s.add_argument("--dirs")
    s.add_argument("--unidirectional")
    s.add_argument("--names")
    s.add_argument("--fd", action="store_true")
    s.add_argument("--step")
    s.set_defaults(func=cmd_polarize)

    s = sub.add_parser("check", help="run a named property suite")
    s.add_argument("suite", choices=sorted(SUITES) + ["all"])
    s.set_defaults(func=cmd_check)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"weil: error: {exc}", file=sys.stderr)
        return USAGE
    except io.SchemaError as exc:
        print(record(status="error", error="SchemaError", path=exc.path, message=json.dumps(str(exc))), file=sys.stderr)
        return USAGE
    except (ExprSyntaxError, UnknownIdentifier, ModeMismatch, PolarizationTooLarge) as exc:
        print(f"weil: error: {exc}", file=sys.stderr)
        return USAGE
    except _VERIFICATION as exc:
        print(record(status="fail", error=type(exc).__name__, message=json.dumps(str(exc))))
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
