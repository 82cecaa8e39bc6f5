"""JSON persistence for algebras, morphisms, ideals and points.

Rationals are written as strings (``"3"``, ``"-1/2"``); integers are also
accepted on input.  An algebra is ``{"dim", "basis", "mul"}`` with
``mul[i][j]`` the coordinates of ``e_i * e_j``.  Algebra references are either an embedded object, a
built-in name (``"R"``, ``"dual"``) or a path relative to the referring
file.  Output is canonical: sorted keys, fixed indentation, newline at end.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import linalg
from .algebra import DUAL, REALS, AlgMorphism, LocalAlgebra, MorphismError, verify_morphism
from .ideals import Ideal, ideal_generate
from .points import APoint

BUILTINS = {"R": REALS, "dual": DUAL}


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# -- primitives ----------------------------------------------------------------------


def _rat(value, path: str) -> Fraction:
    try:
        return linalg.parse_rat(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(path, f"not a rational number ({exc})") from None


def _number(value, path: str, exact: bool):
    if isinstance(value, float):
        if exact:
            raise SchemaError(path, "float not allowed in exact mode")
        return value
    q = _rat(value, path)
    return q if exact else float(q)


def _list(value, path: str, length: int | None = None) -> list:
    if not isinstance(value, list):
        raise SchemaError(path, "expected a list")
    if length is not None and len(value) != length:
        raise SchemaError(path, f"expected {length} entries, found {len(value)}")
    return value


def _obj(value, path: str, keys: tuple) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(path, "expected an object")
    for k in keys:
        if k not in value:
            raise SchemaError(f"{path}.{k}", "missing field")
    return value


def _int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, "expected an integer")
    return value


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def fmt(q) -> str:
    return linalg.format_rat(q)


# -- algebras ------------------------------------------------------------------------------


def algebra_to_json(a: LocalAlgebra) -> dict:
    """``mul[i][j]`` is the coordinate vector of ``e_i * e_j``."""
    return {
        "dim": a.dim,
        "basis": list(a.labels),
        "mul": [[[fmt(c) for c in a.table[i][j]] for j in range(a.dim)] for i in range(a.dim)],
    }


def algebra_from_json(obj, path: str = "$") -> LocalAlgebra:
    obj = _obj(obj, path, ("dim", "basis", "mul"))
    d = _int(obj["dim"], f"{path}.dim")
    if d < 1:
        raise SchemaError(f"{path}.dim", "dimension must be positive")
    labels = _list(obj["basis"], f"{path}.basis", d)
    for n, lab in enumerate(labels):
        if not isinstance(lab, str):
            raise SchemaError(f"{path}.basis[{n}]", "expected a string")
    table = []
    for i, row in enumerate(_list(obj["mul"], f"{path}.mul", d)):
        out_row = []
        for j, entry in enumerate(_list(row, f"{path}.mul[{i}]", d)):
            p = f"{path}.mul[{i}][{j}]"
            out_row.append([_rat(c, f"{p}[{k}]") for k, c in enumerate(_list(entry, p, d))])
        table.append(out_row)
    return LocalAlgebra(labels, table)


def resolve_algebra(ref, base_dir: Path | None = None, path: str = "$") -> LocalAlgebra:
    if isinstance(ref, str):
        if ref in BUILTINS:
            return BUILTINS[ref]
        file = Path(ref) if base_dir is None else base_dir / ref
        if not file.exists():
            raise SchemaError(path, f"unknown algebra reference {ref!r}")
        return algebra_from_json(_read_json(file), path)
    return algebra_from_json(ref, path)


# -- morphisms -------------------------------------------------------------------------


def morphism_to_json(f: AlgMorphism) -> dict:
    return {
        "source": algebra_to_json(f.source),
        "target": algebra_to_json(f.target),
        "matrix": [[fmt(x) for x in row] for row in f.matrix],
    }


def morphism_from_json(obj, base_dir: Path | None = None, path: str = "$") -> AlgMorphism:
    obj = _obj(obj, path, ("source", "target", "matrix"))
    src = resolve_algebra(obj["source"], base_dir, f"{path}.source")
    tgt = resolve_algebra(obj["target"], base_dir, f"{path}.target")
    rows = _list(obj["matrix"], f"{path}.matrix", tgt.dim)
    matrix = [
        [_rat(x, f"{path}.matrix[{r}][{c}]") for c, x in enumerate(_list(row, f"{path}.matrix[{r}]", src.dim))]
        for r, row in enumerate(rows)
    ]
    f = AlgMorphism(src, tgt, matrix)
    report = verify_morphism(f)
    if not report:
        raise MorphismError(report)
    return f


# -- ideals -------------------------------------------------------------------------------


def ideal_to_json(j: Ideal, algebra_ref=None) -> dict:
    return {
        "algebra": algebra_ref if algebra_ref is not None else algebra_to_json(j.algebra),
        "basis": [[fmt(x) for x in v] for v in j.basis],
    }


def ideal_from_json(obj, base_dir: Path | None = None, path: str = "$") -> Ideal:
    """The ideal generated by the listed vectors."""
    obj = _obj(obj, path, ("algebra", "basis"))
    alg = resolve_algebra(obj["algebra"], base_dir, f"{path}.algebra")
    gens = [
        [_rat(x, f"{path}.basis[{n}][{c}]") for c, x in enumerate(_list(v, f"{path}.basis[{n}]", alg.dim))]
        for n, v in enumerate(_list(obj["basis"], f"{path}.basis"))
    ]
    return ideal_generate(alg, gens)


# -- points ---------------------------------------------------------------------------


def point_to_json(u: APoint, algebra_ref=None) -> dict:
    def num(x):
        return fmt(x) if isinstance(x, Fraction) else x

    return {
        "algebra": algebra_ref if algebra_ref is not None else algebra_to_json(u.algebra),
        "base": [num(b) for b in u.base],
        "nilpotents": [[num(c) for c in n.coeffs[1:]] for n in u.nilpotents],
    }


def point_from_json(obj, algebra: LocalAlgebra | None = None, exact: bool = False,
                    base_dir: Path | None = None, path: str = "$") -> APoint:
    """Nilpotent values are coordinates on ``e_1 .. e_{d-1}``."""
    keys = ("base", "nilpotents") if algebra is not None else ("algebra", "base", "nilpotents")
    obj = _obj(obj, path, keys)
    alg = resolve_algebra(obj["algebra"], base_dir, f"{path}.algebra") if "algebra" in obj else algebra
    base = [_number(b, f"{path}.base[{n}]", exact) for n, b in enumerate(_list(obj["base"], f"{path}.base"))]
    nils = _list(obj["nilpotents"], f"{path}.nilpotents", len(base))
    coords = [
        [_number(c, f"{path}.nilpotents[{n}][{m}]", exact) for m, c in enumerate(_list(v, f"{path}.nilpotents[{n}]", alg.dim - 1))]
        for n, v in enumerate(nils)
    ]
    return APoint.from_ideal_coords(alg, base, coords, exact)


# -- files ----------------------------------------------------------------------------


def _read_json(path: Path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(str(path), f"cannot read file ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(str(path), f"invalid JSON: {exc.msg} at line {exc.lineno}") from None


def detect_kind(obj) -> str:
    if not isinstance(obj, dict):
        raise SchemaError("$", "expected an object")
    if {"dim", "basis", "mul"} <= obj.keys():
        return "algebra"
    if {"source", "target", "matrix"} <= obj.keys():
        return "morphism"
    if {"base", "nilpotents"} <= obj.keys():
        return "point"
    if {"algebra", "basis"} <= obj.keys():
        return "ideal"
    raise SchemaError("$", "cannot tell which kind of object this is")


@dataclass(frozen=True)
class Loaded:
    kind: str
    value: Any


def load(path, exact: bool = False) -> Loaded:
    """Load and verify any supported object."""
    path = Path(path)
    obj = _read_json(path)
    kind = detect_kind(obj)
    base_dir = path.parent
    if kind == "algebra":
        return Loaded(kind, algebra_from_json(obj))
    if kind == "morphism":
        return Loaded(kind, morphism_from_json(obj, base_dir))
    if kind == "ideal":
        return Loaded(kind, ideal_from_json(obj, base_dir))
    return Loaded(kind, point_from_json(obj, exact=exact, base_dir=base_dir))


def load_algebra(ref, exact: bool = False) -> LocalAlgebra:
    if isinstance(ref, str) and ref in BUILTINS:
        return BUILTINS[ref]
    return algebra_from_json(_read_json(Path(ref)), "$")


def load_morphism(path) -> AlgMorphism:
    path = Path(path)
    return morphism_from_json(_read_json(path), path.parent)


def to_json(value) -> dict:
    if isinstance(value, LocalAlgebra):
        return algebra_to_json(value)
    if isinstance(value, AlgMorphism):
        return morphism_to_json(value)
    if isinstance(value, Ideal):
        return ideal_to_json(value)
    if isinstance(value, APoint):
        return point_to_json(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def save(value, path) -> None:
    Path(path).write_text(dumps(to_json(value)), encoding="utf-8")
