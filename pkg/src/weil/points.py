"""A-points of coordinate space and the evaluation of expressions through them.

An A-point over ``R^m`` is a base point ``x0`` together with one element of
the maximal ideal per coordinate.  Evaluating an expression sends each
variable to ``x0_i + n_i`` and runs the expression through the algebra;
elementary functions use their Taylor series at the finite part, which is
finite because the nilpotent part dies beyond the height.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import linalg
from .algebra import (
    REALS,
    AlgebraMismatch,
    AlgMorphism,
    Element,
    LocalAlgebra,
    ModeMismatch,
)
from .constructions import ConstructionResult, pullback, tensor
from .expr import (
    Expr,
    arity,
    default_var_names,
    evaluate,
    identifiers,
    parse_expr,
    substitute,
    to_string,
)
from .truncated import TruncSpec


class PoleAtPoint(ArithmeticError):
    pass


class DomainError(ValueError):
    pass


class WrongAlgebraKind(TypeError):
    pass


def _zero(exact: bool):
    return Fraction(0) if exact else 0.0


@dataclass(frozen=True, eq=False)
class APoint:
    """``u(x_i) = base[i] + nilpotents[i]`` with every nilpotent in the maximal ideal."""

    algebra: LocalAlgebra
    base: tuple
    nilpotents: tuple
    exact: bool = False

    def __post_init__(self):
        conv = Fraction if self.exact else float
        if self.exact and any(isinstance(b, float) for b in self.base):
            raise ModeMismatch("float base coordinate in an exact point")
        object.__setattr__(self, "base", tuple(conv(b) for b in self.base))
        nils = []
        for n in self.nilpotents:
            if not isinstance(n, Element):
                n = Element.make(self.algebra, n, self.exact)
            if n.algebra != self.algebra:
                raise AlgebraMismatch("nilpotent value lives in another algebra")
            if n.exact != self.exact:
                n = n if self.exact else n.to_numeric()
                if n.exact != self.exact:
                    raise ModeMismatch("numeric nilpotent in an exact point")
            if n.finite_part != 0:
                raise ValueError("nilpotent coordinate has a nonzero finite part")
            nils.append(n)
        if len(nils) != len(self.base):
            raise ValueError("one nilpotent value per coordinate")
        object.__setattr__(self, "nilpotents", tuple(nils))

    @classmethod
    def from_ideal_coords(cls, algebra: LocalAlgebra, base, ideal_coords, exact: bool = False) -> "APoint":
        """Build from nilpotent coordinates on ``e_1 .. e_{d-1}``."""
        nils = [(0,) + tuple(c) for c in ideal_coords]
        return cls(algebra, tuple(base), tuple(nils), exact)

    @property
    def arity(self) -> int:
        return len(self.base)

    def coordinates(self) -> list[Element]:
        return [n + b for b, n in zip(self.base, self.nilpotents)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, APoint):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self.base == other.base
            and all(a.coeffs == b.coeffs for a, b in zip(self.nilpotents, other.nilpotents))
        )

    __hash__ = object.__hash__

    def __repr__(self) -> str:
        return f"APoint(base={list(self.base)}, nilpotents={[n.coeffs[1:] for n in self.nilpotents]})"


def target(u: APoint) -> tuple:
    """The underlying base point."""
    return u.base


# -- elementary functions --------------------------------------------------------


def _real(a) -> float:
    """The real number underneath a scalar or an algebra element."""
    while not isinstance(a, (int, float, Fraction)):
        a = a.finite_part
    return float(a)


def taylor_coefficients(name: str, alpha, order: int, fn: Callable, inv: Callable) -> list:
    """``g^(k)(alpha)/k!`` for ``k <= order``.

    ``alpha`` may be a float or an algebra element; ``fn(name, alpha)``
    evaluates an elementary function on it and ``inv`` inverts it.
    """
    real = _real(alpha)
    if name in ("log", "sqrt") and real <= 0:
        raise DomainError(f"{name} needs a positive finite part, got {real}")
    coeffs = []
    if name == "exp":
        e = fn("exp", alpha)
        coeffs = [e * (1.0 / math.factorial(k)) for k in range(order + 1)]
    elif name in ("sin", "cos"):
        s, c = fn("sin", alpha), fn("cos", alpha)
        cycle = [s, c, -s, -c] if name == "sin" else [c, -s, -c, s]
        coeffs = [cycle[k % 4] * (1.0 / math.factorial(k)) for k in range(order + 1)]
    elif name == "log":
        coeffs = [fn("log", alpha)]
        if order:
            ia = inv(alpha)
            p = ia
            for k in range(1, order + 1):
                coeffs.append(p * ((-1) ** (k - 1) / k))
                p = p * ia
    elif name == "sqrt":
        r = fn("sqrt", alpha)
        coeffs = [r]
        if order:
            ia = inv(alpha)
            p = r
            binom = 1.0
            for k in range(1, order + 1):
                binom *= (0.5 - (k - 1)) / k
                p = p * ia
                coeffs.append(p * binom)
    else:
        raise ValueError(f"unknown function {name!r}")
    return coeffs


_MATH = {"exp": math.exp, "log": math.log, "sin": math.sin, "cos": math.cos, "sqrt": math.sqrt}


def scalar_call(name: str, x):
    x = float(x)
    if name in ("log", "sqrt") and x <= 0:
        raise DomainError(f"{name} needs a positive argument, got {x}")
    return _MATH[name](x)


def element_call(name: str, a: Element) -> Element:
    """``g(a) = sum_k g^(k)(alpha)/k! * n^k`` for ``a = alpha + n``."""
    if a.exact:
        raise ModeMismatch("elementary functions need numeric mode")
    coeffs = taylor_coefficients(name, a.finite_part, a.algebra.height, scalar_call, lambda x: 1.0 / x)
    return a.series(coeffs)


def element_div(a: Element, b: Element) -> Element:
    if isinstance(b, (int, float, Fraction)):
        if not b:
            raise PoleAtPoint("division by zero")
        return a / b
    if isinstance(b, Nested):
        return b._lift(a) / b
    if b.finite_part == 0:
        raise PoleAtPoint("denominator vanishes at the base point")
    if not isinstance(a, Element):
        return b._coerce(a) * b.inverse()
    return a * b.inverse()


def eval_apoint(u: APoint, f: Expr) -> Element:
    """``u(f)``: the expression evaluated at ``x0 + n`` in the algebra."""
    one = u.algebra.one(u.exact)

    def const(c):
        if u.exact and isinstance(c, float):
            raise ModeMismatch("float constant in exact mode")
        return one.scale(c)

    return evaluate_values(f, u.coordinates(), const)


def evaluate_values(f: Expr, values: Sequence, const: Callable):
    return evaluate(f, values, const=const, div=element_div, call=_dispatch_call)


def _dispatch_call(name, a):
    if isinstance(a, Nested):
        return a.call(name)
    return element_call(name, a)


# -- smooth maps and lifting ---------------------------------------------------------


@dataclass(frozen=True)
class SmoothMap:
    """``R^m -> R^n`` given by one expression per output coordinate."""

    arity_in: int
    components: tuple
    in_names: tuple = ()
    out_names: tuple = ()

    def __post_init__(self):
        if not self.in_names:
            object.__setattr__(self, "in_names", default_var_names(self.arity_in))
        if not self.out_names:
            object.__setattr__(self, "out_names", tuple(f"y{j}" for j in range(1, len(self.components) + 1)))
        if len(self.in_names) != self.arity_in or len(self.out_names) != len(self.components):
            raise ValueError("names do not match the arities")
        for c in self.components:
            if arity(c) > self.arity_in:
                raise ValueError("component uses a variable beyond the declared arity")

    @property
    def arity_out(self) -> int:
        return len(self.components)

    def then(self, psi: "SmoothMap") -> "SmoothMap":
        """``psi ∘ self``."""
        if psi.arity_in != self.arity_out:
            raise ValueError("maps are not composable")
        comps = tuple(substitute(c, self.components) for c in psi.components)
        return SmoothMap(self.arity_in, comps, self.in_names, psi.out_names)

    def __str__(self) -> str:
        return "; ".join(f"{o} = {to_string(c, self.in_names)}" for o, c in zip(self.out_names, self.components))


def parse_map(text: str, in_names: Sequence[str] | None = None) -> SmoothMap:
    """Parse ``"y1 = exp(x1)*x2; y2 = x1^2"``.

    Input variables default to every free identifier in natural order.
    """
    parts = [p.strip() for p in text.split(";") if p.strip()]
    outs, rhss = [], []
    for p in parts:
        lhs, eq, rhs = p.partition("=")
        if not eq or not lhs.strip():
            raise ValueError(f"component {p!r} is not of the form name = expression")
        outs.append(lhs.strip())
        rhss.append(rhs)
    if in_names is None:
        in_names = identifiers(" + ".join(f"({r})" for r in rhss))
    comps = tuple(parse_expr(r, in_names) for r in rhss)
    return SmoothMap(len(in_names), comps, tuple(in_names), tuple(outs))


def lift(phi: SmoothMap, u: APoint) -> APoint:
    """``A phi (u)``: base ``phi(x0)``, nilpotents the nilpotent parts of ``u(phi_j)``."""
    if u.arity != phi.arity_in:
        raise ValueError(f"point has {u.arity} coordinates, map expects {phi.arity_in}")
    values = [eval_apoint(u, c) for c in phi.components]
    return APoint(u.algebra, tuple(v.finite_part for v in values), tuple(v.nilpotent_part for v in values), u.exact)


def lift_map(phi: SmoothMap, algebra: LocalAlgebra | None = None) -> Callable[[APoint], APoint]:
    def lifted(u: APoint) -> APoint:
        if algebra is not None and u.algebra != algebra:
            raise AlgebraMismatch("point lives over another algebra")
        return lift(phi, u)

    return lifted


def kappa_action(kappa: AlgMorphism, u: APoint) -> APoint:
    """Push an A-point forward along ``kappa: A -> B``."""
    if u.algebra != kappa.source:
        raise AlgebraMismatch("point is not over the morphism's source")
    return APoint(kappa.target, u.base, tuple(kappa(n) for n in u.nilpotents), u.exact)


def point_discrepancy(a: APoint, b: APoint) -> float:
    if a.algebra != b.algebra or a.arity != b.arity:
        return math.inf
    diffs = [abs(x - y) for x, y in zip(a.base, b.base)]
    for n, m in zip(a.nilpotents, b.nilpotents):
        diffs.extend(abs(x - y) for x, y in zip(n.coeffs, m.coeffs))
    return float(max(diffs, default=0))


def element_discrepancy(a: Element, b: Element) -> float:
    if a.algebra != b.algebra:
        return math.inf
    return float(max((abs(x - y) for x, y in zip(a.coeffs, b.coeffs)), default=0))


# -- jets ---------------------------------------------------------------------------


def jet_extract(value: Element, spec: TruncSpec) -> dict:
    """``{exponents: coefficient}`` of an element of a truncated algebra over R."""
    if spec.base.dim != 1:
        raise WrongAlgebraKind("jets are read from truncated algebras over R")
    if value.algebra != spec.build():
        raise WrongAlgebraKind("element does not belong to the given truncated algebra")
    return {m: value.coeffs[i] for (m, _), i in spec.basis_index().items()}


def jet_point(spec: TruncSpec, at: Sequence, exact: bool = False) -> APoint:
    """The canonical jet point ``x_i -> a_i + t_i``."""
    alg = spec.build()
    index = spec.basis_index()
    nils = []
    for i in range(spec.n_vars):
        e = tuple(int(j == i) for j in range(spec.n_vars))
        if (e, 0) not in index:
            v = linalg.zeros(alg.dim)
        else:
            v = linalg.unit(alg.dim, index[(e, 0)])
        nils.append(v)
    return APoint(alg, tuple(at), tuple(nils), exact)


def jet(f: Expr, order: int, at: Sequence, exact: bool = False, per_variable: bool = False) -> dict:
    """Taylor coefficients ``d^a f(x0)/a!`` of ``f`` through total degree ``order``."""
    m = len(at)
    spec = (
        TruncSpec.per_variable(REALS, (order,) * m, ("t",) if m == 1 else None)
        if per_variable
        else TruncSpec.total_degree(REALS, m, order, ("t",) if m == 1 else tuple(f"t{i}" for i in range(1, m + 1)))
    )
    u = jet_point(spec, at, exact)
    return jet_extract(eval_apoint(u, f), spec)


# -- tensor products and composition -----------------------------------------------------


class Nested:
    """An element of ``A1`` whose coefficients are elements of ``A2``."""

    def __init__(self, outer: LocalAlgebra, coeffs: Sequence[Element]):
        self.outer = outer
        self.coeffs = tuple(coeffs)
        self.inner = coeffs[0].algebra
        self.exact = coeffs[0].exact

    def _lift(self, other):
        if isinstance(other, Nested):
            return other
        one = self.inner.one(self.exact)
        c = other if isinstance(other, Element) else one.scale(other)
        zero = self.inner.zero(self.exact)
        return Nested(self.outer, (c,) + (zero,) * (self.outer.dim - 1))

    @property
    def finite_part(self) -> Element:
        return self.coeffs[0]

    @property
    def nilpotent_part(self) -> "Nested":
        return Nested(self.outer, (self.inner.zero(self.exact),) + self.coeffs[1:])

    def __add__(self, other):
        o = self._lift(other)
        return Nested(self.outer, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Nested(self.outer, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Nested):
            if isinstance(other, Element):
                return Nested(self.outer, [a * other for a in self.coeffs])
            return Nested(self.outer, [a.scale(other) for a in self.coeffs])
        d = self.outer.dim
        out = [self.inner.zero(self.exact)] * d
        table = self.outer.table
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                ab = a * b
                for k, c in enumerate(table[i][j]):
                    if c:
                        out[k] = out[k] + ab.scale(c if self.exact else float(c))
        return Nested(self.outer, out)

    __rmul__ = __mul__

    def scale(self, s):
        return self * s

    def inverse(self) -> "Nested":
        alpha = self.finite_part
        if alpha.finite_part == 0:
            raise PoleAtPoint("denominator vanishes at the base point")
        ia = alpha.inverse()
        step = self.nilpotent_part * (-ia)
        term = self._lift(1)
        total = term
        for _ in range(self.outer.height):
            term = term * step
            total = total + term
        return total * ia

    def __truediv__(self, other):
        if isinstance(other, Nested):
            return self * other.inverse()
        return self * self._lift(other).inverse()

    def series(self, coeffs: Sequence[Element]) -> "Nested":
        n = self.nilpotent_part
        total = self._lift(0)
        power = self._lift(1)
        for k, c in enumerate(coeffs):
            if k > self.outer.height:
                break
            if k:
                power = power * n
            total = total + power * c
        return total

    def call(self, name: str) -> "Nested":
        if self.exact:
            raise ModeMismatch("elementary functions need numeric mode")
        coeffs = taylor_coefficients(name, self.finite_part, self.outer.height, element_call, lambda a: a.inverse())
        return self.series(coeffs)


def to_nested(value: Element, a1: LocalAlgebra, a2: LocalAlgebra) -> Nested:
    """Row-major ``e_i ⊗ f_j`` coordinates to an ``A1`` element over ``A2``."""
    d2 = a2.dim
    return Nested(a1, [Element(a2, value.coeffs[i * d2:(i + 1) * d2], value.exact) for i in range(a1.dim)])


def from_nested(n: Nested, flat: LocalAlgebra) -> Element:
    return Element(flat, tuple(c for a in n.coeffs for c in a.coeffs), n.exact)


@dataclass(frozen=True)
class WitnessReport:
    max_discrepancy: float
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.max_discrepancy == 0

    def within(self, tol: float) -> bool:
        return self.max_discrepancy <= tol


def tensor_compose_witness(f: Expr, a1: LocalAlgebra, a2: LocalAlgebra, u: APoint) -> WitnessReport:
    """Compare ``u(f)`` over ``A1 ⊗ A2`` with the nested evaluation (``A1`` over ``A2``)."""
    flat = tensor(a1, a2).algebra
    if u.algebra != flat:
        raise AlgebraMismatch("point must live over the tensor product")
    direct = eval_apoint(u, f)
    values = [to_nested(x, a1, a2) for x in u.coordinates()]
    one = to_nested(flat.one(u.exact), a1, a2)

    def const(c):
        if u.exact and isinstance(c, float):
            raise ModeMismatch("float constant in exact mode")
        return one * c

    nested = from_nested(evaluate_values(f, values, const), flat)
    return WitnessReport(element_discrepancy(direct, nested), {"direct": direct, "nested": nested})


def pullback_points_witness(
    phi1: AlgMorphism, phi2: AlgMorphism, u: APoint, f: Expr, result: ConstructionResult | None = None
) -> WitnessReport:
    """Check that points over a pullback are pairs of points with equal images.

    Measures: the two pushed-forward points agree after ``phi_i``; evaluation
    commutes with both projections; the pair reconstructs ``u``.
    """
    if result is None:
        result = pullback(phi1, phi2)
    if u.algebra != result.algebra:
        raise AlgebraMismatch("point must live over the pullback")
    u1 = kappa_action(result["Pr1"], u)
    u2 = kappa_action(result["Pr2"], u)
    images = point_discrepancy(kappa_action(phi1, u1), kappa_action(phi2, u2))
    value = eval_apoint(u, f)
    eval1 = element_discrepancy(result["Pr1"](value), eval_apoint(u1, f))
    eval2 = element_discrepancy(result["Pr2"](value), eval_apoint(u2, f))
    # rebuild u from the pair through the inclusion into the biproduct
    incl = result.data["inclusion"]
    product = result.data["product"]
    roundtrip = 0.0
    for n, n1, n2 in zip(u.nilpotents, u1.nilpotents, u2.nilpotents):
        pair = [a + b for a, b in zip(product["In1"](n1).coeffs, product["In2"](n2).coeffs)]
        rebuilt = Element(u.algebra, _read_pivots(incl, pair), u.exact)
        residual = max(abs(a - b) for a, b in zip(incl(rebuilt).coeffs, pair))
        roundtrip = max(roundtrip, float(residual), element_discrepancy(n, rebuilt))
    details = {"images": images, "eval_Pr1": eval1, "eval_Pr2": eval2, "roundtrip": roundtrip, "bases": (u1.base, u2.base)}
    return WitnessReport(max(images, eval1, eval2, roundtrip), details)


def _read_pivots(inclusion: AlgMorphism, v: Sequence) -> tuple:
    """Coordinates of ``v`` along an inclusion whose columns are a unit plus an RREF basis."""
    out = []
    for j in range(inclusion.source.dim):
        col = inclusion.column(j)
        piv = next(i for i, c in enumerate(col) if c)
        out.append(v[piv] / col[piv])
    return tuple(out)
