"""Local algebras given by structure constants in an adapted basis.

Basis element 0 is the unit; the remaining basis elements span the maximal
ideal.  Under that convention locality reduces to a nilpotency check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Sequence

from . import linalg
from .linalg import Subspace


class AlgebraError(ValueError):
    """A structure-constant table that does not describe a local algebra."""


class UnitLawViolation(AlgebraError):
    pass


class NotCommutative(AlgebraError):
    pass


class NotAssociative(AlgebraError):
    pass


class NotAdaptedBasis(AlgebraError):
    pass


class NotNilpotent(AlgebraError):
    pass


class NotInvertible(ArithmeticError):
    pass


class AlgebraMismatch(ValueError):
    pass


class ModeMismatch(TypeError):
    pass


def _as_table(struct_consts, d: int) -> tuple:
    try:
        table = tuple(
            tuple(tuple(Fraction(c) for c in struct_consts[i][j]) for j in range(d)) for i in range(d)
        )
    except (IndexError, TypeError) as exc:
        raise AlgebraError(f"structure constants are not a {d}x{d}x{d} table") from exc
    if len(struct_consts) != d or any(len(row) != d for row in struct_consts):
        raise AlgebraError(f"structure constants are not a {d}x{d}x{d} table")
    if any(len(vec) != d for row in table for vec in row):
        raise AlgebraError(f"structure constants are not a {d}x{d}x{d} table")
    return table


class LocalAlgebra:
    """A finite-dimensional commutative local algebra over the rationals.

    ``table[i][j][k]`` is the coefficient of ``e_k`` in ``e_i * e_j``.
    Construction verifies every defining law and caches the chain of
    powers of the maximal ideal.
    """

    def __init__(self, labels: Sequence[str], struct_consts):
        labels = tuple(str(x) for x in labels)
        d = len(labels)
        if d < 1:
            raise AlgebraError("an algebra needs at least the unit basis element")
        if labels[0] != "1":
            raise AlgebraError(f'basis label 0 must be "1", got {labels[0]!r}')
        self.labels = labels
        self.table = _as_table(struct_consts, d)
        self._terms = tuple(
            tuple(tuple((k, c) for k, c in enumerate(self.table[i][j]) if c) for j in range(d))
            for i in range(d)
        )
        self._check_unit()
        self._check_commutative()
        self._check_adapted()
        self._check_associative()
        self.powers = self._ideal_powers()
        self.height = len(self.powers) - 2

    @property
    def dim(self) -> int:
        return len(self.labels)

    def _check_unit(self) -> None:
        d = self.dim
        for j in range(d):
            expected = linalg.unit(d, j)
            if self.table[0][j] != expected or self.table[j][0] != expected:
                raise UnitLawViolation(f"e_0 * e_{j} != e_{j}")

    def _check_commutative(self) -> None:
        d = self.dim
        for i in range(d):
            for j in range(i + 1, d):
                if self.table[i][j] != self.table[j][i]:
                    raise NotCommutative(f"e_{i} * e_{j} != e_{j} * e_{i}")

    def _check_adapted(self) -> None:
        d = self.dim
        for i in range(1, d):
            for j in range(i, d):
                if self.table[i][j][0] != 0:
                    raise NotAdaptedBasis(
                        f"e_{i} * e_{j} has unit coefficient {self.table[i][j][0]}; "
                        "span(e_1..e_d-1) is not closed under multiplication"
                    )

    def _check_associative(self) -> None:
        # with commutativity the triples (i, j, k) and (k, j, i) give the same equation
        d = self.dim
        terms = self._terms
        for i in range(1, d):
            for j in range(1, d):
                left_ij = terms[i][j]
                for k in range(i, d):
                    lhs: dict = {}
                    for p, c in left_ij:
                        for q, c2 in terms[p][k]:
                            lhs[q] = lhs.get(q, 0) + c * c2
                    rhs: dict = {}
                    for p, c in terms[j][k]:
                        for q, c2 in terms[i][p]:
                            rhs[q] = rhs.get(q, 0) + c * c2
                    if {q: c for q, c in lhs.items() if c} != {q: c for q, c in rhs.items() if c}:
                        raise NotAssociative(f"(e_{i} e_{j}) e_{k} != e_{i} (e_{j} e_{k})")

    def _ideal_powers(self) -> tuple:
        d = self.dim
        chain = [linalg.full_space(d), linalg.span_of_units(d, range(1, d))]
        while not chain[-1].is_zero():
            current = chain[-1]
            products = []
            for v in current.basis:
                support = [(p, c) for p, c in enumerate(v) if c]
                for j in range(1, d):
                    out: dict = {}
                    for p, c in support:
                        for q, c2 in self._terms[p][j]:
                            out[q] = out.get(q, 0) + c * c2
                    if any(out.values()):
                        products.append(tuple(Fraction(out.get(q, 0)) for q in range(d)))
            nxt = linalg.echelon(products, d)
            if nxt == current:
                raise NotNilpotent(
                    f"powers of the maximal ideal stabilize at dimension {current.dim} != 0"
                )
            chain.append(nxt)
        return tuple(chain)

    def mul_vectors(self, a: Sequence, b: Sequence, zero=Fraction(0)) -> tuple:
        out = [zero] * self.dim
        for i, x in enumerate(a):
            if not x:
                continue
            row = self._terms[i]
            for j, y in enumerate(b):
                if not y:
                    continue
                xy = x * y
                for k, c in row[j]:
                    out[k] += c * xy
        return tuple(out)

    def ideal_power(self, k: int) -> Subspace:
        if k < 0:
            raise ValueError("ideal powers are indexed from 0")
        if k >= len(self.powers):
            return linalg.zero_subspace(self.dim)
        return self.powers[k]

    @property
    def maximal_ideal(self) -> Subspace:
        return self.powers[1]

    def hilbert_vector(self) -> tuple[int, ...]:
        return tuple(self.powers[i].dim - self.powers[i + 1].dim for i in range(self.height + 1))

    # elements -------------------------------------------------------------

    def element(self, coeffs: Sequence, exact: bool = True) -> "Element":
        return Element.make(self, coeffs, exact)

    def one(self, exact: bool = True) -> "Element":
        return self.basis_element(0, exact)

    def zero(self, exact: bool = True) -> "Element":
        return self.element([0] * self.dim, exact)

    def basis_element(self, i: int, exact: bool = True) -> "Element":
        return self.element(linalg.unit(self.dim, i), exact)

    def __getitem__(self, label: str) -> "Element":
        return self.basis_element(self.labels.index(label))

    # identity ---------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, LocalAlgebra):
            return NotImplemented
        return self.labels == other.labels and self.table == other.table

    @cached_property
    def _hash(self) -> int:
        return hash((self.labels, self.table))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"LocalAlgebra(dim={self.dim}, basis={list(self.labels)}, height={self.height})"


def make_algebra(labels: Sequence[str], struct_consts) -> LocalAlgebra:
    return LocalAlgebra(labels, struct_consts)


def same_table(a: LocalAlgebra, b: LocalAlgebra) -> bool:
    """Equality of structure constants, ignoring basis labels."""
    return a.table == b.table


def height(a: LocalAlgebra) -> int:
    return a.height


def ideal_power(a: LocalAlgebra, k: int) -> Subspace:
    return a.ideal_power(k)


def hilbert_vector(a: LocalAlgebra) -> tuple[int, ...]:
    return a.hilbert_vector()


def from_products(labels: Sequence[str], products: dict) -> LocalAlgebra:
    """Build a table from ``{(i, j): {k: coeff}}`` for ideal basis pairs.

    Unit products are filled in; unspecified ideal products are zero.
    """
    d = len(labels)
    table = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    for j in range(d):
        table[0][j][j] = table[j][0][j] = Fraction(1)
    for (i, j), prod in products.items():
        for k, c in prod.items():
            table[i][j][k] = table[j][i][k] = Fraction(c)
    return LocalAlgebra(labels, table)


REALS = LocalAlgebra(("1",), (((1,),),))
DUAL = from_products(("1", "eps"), {})


def _scalar_ok(x, exact: bool) -> bool:
    if isinstance(x, bool):
        return False
    if exact:
        return isinstance(x, Rational)
    return isinstance(x, (Rational, float))


@dataclass(frozen=True, eq=False)
class Element:
    """An element of a local algebra, exact (Fraction) or numeric (float)."""

    algebra: LocalAlgebra
    coeffs: tuple
    exact: bool = True

    @classmethod
    def make(cls, algebra: LocalAlgebra, coeffs: Sequence, exact: bool = True) -> "Element":
        if len(coeffs) != algebra.dim:
            raise AlgebraMismatch(f"{len(coeffs)} coefficients for an algebra of dimension {algebra.dim}")
        if exact:
            if any(isinstance(c, float) for c in coeffs):
                raise ModeMismatch("float coefficient in an exact element")
            vals = tuple(Fraction(c) for c in coeffs)
        else:
            vals = tuple(float(c) for c in coeffs)
        return cls(algebra, vals, exact)

    @property
    def finite_part(self):
        return self.coeffs[0]

    @property
    def nilpotent_part(self) -> "Element":
        return Element(self.algebra, (self._zero(),) + self.coeffs[1:], self.exact)

    def decompose(self):
        return self.finite_part, self.nilpotent_part

    def _zero(self):
        return Fraction(0) if self.exact else 0.0

    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            if other.algebra is not self.algebra and other.algebra != self.algebra:
                raise AlgebraMismatch("operands live in different algebras")
            if other.exact != self.exact:
                raise ModeMismatch("cannot mix exact and numeric elements")
            return other
        if _scalar_ok(other, self.exact):
            return self.algebra.one(self.exact).scale(other)
        raise ModeMismatch(f"cannot combine {type(other).__name__} with an {'exact' if self.exact else 'numeric'} element")

    def scale(self, s) -> "Element":
        if not _scalar_ok(s, self.exact):
            raise ModeMismatch(f"scalar {s!r} not allowed in {'exact' if self.exact else 'numeric'} mode")
        if not self.exact:
            s = float(s)
        return Element(self.algebra, tuple(c * s for c in self.coeffs), self.exact)

    def __add__(self, other) -> "Element":
        o = self._coerce(other)
        return Element(self.algebra, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)), self.exact)

    __radd__ = __add__

    def __neg__(self) -> "Element":
        return Element(self.algebra, tuple(-c for c in self.coeffs), self.exact)

    def __sub__(self, other) -> "Element":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Element":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Element":
        if not isinstance(other, Element):
            return self.scale(other)
        o = self._coerce(other)
        return Element(self.algebra, self.algebra.mul_vectors(self.coeffs, o.coeffs, self._zero()), self.exact)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Element":
        if isinstance(other, Element):
            return self * other.inverse()
        if not other:
            raise ZeroDivisionError("division by zero scalar")
        return self.scale(Fraction(1) / other if self.exact else 1.0 / other)

    def __rtruediv__(self, other) -> "Element":
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "Element":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = self.algebra.one(self.exact)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> "Element":
        """``a^-1 = alpha^-1 * sum_k (-n/alpha)^k`` for ``a = alpha + n``."""
        alpha, n = self.decompose()
        if alpha == 0:
            raise NotInvertible("element lies in the maximal ideal")
        inv_alpha = Fraction(1) / alpha if self.exact else 1.0 / alpha
        step = n.scale(-inv_alpha)
        term = self.algebra.one(self.exact)
        total = term
        for _ in range(self.algebra.height):
            term = term * step
            total = total + term
        return total.scale(inv_alpha)

    def series(self, coeffs: Sequence) -> "Element":
        """``sum_k coeffs[k] * n^k`` where ``n`` is the nilpotent part."""
        n = self.nilpotent_part
        total = self.algebra.zero(self.exact)
        power = self.algebra.one(self.exact)
        for k, c in enumerate(coeffs):
            if k > self.algebra.height:
                break
            if k:
                power = power * n
            if c:
                total = total + power.scale(c)
        return total

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_numeric(self) -> "Element":
        return Element(self.algebra, tuple(float(c) for c in self.coeffs), False)

    def __eq__(self, other) -> bool:
        if isinstance(other, Element):
            return (self.algebra is other.algebra or self.algebra == other.algebra) and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        terms = []
        for c, lab in zip(self.coeffs, self.algebra.labels):
            if c:
                shown = linalg.format_rat(c) if self.exact else repr(c)
                terms.append(shown if lab == "1" else f"{shown}*{lab}")
        return " + ".join(terms) if terms else "0"


def decompose(a: Element):
    return a.decompose()


def invert(a: Element) -> Element:
    return a.inverse()


@dataclass(frozen=True)
class MorphismReport:
    ok: bool
    failure: str | None = None
    pair: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


class MorphismError(ValueError):
    def __init__(self, report: MorphismReport):
        super().__init__(report.failure)
        self.report = report


@dataclass(frozen=True, eq=False)
class AlgMorphism:
    """A linear map between local algebras, stored as a target x source matrix."""

    source: LocalAlgebra
    target: LocalAlgebra
    matrix: tuple

    def __post_init__(self):
        m = tuple(tuple(Fraction(x) for x in row) for row in self.matrix)
        if len(m) != self.target.dim or any(len(row) != self.source.dim for row in m):
            raise AlgebraMismatch(
                f"matrix shape does not match {self.target.dim}x{self.source.dim}"
            )
        object.__setattr__(self, "matrix", m)

    def apply_vector(self, v: Sequence, zero=Fraction(0)) -> tuple:
        return linalg.matvec(self.matrix, v, zero)

    def __call__(self, a: Element) -> Element:
        if a.algebra is not self.source and a.algebra != self.source:
            raise AlgebraMismatch("element is not in the morphism's source")
        zero = Fraction(0) if a.exact else 0.0
        return Element(self.target, self.apply_vector(a.coeffs, zero), a.exact)

    def __matmul__(self, other: "AlgMorphism") -> "AlgMorphism":
        """``self @ other`` is the composite ``self ∘ other``."""
        if other.target is not self.source and other.target != self.source:
            raise AlgebraMismatch("composite of non-composable morphisms")
        return AlgMorphism(other.source, self.target, linalg.matmul(self.matrix, other.matrix))

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgMorphism):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.matrix == other.matrix

    __hash__ = object.__hash__

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.matrix)

    def rank(self) -> int:
        return linalg.rank(self.matrix)

    def is_epimorphism(self) -> bool:
        return self.rank() == self.target.dim

    def check(self) -> "AlgMorphism":
        report = verify_morphism(self)
        if not report:
            raise MorphismError(report)
        return self


def verify_morphism(f: AlgMorphism) -> MorphismReport:
    src, tgt = f.source, f.target
    if f.column(0) != linalg.unit(tgt.dim, 0):
        return MorphismReport(False, "not unital: image of the unit is not the unit", (0, 0))
    images = [f.column(j) for j in range(src.dim)]
    for i in range(1, src.dim):
        for j in range(i, src.dim):
            lhs = f.apply_vector(src.table[i][j])
            rhs = tgt.mul_vectors(images[i], images[j])
            if lhs != rhs:
                return MorphismReport(
                    False,
                    f"not multiplicative at ({src.labels[i]}, {src.labels[j]})",
                    (i, j),
                )
    for j in range(1, src.dim):
        if images[j][0] != 0:
            return MorphismReport(False, f"maximal ideal not preserved at {src.labels[j]}", (j, j))
    return MorphismReport(True)


def identity_morphism(a: LocalAlgebra) -> AlgMorphism:
    return AlgMorphism(a, a, linalg.identity(a.dim))


def zero_morphism(a: LocalAlgebra) -> AlgMorphism:
    """The unique morphism ``A -> R`` keeping the finite part."""
    return AlgMorphism(a, REALS, (linalg.unit(a.dim, 0),))


def unit_inclusion(a: LocalAlgebra) -> AlgMorphism:
    """The unique morphism ``R -> A``."""
    return AlgMorphism(REALS, a, tuple((Fraction(1) if i == 0 else Fraction(0),) for i in range(a.dim)))


def is_isomorphism(f: AlgMorphism) -> bool:
    return (
        f.source.dim == f.target.dim
        and linalg.inverse(f.matrix) is not None
        and bool(verify_morphism(f))
    )


def inverse_morphism(f: AlgMorphism) -> AlgMorphism:
    inv = linalg.inverse(f.matrix) if f.source.dim == f.target.dim else None
    if inv is None:
        raise NotInvertible("morphism is not bijective")
    return AlgMorphism(f.target, f.source, inv)


def transported_table(f: AlgMorphism) -> tuple:
    """Structure constants of ``f.target`` read back through a bijective ``f``.

    Equal to ``f.source.table`` exactly when ``f`` is multiplicative.
    """
    inv = linalg.inverse(f.matrix)
    if inv is None:
        raise NotInvertible("morphism is not bijective")
    d = f.source.dim
    cols = [f.column(j) for j in range(d)]
    return tuple(
        tuple(linalg.matvec(inv, f.target.mul_vectors(cols[i], cols[j])) for j in range(d))
        for i in range(d)
    )


def rebase(a: LocalAlgebra, basis_change: Sequence[Sequence], labels: Sequence[str] | None = None):
    """Rewrite ``a`` in a new adapted basis.

    ``basis_change`` has the new basis vectors (in old coordinates) as
    columns.  Returns the rewritten algebra and the isomorphism into ``a``.
    """
    p = tuple(tuple(Fraction(x) for x in row) for row in basis_change)
    inv = linalg.inverse(p)
    if inv is None:
        raise AlgebraError("basis change is singular")
    d = a.dim
    cols = [tuple(row[j] for row in p) for j in range(d)]
    table = [[linalg.matvec(inv, a.mul_vectors(cols[i], cols[j])) for j in range(d)] for i in range(d)]
    new = LocalAlgebra(labels or ("1",) + tuple(f"b{i}" for i in range(1, d)), table)
    return new, AlgMorphism(new, a, p)
