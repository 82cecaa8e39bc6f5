"""Exact rational linear algebra on coordinate vectors.

Vectors are tuples of ``Fraction``; matrices are tuples of row tuples.
Subspaces are stored by their reduced row-echelon basis, which is unique,
so two subspaces are equal exactly when their bases are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]
Matrix = tuple  # tuple[Vector, ...], row-major


class DimensionMismatch(ValueError):
    pass


def parse_rat(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a reduced Fraction."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    s = text.strip()
    if "/" in s:
        num, _, den = s.partition("/")
        p, q = int(num), int(den)
        if q == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(p, q)
    return Fraction(int(s))


def format_rat(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def vec(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


def zeros(n: int) -> Vector:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(1) if k == i else Fraction(0) for k in range(n))


def is_zero(v: Sequence) -> bool:
    return not any(v)


def identity(n: int) -> Matrix:
    return tuple(unit(n, i) for i in range(n))


def zero_matrix(rows: int, cols: int) -> Matrix:
    return tuple(zeros(cols) for _ in range(rows))


def transpose(m: Sequence[Sequence], cols: int | None = None) -> Matrix:
    if not m:
        return tuple(() for _ in range(cols or 0))
    return tuple(tuple(row[j] for row in m) for j in range(len(m[0])))


def matvec(m: Sequence[Sequence], v: Sequence, zero=Fraction(0)) -> tuple:
    """``m v``; ``zero`` fixes the result type when a row contributes nothing."""
    return tuple(sum((a * b for a, b in zip(row, v) if a and b), zero) for row in m)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    """Product of an (r x n) and an (n x c) matrix."""
    if not a:
        return ()
    n = len(a[0])
    if len(b) != n:
        raise DimensionMismatch(f"cannot multiply {len(a)}x{n} by {len(b)}x?")
    cols = len(b[0]) if b else 0
    bt = transpose(b, cols)
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)) for col in bt)
        for row in a
    )


def _rref_rows(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """In-place Gauss-Jordan; returns (nonzero rows, pivot columns)."""
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pivot_row = rows[r]
        inv = 1 / pivot_row[c]
        if inv != 1:
            pivot_row[:] = [x * inv for x in pivot_row]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], pivot_row)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m:
        return 0
    rows = [list(map(Fraction, row)) for row in m]
    return len(_rref_rows(rows, len(rows[0]))[1])


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^ambient_dim held by its canonical RREF basis."""

    ambient_dim: int
    basis: tuple  # tuple[Vector, ...], reduced row-echelon form

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(v) if x != 0) for v in self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def reduce(self, v: Sequence) -> Vector:
        """Remainder of ``v`` after clearing every pivot coordinate."""
        out = list(map(Fraction, v))
        for row, p in zip(self.basis, self.pivots):
            c = out[p]
            if c:
                out = [x - c * y for x, y in zip(out, row)]
        return tuple(out)

    def __contains__(self, v) -> bool:
        return member(v, self)

    def __le__(self, other: "Subspace") -> bool:
        return all(member(v, other) for v in self.basis)


def echelon(vectors: Iterable[Sequence], ambient_dim: int | None = None) -> Subspace:
    """Canonical reduced row-echelon basis of the span of ``vectors``."""
    rows = [list(map(Fraction, v)) for v in vectors]
    dims = {len(r) for r in rows}
    if ambient_dim is not None:
        dims.add(ambient_dim)
    if len(dims) > 1:
        raise DimensionMismatch(f"vectors of differing lengths {sorted(dims)}")
    n = dims.pop() if dims else 0
    rows = [r for r in rows if any(r)]
    if not rows:
        return Subspace(n, ())
    reduced, _ = _rref_rows(rows, n)
    return Subspace(n, tuple(tuple(r) for r in reduced))


def zero_subspace(n: int) -> Subspace:
    return Subspace(n, ())


def full_space(n: int) -> Subspace:
    return Subspace(n, identity(n))


def span_of_units(n: int, indices: Iterable[int]) -> Subspace:
    return echelon([unit(n, i) for i in indices], n)


def _check_same(u: Subspace, v: Subspace) -> None:
    if u.ambient_dim != v.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions {u.ambient_dim} and {v.ambient_dim}")


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    _check_same(u, v)
    return echelon(u.basis + v.basis, u.ambient_dim)


def member(v: Sequence, u: Subspace) -> bool:
    if len(v) != u.ambient_dim:
        raise DimensionMismatch(f"vector of length {len(v)} in ambient {u.ambient_dim}")
    return is_zero(u.reduce(v))


def nullspace(m: Sequence[Sequence], ncols: int | None = None) -> Subspace:
    """Right null space {x : m x = 0}."""
    if not m:
        return full_space(ncols or 0)
    n = len(m[0])
    rows = [list(map(Fraction, r)) for r in m]
    reduced, pivots = _rref_rows(rows, n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            x[p] = -row[f]
        basis.append(x)
    return echelon(basis, n)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    """U ∩ V from the kernel of the stacked system a·U - b·V = 0."""
    _check_same(u, v)
    if u.is_zero() or v.is_zero():
        return zero_subspace(u.ambient_dim)
    cols = list(u.basis) + [tuple(-x for x in w) for w in v.basis]
    system = transpose(cols)
    ker = nullspace(system, len(cols))
    k = len(u.basis)
    out = []
    for coeffs in ker.basis:
        w = [Fraction(0)] * u.ambient_dim
        for c, b in zip(coeffs[:k], u.basis):
            if c:
                w = [x + c * y for x, y in zip(w, b)]
        out.append(w)
    return echelon(out, u.ambient_dim)


def solve(m: Sequence[Sequence], b: Sequence) -> Vector | None:
    """One exact solution of ``m x = b``, or None when inconsistent."""
    if len(m) != len(b):
        raise DimensionMismatch(f"{len(m)} equations but right-hand side of length {len(b)}")
    if not m:
        return ()
    n = len(m[0])
    rows = [list(map(Fraction, r)) + [Fraction(bi)] for r, bi in zip(m, b)]
    reduced, pivots = _rref_rows(rows, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(reduced, pivots):
        x[p] = row[n]
    return tuple(x)


def solve_matrix(m: Sequence[Sequence], rhs: Sequence[Sequence]) -> Matrix | None:
    """Solve ``m X = rhs`` column by column; None when any column fails."""
    cols = len(rhs[0]) if rhs else 0
    out_cols = []
    for c in range(cols):
        x = solve(m, [row[c] for row in rhs])
        if x is None:
            return None
        out_cols.append(x)
    n = len(m[0]) if m else 0
    return transpose(out_cols) if out_cols else zero_matrix(n, 0)


def coordinates(v: Sequence, basis: Sequence[Sequence]) -> Vector | None:
    """Coefficients of ``v`` in terms of ``basis`` (None if outside the span)."""
    if not basis:
        return () if is_zero(v) else None
    return solve(transpose(basis), v)


def inverse(m: Sequence[Sequence]) -> Matrix | None:
    n = len(m)
    if n == 0:
        return ()
    if any(len(r) != n for r in m):
        raise DimensionMismatch("inverse of a non-square matrix")
    rows = [list(map(Fraction, r)) + list(unit(n, i)) for i, r in enumerate(m)]
    reduced, pivots = _rref_rows(rows, 2 * n)
    if pivots[:n] != list(range(n)) or len(reduced) < n:
        return None
    return tuple(tuple(r[n:]) for r in reduced)
