"""Polarizations, finite-difference multidirectional derivatives and Taylor remainders.

Everything here is computed from plain function values, so it serves as an
oracle independent of the algebra-valued evaluation in ``points``.
Polynomial expressions at rational inputs are handled exactly; everything
else is evaluated with mpmath at 50 significant digits.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import mpmath

from .expr import Expr, evaluate, evaluate_rational, expand, is_polynomial
from .points import DomainError, PoleAtPoint, jet

MAX_ORDER = 16
_DPS = 50


class PolarizationTooLarge(ValueError):
    pass


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


_MP_FUNCS = {"exp": mpmath.exp, "log": mpmath.log, "sin": mpmath.sin, "cos": mpmath.cos, "sqrt": mpmath.sqrt}


def _mp_call(name, x):
    if name in ("log", "sqrt") and x <= 0:
        raise DomainError(f"{name} needs a positive argument, got {x}")
    return _MP_FUNCS[name](x)


def _mp_const(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpf(c)


_to_mp = _mp_const


def _mp_div(a, b):
    if b == 0:
        raise PoleAtPoint("division by zero")
    return a / b


def evaluator(f, exact: bool) -> Callable:
    """A point -> value function for an expression or a plain callable."""
    if callable(f):
        return f
    if exact:
        return lambda p: evaluate_rational(f, p)

    def numeric(p):
        with mpmath.workdps(_DPS):
            return evaluate(f, [_to_mp(x) for x in p],
                            const=_mp_const, div=_mp_div, call=_mp_call)

    return numeric


def _is_expr(f) -> bool:
    return type(f).__module__.endswith(".expr")


def _exact_ok(f, *points) -> bool:
    if not _is_expr(f) or not is_polynomial(f):
        return False
    return all(_is_rational(x) for p in points for x in p)


def _shift(q, vs, subset):
    out = list(q)
    for i in subset:
        out = [a + b for a, b in zip(out, vs[i])]
    return out


def _polarize_with(fn: Callable, n: int, q: Sequence, vs: Sequence[Sequence]):
    total = 0
    for m in range(n + 1):
        sign = -1 if (n - m) % 2 else 1
        for subset in itertools.combinations(range(n), m):
            total = total + sign * fn(_shift(q, vs, subset))
    return total


def polarize(f, n: int, q: Sequence, vs: Sequence[Sequence]):
    """``(-1)^n sum_m (-1)^m sum_{i1<..<im} f(q + v_i1 + .. + v_im)``.

    Exact (a Fraction) for polynomial expressions at rational inputs.
    """
    if n > MAX_ORDER:
        raise PolarizationTooLarge(f"order {n} needs 2^{n} evaluations; the cap is {MAX_ORDER}")
    if n < 0 or len(vs) != n:
        raise ValueError("need exactly n direction vectors")
    q = list(q)
    vs = [list(v) for v in vs]
    exact = _exact_ok(f, q, *vs)
    with mpmath.workdps(_DPS):
        value = _polarize_with(evaluator(f, exact), n, q, vs)
    return value if exact or not isinstance(value, mpmath.mpf) else float(value)


def unidirectional(f, n: int, q: Sequence, v: Sequence):
    """``polarize`` with every direction equal to ``v``."""
    return polarize(f, n, q, [list(v)] * n)


@dataclass(frozen=True)
class FDResult:
    value: object  # Fraction when exact, float otherwise
    error: float
    exact: bool
    converged: bool
    estimates: tuple = field(default_factory=tuple)


def multidir_derivative_fd(f, n: int, q: Sequence, vs: Sequence[Sequence], step: float | Fraction = Fraction(1, 2),
                           levels: int = 8) -> FDResult:
    """Richardson-extrapolated ``lim s^-n polarize(f, n, q, s*v)`` over ``s = step * 2^-j``.

    For polynomial expressions the difference quotient is a polynomial in
    ``s``; once the table covers its degree the value is exact and is
    reported as such.
    """
    if n > MAX_ORDER:
        raise PolarizationTooLarge(f"order {n} exceeds the cap {MAX_ORDER}")
    q = list(q)
    vs = [list(v) for v in vs]
    exact = _exact_ok(f, q, *vs) and _is_rational(step)
    if exact:
        s0 = Fraction(step)
        steps = [s0 / 2 ** j for j in range(levels)]
        fn = evaluator(f, True)
        raw = [_polarize_with(fn, n, q, [[s * x for x in v] for v in vs]) / s ** n for s in steps]
        p = max(max((sum(k) for k in expand(f, len(q))), default=0) - n, 0)
        table = _richardson(raw, lambda a, b, k: (2 ** k * a - b) / (2 ** k - 1))
        if p < levels:
            value = table[p][p]
            later = [table[j][p] for j in range(p, levels)]
            ok = all(x == value for x in later)
            return FDResult(value, 0.0, ok, ok, tuple(table[j][min(j, p)] for j in range(levels)))
        diag = [table[j][j] for j in range(levels)]
        err = abs(float(diag[-1] - diag[-2]))
        return FDResult(diag[-1], err, False, True, tuple(diag))
    with mpmath.workdps(_DPS):
        fn = evaluator(f, False)
        s0 = _to_mp(step)
        steps = [s0 / 2 ** j for j in range(levels)]
        raw = [_polarize_with(fn, n, q, [[s * _to_mp(x) for x in v] for v in vs]) / s ** n for s in steps]
        table = _richardson(raw, lambda a, b, k: (2 ** k * a - b) / (2 ** k - 1))
        diag = [table[j][j] for j in range(levels)]
        diffs = [abs(diag[j] - diag[j - 1]) for j in range(1, levels)]
        err = float(diffs[-1]) if diffs else math.inf
        scale = max(1.0, abs(float(diag[-1])))
        converged = err <= 1e-6 * scale and (len(diffs) < 3 or diffs[-1] <= diffs[-3] or err <= 1e-20 * scale)
        return FDResult(float(diag[-1]), err, False, converged, tuple(float(x) for x in diag))


def _richardson(raw: Sequence, combine: Callable) -> list[list]:
    table = []
    for j, r in enumerate(raw):
        row = [r]
        for k in range(1, j + 1):
            row.append(combine(row[k - 1], table[j - 1][k - 1], k))
        table.append(row)
    return table


@dataclass(frozen=True)
class RemainderReport:
    ratios: tuple
    passed: bool
    reason: str


def taylor_polynomial_value(jet_coeffs: dict, q0: Sequence, q: Sequence):
    """``sum_a jet[a] (q - q0)^a``."""
    h = [a - b for a, b in zip(q, q0)]
    total = 0
    for exps, c in jet_coeffs.items():
        term = c
        for x, e in zip(h, exps):
            term = term * x ** e
        total = total + term
    return total


def taylor_remainder_check(f: Expr, n: int, q0: Sequence, points: Sequence[Sequence], jet_coeffs: dict | None = None
                           ) -> RemainderReport:
    """Ratios ``r(q_j)/|q_j - q0|^n`` with the Euclidean norm.

    Passes when the final ratio is below a tenth of the first and the last
    three ratios do not increase, or when the remainder vanishes identically.
    Taylor coefficients come from the jet engine unless supplied.
    """
    q0 = list(q0)
    exact = _exact_ok(f, q0, *points)
    if jet_coeffs is None:
        jet_coeffs = jet(f, n, q0, exact=exact)
    ratios = []
    for q in points:
        if exact:
            r = evaluate_rational(f, q) - taylor_polynomial_value(jet_coeffs, q0, q)
            norm = math.sqrt(sum(float(a - b) ** 2 for a, b in zip(q, q0)))
            ratios.append(abs(float(r)) / norm ** n)
            continue
        with mpmath.workdps(_DPS):
            fq = evaluator(f, False)(q)
            coeffs = {k: mpmath.mpf(float(c)) for k, c in jet_coeffs.items()}
            qm = [mpmath.mpf(float(x)) for x in q]
            q0m = [mpmath.mpf(float(x)) for x in q0]
            r = fq - taylor_polynomial_value(coeffs, q0m, qm)
            norm = mpmath.sqrt(sum((a - b) ** 2 for a, b in zip(qm, q0m)))
            ratios.append(float(abs(r) / norm ** n))
    if all(r == 0 for r in ratios):
        return RemainderReport(tuple(ratios), True, "remainder vanishes identically")
    if len(ratios) < 3:
        return RemainderReport(tuple(ratios), False, "need at least three points")
    shrink = ratios[-1] < 0.1 * ratios[0]
    tail = ratios[-3:]
    monotone = tail[0] >= tail[1] >= tail[2]
    if shrink and monotone:
        reason = f"ratio fell from {ratios[0]:.3g} to {ratios[-1]:.3g}"
    elif not shrink:
        reason = f"ratio only fell from {ratios[0]:.3g} to {ratios[-1]:.3g}"
    else:
        reason = "last three ratios increase"
    return RemainderReport(tuple(ratios), shrink and monotone, reason)


@dataclass(frozen=True)
class HomogeneityVerdict:
    homogeneous: bool
    identity_ok: bool
    multilinear_ok: bool
    failures: tuple = ()

    def __bool__(self) -> bool:
        return self.homogeneous


def homogeneity_check(f: Expr, n: int, q: Sequence, samples: int = 8, seed: int = 0) -> HomogeneityVerdict:
    """Decide whether ``v -> f(q + v)`` is homogeneous of degree ``n``.

    Tests ``unidirectional(f, n, q, v) == n! f(q + v)`` on the grid
    ``{0..D}^m`` (``D`` the degree of ``f``, enough to pin down a polynomial
    identity of that degree) and additivity of ``polarize`` in every slot on
    random rational directions.  For ``n = 1`` the identity alone cannot
    see terms of degree above one, which is what the additivity test is for.
    """
    if not is_polynomial(f):
        raise TypeError("homogeneity is decided for polynomial expressions")
    q = [Fraction(x) for x in q]
    m = len(q)
    deg = max((sum(k) for k in expand(f, m)), default=0)
    grid_top = max(deg, n)
    fact = math.factorial(n)
    failures = []
    identity_ok = True
    for v in itertools.product(range(grid_top + 1), repeat=m):
        v = [Fraction(x) for x in v]
        lhs = unidirectional(f, n, q, v)
        rhs = fact * evaluate_rational(f, [a + b for a, b in zip(q, v)])
        if lhs != rhs:
            identity_ok = False
            failures.append(("identity", tuple(v)))
            break
    rng = random.Random(seed)
    multilinear_ok = True

    def rand_vec():
        return [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(m)]

    for _ in range(samples if n else 0):
        vs = [rand_vec() for _ in range(n)]
        w = rand_vec()
        slot = rng.randrange(n)
        summed = list(vs)
        summed[slot] = [a + b for a, b in zip(vs[slot], w)]
        replaced = list(vs)
        replaced[slot] = w
        if polarize(f, n, q, summed) != polarize(f, n, q, vs) + polarize(f, n, q, replaced):
            multilinear_ok = False
            failures.append(("additivity", slot))
            break
    return HomogeneityVerdict(identity_ok and multilinear_ok, identity_ok, multilinear_ok, tuple(failures))
