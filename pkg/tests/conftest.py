"""Shared fixtures and helpers for the test-suite."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from weil import linalg
from weil.algebra import DUAL, REALS, LocalAlgebra
from weil.constructions import tensor
from weil.ideals import ideal_generate
from weil.truncated import TruncSpec, build_truncated_multi, build_truncated_total

ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, passed: bool, detail: str = "") -> None:
    line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}".rstrip()
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def fleet_algebras() -> dict[str, LocalAlgebra]:
    return {
        "R": REALS,
        "D": DUAL,
        "P2[x]": build_truncated_total(REALS, 1, 2),
        "P3[x]": build_truncated_total(REALS, 1, 3),
        "D⊗D": tensor(DUAL, DUAL).algebra,
        "P11[x,y]": build_truncated_multi(REALS, (1, 1)),
        "P2[x,y]": build_truncated_total(REALS, 2, 2),
        "P2 D[x]": build_truncated_total(DUAL, 1, 2),
    }


def truncated_specs() -> list[TruncSpec]:
    """Truncated algebras over R small enough for randomized checks."""
    return [
        TruncSpec.total_degree(REALS, 1, 2),
        TruncSpec.total_degree(REALS, 1, 4),
        TruncSpec.total_degree(REALS, 2, 2),
        TruncSpec.total_degree(REALS, 2, 3),
        TruncSpec.per_variable(REALS, (1, 1)),
        TruncSpec.per_variable(REALS, (2, 1)),
        TruncSpec.total_degree(REALS, 3, 2),
    ]


def random_ideal_vector(rng: random.Random, a: LocalAlgebra, lo: int = -3, hi: int = 3) -> tuple:
    return (Fraction(0),) + tuple(Fraction(rng.randint(lo, hi)) for _ in range(a.dim - 1))


def random_element(rng: random.Random, a: LocalAlgebra, lo: int = -3, hi: int = 3) -> tuple:
    return tuple(Fraction(rng.randint(lo, hi), rng.randint(1, 3)) for _ in range(a.dim))


def random_ideal(rng: random.Random, a: LocalAlgebra, max_gens: int = 2):
    gens = [random_ideal_vector(rng, a) for _ in range(rng.randint(1, max_gens))]
    gens = [g for g in gens if not linalg.is_zero(g)] or [linalg.unit(a.dim, a.dim - 1)]
    return ideal_generate(a, gens)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def fleet():
    return fleet_algebras()
