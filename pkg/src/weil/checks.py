"""Named property suites runnable from the command line.

Each suite returns ``(property, passed, detail)`` triples.  The suites are
quick smoke versions of the laws exercised in the test-suite.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Callable

from . import linalg
from .algebra import DUAL, REALS, AlgMorphism, identity_morphism, is_isomorphism, same_table, zero_morphism
from .constructions import biproduct, distributivity_witness, factor_through, pullback, tensor
from .expr import Add, Mul, evaluate_rational, from_poly, parse_expr
from .points import APoint, eval_apoint, jet, tensor_compose_witness
from .polarization import homogeneity_check, multidir_derivative_fd, taylor_remainder_check, unidirectional
from .truncated import (
    TruncSpec,
    build_B,
    build_C,
    build_truncated_multi,
    build_truncated_total,
    categorical_B,
    categorical_C,
    certify_non_isomorphic,
    morphism_from_generators,
)


def fleet() -> dict:
    """Small local algebras used throughout the checks."""
    return {
        "R": REALS,
        "D": DUAL,
        "P2[x]": build_truncated_total(REALS, 1, 2),
        "P3[x]": build_truncated_total(REALS, 1, 3),
        "D⊗D": tensor(DUAL, DUAL).algebra,
        "P11[x,y]": build_truncated_multi(REALS, (1, 1)),
        "P2[x,y]": build_truncated_total(REALS, 2, 2),
    }


def random_morphism(rng: random.Random, source, target, tries: int = 50) -> AlgMorphism:
    """A random morphism out of ``source``; falls back to the trivial one.

    Sources that are truncated polynomial algebras over R get random
    generator images; other sources map through their finite part.
    """
    for spec in _specs_for(source):
        for _ in range(tries):
            images = [(0,) + tuple(Fraction(rng.randint(-3, 3)) for _ in range(target.dim - 1)) for _ in range(spec.n_vars)]
            try:
                return morphism_from_generators(spec, target, images)
            except ValueError:
                continue
    return unit_map(source, target)


def unit_map(source, target) -> AlgMorphism:
    """``source -> R -> target``."""
    cols = [linalg.unit(target.dim, 0)] + [linalg.zeros(target.dim)] * (source.dim - 1)
    return AlgMorphism(source, target, linalg.transpose(cols))


def _specs_for(source):
    out = []
    for n in (1, 2):
        for k in range(0, 5):
            for spec in (TruncSpec.total_degree(REALS, n, k), TruncSpec.per_variable(REALS, (k,) * n)):
                if spec.build() == source:
                    out.append(spec)
    return out


def suite_algebra() -> list:
    out = []
    for name, a in fleet().items():
        h = a.hilbert_vector()
        out.append((f"hilbert sums to dim [{name}]", sum(h) == a.dim, f"hilbert={h}"))
    k_ok = all(build_truncated_total(a, 1, k).dim == (k + 1) * a.dim for a in fleet().values() for k in range(4))
    out.append(("dim P_k A[x] = (k+1) dim A", k_ok, ""))
    dd = tensor(DUAL, DUAL).algebra
    out.append(("D⊗D hilbert", dd.hilbert_vector() == (1, 2, 1), str(dd.hilbert_vector())))
    return out


def suite_constructions(seed: int = 0) -> list:
    rng = random.Random(seed)
    out = []
    algs = list(fleet().values())
    ok = True
    for _ in range(10):
        a1, a2 = rng.choice(algs), rng.choice(algs)
        prod = biproduct(a1, a2)
        ok &= (prod["Pr1"] @ prod["In1"]) == identity_morphism(a1)
        c = rng.choice(algs)
        cone = [random_morphism(rng, c, a1), random_morphism(rng, c, a2)]
        m = factor_through(prod, cone)
        ok &= all((prod[l] @ m) == f for l, f in zip(("Pr1", "Pr2"), cone))
    out.append(("biproduct laws and cone factorization", bool(ok), "10 random cones"))
    z = zero_morphism(DUAL)
    out.append(("pullback(0,0) is the biproduct", same_table(pullback(z, z).algebra, biproduct(DUAL, DUAL).algebra), ""))
    w = distributivity_witness(DUAL, z, z)
    out.append(("tensor distributes over pullback", is_isomorphism(w.morphism), f"dim={w.morphism.source.dim}"))
    return out


def suite_families() -> list:
    ok = True
    for r in range(1, 4):
        for t in range(1, 4):
            for s in range(1, min(r, t) + 1):
                ok &= same_table(build_B(r, t, s).algebra, categorical_B(r, t, s).algebra)
                ok &= same_table(build_C(r, t, s).algebra, categorical_C(r, t, s).algebra)
    cert = certify_non_isomorphic(build_B(2, 2, 1).algebra, build_C(2, 2, 1).algebra)
    return [
        ("monomial models equal categorical constructions (r,t <= 3)", bool(ok), ""),
        ("B(2,2,1) and C(2,2,1) separated", cert.non_isomorphic, cert.reason),
    ]


def suite_prolongation(seed: int = 0) -> list:
    rng = random.Random(seed)
    out = []
    a = build_truncated_total(REALS, 1, 3)
    ok = True
    for _ in range(20):
        f = _random_poly(rng)
        g = _random_poly(rng)
        u = APoint(a, (Fraction(rng.randint(-3, 3)),), ((0, Fraction(rng.randint(-2, 2)), 1, 0),), exact=True)
        ok &= eval_apoint(u, Add(f, g)) == eval_apoint(u, f) + eval_apoint(u, g)
        ok &= eval_apoint(u, Mul(f, g)) == eval_apoint(u, f) * eval_apoint(u, g)
    out.append(("evaluation is a ring morphism (exact)", bool(ok), "20 random pairs"))
    coeffs = jet(parse_expr("exp(x)"), 6, (0.0,))
    jet_ok = all(abs(coeffs[(k,)] - 1 / math.factorial(k)) < 1e-12 for k in range(7))
    out.append(("jet of exp at 0", jet_ok, ""))
    dd = tensor(DUAL, DUAL).algebra
    u = APoint(dd, (0.5,), ((0, 1, 1, 0),))
    rep = tensor_compose_witness(parse_expr("exp(x)*sin(x)/(1+x^2)"), DUAL, DUAL, u)
    out.append(("nested evaluation matches tensor evaluation", rep.within(1e-12), f"max={rep.max_discrepancy:.2e}"))
    return out


def suite_appendix(seed: int = 0) -> list:
    rng = random.Random(seed)
    out = []
    ok = True
    for _ in range(10):
        n = rng.randint(1, 4)
        f = _random_homogeneous(rng, n)
        v = [Fraction(rng.randint(-3, 3)) for _ in range(2)]
        ok &= unidirectional(f, n, [0, 0], v) == math.factorial(n) * evaluate_rational(f, v)
    out.append(("unidirectional polarization of homogeneous polynomials", bool(ok), ""))
    seq = [[2.0 ** -j] for j in range(1, 11)]
    rep = taylor_remainder_check(parse_expr("exp(x)"), 2, [0.0], seq)
    out.append(("Taylor remainder ratios shrink (exp)", rep.passed, rep.reason))
    fd = multidir_derivative_fd(parse_expr("exp(x)"), 3, [0], [[1], [1], [1]])
    out.append(("finite-difference third derivative of exp", abs(fd.value - 1) < 1e-6, f"value={fd.value}"))
    verdict = homogeneity_check(parse_expr("(x-1)^3"), 3, [1])
    out.append(("shifted homogeneity", verdict.homogeneous, ""))
    return out


def _random_poly(rng: random.Random):
    poly = {(k,): Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for k in range(rng.randint(0, 4))}
    return from_poly({k: v for k, v in poly.items() if v})


def _random_homogeneous(rng: random.Random, n: int):
    poly = {}
    for i in range(n + 1):
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        if c:
            poly[(i, n - i)] = c
    return from_poly(poly or {(n, 0): Fraction(1)})


SUITES: dict[str, Callable[[], list]] = {
    "algebra": suite_algebra,
    "constructions": suite_constructions,
    "families": suite_families,
    "prolongation": suite_prolongation,
    "appendix": suite_appendix,
}


def run_suite(name: str) -> list:
    if name == "all":
        return [row for key in SUITES for row in run_suite(key)]
    return [(name,) + row for row in SUITES[name]()]
