import random
from fractions import Fraction as F

import pytest

from weil import linalg
from weil.algebra import DUAL, REALS, AlgMorphism, identity_morphism, is_isomorphism, same_table, unit_inclusion, zero_morphism
from weil.ideals import (
    GeneratorNotInMaximalIdeal,
    Ideal,
    NotProper,
    cokernel,
    factor_epimorphism,
    ideal_generate,
    ideal_intersect,
    ideal_sum,
    image,
    kernel,
    quotient_algebra,
    zero_ideal,
)
from weil.truncated import TruncSpec, build_truncated_total, morphism_from_generators

from conftest import random_ideal, truncated_specs

P1 = build_truncated_total(REALS, 1, 1)
P2 = build_truncated_total(REALS, 1, 2)
P2XY = build_truncated_total(REALS, 2, 2)


def v(a, *labels):
    out = [F(0)] * a.dim
    for lab in labels:
        out[a.labels.index(lab)] = F(1)
    return tuple(out)


def span(a, *labels):
    return linalg.echelon([v(a, lab) for lab in labels], a.dim)


def test_generate_examples():
    assert ideal_generate(P2, [v(P2, "x")]).space == span(P2, "x", "x^2")
    assert ideal_generate(P2, [v(P2, "x^2")]).space == span(P2, "x^2")
    assert ideal_generate(P2, []).dim == 0
    with pytest.raises(GeneratorNotInMaximalIdeal):
        ideal_generate(P2, [v(P2, "1", "x")])


def test_sum_and_intersection_in_two_variables():
    jx = ideal_generate(P2XY, [v(P2XY, "x")])
    jy = ideal_generate(P2XY, [v(P2XY, "y")])
    assert ideal_intersect(jx, jy).space == span(P2XY, "x*y")
    assert ideal_sum(jx, jy).space == P2XY.maximal_ideal
    assert ideal_intersect(jx, jx) == jx


def test_quotient_examples():
    q = quotient_algebra(P2, ideal_generate(P2, [v(P2, "x^2")]))
    assert q.algebra.dim == 2 and same_table(q.algebra, P1) and same_table(q.algebra, DUAL)
    assert q.projection.matrix == ((1, 0, 0), (0, 1, 0))
    same = quotient_algebra(P2, zero_ideal(P2))
    assert same_table(same.algebra, P2) and same.projection.matrix == identity_morphism(P2).matrix
    jx = ideal_generate(P2XY, [v(P2XY, "x")])
    jy = ideal_generate(P2XY, [v(P2XY, "y")])
    assert quotient_algebra(P2XY, ideal_sum(jx, jy)).algebra.dim == 1
    with pytest.raises(NotProper):
        Ideal(P2, linalg.full_space(3))


def test_kernel_image_cokernel_examples():
    assert kernel(zero_morphism(P2))[0].space == P2.maximal_ideal
    assert kernel(identity_morphism(P2))[0].dim == 0
    x_to_eps = morphism_from_generators(TruncSpec.total_degree(REALS, 1, 2), DUAL, [(0, 1)])
    assert kernel(x_to_eps)[0].space == span(P2, "x^2")
    assert image(zero_morphism(P2)).dim == 1
    assert image(identity_morphism(DUAL)).dim == 2
    eps_to_x2 = AlgMorphism(DUAL, P2, ((1, 0), (0, 0), (0, 1)))
    assert image(eps_to_x2).space == span(P2, "x^2")
    assert cokernel(identity_morphism(P2)).algebra.dim == 1
    cok = cokernel(eps_to_x2)
    assert same_table(cok.algebra, P1)
    assert same_table(cokernel(unit_inclusion(P2)).algebra, P2)


def _random_morphism(rng, spec, target):
    for _ in range(40):
        imgs = [(F(0),) + tuple(F(rng.randint(-2, 2)) for _ in range(target.dim - 1)) for _ in range(spec.n_vars)]
        try:
            return morphism_from_generators(spec, target, imgs)
        except ValueError:
            continue
    return morphism_from_generators(spec, target, [linalg.zeros(target.dim)] * spec.n_vars)


@pytest.mark.parametrize("seed", range(15))
def test_quotient_laws_and_third_isomorphism(seed):
    rng = random.Random(seed)
    a = rng.choice(truncated_specs()).build()
    j1 = random_ideal(rng, a)
    j2 = ideal_sum(j1, random_ideal(rng, a))
    for j in (j1, j2):
        for b in j.basis:
            for i in range(a.dim):
                assert linalg.member(a.mul_vectors(linalg.unit(a.dim, i), b), j.space)
    q1, q2 = quotient_algebra(a, j1), quotient_algebra(a, j2)
    assert q1.algebra.dim + j1.dim == a.dim
    assert linalg.matmul(q1.projection.matrix, q1.section) == linalg.identity(q1.algebra.dim)
    # A -> A/J1 -> (A/J1)/(J2/J1) agrees with A -> A/J2 up to the induced identification
    image_j2 = ideal_generate(q1.algebra, [q1.projection.apply_vector(b) for b in j2.basis])
    qq = quotient_algebra(q1.algebra, image_j2)
    composite = qq.projection @ q1.projection
    iso = factor_epimorphism(q2.projection, composite)
    assert iso is not None and is_isomorphism(iso)
    assert (iso @ q2.projection).matrix == composite.matrix


@pytest.mark.parametrize("seed", range(15))
def test_rank_nullity_and_cokernel_kills_image(seed):
    rng = random.Random(100 + seed)
    specs = truncated_specs()
    spec = rng.choice(specs)
    f = _random_morphism(rng, spec, rng.choice(specs).build())
    ker, _ = kernel(f)
    assert ker.dim + image(f).space.dim == f.source.dim - 1
    cok = cokernel(f)
    killed = cok.projection @ f
    assert all(linalg.is_zero(killed.column(j)) for j in range(1, f.source.dim))
