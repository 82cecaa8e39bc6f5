import random
from fractions import Fraction as F

import pytest

from weil import linalg
from weil.algebra import (
    DUAL,
    REALS,
    AlgMorphism,
    from_products,
    identity_morphism,
    is_isomorphism,
    same_table,
    unit_inclusion,
    verify_morphism,
    zero_morphism,
)
from weil.constructions import (
    NoFactorization,
    NotEpimorphism,
    SourceMismatch,
    SquareDoesNotCommute,
    biproduct,
    distributivity_witness,
    factor_through,
    map_pair,
    pullback,
    pushout,
    relative_product,
    tensor,
)
from weil.ideals import factor_epimorphism, ideal_generate, ideal_sum, quotient_algebra
from weil.truncated import TruncSpec, build_truncated_multi, build_truncated_total, truncation_morphism

from conftest import fleet_algebras

P2 = build_truncated_total(REALS, 1, 2)
P2XY = build_truncated_total(REALS, 2, 2)
P11 = build_truncated_multi(REALS, (1, 1))
TAU = truncation_morphism(TruncSpec.total_degree(REALS, 1, 2), TruncSpec.total_degree(REALS, 1, 1))


def unit_vec(a, label):
    return linalg.unit(a.dim, a.labels.index(label))


def natural_quotients(a, *gens):
    return [quotient_algebra(a, ideal_generate(a, [unit_vec(a, g)])) for g in gens]


def test_biproduct_examples():
    dd = biproduct(DUAL, DUAL)
    square_zero = from_products(("1", "x", "y"), {})
    assert dd.algebra.dim == 3 and same_table(dd.algebra, square_zero)
    assert same_table(biproduct(REALS, P2).algebra, P2)
    mixed = biproduct(P2, DUAL).algebra
    assert mixed.dim == 4 and mixed.hilbert_vector() == (1, 2, 1)


def test_biproduct_laws():
    algs = list(fleet_algebras().values())
    for a1 in algs:
        for a2 in algs[:4]:
            b = biproduct(a1, a2)
            assert b.algebra.dim == a1.dim + a2.dim - 1
            assert (b["Pr1"] @ b["In1"]).matrix == linalg.identity(a1.dim)
            assert (b["Pr2"] @ b["In2"]).matrix == linalg.identity(a2.dim)
            cross = b["Pr1"] @ b["In2"]
            assert cross.matrix == (unit_inclusion(a1) @ zero_morphism(a2)).matrix
            assert factor_through(b, [b["Pr1"], b["Pr2"]]).matrix == linalg.identity(b.algebra.dim)


def test_relative_product_examples():
    p2 = P2
    assert same_table(relative_product(zero_morphism(DUAL), zero_morphism(p2)).algebra, biproduct(DUAL, p2).algebra)
    assert relative_product(TAU, TAU).algebra.dim == 4
    with pytest.raises(NotEpimorphism):
        relative_product(unit_inclusion(DUAL), unit_inclusion(DUAL))


def test_relative_product_associativity():
    flat = relative_product(TAU, TAU, TAU).algebra
    left = relative_product(relative_product(TAU, TAU)["PrB"], TAU).algebra
    right = relative_product(TAU, relative_product(TAU, TAU)["PrB"]).algebra
    assert same_table(left, flat) and same_table(right, flat)
    nested = biproduct(biproduct(DUAL, P2).algebra, DUAL).algebra
    assert same_table(nested, biproduct(DUAL, P2, DUAL).algebra)


def test_pullback_examples():
    for a1, a2 in ((DUAL, DUAL), (P2, DUAL), (P11, P2)):
        pb = pullback(zero_morphism(a1), zero_morphism(a2))
        assert same_table(pb.algebra, biproduct(a1, a2).algebra)
    qx, qy = natural_quotients(P2XY, "x", "y")
    qs = quotient_algebra(P2XY, ideal_sum(*(ideal_generate(P2XY, [unit_vec(P2XY, g)]) for g in "xy")))
    r1 = factor_epimorphism(qx.projection, qs.projection)
    r2 = factor_epimorphism(qy.projection, qs.projection)
    pb = pullback(r1, r2)
    assert pb.algebra.dim == 5
    assert (r1 @ pb["Pr1"]).matrix == (r2 @ pb["Pr2"]).matrix
    diag = pullback(identity_morphism(P2), identity_morphism(P2))
    assert is_isomorphism(diag["Pr1"]) and same_table(diag.algebra, P2)


def test_pushout_examples():
    qx, qy = natural_quotients(P11, "x", "y")
    po = pushout(qx.projection, qy.projection)
    assert po.algebra.dim == 1
    idp = identity_morphism(P2)
    assert same_table(pushout(idp, idp).algebra, P2)
    assert same_table(pushout(TAU, TAU).algebra, TAU.target)
    p = pushout(qx.projection, qy.projection)
    assert (p["Ep1"] @ qx.projection).matrix == (p["Ep2"] @ qy.projection).matrix == p.data["projection"].matrix
    with pytest.raises(SourceMismatch):
        pushout(TAU, identity_morphism(DUAL))
    with pytest.raises(NotEpimorphism):
        pushout(unit_inclusion(P2) @ zero_morphism(P2), TAU)


def test_pushout_universal_property():
    qx, qy = natural_quotients(P2XY, "x", "y")
    po = pushout(qx.projection, qy.projection)
    s1, s2 = zero_morphism(qx.algebra), zero_morphism(qy.algebra)
    tau = factor_through(po, [s1, s2])
    assert (tau @ po["Ep1"]).matrix == s1.matrix and (tau @ po["Ep2"]).matrix == s2.matrix
    # the pushout of tau with itself: the cocone (id, id) on P1 factors through the identity
    p = pushout(TAU, TAU)
    ident = identity_morphism(TAU.target)
    assert factor_through(p, [ident, ident]).matrix == linalg.identity(p.algebra.dim)


def test_tensor_examples_and_height_additivity():
    dd = tensor(DUAL, DUAL).algebra
    assert dd.dim == 4 and dd.labels[0] == "1"
    assert dd.height == 2 and dd.hilbert_vector() == (1, 2, 1)
    assert same_table(tensor(REALS, P2).algebra, P2)
    assert same_table(tensor(DUAL, build_truncated_total(REALS, 1, 1, ("y",))).algebra, dd)
    algs = list(fleet_algebras().values())[:6]
    for a in algs:
        for b in algs:
            t = tensor(a, b).algebra
            assert t.dim == a.dim * b.dim
            assert t.height == a.height + b.height


def test_map_pair_examples():
    b = biproduct(DUAL, P2)
    assert map_pair(b, b, identity_morphism(DUAL), identity_morphism(P2)).matrix == linalg.identity(4)
    r = biproduct(REALS, REALS)
    z = map_pair(b, r, zero_morphism(DUAL), zero_morphism(P2))
    assert z.matrix == (unit_inclusion(r.algebra) @ zero_morphism(b.algebra)).matrix
    # pullback over the two-variable instance, mapped along the natural quotients
    qx, qy = natural_quotients(P2XY, "x", "y")
    j = ideal_sum(*(ideal_generate(P2XY, [unit_vec(P2XY, g)]) for g in "xy"))
    qs = quotient_algebra(P2XY, j)
    src = pullback(identity_morphism(P2XY), identity_morphism(P2XY))
    tgt = pullback(factor_epimorphism(qx.projection, qs.projection), factor_epimorphism(qy.projection, qs.projection))
    m = map_pair(src, tgt, qx.projection, qy.projection, qs.projection)
    assert verify_morphism(m)
    assert (tgt["Pr1"] @ m).matrix == (qx.projection @ src["Pr1"]).matrix


def _doubling():
    """P2[x] -> P2[x], x -> 2x."""
    from weil.truncated import morphism_from_generators

    return morphism_from_generators(TruncSpec.total_degree(REALS, 1, 2), P2, [(0, 2, 0)])


def test_map_pair_detects_non_commuting_square():
    rp = relative_product(TAU, TAU)
    with pytest.raises(SquareDoesNotCommute):
        map_pair(rp, rp, _doubling(), _doubling(), identity_morphism(TAU.target))


def test_map_pair_relative_and_pushout():
    rp = relative_product(TAU, TAU)
    ident = identity_morphism(P2)
    assert map_pair(rp, rp, ident, ident, identity_morphism(TAU.target)).matrix == linalg.identity(rp.algebra.dim)
    po = pushout(TAU, TAU)
    assert map_pair(po, po, identity_morphism(TAU.target), identity_morphism(TAU.target), ident).matrix == linalg.identity(po.algebra.dim)


def test_factor_through_rejects_violated_cone():
    pb = pullback(TAU, TAU)
    with pytest.raises(NoFactorization):
        factor_through(pb, [identity_morphism(P2), _doubling()])
    assert verify_morphism(factor_through(pb, [_doubling(), _doubling()]))


def test_distributivity_examples():
    w = distributivity_witness(DUAL, zero_morphism(DUAL), zero_morphism(DUAL)).morphism
    assert w.source.dim == w.target.dim == 6 and is_isomorphism(w)
    w = distributivity_witness(REALS, zero_morphism(DUAL), zero_morphism(P2)).morphism
    assert w.matrix == linalg.identity(w.source.dim)
    w = distributivity_witness(DUAL, identity_morphism(P2), identity_morphism(P2)).morphism
    assert is_isomorphism(w) and w.source.dim == 6
