import pytest

from weil import linalg
from weil.algebra import DUAL, REALS, is_isomorphism, same_table
from weil.constructions import tensor
from weil.truncated import (
    InclusionFails,
    ParameterOutOfRange,
    TruncSpec,
    build_B,
    build_C,
    build_truncated_multi,
    build_truncated_total,
    certify_non_isomorphic,
    module_rank,
    tensor_split_iso,
    truncation_morphism,
    truncation_quotient_iso,
)

total = TruncSpec.total_degree
multi = TruncSpec.per_variable


def test_total_degree_examples():
    assert build_truncated_total(REALS, 1, 2).dim == 3
    assert build_truncated_total(DUAL, 1, 1).dim == 4
    p = build_truncated_total(REALS, 2, 2)
    assert p.labels == ("1", "x", "y", "x^2", "x*y", "y^2")
    assert build_truncated_total(REALS, 3, 2).dim == 10
    assert same_table(build_truncated_total(DUAL, 1, 0), DUAL)


def test_per_variable_examples():
    p = build_truncated_multi(REALS, (1, 1))
    assert p.labels == ("1", "x", "y", "x*y")
    assert same_table(build_truncated_multi(REALS, (1,)), DUAL)
    for degrees in ((1, 1), (2, 1), (2, 2), (1, 1, 1), (3,)):
        assert build_truncated_multi(REALS, degrees).height == sum(degrees)


def test_products_truncate():
    p = build_truncated_total(REALS, 2, 2)
    x, y = p.basis_element(1), p.basis_element(2)
    assert (x * y).coeffs == linalg.unit(6, 4)
    assert (x * x * y).is_zero()
    q = build_truncated_multi(REALS, (1, 1))
    assert (q.basis_element(1) * q.basis_element(1)).is_zero()
    assert not (q.basis_element(1) * q.basis_element(2)).is_zero()


def test_truncation_examples():
    tau = truncation_morphism(total(REALS, 1, 2), total(REALS, 1, 1))
    assert tau.matrix == ((1, 0, 0), (0, 1, 0))
    # ideal exponents: I^3 = (x, y)^3 lies in I^(2,2) = (x^2, y^2), i.e. P_2 -> P_(1,1)
    assert truncation_morphism(total(REALS, 2, 2), multi(REALS, (1, 1))).target.dim == 4
    with pytest.raises(InclusionFails):
        truncation_morphism(total(REALS, 2, 1), multi(REALS, (1, 1)))
    with pytest.raises(InclusionFails):
        truncation_morphism(total(REALS, 2, 3), multi(REALS, (2, 2)))
    assert truncation_morphism(multi(REALS, (2, 2)), total(REALS, 2, 2)).source.dim == 9
    with pytest.raises(InclusionFails):
        truncation_morphism(multi(REALS, (2, 1)), total(REALS, 2, 2))
    with pytest.raises(InclusionFails):
        truncation_morphism(total(REALS, 1, 1), total(REALS, 1, 2))


@pytest.mark.parametrize(
    "src,tgt",
    [
        (total(REALS, 1, 4), total(REALS, 1, 2)),
        (total(REALS, 2, 3), total(REALS, 2, 1)),
        (multi(REALS, (3, 2)), multi(REALS, (1, 2))),
        (total(REALS, 2, 3), multi(REALS, (1, 1))),
        (multi(REALS, (2, 2)), total(REALS, 2, 1)),
        (total(DUAL, 1, 3), total(DUAL, 1, 1)),
    ],
)
def test_quotient_isomorphisms(src, tgt):
    tau = truncation_morphism(src, tgt)
    assert tau.is_epimorphism()
    assert is_isomorphism(truncation_quotient_iso(tau))


def test_tensor_split_examples():
    iso = tensor_split_iso(REALS, (1, 1))
    assert is_isomorphism(iso) and same_table(iso.source, tensor(DUAL, DUAL).algebra)
    assert iso.target.labels == ("1", "x", "y", "x*y")
    single = tensor_split_iso(REALS, (3,))
    assert single.source.dim == 4 and is_isomorphism(single)
    triple = tensor_split_iso(REALS, (1, 1, 1))
    assert triple.source.dim == triple.target.dim == 8 and is_isomorphism(triple)
    assert is_isomorphism(tensor_split_iso(DUAL, (2, 1)))


def test_families_headline_example():
    b, c = build_B(2, 2, 1).algebra, build_C(2, 2, 1).algebra
    assert (b.dim, b.hilbert_vector(), b.height) == (4, (1, 2, 1), 2)
    assert (c.dim, c.hilbert_vector(), c.height) == (4, (1, 3), 1)
    assert certify_non_isomorphic(b, c).non_isomorphic


def test_families_collapse_when_parameters_coincide():
    for r in (1, 2, 3):
        p = build_truncated_total(REALS, 1, r)
        for fam in (build_B, build_C):
            a = fam(r, r, r).algebra
            assert a.hilbert_vector() == p.hilbert_vector()
            assert certify_non_isomorphic(a, p).verdict == "undetermined"


def test_family_ranks_and_certificates():
    for r in range(1, 5):
        for t in range(1, 5):
            for s in range(1, min(r, t) + 1):
                b, c = build_B(r, t, s).algebra, build_C(r, t, s).algebra
                assert module_rank(b, REALS) == module_rank(c, REALS) == r + t - s + 1
                hb = b.hilbert_vector() + (0,) * 8
                hc = c.hilbert_vector() + (0,) * 8
                if hb[:8] != hc[:8]:
                    assert certify_non_isomorphic(b, c).non_isomorphic
    assert module_rank(build_B(2, 2, 1, DUAL).algebra, DUAL) == 4


def test_family_parameter_checks():
    with pytest.raises(ParameterOutOfRange):
        build_B(2, 2, 3)
    with pytest.raises(ParameterOutOfRange):
        build_C(0, 2, 1)
