"""Ideals, subalgebras, quotients, kernels, images and cokernels."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .algebra import (
    AlgebraMismatch,
    AlgMorphism,
    Element,
    LocalAlgebra,
    MorphismError,
    verify_morphism,
)
from .linalg import Subspace


class IdealError(ValueError):
    pass


class GeneratorNotInMaximalIdeal(IdealError):
    pass


class NotProper(IdealError):
    pass


class NotAnIdeal(IdealError):
    pass


class NotClosed(IdealError):
    pass


def _closure(algebra: LocalAlgebra, vectors: Sequence[Sequence]) -> Subspace:
    d = algebra.dim
    space = linalg.echelon(vectors, d)
    while True:
        products = list(space.basis)
        for v in space.basis:
            for j in range(1, d):
                products.append(algebra.mul_vectors(v, linalg.unit(d, j)))
        grown = linalg.echelon(products, d)
        if grown == space:
            return space
        space = grown


def _is_ideal(algebra: LocalAlgebra, space: Subspace) -> bool:
    d = algebra.dim
    return all(
        linalg.member(algebra.mul_vectors(v, linalg.unit(d, j)), space)
        for v in space.basis
        for j in range(1, d)
    )


@dataclass(frozen=True, eq=False)
class Ideal:
    """A proper ideal: a subspace of the maximal ideal with ``A*J ⊆ J``."""

    algebra: LocalAlgebra
    space: Subspace

    def __post_init__(self):
        if self.space.ambient_dim != self.algebra.dim:
            raise AlgebraMismatch("ideal subspace has the wrong ambient dimension")
        if not self.space <= self.algebra.maximal_ideal:
            raise NotProper("subspace has a component along the unit")
        if not _is_ideal(self.algebra, self.space):
            raise NotAnIdeal("subspace is not closed under multiplication by the algebra")

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def basis(self) -> tuple:
        return self.space.basis

    def __contains__(self, a) -> bool:
        v = a.coeffs if isinstance(a, Element) else a
        return linalg.member(v, self.space)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.algebra == other.algebra and self.space == other.space

    def __hash__(self) -> int:
        return hash(self.space)

    def __le__(self, other: "Ideal") -> bool:
        return self.space <= other.space

    def __repr__(self) -> str:
        return f"Ideal(dim={self.dim} in algebra of dim {self.algebra.dim})"


def ideal_generate(algebra: LocalAlgebra, gens: Sequence) -> Ideal:
    """Smallest ideal containing ``gens`` (elements or coordinate vectors)."""
    vectors = []
    for g in gens:
        v = g.coeffs if isinstance(g, Element) else tuple(Fraction(x) for x in g)
        if len(v) != algebra.dim:
            raise AlgebraMismatch("generator has the wrong dimension")
        if v[0] != 0:
            raise GeneratorNotInMaximalIdeal(
                "generator has a nonzero finite part and would generate the unit ideal"
            )
        vectors.append(v)
    return Ideal(algebra, _closure(algebra, vectors))


def ideal_from_subspace(algebra: LocalAlgebra, space: Subspace) -> Ideal:
    return Ideal(algebra, space)


def zero_ideal(algebra: LocalAlgebra) -> Ideal:
    return Ideal(algebra, linalg.zero_subspace(algebra.dim))


def maximal_ideal(algebra: LocalAlgebra) -> Ideal:
    return Ideal(algebra, algebra.maximal_ideal)


def power_ideal(algebra: LocalAlgebra, k: int) -> Ideal:
    if k < 1:
        raise NotProper("the zeroth power is the whole algebra")
    return Ideal(algebra, algebra.ideal_power(k))


def _same_algebra(j1: Ideal, j2: Ideal) -> None:
    if j1.algebra is not j2.algebra and j1.algebra != j2.algebra:
        raise AlgebraMismatch("ideals of different algebras")


def ideal_sum(j1: Ideal, j2: Ideal) -> Ideal:
    _same_algebra(j1, j2)
    return Ideal(j1.algebra, linalg.subspace_sum(j1.space, j2.space))


def ideal_intersect(j1: Ideal, j2: Ideal) -> Ideal:
    _same_algebra(j1, j2)
    return Ideal(j1.algebra, linalg.intersect(j1.space, j2.space))


@dataclass(frozen=True)
class Quotient:
    algebra: LocalAlgebra
    projection: AlgMorphism
    section: tuple  # matrix embedding quotient coordinates back into the source

    def __iter__(self):
        return iter((self.algebra, self.projection))


def quotient_algebra(algebra: LocalAlgebra, ideal: Ideal) -> Quotient:
    """``A/J`` in the adapted basis of the non-pivot coordinates of ``J``.

    The section sends each quotient basis vector to the matching source
    basis vector, so ``projection ∘ section`` is the identity.
    """
    if ideal.algebra is not algebra and ideal.algebra != algebra:
        raise AlgebraMismatch("ideal belongs to another algebra")
    if not ideal.space <= algebra.maximal_ideal:
        raise NotProper("ideal is not contained in the maximal ideal")
    d = algebra.dim
    pivots = set(ideal.space.pivots)
    keep = [i for i in range(d) if i not in pivots]
    labels = [algebra.labels[i] for i in keep]

    def project(v):
        r = ideal.space.reduce(v)
        return tuple(r[i] for i in keep)

    table = [
        [project(algebra.table[keep[a]][keep[b]]) for b in range(len(keep))]
        for a in range(len(keep))
    ]
    q = LocalAlgebra(labels, table)
    pi_cols = [project(linalg.unit(d, i)) for i in range(d)]
    pi = AlgMorphism(algebra, q, linalg.transpose(pi_cols))
    section = tuple(tuple(Fraction(1) if i == keep[a] else Fraction(0) for a in range(len(keep))) for i in range(d))
    pi.check()
    return Quotient(q, pi, section)


def factor_epimorphism(p: AlgMorphism, q: AlgMorphism) -> AlgMorphism | None:
    """The unique ``x`` with ``x ∘ p = q`` for an epimorphism ``p``.

    Exists exactly when ``ker p ⊆ ker q``; returns None otherwise.
    """
    if p.source is not q.source and p.source != q.source:
        raise AlgebraMismatch("epimorphisms must share a source")
    # x p = q  <=>  p^T x^T = q^T
    xt = linalg.solve_matrix(linalg.transpose(p.matrix), linalg.transpose(q.matrix))
    if xt is None:
        return None
    x = AlgMorphism(p.target, q.target, linalg.transpose(xt, p.target.dim) if xt else ())
    return x


@dataclass(frozen=True)
class Subalgebra:
    """``R + J`` for a multiplicatively closed subspace ``J`` of the maximal ideal."""

    ambient: LocalAlgebra
    space: Subspace

    def materialize(self, labels: Sequence[str] | None = None):
        return subalgebra(self.ambient, self.space, labels)

    @property
    def dim(self) -> int:
        return 1 + self.space.dim


def subalgebra(ambient: LocalAlgebra, space: Subspace, labels: Sequence[str] | None = None):
    """Materialize ``R + space`` with basis (unit, RREF basis of ``space``).

    Returns ``(algebra, inclusion)``.
    """
    d = ambient.dim
    if not space <= ambient.maximal_ideal:
        raise NotProper("subalgebra generator space leaves the maximal ideal")
    basis = [linalg.unit(d, 0)] + list(space.basis)
    n = len(basis)
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = ambient.mul_vectors(basis[i], basis[j])
            coords = linalg.coordinates(prod, basis)
            if coords is None:
                raise NotClosed(f"product of basis vectors {i} and {j} leaves the subspace")
            row.append(coords)
        table.append(row)
    if labels is None:
        labels = ["1"] + [_vector_label(ambient, v) for v in space.basis]
    sub = LocalAlgebra(labels, table)
    inclusion = AlgMorphism(sub, ambient, linalg.transpose(basis))
    return sub, inclusion


def _vector_label(ambient: LocalAlgebra, v: Sequence) -> str:
    parts = []
    for c, lab in zip(v, ambient.labels):
        if not c:
            continue
        if c == 1:
            parts.append(lab)
        else:
            parts.append(f"{linalg.format_rat(c)}{lab}")
    return "+".join(parts)


def kernel(f: AlgMorphism):
    """``(ker f, Ker f)``: the ideal and the normal subalgebra ``R + ker f``."""
    ker = linalg.intersect(linalg.nullspace(f.matrix, f.source.dim), f.source.maximal_ideal)
    ideal = Ideal(f.source, ker)
    return ideal, Subalgebra(f.source, ker)


def image(f: AlgMorphism) -> Subalgebra:
    """``R + f(I_source)`` as a subalgebra of the target."""
    cols = [f.column(j) for j in range(1, f.source.dim)]
    space = linalg.echelon(cols, f.target.dim)
    sub = Subalgebra(f.target, space)
    subalgebra(f.target, space)  # raises if not closed
    return sub


def cokernel(f: AlgMorphism) -> Quotient:
    """``target / <f(I_source)>``: the quotient by the generated ideal."""
    gens = [f.column(j) for j in range(1, f.source.dim)]
    return quotient_algebra(f.target, ideal_generate(f.target, gens))


def natural_projection(algebra: LocalAlgebra, ideal: Ideal) -> AlgMorphism:
    return quotient_algebra(algebra, ideal).projection


def require_morphism(f: AlgMorphism) -> None:
    report = verify_morphism(f)
    if not report:
        raise MorphismError(report)
