"""Categorical constructions on local algebras.

Biproduct ``R + I_1 x I_2``, relative product, pullback, pushout and tensor
product, their action on morphisms, mediating morphisms for cones and
cocones, and the tensor/pullback distributivity isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .algebra import (
    AlgebraMismatch,
    AlgMorphism,
    LocalAlgebra,
    identity_morphism,
    is_isomorphism,
    verify_morphism,
)
from .ideals import factor_epimorphism, ideal_sum, kernel, quotient_algebra, subalgebra

KINDS = ("biproduct", "relative", "pullback", "pushout", "tensor")


class ConstructionError(ValueError):
    pass


class NotEpimorphism(ConstructionError):
    pass


class SourceMismatch(ConstructionError):
    pass


class SquareDoesNotCommute(ConstructionError):
    pass


class NoFactorization(ConstructionError):
    pass


class NonUniqueFactorization(ConstructionError):
    pass


@dataclass(frozen=True, eq=False)
class ConstructionResult:
    kind: str
    algebra: LocalAlgebra
    legs: dict
    inputs: tuple
    # construction-specific helpers used by map_pair (block offsets, kernel inclusions, ...)
    data: dict = field(default_factory=dict)

    def __getitem__(self, leg: str) -> AlgMorphism:
        return self.legs[leg]


def _disambiguate(label_sets: Sequence[Sequence[str]]) -> list[list[str]]:
    seen: dict[str, int] = {}
    for labels in label_sets:
        for lab in labels[1:]:
            seen[lab] = seen.get(lab, 0) + 1
    clash = {lab for lab, n in seen.items() if n > 1}
    return [
        [lab if (k == 0 or lab not in clash) else f"{lab}_{slot + 1}" for k, lab in enumerate(labels)]
        for slot, labels in enumerate(label_sets)
    ]


def _check_legs(legs: dict) -> None:
    for name, leg in legs.items():
        report = verify_morphism(leg)
        if not report:
            raise ConstructionError(f"leg {name} is not a morphism: {report.failure}")


# -- biproduct --------------------------------------------------------------


def _biproduct_parts(algebras: Sequence[LocalAlgebra]):
    offsets = []
    total = 1
    for a in algebras:
        offsets.append(total)
        total += a.dim - 1
    names = _disambiguate([a.labels for a in algebras])
    labels = ["1"]
    for a, nm in zip(algebras, names):
        labels.extend(nm[1:])
    table = [[[Fraction(0)] * total for _ in range(total)] for _ in range(total)]
    for j in range(total):
        table[0][j][j] = table[j][0][j] = Fraction(1)
    for a, off in zip(algebras, offsets):
        for i in range(1, a.dim):
            for j in range(1, a.dim):
                for k, c in enumerate(a.table[i][j]):
                    if c:
                        table[off + i - 1][off + j - 1][off + k - 1] = c
    return LocalAlgebra(labels, table), offsets


def _projection(big: LocalAlgebra, part: LocalAlgebra, off: int) -> AlgMorphism:
    rows = [linalg.unit(big.dim, 0)] + [linalg.unit(big.dim, off + a - 1) for a in range(1, part.dim)]
    return AlgMorphism(big, part, rows)


def _injection(part: LocalAlgebra, big: LocalAlgebra, off: int) -> AlgMorphism:
    cols = [linalg.unit(big.dim, 0)] + [linalg.unit(big.dim, off + a - 1) for a in range(1, part.dim)]
    return AlgMorphism(part, big, linalg.transpose(cols))


def biproduct(*algebras: LocalAlgebra) -> ConstructionResult:
    """``R + I_1 x ... x I_n`` with projections ``Pr_i`` and injections ``In_i``."""
    if len(algebras) < 2:
        raise ConstructionError("a biproduct needs at least two factors")
    big, offsets = _biproduct_parts(algebras)
    legs = {}
    for n, (a, off) in enumerate(zip(algebras, offsets), start=1):
        legs[f"Pr{n}"] = _projection(big, a, off)
    for n, (a, off) in enumerate(zip(algebras, offsets), start=1):
        legs[f"In{n}"] = _injection(a, big, off)
    _check_legs(legs)
    return ConstructionResult("biproduct", big, legs, tuple(algebras), {"offsets": tuple(offsets)})


# -- relative product ---------------------------------------------------------


def _require_epi(f: AlgMorphism, name: str) -> None:
    report = verify_morphism(f)
    if not report:
        raise ConstructionError(f"{name} is not a morphism: {report.failure}")
    if not f.is_epimorphism():
        raise NotEpimorphism(f"{name} has rank {f.rank()} < {f.target.dim}")


def relative_product(*epis: AlgMorphism) -> ConstructionResult:
    """``B x_R Ker pi_1 x_R ... x_R Ker pi_n`` for epimorphisms onto a common ``B``."""
    if len(epis) < 2:
        raise ConstructionError("a relative product needs at least two epimorphisms")
    base = epis[0].target
    for n, pi in enumerate(epis, start=1):
        _require_epi(pi, f"pi{n}")
        if pi.target != base:
            raise ConstructionError("epimorphisms must share a target")
    kernels = []
    inclusions = []
    for pi in epis:
        ideal, normal = kernel(pi)
        k_alg, k_inc = subalgebra(pi.source, ideal.space)
        kernels.append(k_alg)
        inclusions.append(k_inc)
    big, offsets = _biproduct_parts([base, *kernels])
    legs = {"PrB": _projection(big, base, offsets[0])}
    for n, (k_alg, off) in enumerate(zip(kernels, offsets[1:]), start=1):
        legs[f"PrK{n}"] = _projection(big, k_alg, off)
    _check_legs(legs)
    data = {"offsets": tuple(offsets), "kernels": tuple(kernels), "inclusions": tuple(inclusions)}
    return ConstructionResult("relative", big, legs, tuple(epis), data)


# -- pullback -------------------------------------------------------------------


def pullback(phi1: AlgMorphism, phi2: AlgMorphism) -> ConstructionResult:
    """``R + {(a1, a2) in I_1 x I_2 | phi1(a1) = phi2(a2)}`` with legs ``Pr1, Pr2``."""
    for n, phi in enumerate((phi1, phi2), start=1):
        report = verify_morphism(phi)
        if not report:
            raise ConstructionError(f"phi{n} is not a morphism: {report.failure}")
    if phi1.target != phi2.target:
        raise ConstructionError("pullback morphisms must share a target")
    prod = biproduct(phi1.source, phi2.source)
    big = prod.algebra
    lhs = linalg.matmul(phi1.matrix, prod["Pr1"].matrix)
    rhs = linalg.matmul(phi2.matrix, prod["Pr2"].matrix)
    diff = [tuple(x - y for x, y in zip(r1, r2)) for r1, r2 in zip(lhs, rhs)]
    equalizer = linalg.intersect(linalg.nullspace(diff, big.dim), big.maximal_ideal)
    alg, inc = subalgebra(big, equalizer, labels=["1"] + [_pair_label(big, v) for v in equalizer.basis])
    legs = {"Pr1": prod["Pr1"] @ inc, "Pr2": prod["Pr2"] @ inc}
    _check_legs(legs)
    return ConstructionResult("pullback", alg, legs, (phi1, phi2), {"product": prod, "inclusion": inc})


def _pair_label(big: LocalAlgebra, v) -> str:
    parts = []
    for c, lab in zip(v, big.labels):
        if c:
            parts.append(lab if c == 1 else f"{linalg.format_rat(c)}{lab}")
    return "+".join(parts)


# -- pushout --------------------------------------------------------------------


def pushout(pi1: AlgMorphism, pi2: AlgMorphism) -> ConstructionResult:
    """``A / (ker pi1 + ker pi2)`` with the induced epimorphisms ``Ep1, Ep2``."""
    if pi1.source != pi2.source:
        raise SourceMismatch("pushout epimorphisms must share a source")
    _require_epi(pi1, "pi1")
    _require_epi(pi2, "pi2")
    total = ideal_sum(kernel(pi1)[0], kernel(pi2)[0])
    q = quotient_algebra(pi1.source, total)
    ep1 = factor_epimorphism(pi1, q.projection)
    ep2 = factor_epimorphism(pi2, q.projection)
    if ep1 is None or ep2 is None:
        raise ConstructionError("natural projection does not factor; kernel sum is wrong")
    legs = {"Ep1": ep1, "Ep2": ep2}
    _check_legs(legs)
    return ConstructionResult("pushout", q.algebra, legs, (pi1, pi2), {"projection": q.projection})


# -- tensor ---------------------------------------------------------------------


def tensor(a1: LocalAlgebra, a2: LocalAlgebra) -> ConstructionResult:
    """``A1 ⊗ A2`` on the row-major basis ``e_i ⊗ f_j`` (index ``i * d2 + j``)."""
    d1, d2 = a1.dim, a2.dim
    n1, n2 = _disambiguate([a1.labels, a2.labels])
    labels = []
    for i in range(d1):
        for j in range(d2):
            if i == 0:
                labels.append(n2[j])
            elif j == 0:
                labels.append(n1[i])
            else:
                labels.append(f"{n1[i]}*{n2[j]}")
    d = d1 * d2
    table = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    for i in range(d1):
        for j in range(d2):
            for k in range(d1):
                for l in range(d2):
                    row = table[i * d2 + j][k * d2 + l]
                    for p, c1 in enumerate(a1.table[i][k]):
                        if not c1:
                            continue
                        for q, c2 in enumerate(a2.table[j][l]):
                            if c2:
                                row[p * d2 + q] += c1 * c2
    alg = LocalAlgebra(labels, table)
    in1 = AlgMorphism(a1, alg, linalg.transpose([linalg.unit(d, i * d2) for i in range(d1)]))
    in2 = AlgMorphism(a2, alg, linalg.transpose([linalg.unit(d, j) for j in range(d2)]))
    legs = {"In1": in1, "In2": in2}
    _check_legs(legs)
    return ConstructionResult("tensor", alg, legs, (a1, a2))


def tensor_morphism(f1: AlgMorphism, f2: AlgMorphism, source=None, target=None) -> AlgMorphism:
    """``f1 ⊗ f2`` between the tensor algebras of sources and targets."""
    src = source or tensor(f1.source, f2.source)
    tgt = target or tensor(f1.target, f2.target)
    return map_pair(src, tgt, f1, f2)


# -- functorial action ---------------------------------------------------------------


def _compose_eq(f: AlgMorphism, g: AlgMorphism) -> bool:
    return f.source == g.source and f.target == g.target and f.matrix == g.matrix


def _square(lhs: AlgMorphism, rhs: AlgMorphism, name: str) -> None:
    if not _compose_eq(lhs, rhs):
        raise SquareDoesNotCommute(f"{name} does not commute")


def map_pair(
    source: ConstructionResult,
    target: ConstructionResult,
    xi1: AlgMorphism,
    xi2: AlgMorphism,
    eta: AlgMorphism | None = None,
) -> AlgMorphism:
    """Morphism between two constructions of the same kind induced by ``xi1, xi2 [, eta]``.

    For relative products and pullbacks ``eta`` maps the common targets; for
    pushouts it maps the common sources.
    """
    kind = source.kind
    if target.kind != kind:
        raise ConstructionError(f"cannot map a {kind} to a {target.kind}")
    if kind == "biproduct":
        return _map_biproduct(source, target, (xi1, xi2))
    if kind == "tensor":
        return _map_tensor(source, target, xi1, xi2)
    if eta is None:
        raise ConstructionError(f"{kind} needs the connecting morphism eta")
    if kind == "relative":
        return _map_relative(source, target, (xi1, xi2), eta)
    if kind == "pullback":
        return _map_pullback(source, target, (xi1, xi2), eta)
    if kind == "pushout":
        return _map_pushout(source, target, (xi1, xi2), eta)
    raise ConstructionError(f"unknown construction kind {kind!r}")


def _finish(m: AlgMorphism) -> AlgMorphism:
    report = verify_morphism(m)
    if not report:
        raise ConstructionError(f"induced map is not a morphism: {report.failure}")
    return m


def _block_map(src_alg, tgt_alg, src_offsets, tgt_offsets, block_maps) -> AlgMorphism:
    """Block-diagonal map on ideal parts; ``block_maps[n]`` gives ideal coordinates."""
    cols = [linalg.unit(tgt_alg.dim, 0)]
    for off_s, off_t, (dim_s, fn) in zip(src_offsets, tgt_offsets, block_maps):
        for a in range(1, dim_s):
            image = fn(a)
            col = [Fraction(0)] * tgt_alg.dim
            for b, c in enumerate(image):
                col[off_t + b] = c
            cols.append(tuple(col))
    return AlgMorphism(src_alg, tgt_alg, linalg.transpose(cols))


def _map_biproduct(source, target, xis) -> AlgMorphism:
    for n, (xi, a, c) in enumerate(zip(xis, source.inputs, target.inputs), start=1):
        if xi.source != a or xi.target != c:
            raise ConstructionError(f"xi{n} does not map factor {n} to factor {n}")

    def ideal_part(xi):
        return lambda a: xi.column(a)[1:]

    blocks = [(xi.source.dim, ideal_part(xi)) for xi in xis]
    return _finish(_block_map(source.algebra, target.algebra, source.data["offsets"], target.data["offsets"], blocks))


def _map_tensor(source, target, f1, f2) -> AlgMorphism:
    a1, a2 = source.inputs
    c1, c2 = target.inputs
    if f1.source != a1 or f2.source != a2 or f1.target != c1 or f2.target != c2:
        raise ConstructionError("tensor factors do not match the morphisms")
    d2, e2 = a2.dim, c2.dim
    cols = []
    for i in range(a1.dim):
        for j in range(d2):
            col = [Fraction(0)] * target.algebra.dim
            for p, x in enumerate(f1.column(i)):
                if not x:
                    continue
                for q, y in enumerate(f2.column(j)):
                    if y:
                        col[p * e2 + q] += x * y
            cols.append(tuple(col))
    return _finish(AlgMorphism(source.algebra, target.algebra, linalg.transpose(cols)))


def _map_relative(source, target, xis, eta) -> AlgMorphism:
    for n, (pa, pc, xi) in enumerate(zip(source.inputs, target.inputs, xis), start=1):
        _square(eta @ pa, pc @ xi, f"eta∘pi_A{n} = pi_C{n}∘xi{n}")
    blocks = [(eta.source.dim, lambda a: eta.column(a)[1:])]
    for k_src, inc_src, k_tgt, inc_tgt, xi in zip(
        source.data["kernels"], source.data["inclusions"], target.data["kernels"], target.data["inclusions"], xis
    ):
        tgt_basis = [inc_tgt.column(b) for b in range(1, k_tgt.dim)]

        def block(a, inc_src=inc_src, xi=xi, tgt_basis=tgt_basis):
            image = xi.apply_vector(inc_src.column(a))
            coords = linalg.coordinates(image, tgt_basis)
            if coords is None:
                raise SquareDoesNotCommute("xi does not map kernel into kernel")
            return coords

        blocks.append((k_src.dim, block))
    return _finish(_block_map(source.algebra, target.algebra, source.data["offsets"], target.data["offsets"], blocks))


def _solve_out(legs_target: Sequence[AlgMorphism], rhs: Sequence[AlgMorphism], src: LocalAlgebra, tgt: LocalAlgebra):
    stacked = [row for leg in legs_target for row in leg.matrix]
    values = [row for r in rhs for row in r.matrix]
    x = linalg.solve_matrix(stacked, values)
    unique = linalg.nullspace(stacked, tgt.dim).is_zero()
    return (AlgMorphism(src, tgt, x) if x is not None else None), unique


def _map_pullback(source, target, xis, eta) -> AlgMorphism:
    for n, (pa, pc, xi) in enumerate(zip(source.inputs, target.inputs, xis), start=1):
        _square(eta @ pa, pc @ xi, f"eta∘phi_A{n} = phi_C{n}∘xi{n}")
    rhs = [xis[0] @ source["Pr1"], xis[1] @ source["Pr2"]]
    m, _ = _solve_out([target["Pr1"], target["Pr2"]], rhs, source.algebra, target.algebra)
    if m is None:
        raise SquareDoesNotCommute("image pair does not land in the target pullback")
    return _finish(m)


def _map_pushout(source, target, xis, eta) -> AlgMorphism:
    for n, (pa, pc, xi) in enumerate(zip(source.inputs, target.inputs, xis), start=1):
        _square(xi @ pa, pc @ eta, f"xi{n}∘pi_A{n} = pi_C{n}∘eta")
    m = factor_epimorphism(source.data["projection"], target.data["projection"] @ eta)
    if m is None:
        raise SquareDoesNotCommute("eta does not respect the kernel sums")
    return _finish(m)


# -- universal properties ---------------------------------------------------------------

_OUT_LEGS = {
    "biproduct": ("Pr1", "Pr2"),
    "pullback": ("Pr1", "Pr2"),
    "relative": None,
}
_IN_LEGS = {"biproduct": ("In1", "In2"), "pushout": ("Ep1", "Ep2"), "tensor": ("In1", "In2")}


def _default_legs(result: ConstructionResult, maps: Sequence[AlgMorphism]):
    if result.kind == "relative":
        out = ["PrB"] + [f"PrK{n}" for n in range(1, len(result.inputs) + 1)]
    else:
        out = list(_OUT_LEGS.get(result.kind) or ())
    inn = list(_IN_LEGS.get(result.kind) or ())
    if out and len(out) == len(maps) and all(m.target == result[l].target for m, l in zip(maps, out)):
        return out, "cone"
    if inn and len(inn) == len(maps) and all(m.source == result[l].source for m, l in zip(maps, inn)):
        return inn, "cocone"
    raise ConstructionError(f"maps form neither a cone nor a cocone over this {result.kind}")


def factor_through(result: ConstructionResult, maps: Sequence[AlgMorphism], legs: Sequence[str] | None = None) -> AlgMorphism:
    """The unique mediating morphism for a cone (into the legs' targets) or cocone.

    The commutation equations are solved as an exact linear system; the
    solution must be unique and must itself be a morphism.
    """
    if legs is None:
        legs, shape = _default_legs(result, maps)
    else:
        shape = "cone" if result[legs[0]].source == result.algebra else "cocone"
    leg_maps = [result[l] for l in legs]
    if shape == "cone":
        src = maps[0].source
        if any(m.source != src for m in maps):
            raise NoFactorization("cone maps do not share a source")
        mediator, unique = _solve_out(leg_maps, maps, src, result.algebra)
    else:
        tgt = maps[0].target
        if any(m.target != tgt for m in maps):
            raise NoFactorization("cocone maps do not share a target")
        if result.kind == "tensor":
            mediator, unique = _tensor_mediator(result, maps), True
        else:
            # T [L_1 | ... | L_n] = [s_1 | ... | s_n]  <=>  [L^T] T^T = [s^T]
            lt = [linalg.transpose(l.matrix) for l in leg_maps]
            st = [linalg.transpose(m.matrix) for m in maps]
            stacked = [row for block in lt for row in block]
            values = [row for block in st for row in block]
            x = linalg.solve_matrix(stacked, values)
            unique = linalg.nullspace(stacked, result.algebra.dim).is_zero()
            mediator = AlgMorphism(result.algebra, tgt, linalg.transpose(x)) if x is not None else None
    if mediator is None:
        raise NoFactorization("commutation equations have no solution")
    if not unique:
        raise NonUniqueFactorization("commutation equations have more than one solution")
    report = verify_morphism(mediator)
    if not report:
        raise NoFactorization(f"the only linear mediator is not a morphism: {report.failure}")
    for leg, m in zip(leg_maps, maps):
        composite = leg @ mediator if shape == "cone" else mediator @ leg
        if not _compose_eq(composite, m):
            raise NoFactorization("mediator fails to commute")
    return mediator


def _tensor_mediator(result: ConstructionResult, maps) -> AlgMorphism:
    s1, s2 = maps
    a1, a2 = result.inputs
    if s1.source != a1 or s2.source != a2:
        raise NoFactorization("cocone maps do not start at the tensor factors")
    tgt = s1.target
    cols = []
    for i in range(a1.dim):
        for j in range(a2.dim):
            cols.append(tgt.mul_vectors(s1.column(i), s2.column(j)))
    return AlgMorphism(result.algebra, tgt, linalg.transpose(cols))


# -- distributivity ---------------------------------------------------------------------


@dataclass(frozen=True)
class DistributivityWitness:
    morphism: AlgMorphism  # A ⊗ (A1 ×_B A2)  ->  (A⊗A1) ×_(A⊗B) (A⊗A2)
    tensor_of_pullback: ConstructionResult
    pullback_of_tensors: ConstructionResult


def distributivity_witness(a: LocalAlgebra, phi1: AlgMorphism, phi2: AlgMorphism) -> DistributivityWitness:
    """Isomorphism ``A ⊗ (A1 ×_B A2) ≅ (A ⊗ A1) ×_(A⊗B) (A ⊗ A2)``.

    Sends ``e_i ⊗ (a1, a2)`` to ``(e_i ⊗ a1, e_i ⊗ a2)``.
    """
    inner = pullback(phi1, phi2)
    rhs = tensor(a, inner.algebra)
    ida = identity_morphism(a)
    t1, t2, tb = tensor(a, phi1.source), tensor(a, phi2.source), tensor(a, phi1.target)
    lift1 = map_pair(t1, tb, ida, phi1)
    lift2 = map_pair(t2, tb, ida, phi2)
    lhs = pullback(lift1, lift2)
    cone = [map_pair(rhs, t1, ida, inner["Pr1"]), map_pair(rhs, t2, ida, inner["Pr2"])]
    w = factor_through(lhs, cone)
    if not is_isomorphism(w):
        raise ConstructionError("distributivity map is not bijective")
    return DistributivityWitness(w, rhs, lhs)
