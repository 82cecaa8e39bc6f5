"""Algebras of truncated polynomials over a local algebra.

``P_k A[x_1..x_n]`` keeps monomials of total degree at most ``k``;
``P_{k_1..k_n} A[x_1..x_n]`` keeps exponents ``e_i <= k_i``.  Basis elements
are pairs (monomial, basis element of A) ordered by graded lexicographic
monomial first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg
from .algebra import (
    REALS,
    AlgMorphism,
    LocalAlgebra,
    MorphismError,
    identity_morphism,
    is_isomorphism,
    unit_inclusion,
    verify_morphism,
)
from .constructions import ConstructionResult, pullback, relative_product, tensor
from .ideals import factor_epimorphism, kernel, quotient_algebra


class InclusionFails(ValueError):
    pass


class ParameterOutOfRange(ValueError):
    pass


def default_names(n: int) -> tuple[str, ...]:
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i}" for i in range(1, n + 1))


def graded_lex_key(exps: Sequence[int]):
    return (sum(exps), tuple(-e for e in exps))


def monomial_label(exps: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for e, nm in zip(exps, names):
        if e == 1:
            parts.append(nm)
        elif e > 1:
            parts.append(f"{nm}^{e}")
    return "*".join(parts) if parts else "1"


def monomial_algebra(base: LocalAlgebra, exponents: Sequence[Sequence[int]], names: Sequence[str]) -> LocalAlgebra:
    """``base[x]`` modulo every monomial outside the downward-closed ``exponents``."""
    monos = sorted({tuple(e) for e in exponents}, key=graded_lex_key)
    allowed = set(monos)
    for m in monos:
        for i, e in enumerate(m):
            if e and tuple(x - (j == i) for j, x in enumerate(m)) not in allowed:
                raise ValueError(f"exponent set is not downward closed at {m}")
    d = base.dim
    index = {}
    labels = []
    for m in monos:
        ml = monomial_label(m, names)
        for a in range(d):
            index[(m, a)] = len(labels)
            al = base.labels[a]
            if ml == "1":
                labels.append(al)
            elif al == "1":
                labels.append(ml)
            else:
                labels.append(f"{al}*{ml}")
    n = len(labels)
    table = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for (m1, a1), i in index.items():
        for (m2, a2), j in index.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            if m not in allowed:
                continue
            for k, c in enumerate(base.table[a1][a2]):
                if c:
                    table[i][j][index[(m, k)]] = c
    return LocalAlgebra(labels, table)


@dataclass(frozen=True)
class TruncSpec:
    """A truncated polynomial algebra: total degree ``total`` or per-variable ``degrees``."""

    base: LocalAlgebra
    n_vars: int
    total: int | None = None
    degrees: tuple | None = None
    names: tuple | None = None

    def __post_init__(self):
        if self.n_vars < 1:
            raise ValueError("at least one indeterminate is required")
        if (self.total is None) == (self.degrees is None):
            raise ValueError("give exactly one of a total degree or per-variable degrees")
        if self.degrees is not None:
            object.__setattr__(self, "degrees", tuple(int(k) for k in self.degrees))
            if len(self.degrees) != self.n_vars:
                raise ValueError("one degree bound per indeterminate")
            if any(k < 0 for k in self.degrees):
                raise ValueError("degree bounds must be non-negative")
        elif self.total < 0:
            raise ValueError("degree bounds must be non-negative")
        if self.names is None:
            object.__setattr__(self, "names", default_names(self.n_vars))
        elif len(self.names) != self.n_vars:
            raise ValueError("one name per indeterminate")

    @classmethod
    def total_degree(cls, base: LocalAlgebra, n: int, k: int, names=None) -> "TruncSpec":
        return cls(base, n, total=k, names=tuple(names) if names else None)

    @classmethod
    def per_variable(cls, base: LocalAlgebra, degrees: Sequence[int], names=None) -> "TruncSpec":
        return cls(base, len(degrees), degrees=tuple(degrees), names=tuple(names) if names else None)

    @property
    def is_total(self) -> bool:
        return self.total is not None

    def exponents(self) -> list[tuple[int, ...]]:
        if self.is_total:
            grid = itertools.product(range(self.total + 1), repeat=self.n_vars)
            exps = [e for e in grid if sum(e) <= self.total]
        else:
            exps = list(itertools.product(*(range(k + 1) for k in self.degrees)))
        return sorted(exps, key=graded_lex_key)

    def contains(self, exps: Sequence[int]) -> bool:
        if self.is_total:
            return sum(exps) <= self.total
        return all(e <= k for e, k in zip(exps, self.degrees))

    def basis_index(self) -> dict:
        """``{(exponents, base_index): position}`` aligned with the built algebra."""
        d = self.base.dim
        return {(m, a): i * d + a for i, m in enumerate(self.exponents()) for a in range(d)}

    def build(self) -> LocalAlgebra:
        return _build(self)


@lru_cache(maxsize=256)
def _build(spec: TruncSpec) -> LocalAlgebra:
    return monomial_algebra(spec.base, spec.exponents(), spec.names)


def build_truncated_total(base: LocalAlgebra, n: int, k: int, names=None) -> LocalAlgebra:
    return TruncSpec.total_degree(base, n, k, names).build()


def build_truncated_multi(base: LocalAlgebra, degrees: Sequence[int], names=None) -> LocalAlgebra:
    return TruncSpec.per_variable(base, degrees, names).build()


# -- truncation morphisms ---------------------------------------------------------


def inclusion_condition(source: TruncSpec, target: TruncSpec) -> tuple[bool, str]:
    """Whether the source's defining ideal lies in the target's.

    Conditions are stated in ideal exponents: ``P_k`` is the quotient by
    ``I^(k+1)`` and ``P_(k_1..k_n)`` by ``I^(k_1+1, .., k_n+1)``.
    """
    n = source.n_vars
    if source.is_total and target.is_total:
        k, kp = source.total + 1, target.total + 1
        return k >= kp, f"I^{k} ⊆ I^{kp} needs {k} >= {kp}"
    if not source.is_total and not target.is_total:
        ks = [k + 1 for k in source.degrees]
        kt = [k + 1 for k in target.degrees]
        ok = all(a >= b for a, b in zip(ks, kt))
        return ok, f"I^{tuple(ks)} ⊆ I^{tuple(kt)} needs {ks} >= {kt} componentwise"
    if source.is_total:
        k = source.total + 1
        kt = [k_ + 1 for k_ in target.degrees]
        bound = sum(kt) - n + 1
        return k >= bound, f"I^{k} ⊆ I^{tuple(kt)} needs {k} >= {'+'.join(map(str, kt))}-{n}+1 = {bound}"
    ks = [k_ + 1 for k_ in source.degrees]
    k = target.total + 1
    return all(a >= k for a in ks), f"I^{tuple(ks)} ⊆ I^{k} needs every k_i >= {k}"


def truncation_morphism(source: TruncSpec, target: TruncSpec) -> AlgMorphism:
    """The coefficient-forgetting epimorphism between truncated algebras."""
    if source.base != target.base or source.n_vars != target.n_vars:
        raise InclusionFails("truncations need the same base algebra and number of indeterminates")
    ok, why = inclusion_condition(source, target)
    if not ok:
        raise InclusionFails(why)
    src, tgt = source.build(), target.build()
    tgt_index = target.basis_index()
    cols = []
    for (m, a), _ in sorted(source.basis_index().items(), key=lambda kv: kv[1]):
        j = tgt_index.get((m, a))
        cols.append(linalg.unit(tgt.dim, j) if j is not None else linalg.zeros(tgt.dim))
    tau = AlgMorphism(src, tgt, linalg.transpose(cols))
    tau.check()
    return tau


def truncation_quotient_iso(tau: AlgMorphism) -> AlgMorphism:
    """Isomorphism ``source / ker(tau) -> target`` induced by a truncation."""
    ideal, _ = kernel(tau)
    q = quotient_algebra(tau.source, ideal)
    iso = factor_epimorphism(q.projection, tau)
    if iso is None or not is_isomorphism(iso):
        raise MorphismError(verify_morphism(iso) if iso else None)
    return iso


def tensor_split_iso(base: LocalAlgebra, degrees: Sequence[int], names=None) -> AlgMorphism:
    """``base ⊗ P_k1 R[x_1] ⊗ ... ⊗ P_kn R[x_n] -> P_(k1..kn) base[x_1..x_n]``."""
    spec = TruncSpec.per_variable(base, degrees, names)
    chain = base
    for k, nm in zip(spec.degrees, spec.names):
        chain = tensor(chain, build_truncated_total(REALS, 1, k, (nm,))).algebra
    target = spec.build()
    index = spec.basis_index()
    cols = []
    # tensor chains are row-major: base index outermost, last variable innermost
    ranges = [range(base.dim)] + [range(k + 1) for k in spec.degrees]
    for combo in itertools.product(*ranges):
        a, exps = combo[0], tuple(combo[1:])
        cols.append(linalg.unit(target.dim, index[(exps, a)]))
    iso = AlgMorphism(chain, target, linalg.transpose(cols))
    if not is_isomorphism(iso):
        raise MorphismError(verify_morphism(iso))
    return iso


def morphism_from_generators(
    spec: TruncSpec, target: LocalAlgebra, images: Sequence, base_map: AlgMorphism | None = None
) -> AlgMorphism:
    """Morphism out of a truncated algebra fixed by the images of its indeterminates.

    ``images`` are target coordinate vectors with zero finite part; the
    result is verified, so images violating the truncation relations raise.
    """
    if base_map is None:
        if spec.base.dim != 1:
            raise ValueError("a base morphism is required over a non-trivial base algebra")
        base_map = unit_inclusion(target)
    imgs = [tuple(Fraction(x) for x in v) for v in images]
    if len(imgs) != spec.n_vars or any(v[0] != 0 for v in imgs):
        raise ValueError("one image in the maximal ideal per indeterminate")
    src = spec.build()
    cols = [None] * src.dim
    for (m, a), i in spec.basis_index().items():
        v = base_map.column(a)
        for img, e in zip(imgs, m):
            for _ in range(e):
                v = target.mul_vectors(v, img)
        cols[i] = v
    return AlgMorphism(src, target, linalg.transpose(cols)).check()


# -- the B and C families ---------------------------------------------------------------


def _check_family(r: int, t: int, s: int) -> None:
    if min(r, t, s) < 1 or s > min(r, t):
        raise ParameterOutOfRange(f"need r, t, s >= 1 and s <= min(r, t); got r={r} t={t} s={s}")


def module_rank(algebra: LocalAlgebra, base: LocalAlgebra) -> int:
    if algebra.dim % base.dim:
        raise ValueError("dimension is not a multiple of the base dimension")
    return algebra.dim // base.dim


class _PowerModel:
    """Elements ``const + sum_v sum_i c[v][i] v^i`` with ``v*w = 0`` for distinct variables.

    ``bounds[v]`` is the top surviving power of ``v``.
    """

    def __init__(self, base: LocalAlgebra, bounds: dict):
        self.base = base
        self.bounds = bounds

    def zero(self):
        d = self.base.dim
        return {"const": linalg.zeros(d), **{v: [linalg.zeros(d) for _ in range(b)] for v, b in self.bounds.items()}}

    def term(self, var, power, a):
        el = self.zero()
        u = linalg.unit(self.base.dim, a)
        if power == 0:
            el["const"] = u
        else:
            el[var][power - 1] = u
        return el

    def mul(self, p, q):
        base = self.base
        out = self.zero()
        add = lambda x, y: tuple(a + b for a, b in zip(x, y))
        out["const"] = base.mul_vectors(p["const"], q["const"])
        for v, b in self.bounds.items():
            for i in range(b):
                out[v][i] = add(base.mul_vectors(p["const"], q[v][i]), base.mul_vectors(p[v][i], q["const"]))
            for i in range(b):
                for j in range(b):
                    if i + j + 2 <= b:
                        out[v][i + j + 1] = add(out[v][i + j + 1], base.mul_vectors(p[v][i], q[v][j]))
        return out


def _family_algebra(model: _PowerModel, basis, read) -> LocalAlgebra:
    labels = [lab for lab, _ in basis]
    elements = [el for _, el in basis]
    n = len(basis)
    table = [[read(model.mul(elements[i], elements[j])) for j in range(n)] for i in range(n)]
    return LocalAlgebra(labels, table)


def _label(base: LocalAlgebra, a: int, mono: str) -> str:
    al = base.labels[a]
    if mono == "1":
        return al
    return mono if al == "1" else f"{al}*{mono}"


def build_B(r: int, t: int, s: int, base: LocalAlgebra = REALS) -> ConstructionResult:
    """``B^s_{r,t}``: span of ``a(x^i + y^i)`` for ``i <= s`` and the tails
    ``x^{s+1..r}``, ``y^{s+1..t}`` inside ``P_{r,t} A[x,y] / <xy>``."""
    _check_family(r, t, s)
    d = base.dim
    model = _PowerModel(base, {"x": r, "y": t})
    basis = []
    for i in range(s + 1):
        for a in range(d):
            el = model.term("x", i, a)
            if i:
                el["y"][i - 1] = linalg.unit(d, a)
            mono = "1" if i == 0 else ("(x+y)" if i == 1 else f"(x^{i}+y^{i})")
            basis.append((_label(base, a, mono), el))
    for v, top in (("x", r), ("y", t)):
        for i in range(s + 1, top + 1):
            for a in range(d):
                basis.append((_label(base, a, f"{v}^{i}"), model.term(v, i, a)))

    def read(el):
        if any(el["x"][i - 1] != el["y"][i - 1] for i in range(1, s + 1)):
            raise AssertionError("product left the B subspace")
        coords = list(el["const"])
        for i in range(1, s + 1):
            coords.extend(el["x"][i - 1])
        for v, top in (("x", r), ("y", t)):
            for i in range(s + 1, top + 1):
                coords.extend(el[v][i - 1])
        return coords

    alg = _family_algebra(model, basis, read)
    px = build_truncated_total(base, 1, r, ("x",))
    py = build_truncated_total(base, 1, t, ("y",))
    legs = {"Pr1": _family_projection(alg, px, d, s, r, t, "x"), "Pr2": _family_projection(alg, py, d, s, r, t, "y")}
    for leg in legs.values():
        leg.check()
    return ConstructionResult("B", alg, legs, (r, t, s, base))


def _family_projection(alg, target, d, s, r, t, var) -> AlgMorphism:
    """B -> P_r A[x] (var='x') or P_t A[y] (var='y')."""
    cols = []
    for i in range(s + 1):
        for a in range(d):
            cols.append(linalg.unit(target.dim, i * d + a))
    for v, top in (("x", r), ("y", t)):
        for i in range(s + 1, top + 1):
            for a in range(d):
                cols.append(linalg.unit(target.dim, i * d + a) if v == var else linalg.zeros(target.dim))
    cols[0] = linalg.unit(target.dim, 0)
    return AlgMorphism(alg, target, linalg.transpose(cols))


def build_C(r: int, t: int, s: int, base: LocalAlgebra = REALS) -> ConstructionResult:
    """``C^s_{r,t}``: span of ``a z^i`` (``i <= s``), ``a x^{s+1..r}``, ``a y^{s+1..t}``
    inside ``P_{r,t,s} A[x,y,z] / <xy, xz, yz>``."""
    _check_family(r, t, s)
    d = base.dim
    model = _PowerModel(base, {"z": s, "x": r, "y": t})
    basis = []
    for i in range(s + 1):
        for a in range(d):
            mono = "1" if i == 0 else ("z" if i == 1 else f"z^{i}")
            basis.append((_label(base, a, mono), model.term("z", i, a)))
    for v, top in (("x", r), ("y", t)):
        for i in range(s + 1, top + 1):
            for a in range(d):
                basis.append((_label(base, a, f"{v}^{i}"), model.term(v, i, a)))

    def read(el):
        if any(any(el[v][i - 1]) for v in ("x", "y") for i in range(1, s + 1)):
            raise AssertionError("product left the C subspace")
        coords = list(el["const"])
        for i in range(1, s + 1):
            coords.extend(el["z"][i - 1])
        for v, top in (("x", r), ("y", t)):
            for i in range(s + 1, top + 1):
                coords.extend(el[v][i - 1])
        return coords

    alg = _family_algebra(model, basis, read)
    pz = build_truncated_total(base, 1, s, ("z",))
    cols = [linalg.unit(pz.dim, k) for k in range(pz.dim)]
    cols += [linalg.zeros(pz.dim)] * (alg.dim - pz.dim)
    legs = {"PrB": AlgMorphism(alg, pz, linalg.transpose(cols)).check()}
    return ConstructionResult("C", alg, legs, (r, t, s, base))


def family_truncations(r: int, t: int, s: int, base: LocalAlgebra = REALS):
    """The two truncations ``P_r A[x] -> P_s A[z] <- P_t A[y]``."""
    _check_family(r, t, s)
    z = TruncSpec.total_degree(base, 1, s, ("z",))
    tau_r = truncation_morphism(TruncSpec.total_degree(base, 1, r, ("x",)), z)
    tau_t = truncation_morphism(TruncSpec.total_degree(base, 1, t, ("y",)), z)
    return tau_r, tau_t


def categorical_B(r: int, t: int, s: int, base: LocalAlgebra = REALS) -> ConstructionResult:
    return pullback(*family_truncations(r, t, s, base))


def categorical_C(r: int, t: int, s: int, base: LocalAlgebra = REALS) -> ConstructionResult:
    return relative_product(*family_truncations(r, t, s, base))


@dataclass(frozen=True)
class Certificate:
    verdict: str  # "non-isomorphic" or "undetermined"
    reason: str
    invariants: tuple

    @property
    def non_isomorphic(self) -> bool:
        return self.verdict == "non-isomorphic"


def invariants(a: LocalAlgebra) -> dict:
    return {"dim": a.dim, "height": a.height, "hilbert": a.hilbert_vector()}


def certify_non_isomorphic(a: LocalAlgebra, b: LocalAlgebra) -> Certificate:
    """Separate two algebras by dimension, height or Hilbert vector when possible."""
    ia, ib = invariants(a), invariants(b)
    pair = (ia, ib)
    if ia["dim"] != ib["dim"]:
        return Certificate("non-isomorphic", f"dimensions {ia['dim']} != {ib['dim']}", pair)
    if ia["height"] != ib["height"]:
        return Certificate("non-isomorphic", f"heights {ia['height']} != {ib['height']}", pair)
    n = max(len(ia["hilbert"]), len(ib["hilbert"]))
    ha = ia["hilbert"] + (0,) * (n - len(ia["hilbert"]))
    hb = ib["hilbert"] + (0,) * (n - len(ib["hilbert"]))
    if ha != hb:
        return Certificate("non-isomorphic", f"hilbert vectors {ha} != {hb}", pair)
    return Certificate("undetermined", "dimension, height and hilbert vector agree", pair)


def identity_on(alg: LocalAlgebra) -> AlgMorphism:
    return identity_morphism(alg)
