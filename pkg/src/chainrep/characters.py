"""Characters of the abelian congruence kernels K^i (i >= r/2).

An element I + pi^i x of K^i is represented through its coordinate x, a
matrix over O_{r-i}; the character indexed by M in M_n(O_{r-i}) is
psi_M(I + pi^i x) = psi(pi^{i-r} tr(M x)).  All values are exact phases.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .chain_ring import Phase, RingSpec, psi_level
from .group_engine import (
    BudgetExceeded,
    GroupTable,
    _budget,
    congruence_kernel,
    gl_order,
    kernel_generators,
    preimage,
    section_matrix,
)
from .matrix_algebra import (
    Codes,
    RMatrix,
    identity_codes,
    mconj,
    minv,
    mmul,
    mreduce,
    msection,
    msub,
    mtrace,
)


class NotInKernel(ValueError):
    """The element is not in the congruence kernel of the requested level."""


def ceil_half(r: int) -> tuple[int, int]:
    """(l, l') with l = ceil(r/2) and l' = r - l."""
    l = (r + 1) // 2
    return l, r - l


def psi(spec: RingSpec, t: int, j: int) -> Phase:
    """psi(pi^{-j} t): trivial on integral elements, nontrivial on pi^{-1}O."""
    return psi_level(spec, t, j)


def kernel_coordinate(spec: RingSpec, n: int, k: Codes, i: int) -> Codes:
    """x over O_{r-i} with k = I + pi^i x."""
    d = msub(spec, k, identity_codes(n))
    if any(spec.valuation(a) < i for a in d):
        raise NotInKernel(f"element is not in K^{i}")
    xs = tuple(spec.shift_down(a, i) for a in d)
    return mreduce(spec, xs, spec.r - i)


def kernel_element(spec: RingSpec, n: int, x: Codes, i: int, source: RingSpec) -> Codes:
    """I + pi^i x for x over ``source`` = O_{r-i}."""
    pi_i = spec.pi_power(i)
    lifted = msection(source, x, spec.r)
    return tuple(spec.add(e, spec.mul(pi_i, c)) for e, c in zip(identity_codes(n), lifted))


@dataclass(frozen=True)
class KernelCharacter:
    """psi_M on K^i of GL_n(O_r), with M over O_{r-i}."""

    spec: RingSpec
    level: int
    M: RMatrix

    def __post_init__(self):
        r = self.spec.r
        if not (2 * self.level >= r and self.level < r):
            raise ValueError(f"level {self.level} must satisfy r/2 <= i < r for r = {r}")
        if self.M.spec.r != r - self.level or self.M.spec.p != self.spec.p:
            raise ValueError("M must have entries in O_{r-i}")

    @property
    def n(self) -> int:
        return self.M.n

    def on_coordinate(self, x: Codes) -> Phase:
        S = self.M.spec
        return psi(S, mtrace(S, self.n, mmul(S, self.n, self.M.entries, x)), S.r)

    def __call__(self, k: Codes) -> Phase:
        return self.on_coordinate(kernel_coordinate(self.spec, self.n, k, self.level))

    def to_json(self) -> dict:
        return {"ring": self.spec.name, "level": self.level, "M": self.M.to_json()}


def eval_kernel_char(chi: KernelCharacter, k: Codes) -> Phase:
    return chi(k)


def char_conjugate(g: Codes, chi: KernelCharacter) -> KernelCharacter:
    """The character x -> chi(g^{-1} x g), which is indexed by g M g^{-1}."""
    S = chi.M.spec
    gs = mreduce(chi.spec, g, S.r)
    return KernelCharacter(chi.spec, chi.level, RMatrix(S, chi.n, mconj(S, chi.n, gs, chi.M.entries)))


def conjugate_pointwise(g: Codes, chi: KernelCharacter, elements) -> bool:
    """Check chi^g(x) = chi(g^{-1} x g) on the given kernel elements."""
    R, n = chi.spec, chi.n
    gi = minv(R, n, g)
    other = char_conjugate(g, chi)
    return all(other(x) == chi(mmul(R, n, mmul(R, n, gi, x), g)) for x in elements)


def fixes(g: Codes, chi: KernelCharacter, kernel_gens) -> bool:
    """Whether conjugation by g fixes chi (checked on generators of K^i)."""
    R, n = chi.spec, chi.n
    gi = minv(R, n, g)
    return all(chi(mmul(R, n, mmul(R, n, g, x), gi)) == chi(x) for x in kernel_gens)


def stabilizer_direct(chi: KernelCharacter, budget: int | None = None) -> GroupTable:
    """G_r(psi_M) by testing every coset of K^{r-i} after checking K^{r-i} itself fixes psi_M."""
    R, n, i = chi.spec, chi.n, chi.level
    s = R.r - i
    if gl_order(R, n) > _budget(budget):
        raise BudgetExceeded(f"|GL_{n}({R.name})| exceeds budget")
    gens = kernel_generators(R, n, i)
    sat = kernel_generators(R, n, s)
    if not all(fixes(k, chi, gens) for k in sat):
        raise AssertionError("K^{r-i} does not fix the character")
    from .group_engine import enumerate_group

    Gs = enumerate_group(R.with_length(s), n, budget)
    keep = [h for h in Gs.elements if fixes(section_matrix(R, h, Gs.spec), chi, gens)]
    return preimage(R, n, s, keep, budget)


def stabilizer_hill(chi: KernelCharacter, budget: int | None = None) -> GroupTable:
    """rho_{r-i}^{-1}(C_{G_{r-i}}(M))."""
    from .centralizer import unit_commutant

    C = unit_commutant(chi.M, budget)
    return preimage(chi.spec, chi.n, chi.spec.r - chi.level, C.elements, budget)


def stabilizer_stable(chi: KernelCharacter, budget: int | None = None) -> GroupTable:
    """K^{r-i} C_{G_r}(mu(M)), valid for M = A + pi B in stable split normal form."""
    from .centralizer import unit_commutant

    R, n = chi.spec, chi.n
    s = R.r - chi.level
    lifted = RMatrix(R, n, msection(chi.M.spec, chi.M.entries, R.r))
    C = unit_commutant(lifted, budget)
    K = congruence_kernel(R, n, s, budget)
    elems = {mmul(R, n, c, k) for c in C.elements for k in K.elements}
    return GroupTable(R, n, elems, C.generators + K.generators)


@dataclass
class StabilizerReport:
    table: GroupTable
    hill_agrees: bool
    stable_form: dict | None

    def to_json(self) -> dict:
        return {"order": self.table.order, "hillFormulaAgrees": self.hill_agrees, "stableForm": self.stable_form}


def stabilizer_of_kernel_char(chi: KernelCharacter, budget: int | None = None) -> StabilizerReport:
    """Direct stabilizer, compared with the centralizer-preimage description.

    When M is stable and split, the normal form A + pi B is also checked:
    its stabilizer equals K^{r-i} C_{G_r}(mu(A + pi B)).
    """
    from .matrix_algebra import madd, mscale
    from .stability import is_stable

    direct = stabilizer_direct(chi, budget)
    hill = stabilizer_hill(chi, budget)
    form = None
    cert = is_stable(chi.M, budget)
    if cert.stable and cert.degree == 1:
        S = chi.M.spec
        normal = RMatrix(S, chi.n, madd(S, cert.A.entries, mscale(S, S.pi_power(1), cert.B.entries)))
        nchi = KernelCharacter(chi.spec, chi.level, normal)
        a = stabilizer_direct(nchi, budget)
        b = stabilizer_stable(nchi, budget)
        form = {"normalForm": normal.to_json(), "agrees": a.same_elements(b), "order": a.order}
    return StabilizerReport(direct, direct.same_elements(hill), form)


def all_kernel_characters(spec: RingSpec, n: int, i: int):
    S = spec.with_length(spec.r - i)
    for entries in itertools.product(range(S.size), repeat=n * n):
        yield KernelCharacter(spec, i, RMatrix(S, n, entries))


@dataclass
class KernelIsoReport:
    r: int
    i: int
    order: int
    abelian: bool
    homomorphism: bool
    graded: bool
    witness: tuple | None = None

    @property
    def passed(self) -> bool:
        return self.abelian and self.homomorphism and self.graded

    def to_json(self) -> dict:
        out = {
            "r": self.r,
            "i": self.i,
            "order": self.order,
            "abelian": self.abelian,
            "homomorphism": self.homomorphism,
            "graded": self.graded,
        }
        if self.witness is not None:
            out["nonCommutingPair"] = [list(w) for w in self.witness]
        return out


def kernel_iso_checks(spec: RingSpec, n: int, i: int, budget: int | None = None) -> KernelIsoReport:
    """I + pi^i x -> rho_{r-i}(x) as a map K^i -> (g_{r-i}, +), and the graded map to g_1."""
    R = spec
    K = congruence_kernel(R, n, i, budget)
    S = R.with_length(R.r - i)
    coord = {k: _coord(R, n, k, i) for k in K.elements}
    witness = None
    gens = K.generators
    for a in K.elements:
        for b in gens:
            if mmul(R, n, a, b) != mmul(R, n, b, a):
                witness = (a, b)
                break
        if witness:
            break
    abelian = witness is None
    hom = True
    if abelian:
        for a in K.elements:
            for b in gens:
                lhs = coord[mmul(R, n, a, b)]
                rhs = tuple(S.add(u, v) for u, v in zip(coord[a], coord[b]))
                if lhs != rhs:
                    hom = False
                    break
            if not hom:
                break
        hom = hom and len(set(coord.values())) == K.order
    else:
        hom = False
    # graded: x mod pi is a homomorphism K^i -> g_1 with kernel K^{i+1}
    F = R.with_length(1)
    graded = True
    for a in K.elements:
        for b in gens:
            lhs = mreduce(R, _coord_full(R, n, mmul(R, n, a, b), i), 1)
            rhs = tuple(F.add(u, v) for u, v in zip(mreduce(R, _coord_full(R, n, a, i), 1), mreduce(R, _coord_full(R, n, b, i), 1)))
            if lhs != rhs:
                graded = False
                break
        if not graded:
            break
    return KernelIsoReport(R.r, i, K.order, abelian, hom, graded, witness)


def _coord_full(R: RingSpec, n: int, k: Codes, i: int) -> Codes:
    d = msub(R, k, identity_codes(n))
    return tuple(R.shift_down(a, i) for a in d)


def _coord(R: RingSpec, n: int, k: Codes, i: int) -> Codes:
    return mreduce(R, _coord_full(R, n, k, i), R.r - i)
