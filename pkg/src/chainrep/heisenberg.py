"""Heisenberg lifts for odd r and p > 2.

With r = 2l - 1 and l' = l - 1, the quotient K^{l'}/K^l is the F_q-space
g_1 and psi_M (M over O_{l'}) gives the alternating form
B_M(x, y) = tr(Mbar (x y - y x)).  A maximal isotropic subspace containing
the radical defines J_M; the character psi_Mhat of J_M induces the unique
irreducible sigma of K^{l'} above psi_Mhat restricted to K^l.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from typing import Sequence

from .chain_ring import Phase, RingSpec, psi_level
from .characters import KernelCharacter, ceil_half, kernel_coordinate
from .cyclotomic import CycInt
from .group_engine import (
    ClassFunction,
    ClassTable,
    GroupTable,
    _budget,
    congruence_kernel,
    conjugacy_classes,
    enumerate_group,
    inner_product,
    phase_to_cyc,
    preimage,
    section_matrix,
)
from .matrix_algebra import (
    Codes,
    RMatrix,
    howell_form,
    identity_codes,
    kernel,
    madd,
    minv,
    mmul,
    module_contains,
    mreduce,
    msection,
    mscale,
    msub,
    mtrace,
)


class PIsTwo(ValueError):
    """The Heisenberg lift needs p > 2."""


class WrongParity(ValueError):
    """The construction needs r odd and r >= 3."""


class InvariantChoiceFailed(RuntimeError):
    """No maximal isotropic subspace invariant under the supplied group was found."""


def _check_params(spec: RingSpec) -> tuple[int, int]:
    if spec.p == 2:
        raise PIsTwo("the lifted character divides by 2")
    if spec.r % 2 == 0 or spec.r < 3:
        raise WrongParity(f"r = {spec.r} must be odd and at least 3")
    return ceil_half(spec.r)


def _unit_vectors(n2: int) -> list[Codes]:
    return [tuple(1 if t == a else 0 for t in range(n2)) for a in range(n2)]


@dataclass
class AlternatingForm:
    Mbar: RMatrix
    gram: list[list[int]]

    @property
    def field(self) -> RingSpec:
        return self.Mbar.spec

    @property
    def dim(self) -> int:
        return len(self.gram)

    def pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        F = self.field
        acc = 0
        for a, xa in enumerate(x):
            if xa:
                for b, yb in enumerate(y):
                    if yb and self.gram[a][b]:
                        acc = F.add(acc, F.mul(xa, F.mul(yb, self.gram[a][b])))
        return acc

    def rank(self) -> int:
        return len(howell_form(self.field, [tuple(row) for row in self.gram], self.dim))

    def to_json(self) -> dict:
        return {"Mbar": self.Mbar.to_json(), "gram": self.gram, "rank": self.rank()}


def gram(M: RMatrix) -> AlternatingForm:
    """Gram matrix of B_M on the basis E_ij of g_1 (row-major order)."""
    F = M.spec.with_length(1)
    n = M.n
    Mbar = mreduce(M.spec, M.entries, 1)
    basis = _unit_vectors(n * n)
    G = []
    for x in basis:
        row = []
        for y in basis:
            c = msub(F, mmul(F, n, x, y), mmul(F, n, y, x))
            row.append(mtrace(F, n, mmul(F, n, Mbar, c)))
        G.append(row)
    return AlternatingForm(RMatrix(F, n, Mbar), G)


@dataclass
class IsotropicData:
    form: AlternatingForm
    radical: list[Codes]
    isotropic: list[Codes]

    @property
    def dim_radical(self) -> int:
        return len(self.radical)

    @property
    def dim_isotropic(self) -> int:
        return len(self.isotropic)

    def contains(self, v: Sequence[int]) -> bool:
        return module_contains(self.form.field, self.isotropic, v)

    def to_json(self) -> dict:
        return {
            "dimRadical": self.dim_radical,
            "dimIsotropic": self.dim_isotropic,
            "radical": [list(v) for v in self.radical],
            "isotropic": [list(v) for v in self.isotropic],
        }


def _span(F: RingSpec, vecs, n2: int) -> list[Codes]:
    return howell_form(F, list(vecs), n2)


def _act(F: RingSpec, n: int, g: Codes, v: Codes) -> Codes:
    return mmul(F, n, mmul(F, n, g, v), minv(F, n, g))


def radical_and_isotropic(
    form: AlternatingForm,
    invariant_under: Sequence[Codes] | None = None,
    reverse: bool = False,
) -> IsotropicData:
    """Radical of B_M and a maximal isotropic subspace above it.

    Candidates are scanned in canonical order (or reversed).  With
    ``invariant_under`` (matrices over any O_s, acting through their residue
    by conjugation) the subspace is grown by orbit spans so it stays
    invariant; a depth-first search backs up when an orbit span is not
    isotropic.
    """
    F, n2 = form.field, form.dim
    n = form.Mbar.n
    rad_basis, _ = kernel(F, [tuple(row) for row in form.gram])
    radical = _span(F, rad_basis, n2)
    target = len(radical) + (n2 - len(radical)) // 2
    cands = [v for v in itertools.product(range(F.size), repeat=n2) if any(v)]
    if reverse:
        cands.reverse()
    if invariant_under is None:
        W = list(radical)
        for v in cands:
            if len(W) == target:
                break
            if module_contains(F, W, v):
                continue
            if all(form.pair(v, w) == 0 for w in W):
                W = _span(F, W + [v], n2)
        return IsotropicData(form, radical, W)
    acts = [mreduce(g_spec, g, 1) for g_spec, g in _residues(invariant_under)]
    for g in acts:
        for v in radical:
            if not module_contains(F, radical, _act(F, n, g, v)):
                raise InvariantChoiceFailed("radical is not invariant")
    found = _invariant_search(form, radical, target, cands, acts, n, budget=_budget(None))
    if found is None:
        raise InvariantChoiceFailed("no invariant maximal isotropic subspace")
    return IsotropicData(form, radical, found)


def maximal_isotropics(form: AlternatingForm, limit: int = 64) -> list[IsotropicData]:
    """Distinct maximal isotropic subspaces above the radical, one seeded by each candidate vector."""
    F, n2 = form.field, form.dim
    base = radical_and_isotropic(form)
    radical = base.radical
    target = base.dim_isotropic
    out: dict[tuple, IsotropicData] = {tuple(base.isotropic): base}
    for v in itertools.product(range(F.size), repeat=n2):
        if len(out) >= limit:
            break
        if module_contains(F, radical, v) or any(form.pair(v, w) for w in radical):
            continue
        W = _span(F, list(radical) + [v], n2)
        for u in itertools.product(range(F.size), repeat=n2):
            if len(W) == target:
                break
            if not module_contains(F, W, u) and all(form.pair(u, w) == 0 for w in W):
                W = _span(F, W + [u], n2)
        out.setdefault(tuple(W), IsotropicData(form, radical, W))
    return [out[k] for k in sorted(out)]


def _residues(mats):
    for m in mats:
        if isinstance(m, RMatrix):
            yield m.spec, m.entries
        else:
            spec, entries = m
            yield spec, entries


def _orbit_span(F, n, n2, W, v, acts):
    span = _span(F, W + [v], n2)
    changed = True
    while changed:
        changed = False
        for g in acts:
            for u in list(span):
                w = _act(F, n, g, u)
                if not module_contains(F, span, w):
                    span = _span(F, span + [w], n2)
                    changed = True
    return span


def _invariant_search(form, W, target, cands, acts, n, budget):
    F, n2 = form.field, form.dim
    if len(W) == target:
        return W
    steps = [0]

    def rec(W):
        if len(W) == target:
            return W
        tried = set()
        for v in cands:
            steps[0] += 1
            if steps[0] > budget:
                return None
            if module_contains(F, W, v) or any(form.pair(v, w) for w in W):
                continue
            U = _orbit_span(F, n, n2, W, v, acts)
            key = tuple(U)
            if key in tried or len(U) > target:
                continue
            tried.add(key)
            if all(form.pair(a, b) == 0 for a in U for b in U):
                out = rec(U)
                if out is not None:
                    return out
        return None

    return rec(list(W))


# --------------------------------------------------------------------------
# the lifted character and its induction


@dataclass
class HeisenbergSetup:
    """K^{l'} with its class table, for a fixed ring and size."""

    spec: RingSpec
    n: int
    K: GroupTable
    table: ClassTable
    l: int
    lp: int

    @classmethod
    def build(cls, spec: RingSpec, n: int, budget: int | None = None) -> "HeisenbergSetup":
        l, lp = _check_params(spec)
        K = congruence_kernel(spec, n, lp, budget)
        return cls(spec, n, K, conjugacy_classes(K), l, lp)

    @property
    def cyc_order(self) -> int:
        return self.spec.p ** self.spec.r


_SETUPS: dict[tuple, HeisenbergSetup] = {}


def setup_for(spec: RingSpec, n: int, budget: int | None = None) -> HeisenbergSetup:
    key = (spec.name, n)
    if key not in _SETUPS:
        _SETUPS[key] = HeisenbergSetup.build(spec, n, budget)
    return _SETUPS[key]


@dataclass
class LiftedCharacter:
    """psi_Mhat on J_M (or R_M): x -> psi(pi^{-l} tr(Mhat (x - pi^{l'} x^2 / 2)))."""

    spec: RingSpec
    Mhat: RMatrix
    domain: IsotropicData

    def __post_init__(self):
        l, lp = _check_params(self.spec)
        if self.Mhat.spec.r != l or self.Mhat.spec.p != self.spec.p:
            raise ValueError("Mhat must have entries in O_l")
        self._half = self.Mhat.spec.inv(2)

    @property
    def n(self) -> int:
        return self.Mhat.n

    @property
    def M(self) -> RMatrix:
        _l, lp = ceil_half(self.spec.r)
        S = self.Mhat.spec
        return RMatrix(S.with_length(lp), self.n, mreduce(S, self.Mhat.entries, lp))

    def in_domain(self, k: Codes) -> bool:
        _l, lp = ceil_half(self.spec.r)
        x = kernel_coordinate(self.spec, self.n, k, lp)
        return self.domain.contains(mreduce(self.Mhat.spec, x, 1))

    def on_coordinate(self, x: Codes) -> Phase:
        S, n = self.Mhat.spec, self.n
        _l, lp = ceil_half(self.spec.r)
        quad = mscale(S, S.mul(self._half, S.pi_power(lp)), mmul(S, n, x, x))
        y = msub(S, x, quad)
        return psi_level(S, mtrace(S, n, mmul(S, n, self.Mhat.entries, y)), S.r)

    def __call__(self, k: Codes) -> Phase:
        _l, lp = ceil_half(self.spec.r)
        return self.on_coordinate(kernel_coordinate(self.spec, self.n, k, lp))


def lifted_char(Mhat: RMatrix, spec: RingSpec, domain: IsotropicData | None = None) -> LiftedCharacter:
    if domain is None:
        domain = radical_and_isotropic(gram(Mhat))
    return LiftedCharacter(spec, Mhat, domain)


def coset_representatives(spec: RingSpec, n: int, data: IsotropicData) -> list[Codes]:
    """I + pi^{l'} mu(v) for v running over canonical representatives of g_1 / J."""
    F = data.form.field
    _l, lp = ceil_half(spec.r)
    n2 = n * n
    reps: list[Codes] = []
    seen: list[Codes] = []
    for v in itertools.product(range(F.size), repeat=n2):
        if any(module_contains(F, data.isotropic, msub(F, v, u)) for u in seen):
            continue
        seen.append(v)
        lifted = msection(F, v, spec.r)
        reps.append(madd(spec, identity_codes(n), mscale(spec, spec.pi_power(lp), lifted)))
    return reps


@dataclass
class InducedSigma:
    function: ClassFunction
    lifted: LiftedCharacter

    def degree(self) -> int:
        return self.function.degree()

    def __call__(self, k: Codes) -> CycInt:
        return self.function(k)

    def digest(self) -> str:
        return class_function_digest(self.function)

    def to_json(self) -> dict:
        return {
            "Mhat": self.lifted.Mhat.to_json(),
            "degree": self.degree(),
            "dimIsotropic": self.lifted.domain.dim_isotropic,
            "digest": self.digest(),
        }


def class_function_digest(f: ClassFunction) -> str:
    payload = json.dumps([list(v) for v in f.key()], separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def induce_sigma(lifted: LiftedCharacter, setup: HeisenbergSetup | None = None) -> InducedSigma:
    """Ind_{J}^{K^{l'}} psi_Mhat on the classes of K^{l'} (J is normal in K^{l'})."""
    setup = setup or setup_for(lifted.spec, lifted.n)
    R, n, N = setup.spec, setup.n, setup.cyc_order
    reps = coset_representatives(R, n, lifted.domain)
    invs = [minv(R, n, t) for t in reps]
    values = []
    for c in setup.table.reps:
        acc = CycInt(N)
        if lifted.in_domain(c):
            for t, ti in zip(reps, invs):
                acc = acc + phase_to_cyc(lifted(mmul(R, n, mmul(R, n, ti, c), t)), N)
        values.append(acc)
    return InducedSigma(ClassFunction(setup.table, values), lifted)


def sigma_for(Mhat: RMatrix, spec: RingSpec, reverse: bool = False, setup: HeisenbergSetup | None = None) -> InducedSigma:
    data = radical_and_isotropic(gram(Mhat), reverse=reverse)
    return induce_sigma(LiftedCharacter(spec, Mhat, data), setup)


def is_multiplicative(lifted: LiftedCharacter, elements: Sequence[Codes]) -> bool:
    R, n = lifted.spec, lifted.n
    vals = {k: lifted(k) for k in elements}
    for a in elements:
        for b in elements:
            if lifted(mmul(R, n, a, b)) != vals[a] + vals[b]:
                return False
    return True


def domain_elements(lifted: LiftedCharacter, setup: HeisenbergSetup | None = None) -> list[Codes]:
    setup = setup or setup_for(lifted.spec, lifted.n)
    return [k for k in setup.K.elements if lifted.in_domain(k)]


# --------------------------------------------------------------------------
# stabilizers and the count of characters above psi_M


def sigma_stabilizer(sigma: InducedSigma, budget: int | None = None) -> GroupTable:
    """G_r(sigma): K^{l'} fixes sigma, so only coset representatives of G_r/K^{l'} are tested."""
    R, n = sigma.lifted.spec, sigma.lifted.n
    _l, lp = ceil_half(R.r)
    table = sigma.function.table
    reps = table.reps
    own = [sigma.function.values[i].canonical() for i in range(len(reps))]
    Gs = enumerate_group(R.with_length(lp), n, budget)
    keep = []
    for h in Gs.elements:
        g = section_matrix(R, h, Gs.spec)
        gi = minv(R, n, g)
        if all(
            sigma.function(mmul(R, n, mmul(R, n, g, k), gi)).canonical() == own[idx] for idx, k in enumerate(reps)
        ):
            keep.append(h)
    return preimage(R, n, lp, keep, budget)


def hill_preimage(Mhat: RMatrix, spec: RingSpec, budget: int | None = None) -> GroupTable:
    """rho_l^{-1}(C_{G_l}(Mhat))."""
    from .centralizer import unit_commutant

    C = unit_commutant(Mhat, budget)
    return preimage(spec, Mhat.n, Mhat.spec.r, C.elements, budget)


def induced_from_kernel(chi: KernelCharacter, setup: HeisenbergSetup) -> ClassFunction:
    """Ind_{K^l}^{K^{l'}} psi_M, summed over coset representatives."""
    R, n, N = setup.spec, setup.n, setup.cyc_order
    F = R.with_length(1)
    reps = []
    for v in itertools.product(range(F.size), repeat=n * n):
        reps.append(madd(R, identity_codes(n), mscale(R, R.pi_power(setup.lp), msection(F, v, R.r))))
    invs = [minv(R, n, t) for t in reps]
    values = []
    for c in setup.table.reps:
        acc = CycInt(N)
        if all(R.valuation(a) >= setup.l for a in msub(R, c, identity_codes(n))):
            for t, ti in zip(reps, invs):
                acc = acc + phase_to_cyc(chi(mmul(R, n, mmul(R, n, ti, c), t)), N)
        values.append(acc)
    return ClassFunction(setup.table, values)


@dataclass
class AboveReport:
    M: RMatrix
    sigma_count: int
    degree: int
    all_irreducible: bool
    decomposition_exact: bool
    index_squared_ok: bool
    digests: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.all_irreducible and self.decomposition_exact and self.index_squared_ok

    def to_json(self) -> dict:
        return {
            "M": self.M.to_json(),
            "sigmaCount": self.sigma_count,
            "degree": self.degree,
            "allIrreducible": self.all_irreducible,
            "decompositionExact": self.decomposition_exact,
            "countTimesDegreeSquared": self.index_squared_ok,
        }


def characters_above(M: RMatrix, spec: RingSpec, setup: HeisenbergSetup | None = None) -> AboveReport:
    """All sigma for the lifts Mhat of M, checked against the decomposition of Ind psi_M."""
    setup = setup or setup_for(spec, M.n)
    n = M.n
    l, lp = setup.l, setup.lp
    S = spec.with_length(l)
    F = spec.with_length(1)
    base = msection(M.spec, M.entries, l)
    sigmas: dict[tuple, InducedSigma] = {}
    for v in itertools.product(range(F.size), repeat=n * n):
        Mhat = RMatrix(S, n, madd(S, base, mscale(S, S.pi_power(lp), msection(F, v, l))))
        s = sigma_for(Mhat, spec, setup=setup)
        sigmas.setdefault(s.function.key(), s)
    found = list(sigmas.values())
    irr = all(inner_product(s.function, s.function) == 1 for s in found)
    d = found[0].degree()
    total = found[0].function.scale(0)
    for s in found:
        total = total + s.function.scale(s.degree())
    chi = KernelCharacter(spec, l, M)
    ind = induced_from_kernel(chi, setup)
    exact = total == ind and all(s.degree() == d for s in found)
    index_ok = len(found) * d * d == F.size ** (n * n)
    return AboveReport(M, len(found), d, irr, exact, index_ok, sorted(s.digest() for s in found))


# --------------------------------------------------------------------------
# extending sigma to its stabilizer


def lifted_centralizer(Mhat: RMatrix, spec: RingSpec, budget: int | None = None) -> GroupTable:
    """C_{G_r}(mu_{l,r}(Mhat))."""
    from .centralizer import unit_commutant

    lifted = RMatrix(spec, Mhat.n, msection(Mhat.spec, Mhat.entries, spec.r))
    return unit_commutant(lifted, budget)


def isotropic_subgroup(lifted: LiftedCharacter, setup: HeisenbergSetup | None = None) -> GroupTable:
    """J_M as a table, generated by K^l and lifts of the isotropic basis."""
    from .group_engine import kernel_generators

    setup = setup or setup_for(lifted.spec, lifted.n)
    R, n = setup.spec, setup.n
    F = lifted.domain.form.field
    gens = kernel_generators(R, n, setup.l)
    for v in lifted.domain.isotropic:
        gens.append(madd(R, identity_codes(n), mscale(R, R.pi_power(setup.lp), msection(F, v, R.r))))
    return GroupTable(R, n, domain_elements(lifted, setup), gens)


def product_table(A: GroupTable, B: GroupTable, level: int) -> GroupTable:
    """A B for A normalized by B and B meet K^level contained in A."""
    R, n = A.spec, A.n
    seen: dict[Codes, Codes] = {}
    for b in B.elements:
        seen.setdefault(mreduce(R, b, level), b)
    elems = {mmul(R, n, a, b) for b in seen.values() for a in A.elements}
    return GroupTable(R, n, elems, A.generators + B.generators)


@dataclass
class SigmaExtension:
    """A character of G_r(sigma) restricting to sigma, evaluated on demand."""

    method: str
    H: GroupTable
    cyc_order: int
    _value: object
    details: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict)

    def __call__(self, g: Codes) -> CycInt:
        v = self._cache.get(g)
        if v is None:
            v = self._value(g)
            self._cache[g] = v
        return v


def _phase_lcm(values) -> int:
    import math

    out = 1
    for v in values:
        out = math.lcm(out, v.den)
    return out


def extend_via_invariant_isotropic(
    sigma: InducedSigma, H: GroupTable, C: GroupTable, N: int, setup: HeisenbergSetup | None = None
) -> SigmaExtension | None:
    """Ind_{J C}^{H} of a linear extension of psi_Mhat, for a C-invariant J (None if there is none)."""
    from .group_engine import extension_exists, reduce_group

    setup = setup or setup_for(sigma.lifted.spec, sigma.lifted.n)
    R, n = setup.spec, setup.n
    form = sigma.lifted.domain.form
    Cbar = reduce_group(C, 1)
    try:
        data = radical_and_isotropic(form, invariant_under=[(Cbar.spec, g) for g in Cbar.generators])
    except InvariantChoiceFailed:
        return None
    lift = LiftedCharacter(R, sigma.lifted.Mhat, data)
    J = isotropic_subgroup(lift, setup)
    JC = product_table(J, C, setup.lp)
    ext = extension_exists(JC, J, lift)
    if not ext.extends:
        return None
    vals = ext.values
    if N % _phase_lcm(vals.values()):
        raise ValueError("cyclotomic order too small for the extension")
    reps = coset_representatives(R, n, data)
    invs = [minv(R, n, t) for t in reps]

    def value(g: Codes) -> CycInt:
        acc = CycInt(N)
        for t, ti in zip(reps, invs):
            x = mmul(R, n, mmul(R, n, ti, g), t)
            v = vals.get(x)
            if v is not None:
                acc = acc + phase_to_cyc(v, N)
        return acc

    details = {"isotropic": data.to_json(), "JC": JC.order, "commutatorMeet": ext.meet_order}
    return SigmaExtension("invariantIsotropic", H, N, value, details)


def extend_via_cyclic_quotient(
    sigma: InducedSigma, H: GroupTable, C: GroupTable, N: int, setup: HeisenbergSetup | None = None
) -> SigmaExtension | None:
    """For H / K^{l'} cyclic: an intertwiner T with T^m = sigma(h^m) gives sigma~(h^j k) = tr(T^j sigma(k)).

    T is found numerically; each value is rounded eigenvalue by eigenvalue to
    roots of unity, so the result is exact and is then re-checked exactly by
    the caller.
    """
    import cmath

    import numpy as np

    from .group_engine import element_order, kernel_generators, reduce_group

    setup = setup or setup_for(sigma.lifted.spec, sigma.lifted.n)
    R, n = setup.spec, setup.n
    Hbar = reduce_group(H, 1)
    m = Hbar.order
    F = Hbar.spec
    gbar = next((g for g in Hbar.elements if element_order(F, n, g) == m), None)
    if gbar is None:
        return None
    h = next(c for c in C.elements if mreduce(R, c, 1) == gbar)
    powers = [identity_codes(n)]
    for _ in range(m - 1):
        powers.append(mmul(F, n, powers[-1], gbar))
    index_of = {g: j for j, g in enumerate(powers)}
    lifted = sigma.lifted
    reps = coset_representatives(R, n, lifted.domain)
    invs = [minv(R, n, t) for t in reps]
    d = len(reps)

    def rep(k: Codes):
        X = np.zeros((d, d), dtype=complex)
        for j, tj in enumerate(reps):
            for i, ti in enumerate(invs):
                x = mmul(R, n, mmul(R, n, ti, k), tj)
                if lifted.in_domain(x):
                    ph = lifted(x)
                    X[i, j] = cmath.exp(2j * cmath.pi * ph.num / ph.den)
        return X

    hi = minv(R, n, h)
    rows = []
    for k in kernel_generators(R, n, setup.lp):
        S = rep(k)
        S2 = rep(mmul(R, n, mmul(R, n, h, k), hi))
        rows.append(np.kron(np.eye(d), S.T) - np.kron(S2, np.eye(d)))
    _, sv, vh = np.linalg.svd(np.vstack(rows))
    if sv[-1] > 1e-9 or (d > 1 and sv[-2] < 1e-6):
        return None
    T = vh[-1].conj().reshape(d, d)
    hm = _power_codes(R, n, h, m)
    Tm = np.linalg.matrix_power(T, m)
    target = rep(hm)
    c = (Tm @ np.linalg.inv(target))[0, 0]
    if np.max(np.abs(Tm - c * target)) > 1e-8:
        return None
    T = T / (c ** (1.0 / m))
    Tpow = [np.linalg.matrix_power(T, j) for j in range(m)]
    hpow_inv = [minv(R, n, _power_codes(R, n, h, j)) for j in range(m)]

    def value(g: Codes) -> CycInt:
        j = index_of[mreduce(R, g, 1)]
        k = mmul(R, n, hpow_inv[j], g)
        X = Tpow[j] @ rep(k)
        o = element_order(R, n, g)
        if N % o:
            raise ValueError("cyclotomic order too small")
        acc = CycInt(N)
        for lam in np.linalg.eigvals(X):
            e = round(cmath.phase(lam) * o / (2 * cmath.pi)) % o
            if abs(lam - cmath.exp(2j * cmath.pi * e / o)) > 1e-6:
                raise ArithmeticError("eigenvalue is not a root of unity")
            acc = acc + CycInt.root(N, e * (N // o))
        return acc

    return SigmaExtension("cyclicIntertwiner", H, N, value, {"quotientOrder": m})


def _power_codes(R: RingSpec, n: int, g: Codes, e: int) -> Codes:
    x = identity_codes(n)
    for _ in range(e):
        x = mmul(R, n, x, g)
    return x
