"""Deciding whether a matrix is stable, with re-checkable certificates.

M is stable when, over some unramified extension, it is conjugate to A + pi B
with A in Jordan form and B in the center of the commutant of A.  The
decision runs a constructive test first (the Jordan lift of M) and then an
exhaustive, level-by-level search over conjugators whose residue fixes the
residue Jordan form.  The search is complete: a verdict of ``notStable`` means
no such conjugator exists, under the convention that A has Teichmueller
eigenvalues.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .centralizer import center_of_commutant
from .chain_ring import ExtensionSpec, RingSpec
from .group_engine import BudgetExceeded, _budget, conjugacy_classes, gl_generators, GroupTable
from .jordan import jordan_matrix, residue_jcf
from .matrix_algebra import (
    Codes,
    RMatrix,
    howell_form,
    identity_codes,
    madd,
    mconj,
    mmul,
    module_contains,
    mscale,
    msub,
    solve_linear,
    solve_sylvester,
)

STABLE = "stable"
NOT_STABLE = "notStable"
UNKNOWN = "unknownBudget"


@dataclass
class StabilityCertificate:
    verdict: str
    method: str
    degree: int = 1
    conjugator: RMatrix | None = None
    A: RMatrix | None = None
    B: RMatrix | None = None
    domain: dict = field(default_factory=dict)

    @property
    def stable(self) -> bool:
        return self.verdict == STABLE

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "method": self.method, "domain": self.domain}
        if self.A is not None:
            out["witness"] = {
                "degree": self.degree,
                "conjugator": self.conjugator.to_json(),
                "A": self.A.to_json(),
                "B": self.B.to_json(),
            }
        return out


def _working_ring(M: RMatrix):
    jf = residue_jcf(M)
    if jf.split_degree == 1:
        return M, jf, 1
    ext = ExtensionSpec(M.spec, jf.split_degree)
    Me = RMatrix(ext.ring, M.n, tuple(ext.embed(a) for a in M.entries))
    return Me, residue_jcf(Me), jf.split_degree


def _pi_center_module(R: RingSpec, n: int, center_basis: list[Codes], k: int) -> list[Codes]:
    """Howell form of pi*Z + pi^{k} M_n(O)."""
    rows = [mscale(R, R.pi_power(1), z) for z in center_basis]
    if k < R.r:
        pk = R.pi_power(k)
        for idx in range(n * n):
            rows.append(tuple(pk if t == idx else 0 for t in range(n * n)))
    return howell_form(R, rows, n * n)


def _center_witness(R: RingSpec, n: int, center_basis: list[Codes], D: Codes) -> Codes | None:
    """B in the center module with pi*B = D, if one exists."""
    images = [mscale(R, R.pi_power(1), z) for z in center_basis]
    sol = solve_linear(R, images, D)
    if sol is None:
        return None
    B = (0,) * (n * n)
    for c, z in zip(sol.particular, center_basis):
        if c:
            B = madd(R, B, mscale(R, c, z))
    return B


def is_stable(M: RMatrix, budget: int | None = None) -> StabilityCertificate:
    budget = _budget(budget)
    Me, jf, d = _working_ring(M)
    R, n = Me.spec, Me.n
    A = jordan_matrix(R, jf.blocks, lift=True)
    center, _ = center_of_commutant(A)
    zbasis = center.basis
    g0 = tuple(R.teichmuller(c) for c in jf.conjugator.entries)
    M0 = mconj(R, n, g0, Me.entries)

    # constructive phase: the Jordan lift itself
    B = _center_witness(R, n, zbasis, msub(R, M0, A.entries))
    if B is not None:
        return StabilityCertificate(STABLE, "constructive", d, RMatrix(R, n, g0), A, RMatrix(R, n, B))

    # exhaustive phase over conjugators with residue in C(Jbar) g0.  When the
    # commutant of A is free of the residue rank, C_G(A) maps onto C(Jbar) and
    # any witness g can be replaced by z g with z in C_G(A) (which preserves
    # A + pi Z), so the residue part may be fixed to the identity.
    R1 = R.with_length(1)
    Jbar = jf.matrix()
    comm_bar = solve_sylvester(Jbar)
    free = solve_sylvester(A).cardinality == comm_bar.cardinality ** R.r
    if free:
        cbar = [identity_codes(n)]
    else:
        cbar = [x for x in comm_bar.elements() if R1.is_unit(_det1(R1, n, x))]
    states: dict[Codes, Codes] = {}
    for c in cbar:
        g = tuple(R.teichmuller(a) for a in c)
        N = mconj(R, n, g, M0)
        if N not in states:
            states[N] = mmul(R, n, g, g0)
    visited = len(cbar)
    ys = list(itertools.product([R.teichmuller(a) for a in range(R.q)], repeat=n * n))
    for k in range(1, R.r):
        target = _pi_center_module(R, n, zbasis, k + 1)
        pk = R.pi_power(k)
        nxt: dict[Codes, Codes] = {}
        for N, g in states.items():
            for Y in ys:
                visited += 1
                if visited > budget:
                    return StabilityCertificate(UNKNOWN, "exhaustive", d, domain=_domain(len(cbar), k, visited))
                h = madd(R, identity_codes(n), mscale(R, pk, Y))
                N2 = mconj(R, n, h, N)
                if N2 in nxt:
                    continue
                if module_contains(R, target, msub(R, N2, A.entries)):
                    nxt[N2] = mmul(R, n, h, g)
        states = nxt
        if not states:
            return StabilityCertificate(NOT_STABLE, "exhaustive", d, domain=_domain(len(cbar), k, visited))
    for N, g in sorted(states.items()):
        B = _center_witness(R, n, zbasis, msub(R, N, A.entries))
        if B is not None:
            return StabilityCertificate(
                STABLE, "exhaustive", d, RMatrix(R, n, g), A, RMatrix(R, n, B), _domain(len(cbar), R.r - 1, visited)
            )
    return StabilityCertificate(NOT_STABLE, "exhaustive", d, domain=_domain(len(cbar), R.r - 1, visited))


def _det1(R1: RingSpec, n: int, x: Codes) -> int:
    from .matrix_algebra import mdet

    return mdet(R1, n, x)


def _domain(ncbar: int, level: int, visited: int) -> dict:
    return {"residueRepresentatives": ncbar, "levelsSearched": level, "statesVisited": visited}


def verify_certificate(M: RMatrix, cert: StabilityCertificate) -> bool:
    """Re-check a positive certificate: g M g^{-1} = A + pi B, A canonical, B central."""
    if not cert.stable:
        return False
    Me, jf, _d = _working_ring(M)
    R, n = Me.spec, Me.n
    A = jordan_matrix(R, jf.blocks, lift=True)
    if cert.A.entries != A.entries or cert.A.spec is not R:
        return False
    lhs = mconj(R, n, cert.conjugator.entries, Me.entries)
    rhs = madd(R, A.entries, mscale(R, R.pi_power(1), cert.B.entries))
    if lhs != rhs:
        return False
    comm = solve_sylvester(A)
    B = cert.B.entries
    return all(mmul(R, n, B, c) == mmul(R, n, c, B) for c in comm.basis)


def stable_orbit_representatives(spec: RingSpec, n: int, budget: int | None = None) -> list[RMatrix]:
    """One canonical representative per G_s-conjugacy class of stable matrices in M_n(O_s)."""
    budget = _budget(budget)
    total = spec.size ** (n * n)
    if total > budget:
        raise BudgetExceeded(f"|M_{n}({spec.name})| = {total} exceeds budget")
    classes = matrix_classes(spec, n)
    out = []
    for rep in classes:
        M = RMatrix(spec, n, rep)
        if is_stable(M, budget).stable:
            out.append(M)
    return out


def matrix_classes(spec: RingSpec, n: int) -> list[Codes]:
    """Canonical (least) representatives of the conjugacy classes of M_n(O_s)."""
    gens = gl_generators(spec, n)
    dummy = GroupTable(spec, n, [identity_codes(n)], gens)
    dom = itertools.product(range(spec.size), repeat=n * n)
    table = conjugacy_classes(dummy, acting=gens, domain=dom)
    return table.reps
