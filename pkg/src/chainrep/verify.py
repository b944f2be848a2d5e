"""Theorem-level verification suites with self-contained reports.

Every check in a report is an equality or containment of finite tables or
exact rationals.  Reports carry the instance descriptor, so rerunning the
descriptor reproduces them bit for bit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .chain_ring import RingSpec
from .characters import KernelCharacter, ceil_half, kernel_coordinate, stabilizer_direct, stabilizer_hill
from .cyclotomic import CycInt
from .group_engine import (
    BudgetExceeded,
    ClassFunction,
    ClassTable,
    GroupTable,
    commutator_subgroup,
    congruence_kernel,
    conjugacy_classes,
    enumerate_group,
    extension_exists,
    gl_order,
    group_exponent,
    greedy_generators,
    inner_product,
    irreducible_characters,
    phase_to_cyc,
    reduce_group,
    section_matrix,
    _budget,
    subgroup_closure,
)
from .matrix_algebra import Codes, RMatrix, identity_codes, madd, mdet, minv, mmul, mreduce, msection, mscale, mtrace
from .stability import is_stable, matrix_classes


class NotStable(ValueError):
    """The matrix is not stable, so the suite does not apply."""


@dataclass
class Check:
    name: str
    expected: Any
    observed: Any
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "expected": self.expected, "observed": self.observed, "pass": self.passed}


@dataclass
class VerificationReport:
    suite: str
    instance: dict
    checks: list[Check] = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)

    def check(self, name: str, expected, observed, passed: bool | None = None) -> bool:
        ok = (expected == observed) if passed is None else bool(passed)
        self.checks.append(Check(name, _plain(expected), _plain(observed), ok))
        return ok

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "instance": self.instance,
            "pass": self.passed,
            "checks": [c.to_json() for c in self.checks],
            "witnesses": self.witnesses,
        }

    def summary(self) -> str:
        head = f"{self.suite} {_describe(self.instance)}: {'PASS' if self.passed else 'FAIL'}"
        lines = [head]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            lines.append(f"  [{mark}] {c.name}: expected {c.expected}, observed {c.observed}")
        return "\n".join(lines)


def _plain(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, tuple):
        return [_plain(a) for a in x]
    if isinstance(x, list):
        return [_plain(a) for a in x]
    return x


def _describe(instance: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in instance.items() if not isinstance(v, (dict, list)))


# --------------------------------------------------------------------------
# shared group data


_GROUPS: dict[tuple, tuple[GroupTable, ClassTable]] = {}


def group_data(spec: RingSpec, n: int, budget: int | None = None) -> tuple[GroupTable, ClassTable]:
    """GL_n(O_r) and its conjugacy classes, cached per ring and size."""
    key = (spec.name, n)
    # a cache hit must still honour the caller's budget
    order, limit = gl_order(spec, n), _budget(budget)
    if order > limit:
        raise BudgetExceeded(f"|GL_{n}({spec.name})| = {order} exceeds budget {limit}")
    if key not in _GROUPS:
        G = enumerate_group(spec, n, budget)
        gens = greedy_generators(G)
        G = GroupTable(spec, n, G.elements, gens)
        _GROUPS[key] = (G, conjugacy_classes(G))
    return _GROUPS[key]


def residue_coset_reps(spec: RingSpec, n: int, level: int, image: GroupTable, budget: int | None = None) -> list[Codes]:
    """Representatives of G_r / rho_level^{-1}(image), as sections of G_level / image."""
    Gs = enumerate_group(spec.with_length(level), n, budget)
    covered: set[Codes] = set()
    reps = []
    for g in Gs.elements:
        if g in covered:
            continue
        reps.append(section_matrix(spec, g, Gs.spec))
        for h in image.elements:
            covered.add(mmul(Gs.spec, n, g, h))
    return reps


def induce_to_group(table: ClassTable, H: GroupTable, theta, reps: list[Codes], N: int) -> ClassFunction:
    """Ind_H^G theta on the classes of G, using left coset representatives of G/H."""
    G = table.group
    R, n = G.spec, G.n
    invs = [minv(R, n, t) for t in reps]
    values = []
    for c in table.reps:
        acc = CycInt(N)
        for t, ti in zip(reps, invs):
            x = mmul(R, n, mmul(R, n, ti, c), t)
            if x in H:
                acc = acc + theta(x)
        values.append(acc)
    return ClassFunction(table, values)


def _residue_characters(Hbar: GroupTable):
    chars, table, coverage = irreducible_characters(Hbar)
    return chars, table, coverage


def _ensure_stable(M: RMatrix, budget: int | None):
    cert = is_stable(M, budget)
    if not cert.stable:
        raise NotStable(f"{M!r} is {cert.verdict}")
    return cert


def _matrix_json(M: RMatrix) -> list:
    return [[M.spec.format(M.entries[i * M.n + j]) for j in range(M.n)] for i in range(M.n)]


# --------------------------------------------------------------------------
# Theorem A: r even


@dataclass
class TheoremAResult:
    report: VerificationReport
    induced: list[ClassFunction]


def verify_theorem_A(spec: RingSpec, n: int, M: RMatrix, budget: int | None = None) -> TheoremAResult:
    """psi_M extends to its stabilizer, and Ind(psi~ rho) is irreducible for every rho."""
    r = spec.r
    if r % 2:
        raise ValueError("Theorem A needs r even")
    l = r // 2
    cert = _ensure_stable(M, budget)
    rep = VerificationReport(
        "theorem-a", {"ring": spec.name, "n": n, "r": r, "M": _matrix_json(M), "stableMethod": cert.method}
    )
    G, GT = group_data(spec, n, budget)
    chi = KernelCharacter(spec, l, M)
    H = stabilizer_direct(chi, budget)
    rep.check("stabilizer equals centralizer preimage", True, H.same_elements(stabilizer_hill(chi, budget)))
    K = congruence_kernel(spec, n, l, budget)
    ext = extension_exists(H, K, chi)
    rep.check("psi_M extends to G_r(psi_M)", True, ext.extends)
    rep.witnesses["stabilizerOrder"] = H.order
    rep.witnesses["commutatorMeetOrder"] = ext.meet_order
    if not ext.extends:
        return TheoremAResult(rep, [])
    _trace_condition(rep, spec, n, M, cert, l, budget)
    Hbar = reduce_group(H, l)
    chars, _tab, coverage = _residue_characters(Hbar)
    rep.check("Irr(G_r(psi_M)/K^l) enumerated", "1", str(coverage))
    N = math.lcm(spec.p ** r, group_exponent(Hbar), *(v.den for v in ext.values.values()))
    reps = residue_coset_reps(spec, n, l, Hbar, budget)
    psi_t = {g: phase_to_cyc(v, N) for g, v in ext.values.items()}
    induced = []
    norms = []
    for rho in chars:
        rho_n = rho.n

        def theta(x, rho=rho, rho_n=rho_n):
            return psi_t[x] * rho(mreduce(spec, x, l)).lift(N)

        ind = induce_to_group(GT, H, theta, reps, N)
        induced.append(ind)
        norms.append(inner_product(ind, ind))
    rep.check("every induced character has norm 1", True, all(v == 1 for v in norms))
    rep.check("induced characters are distinct", len(induced), len({f.key() for f in induced}))
    rep.witnesses["degrees"] = [f.degree() for f in induced]
    return TheoremAResult(rep, induced)


def _trace_condition(rep: VerificationReport, spec: RingSpec, n: int, M: RMatrix, cert, l: int, budget) -> None:
    """tr(M X) = 0 mod p^l on [H, H] meet K^l for H = C_{G_r}(mu(A + pi B)), split M only."""
    from .centralizer import unit_commutant

    if cert.degree != 1:
        rep.witnesses["traceCondition"] = "not applicable: M is not split"
        return
    S = M.spec
    normal = madd(S, cert.A.entries, mscale(S, S.pi_power(1), cert.B.entries))
    lifted = RMatrix(spec, n, msection(S, normal, spec.r))
    H = unit_commutant(lifted, budget)
    H = GroupTable(spec, n, H.elements, greedy_generators(H))
    D = commutator_subgroup(H, budget)
    bad = 0
    meet = 0
    for c in D.elements:
        d = [spec.sub(a, b) for a, b in zip(c, identity_codes(n))]
        if all(spec.valuation(a) >= l for a in d):
            meet += 1
            X = kernel_coordinate(spec, n, c, l)
            if mtrace(S, n, mmul(S, n, normal, X)) != 0:
                bad += 1
    rep.check("trace condition on [H,H] meet K^l", 0, bad)
    rep.witnesses["traceConditionMeet"] = meet


def verify_all_stable_r2(spec: RingSpec, n: int, budget: int | None = None) -> VerificationReport:
    """The constructed characters over all classes M exhaust Irr(G_2)."""
    if spec.r != 2:
        raise ValueError("r2-complete needs r = 2")
    rep = VerificationReport("r2-complete", {"ring": spec.name, "n": n, "r": 2})
    G, GT = group_data(spec, n, budget)
    rep.check("|G_2| matches the order formula", gl_order(spec, n), G.order)
    F = spec.with_length(1)
    all_chars: list[ClassFunction] = []
    failures = []
    stable_count = 0
    for Mc in matrix_classes(F, n):
        M = RMatrix(F, n, Mc)
        if is_stable(M, budget).stable:
            stable_count += 1
        res = verify_theorem_A(spec, n, M, budget)
        if not res.report.passed:
            failures.append(_matrix_json(M))
        all_chars.extend(res.induced)
    classes = len(matrix_classes(F, n))
    rep.check("every residue class is stable", classes, stable_count)
    rep.check("Theorem A suite passes for every class", [], failures)
    N = math.lcm(*(f.n for f in all_chars))
    lifted = [ClassFunction(GT, [v.lift(N) for v in f.values]) for f in all_chars]
    rep.check("constructed characters are pairwise distinct", len(lifted), len({f.key() for f in lifted}))
    rep.check("count equals the number of conjugacy classes", len(GT), len(lifted))
    rep.check("sum of squared degrees equals |G_2|", G.order, sum(f.degree() ** 2 for f in lifted))
    rep.witnesses["classes"] = len(GT)
    rep.witnesses["residueClasses"] = classes
    return rep


# --------------------------------------------------------------------------
# Theorem B: r odd, p > 2


def _sylow_via_residue(C: GroupTable, p: int) -> GroupTable:
    """Sylow p-subgroup of C: the preimage of a Sylow of its residue image (C meet K^1 is a p-group)."""
    from .group_engine import sylow_p

    Cbar = reduce_group(C, 1)
    Pbar = sylow_p(Cbar, p)
    R = C.spec
    elems = [c for c in C.elements if mreduce(R, c, 1) in Pbar]
    return GroupTable(R, C.n, elems)


def verify_theorem_B(spec: RingSpec, n: int, Mhat: RMatrix, budget: int | None = None) -> VerificationReport:
    """The super stable construction for one stable Mhat over O_l."""
    from . import heisenberg as hz

    l, lp = hz._check_params(spec)
    if Mhat.spec.r != l:
        raise ValueError("Mhat must have entries in O_l")
    cert = _ensure_stable(Mhat, budget)
    R = spec
    rep = VerificationReport(
        "theorem-b", {"ring": R.name, "n": n, "r": R.r, "Mhat": _matrix_json(Mhat), "stableMethod": cert.method}
    )
    setup = hz.setup_for(R, n, budget)
    sigma = hz.sigma_for(Mhat, R, setup=setup)
    d = sigma.degree()
    rep.check("sigma is irreducible", 1, inner_product(sigma.function, sigma.function))
    rep.check("degree equals [K^l' : J_M]", R.q ** (n * n - sigma.lifted.domain.dim_isotropic), d)

    # (a) stabilizers
    M = RMatrix(Mhat.spec.with_length(lp), n, mreduce(Mhat.spec, Mhat.entries, lp))
    Gsig = hz.sigma_stabilizer(sigma, budget)
    Gpsi = stabilizer_direct(KernelCharacter(R, l, M), budget)
    rep.check("G_r(sigma) = G_r(psi_M)", True, Gsig.same_elements(Gpsi))
    G, GT = group_data(R, n, budget)
    C = G if Gsig.order == G.order and _is_scalar(Mhat) else hz.lifted_centralizer(Mhat, R, budget)
    if C is not G:
        C = GroupTable(R, n, C.elements, greedy_generators(C))
    K = setup.K
    KC = hz.product_table(K, C, lp)
    rep.check("G_r(sigma) = K^l' C_{G_r}(mu(Mhat))", True, KC.same_elements(Gsig))
    rep.witnesses["stabilizerOrder"] = Gsig.order
    rep.witnesses["stabilizerIndex"] = G.order // Gsig.order

    # (b) P-invariant J_M and the commutator criterion on [P, P]
    P = _sylow_via_residue(C, R.p)
    Pbar = reduce_group(P, 1)
    form = sigma.lifted.domain.form
    try:
        dataP = hz.radical_and_isotropic(form, invariant_under=[(Pbar.spec, g) for g in Pbar.generators])
    except hz.InvariantChoiceFailed:
        rep.check("P-invariant maximal isotropic exists", True, False)
        return rep
    rep.check("P-invariant maximal isotropic exists", True, True)
    liftP = hz.LiftedCharacter(R, Mhat, dataP)
    J = hz.isotropic_subgroup(liftP, setup)
    PP = commutator_subgroup(P, budget)
    meet = [c for c in PP.elements if c in J]
    rep.check("psi_Mhat trivial on [P,P] meet J_M", 0, sum(1 for c in meet if liftP(c).num != 0))
    rep.check("trace identity on [P,P] meet J_M", 0, sum(1 for c in meet if _quadratic_trace(liftP, c) != 0))
    rep.witnesses["sylowOrder"] = P.order
    rep.witnesses["commutatorMeetJ"] = len(meet)

    # (c) extension to K^l' P along J_M P, then to the whole stabilizer
    JP = hz.product_table(J, P, lp)
    extP = extension_exists(JP, J, liftP)
    rep.check("psi_Mhat extends to J_M P", True, extP.extends)
    if extP.extends:
        _check_sylow_extension(rep, setup, sigma, dataP, extP, P)
    others = sorted({q for q in _prime_factors(reduce_group(Gsig, 1).order) if q != R.p})
    rep.check(
        "coprime primes: sigma(1) and |K^l'| are powers of p",
        True,
        _is_power(d, R.p) and _is_power(K.order, R.p),
    )
    rep.witnesses["coprimePrimes"] = others
    N = math.lcm(R.p ** R.r, group_exponent(reduce_group(Gsig, 1))) * R.p
    H = GroupTable(R, n, Gsig.elements, K.generators + C.generators)
    ext = hz.extend_via_invariant_isotropic(sigma, H, C, N, setup)
    if ext is None:
        ext = hz.extend_via_cyclic_quotient(sigma, H, C, N, setup)
    rep.check("explicit extension of sigma to G_r(sigma) constructed", True, ext is not None)
    if ext is None:
        return rep
    rep.witnesses["extensionMethod"] = ext.method
    restr = all(ext(k) == sigma.function(k).lift(N) for k in setup.table.reps)
    rep.check("extension restricts to sigma on K^l'", True, restr)
    HT = GT if H.order == G.order else conjugacy_classes(H)
    ext_f = ClassFunction(HT, [ext(c) for c in HT.reps])
    rep.check("extension has norm 1 on G_r(sigma)", 1, inner_product(ext_f, ext_f))

    # (d) Clifford: Ind(sigma~ rho) irreducible and distinct
    Hbar = reduce_group(H, 1)
    chars, _t, coverage = _residue_characters(Hbar)
    rep.check("Irr(G_r(sigma)/K^l') enumerated", "1", str(coverage))
    reps = residue_coset_reps(R, n, 1, Hbar, budget) if H.order != G.order else [G.identity]
    induced = []
    for rho in chars:
        Nr = math.lcm(N, rho.n)

        def theta(x, rho=rho, Nr=Nr):
            return ext(x).lift(Nr) * rho(mreduce(R, x, 1)).lift(Nr)

        induced.append(induce_to_group(GT, H, theta, reps, Nr))
    rep.check("induced characters have norm 1", True, all(inner_product(f, f) == 1 for f in induced))
    rep.check("induced characters are distinct", len(induced), len({f.key() for f in induced}))
    rep.witnesses["inducedDegrees"] = [f.degree() for f in induced]
    return rep


def _is_scalar(M: RMatrix) -> bool:
    n = M.n
    e = M.entries
    return all(e[i * n + j] == (e[0] if i == j else 0) for i in range(n) for j in range(n))


def _quadratic_trace(lift, k: Codes) -> int:
    """tr(Mhat (X - pi^l' X^2 / 2)) in O_l for k = I + pi^l' X."""
    from .matrix_algebra import msub

    S, n = lift.Mhat.spec, lift.n
    _l, lp = ceil_half(lift.spec.r)
    x = kernel_coordinate(lift.spec, n, k, lp)
    quad = mscale(S, S.mul(S.inv(2), S.pi_power(lp)), mmul(S, n, x, x))
    return mtrace(S, n, mmul(S, n, lift.Mhat.entries, msub(S, x, quad)))


def _check_sylow_extension(rep, setup, sigma, dataP, extP, P) -> None:
    """Ind_{J P}^{K P} of the extension restricts to sigma and is irreducible."""
    from . import heisenberg as hz

    R, n = setup.spec, setup.n
    KP = hz.product_table(setup.K, P, setup.lp)
    KPT = conjugacy_classes(KP)
    reps = hz.coset_representatives(R, n, dataP)
    invs = [minv(R, n, t) for t in reps]
    N = math.lcm(setup.cyc_order, *(v.den for v in extP.values.values()))
    vals = extP.values

    def ind(g):
        acc = CycInt(N)
        for t, ti in zip(reps, invs):
            v = vals.get(mmul(R, n, mmul(R, n, ti, g), t))
            if v is not None:
                acc = acc + phase_to_cyc(v, N)
        return acc

    f = ClassFunction(KPT, [ind(c) for c in KPT.reps])
    rep.check("Ind to K^l' P has norm 1", 1, inner_product(f, f))
    rep.check(
        "Ind to K^l' P restricts to sigma",
        True,
        all(ind(k) == sigma.function(k).lift(N) for k in setup.table.reps),
    )
    rep.witnesses["sylowExtensionGroupOrder"] = KP.order


def _prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        while m % d == 0:
            out.append(d)
            m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def _is_power(m: int, p: int) -> bool:
    while m % p == 0:
        m //= p
    return m == 1


def super_stable_representatives(spec: RingSpec, n: int, budget: int | None = None) -> list[RMatrix]:
    """Stable class representatives Mhat over O_l, for r odd."""
    from .stability import stable_orbit_representatives

    l, _lp = ceil_half(spec.r)
    return stable_orbit_representatives(spec.with_length(l), n, budget)


# --------------------------------------------------------------------------
# the counterexample to the centralizer description of G_r(sigma)


def hill_instance(spec: RingSpec, n: int, a: int = 1, B: Codes | None = None) -> tuple[RMatrix, RMatrix]:
    """M = mu(a) I over O_{l'} and Mhat = mu(a) I + pi^{l'} B over O_l (B defaults to E_11)."""
    l, lp = ceil_half(spec.r)
    S = spec.with_length(l)
    if B is None:
        B = tuple(1 if k == 0 else 0 for k in range(n * n))
    t = S.teichmuller(a)
    scalar = mscale(S, t, identity_codes(n))
    Mhat = RMatrix(S, n, madd(S, scalar, mscale(S, S.pi_power(lp), tuple(B))))
    M = RMatrix(S.with_length(lp), n, mreduce(S, Mhat.entries, lp))
    return M, Mhat


def verify_hill_counterexample(
    spec: RingSpec, n: int, a: int = 1, B: Codes | None = None, budget: int | None = None
) -> VerificationReport:
    """G_r(sigma) against G_r(psi_M) when M is scalar but Mhat is not."""
    from . import heisenberg as hz

    l, lp = hz._check_params(spec)
    M, Mhat = hill_instance(spec, n, a, B)
    rep = VerificationReport(
        "hill",
        {"ring": spec.name, "n": n, "r": spec.r, "M": _matrix_json(M), "Mhat": _matrix_json(Mhat)},
    )
    G, _GT = group_data(spec, n, budget)
    Gpsi = stabilizer_direct(KernelCharacter(spec, l, M), budget)
    rep.check("G_r(psi_M) = G_r", G.order, Gpsi.order)
    sigma = hz.sigma_for(Mhat, spec, setup=hz.setup_for(spec, n, budget))
    Gsig = hz.sigma_stabilizer(sigma, budget)
    hill = hz.hill_preimage(Mhat, spec, budget)
    rep.check("G_r(sigma) = rho_l^{-1}(C_{G_l}(Mhat))", True, Gsig.same_elements(hill))
    index = G.order // Gsig.order
    central = _is_scalar(Mhat)
    rep.check("index [G_r : G_r(sigma)]", 1 if central else "> 1", 1 if index == 1 else "> 1")
    moved = [g for g in G.generators if g not in Gsig]
    rep.witnesses["sigmaDegree"] = sigma.degree()
    rep.witnesses["stabilizerOrder"] = Gsig.order
    rep.witnesses["groupOrder"] = G.order
    rep.witnesses["index"] = index
    rep.witnesses["MhatStable"] = is_stable(Mhat, budget).stable
    rep.witnesses["counterexample"] = index > 1
    # sigma is not G_r-invariant exactly when some generator moves it; then no extension to G_r exists
    rep.witnesses["extendsToGr"] = not moved
    if moved:
        rep.witnesses["movingElement"] = list(moved[0])
    return rep


# --------------------------------------------------------------------------
# determinant lemma


def _e2_from_jordan(F: RingSpec, n: int, Xbar: Codes) -> int:
    """Second elementary symmetric function of the eigenvalues of Xbar, read off its triangular form."""
    from .chain_ring import ExtensionSpec
    from .jordan import residue_jcf

    jf = residue_jcf(RMatrix(F, n, Xbar))
    K = jf.field_spec
    diag = [e for e, s in jf.blocks for _ in range(s)]
    total = 0
    for i, j in itertools.combinations(range(n), 2):
        total = K.add(total, K.mul(diag[i], diag[j]))
    if jf.split_degree == 1:
        return total
    return ExtensionSpec(F, jf.split_degree).restrict(total)


def _spread_indices(total: int, count: int) -> list[int]:
    """count distinct indices in range(total), spread with a fixed stride coprime to total."""
    if count >= total:
        return list(range(total))
    stride = max(1, int(total * 0.6180339887) | 1)
    while math.gcd(stride, total) != 1:
        stride += 2
    return [(k * stride) % total for k in range(count)]


def _unrank(index: int, base: int, width: int) -> tuple[int, ...]:
    out = []
    for _ in range(width):
        index, d = divmod(index, base)
        out.append(d)
    return tuple(reversed(out))


def verify_det_lemma(spec: RingSpec, n: int, count: int | None = None) -> VerificationReport:
    """det(I + pi^{l'} X) against 1 + pi^{l'} tr X (+ pi^{2l'} e2(Xbar) when r is odd).

    X runs over M_n(O_r): all of it when ``count`` is None, otherwise ``count``
    deterministically spread matrices.
    """
    r = spec.r
    l, lp = ceil_half(r)
    odd = r % 2 == 1
    if odd and spec.p == 2:
        raise ValueError("the odd-case identity needs p > 2")
    width = n * n
    total = spec.size**width
    idx = range(total) if count is None else _spread_indices(total, count)
    F = spec.with_length(1)
    e2_cache: dict[Codes, int] = {}
    pl = spec.pi_power(lp)
    p2l = spec.pi_power(2 * lp) if 2 * lp < r else 0
    I = identity_codes(n)
    bad = []
    checked = 0
    for k in idx:
        X = _unrank(k, spec.size, width)
        lhs = mdet(spec, n, madd(spec, I, mscale(spec, pl, X)))
        rhs = spec.add(1, spec.mul(pl, mtrace(spec, n, X)))
        if odd and p2l:
            Xbar = mreduce(spec, X, 1)
            e2 = e2_cache.get(Xbar)
            if e2 is None:
                e2 = e2_cache[Xbar] = _e2_from_jordan(F, n, Xbar)
            rhs = spec.add(rhs, spec.mul(p2l, spec.section_from(e2, F)))
        checked += 1
        if lhs != rhs and len(bad) < 5:
            bad.append(list(X))
    rep = VerificationReport("det-lemma", {"ring": spec.name, "n": n, "r": r, "case": "odd" if odd else "even"})
    rep.check("matrices checked", total if count is None else min(count, total), checked)
    rep.check("identity holds for every X", [], bad)
    rep.witnesses["residueClassesSeen"] = len(e2_cache)
    return rep


# --------------------------------------------------------------------------
# commutators of block-diagonal groups


def _embed_block(n: int, sizes: Sequence[int], k: int, g: Codes) -> Codes:
    start = sum(sizes[:k])
    s = sizes[k]
    out = list(identity_codes(n))
    for i in range(s):
        for j in range(s):
            out[(start + i) * n + start + j] = g[i * s + j]
    return tuple(out)


def block_components(n: int, sizes: Sequence[int], g: Codes) -> list[Codes]:
    out = []
    start = 0
    for s in sizes:
        out.append(tuple(g[(start + i) * n + start + j] for i in range(s) for j in range(s)))
        start += s
    return out


def commutator_blocks_hold(blocks: Sequence[GroupTable], element: Codes, block_commutators: Sequence[GroupTable]) -> bool:
    """Every diagonal block of ``element`` lies in the matching [H_i, H_i]."""
    sizes = [B.n for B in blocks]
    return all(c in D for c, D in zip(block_components(sum(sizes), sizes, element), block_commutators))


def verify_commutator_blocks(blocks: Sequence[GroupTable], budget: int | None = None) -> VerificationReport:
    """[H, H] for H = diag(H_1, ..., H_k), compared blockwise with the [H_i, H_i]."""
    R = blocks[0].spec
    sizes = [B.n for B in blocks]
    n = sum(sizes)
    gens = [_embed_block(n, sizes, k, g) for k, B in enumerate(blocks) for g in B.generators]
    H = subgroup_closure(R, n, gens, budget)
    D = commutator_subgroup(H, budget)
    Ds = [commutator_subgroup(GroupTable(R, B.n, B.elements, B.generators), budget) for B in blocks]
    rep = VerificationReport("commutator-blocks", {"ring": R.name, "n": n, "blocks": sizes})
    rep.check("|H| is the product of block orders", math.prod(B.order for B in blocks), H.order)
    bad = [list(g) for g in D.elements if not commutator_blocks_hold(blocks, g, Ds)]
    rep.check("block components of [H,H] lie in [H_i,H_i]", [], bad[:5])
    rep.check("|[H,H]| is the product of the |[H_i,H_i]|", math.prod(B.order for B in Ds), D.order)
    rep.witnesses["commutatorOrders"] = [B.order for B in Ds]
    return rep
