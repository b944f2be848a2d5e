"""Jordan canonical forms over the residue field, their Teichmueller lifts,
and the semisimple / regular classification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .chain_ring import ExtensionSpec, ResidueField, RingSpec
from .matrix_algebra import (
    Codes,
    RMatrix,
    howell_form,
    identity_codes,
    kernel,
    mconj,
    minv,
    mmul,
    module_contains,
    msub,
    solve_sylvester,
)


class NotSplit(ValueError):
    """The residue matrix does not split over the working ring."""


# --------------------------------------------------------------------------
# polynomials over F_q (coefficient lists, lowest degree first)


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _padd(F: ResidueField, f, g):
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return _trim([F.add(a, b) for a, b in zip(f, g)])


def _pmul(F: ResidueField, f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = F.add(out[i + j], F.mul(a, b))
    return _trim(out)


def _pdivmod(F: ResidueField, f, g):
    f = _trim(list(f))
    g = _trim(list(g))
    lead = F.inv(g[-1])
    quot = [0] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g):
        c = F.mul(f[-1], lead)
        k = len(f) - len(g)
        quot[k] = c
        for i, b in enumerate(g):
            f[i + k] = F.sub(f[i + k], F.mul(c, b))
        _trim(f)
    return _trim(quot), f


def _pgcd(F: ResidueField, f, g):
    f, g = _trim(list(f)), _trim(list(g))
    while g:
        f, g = g, _pdivmod(F, f, g)[1]
    if f:
        c = F.inv(f[-1])
        f = [F.mul(c, a) for a in f]
    return f


def _ppowmod(F: ResidueField, base, e: int, mod):
    result = [1]
    b = _pdivmod(F, base, mod)[1]
    while e:
        if e & 1:
            result = _pdivmod(F, _pmul(F, result, b), mod)[1]
        b = _pdivmod(F, _pmul(F, b, b), mod)[1]
        e >>= 1
    return result


def char_poly(R: RingSpec, n: int, A: Codes) -> list[int]:
    """det(xI - A) over R (division-free recursion on leading minors)."""
    chi = [1]
    for k in range(n):
        # A_{k+1} = [[B, C], [Rw, a]] with B the leading k x k block
        a = A[k * n + k]
        col = [A[i * n + k] for i in range(k)]
        row = [A[k * n + j] for j in range(k)]
        # r_j = Rw B^j C
        rs = []
        v = col
        for _ in range(k):
            rs.append(_dot(R, row, v))
            v = [_dot(R, [A[i * n + j] for j in range(k)], v) for i in range(k)]
        # adj(xI - B) = sum_j (sum_i c_{i+j+1} x^i) B^j
        new = _ring_poly_mul(R, chi, [R.neg(a), 1])
        for j in range(k):
            poly = [chi[i + j + 1] for i in range(k - j)]
            term = [R.mul(rs[j], c) for c in poly]
            new = [R.sub(x, term[i]) if i < len(term) else x for i, x in enumerate(new)]
        chi = new
    return chi


def _dot(R: RingSpec, a, b) -> int:
    acc = 0
    for x, y in zip(a, b):
        acc = R.add(acc, R.mul(x, y))
    return acc


def _ring_poly_mul(R: RingSpec, f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = R.add(out[i + j], R.mul(a, b))
    return out


def factor_degrees(F: ResidueField, f: list[int]) -> list[int]:
    """Degrees of the distinct irreducible factors of f (distinct-degree factorization)."""
    h = _trim(list(f))
    degs = []
    k = 0
    while len(h) > 1:
        k += 1
        xqk = _ppowmod(F, [0, 1], F.q**k, h)
        g = _pgcd(F, _padd(F, xqk, [0, F.neg_t[1]]), h)
        if len(g) > 1:
            degs.append(k)
            while True:
                c = _pgcd(F, h, g)
                if len(c) <= 1:
                    break
                h = _pdivmod(F, h, c)[0]
    return degs


def splitting_degree(M: RMatrix) -> int:
    R1 = M.spec.with_length(1)
    Mbar = tuple(M.spec.reduce_to(a, 1) for a in M.entries)
    chi = char_poly(R1, M.n, Mbar)
    degs = factor_degrees(R1.field, chi)
    return math.lcm(*degs) if degs else 1


# --------------------------------------------------------------------------
# Jordan forms over the residue field


@dataclass
class JordanForm:
    """Canonical Jordan form of a residue matrix over F_{q^d}.

    ``conjugator`` g satisfies g Mbar g^{-1} = assembled block matrix, both
    over the residue field of degree d.
    """

    field_spec: RingSpec
    blocks: list[tuple[int, int]]
    conjugator: RMatrix
    split_degree: int

    def matrix(self) -> RMatrix:
        return jordan_matrix(self.field_spec, self.blocks)

    def partition(self, eigenvalue: int) -> list[int]:
        return [s for e, s in self.blocks if e == eigenvalue]

    def eigenvalues(self) -> list[int]:
        out: list[int] = []
        for e, _ in self.blocks:
            if e not in out:
                out.append(e)
        return out

    def to_json(self) -> dict:
        R = self.field_spec
        return {
            "field": R.to_json(),
            "blocks": [{"eigenvalue": R.encode(e), "size": s} for e, s in self.blocks],
            "conjugator": self.conjugator.to_json(),
            "splitDegree": self.split_degree,
        }


@dataclass
class PrimaryComponent:
    eigenvalue: int
    partition: tuple[int, ...]
    start: int
    stop: int


def jordan_matrix(R: RingSpec, blocks, lift: bool = False) -> RMatrix:
    """Block-diagonal matrix of J_n(lambda); with ``lift`` eigenvalues are Teichmueller-lifted."""
    n = sum(s for _, s in blocks)
    e = [0] * (n * n)
    pos = 0
    for lam, s in blocks:
        val = R.teichmuller(lam) if lift else lam
        for i in range(s):
            e[(pos + i) * n + pos + i] = val
            if i + 1 < s:
                e[(pos + i) * n + pos + i + 1] = 1
        pos += s
    return RMatrix(R, n, tuple(e))


def primary_components(blocks) -> list[PrimaryComponent]:
    out: list[PrimaryComponent] = []
    pos = 0
    for lam, s in blocks:
        if out and out[-1].eigenvalue == lam:
            last = out[-1]
            out[-1] = PrimaryComponent(lam, last.partition + (s,), last.start, pos + s)
        else:
            out.append(PrimaryComponent(lam, (s,), pos, pos + s))
        pos += s
    return out


def _column_space_basis(R1: RingSpec, vecs: list[Codes], n: int) -> list[Codes]:
    return howell_form(R1, vecs, n) if vecs else []


def _kernel_vectors(R1: RingSpec, n: int, A: Codes) -> list[Codes]:
    """Basis of {v : A v = 0} over the field R1."""
    images = [tuple(A[i * n + k] for i in range(n)) for k in range(n)]
    basis, _ = kernel(R1, images)
    return basis


def _apply(R1: RingSpec, n: int, A: Codes, v: Codes) -> Codes:
    return tuple(_dot(R1, A[i * n:(i + 1) * n], v) for i in range(n))


def _jcf_over_field(K: RingSpec, n: int, A: Codes, order_key) -> tuple[list[tuple[int, int]], Codes]:
    """Jordan blocks and conjugator g (g A g^{-1} = J) over the field K (r = 1)."""
    eig = []
    for lam in range(K.q):
        Nl = msub(K, A, tuple(lam if i == j else 0 for i in range(n) for j in range(n)))
        if _kernel_vectors(K, n, Nl):
            eig.append(lam)
    eig.sort(key=order_key)
    blocks: list[tuple[int, int]] = []
    columns: list[Codes] = []
    for lam in eig:
        Nl = msub(K, A, tuple(lam if i == j else 0 for i in range(n) for j in range(n)))
        powers = [identity_codes(n)]
        kers = [[]]
        while True:
            P = mmul(K, n, powers[-1], Nl)
            powers.append(P)
            kers.append(_kernel_vectors(K, n, P))
            if len(kers[-1]) == len(kers[-2]):
                powers.pop()
                kers.pop()
                break
        m = len(kers) - 1
        chosen: list[tuple[int, Codes]] = []
        for k in range(m, 0, -1):
            span = list(kers[k - 1])
            for size, top in chosen:
                w = top
                for _ in range(size - k):
                    w = _apply(K, n, Nl, w)
                span.append(w)
            form = _column_space_basis(K, span, n)
            for cand in kers[k]:
                if not module_contains(K, form, cand):
                    chosen.append((k, cand))
                    span.append(cand)
                    form = _column_space_basis(K, span, n)
        chosen.sort(key=lambda t: -t[0])
        for size, top in chosen:
            chain = [top]
            for _ in range(size - 1):
                chain.append(_apply(K, n, Nl, chain[-1]))
            columns.extend(reversed(chain))
            blocks.append((lam, size))
    P = tuple(columns[j][i] for i in range(n) for j in range(n))
    return blocks, minv(K, n, P)


def residue_jcf(M: RMatrix) -> JordanForm:
    """Canonical Jordan form of the residue matrix over the splitting extension."""
    n = M.n
    R1 = M.spec.with_length(1)
    Mbar = tuple(M.spec.reduce_to(a, 1) for a in M.entries)
    d = splitting_degree(M)
    if d == 1:
        K, A, base_image = R1, Mbar, None
    else:
        ext = ExtensionSpec(R1, d)
        K = ext.ring
        A = tuple(ext.embed(a) for a in Mbar)
        base_image = ext._field_image_set
    F = K.field

    def key(c: int):
        return (0 if base_image is None or c in base_image else 1, tuple(F.coeffs(c)))

    blocks, g = _jcf_over_field(K, n, A, key)
    if len(blocks) == 0 or sum(s for _, s in blocks) != n:
        raise AssertionError("Jordan chain construction failed")
    return JordanForm(K, blocks, RMatrix(K, n, g), d)


def lift_jcf(M: RMatrix) -> tuple[RMatrix, RMatrix, RMatrix]:
    """(g, A, B) with g M g^{-1} = A + pi B and A = mu(JCF of Mbar)."""
    jf = residue_jcf(M)
    if jf.split_degree != 1:
        raise NotSplit(f"residue matrix splits only over degree {jf.split_degree}")
    R, n = M.spec, M.n
    g = tuple(R.teichmuller(c) for c in jf.conjugator.entries)
    A = jordan_matrix(R, jf.blocks, lift=True)
    D = msub(R, mconj(R, n, g, M.entries), A.entries)
    B = tuple(R.shift_down(x, 1) for x in D)
    return RMatrix(R, n, g), A, RMatrix(R, n, B)


# --------------------------------------------------------------------------
# classification


@dataclass
class Classification:
    semisimple: bool
    strongly_semisimple_candidate: bool
    regular: bool
    split_degree: int
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "semisimple": self.semisimple,
            "stronglySemisimpleCandidate": self.strongly_semisimple_candidate,
            "regular": self.regular,
            "splitDegree": self.split_degree,
        }


def _power(R: RingSpec, n: int, A: Codes, e: int) -> Codes:
    result = identity_codes(n)
    base = A
    while e:
        if e & 1:
            result = mmul(R, n, result, base)
        base = mmul(R, n, base, base)
        e >>= 1
    return result


def semisimple_part(M: RMatrix, d: int | None = None) -> RMatrix:
    """The limit of M^{Q^k} with Q = q^{d}·(exponent stable), i.e. the Teichmueller-type part.

    For M = s + n with s semisimple (eigenvalues Teichmueller lifts over the
    splitting ring) and n nilpotent commuting with s, repeated Q-th powers
    converge to s.
    """
    if d is None:
        d = splitting_degree(M)
    R, n = M.spec, M.n
    Q = R.q ** (d * n)
    cur = M.entries
    seen = set()
    while cur not in seen:
        seen.add(cur)
        nxt = _power(R, n, cur, Q)
        if nxt == cur:
            return RMatrix(R, n, cur)
        cur = nxt
    return RMatrix(R, n, cur)


def _log(x: int, base: int) -> int:
    k = 0
    while x > 1:
        x //= base
        k += 1
    return k


def classify(M: RMatrix) -> Classification:
    R, n = M.spec, M.n
    d = splitting_degree(M)
    Qd = R.q**d
    # semisimple: diagonalizable with Teichmueller-or-zero eigenvalues, over the splitting ring,
    # equivalently M^{q^d} = M
    semisimple = _power(R, n, M.entries, Qd) == M.entries
    # regular: residue commutant has dimension n (dimension is preserved by field extension)
    R1 = R.with_length(1)
    Mbar = RMatrix(R1, n, tuple(R.reduce_to(a, 1) for a in M.entries))
    dim = _log(solve_sylvester(Mbar).cardinality, R1.q)
    regular = dim == n
    # Hill's s + n shape: s the semisimple part, n = M - s nilpotent in Z(C(s))
    s = semisimple_part(M, d)
    s_ok = _power(R, n, s.entries, Qd) == s.entries and mmul(R, n, s.entries, M.entries) == mmul(
        R, n, M.entries, s.entries
    )
    nil = msub(R, M.entries, s.entries)
    strong = False
    if s_ok and _power(R, n, nil, n * R.r) == (0,) * (n * n):
        comm = solve_sylvester(s)
        strong = all(mmul(R, n, nil, c) == mmul(R, n, c, nil) for c in comm.basis)
    return Classification(semisimple, strong, regular, d, {"commutantDimension": dim})
