"""Brute-force reference computations, independent of the package's linear algebra.

Only ring arithmetic on codes and plain matrix products are shared; no
Howell forms, Jordan forms or group-engine routines are used here.
"""

from __future__ import annotations

import itertools
from collections import Counter

import numpy as np

from chainrep.chain_ring import RingSpec


def matmul(R: RingSpec, n: int, A, B):
    out = []
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = R.add(acc, R.mul(A[i * n + k], B[k * n + j]))
            out.append(acc)
    return tuple(out)


def bracket(R: RingSpec, n: int, X, A):
    """XA - AX."""
    P, Q = matmul(R, n, X, A), matmul(R, n, A, X)
    return tuple(R.sub(a, b) for a, b in zip(P, Q))


def _integer_modulus(R: RingSpec) -> int | None:
    """p^r when R is Z/p^r and codes are the integers 0..p^r - 1, else None."""
    if R.kind != "mixed" or R.m != 1:
        return None
    if any(R.from_int(k) != k for k in range(R.size)):
        return None
    return R.size


def _bracket_keys(R: RingSpec, n: int, xs, mats) -> list:
    """Keys (XA - AX for A in mats) for every X in xs; numpy over Z/p^r when possible."""
    mod = _integer_modulus(R)
    if mod is None:
        return [tuple(itertools.chain.from_iterable(bracket(R, n, x, A) for A in mats)) for x in xs]
    X = np.array(xs, dtype=np.int64).reshape(-1, n, n)
    parts = []
    for A in mats:
        Am = np.array(A, dtype=np.int64).reshape(n, n)
        parts.append(((X @ Am - Am @ X) % mod).reshape(len(xs), -1))
    K = np.concatenate(parts, axis=1).astype(np.uint8 if mod < 256 else np.int64)
    return [row.tobytes() for row in K]


def _neg_keys(R: RingSpec, n: int, xs, mats) -> list:
    neg = [tuple(R.neg(a) for a in x) for x in xs]
    return _bracket_keys(R, n, neg, mats)


def _halves(R: RingSpec, n: int):
    n2 = n * n
    h = n2 // 2
    lo = [x + (0,) * (n2 - h) for x in itertools.product(range(R.size), repeat=h)]
    hi = [(0,) * h + x for x in itertools.product(range(R.size), repeat=n2 - h)]
    return lo, hi


def commutant_count(R: RingSpec, n: int, A) -> int:
    """#{X : XA = AX} by meet-in-the-middle over the two halves of the entries (the map is additive)."""
    lo, hi = _halves(R, n)
    left = Counter(_bracket_keys(R, n, lo, [A]))
    return sum(left.get(k, 0) for k in _neg_keys(R, n, hi, [A]))


def common_commutant(R: RingSpec, n: int, mats) -> set:
    """All X commuting with every matrix in ``mats`` (meet in the middle, listing solutions)."""
    lo, hi = _halves(R, n)
    left: dict = {}
    for x, k in zip(lo, _bracket_keys(R, n, lo, mats)):
        left.setdefault(k, []).append(x)
    out = set()
    for y, k in zip(hi, _neg_keys(R, n, hi, mats)):
        for x in left.get(k, ()):
            out.add(tuple(R.add(a, b) for a, b in zip(x, y)))
    return out


def additive_generators(R: RingSpec, elements) -> list:
    """A generating set of the additive group spanned by ``elements``, by naive closure."""
    elements = list(elements)
    zero = tuple(0 for _ in elements[0])
    span = {zero}
    gens = []
    for e in elements:
        if e in span:
            continue
        gens.append(e)
        new = set(span)
        frontier = list(span)
        while frontier:
            nxt = []
            for s in frontier:
                t = tuple(R.add(a, b) for a, b in zip(s, e))
                if t not in new:
                    new.add(t)
                    nxt.append(t)
            frontier = nxt
        span = new
    return gens


def unit_matrices(n: int) -> list:
    out = []
    for k in range(n * n):
        out.append(tuple(1 if t == k else 0 for t in range(n * n)))
    return out


def center_of_commutant(R: RingSpec, n: int, A) -> set:
    """Z(C(A)) by brute force: C(A) is listed (or recognized as all of M_n), then the center is solved."""
    total = R.size ** (n * n)
    count = commutant_count(R, n, A)
    if count == total:
        tests = unit_matrices(n)
    else:
        tests = additive_generators(R, common_commutant(R, n, [A]))
    return common_commutant(R, n, [A] + tests)


def det(R: RingSpec, n: int, A) -> int:
    """Leibniz expansion."""
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1
        for i in range(n):
            term = R.mul(term, A[i * n + perm[i]])
        total = R.sub(total, term) if inv % 2 else R.add(total, term)
    return total


def gl_elements(R: RingSpec, n: int) -> list:
    return [A for A in itertools.product(range(R.size), repeat=n * n) if R.is_unit(det(R, n, A))]


def class_count(R: RingSpec, n: int) -> int:
    """k(G) = (1/|G|) sum_g |C_G(g)|, with centralizers listed by meet in the middle."""
    G = gl_elements(R, n)
    total = 0
    for g in G:
        total += sum(1 for x in common_commutant(R, n, [g]) if R.is_unit(det(R, n, x)))
    assert total % len(G) == 0
    return total // len(G)


def inverse2(R: RingSpec, g):
    """Adjugate inverse of an invertible 2x2 matrix."""
    a, b, c, d = g
    u = R.inv(R.sub(R.mul(a, d), R.mul(b, c)))
    return tuple(R.mul(u, x) for x in (d, R.neg(b), R.neg(c), a))


def residue_splits2(R: RingSpec, M) -> bool:
    """The residue characteristic polynomial of a 2x2 matrix has a root in the residue field."""
    F = R.with_length(1)
    a, b, c, d = (R.reduce_to(x, 1) for x in M)
    tr, dt = F.add(a, d), F.sub(F.mul(a, d), F.mul(b, c))
    return any(F.add(F.sub(F.mul(x, x), F.mul(tr, x)), dt) == 0 for x in range(F.size))


def stable_set2(R: RingSpec) -> set:
    """All 2x2 matrices G-conjugate to A + pi*Z(C(A)) with A a Teichmueller Jordan form."""
    pi = R.pi_power(1)
    teich = sorted({R.teichmuller(c) for c in range(R.q)})
    forms = [(a, 0, 0, b) for a in teich for b in teich] + [(t, 1, 0, t) for t in teich]
    seeds = set()
    for A in forms:
        for z in center_of_commutant(R, 2, A):
            seeds.add(tuple(R.add(x, R.mul(pi, y)) for x, y in zip(A, z)))
    G = gl_elements(R, 2)
    out = set()
    for g in G:
        gi = inverse2(R, g)
        for s in seeds:
            out.add(matmul(R, 2, matmul(R, 2, g, s), gi))
    return out


def orbit_count(R: RingSpec, n: int, domain) -> int:
    """Number of GL_n-conjugacy classes in ``domain`` (2x2 only), by explicit orbits."""
    assert n == 2
    G = [(g, inverse2(R, g)) for g in gl_elements(R, 2)]
    seen: set = set()
    count = 0
    for M in domain:
        if M in seen:
            continue
        count += 1
        for g, gi in G:
            seen.add(matmul(R, 2, matmul(R, 2, g, M), gi))
    return count
