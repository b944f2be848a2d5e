"""Square matrices over chain rings, and module computations via Howell forms.

Matrices are flat row-major tuples of ring codes; :class:`RMatrix` is the
public wrapper.  The tuple-level helpers (``mmul``, ``minv``, ...) are what the
group and character code calls in its inner loops.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .chain_ring import ExtensionSpec, RingElement, RingSpec, SpecMismatch

Codes = tuple[int, ...]


class NonInvertible(ArithmeticError):
    """Matrix whose determinant is not a unit."""


# --------------------------------------------------------------------------
# tuple-level arithmetic


def identity_codes(n: int) -> Codes:
    return tuple(1 if i == j else 0 for i in range(n) for j in range(n))


def zero_codes(n: int) -> Codes:
    return (0,) * (n * n)


def madd(R: RingSpec, A: Codes, B: Codes) -> Codes:
    return tuple(R.add(a, b) for a, b in zip(A, B))


def msub(R: RingSpec, A: Codes, B: Codes) -> Codes:
    return tuple(R.sub(a, b) for a, b in zip(A, B))


def mscale(R: RingSpec, c: int, A: Codes) -> Codes:
    return tuple(R.mul(c, a) for a in A)


def mmul(R: RingSpec, n: int, A: Codes, B: Codes) -> Codes:
    if R.tabulated:
        add, mul = R.add_t, R.mul_t
        if n == 2:
            a0, a1, a2, a3 = A
            b0, b1, b2, b3 = B
            return (
                add[mul[a0][b0]][mul[a1][b2]],
                add[mul[a0][b1]][mul[a1][b3]],
                add[mul[a2][b0]][mul[a3][b2]],
                add[mul[a2][b1]][mul[a3][b3]],
            )
        out = []
        for i in range(n):
            row = A[i * n:(i + 1) * n]
            for j in range(n):
                acc = 0
                for k in range(n):
                    acc = add[acc][mul[row[k]][B[k * n + j]]]
                out.append(acc)
        return tuple(out)
    out = []
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = R.add(acc, R.mul(A[i * n + k], B[k * n + j]))
            out.append(acc)
    return tuple(out)


def mtrace(R: RingSpec, n: int, A: Codes) -> int:
    acc = 0
    for i in range(n):
        acc = R.add(acc, A[i * n + i])
    return acc


def divide(R: RingSpec, e: int, pivot: int) -> int:
    """w with w * pivot = e, assuming valuation(e) >= valuation(pivot) < r."""
    v = R.valuation(pivot)
    if v == 0:
        return R.mul(e, R.inv(pivot))
    return R.mul(R.shift_down(e, v), R.inv(R.shift_down(pivot, v)))


def mdet(R: RingSpec, n: int, A: Codes) -> int:
    """Determinant by elimination on minimal-valuation pivots."""
    rows = [list(A[i * n:(i + 1) * n]) for i in range(n)]
    sign = 1
    det = R.one
    for c in range(n):
        best, bestv = None, R.r
        for i in range(c, n):
            v = R.valuation(rows[i][c])
            if v < bestv:
                best, bestv = i, v
        if best is None:
            return 0
        if best != c:
            rows[c], rows[best] = rows[best], rows[c]
            sign = -sign
        piv = rows[c][c]
        det = R.mul(det, piv)
        for i in range(c + 1, n):
            e = rows[i][c]
            if e:
                f = divide(R, e, piv)
                rows[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(rows[i], rows[c])]
    return det if sign == 1 else R.neg(det)


def minv(R: RingSpec, n: int, A: Codes) -> Codes:
    """Gauss-Jordan inverse with unit pivots."""
    if n == 2 and R.tabulated:
        a, b, c, d = A
        det = R.sub(R.mul(a, d), R.mul(b, c))
        di = R.inv_t[det]
        if di < 0:
            raise NonInvertible("determinant is not a unit")
        mul = R.mul_t
        return (mul[di][d], mul[di][R.neg_t[b]], mul[di][R.neg_t[c]], mul[di][a])
    rows = [list(A[i * n:(i + 1) * n]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if R.is_unit(rows[i][c])), None)
        if piv is None:
            raise NonInvertible("determinant is not a unit")
        rows[c], rows[piv] = rows[piv], rows[c]
        u = R.inv(rows[c][c])
        rows[c] = [R.mul(u, x) for x in rows[c]]
        for i in range(n):
            if i != c and rows[i][c]:
                f = rows[i][c]
                rows[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(rows[i], rows[c])]
    return tuple(x for row in rows for x in row[n:])


def mconj(R: RingSpec, n: int, g: Codes, M: Codes, g_inv: Codes | None = None) -> Codes:
    if g_inv is None:
        g_inv = minv(R, n, g)
    return mmul(R, n, mmul(R, n, g, M), g_inv)


def is_invertible(R: RingSpec, n: int, A: Codes) -> bool:
    return R.is_unit(mdet(R, n, A))


def mreduce(R: RingSpec, A: Codes, s: int) -> Codes:
    if s == R.r:
        return tuple(A)
    t = R.reduce_table(s)
    if t is not None:
        return tuple(t[a] for a in A)
    return tuple(R.reduce_to(a, s) for a in A)


def msection(R_src: RingSpec, A: Codes, r: int) -> Codes:
    T = R_src.with_length(r)
    return tuple(T.section_from(a, R_src) for a in A)


def commutator_codes(R: RingSpec, n: int, X: Codes, A: Codes) -> Codes:
    """XA - AX."""
    return msub(R, mmul(R, n, X, A), mmul(R, n, A, X))


# --------------------------------------------------------------------------
# public matrix type


@dataclass(frozen=True)
class RMatrix:
    spec: RingSpec
    n: int
    entries: Codes

    def __post_init__(self):
        if len(self.entries) != self.n * self.n:
            raise ValueError("entry count does not match dimension")

    # construction

    @classmethod
    def identity(cls, spec: RingSpec, n: int) -> "RMatrix":
        return cls(spec, n, identity_codes(n))

    @classmethod
    def zero(cls, spec: RingSpec, n: int) -> "RMatrix":
        return cls(spec, n, zero_codes(n))

    @classmethod
    def from_ints(cls, spec: RingSpec, rows: Sequence[Sequence[int]]) -> "RMatrix":
        n = len(rows)
        return cls(spec, n, tuple(spec.from_int(x) for row in rows for x in row))

    @classmethod
    def from_elements(cls, rows: Sequence[Sequence[RingElement]]) -> "RMatrix":
        spec = rows[0][0].spec
        for row in rows:
            for x in row:
                if x.spec is not spec:
                    raise SpecMismatch("entries from different rings")
        return cls(spec, len(rows), tuple(x.code for row in rows for x in row))

    @classmethod
    def scalar(cls, spec: RingSpec, n: int, c: int) -> "RMatrix":
        return cls(spec, n, tuple(c if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def unit_matrix(cls, spec: RingSpec, n: int, i: int, j: int, c: int = 1) -> "RMatrix":
        e = [0] * (n * n)
        e[i * n + j] = c
        return cls(spec, n, tuple(e))

    # access

    def __getitem__(self, ij: tuple[int, int]) -> RingElement:
        i, j = ij
        return RingElement(self.spec, self.entries[i * self.n + j])

    def rows(self) -> list[list[int]]:
        n = self.n
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(n)]

    # arithmetic

    def _check(self, other: "RMatrix") -> None:
        if self.spec is not other.spec or self.n != other.n:
            raise SpecMismatch("matrices over different rings or sizes")

    def __add__(self, other: "RMatrix") -> "RMatrix":
        self._check(other)
        return RMatrix(self.spec, self.n, madd(self.spec, self.entries, other.entries))

    def __sub__(self, other: "RMatrix") -> "RMatrix":
        self._check(other)
        return RMatrix(self.spec, self.n, msub(self.spec, self.entries, other.entries))

    def __neg__(self) -> "RMatrix":
        return RMatrix(self.spec, self.n, tuple(self.spec.neg(a) for a in self.entries))

    def __matmul__(self, other: "RMatrix") -> "RMatrix":
        self._check(other)
        return RMatrix(self.spec, self.n, mmul(self.spec, self.n, self.entries, other.entries))

    __mul__ = __matmul__

    def scale(self, c: int) -> "RMatrix":
        return RMatrix(self.spec, self.n, mscale(self.spec, c, self.entries))

    def trace(self) -> RingElement:
        return RingElement(self.spec, mtrace(self.spec, self.n, self.entries))

    def det(self) -> RingElement:
        return mat_det(self)

    def inv(self) -> "RMatrix":
        return mat_inv(self)

    def is_invertible(self) -> bool:
        return is_invertible(self.spec, self.n, self.entries)

    def residue(self) -> "RMatrix":
        return mat_reduce(self, 1)

    def __repr__(self) -> str:
        R = self.spec
        body = "; ".join(" ".join(R.format(x) for x in row) for row in self.rows())
        return f"RMatrix[{R.name}]({body})"

    # serialization

    def to_json(self) -> dict:
        R = self.spec
        return {
            "ring": R.to_json(),
            "n": self.n,
            "entries": [[R.encode(x) for x in row] for row in self.rows()],
        }

    @classmethod
    def from_json(cls, d: dict) -> "RMatrix":
        spec = RingSpec.from_json(d["ring"])
        rows = d["entries"]
        n = int(d.get("n", len(rows)))
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError("entries must form an n x n array")
        return cls(spec, n, tuple(spec.decode(x) for row in rows for x in row))


def mat_det(M: RMatrix) -> RingElement:
    return RingElement(M.spec, mdet(M.spec, M.n, M.entries))


def mat_inv(M: RMatrix) -> RMatrix:
    return RMatrix(M.spec, M.n, minv(M.spec, M.n, M.entries))


def conjugate(g: RMatrix, M: RMatrix) -> RMatrix:
    """g M g^{-1}."""
    g._check(M)
    return RMatrix(M.spec, M.n, mconj(M.spec, M.n, g.entries, M.entries))


def mat_reduce(M: RMatrix, s: int) -> RMatrix:
    return RMatrix(M.spec.with_length(s), M.n, mreduce(M.spec, M.entries, s))


def mat_section(M: RMatrix, r: int) -> RMatrix:
    return RMatrix(M.spec.with_length(r), M.n, msection(M.spec, M.entries, r))


def mat_embed(M: RMatrix, ext: ExtensionSpec) -> RMatrix:
    if ext.base is not M.spec:
        raise SpecMismatch(f"{M.spec} is not the base of {ext}")
    return RMatrix(ext.ring, M.n, tuple(ext.embed(a) for a in M.entries))


def teichmuller_matrix(spec: RingSpec, n: int, residues: Sequence[int]) -> RMatrix:
    """Entrywise Teichmueller lift of a residue-field matrix (flat codes)."""
    return RMatrix(spec, n, tuple(spec.teichmuller(c) for c in residues))


# --------------------------------------------------------------------------
# Howell forms and linear systems


def _low_digits(R: RingSpec, e: int, v: int) -> int:
    """The canonical residue of e modulo pi^v."""
    if v == 0:
        return 0
    ds = R.digits(e)
    return R.from_digits(ds[:v])


def howell_form(R: RingSpec, rows: Iterable[Sequence[int]], ncols: int | None = None) -> list[Codes]:
    """Canonical generating set (Howell form) of the O_r-module spanned by ``rows``.

    Pivots are powers of pi, entries above each pivot are reduced modulo that
    pivot, and the trailing rows span every module element vanishing in the
    leading columns.  Two generating sets of one module give identical output.
    """
    work = [list(r) for r in rows]
    if ncols is None:
        ncols = len(work[0]) if work else 0
    work = [r for r in work if any(r)]
    piv: list[tuple[int, int, list[int]]] = []
    for c in range(ncols):
        best, bestv = None, R.r
        for idx, row in enumerate(work):
            v = R.valuation(row[c])
            if v < bestv:
                best, bestv = idx, v
        if best is None:
            continue
        v = bestv
        prow = work.pop(best)
        u = R.inv(R.shift_down(prow[c], v))
        prow = [R.mul(u, x) for x in prow]
        nxt = []
        for row in work:
            e = row[c]
            if e:
                f = R.shift_down(e, v)
                row = [R.sub(x, R.mul(f, y)) for x, y in zip(row, prow)]
            if any(row):
                nxt.append(row)
        if v > 0:
            s = R.pi_power(R.r - v)
            sat = [R.mul(s, x) for x in prow]
            if any(sat):
                nxt.append(sat)
        work = nxt
        piv.append((c, v, prow))
    for i in range(len(piv)):
        row = piv[i][2]
        for j in range(i + 1, len(piv)):
            c, v, prow = piv[j]
            e = row[c]
            if e:
                low = _low_digits(R, e, v)
                f = R.shift_down(R.sub(e, low), v)
                row = [R.sub(x, R.mul(f, y)) for x, y in zip(row, prow)]
        piv[i] = (piv[i][0], piv[i][1], row)
    return [tuple(p[2]) for p in piv]


def _pivot_valuation(R: RingSpec, row: Sequence[int]) -> int:
    for x in row:
        if x:
            return R.valuation(x)
    return R.r


def module_cardinality(R: RingSpec, form: Sequence[Sequence[int]]) -> int:
    total = 1
    for row in form:
        total *= R.q ** (R.r - _pivot_valuation(R, row))
    return total


def _coefficients(R: RingSpec, depth: int) -> list[int]:
    """Canonical representatives of O_r / pi^depth."""
    return [R.from_digits(ds) for ds in itertools.product(range(R.q), repeat=depth)]


def module_elements(R: RingSpec, form: Sequence[Sequence[int]], ncols: int) -> Iterator[Codes]:
    """Every element of the module with Howell form ``form``, each exactly once."""
    coeffs = [_coefficients(R, R.r - _pivot_valuation(R, row)) for row in form]
    for cs in itertools.product(*coeffs):
        acc = [0] * ncols
        for c, row in zip(cs, form):
            if c:
                acc = [R.add(a, R.mul(c, x)) for a, x in zip(acc, row)]
        yield tuple(acc)


def module_contains(R: RingSpec, form: Sequence[Sequence[int]], vec: Sequence[int]) -> bool:
    """Membership test by reduction against a Howell form."""
    v = list(vec)
    for row in form:
        c = next(i for i, x in enumerate(row) if x)
        e = v[c]
        if e:
            pv = R.valuation(row[c])
            if R.valuation(e) < pv:
                return False
            f = R.shift_down(e, pv)
            v = [R.sub(x, R.mul(f, y)) for x, y in zip(v, row)]
    return not any(v)


@dataclass
class LinearSolution:
    """Solution module of a homogeneous (or affine) linear system."""

    spec: RingSpec
    ncols: int
    basis: list[Codes]
    cardinality: int
    particular: Codes | None = None
    n: int | None = field(default=None)

    def elements(self) -> Iterator[Codes]:
        base = self.particular
        for x in module_elements(self.spec, self.basis, self.ncols):
            yield x if base is None else madd(self.spec, base, x)

    def contains(self, vec: Sequence[int]) -> bool:
        if self.particular is not None:
            vec = msub(self.spec, tuple(vec), self.particular)
        return module_contains(self.spec, self.basis, vec)

    def matrices(self) -> list[RMatrix]:
        assert self.n is not None
        return [RMatrix(self.spec, self.n, b) for b in self.basis]


def kernel(R: RingSpec, images: Sequence[Sequence[int]]) -> tuple[list[Codes], int]:
    """Kernel of the O-linear map sending the k-th standard basis vector to images[k].

    Returns (Howell basis of the kernel, cardinality).
    """
    k = len(images)
    if k == 0:
        return [], 1
    w = len(images[0])
    rows = [list(img) + [1 if i == j else 0 for j in range(k)] for i, img in enumerate(images)]
    form = howell_form(R, rows, w + k)
    ker = [tuple(row[w:]) for row in form if not any(row[:w])]
    return ker, module_cardinality(R, ker)


def solve_sylvester(A: RMatrix) -> LinearSolution:
    """The commutant {X : XA = AX} as a module with Howell basis and exact size."""
    R, n = A.spec, A.n
    images = []
    for idx in range(n * n):
        E = tuple(1 if t == idx else 0 for t in range(n * n))
        images.append(commutator_codes(R, n, E, A.entries))
    basis, card = kernel(R, images)
    return LinearSolution(R, n * n, basis, card, None, n)


def solve_commuting(As: Sequence[RMatrix]) -> LinearSolution:
    """Matrices commuting with every matrix in ``As``."""
    R, n = As[0].spec, As[0].n
    images = []
    for idx in range(n * n):
        E = tuple(1 if t == idx else 0 for t in range(n * n))
        img: list[int] = []
        for A in As:
            img.extend(commutator_codes(R, n, E, A.entries))
        images.append(img)
    basis, card = kernel(R, images)
    return LinearSolution(R, n * n, basis, card, None, n)


def solve_linear(R: RingSpec, C: Sequence[Sequence[int]], b: Sequence[int]) -> LinearSolution | None:
    """Solutions x of sum_k x_k C[k] = b (C lists the images of basis vectors)."""
    k = len(C)
    w = len(b)
    rows = [list(C[i]) + [1 if i == j else 0 for j in range(k)] for i in range(k)]
    form = howell_form(R, rows, w + k)
    # reduce target against the form on the first w columns, tracking coefficients
    v = list(b) + [0] * k
    for row in form:
        c = next(i for i, x in enumerate(row) if x)
        if c >= w:
            break
        e = v[c]
        if e:
            pv = R.valuation(row[c])
            if R.valuation(e) < pv:
                return None
            f = R.shift_down(e, pv)
            v = [R.sub(x, R.mul(f, y)) for x, y in zip(v, row)]
    if any(v[:w]):
        return None
    particular = tuple(R.neg(x) for x in v[w:])
    ker = [tuple(row[w:]) for row in form if not any(row[:w])]
    return LinearSolution(R, k, ker, module_cardinality(R, ker), particular)
