"""Commutants, their centers, and centralizer subgroups of matrices over O_r."""

from __future__ import annotations

from dataclasses import dataclass

from .chain_ring import RingSpec
from .group_engine import BudgetExceeded, GroupTable, _budget
from .matrix_algebra import (
    Codes,
    LinearSolution,
    RMatrix,
    howell_form,
    is_invertible,
    mmul,
    mreduce,
    msection,
    solve_commuting,
    solve_sylvester,
)


class EigenvalueCollision(ValueError):
    """Two primary blocks whose eigenvalues differ by a non-unit."""


@dataclass(frozen=True)
class ToeplitzShape:
    partition: tuple[int, ...]

    @property
    def parameter_count(self) -> int:
        return sum(min(a, b) for a in self.partition for b in self.partition)

    def cardinality(self, spec: RingSpec) -> int:
        return spec.q ** (spec.r * self.parameter_count)


@dataclass(frozen=True)
class CenterShape:
    partition: tuple[int, ...]

    @property
    def n_max(self) -> int:
        return max(self.partition)

    def cardinality(self, spec: RingSpec) -> int:
        return spec.q ** (spec.r * self.n_max)


def jordan_sum(spec: RingSpec, partition, eigenvalue: int = 0) -> RMatrix:
    """eigenvalue * I + (direct sum of principal nilpotent blocks N_{n_i})."""
    n = sum(partition)
    e = [0] * (n * n)
    pos = 0
    for s in partition:
        for i in range(s):
            e[(pos + i) * n + pos + i] = eigenvalue
            if i + 1 < s:
                e[(pos + i) * n + pos + i + 1] = 1
        pos += s
    return RMatrix(spec, n, tuple(e))


def commutant(A: RMatrix) -> LinearSolution:
    return solve_sylvester(A)


def toeplitz_basis(spec: RingSpec, partition) -> list[Codes]:
    """Block upper-Toeplitz basis of the commutant of the sum of N_{n_i}.

    Block (i, j) has min(n_i, n_j) parameters: an upper Toeplitz square placed
    in the top-right corner when n_i <= n_j and in the top rows otherwise.
    """
    n = sum(partition)
    starts = [sum(partition[:k]) for k in range(len(partition))]
    basis = []
    for bi, ni in enumerate(partition):
        for bj, nj in enumerate(partition):
            m = min(ni, nj)
            for d in range(m):
                e = [0] * (n * n)
                for t in range(m - d):
                    row = t
                    col = (nj - m) + t + d
                    e[(starts[bi] + row) * n + starts[bj] + col] = 1
                basis.append(tuple(e))
    return basis


def same_module(spec: RingSpec, a: list[Codes], b: list[Codes], width: int) -> bool:
    return howell_form(spec, a, width) == howell_form(spec, b, width)


def center_of_commutant(A: RMatrix) -> tuple[LinearSolution, LinearSolution]:
    """(center, commutant): the center solves [X, A] = 0 and [X, C_i] = 0 for a commutant basis C_i."""
    comm = commutant(A)
    mats = [A] + comm.matrices()
    return solve_commuting(mats), comm


def polynomial_center_basis(spec: RingSpec, partition) -> list[Codes]:
    """Powers N^k (k < n_max) of N = sum of N_{n_i}: the shared-coefficient Toeplitz description."""
    N = jordan_sum(spec, partition).entries
    n = sum(partition)
    out = []
    cur = tuple(1 if i == j else 0 for i in range(n) for j in range(n))
    for _ in range(max(partition)):
        out.append(cur)
        cur = mmul(spec, n, cur, N)
    return out


def unit_commutant(A: RMatrix, budget: int | None = None) -> GroupTable:
    """The centralizer C_{G_r}(A) as an explicit table."""
    comm = commutant(A)
    if comm.cardinality > _budget(budget):
        raise BudgetExceeded(f"commutant has {comm.cardinality} elements")
    R, n = A.spec, A.n
    elems = [x for x in comm.elements() if is_invertible(R, n, x)]
    return GroupTable(R, n, elems)


@dataclass
class BlockDecomposition:
    blocks: list[tuple[int, int, int]]  # (start, stop, residue eigenvalue)
    blockwise_equal: bool


def primary_block_centralizer(A: RMatrix) -> BlockDecomposition:
    """Split a block-diagonal matrix of primary blocks and check the commutant is the block sum."""
    R, n = A.spec, A.n
    e = A.entries
    blocks: list[tuple[int, int, int]] = []
    start = 0
    for i in range(1, n + 1):
        if _closes(e, n, start, i):
            lam = R.residue(e[start * n + start])
            if blocks and blocks[-1][2] == lam:
                blocks[-1] = (blocks[-1][0], i, lam)
            else:
                blocks.append((start, i, lam))
            start = i
    for x in range(len(blocks)):
        for y in range(x + 1, len(blocks)):
            diff = R.sub(e[blocks[x][0] * (n + 1)], e[blocks[y][0] * (n + 1)])
            if not R.is_unit(diff):
                raise EigenvalueCollision(f"blocks {x} and {y} have congruent eigenvalues")
    full = commutant(A).basis
    parts: list[Codes] = []
    for s, t, _ in blocks:
        sub = RMatrix(R, t - s, tuple(e[a * n + b] for a in range(s, t) for b in range(s, t)))
        for c in commutant(sub).basis:
            big = [0] * (n * n)
            for a in range(t - s):
                for b in range(t - s):
                    big[(s + a) * n + s + b] = c[a * (t - s) + b]
            parts.append(tuple(big))
    return BlockDecomposition(blocks, same_module(R, full, parts, n * n))


def _closes(e: Codes, n: int, start: int, i: int) -> bool:
    """True when rows/cols [start, i) do not interact with indices >= i."""
    return not any(e[a * n + b] or e[b * n + a] for a in range(start, i) for b in range(i, n))


def check_centralsplit(M: RMatrix, A: RMatrix, budget: int | None = None) -> bool:
    """C_{G_s}(M) == C_{G_s}(A) as element tables."""
    return unit_commutant(M, budget).same_elements(unit_commutant(A, budget))


def check_reduction_surjectivity(M: RMatrix, r: int, budget: int | None = None) -> bool:
    """rho_s maps C_{G_r}(mu_{s,r}(M)) onto C_{G_s}(M)."""
    s = M.spec.r
    big = RMatrix(M.spec.with_length(r), M.n, msection(M.spec, M.entries, r))
    upstairs = unit_commutant(big, budget)
    down = {mreduce(big.spec, g, s) for g in upstairs.elements}
    return down == set(unit_commutant(M, budget).elements)
