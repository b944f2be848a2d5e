"""Exact cyclotomic integers for character values.

A :class:`CycInt` is an integer vector in Z[x]/(x^n - 1), x standing for
exp(2 pi i / n).  Arithmetic is done unreduced; equality and rational tests
reduce modulo the n-th cyclotomic polynomial, which gives a canonical form.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import Poly, cyclotomic_poly, symbols


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    x = symbols("x")
    return tuple(int(c) for c in reversed(Poly(cyclotomic_poly(n, x), x).all_coeffs()))


def reduce_mod_cyclotomic(vec: np.ndarray, n: int) -> tuple[int, ...]:
    """Canonical representative of vec (length n) modulo Phi_n: degree < phi(n)."""
    phi = cyclotomic_coeffs(n)
    d = len(phi) - 1
    v = [int(a) for a in vec]
    for k in range(len(v) - 1, d - 1, -1):
        c = v[k]
        if c:
            # Phi_n is monic: x^k = x^{k-d} * (x^d) and x^d = -sum_{i<d} phi_i x^i
            base = k - d
            for i in range(d):
                if phi[i]:
                    v[base + i] -= c * phi[i]
            v[k] = 0
    return tuple(v[:d])


class CycInt:
    __slots__ = ("n", "vec")

    def __init__(self, n: int, vec=None):
        self.n = n
        self.vec = np.zeros(n, dtype=np.int64) if vec is None else np.asarray(vec, dtype=np.int64)

    @classmethod
    def root(cls, n: int, k: int, mult: int = 1) -> "CycInt":
        v = np.zeros(n, dtype=np.int64)
        v[k % n] = mult
        return cls(n, v)

    @classmethod
    def integer(cls, n: int, c: int) -> "CycInt":
        return cls.root(n, 0, c)

    @classmethod
    def from_exponents(cls, n: int, exps) -> "CycInt":
        v = np.zeros(n, dtype=np.int64)
        np.add.at(v, np.asarray(list(exps), dtype=np.int64) % n, 1)
        return cls(n, v)

    def _check(self, other: "CycInt") -> None:
        if self.n != other.n:
            raise ValueError("cyclotomic orders differ")

    def __add__(self, other: "CycInt") -> "CycInt":
        self._check(other)
        return CycInt(self.n, self.vec + other.vec)

    def __sub__(self, other: "CycInt") -> "CycInt":
        self._check(other)
        return CycInt(self.n, self.vec - other.vec)

    def __neg__(self) -> "CycInt":
        return CycInt(self.n, -self.vec)

    def scale(self, c: int) -> "CycInt":
        return CycInt(self.n, self.vec * c)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        out = np.zeros(self.n, dtype=np.int64)
        for k in np.nonzero(self.vec)[0]:
            out += self.vec[k] * np.roll(other.vec, int(k))
        return CycInt(self.n, out)

    __rmul__ = __mul__

    def conj(self) -> "CycInt":
        return CycInt(self.n, np.roll(self.vec[::-1], 1))

    def rotate(self, k: int) -> "CycInt":
        """Multiply by the root x^k."""
        return CycInt(self.n, np.roll(self.vec, k % self.n))

    def lift(self, m: int) -> "CycInt":
        """The same number written with m-th roots of unity (n must divide m)."""
        if m % self.n:
            raise ValueError(f"{self.n} does not divide {m}")
        v = np.zeros(m, dtype=np.int64)
        v[:: m // self.n] = self.vec
        return CycInt(m, v)

    def canonical(self) -> tuple[int, ...]:
        return reduce_mod_cyclotomic(self.vec, self.n)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = CycInt.integer(self.n, other)
        if not isinstance(other, CycInt) or other.n != self.n:
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash((self.n, self.canonical()))

    def is_zero(self) -> bool:
        return not any(self.canonical())

    def as_integer(self) -> int | None:
        c = self.canonical()
        if any(c[1:]):
            return None
        return c[0] if c else 0

    def to_complex(self) -> complex:
        k = np.arange(self.n)
        return complex(np.sum(self.vec * np.exp(2j * np.pi * k / self.n)))

    def to_json(self) -> list[int]:
        return list(self.canonical())

    def __repr__(self) -> str:
        return f"CycInt(n={self.n}, {list(self.canonical())})"


def exact_rational(total: CycInt, denominator: int) -> Fraction:
    """total / denominator as a rational; raises if total is not rational."""
    v = total.as_integer()
    if v is None:
        raise ArithmeticError(f"inner product is not rational: {total!r}")
    return Fraction(v, denominator)
