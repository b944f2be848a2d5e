"""Finite chain rings O_r with residue field F_q.

Two families are supported:

* ``mixed``: the Galois ring GR(p^r, m) = (Z/p^r)[x]/(f), uniformizer p.
* ``equal``: F_q[t]/t^r, uniformizer t.

Elements are stored as integer *codes* so that hot loops (group enumeration,
character sums) can run on plain ints and lookup tables.  For the mixed family
a code is the coefficient vector of the polynomial representative packed in
base p^r; for the equal family it is the vector of t-adic digits packed in base
q.  :class:`RingElement` wraps a code with its ring and exposes the Teichmueller
digit expansion a = sum mu(a_i) pi^i.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

TABLE_LIMIT = 1024


class NonUnit(ArithmeticError):
    """Raised when inverting an element of positive valuation."""


class SpecMismatch(ValueError):
    """Raised when combining elements of different rings."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


# --------------------------------------------------------------------------
# polynomials over F_p (coefficient lists, low degree first)


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = [x % p for x in a]
    _poly_trim(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        _poly_trim(a)
    return a


def _is_irreducible(f: Sequence[int], p: int) -> bool:
    m = len(f) - 1
    for d in range(1, m // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            if not _poly_mod(f, g, p):
                return False
    return True


@functools.lru_cache(maxsize=None)
def conway_modulus(p: int, m: int) -> tuple[int, ...]:
    """Least monic irreducible polynomial of degree m over F_p.

    Polynomials x^m + c_{m-1}x^{m-1} + ... + c_0 are ordered by the integer
    sum c_j p^j.  Returns (c_0, ..., c_{m-1}).
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m == 1:
        return (0,)
    for code in range(p**m):
        coeffs = [(code // p**j) % p for j in range(m)]
        if _is_irreducible(coeffs + [1], p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# --------------------------------------------------------------------------
# residue field


class ResidueField:
    """F_q = F_p[x]/(modulus) with elements coded as sum c_k p^k."""

    def __init__(self, p: int, m: int):
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = conway_modulus(p, m)
        q = self.q
        f = list(self.modulus) + [1]
        self.add_t = [[self._pack([(x + y) % p for x, y in zip(self.coeffs(a), self.coeffs(b))])
                       for b in range(q)] for a in range(q)]
        self.mul_t = [[0] * q for _ in range(q)]
        for a in range(q):
            ca = self.coeffs(a)
            for b in range(a, q):
                cb = self.coeffs(b)
                prod = [0] * (2 * m - 1)
                for i, x in enumerate(ca):
                    if x:
                        for j, y in enumerate(cb):
                            prod[i + j] += x * y
                red = _poly_mod(prod, f, p) if m > 1 else [prod[0] % p]
                v = self._pack(red)
                self.mul_t[a][b] = self.mul_t[b][a] = v
        self.neg_t = [self._pack([(-x) % p for x in self.coeffs(a)]) for a in range(q)]
        self.inv_t = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self.mul_t[a][b] == 1:
                    self.inv_t[a] = b
                    break
        self.trace_t = [self._trace(a) for a in range(q)]

    def coeffs(self, a: int) -> list[int]:
        return [(a // self.p**k) % self.p for k in range(self.m)]

    def _pack(self, cs: Sequence[int]) -> int:
        out = 0
        for k, c in enumerate(cs):
            out += (c % self.p) * self.p**k
        return out

    def _trace(self, a: int) -> int:
        # absolute trace a + a^p + ... + a^{p^{m-1}}
        total, x = 0, a
        for _ in range(self.m):
            total = self.add_t[total][x]
            x = self.pow(x, self.p)
        assert total < self.p
        return total

    def add(self, a: int, b: int) -> int:
        return self.add_t[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_t[a][self.neg_t[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_t[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self.inv_t[a]

    def pow(self, a: int, e: int) -> int:
        out = 1
        base = a
        while e:
            if e & 1:
                out = self.mul_t[out][base]
            base = self.mul_t[base][base]
            e >>= 1
        return out

    def from_int(self, k: int) -> int:
        return k % self.p


@functools.lru_cache(maxsize=None)
def residue_field(p: int, m: int) -> ResidueField:
    return ResidueField(p, m)


# --------------------------------------------------------------------------
# ring specs


_KINDS = ("mixed", "equal")


class RingSpec:
    """A finite chain ring O_r; instances are interned per (kind, p, m, r)."""

    _cache: dict[tuple, "RingSpec"] = {}

    def __new__(cls, kind: str, p: int, m: int = 1, r: int = 1):
        key = (kind, p, m, r)
        obj = cls._cache.get(key)
        if obj is not None:
            return obj
        if kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {kind!r}")
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        if m < 1 or r < 1:
            raise ValueError("need m >= 1 and r >= 1")
        obj = super().__new__(cls)
        obj.kind, obj.p, obj.m, obj.r = kind, p, m, r
        obj.key = key
        obj._init()
        cls._cache[key] = obj
        return obj

    def __getnewargs__(self):
        return self.key

    def __reduce__(self):
        return (RingSpec, self.key)

    def _init(self) -> None:
        self.field = residue_field(self.p, self.m)
        self.q = self.field.q
        self.modulus = self.field.modulus
        self.size = self.q**self.r
        if self.kind == "mixed":
            self.P = self.p**self.r
        self.zero = 0
        self.one = 1
        if self.r == 1:
            self.pi = 0
        elif self.kind == "mixed":
            self.pi = self.p
        else:
            self.pi = self.q
        self.teich_t = [self._teichmuller(c) for c in range(self.q)]

    # ---- descriptors

    def __repr__(self) -> str:
        return f"RingSpec({self.kind!r}, p={self.p}, m={self.m}, r={self.r})"

    @property
    def name(self) -> str:
        if self.kind == "mixed":
            return f"z{self.p**self.r}" if self.m == 1 else f"gr{self.p**self.r}_{self.m}"
        return f"f{self.q}t{self.r}"

    def to_json(self) -> dict:
        return {"kind": self.kind, "p": self.p, "m": self.m, "r": self.r}

    @classmethod
    def from_json(cls, d: dict) -> "RingSpec":
        return cls(d["kind"], int(d["p"]), int(d.get("m", 1)), int(d["r"]))

    @classmethod
    def parse(cls, name: str) -> "RingSpec":
        """Parse shorthand names: ``z9``, ``gr9_2``, ``f2t2`` (F_2[t]/t^2), ``f4t2``."""
        s = name.strip().lower()
        try:
            if s.startswith("gr"):
                order, m = s[2:].split("_")
                p, r = _prime_power(int(order))
                return cls("mixed", p, int(m), r)
            if s.startswith("z"):
                p, r = _prime_power(int(s[1:]))
                return cls("mixed", p, 1, r)
            if s.startswith("f") and "t" in s:
                q, r = s[1:].split("t")
                p, m = _prime_power(int(q))
                return cls("equal", p, m, int(r))
        except ValueError as exc:
            raise ValueError(f"cannot parse ring name {name!r}") from exc
        raise ValueError(f"cannot parse ring name {name!r}")

    def with_length(self, s: int) -> "RingSpec":
        return RingSpec(self.kind, self.p, self.m, s)

    def extension(self, d: int) -> "ExtensionSpec":
        return ExtensionSpec(self, d)

    # ---- slow-path arithmetic on codes

    def _mixed_coeffs(self, a: int) -> list[int]:
        P = self.P
        return [(a // P**j) % P for j in range(self.m)]

    def _mixed_pack(self, cs: Sequence[int]) -> int:
        P = self.P
        out = 0
        for j, c in enumerate(cs):
            out += (c % P) * P**j
        return out

    def _digits_equal(self, a: int) -> list[int]:
        q = self.q
        return [(a // q**i) % q for i in range(self.r)]

    def _pack_equal(self, ds: Sequence[int]) -> int:
        q = self.q
        out = 0
        for i, d in enumerate(ds):
            out += d * q**i
        return out

    def _add_slow(self, a: int, b: int) -> int:
        if self.kind == "mixed":
            return self._mixed_pack([x + y for x, y in zip(self._mixed_coeffs(a), self._mixed_coeffs(b))])
        F = self.field
        return self._pack_equal([F.add_t[x][y] for x, y in zip(self._digits_equal(a), self._digits_equal(b))])

    def _neg_slow(self, a: int) -> int:
        if self.kind == "mixed":
            return self._mixed_pack([-x for x in self._mixed_coeffs(a)])
        F = self.field
        return self._pack_equal([F.neg_t[x] for x in self._digits_equal(a)])

    def _mul_slow(self, a: int, b: int) -> int:
        if self.kind == "mixed":
            m, P = self.m, self.P
            ca, cb = self._mixed_coeffs(a), self._mixed_coeffs(b)
            prod = [0] * (2 * m - 1)
            for i, x in enumerate(ca):
                if x:
                    for j, y in enumerate(cb):
                        prod[i + j] += x * y
            f = self.modulus
            for k in range(2 * m - 2, m - 1, -1):
                c = prod[k]
                if c:
                    prod[k] = 0
                    for j in range(m):
                        prod[k - m + j] -= c * f[j]
            return self._mixed_pack([x % P for x in prod[:m]])
        F = self.field
        da, db = self._digits_equal(a), self._digits_equal(b)
        out = [0] * self.r
        for i, x in enumerate(da):
            if x:
                for j in range(self.r - i):
                    out[i + j] = F.add_t[out[i + j]][F.mul_t[x][db[j]]]
        return self._pack_equal(out)

    # ---- tables (lazily built for small rings)

    @functools.cached_property
    def tabulated(self) -> bool:
        return self.size <= TABLE_LIMIT

    @functools.cached_property
    def add_t(self) -> list[list[int]]:
        n = self.size
        return [[self._add_slow(a, b) for b in range(n)] for a in range(n)]

    @functools.cached_property
    def mul_t(self) -> list[list[int]]:
        n = self.size
        t = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(a, n):
                t[a][b] = t[b][a] = self._mul_slow(a, b)
        return t

    @functools.cached_property
    def neg_t(self) -> list[int]:
        return [self._neg_slow(a) for a in range(self.size)]

    @functools.cached_property
    def inv_t(self) -> list[int]:
        """inv_t[a] is the inverse of a, or -1 for non-units."""
        out = [-1] * self.size
        for a in range(self.size):
            if out[a] == -1 and self.is_unit(a):
                b = self._inv_slow(a)
                out[a], out[b] = b, a
        return out

    # ---- public code-level operations

    def add(self, a: int, b: int) -> int:
        if self.tabulated:
            return self.add_t[a][b]
        return self._add_slow(a, b)

    def neg(self, a: int) -> int:
        if self.tabulated:
            return self.neg_t[a]
        return self._neg_slow(a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.tabulated:
            return self.mul_t[a][b]
        return self._mul_slow(a, b)

    def pow(self, a: int, e: int) -> int:
        out, base = self.one, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def from_int(self, k: int) -> int:
        if self.kind == "mixed":
            return k % self.P
        return k % self.p

    @functools.cached_property
    def residue_t(self) -> list[int]:
        return [self._residue_slow(a) for a in range(self.size)]

    @functools.cached_property
    def digits_t(self) -> list[tuple[int, ...]]:
        return [tuple(self._digits_slow(a)) for a in range(self.size)]

    @functools.cached_property
    def valuation_t(self) -> list[int]:
        return [self._valuation_slow(a) for a in range(self.size)]

    def residue(self, a: int) -> int:
        """Image of a in F_q."""
        if self.tabulated:
            return self.residue_t[a]
        return self._residue_slow(a)

    def _residue_slow(self, a: int) -> int:
        if self.kind == "mixed":
            F = self.field
            return F._pack([c % self.p for c in self._mixed_coeffs(a)])
        return a % self.q

    def is_unit(self, a: int) -> bool:
        return self.residue(a) != 0

    def _inv_slow(self, a: int) -> int:
        if not self.is_unit(a):
            raise NonUnit(f"{self.format(a)} is not a unit in {self.name}")
        order = self.q ** (self.r - 1) * (self.q - 1)
        return self.pow(a, order - 1)

    def inv(self, a: int) -> int:
        if self.tabulated:
            b = self.inv_t[a]
            if b < 0:
                raise NonUnit(f"{self.format(a)} is not a unit in {self.name}")
            return b
        return self._inv_slow(a)

    # ---- digits, Teichmueller, valuation

    def _lift_residue(self, c: int) -> int:
        """Naive lift of a residue-field element (coefficients in 0..p-1)."""
        if self.kind == "mixed":
            return self._mixed_pack(self.field.coeffs(c))
        return c

    def _teichmuller(self, c: int) -> int:
        if self.kind == "equal" or c == 0:
            return c
        x = self._lift_residue(c)
        for _ in range(self.r * self.m + 1):
            y = self.pow(x, self.q)
            if y == x:
                return x
            x = y
        raise AssertionError("Teichmueller iteration did not converge")  # pragma: no cover

    def teichmuller(self, c: int) -> int:
        return self.teich_t[c]

    def digits(self, a: int) -> list[int]:
        """Residue-field digits (a_0, ..., a_{r-1}) with a = sum mu(a_i) pi^i."""
        if self.tabulated:
            return list(self.digits_t[a])
        return self._digits_slow(a)

    def _digits_slow(self, a: int) -> list[int]:
        if self.kind == "equal":
            return self._digits_equal(a)
        out = []
        x = a
        p = self.p
        for _ in range(self.r):
            d = self._residue_slow(x)
            out.append(d)
            x = self._add_slow(x, self._neg_slow(self.teich_t[d]))
            x = self._mixed_pack([c // p for c in self._mixed_coeffs(x)])
        return out

    def from_digits(self, ds: Sequence[int]) -> int:
        if len(ds) > self.r:
            ds = ds[: self.r]
        if self.kind == "equal":
            return self._pack_equal(list(ds) + [0] * (self.r - len(ds)))
        out = 0
        pip = 1
        for d in ds:
            out = self.add(out, self.mul(self.teich_t[d], pip))
            pip = self.mul(pip, self.pi) if self.r > 1 else 0
        return out

    def valuation(self, a: int) -> int:
        if self.tabulated:
            return self.valuation_t[a]
        return self._valuation_slow(a)

    def _valuation_slow(self, a: int) -> int:
        if self.kind == "equal":
            for i, d in enumerate(self._digits_equal(a)):
                if d:
                    return i
            return self.r
        cs = self._mixed_coeffs(a)
        v = self.r
        for c in cs:
            if c:
                k = 0
                while c % self.p == 0:
                    c //= self.p
                    k += 1
                v = min(v, k)
        return v

    def pi_power(self, j: int) -> int:
        if j >= self.r:
            return 0
        return self.from_digits([0] * j + [1])

    def shift_down(self, a: int, j: int) -> int:
        """a / pi^j with vanishing top digits; requires valuation(a) >= j."""
        if j == 0:
            return a
        if self.tabulated:
            key = (a, j)
            hit = self._shift_cache.get(key)
            if hit is not None:
                return hit
        ds = self.digits(a)
        if any(ds[:j]):
            raise NonUnit(f"{self.format(a)} is not divisible by pi^{j}")
        out = self.from_digits(ds[j:])
        if self.tabulated:
            self._shift_cache[(a, j)] = out
        return out

    @functools.cached_property
    def _shift_cache(self) -> dict:
        return {}

    def reduce_table(self, s: int) -> list[int] | None:
        """Lookup table for rho_s on a tabulated ring (None otherwise)."""
        if not self.tabulated:
            return None
        t = self._reduce_tables.get(s)
        if t is None:
            t = [self._reduce_slow(a, s) for a in range(self.size)]
            self._reduce_tables[s] = t
        return t

    @functools.cached_property
    def _reduce_tables(self) -> dict:
        return {}

    def reduce_to(self, a: int, s: int) -> int:
        """rho_s: the image of a in O_s."""
        if self.tabulated and 1 <= s <= self.r:
            return self.reduce_table(s)[a]
        return self._reduce_slow(a, s)

    def _reduce_slow(self, a: int, s: int) -> int:
        if s > self.r or s < 1:
            raise ValueError(f"cannot reduce length {self.r} to {s}")
        target = self.with_length(s)
        if self.kind == "mixed":
            return target._mixed_pack([c % target.P for c in self._mixed_coeffs(a)])
        return a % self.q**s

    def section_from(self, a: int, source: "RingSpec") -> int:
        """mu_{s,r}: digit-preserving lift from ``source`` (length s <= r)."""
        if source.kind != self.kind or source.p != self.p or source.m != self.m:
            raise SpecMismatch(f"cannot lift from {source} to {self}")
        if source.r > self.r:
            raise ValueError(f"section needs s <= r, got s={source.r}, r={self.r}")
        return self.from_digits(source.digits(a))

    def trace_to_prime(self, a: int) -> int:
        """Trace of a to the prime subring, as an integer mod p^r (mixed) or p (equal, digit-wise)."""
        if self.kind == "equal":
            raise TypeError("use digit traces in equal characteristic")
        if self.m == 1:
            return a
        total = 0
        for k in range(self.m):
            basis = self._mixed_pack([1 if j == k else 0 for j in range(self.m)])
            total += self._mixed_coeffs(self.mul(a, basis))[k]
        return total % self.P

    def elements(self) -> range:
        return range(self.size)

    def units(self) -> Iterator[int]:
        return (a for a in range(self.size) if self.is_unit(a))

    def format(self, a: int) -> str:
        if self.kind == "mixed" and self.m == 1:
            return str(a)
        return "[" + ",".join(str(d) for d in self.digits(a)) + "]"

    # ---- serialization of elements

    def encode(self, a: int) -> list[list[int]]:
        return [self.field.coeffs(d) for d in self.digits(a)]

    def decode(self, obj) -> int:
        if isinstance(obj, bool):
            raise TypeError("booleans are not ring elements")
        if isinstance(obj, int):
            return self.from_int(obj)
        ds = []
        for d in obj:
            if isinstance(d, int):
                ds.append(self.field.from_int(d))
            else:
                ds.append(self.field._pack(d))
        if len(ds) > self.r:
            raise ValueError(f"too many digits for {self.name}")
        return self.from_digits(ds)


def _prime_power(n: int) -> tuple[int, int]:
    for p in range(2, n + 1):
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            if n != 1:
                raise ValueError("not a prime power")
            return p, k
    raise ValueError("not a prime power")


# --------------------------------------------------------------------------
# unramified extensions


class ExtensionSpec:
    """The unramified extension of ``base`` of degree d (residue field F_{q^d})."""

    _cache: dict[tuple, "ExtensionSpec"] = {}

    def __new__(cls, base: RingSpec, d: int):
        key = (base.key, d)
        obj = cls._cache.get(key)
        if obj is not None:
            return obj
        if d < 1:
            raise ValueError("extension degree must be >= 1")
        obj = super().__new__(cls)
        obj.base = base
        obj.d = d
        obj.ring = RingSpec(base.kind, base.p, base.m * d, base.r)
        obj._field_image = _field_embedding(base.field, obj.ring.field)
        obj._embed_cache = {}
        cls._cache[key] = obj
        return obj

    def __reduce__(self):
        return (ExtensionSpec, (self.base, self.d))

    def __repr__(self) -> str:
        return f"ExtensionSpec({self.base!r}, d={self.d})"

    def embed_residue(self, c: int) -> int:
        return self._field_image[c]

    @functools.cached_property
    def _generator_image(self) -> int:
        # root of the base modulus in the extension ring (mixed case only)
        base, R = self.base, self.ring
        if base.m == 1:
            return 0
        root = R._lift_residue(self._field_image[base.p])  # image of x has code p
        f = list(base.modulus) + [1]

        def ev(poly, z):
            acc = 0
            for c in reversed(poly):
                acc = R.add(R.mul(acc, z), R.from_int(c))
            return acc

        deriv = [k * c for k, c in enumerate(f)][1:]
        z = root
        for _ in range(R.r + 1):
            z = R.sub(z, R.mul(ev(f, z), R.inv(ev(deriv, z))))
        assert ev(f, z) == 0
        return z

    def embed(self, a: int) -> int:
        """Ring embedding O_r -> O-hat_r."""
        hit = self._embed_cache.get(a)
        if hit is not None:
            return hit
        base, R = self.base, self.ring
        if base.kind == "equal":
            out = R._pack_equal([self._field_image[x] for x in base._digits_equal(a)])
        elif base.m == 1:
            out = a
        else:
            z = self._generator_image
            out = 0
            zp = 1
            for c in base._mixed_coeffs(a):
                out = R.add(out, R.mul(R.from_int(c), zp))
                zp = R.mul(zp, z)
        self._embed_cache[a] = out
        return out

    def in_base(self, c: int) -> bool:
        """Whether a residue-field element of the extension lies in the base field."""
        return c in self._field_image_set

    @functools.cached_property
    def _field_image_set(self) -> frozenset[int]:
        return frozenset(self._field_image)

    @functools.cached_property
    def _residue_preimage(self) -> dict[int, int]:
        return {v: k for k, v in enumerate(self._field_image)}

    def restrict(self, a: int) -> int:
        """Inverse of :meth:`embed` on its image; raises ValueError elsewhere."""
        R = self.ring
        ds = R.digits(a)
        pre = self._residue_preimage
        try:
            base_ds = [pre[d] for d in ds]
        except KeyError:
            raise ValueError("element does not lie in the base ring") from None
        return self.base.from_digits(base_ds)


def _field_embedding(small: ResidueField, big: ResidueField) -> list[int]:
    if big.m % small.m:
        raise SpecMismatch("residue degrees are not compatible")
    if small.m == 1:
        return list(range(small.q))
    f = list(small.modulus) + [1]
    root = None
    for z in range(big.q):
        acc = 0
        for c in reversed(f):
            acc = big.add_t[big.mul_t[acc][z]][c]
        if acc == 0:
            root = z
            break
    assert root is not None
    out = []
    for c in range(small.q):
        acc, zp = 0, 1
        for k in small.coeffs(c):
            acc = big.add_t[acc][big.mul_t[k][zp]]
            zp = big.mul_t[zp][root]
        out.append(acc)
    return out


# --------------------------------------------------------------------------
# value type


@dataclass(frozen=True)
class RingElement:
    """An element of a chain ring; immutable and hashable."""

    spec: RingSpec
    code: int

    @classmethod
    def from_int(cls, spec: RingSpec, k: int) -> "RingElement":
        return cls(spec, spec.from_int(k))

    @classmethod
    def from_digits(cls, spec: RingSpec, digits: Sequence[int]) -> "RingElement":
        return cls(spec, spec.from_digits(digits))

    def _check(self, other: "RingElement") -> None:
        if self.spec is not other.spec:
            raise SpecMismatch(f"{self.spec} vs {other.spec}")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.spec, self.spec.add(self.code, other.code))

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.spec, self.spec.sub(self.code, other.code))

    def __neg__(self) -> "RingElement":
        return RingElement(self.spec, self.spec.neg(self.code))

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.spec, self.spec.mul(self.code, other.code))

    def __pow__(self, e: int) -> "RingElement":
        return RingElement(self.spec, self.spec.pow(self.code, e))

    @property
    def digits(self) -> list[int]:
        return self.spec.digits(self.code)

    def is_unit(self) -> bool:
        return self.spec.is_unit(self.code)

    def __repr__(self) -> str:
        return f"{self.spec.format(self.code)}@{self.spec.name}"


def add(a: RingElement, b: RingElement) -> RingElement:
    return a + b


def mul(a: RingElement, b: RingElement) -> RingElement:
    return a * b


def inv(a: RingElement) -> RingElement:
    return RingElement(a.spec, a.spec.inv(a.code))


def valuation(a: RingElement) -> int:
    return a.spec.valuation(a.code)


def reduce(a: RingElement, s: int) -> RingElement:
    return RingElement(a.spec.with_length(s), a.spec.reduce_to(a.code, s))


def section(a: RingElement, r: int) -> RingElement:
    target = a.spec.with_length(r)
    return RingElement(target, target.section_from(a.code, a.spec))


def teichmuller(spec: RingSpec, c: int) -> RingElement:
    """mu_r(c) for c a residue-field code."""
    return RingElement(spec, spec.teichmuller(c))


def embed(a: RingElement, ext: ExtensionSpec) -> RingElement:
    if ext.base is not a.spec:
        raise SpecMismatch(f"{a.spec} is not the base of {ext}")
    return RingElement(ext.ring, ext.embed(a.code))


# --------------------------------------------------------------------------
# additive character psi


@dataclass(frozen=True, order=True)
class Phase:
    """An element num/den of Q/Z; the character value exp(2 pi i num/den)."""

    num: int
    den: int

    def __post_init__(self):
        f = Fraction(self.num % self.den, self.den)
        object.__setattr__(self, "num", f.numerator)
        object.__setattr__(self, "den", f.denominator)

    @classmethod
    def zero(cls) -> "Phase":
        return cls(0, 1)

    def __add__(self, other: "Phase") -> "Phase":
        f = Fraction(self.num, self.den) + Fraction(other.num, other.den)
        return Phase(f.numerator, f.denominator)

    def __neg__(self) -> "Phase":
        return Phase(-self.num, self.den)

    def __sub__(self, other: "Phase") -> "Phase":
        return self + (-other)

    def exponent(self, n: int) -> int:
        """k such that the value equals zeta_n^k."""
        if n % self.den:
            raise ValueError(f"phase {self} is not an n={n} root of unity")
        return self.num * (n // self.den)

    @property
    def order(self) -> int:
        return self.den

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


def psi_level(spec: RingSpec, t: int, j: int) -> Phase:
    """psi(pi^{-j} t) for t in O_r (only t mod pi^j matters), 0 <= j <= r."""
    if j == 0:
        return Phase.zero()
    if spec.kind == "mixed":
        tj = spec.reduce_to(t, j) if j < spec.r else t
        ring_j = spec.with_length(j)
        return Phase(ring_j.trace_to_prime(tj), spec.p**j)
    d = spec.digits(t)[j - 1]
    return Phase(spec.field.trace_t[d], spec.p)
