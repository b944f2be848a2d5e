"""Brute-force finite matrix groups over chain rings.

Groups are explicit element tables (flat code tuples).  Class functions carry
exact :class:`CycInt` values on conjugacy-class representatives.  Every
selection of a "first" element uses the canonical order, which is the
lexicographic order of code tuples, so results are deterministic.
"""

from __future__ import annotations

import math
import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .chain_ring import Phase, RingSpec
from .cyclotomic import CycInt, exact_rational
from .matrix_algebra import (
    Codes,
    identity_codes,
    mdet,
    minv,
    mmul,
    mreduce,
)

DEFAULT_BUDGET = 2**22


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its element budget."""


class NotInvariant(ValueError):
    """A character is not invariant under the group it should extend to."""


def default_budget() -> int:
    env = os.environ.get("CHAINREP_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _budget(budget: int | None) -> int:
    return default_budget() if budget is None else budget


def gl_order(spec: RingSpec, n: int) -> int:
    q = spec.q
    field_order = 1
    for i in range(n):
        field_order *= q**n - q**i
    return q ** ((spec.r - 1) * n * n) * field_order


# --------------------------------------------------------------------------
# groups


class GroupTable:
    """An explicitly enumerated matrix group."""

    def __init__(self, spec: RingSpec, n: int, elements: Iterable[Codes], generators: Sequence[Codes] | None = None):
        self.spec = spec
        self.n = n
        self.elements: list[Codes] = sorted(set(elements))
        self._set = frozenset(self.elements)
        self.identity = identity_codes(n)
        self._generators = list(generators) if generators is not None else None
        self._inv: dict[Codes, Codes] = {}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g: Codes) -> bool:
        return g in self._set

    def __iter__(self):
        return iter(self.elements)

    def mul(self, a: Codes, b: Codes) -> Codes:
        return mmul(self.spec, self.n, a, b)

    def inv(self, a: Codes) -> Codes:
        r = self._inv.get(a)
        if r is None:
            r = minv(self.spec, self.n, a)
            self._inv[a] = r
        return r

    def conj(self, g: Codes, x: Codes) -> Codes:
        """g x g^{-1}."""
        return mmul(self.spec, self.n, mmul(self.spec, self.n, g, x), self.inv(g))

    @property
    def generators(self) -> list[Codes]:
        if self._generators is None:
            self._generators = greedy_generators(self)
        return self._generators

    def is_subgroup_of(self, other: "GroupTable") -> bool:
        return all(g in other for g in self.elements)

    def same_elements(self, other: "GroupTable") -> bool:
        return self._set == other._set

    def __repr__(self) -> str:
        return f"GroupTable({self.spec.name}, n={self.n}, order={self.order})"


SubgroupTable = GroupTable


def greedy_generators(G: GroupTable) -> list[Codes]:
    gens: list[Codes] = []
    H: set[Codes] = {G.identity}
    for g in G.elements:
        if g not in H:
            gens.append(g)
            H = set(_closure_from(G.spec, G.n, gens, H, G.order))
            if len(H) == G.order:
                break
    return gens


def _closure_from(spec: RingSpec, n: int, gens: Sequence[Codes], start: Iterable[Codes], budget: int) -> set[Codes]:
    seen = set(start)
    seen.add(identity_codes(n))
    queue = deque(seen)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mmul(spec, n, x, g)
            if y not in seen:
                seen.add(y)
                if len(seen) > budget:
                    raise BudgetExceeded(f"closure exceeds budget {budget}")
                queue.append(y)
    return seen


def subgroup_closure(spec: RingSpec, n: int, gens: Sequence[Codes], budget: int | None = None) -> GroupTable:
    """The subgroup generated by ``gens`` (finite, so closure under products suffices)."""
    gens = [g for g in gens if g != identity_codes(n)]
    elems = _closure_from(spec, n, gens, [], _budget(budget))
    return GroupTable(spec, n, elems, gens)


def gl_generators(spec: RingSpec, n: int) -> list[Codes]:
    """Elementary matrices I + c E_ij (c over additive generators) and diag(u, 1, ..., 1)."""
    gens = []
    add_gens = _additive_generators(spec)
    for i in range(n):
        for j in range(n):
            if i != j:
                for c in add_gens:
                    e = list(identity_codes(n))
                    e[i * n + j] = c
                    gens.append(tuple(e))
    for u in spec.units():
        if u != 1:
            e = list(identity_codes(n))
            e[0] = u
            gens.append(tuple(e))
    return sorted(set(gens))


def _additive_generators(spec: RingSpec) -> list[int]:
    F = spec.field
    basis = [F._pack([1 if k == i else 0 for k in range(F.m)]) for i in range(F.m)]
    out = []
    for j in range(spec.r):
        pj = spec.pi_power(j)
        for b in basis:
            out.append(spec.mul(pj, spec.teichmuller(b)))
    return out


def enumerate_group(spec: RingSpec, n: int, budget: int | None = None) -> GroupTable:
    """GL_n(O_r) as a table: a scan of all matrices when affordable, closure otherwise."""
    budget = _budget(budget)
    order = gl_order(spec, n)
    if order > budget:
        raise BudgetExceeded(f"|GL_{n}({spec.name})| = {order} exceeds budget {budget}")
    gens = gl_generators(spec, n)
    if spec.size ** (n * n) <= max(budget, 1 << 20):
        import itertools

        elems = [
            m
            for m in itertools.product(range(spec.size), repeat=n * n)
            if spec.is_unit(mdet(spec, n, m))
        ]
    else:
        elems = _closure_from(spec, n, gens, [], budget)
    return GroupTable(spec, n, elems, gens)


# --------------------------------------------------------------------------
# congruence kernels and preimages


def kernel_generators(spec: RingSpec, n: int, j: int) -> list[Codes]:
    """Generators of K^j = I + pi^j M_n(O_r): I + pi^k u E_ab for k >= j."""
    F = spec.field
    basis = [spec.teichmuller(F._pack([1 if k == i else 0 for k in range(F.m)])) for i in range(F.m)]
    gens = []
    for k in range(j, spec.r):
        pk = spec.pi_power(k)
        for a in range(n):
            for b in range(n):
                for u in basis:
                    e = list(identity_codes(n))
                    e[a * n + b] = spec.add(e[a * n + b], spec.mul(pk, u))
                    gens.append(tuple(e))
    return gens


def level_elements(spec: RingSpec, j: int) -> list[int]:
    """Canonical representatives pi^j x, x over O_{r-j}."""
    import itertools

    pj = spec.pi_power(j)
    return sorted({spec.mul(pj, spec.from_digits(ds)) for ds in itertools.product(range(spec.q), repeat=spec.r - j)})


def congruence_kernel(spec: RingSpec, n: int, j: int, budget: int | None = None) -> GroupTable:
    import itertools

    size = spec.q ** ((spec.r - j) * n * n)
    if size > _budget(budget):
        raise BudgetExceeded(f"|K^{j}| = {size} exceeds budget")
    vals = level_elements(spec, j)
    ident = identity_codes(n)
    elems = [tuple(spec.add(a, b) for a, b in zip(ident, xs)) for xs in itertools.product(vals, repeat=n * n)]
    return GroupTable(spec, n, elems, kernel_generators(spec, n, j))


def section_matrix(spec: RingSpec, g: Codes, source: RingSpec) -> Codes:
    return tuple(spec.section_from(a, source) for a in g)


def preimage(spec: RingSpec, n: int, j: int, image: Iterable[Codes], budget: int | None = None) -> GroupTable:
    """rho_j^{-1}(image) inside GL_n(O_r), image given over O_j."""
    src = spec.with_length(j)
    K = congruence_kernel(spec, n, j, budget)
    image = list(image)
    if len(image) * K.order > _budget(budget):
        raise BudgetExceeded("preimage exceeds budget")
    elems = []
    for h in image:
        s = section_matrix(spec, h, src)
        for k in K.elements:
            elems.append(mmul(spec, n, s, k))
    gens = [section_matrix(spec, h, src) for h in image] + K.generators
    return GroupTable(spec, n, elems, gens)


def reduce_group(G: GroupTable, j: int) -> GroupTable:
    R = G.spec
    return GroupTable(R.with_length(j), G.n, {mreduce(R, g, j) for g in G.elements})


# --------------------------------------------------------------------------
# commutators and Sylow subgroups


def commutator(spec: RingSpec, n: int, a: Codes, b: Codes) -> Codes:
    """a b a^{-1} b^{-1}."""
    return mmul(spec, n, mmul(spec, n, a, b), mmul(spec, n, minv(spec, n, a), minv(spec, n, b)))


def normal_closure(spec: RingSpec, n: int, seeds: Iterable[Codes], conj_gens: Sequence[Codes], budget: int | None = None) -> GroupTable:
    """Smallest subgroup containing ``seeds`` and normalized by ``conj_gens``."""
    budget = _budget(budget)
    gen_invs = [minv(spec, n, g) for g in conj_gens]
    gens = sorted(set(seeds))
    H = _closure_from(spec, n, gens, [], budget)
    while True:
        new = []
        for h in gens:
            for g, gi in zip(conj_gens, gen_invs):
                c = mmul(spec, n, mmul(spec, n, g, h), gi)
                if c not in H:
                    new.append(c)
        if not new:
            break
        gens = sorted(set(gens) | set(new))
        H = _closure_from(spec, n, gens, H, budget)
    return GroupTable(spec, n, H, gens)


def commutator_subgroup(H: GroupTable, budget: int | None = None) -> GroupTable:
    """[H, H] as the normal closure of commutators of generators."""
    gens = H.generators
    seeds = {commutator(H.spec, H.n, a, b) for a in gens for b in gens}
    seeds.discard(H.identity)
    return normal_closure(H.spec, H.n, seeds, gens, budget)


def element_order(spec: RingSpec, n: int, g: Codes) -> int:
    ident = identity_codes(n)
    x, k = g, 1
    while x != ident:
        x = mmul(spec, n, x, g)
        k += 1
    return k


def _p_part(order: int, p: int) -> int:
    out = 1
    while order % p == 0:
        order //= p
        out *= p
    return out


def sylow_p(H: GroupTable, p: int, budget: int | None = None) -> GroupTable:
    """A Sylow p-subgroup: greedy closure over p-elements in canonical order."""
    target = _p_part(H.order, p)
    R, n = H.spec, H.n
    P: set[Codes] = {H.identity}
    gens: list[Codes] = []
    progress = True
    while len(P) < target and progress:
        progress = False
        for g in H.elements:
            if g in P or _p_part(element_order(R, n, g), p) != element_order(R, n, g):
                continue
            trial = _closure_from(R, n, gens + [g], P, _budget(budget))
            if _p_part(len(trial), p) == len(trial):
                P, gens = trial, gens + [g]
                progress = True
                if len(P) == target:
                    break
    return GroupTable(R, n, P, gens)


def sylow_of_preimage(spec: RingSpec, n: int, image: GroupTable, budget: int | None = None) -> GroupTable:
    """Sylow p-subgroup of rho_1^{-1}(image): the preimage of a Sylow of the image (K^1 is a p-group)."""
    P1 = sylow_p(image, spec.p, budget)
    return preimage(spec, n, 1, P1.elements, budget)


# --------------------------------------------------------------------------
# conjugacy classes and class functions


@dataclass
class ClassTable:
    group: GroupTable
    classes: list[list[Codes]]
    class_of: dict[Codes, int]

    @property
    def reps(self) -> list[Codes]:
        return [c[0] for c in self.classes]

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    def __len__(self) -> int:
        return len(self.classes)


def conjugacy_classes(G: GroupTable, acting: Sequence[Codes] | None = None, domain: Iterable[Codes] | None = None) -> ClassTable:
    """Orbits of conjugation by the group generated by ``acting`` (default: G itself)."""
    R, n = G.spec, G.n
    gens = list(acting) if acting is not None else G.generators
    invs = [minv(R, n, g) for g in gens]
    dom = sorted(domain) if domain is not None else G.elements
    class_of: dict[Codes, int] = {}
    classes: list[list[Codes]] = []
    for x in dom:
        if x in class_of:
            continue
        idx = len(classes)
        orbit = [x]
        class_of[x] = idx
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for g, gi in zip(gens, invs):
                z = mmul(R, n, mmul(R, n, g, y), gi)
                if z not in class_of:
                    class_of[z] = idx
                    orbit.append(z)
                    queue.append(z)
        orbit.sort()
        classes.append(orbit)
    return ClassTable(G, classes, class_of)


def group_exponent(G: GroupTable, classes: ClassTable | None = None) -> int:
    elems = classes.reps if classes is not None else G.elements
    e = 1
    for g in elems:
        e = math.lcm(e, element_order(G.spec, G.n, g))
    return e


@dataclass
class ClassFunction:
    """Exact values on the class representatives of a :class:`ClassTable`."""

    table: ClassTable
    values: list[CycInt]

    @property
    def n(self) -> int:
        return self.values[0].n

    def degree(self) -> int:
        d = self.values[self.table.class_of[self.table.group.identity]].as_integer()
        assert d is not None
        return d

    def __call__(self, g: Codes) -> CycInt:
        return self.values[self.table.class_of[g]]

    def __mul__(self, other: "ClassFunction") -> "ClassFunction":
        return ClassFunction(self.table, [a * b for a, b in zip(self.values, other.values)])

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        return ClassFunction(self.table, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: "ClassFunction") -> "ClassFunction":
        return ClassFunction(self.table, [a - b for a, b in zip(self.values, other.values)])

    def scale(self, c: int) -> "ClassFunction":
        return ClassFunction(self.table, [a.scale(c) for a in self.values])

    def conj(self) -> "ClassFunction":
        return ClassFunction(self.table, [a.conj() for a in self.values])

    def key(self) -> tuple:
        return tuple(v.canonical() for v in self.values)

    def __eq__(self, other) -> bool:
        return isinstance(other, ClassFunction) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


def inner_product(f1: ClassFunction, f2: ClassFunction) -> Fraction:
    t = f1.table
    total = CycInt(f1.n)
    for size, a, b in zip(t.sizes, f1.values, f2.values):
        total = total + (a * b.conj()).scale(size)
    return exact_rational(total, t.group.order)


def phase_to_cyc(ph: Phase, n: int) -> CycInt:
    return CycInt.root(n, ph.exponent(n))


def left_coset_reps(G: GroupTable, H: GroupTable) -> list[Codes]:
    """Representatives t of the left cosets tH, canonical-first."""
    covered: set[Codes] = set()
    reps = []
    for g in G.elements:
        if g in covered:
            continue
        reps.append(g)
        for h in H.elements:
            covered.add(G.mul(g, h))
    return reps


def induce(
    table: ClassTable,
    in_h: Callable[[Codes], bool],
    theta: Callable[[Codes], CycInt],
    reps: Sequence[Codes],
    n: int,
) -> ClassFunction:
    """Ind_H^G theta at the class representatives, via left coset reps of G/H."""
    G = table.group
    R, dim = G.spec, G.n
    invs = [minv(R, dim, t) for t in reps]
    values = []
    for c in table.reps:
        acc = CycInt(n)
        for t, ti in zip(reps, invs):
            x = mmul(R, dim, mmul(R, dim, ti, c), t)
            if in_h(x):
                acc = acc + theta(x)
        values.append(acc)
    return ClassFunction(table, values)


def class_function_from(table: ClassTable, f: Callable[[Codes], CycInt]) -> ClassFunction:
    return ClassFunction(table, [f(c) for c in table.reps])


def restrict(f: Callable[[Codes], CycInt], table: ClassTable) -> ClassFunction:
    return class_function_from(table, f)


def is_class_function(table: ClassTable, f: Callable[[Codes], CycInt]) -> bool:
    for cls in table.classes:
        v = f(cls[0])
        if any(f(x) != v for x in cls[1:]):
            return False
    return True


# --------------------------------------------------------------------------
# extensions of linear characters


@dataclass
class ExtensionResult:
    extends: bool
    values: dict[Codes, Phase] | None = None
    commutator_order: int = 0
    meet_order: int = 0
    report: dict = field(default_factory=dict)


def check_invariant(G_gens: Sequence[Codes], N: Iterable[Codes], chi: Callable[[Codes], Phase], spec: RingSpec, n: int) -> bool:
    invs = [minv(spec, n, g) for g in G_gens]
    for x in N:
        v = chi(x)
        for g, gi in zip(G_gens, invs):
            if chi(mmul(spec, n, mmul(spec, n, g, x), gi)) != v:
                return False
    return True


def extension_exists(
    G: GroupTable,
    N: GroupTable,
    chi: Callable[[Codes], Phase],
    build: bool = True,
    commutator: GroupTable | None = None,
) -> ExtensionResult:
    """Whether the G-invariant linear character chi of the normal subgroup N extends to G.

    The test is triviality of chi on [G, G] meet N.  When it passes and
    ``build`` is set, an extension is built by successive cyclic extensions
    starting from N[G, G].
    """
    R, n = G.spec, G.n
    if not check_invariant(G.generators, N.elements, chi, R, n):
        raise NotInvariant("character is not invariant under the group")
    C = commutator if commutator is not None else commutator_subgroup(G)
    meet = [c for c in C.elements if c in N]
    ok = all(chi(c) == Phase.zero() for c in meet)
    res = ExtensionResult(ok, None, C.order, len(meet))
    if not ok or not build:
        return res
    # chi extended by 1 on [G, G]: walk coset representatives of C / (C meet N)
    covered: set[Codes] = set()
    reps = []
    for c in C.elements:
        if c in covered:
            continue
        reps.append(c)
        covered.update(mmul(R, n, m, c) for m in meet)
    base = [(x, chi(x)) for x in N.elements]
    vals: dict[Codes, Phase] = {}
    for c in reps:
        for x, v in base:
            vals[mmul(R, n, x, c)] = v
    for g in G.elements:
        if g in vals:
            continue
        k, y = 1, g
        while y not in vals:
            y = mmul(R, n, y, g)
            k += 1
        root = Phase(vals[y].num, vals[y].den * k)
        cur = list(vals.items())
        power = g
        step = root
        for _ in range(1, k):
            for t, v in cur:
                vals[mmul(R, n, t, power)] = v + step
            power = mmul(R, n, power, g)
            step = step + root
    res.values = vals
    return res


# --------------------------------------------------------------------------
# irreducible characters of small groups


def power_map(table: ClassTable, k: int) -> list[int]:
    G = table.group
    out = []
    for c in table.reps:
        x = G.identity
        for _ in range(k):
            x = G.mul(x, c)
        out.append(table.class_of[x])
    return out


def _class_structure_matrices(table: ClassTable):
    import numpy as np

    G = table.group
    k = len(table)
    A = np.zeros((k, k, k))
    for kk, z in enumerate(table.reps):
        for i, cls in enumerate(table.classes):
            for x in cls:
                y = G.mul(G.inv(x), z)
                A[i, table.class_of[y], kk] += 1
    return A


def _exact_from_numeric(table: ClassTable, values, n: int) -> ClassFunction:
    """Exact character from approximate values via eigenvalue multiplicities on cyclic subgroups."""
    import cmath

    G = table.group
    out = []
    for c in table.reps:
        o = element_order(G.spec, G.n, c)
        powers = [G.identity]
        for _ in range(o - 1):
            powers.append(G.mul(powers[-1], c))
        vals = [values[table.class_of[x]] for x in powers]
        v = CycInt(n)
        for t in range(o):
            m = sum(vals[k] * cmath.exp(-2j * cmath.pi * t * k / o) for k in range(o)) / o
            mi = round(m.real)
            if abs(m - mi) > 1e-6 or mi < 0:
                raise ArithmeticError("numeric character is not a genuine character")
            if mi:
                v = v + CycInt.root(n, (n // o) * t, mi)
        out.append(v)
    return ClassFunction(table, out)


def irreducible_characters(
    G: GroupTable, n: int | None = None, table: ClassTable | None = None, seed: int = 0
) -> tuple[list[ClassFunction], ClassTable, Fraction]:
    """All irreducible characters of a small group, with exact values.

    Simultaneous eigenvectors of the class structure matrices are found in
    floating point; each candidate is converted to exact cyclotomic values by
    rounding its (integer) eigenvalue multiplicities on cyclic subgroups, then
    accepted only after exact checks of norm and orthogonality.  Returns
    (characters, class table, coverage = sum of squared degrees / |G|).
    """
    import numpy as np

    table = table or conjugacy_classes(G)
    if n is None:
        n = group_exponent(G, table)
    k = len(table)
    A = _class_structure_matrices(table)
    sizes = np.array(table.sizes, dtype=float)
    ident = table.class_of[G.identity]
    rng = np.random.default_rng(seed)
    found: list[ClassFunction] = []
    for _attempt in range(8):
        coeffs = rng.standard_normal(k)
        T = np.tensordot(coeffs, A, axes=1)
        _, vecs = np.linalg.eig(T)
        cands = []
        for col in range(k):
            w = vecs[:, col]
            if abs(w[ident]) < 1e-9:
                continue
            w = w / w[ident]
            deg2 = G.order / float(np.sum(np.abs(w) ** 2 / sizes))
            deg = round(np.sqrt(deg2.real))
            cands.append(w * deg / sizes)
        found = []
        try:
            for vals in cands:
                chi = _exact_from_numeric(table, list(vals), n)
                if inner_product(chi, chi) != 1 or chi in found:
                    raise ArithmeticError("candidate is not irreducible")
                found.append(chi)
        except ArithmeticError:
            continue
        if len(found) == k and all(inner_product(a, b) == 0 for i, a in enumerate(found) for b in found[i + 1:]):
            break
    total = sum(chi.degree() ** 2 for chi in found)
    found.sort(key=lambda c: (c.degree(), c.key()))
    return found, table, Fraction(total, G.order)
