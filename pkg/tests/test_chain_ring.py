import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chainrep.chain_ring import (
    ExtensionSpec,
    NonUnit,
    Phase,
    RingElement,
    RingSpec,
    SpecMismatch,
    embed,
    inv,
    psi_level,
    reduce,
    section,
    valuation,
)

SMALL = ["z4", "z8", "z9", "z27", "gr4_2", "gr9_2", "f2t2", "f2t3", "f3t2", "f4t2"]


def ring(name):
    return RingSpec.parse(name)


def el(R, k):
    return RingElement.from_int(R, k)


@pytest.mark.parametrize("name", SMALL)
def test_cardinality_and_uniformizer(name):
    R = ring(name)
    assert R.size == R.q**R.r
    assert R.pi_power(R.r) == 0
    assert R.pi_power(R.r - 1) != 0


def test_integer_examples():
    Z9 = ring("z9")
    assert (el(Z9, 5) + el(Z9, 7)).code == el(Z9, 3).code
    assert (el(Z9, 3) * el(Z9, 3)).code == 0
    assert inv(el(Z9, 2)).code == el(Z9, 5).code
    with pytest.raises(NonUnit):
        inv(el(Z9, 3))
    assert valuation(el(ring("z27"), 18)) == 2
    assert valuation(el(Z9, 0)) == 2
    assert reduce(el(Z9, 8), 1).code == el(ring("z3"), 2).code


def test_galois_ring_defining_relation():
    R = ring("gr9_2")
    x = R.decode([[0, 1]])
    assert R.mul(x, x) == R.from_int(8)


def test_equal_characteristic_is_characteristic_p():
    R = ring("f2t2")
    a = R.decode([[1], [1]])
    assert R.add(a, a) == 0


def test_spec_mismatch():
    with pytest.raises(SpecMismatch):
        el(ring("z9"), 1) + el(ring("z27"), 1)


def test_teichmuller_values():
    assert ring("z9").teichmuller(2) == 8
    assert pow(8, 2, 9) == 1
    for name in SMALL:
        R = ring(name)
        assert R.teichmuller(0) == 0
        assert R.teichmuller(1) == 1


@pytest.mark.parametrize("name", SMALL)
def test_teichmuller_multiplicative_and_fixed(name):
    R = ring(name)
    F = R.field
    image = {R.teichmuller(c) for c in range(R.q)}
    assert len(image) == R.q
    for a, b in itertools.product(range(R.q), repeat=2):
        assert R.teichmuller(F.mul(a, b)) == R.mul(R.teichmuller(a), R.teichmuller(b))
    for t in image:
        assert R.pow(t, R.q) == t
        assert R.mul(t, t) in image


@pytest.mark.parametrize("name", SMALL)
def test_digit_recomposition(name):
    R = ring(name)
    for a in R.elements():
        ds = R.digits(a)
        total = 0
        for i, d in enumerate(ds):
            total = R.add(total, R.mul(R.teichmuller(d), R.pi_power(i)))
        assert total == a
        assert R.from_digits(ds) == a
        assert R.is_unit(a) == (ds[0] != 0)


@pytest.mark.parametrize("name", [n for n in SMALL if ring(n).size <= 81])
def test_reduction_is_surjective_homomorphism(name):
    R = ring(name)
    for s in range(1, R.r + 1):
        S = R.with_length(s)
        images = set()
        for a in R.elements():
            images.add(R.reduce_to(a, s))
            # kernel is pi^s O_r
            assert (R.reduce_to(a, s) == 0) == (R.valuation(a) >= s)
        assert images == set(S.elements())
        for a, b in itertools.product(R.elements(), repeat=2):
            assert R.reduce_to(R.mul(a, b), s) == S.mul(R.reduce_to(a, s), R.reduce_to(b, s))
            assert R.reduce_to(R.add(a, b), s) == S.add(R.reduce_to(a, s), R.reduce_to(b, s))


@pytest.mark.parametrize("name", SMALL)
def test_section_properties(name):
    R = ring(name)
    for s in range(1, R.r + 1):
        S = R.with_length(s)
        for a in S.elements():
            assert R.reduce_to(R.section_from(a, S), s) == a
        for a in R.elements():
            back = R.section_from(R.reduce_to(a, s), S)
            assert (back == a) == all(d == 0 for d in R.digits(a)[s:])


def test_section_example():
    Z3 = ring("z3")
    assert section(RingElement(Z3, 2), 2).code == 8
    assert section(RingElement(Z3, 0), 2).code == 0
    with pytest.raises(ValueError):
        section(RingElement(ring("z9"), 1), 1)


@pytest.mark.parametrize("name,d", [("z9", 2), ("f2t2", 2), ("z4", 3)])
def test_extension_embedding(name, d):
    R = ring(name)
    ext = ExtensionSpec(R, d)
    E = ext.ring
    assert E.q == R.q**d and E.r == R.r
    assert ext.embed(0) == 0 and ext.embed(1) == 1
    for a, b in itertools.product(R.elements(), repeat=2):
        assert ext.embed(R.add(a, b)) == E.add(ext.embed(a), ext.embed(b))
        assert ext.embed(R.mul(a, b)) == E.mul(ext.embed(a), ext.embed(b))
    for c in range(R.q):
        assert ext.embed(R.teichmuller(c)) == E.teichmuller(ext.embed_residue(c))
    for a in R.elements():
        assert E.reduce_to(ext.embed(a), 1) == ext.embed_residue(R.reduce_to(a, 1))
        assert ext.restrict(ext.embed(a)) == a
    assert embed(RingElement(R, 1), ext).code == 1


def test_psi_levels():
    Z9 = ring("z9")
    assert psi_level(Z9, 1, 2) == Phase(1, 9)
    assert psi_level(Z9, 3, 2) == Phase(1, 3)
    assert psi_level(Z9, 3, 1) == Phase.zero()


@pytest.mark.parametrize("name", ["z9", "gr9_2", "f3t2", "f4t2"])
def test_psi_is_additive_and_primitive(name):
    R = ring(name)
    for a, b in itertools.product(R.elements(), repeat=2):
        assert psi_level(R, R.add(a, b), R.r) == psi_level(R, a, R.r) + psi_level(R, b, R.r)
    # nontrivial on pi^{r-1} O, so the pairing (a, b) -> psi(ab) is perfect
    assert any(psi_level(R, a, R.r) != Phase.zero() for a in R.elements() if R.valuation(a) >= R.r - 1)


@pytest.mark.parametrize("name", ["z9", "f3t2", "gr4_2"])
def test_json_round_trip(name):
    R = ring(name)
    assert RingSpec.from_json(R.to_json()) is R
    for a in R.elements():
        assert R.decode(R.encode(a)) == a


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_ring_axioms(name, data):
    R = ring(name)
    a, b, c = (data.draw(st.integers(0, R.size - 1)) for _ in range(3))
    assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))
    assert R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c))
    assert R.add(a, R.neg(a)) == 0
    if R.is_unit(a):
        assert R.mul(a, R.inv(a)) == 1
    assert R.valuation(R.mul(a, b)) == min(R.r, R.valuation(a) + R.valuation(b))
