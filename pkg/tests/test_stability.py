import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chainrep.chain_ring import ExtensionSpec, RingSpec
from chainrep.matrix_algebra import RMatrix, conjugate, mat_reduce
from chainrep.stability import (
    NOT_STABLE,
    STABLE,
    UNKNOWN,
    is_stable,
    matrix_classes,
    stable_orbit_representatives,
    verify_certificate,
)

from . import oracles


def R(name):
    return RingSpec.parse(name)


def matrices(name, n=2):
    spec = R(name)
    return st.tuples(*[st.integers(0, spec.size - 1)] * (n * n)).map(lambda e: RMatrix(spec, n, e))


def test_regular_not_stable():
    M = RMatrix.from_ints(R("z4"), [[1, 1], [0, 3]])
    cert = is_stable(M)
    assert cert.verdict == NOT_STABLE and cert.method == "exhaustive"
    assert cert.domain["statesVisited"] > 0
    assert not verify_certificate(M, cert)


def test_scalar_plus_pi_scalar():
    Z9 = R("z9")
    M = RMatrix.scalar(Z9, 2, Z9.add(8, 3))
    cert = is_stable(M)
    assert cert.verdict == STABLE and cert.method == "constructive"
    assert cert.conjugator == RMatrix.identity(Z9, 2)
    assert verify_certificate(M, cert)


def test_semisimple_plus_central_nilpotent():
    # diagonal Teichmueller s with a nilpotent n in the center of its commutant (block scalars)
    Z27 = R("z27")
    s = RMatrix.from_ints(Z27, [[1, 0, 0], [0, 1, 0], [0, 0, 26]])
    n = RMatrix.from_ints(Z27, [[3, 0, 0], [0, 3, 0], [0, 0, 9]])
    cert = is_stable(s + n)
    assert cert.stable and verify_certificate(s + n, cert)


def test_budget_surfaces_as_unknown():
    M = RMatrix.from_ints(R("z8"), [[1, 1], [0, 3]])
    cert = is_stable(M, budget=3)
    assert cert.verdict == UNKNOWN


@pytest.mark.parametrize("name,step", [("z4", 1), ("f2t2", 1), ("z9", 5)])
def test_matches_brute_force_orbits(name, step):
    spec = R(name)
    stable = oracles.stable_set2(spec)
    for e in itertools.islice(itertools.product(range(spec.size), repeat=4), 0, None, step):
        if oracles.residue_splits2(spec, e):
            assert is_stable(RMatrix(spec, 2, e)).stable == (e in stable), e


def test_nonsplit_residue_is_decided_over_extension():
    M = RMatrix.from_ints(R("z9"), [[0, 8], [1, 0]])
    cert = is_stable(M)
    assert cert.stable and cert.degree == 2
    assert verify_certificate(M, cert)


def test_scalars_are_stable():
    spec = R("z9")
    reps = stable_orbit_representatives(spec, 1)
    assert len(reps) == spec.size


def test_field_case_every_class_is_stable():
    F2 = R("z2")
    reps = stable_orbit_representatives(F2, 2)
    all_mats = list(itertools.product(range(2), repeat=4))
    assert len(reps) == oracles.orbit_count(F2, 2, all_mats) == len(matrix_classes(F2, 2))


def test_z4_representatives_exclude_regular_not_stable():
    spec = R("z4")
    reps = stable_orbit_representatives(spec, 2)
    stable = oracles.stable_set2(spec)
    assert all(M.entries in stable for M in reps if oracles.residue_splits2(spec, M.entries))
    bad = (1, 1, 0, 3)
    for M in reps:
        assert not any(oracles.matmul(spec, 2, oracles.matmul(spec, 2, g, M.entries), oracles.inverse2(spec, g)) == bad
                       for g in oracles.gl_elements(spec, 2))
    # pairwise non-conjugate
    assert oracles.orbit_count(spec, 2, [M.entries for M in reps]) == len(reps)


@pytest.mark.parametrize("name", ["z4", "z9"])
def test_reduction_of_stable_is_stable(name):
    spec = R(name)
    for M in stable_orbit_representatives(spec, 2):
        assert is_stable(mat_reduce(M, spec.r - 1)).stable


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["z4", "z9", "f2t2", "z8"]), st.data())
def test_conjugation_invariance(name, data):
    M = data.draw(matrices(name))
    g = data.draw(matrices(name).filter(lambda x: x.is_invertible()))
    a, b = is_stable(M), is_stable(conjugate(g, M))
    assert a.verdict == b.verdict


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["z4", "z9", "f3t2", "z8"]), st.data())
def test_positive_certificates_reverify(name, data):
    M = data.draw(matrices(name))
    cert = is_stable(M)
    if cert.stable:
        assert verify_certificate(M, cert)
        assert cert.to_json()["witness"]["degree"] == cert.degree


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["z4", "z9"]), st.data())
def test_base_change(name, data):
    M = data.draw(matrices(name))
    if not is_stable(M).stable:
        return
    ext = ExtensionSpec(M.spec, 2)
    Me = RMatrix(ext.ring, 2, tuple(ext.embed(a) for a in M.entries))
    assert is_stable(Me).stable
