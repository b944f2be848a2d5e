import itertools
from fractions import Fraction

import pytest

from chainrep.chain_ring import RingSpec
from chainrep.characters import KernelCharacter
from chainrep.cyclotomic import CycInt
from chainrep.group_engine import (
    BudgetExceeded,
    ClassFunction,
    GroupTable,
    NotInvariant,
    class_function_from,
    commutator,
    commutator_subgroup,
    congruence_kernel,
    conjugacy_classes,
    enumerate_group,
    extension_exists,
    gl_order,
    induce,
    inner_product,
    irreducible_characters,
    is_class_function,
    kernel_generators,
    left_coset_reps,
    phase_to_cyc,
    preimage,
    restrict,
    subgroup_closure,
    sylow_p,
)
from chainrep.matrix_algebra import RMatrix, identity_codes

from . import oracles


def R(name):
    return RingSpec.parse(name)


@pytest.mark.parametrize("name,order", [("z4", 96), ("f2t2", 96), ("z9", 3888), ("z2", 6), ("z3", 48)])
def test_enumerate_group(name, order):
    spec = R(name)
    G = enumerate_group(spec, 2)
    assert G.order == order == gl_order(spec, 2)
    assert set(G.elements) == set(oracles.gl_elements(spec, 2))
    assert G.elements == sorted(G.elements)


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        enumerate_group(R("z9"), 2, budget=100)


def test_subgroup_closure():
    spec = R("z27")
    assert subgroup_closure(spec, 2, [identity_codes(2)]).order == 1
    K = subgroup_closure(spec, 2, kernel_generators(spec, 2, 2))
    assert K.order == 3**4
    again = subgroup_closure(spec, 2, K.elements)
    assert again.same_elements(K)
    K1 = congruence_kernel(spec, 2, 1)
    assert K1.order == 9**4 and K.is_subgroup_of(K1)


def _naive_commutator_subgroup(H):
    seeds = {commutator(H.spec, H.n, a, b) for a in H.elements for b in H.elements}
    return subgroup_closure(H.spec, H.n, sorted(seeds)).elements


def test_commutator_subgroup_abelian_is_trivial():
    K = congruence_kernel(R("z4"), 2, 1)
    assert commutator_subgroup(K).order == 1


def test_commutator_subgroup_of_lifted_gl2f2():
    spec = R("z4")
    lifts = [g for g in itertools.product((0, 1), repeat=4) if spec.is_unit(oracles.det(spec, 2, g))]
    H = subgroup_closure(spec, 2, lifts)
    C = commutator_subgroup(H)
    assert set(C.elements) == set(_naive_commutator_subgroup(H))
    for h in H.generators:
        assert all(H.conj(h, c) in C for c in C.elements)


def test_commutator_subgroup_gl2z4():
    G = enumerate_group(R("z4"), 2)
    C = commutator_subgroup(G)
    assert set(C.elements) == set(_naive_commutator_subgroup(G))


def test_sylow():
    G = enumerate_group(R("z3"), 2)
    P = sylow_p(G, 3)
    assert P.order == 3
    P2 = sylow_p(G, 2)
    assert P2.order == 16
    K = congruence_kernel(R("z9"), 2, 1)
    assert sylow_p(K, 3).same_elements(K)
    G4 = enumerate_group(R("z4"), 2)
    assert sylow_p(G4, 2).order == 32 and sylow_p(G4, 3).order == 3


def test_extension_abelian_group():
    spec = R("z9")
    G = congruence_kernel(spec, 2, 1)
    N = subgroup_closure(spec, 2, kernel_generators(spec, 2, 1)[:2])
    chi = KernelCharacter(spec, 1, RMatrix.from_ints(spec.with_length(1), [[1, 2], [0, 1]]))
    assert N.order < G.order
    res = extension_exists(G, N, chi)
    assert res.extends and res.commutator_order == 1
    assert all(res.values[x] == chi(x) for x in N.elements)


def _stabilizer_and_char(name, rows):
    spec = R(name)
    chi = KernelCharacter(spec, 1, RMatrix.from_ints(spec.with_length(1), rows))
    from chainrep.characters import stabilizer_direct

    return spec, chi, stabilizer_direct(chi), congruence_kernel(spec, 2, 1)


@pytest.mark.parametrize("rows", [[[1, 1], [0, 1]], [[0, 1], [0, 0]], [[1, 0], [0, 0]]])
def test_extension_built_is_a_character(rows):
    spec, chi, S, K = _stabilizer_and_char("z4", rows)
    res = extension_exists(S, K, chi)
    assert res.extends and len(res.values) == S.order
    for k in K.elements:
        assert res.values[k] == chi(k)
    for a in S.elements:
        for b in S.generators:
            assert res.values[S.mul(a, b)] == res.values[a] + res.values[b]


def test_not_invariant_is_rejected():
    spec = R("z4")
    G = enumerate_group(spec, 2)
    K = congruence_kernel(spec, 2, 1)
    chi = KernelCharacter(spec, 1, RMatrix.from_ints(spec.with_length(1), [[0, 1], [0, 0]]))
    with pytest.raises(NotInvariant):
        extension_exists(G, K, chi)


def test_s3_characters():
    G = enumerate_group(R("z2"), 2)
    chars, table, coverage = irreducible_characters(G)
    assert sorted(c.degree() for c in chars) == [1, 1, 2]
    assert coverage == 1
    for a in chars:
        assert is_class_function(table, a)
        for b in chars:
            assert inner_product(a, b) == (1 if a == b else 0)


@pytest.mark.parametrize("name", ["z3", "z4", "f2t2"])
def test_degree_sum(name):
    G = enumerate_group(R(name), 2)
    chars, table, coverage = irreducible_characters(G)
    assert coverage == 1 and len(chars) == len(table)
    assert sum(c.degree() ** 2 for c in chars) == G.order


def test_class_count_matches_oracle():
    G = enumerate_group(R("z4"), 2)
    assert len(conjugacy_classes(G)) == oracles.class_count(R("z4"), 2)


def _trivial(n):
    return lambda x: CycInt.integer(n, 1)


def _double_cosets(G, H):
    seen, count = set(), 0
    for g in G.elements:
        if g in seen:
            continue
        count += 1
        for a in H.elements:
            for b in H.elements:
                seen.add(G.mul(G.mul(a, g), b))
    return count


def test_ind_trivial_norm_is_double_coset_count():
    spec = R("z4")
    G = enumerate_group(spec, 2)
    upper = [g for g in G.elements if spec.valuation(g[2]) >= 1]
    H = GroupTable(spec, 2, upper)
    table = conjugacy_classes(G)
    f = induce(table, lambda x: x in H, _trivial(4), left_coset_reps(G, H), 4)
    assert f.degree() == G.order // H.order
    assert inner_product(f, f) == _double_cosets(G, H)


def test_frobenius_reciprocity_and_stages():
    spec = R("z4")
    G = enumerate_group(spec, 2)
    K = congruence_kernel(spec, 2, 1)
    H = GroupTable(spec, 2, [g for g in G.elements if spec.valuation(g[2]) >= 1])
    chi = KernelCharacter(spec, 1, RMatrix.from_ints(spec.with_length(1), [[1, 1], [0, 0]]))
    theta = lambda x: phase_to_cyc(chi(x), 4)  # noqa: E731
    tG, tH = conjugacy_classes(G), conjugacy_classes(H)
    direct = induce(tG, lambda x: x in K, theta, left_coset_reps(G, K), 4)
    step = induce(tH, lambda x: x in K, theta, left_coset_reps(H, K), 4)
    staged = induce(tG, lambda x: x in H, step, left_coset_reps(G, H), 4)
    assert direct == staged
    tK = conjugacy_classes(K)
    theta_cf = class_function_from(tK, theta)
    for irr in irreducible_characters(G, 4, tG)[0]:
        assert inner_product(direct, irr) == inner_product(theta_cf, restrict(irr, tK))


def test_clifford_restriction_to_kernel():
    spec = R("z4")
    G = enumerate_group(spec, 2)
    K = congruence_kernel(spec, 2, 1)
    tK = conjugacy_classes(K)
    S = spec.with_length(1)
    kchars = {}
    for e in itertools.product(range(2), repeat=4):
        chi = KernelCharacter(spec, 1, RMatrix(S, 2, e))
        kchars[e] = class_function_from(tK, lambda x, c=chi: phase_to_cyc(c(x), 4))
    G1 = enumerate_group(S, 2)
    for irr in irreducible_characters(G, 4)[0]:
        res = restrict(irr, tK)
        mult = {e: inner_product(res, f) for e, f in kchars.items()}
        support = {e for e, m in mult.items() if m}
        e0 = min(support)
        orbit = {oracles.matmul(S, 2, oracles.matmul(S, 2, g, e0), oracles.inverse2(S, g)) for g in G1.elements}
        assert support == orbit
        assert len({mult[e] for e in support}) == 1
        assert isinstance(mult[e0], Fraction) and mult[e0].denominator == 1


def test_preimage_order():
    spec = R("z9")
    img = [g for g in enumerate_group(spec.with_length(1), 2).elements if g[2] == 0]
    P = preimage(spec, 2, 1, img)
    assert P.order == len(img) * 3**4


def test_class_function_arithmetic():
    G = enumerate_group(R("z2"), 2)
    table = conjugacy_classes(G)
    one = class_function_from(table, _trivial(1))
    assert isinstance(one, ClassFunction) and inner_product(one, one) == 1
    assert (one + one).degree() == 2 and (one * one) == one
