import pytest
from hypothesis import given

from conftest import BATTERY_12, BATTERY_24, group_named, groups_and_masks
from stablesets import bits
from stablesets.group_core import enumerate_subgroups, subgroup_generated
from stablesets.setalg import (NotInvariant, algebra_generated, bsharp, connected_component,
                               coset_algebra, power_set_algebra, trivial_algebra)
from stablesets.types_flow import (TypePoint, coset_ellis_check, dp_set, dp_star_set,
                                   ellis_associativity_check, ellis_idempotent_check,
                                   ellis_semigroup, generic_minimal_check, generic_types,
                                   homogeneous_decomposition, is_ultrafilter,
                                   local_components_check, minimal_subflows, orbits,
                                   phi_isomorphism_check, phi_maps, profinite_completion,
                                   stab_type, stab_type_by_cosets, star, star_by_definition,
                                   star_table, stone_flow, symmetry_check, wap_note)


def coset_algebras(names):
    for name in names:
        G = group_named(name)
        for H in enumerate_subgroups(G):
            yield name, G, H, coset_algebra(G, H)


# -- the Stone flow


def test_stone_examples(c6, s3):
    S = stone_flow(coset_algebra(c6, [0, 3]))
    assert S.size == 3
    assert [S.act(1, p) for p in range(3)] == [1, 2, 0]
    P = stone_flow(power_set_algebra(s3))
    assert P.size == 6
    assert all(stab_type(P, p).mask == 1 for p in range(6))
    T = stone_flow(trivial_algebra(s3))
    assert T.size == 1 and all(T.act(g, 0) == 0 for g in range(6))


def test_stone_needs_left_invariance(c6):
    with pytest.raises(NotInvariant):
        stone_flow(algebra_generated(c6, [[0, 1]], "none"))


def test_ultrafilters_are_atoms(c6):
    B = coset_algebra(c6, [0, 3])
    # the members containing atom 1
    up = [A for A in B.members() if A & B.atoms[1]]
    assert is_ultrafilter(B, up)
    assert not is_ultrafilter(B, [B.atoms[0], B.atoms[1]])
    assert TypePoint(1) == TypePoint(1)


# -- type definitions


def test_dp_principal(s3):
    B = power_set_algebra(s3)
    S = stone_flow(B)
    for g in range(6):
        p = B.atom_of[g]
        for A in (0b101001, 0b000110, s3.full_mask, 0):
            assert dp_set(S, p, A).mask == s3.right_mask(A, s3.inv(g))
            assert dp_star_set(S, p, A).mask == s3.left_mask(s3.inv(g), A)


def test_dp_star_lies_in_b(s3):
    H = subgroup_generated(s3, [2])
    B = coset_algebra(s3, H)
    Ss = stone_flow(bsharp(B))
    for p in range(Ss.size):
        for A in B.members():
            dp_star_set(Ss, p, A, B)


def test_star_principal_laws(s3):
    H = subgroup_generated(s3, [2])
    Bs = bsharp(coset_algebra(s3, H))
    Ss = stone_flow(Bs)
    for g in range(6):
        pg = Bs.atom_of[g]
        for p in range(Ss.size):
            assert star(Ss, pg, p) == Ss.act(g, p)
            assert star(Ss, p, pg) == Bs.right_action(g)[p]


@pytest.mark.parametrize("name", BATTERY_12)
def test_star_two_routes(name):
    G = group_named(name)
    for H in enumerate_subgroups(G):
        Ss = stone_flow(bsharp(coset_algebra(G, H)))
        tab = star_table(Ss)
        n = Ss.size
        for p in range(n):
            for q in range(n):
                assert tab[p][q] == star_by_definition(Ss, p, q)
        idem = [u for u in range(n) if tab[u][u] == u]
        assert len(idem) == 1
        assert all(tab[p][idem[0]] == p for p in range(n))


def test_star_is_group_law_on_power_set(c6):
    Ss = stone_flow(power_set_algebra(c6))
    for a in range(6):
        for b in range(6):
            assert star(Ss, a, b) == (a + b) % 6


# -- Ellis semigroup


def test_ellis_examples(s3, c6):
    H = subgroup_generated(s3, [2])
    E = ellis_semigroup(stone_flow(coset_algebra(s3, H)))
    assert E.order == 6 and E.is_group()
    N = subgroup_generated(s3, [3])
    assert ellis_semigroup(stone_flow(coset_algebra(s3, N))).order == 2
    assert ellis_semigroup(stone_flow(trivial_algebra(c6))).order == 1


@pytest.mark.parametrize("name", BATTERY_24)
def test_ellis_is_quotient_by_core(name):
    G = group_named(name)
    for H in enumerate_subgroups(G):
        assert coset_ellis_check(G, H).passed


@pytest.mark.parametrize("name", BATTERY_12)
def test_ellis_two_routes(name):
    # finite flows: the closure under composition is just the set of translations
    G = group_named(name)
    for H in enumerate_subgroups(G):
        S = stone_flow(coset_algebra(G, H))
        E = ellis_semigroup(S)
        assert set(E.elements) == {S.action[g] for g in range(G.order)}
        assert ellis_idempotent_check(E).passed
        assert ellis_associativity_check(E)
        u = E.identity
        assert all(E.compose(f, u) == E.compose(u, f) for f in range(E.order))


# -- Phi and symmetry


def test_phi_examples(s3, c6):
    H = subgroup_generated(s3, [2])
    data = phi_maps(coset_algebra(s3, H))
    assert len(data["maps"]) == 6 and len(set(data["maps"])) == 6
    P = phi_maps(power_set_algebra(c6))
    assert len(set(P["maps"])) == 6
    assert phi_isomorphism_check(trivial_algebra(c6)).passed


@pytest.mark.parametrize("name", [n for n in BATTERY_24 if group_named(n).order <= 16])
def test_phi_on_all_left_invariant_algebras(name):
    # every left-invariant algebra on a finite group is a coset algebra
    G = group_named(name)
    for H in enumerate_subgroups(G):
        B = coset_algebra(G, H)
        if len(B.atoms) <= 64:
            res = phi_isomorphism_check(B)
            assert res.passed, res.counterexample


def test_symmetry_example(c6):
    res = symmetry_check(coset_algebra(c6, [0, 3]))
    assert res.passed and res.details["members"] == 8


@given(groups_and_masks(12))
def test_symmetry_single_generator(gm):
    G, A = gm
    B = algebra_generated(G, [A], "left")
    members = list(B.members()) if len(B.atoms) <= 8 else [A, G.full_mask & ~A]
    assert symmetry_check(B, members).passed


# -- generic types and stabilisers


@pytest.mark.parametrize("name", BATTERY_12)
def test_generic_types_form_the_minimal_flow(name):
    for _, G, H, B in coset_algebras([name]):
        S = stone_flow(B)
        assert generic_minimal_check(S).passed
        assert minimal_subflows(S) == orbits(S) == [list(range(S.size))]


def test_generic_trivial(c6):
    assert generic_types(stone_flow(trivial_algebra(c6))) == [0]


@pytest.mark.parametrize("name", BATTERY_24)
def test_type_stabilisers(name):
    G = group_named(name)
    for H in enumerate_subgroups(G):
        B = coset_algebra(G, H)
        S = stone_flow(B)
        for p in range(S.size):
            a = bits.lowest(B.atoms[p])
            assert stab_type(S, p).mask == G.conj_mask(a, H.mask)
            assert stab_type_by_cosets(S, p).mask == stab_type(S, p).mask
        Bs = bsharp(B)
        K = connected_component(Bs).mask
        Ss = stone_flow(Bs)
        assert all(stab_type(Ss, p).mask == K for p in generic_types(Ss))


def test_homogeneous_example(s3):
    H = subgroup_generated(s3, [2])
    hd = homogeneous_decomposition(coset_algebra(s3, H))
    assert hd["ok"] and hd["sharp_types"] == 6 and hd["cosets"] == 3
    assert hd["K_elements"] == H.members()
    Bs = bsharp(coset_algebra(s3, H))
    assert homogeneous_decomposition(Bs)["K"] == [0]


@pytest.mark.parametrize("name", BATTERY_12)
def test_homogeneous_decomposition(name):
    for _, G, H, B in coset_algebras([name]):
        assert homogeneous_decomposition(B)["ok"]


def test_profinite_examples(c6, s3):
    B = algebra_generated(c6, [[0, 2, 4]], "left")
    assert profinite_completion(B)["index"] == 2
    assert profinite_completion(power_set_algebra(s3))["index"] == 6
    H = subgroup_generated(s3, [2])
    pc = profinite_completion(bsharp(coset_algebra(s3, H)))
    assert pc["ok"] and pc["index"] == 6 and pc["is_group"]


@pytest.mark.parametrize("name", BATTERY_12)
def test_profinite_and_local(name):
    for _, G, H, B in coset_algebras([name]):
        assert profinite_completion(B)["ok"]
        assert profinite_completion(bsharp(B))["ok"]
        assert local_components_check(B).passed


def test_wap_vacuous():
    assert wap_note().passed
