import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import BATTERY_24, brute_subgroups, group_named, groups_and_masks
from stablesets import bits
from stablesets.battery import fingerprint, groups_up_to
from stablesets.group_core import (GroupSpecError, InvalidTable, NotASubgroup, as_subgroup,
                                   build_group, center_mask, commutator_subgroup,
                                   conjugate_subgroup, cycles_to_perm, enumerate_subgroups,
                                   generate_mask, is_normal, left_cosets, normal_core,
                                   parse_cycles, read_cayley_file, right_cosets,
                                   subgroup_generated, validate_table, write_cayley_file)
from stablesets.limits import LimitExceeded, Limits, get_limits, parse_limits

# S3 labels are permutations in lexicographic order
T12, T23, T13 = 2, 1, 5


# -- construction


def test_cyclic_table(c6):
    assert c6.order == 6 and c6.is_abelian()
    assert all(c6.mul(a, b) == (a + b) % 6 for a in range(6) for b in range(6))


def test_sym3_nonabelian(s3):
    assert s3.order == 6 and not s3.is_abelian()


def test_klein_four():
    V = build_group("product:cyclic:2,cyclic:2")
    assert V.order == 4
    assert all(V.element_order(g) == 2 for g in range(1, 4))


@pytest.mark.parametrize("spec,order", [
    ("dihedral:5", 10), ("alt:4", 12), ("dicyclic:3", 12), ("semidirect:7,3,2", 21),
    ("product:(sym:3),(cyclic:2)", 12), ("perm:(0 1),(0 1 2 3)", 24), ("sym:1", 1),
])
def test_build_group_orders(spec, order):
    assert build_group(spec).order == order


@pytest.mark.parametrize("spec", ["cyclic", "cyclic:x", "nope:3", "product:cyclic:2",
                                  "semidirect:4,2", "perm:", "dihedral:1,2"])
def test_build_group_rejects(spec):
    with pytest.raises(GroupSpecError):
        build_group(spec)


def test_quaternion_has_one_involution():
    Q = build_group("dicyclic:2")
    assert sum(1 for g in range(8) if Q.element_order(g) == 2) == 1


@pytest.mark.parametrize("name", BATTERY_24)
def test_latin_square_and_associativity(name):
    G = group_named(name)
    n = G.order
    full = set(range(n))
    for g in range(n):
        assert set(G.table[g]) == full
        assert {G.table[h][g] for h in range(n)} == full
    assert all(G.table[0][g] == g == G.table[g][0] for g in range(n))
    t = G.table
    for a, b, c in itertools.product(range(n), repeat=3):
        assert t[t[a][b]][c] == t[a][t[b][c]]


def test_validate_table_catches_bad_tables():
    with pytest.raises(InvalidTable):
        validate_table([[0, 1], [1, 1]])
    # a Latin square with identity that is not associative
    bad = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1],
           [4, 3, 1, 2, 0]]
    with pytest.raises(InvalidTable):
        validate_table(bad)


def test_cayley_roundtrip(tmp_path, s3):
    p = tmp_path / "s3.txt"
    write_cayley_file(s3, p)
    G = read_cayley_file(p)
    assert [list(r) for r in G.table] == [list(r) for r in s3.table]
    assert build_group(f"cayley:{p}").order == 6


def test_cayley_file_errors(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("order 2\n0 1\n")
    with pytest.raises(GroupSpecError):
        read_cayley_file(p)
    p.write_text("size 2\n0 1\n1 0\n")
    with pytest.raises(GroupSpecError):
        read_cayley_file(p)


def test_parse_cycles():
    assert parse_cycles("(0 1 2)(3 4)") == [[0, 1, 2], [3, 4]]
    assert cycles_to_perm([[0, 1, 2]], 4) == (1, 2, 0, 3)
    with pytest.raises(GroupSpecError):
        parse_cycles("(0 0)")
    with pytest.raises(GroupSpecError):
        parse_cycles("0 1")


def test_fingerprints_separate_battery():
    prints = [fingerprint(G) for _, G in groups_up_to(24)]
    assert len(set(prints)) == len(prints)


def test_battery_covers_every_class_up_to_16():
    # number of isomorphism classes of each order 1..16
    classes = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14]
    counts = [0] * 16
    for _, G in groups_up_to(16):
        counts[G.order - 1] += 1
    assert counts == classes


# -- subgroups


def test_generated_subgroups(c6, s3):
    assert generate_mask(c6, [2]) == bits.from_indices([0, 2, 4])
    assert generate_mask(s3, [T12, T13]) == s3.full_mask
    assert generate_mask(s3, []) == 1


def test_normal_core_examples(c6, s3):
    H = subgroup_generated(s3, [T12])
    assert normal_core(s3, H).mask == 1
    K = subgroup_generated(c6, [3])
    assert normal_core(c6, K).mask == K.mask
    A3 = subgroup_generated(s3, [3])
    assert normal_core(s3, A3).mask == A3.mask


def test_subgroup_lists(c6, s3):
    subs = enumerate_subgroups(c6)
    assert [H.members() for H in subs] == [[0], [0, 3], [0, 2, 4], list(range(6))]
    assert len(enumerate_subgroups(s3)) == 6
    assert len(enumerate_subgroups(build_group("cyclic:1"))) == 1


def test_cosets_and_conjugates(c6, s3):
    H = as_subgroup(c6, [0, 3])
    assert [c.members() for c in left_cosets(c6, H)] == [[0, 3], [1, 4], [2, 5]]
    K = subgroup_generated(s3, [T12])
    assert conjugate_subgroup(s3, K, T13).mask == bits.from_indices([0, T23])
    assert conjugate_subgroup(s3, K, T12).mask == K.mask


def test_as_subgroup_rejects(c6):
    with pytest.raises(NotASubgroup):
        as_subgroup(c6, [0, 1])


# subgroup counts from the brute-force oracle (order <= 8) and standard tables
SUBGROUP_COUNTS = {
    "C1": 1, "C2": 2, "C4": 3, "C2^2": 5, "C6": 4, "S3": 6, "C8": 4, "C4xC2": 8,
    "C2^3": 16, "D4": 10, "Q8": 6, "C3^2": 6, "D5": 8, "C12": 6, "C6xC2": 10, "D6": 16,
    "A4": 10, "Dic3": 8, "C16": 5, "C8xC2": 11, "C4^2": 15, "C4xC2^2": 27, "C2^4": 67,
    "D8": 19, "Q16": 11, "SD16": 15, "M16": 11, "C4:C4": 15, "D4xC2": 35, "Q8xC2": 19,
    "(C4xC2):C2": 23, "Pauli": 23, "D9": 16, "D10": 22, "C7:C3": 10, "S4": 30,
    "SL23": 15, "D12": 34,
}


@pytest.mark.parametrize("name,count", sorted(SUBGROUP_COUNTS.items()))
def test_subgroup_counts(name, count):
    assert len(enumerate_subgroups(group_named(name))) == count


@pytest.mark.parametrize("name", [n for n in BATTERY_24 if group_named(n).order <= 8])
def test_enumeration_matches_brute_force(name):
    G = group_named(name)
    assert sorted(H.mask for H in enumerate_subgroups(G)) == brute_subgroups(G)


@pytest.mark.parametrize("name", BATTERY_24)
def test_normal_core_is_largest_normal_subgroup(name):
    G = group_named(name)
    subs = enumerate_subgroups(G)
    normals = [N.mask for N in subs if is_normal(G, N)]
    for H in subs:
        inside = [N for N in normals if N & ~H.mask == 0]
        largest = max(inside, key=lambda m: m.bit_count())
        assert normal_core(G, H).mask == largest
        naive = G.full_mask
        for a in range(G.order):
            naive &= G.conj_mask(a, H.mask)
        assert naive == largest


@pytest.mark.parametrize("name", BATTERY_24)
def test_cosets_partition(name):
    G = group_named(name)
    for H in enumerate_subgroups(G):
        for cos in (left_cosets(G, H), right_cosets(G, H)):
            assert len(cos) == H.index
            assert all(len(c) == len(H) for c in cos)
            union = 0
            for c in cos:
                assert union & c.mask == 0
                union |= c.mask
            assert union == G.full_mask


def test_center_and_derived(s3):
    assert center_mask(s3) == 1
    assert commutator_subgroup(s3).mask == generate_mask(s3, [3])
    assert center_mask(build_group("dicyclic:2")).bit_count() == 2


# -- properties


@given(groups_and_masks(16), st.data())
def test_translation_laws(gm, data):
    G, A = gm
    g = data.draw(st.integers(0, G.order - 1))
    h = data.draw(st.integers(0, G.order - 1))
    assert G.left_mask(g, G.left_mask(h, A)) == G.left_mask(G.mul(g, h), A)
    assert G.right_mask(G.right_mask(A, g), h) == G.right_mask(A, G.mul(g, h))
    assert G.inverse_mask(G.inverse_mask(A)) == A
    assert G.inverse_mask(G.left_mask(g, A)) == G.right_mask(G.inverse_mask(A), G.inv(g))


@given(groups_and_masks(12))
def test_generated_is_smallest_subgroup(gm):
    G, A = gm
    H = subgroup_generated(G, A)
    assert H.mask & A == A
    for K in enumerate_subgroups(G):
        if K.mask & A == A:
            assert H.mask & ~K.mask == 0


# -- limits


def test_limits_parse_and_check():
    L = parse_limits("max_order=10, max_k=3")
    assert L.max_order == 10 and L.max_k == 3
    with pytest.raises(ValueError):
        parse_limits("bogus=1")
    with pytest.raises(LimitExceeded):
        L.check("max_order", 11)
    L.check("max_order", 10)


def test_limits_env(monkeypatch):
    monkeypatch.setenv("STABLESETS_LIMITS", "max_order=5")
    assert get_limits().max_order == 5
    with pytest.raises(LimitExceeded):
        build_group("cyclic:6", get_limits())
    monkeypatch.delenv("STABLESETS_LIMITS")
    assert get_limits() == Limits()
