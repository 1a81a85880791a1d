import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import group_named, groups_and_masks
from stablesets import bits
from stablesets.group_core import build_group, subgroup_generated
from stablesets.limits import LimitExceeded, Limits
from stablesets.relations import (BipartiteRelation, CodingWitness, brute_force_coding,
                                  find_order_coding, left_coset_relation, order_coding_number,
                                  ramsey_bound, relation_from_set, sharp_relation,
                                  split_intersection_coding, stabilizer_family_matrix)


def ocn(G, A, k_max=4):
    return order_coding_number(relation_from_set(G, A), k_max).value


@st.composite
def relations(draw, max_u=5, max_v=5):
    u = draw(st.integers(1, max_u))
    v = draw(st.integers(1, max_v))
    rows = tuple(draw(st.integers(0, (1 << v) - 1)) for _ in range(u))
    return BipartiteRelation(u, v, rows)


# -- construction


def test_relation_from_set_examples(c6, s3):
    R = relation_from_set(c6, [0])
    assert R.to_matrix() == [[int((x + y) % 6 == 0) for y in range(6)] for x in range(6)]
    assert relation_from_set(c6, []).edge_count() == 0
    H = subgroup_generated(s3, [2])
    assert all(r.bit_count() == 2 for r in relation_from_set(s3, H.mask).rows)


def test_coset_relation_columns(s3):
    H = subgroup_generated(s3, [2])
    R = left_coset_relation(s3, H)
    assert all(R.column(y).bit_count() == 2 for y in range(6))
    assert order_coding_number(left_coset_relation(s3, s3.full_mask), 3).value == 1


def test_sharp_restricted_to_identity_column(s3):
    H = subgroup_generated(s3, [2])
    R = left_coset_relation(s3, H)
    S = sharp_relation(R, s3)
    n = s3.order
    for x in range(n):
        assert all(S.holds(x, y * n + 0) == R.holds(x, y) for y in range(n))


def test_sharp_of_abelian_subgroup_is_2_stable(c6):
    H = subgroup_generated(c6, [3])
    S = sharp_relation(left_coset_relation(c6, H), c6)
    assert find_order_coding(S, 2) is None


def test_relation_validation():
    with pytest.raises(ValueError):
        BipartiteRelation(2, 2, (1,))
    with pytest.raises(ValueError):
        BipartiteRelation(1, 2, (4,))


# -- coding search


def test_coding_examples(c6):
    assert find_order_coding(relation_from_set(c6, [0, 2, 4]), 2) is None
    R = relation_from_set(c6, [0, 1])
    w = find_order_coding(R, 2)
    assert w is not None and w.is_valid_for(R)
    assert CodingWitness((0, 5), (0, 1)).is_valid_for(R)
    assert ocn(c6, [0, 1]) == 2
    assert ocn(c6, [0, 3]) == 1
    assert ocn(c6, []) == 0


# values from brute_force_coding up to k=3; the k=4 column comes from the search
FROZEN = [
    ("cyclic:8", [0, 1, 2], 3), ("cyclic:8", [0, 1, 3], 2), ("sym:3", [0, 1], 1),
    ("sym:3", [1, 2, 3], 3), ("dihedral:4", [0, 1, 4], 3), ("cyclic:7", [0, 1, 2, 4], 3),
]


@pytest.mark.parametrize("spec,A,value", FROZEN)
def test_frozen_coding_numbers(spec, A, value):
    G = build_group(spec)
    R = relation_from_set(G, A)
    assert order_coding_number(R, 4).value == value
    assert brute_force_coding(R, value) is not None
    if value < 3:
        assert brute_force_coding(R, value + 1) is None


def test_k1_needs_an_edge():
    assert find_order_coding(BipartiteRelation(2, 2, (0, 0)), 1) is None
    assert find_order_coding(BipartiteRelation(2, 2, (0, 2)), 1) == CodingWitness((1,), (1,))


@given(relations(), st.integers(1, 3))
def test_search_matches_brute_force(R, k):
    assert find_order_coding(R, k) == brute_force_coding(R, k)


@given(relations(6, 6), st.integers(1, 4))
def test_witnesses_valid(R, k):
    w = find_order_coding(R, k)
    if w is not None:
        assert w.size == k and w.is_valid_for(R)
        assert find_order_coding(R, k, distinct=True) == w
        assert len(set(w.a_seq)) == k


@given(relations(), st.integers(1, 3))
def test_transpose_reverse_preserves_coding(R, k):
    # phi(a_i, b_j) iff i <= j  becomes  phi^T(b_{k-1-j}, a_{k-1-i}) iff i <= j
    w = find_order_coding(R, k)
    wt = find_order_coding(R.transpose(), k)
    assert (w is None) == (wt is None)
    if w is not None:
        assert CodingWitness(w.b_seq[::-1], w.a_seq[::-1]).is_valid_for(R.transpose())


def test_limits_refuse():
    R = BipartiteRelation(1, 1, (1,))
    with pytest.raises(LimitExceeded):
        order_coding_number(R, 9)
    with pytest.raises(LimitExceeded):
        relation_from_set(build_group("cyclic:6"), [0], Limits(matrix_cells=10))


# -- invariance of the coding number


@given(groups_and_masks(12), st.data())
def test_translation_invariance(gm, data):
    G, A = gm
    g = data.draw(st.integers(0, G.order - 1))
    base = ocn(G, A)
    assert ocn(G, G.left_mask(g, A)) == base
    assert ocn(G, G.right_mask(A, g)) == base


@given(groups_and_masks(12))
def test_inverse_invariance(gm):
    G, A = gm
    assert ocn(G, G.inverse_mask(A)) == ocn(G, A)


@given(groups_and_masks(12))
def test_complement_within_one(gm):
    G, A = gm
    assert abs(ocn(G, A) - ocn(G, G.full_mask & ~A)) <= 1


@pytest.mark.parametrize("name", ["C4", "C2^2", "C6", "S3"])
def test_translation_invariance_exhaustive(name):
    G = group_named(name)
    for A in range(1 << G.order):
        base = ocn(G, A)
        for g in range(G.order):
            assert ocn(G, G.left_mask(g, A)) == base
            assert ocn(G, G.right_mask(A, g)) == base


# -- intersections


@given(groups_and_masks(10), st.data())
def test_intersection_extraction(gm, data):
    G, A = gm
    B = data.draw(st.integers(0, G.full_mask))
    RA, RB = relation_from_set(G, A), relation_from_set(G, B)
    RI = relation_from_set(G, A & B)
    n = order_coding_number(RI, 5).value
    if n == 0:
        return
    w = find_order_coding(RI, n)
    which, sub = split_intersection_coding(RA, RB, w)
    assert sub.is_valid_for(RA if which == "A" else RB)
    m = sub.size
    # the monochromatic set is at least as large as the Ramsey bound promises
    assert n < ramsey_bound(m + 1)


def test_ramsey_bound_values():
    assert [ramsey_bound(m) for m in range(1, 6)] == [1, 2, 6, 20, 70]


def test_split_rejects_wrong_witness(c6):
    RA = relation_from_set(c6, [0])
    with pytest.raises(ValueError):
        split_intersection_coding(RA, RA, CodingWitness((0, 1), (0, 1)))


# -- the point stabiliser in Sym(5)


def test_stabilizer_family_orientation():
    fam = stabilizer_family_matrix(5)
    M = fam["matrix"]
    assert M == [[int(j <= i) for j in range(4)] for i in range(4)]
    assert fam["holds_iff_j_le_i"] and not fam["holds_iff_j_ge_i"]


def test_sym5_coset_relation_is_2_stable():
    G = build_group("sym:5")
    H = bits.from_indices(g for g, p in enumerate(G.labels) if p[0] == 0)
    R = left_coset_relation(G, H)
    assert order_coding_number(R, 3).value == 1


def test_sym4_sharp_codes_size_3():
    G = build_group("sym:4")
    H = bits.from_indices(g for g, p in enumerate(G.labels) if p[0] == 0)
    S = sharp_relation(left_coset_relation(G, H), G)
    w = find_order_coding(S, 3)
    assert w is not None and w.is_valid_for(S)
