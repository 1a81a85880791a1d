from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stablesets.infinite_carriers import (SetSpecError, SumsetFailure, ap_block_densities,
                                          ap_example, banach_density, check_int_witness,
                                          classify_window, fg_genericity_checks, fg_inv, fg_mul,
                                          free_group_ball, generic_witness_on_window,
                                          greedy_pigeonhole, parity_example, parse_folner,
                                          parse_zset, reduce_word, starts_with_a,
                                          sumset_obstruction, sumset_search, window,
                                          window_coding_number, window_relation)
from stablesets.limits import LimitExceeded, Limits

words = st.text(alphabet="aAbB", max_size=10)


# -- set specs


@pytest.mark.parametrize("spec,inside,outside", [
    ("ap:3,4,3", [3, 7, 11], [15, -1, 4]),
    ("mod:3,1,2", [1, 2, 4, -1], [0, 3, -3]),
    ("halfline:-2", [-2, 0, 100], [-3]),
    ("below:0", [-1, -50], [0, 1]),
    ("finite:1,-4", [1, -4], [0]),
    ("union(mod:2,0; finite:1)", [0, 1, 2], [3]),
    ("union:mod:2,0;finite:1", [0, 1, 2], [3]),
    ("inter(mod:2,0; halfline:0)", [0, 2], [-2, 1]),
    ("compl(mod:2,0)", [1, -1], [0]),
    ("shift(finite:0,1, 5)", [5, 6], [0, 1]),
    ("all", [0, -7], []), ("empty", [], [0]),
])
def test_parse_zset(spec, inside, outside):
    S = parse_zset(spec)
    assert all(x in S for x in inside)
    assert not any(x in S for x in outside)


@pytest.mark.parametrize("spec", ["ap:1,0,3", "mod:0", "halfline:", "halfline:1,2",
                                  "nope:1", "compl(mod:2,0; mod:3,0)", "finite:a",
                                  "apexample:0", "shift(all)", "plain"])
def test_parse_zset_rejects(spec):
    with pytest.raises(SetSpecError):
        parse_zset(spec)


def test_parity_example():
    A = parity_example()
    assert [x for x in range(-6, 7) if x in A] == [-5, -3, -1, 0, 2, 4, 6]


def test_parse_folner():
    assert parse_folner("centered:10,3") == [(-5, 4), (-1, 1)]
    assert parse_folner("from:7:2") == [(7, 8)]
    assert parse_folner("intervals:0..3;-2..-1") == [(0, 3), (-2, -1)]
    for bad in ("centered:0", "intervals:3..1", "sideways:1", "from:x:2"):
        with pytest.raises(SetSpecError):
            parse_folner(bad)


# -- the separated progressions


def test_ap_blocks():
    ex = ap_example(6)
    assert ex.blocks[:3] == [(0,), (5, 7), (17, 20, 23)]
    assert ex.blocks[3] == tuple(range(40, 53, 4))
    assert ex.blocks[4] == tuple(range(78, 99, 5))
    assert ex.blocks[5] == tuple(range(135, 166, 6))
    assert ex.spacing_ok()


def test_ap_monotone_in_n():
    small, big = ap_example(4), ap_example(6)
    assert small.points <= big.points
    assert all((x in big) for x in small.members_in(-10, 200))


def test_ap_block_densities():
    dens = [d for _, _, d in ap_block_densities(ap_example(6))]
    assert dens == [Fraction(1), Fraction(2, 7), Fraction(3, 16), Fraction(4, 29),
                    Fraction(5, 46), Fraction(6, 67)]
    assert all(d <= Fraction(1, n) for n, d in enumerate(dens, 1))


def test_ap_window_coding():
    ex = ap_example(6)
    wc = window_coding_number((-10, 4000), ex, 3)
    assert wc.number == 3 and wc.saturated
    assert wc.witnesses[2] == ((-10, -8), (10, 15))
    assert wc.witnesses[3] == ((-10, -7, -4), (10, 30, 27))
    assert all(check_int_witness(ex, *wc.witnesses[k]) for k in (1, 2, 3))


# -- window coding


def test_even_integers_code_nothing_bigger_than_one():
    A = parse_zset("mod:2,0")
    for lo, hi in [(-5, 5), (0, 30), (-40, -10)]:
        assert window_coding_number((lo, hi), A, 3).number == 1


def test_half_line_codes_orders():
    A = parse_zset("halfline:0")
    wc = window_coding_number((-20, 20), A, 4)
    assert wc.number == 4
    assert check_int_witness(A, [0, -1, -2, -3], [0, 1, 2, 3])


def test_window_relation_uses_ambient_rule():
    A = parse_zset("halfline:10")
    R = window_relation(A, 0, 7)
    # 7 + 7 = 14 lies outside the window but in A
    assert R.holds(7, 7) and not R.holds(0, 0)
    assert window(A, 8, 12).elements() == [10, 11, 12]
    with pytest.raises(LimitExceeded):
        window_relation(A, 0, 99, Limits(matrix_cells=100))


# -- densities and classification


def test_density_even():
    rep = banach_density(parse_zset("mod:2,0"), parse_folner("centered:10,100,1000"))
    assert [d for _, d in rep.window_densities] == [Fraction(1, 2)] * 3
    assert rep.consistent_with_equal_density
    assert "consistent" in rep.caveat
    assert banach_density(parse_zset("empty"), [(0, 9)]).upper_estimate == 0


@given(st.integers(1, 7), st.data())
def test_periodic_density_exact(q, data):
    residues = data.draw(st.lists(st.integers(0, q - 1), unique=True))
    A = parse_zset("mod:" + ",".join(map(str, [q] + residues)))
    start = data.draw(st.integers(-50, 50))
    mult = data.draw(st.integers(1, 6))
    rep = banach_density(A, [(start, start + q * mult - 1)])
    assert rep.window_densities[0][1] == Fraction(len(residues), q)


def test_classify_examples():
    evens = classify_window(parse_zset("mod:2,0"), (-50, 50), 2, 2)
    assert evens.syndetic and not evens.thick and evens.supergeneric is False
    nat = classify_window(parse_zset("halfline:0"), (-50, 50), 10, 10)
    assert nat.thick and not nat.syndetic and nat.piecewise_syndetic
    ex = ap_example(6)
    c = classify_window(ex, (0, 165), 30, 10)
    assert not c.syndetic and c.largest_gap == 36
    full = classify_window(parse_zset("all"), (0, 20), 1, 5)
    assert full.syndetic and full.thick and full.supergeneric


# -- sumsets


def test_sumset_even():
    seq = list(range(1, 41))
    A = parse_zset("mod:2,0")
    res = sumset_search(A, [0, 1], seq, seq, 4)
    assert (res.g, res.B, res.C) == (0, (2, 6, 10, 14), (4, 8, 12, 16))
    assert len({(b + c) % 2 for b in res.B for c in res.C}) == 1
    assert all((b + c - res.g) in A for b in res.B for c in res.C)


def test_sumset_all_integers():
    seq = list(range(20))
    res = sumset_search(parse_zset("all"), [0], seq, seq, 3)
    assert res.g == 0 and len(res.B) == 3


def test_sumset_failures():
    with pytest.raises(SumsetFailure):
        sumset_search(parse_zset("mod:2,0"), [0], list(range(10)), list(range(10)), 2)
    with pytest.raises(ValueError):
        sumset_search(parse_zset("all"), [0], [1, 1], [2, 3], 1)


def test_parity_obstruction():
    out = sumset_obstruction(-100, 99, 50)
    assert out["ok"]
    assert out["threshold_identity"] and out["rectangles_bounded_by_t"]
    assert out["generic_with_F01"] and out["search_fails"]
    # a finite rectangle does exist, so only the infinite statement can hold
    (b1, b2), (c1, c2) = out["finite_rectangle_t0"]
    A = parity_example()
    assert all((x + y) in A for x in (b1, b2) for y in (c1, c2))
    assert generic_witness_on_window(parity_example(), [0, 1], -500, 500)
    assert not generic_witness_on_window(parity_example(), [0], -5, 5)


@given(st.integers(1, 25), st.integers(2, 4), st.randoms(use_true_random=False))
def test_greedy_pigeonhole_is_monochromatic(n, colours, rnd):
    table = {}

    def colour(i, j):
        return table.setdefault((i, j), rnd.randrange(colours))

    recs = greedy_pigeonhole(n, colour)
    idx = [i for i, _ in recs]
    assert idx == sorted(idx)
    for k, (i, c) in enumerate(recs):
        for j, _ in recs[k + 1:]:
            assert colour(i, j) == c


# -- free group


@given(words, words, words)
def test_free_group_laws(u, v, w):
    u, v, w = reduce_word(u), reduce_word(v), reduce_word(w)
    assert fg_mul(fg_mul(u, v), w) == fg_mul(u, fg_mul(v, w))
    assert fg_mul(u, fg_inv(u)) == "" == fg_mul(fg_inv(u), u)
    assert reduce_word(u) == u


def test_reduce_word():
    assert reduce_word("aAbBa") == "a"
    with pytest.raises(ValueError):
        reduce_word("ax")


@pytest.mark.parametrize("r", range(0, 7))
def test_ball_sizes(r):
    ball = free_group_ball(r)
    assert len(ball) == 2 * 3 ** r - 1
    assert len(set(ball.elements)) == len(ball)
    assert all(reduce_word(w) == w and len(w) <= r for w in ball.elements)


def test_fg_cover_and_right_failure():
    out = fg_genericity_checks(6, (3, 4, 5))
    assert out["ball_size"] == 1457
    assert out["cover_ok"] and out["prefix_analysis_ok"]
    for rho in (3, 4, 5):
        r = out["right_failure"][rho]
        assert r["ok"] and r["witness"] == "A" * (rho + 1)


def test_fg_prefix_facts():
    for w in free_group_ball(5).elements:
        assert not (w.startswith("A") and w.startswith("bA"))
        assert (not starts_with_a(fg_mul("a", w))) == w.startswith("A")
        assert (not starts_with_a(fg_mul("aB", w))) == w.startswith("bA")
    with pytest.raises(ValueError):
        free_group_ball(13)
