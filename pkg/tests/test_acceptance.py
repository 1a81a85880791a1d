"""The twelve acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL criterion N`` line (visible with
or without ``-s``) and enforces the 60 second budget per suite.
"""
import time

import pytest

from stablesets.suites import run_suite

BUDGET = 60.0


@pytest.fixture
def report(capsys):
    def emit(number: int, label: str, ok: bool, seconds: float, extra: str = "") -> None:
        word = "PASS" if ok else "FAIL"
        with capsys.disabled():
            print(f"\n{word} criterion {number}: {label} ({seconds:.1f} s){extra}")
    return emit


def timed(name: str, **kw):
    start = time.perf_counter()
    res = run_suite(name, **kw)
    return res, time.perf_counter() - start


def finish(report, number, label, res, secs, extra_ok=True):
    ok = res.passed and extra_ok and secs <= BUDGET
    report(number, label, ok, secs, f" checked={res.checked}")
    assert res.passed, res.counterexample
    assert extra_ok
    assert secs <= BUDGET


def test_criterion_01_ellis_of_coset_flows(report):
    res, secs = timed("coset_ellis", max_order=16)
    finish(report, 1, "Ellis semigroup of every coset flow is G/core(H), |G| <= 16", res, secs)


def test_criterion_02_phi_isomorphism(report):
    res, secs = timed("phi", max_order=12)
    finish(report, 2, "Phi is a G-semigroup isomorphism for single-subset algebras, |G| <= 12",
           res, secs)


def test_criterion_03_symmetry(report):
    res, secs = timed("symmetry", max_order=12)
    finish(report, 3, "dp*(A) in B and dq(A) in p iff dp*(A) in q, |G| <= 12", res, secs)


def test_criterion_04_local_components(report):
    res, secs = timed("local", max_order=16)
    finish(report, 4, "generic types <-> G/G0_B, stabilisers, four-term chain, |G| <= 16",
           res, secs)


def test_criterion_05_structure(report):
    res, secs = timed("structure")
    finish(report, 5, "structure decomposition has defect 0 and mu(A) = |C|/[G:H]", res, secs)


def test_criterion_06_measure(report):
    res, secs = timed("measure")
    finish(report, 6, "unique invariant measure, inverse symmetry, Haar identity", res, secs)


def test_criterion_07_two_stable_is_coset(report):
    res, secs = timed("coset2stable", max_order=8)
    finish(report, 7, "2-stable iff coset over all nonempty subsets, |G| <= 8", res, secs)


def test_criterion_08_sym5(report):
    res, secs = timed("sym5")
    d = res.details
    extra = (d["coset_coding_number"] in (1, 2) and d["sharp_coding_number"] >= 3
             and d["sharp_witness_3"] is not None and d["family_member_iff_j_le_i"])
    finish(report, 8, "Sym(5) stabiliser coset relation 2-stable, sharp relation codes 3",
           res, secs, extra)


def test_criterion_09_separated_progressions(report):
    res, secs = timed("apexample")
    d = res.details
    extra = set(d["witnesses"]) >= {2, 3} and all(
        dens <= 1 / n for n, _, dens in d["block_densities"])
    finish(report, 9, "ap_example(6) window witnesses k=2,3 and block densities <= 1/n",
           res, secs, extra)


def test_criterion_10_free_group_ball(report):
    res, secs = timed("fgball")
    d = res.details
    extra = (d["ball_size"] == 1457 and d["cover_ok"]
             and all(d["right_failure"][r]["witness"] == "A" * (r + 1) for r in (3, 4, 5)))
    finish(report, 10, "radius-6 cover identity on 1457 words, right witnesses a^-(rho+1)",
           res, secs, extra)


def test_criterion_11_sumset(report):
    res, secs = timed("sumset")
    d = res.details
    extra = len(d["B"]) == len(d["C"]) == 4 and d["obstruction"]["ok"]
    finish(report, 11, "sumset search on 2Z with F={0,1}, parity obstruction on 200-window",
           res, secs, extra)


def test_criterion_12_neumann(report):
    res, secs = timed("neumann", max_order=12, seed=0, covers=1000)
    extra = res.details["covers"] == 1000 and res.checked == 1000
    finish(report, 12, "1000 random coset covers satisfy Neumann's bounds, |G| <= 12",
           res, secs, extra)
