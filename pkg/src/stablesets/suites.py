"""Exhaustive verification sweeps over the group battery.

Each suite returns a :class:`SuiteResult`; the counterexample is the first one
in battery order, so results do not depend on the number of worker processes.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from stablesets import bits
from stablesets.battery import group_by_name, groups_up_to
from stablesets.group_core import FiniteGroup, enumerate_subgroups, normal_core
from stablesets.limits import get_limits
from stablesets.relations import (find_order_coding, left_coset_relation, order_coding_number,
                                  relation_from_set, sharp_relation, stabilizer_family_matrix)
from stablesets.report import jsonable
from stablesets.setalg import (algebra_generated, bsharp, coset_algebra, identity_atom,
                               trivial_algebra)
from stablesets.structure import (component_chain_check, connectedness_report, counting_measure,
                                  measure_check, neumann_check, random_coset_cover,
                                  structure_decomposition, two_stable_coset_check)
from stablesets.types_flow import (coset_ellis_check, ellis_associativity_check,
                                   ellis_idempotent_check, ellis_semigroup,
                                   local_components_check, phi_isomorphism_check, stone_flow,
                                   symmetry_check)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {"suite": self.name, "status": self.status, "checked": self.checked,
                "counterexample": jsonable(self.counterexample),
                "details": jsonable(self.details)}


def _merge(name: str, parts: list[tuple[str, int, dict | None]], details=None) -> SuiteResult:
    checked = sum(p[1] for p in parts)
    for gname, _, cex in parts:
        if cex is not None:
            return SuiteResult(name, False, checked, {"group": gname, **cex}, details or {})
    return SuiteResult(name, True, checked, None, details or {})


def _run(name: str, worker: Callable, names: list[str], threads: int, *args) -> SuiteResult:
    if threads > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(worker, names, *[[a] * len(names) for a in args]))
    else:
        parts = [worker(n, *args) for n in names]
    return _merge(name, parts, {"groups": len(names)})


def _names(max_order: int) -> list[str]:
    return [n for n, _ in groups_up_to(max_order)]


def _group(name: str) -> FiniteGroup:
    from stablesets.battery import EXTRA, _extra
    if name in dict(EXTRA):
        return _extra(name)
    return group_by_name(name)


def _coset_algebras(G: FiniteGroup):
    for H in enumerate_subgroups(G):
        yield H, coset_algebra(G, H)


def _result_cex(res, **where) -> dict | None:
    if res.passed:
        return None
    return {**where, "check": res.name, **(res.counterexample or {})}


# ---------------------------------------------------------------------------
# per-group workers (module level so they can be pickled)


def _w_coset_ellis(name: str):
    G = _group(name)
    n = 0
    for H in enumerate_subgroups(G):
        n += 1
        res = coset_ellis_check(G, H)
        if not res.passed:
            return name, n, _result_cex(res, subgroup=H.members())
        E = ellis_semigroup(stone_flow(coset_algebra(G, H)))
        idem = ellis_idempotent_check(E)
        if not idem.passed:
            return name, n, _result_cex(idem, subgroup=H.members())
        if E.order <= 24 and not ellis_associativity_check(E):
            return name, n, {"subgroup": H.members(), "reason": "composition not associative"}
    return name, n, None


def _w_phi(name: str):
    G = _group(name)
    seen = set()
    n = 0
    for A in range(1 << G.order):
        B = algebra_generated(G, [A], "left")
        if B.atoms in seen:
            continue
        seen.add(B.atoms)
        n += 1
        res = phi_isomorphism_check(B)
        if not res.passed:
            return name, n, _result_cex(res, generator=bits.to_list(A))
    return name, n, None


def _w_symmetry(name: str):
    G = _group(name)
    n = 0
    for H, B in _coset_algebras(G):
        n += 1
        res = symmetry_check(B)
        if not res.passed:
            return name, n, _result_cex(res, subgroup=H.members())
    return name, n, None


def _w_local(name: str):
    G = _group(name)
    n = 0
    for H, B in _coset_algebras(G):
        n += 1
        for res in (local_components_check(B), component_chain_check(B)):
            if not res.passed:
                return name, n, _result_cex(res, subgroup=H.members())
        if identity_atom(B).mask != H.mask:
            return name, n, {"subgroup": H.members(), "reason": "atom(e) differs from H"}
        if identity_atom(bsharp(B)).mask != normal_core(G, H).mask:
            return name, n, {"subgroup": H.members(), "reason": "atom#(e) differs from core"}
    return name, n, None


def _w_chain(name: str):
    G = _group(name)
    n = 0
    for H, B in _coset_algebras(G):
        n += 1
        res = component_chain_check(B)
        if not res.passed:
            return name, n, _result_cex(res, subgroup=H.members())
    return name, n, None


def _sample_members(B, rng: random.Random, cap: int) -> list[int]:
    k = len(B.atoms)
    if 2 ** k <= cap:
        return list(B.members())
    picks = [1 << i for i in range(k)] + [0, (1 << k) - 1]
    picks += [rng.getrandbits(k) for _ in range(256)]
    return [B.union(bits.iter_bits(p)) for p in picks]


def _tested_algebras(G: FiniteGroup):
    for H, B in _coset_algebras(G):
        yield H, B
        Bs = bsharp(B)
        if Bs is not B:
            yield H, Bs


def _w_structure(name: str):
    G = _group(name)
    lim = get_limits()
    rng = random.Random(0)
    n = 0
    for H, B in _tested_algebras(G):
        mu = counting_measure(B)
        for A in _sample_members(B, rng, lim.member_enum):
            n += 1
            d = structure_decomposition(B, A, measure=mu)
            if d.defect != 0 or not d.formula_holds or d.Y.mask != A:
                return name, n, {"subgroup": H.members(), "A": bits.to_list(A),
                                 "defect": str(d.defect), "reason": "structure formula"}
            # columns of xy in Y depend only on yH, so at most [G:H] of them
            k = d.H.index + 1
            if k <= lim.max_k and k <= G.order:
                R = relation_from_set(G, d.Y.mask)
                if find_order_coding(R, k) is not None:
                    return name, n, {"subgroup": H.members(), "A": bits.to_list(A),
                                     "reason": "coding number exceeds the index"}
    return name, n, None


def _w_measure(name: str):
    G = _group(name)
    lim = get_limits()
    rng = random.Random(0)
    n = 0
    for H, B in _tested_algebras(G):
        n += 1
        res = measure_check(B, _sample_members(B, rng, lim.member_enum))
        if not res.passed:
            return name, n, _result_cex(res, subgroup=H.members(), atoms=len(B.atoms))
    return name, n, None


def _w_coset2stable(name: str):
    G = _group(name)
    n = 0
    for A in range(1, 1 << G.order):
        n += 1
        res = two_stable_coset_check(G, A)
        if not res.passed:
            return name, n, _result_cex(res)
    return name, n, None


def _w_connectedness(name: str):
    G = _group(name)
    n = 0
    algebras = [(None, trivial_algebra(G))] + list(_coset_algebras(G))
    for H, B in algebras:
        n += 1
        res = connectedness_report(B)
        if not res.passed:
            return name, n, _result_cex(res, subgroup=None if H is None else H.members())
    return name, n, None


def _w_neumann(name: str, count: int, seed: int):
    G = _group(name)
    rng = random.Random(f"{seed}:{name}")
    subs = enumerate_subgroups(G)
    for i in range(count):
        cover = random_coset_cover(G, rng, subs)
        res = neumann_check(G, cover)
        if not res.passed:
            return name, i + 1, {"cover": [(bits.to_list(c), bits.to_list(h)) for c, h in cover],
                                 **res.details}
    return name, count, None


WORKERS = {
    "coset_ellis": _w_coset_ellis,
    "phi": _w_phi,
    "symmetry": _w_symmetry,
    "local": _w_local,
    "chain": _w_chain,
    "structure": _w_structure,
    "measure": _w_measure,
    "coset2stable": _w_coset2stable,
    "connectedness": _w_connectedness,
}

DEFAULT_ORDER = {"coset_ellis": 16, "phi": 12, "symmetry": 12, "local": 16, "chain": 16,
                 "structure": 12, "measure": 16, "coset2stable": 8, "connectedness": 12,
                 "neumann": 12}

SUITES = tuple(DEFAULT_ORDER) + ("ellis", "sym5", "apexample", "fgball", "sumset")


def run_suite(name: str, max_order: int | None = None, seed: int = 0, threads: int = 1,
              covers: int = 1000) -> SuiteResult:
    if name == "ellis":
        name = "coset_ellis"
    if name in WORKERS:
        order = DEFAULT_ORDER[name] if max_order is None else max_order
        return _run(name, WORKERS[name], _names(order), threads)
    if name == "neumann":
        order = DEFAULT_ORDER[name] if max_order is None else max_order
        names = [n for n in _names(order) if _group(n).order > 1]
        per = [covers // len(names) + (1 if i < covers % len(names) else 0)
               for i in range(len(names))]
        if threads > 1:
            with ProcessPoolExecutor(max_workers=threads) as ex:
                parts = list(ex.map(_w_neumann, names, per, [seed] * len(names)))
        else:
            parts = [_w_neumann(n, c, seed) for n, c in zip(names, per)]
        return _merge(name, parts, {"groups": len(names), "covers": covers, "seed": seed})
    if name == "sym5":
        return sym_stabilizer_suite(5)
    if name == "apexample":
        return apexample_suite(6)
    if name == "fgball":
        return fgball_suite(6, (3, 4, 5))
    if name == "sumset":
        return sumset_suite()
    raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")


# ---------------------------------------------------------------------------
# single-instance suites


def sym_stabilizer_suite(n: int = 5, k_max: int = 6) -> SuiteResult:
    """Coset relation of ``Stab(0)`` in ``Sym(n)`` and its sharp relation."""
    fam = stabilizer_family_matrix(n)
    G = fam["group"]
    H = bits.from_indices(g for g, p in enumerate(G.labels) if p[0] == 0)
    R = left_coset_relation(G, H)
    base = order_coding_number(R, 3)
    sharp = sharp_relation(R, G)
    ocn = order_coding_number(sharp, k_max)
    w = ocn.witness
    valid = w is not None and w.is_valid_for(sharp)
    w3 = find_order_coding(sharp, 3)
    details = {
        "coset_coding_number": base.value,
        "sharp_coding_number": ocn.value, "sharp_saturated": ocn.saturated,
        "sharp_witness_3": None if w3 is None else {
            "x": [G.labels[a] for a in w3.a_seq],
            "yz": [(G.labels[c // G.order], G.labels[c % G.order]) for c in w3.b_seq]},
        "family_matrix": fam["matrix"],
        "family_member_iff_j_ge_i": fam["holds_iff_j_ge_i"],
        "family_member_iff_j_le_i": fam["holds_iff_j_le_i"],
    }
    ok = base.value in (1, 2) and ocn.value >= 3 and valid and w3 is not None \
        and w3.is_valid_for(sharp)
    return SuiteResult("sym5", ok, 1, None if ok else details, details)


def apexample_suite(n_max: int = 6) -> SuiteResult:
    from stablesets.infinite_carriers import (ap_block_densities, ap_example, check_int_witness,
                                              window_coding_number)
    ex = ap_example(n_max)
    top = ex.blocks[-1][-1]
    wc = window_coding_number((-10, top), ex, 3)
    wit_ok = all(k in wc.witnesses and check_int_witness(ex, *wc.witnesses[k]) for k in (2, 3))
    dens = ap_block_densities(ex)
    dens_ok = all(d <= Fraction(1, n) for n, _, d in dens)
    details = {"spacing": ex.spacing_ok(), "coding": wc.number, "witnesses": wc.witnesses,
               "block_densities": [(n, w, d) for n, w, d in dens]}
    ok = ex.spacing_ok() and wit_ok and dens_ok
    return SuiteResult("apexample", ok, 1, None if ok else details, details)


def fgball_suite(r: int = 6, rhos=(3, 4, 5)) -> SuiteResult:
    from stablesets.infinite_carriers import fg_genericity_checks
    rep = fg_genericity_checks(r, rhos)
    ok = (rep["cover_ok"] and rep["prefix_analysis_ok"]
          and rep["ball_size"] == rep["expected_size"]
          and all(v["ok"] for v in rep["right_failure"].values()))
    return SuiteResult("fgball", ok, rep["ball_size"], None if ok else rep, rep)


def sumset_suite() -> SuiteResult:
    from stablesets.infinite_carriers import parse_zset, sumset_obstruction, sumset_search
    seq = list(range(1, 41))
    res = sumset_search(parse_zset("mod:2,0"), [0, 1], seq, seq, 4)
    obst = sumset_obstruction(-100, 99, 50)
    details = {"g": res.g, "B": res.B, "C": res.C, "obstruction": obst}
    ok = len(res.B) >= 4 and len(res.C) >= 4 and obst["ok"]
    return SuiteResult("sumset", ok, 1, None if ok else details, details)
