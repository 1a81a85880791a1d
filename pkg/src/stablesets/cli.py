"""Command-line interface.

Commands::

    analyze  --group G --set S [--kmax K]
    stone    --group G --generators S [--generators S ...] [--closure none|left|bi]
    ellis    (same arguments as stone)
    verify   SUITE [--max-order N] [--seed N] [--threads N] [--covers N]
    zwindow  [--set Z] [--window lo,hi] density|classify|coding|sumset|fgball ...

Finite set specs (``S``)::

    0,2,4                element indices
    all | empty
    gen:i,j              subgroup generated by the given indices
    perm:(0 1),(1 2)     the listed permutations (permutation groups only)
    pgen:(0 1),(1 2)     subgroup generated by the listed permutations
    stab:k               stabiliser of the point k (permutation groups only)
    coset:a:S            the left translate a*S
    compl:S              complement

Every command prints a report, as text or (``--format json``) as one JSON
object per line.  Exit status: 0 all checks pass, 1 a check failed, 2 bad
input, 3 a size cap refused the computation.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field

from stablesets import bits
from stablesets.group_core import (FiniteGroup, GroupSpecError, InvalidTable, build_group,
                                   cycles_to_perm, generate_mask, parse_cycles)
from stablesets.infinite_carriers import (APExample, SetSpecError, SumsetFailure,
                                          ap_block_densities, banach_density, check_int_witness,
                                          classify_window, fg_genericity_checks, parse_folner,
                                          parse_zset, sumset_search, window_coding_number)
from stablesets.limits import LimitExceeded
from stablesets.relations import order_coding_number, relation_from_set
from stablesets.report import ANCHORS, SCHEMA, CheckResult, jsonable
from stablesets.setalg import (NotAMember, NotInvariant, algebra_generated, bsharp,
                               connected_component)
from stablesets.structure import (connectedness_report, genericity, measure_check, stab_mu,
                                  structure_decomposition, two_stable_coset_check)
from stablesets.suites import SUITES, run_suite
from stablesets.types_flow import (ellis_idempotent_check, ellis_semigroup, generic_types,
                                   homogeneous_decomposition, local_components_check,
                                   phi_isomorphism_check, quotient_isomorphism_check,
                                   stone_flow)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3

SUITE_ANCHOR = {"local": "local_components", "chain": "component_chain",
                "measure": "measure_unique", "ellis": "coset_ellis",
                "sym5": "sym_stabilizer", "apexample": "ap_example", "fgball": "fg_cover"}


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    command: list
    instance: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)  # dicts with name/status/anchor/...
    timing: float | None = None
    error: str | None = None

    def add(self, res: CheckResult) -> None:
        self.checks.append(res.to_dict())

    def add_record(self, name: str, passed: bool | None, counterexample=None,
                   details=None, anchor: str | None = None) -> None:
        rec = CheckResult(name, passed, counterexample, details or {}).to_dict()
        if anchor is not None:
            rec["anchor"] = ANCHORS.get(anchor, anchor)
        self.checks.append(rec)

    def refuse(self, err: LimitExceeded) -> None:
        self.add_record("size_cap", None, None,
                        {"key": err.key, "value": err.value, "cap": err.cap})

    @property
    def status(self) -> str:
        if self.error is not None:
            return "error"
        states = {c["status"] for c in self.checks}
        if "fail" in states:
            return "fail"
        if "refused" in states:
            return "refused"
        return "pass"

    @property
    def exit_code(self) -> int:
        return {"pass": EXIT_OK, "fail": EXIT_FAIL, "refused": EXIT_LIMIT,
                "error": EXIT_INPUT}[self.status]

    def json_lines(self) -> list[str]:
        lines = [{"schema": SCHEMA, "command": self.command},
                 {"instance": self.instance},
                 {"data": self.data}]
        lines += [{"check": c} for c in self.checks]
        summary = {"status": self.status, "exit": self.exit_code}
        if self.error is not None:
            summary["error"] = self.error
        if self.timing is not None:
            summary["seconds"] = round(self.timing, 3)
        lines.append({"summary": summary})
        return [json.dumps(jsonable(x), sort_keys=True) for x in lines]

    def text_lines(self) -> list[str]:
        out = ["$ stablesets " + " ".join(self.command)]
        for k, v in jsonable(self.instance).items():
            out.append(f"{k}: {_fmt(v)}")
        for k, v in jsonable(self.data).items():
            out.append(f"{k}: {_fmt(v)}")
        for c in jsonable(self.checks):
            out.append(f"[{c['status']}] {c['name']}: {c['anchor']}")
            if c["counterexample"] is not None:
                out.append(f"    counterexample: {_fmt(c['counterexample'])}")
            if c["details"]:
                out.append(f"    details: {_fmt(c['details'])}")
        if self.error is not None:
            out.append(f"error: {self.error}")
        tail = f"status: {self.status}"
        if self.timing is not None:
            tail += f" ({self.timing:.3f} s)"
        out.append(tail)
        return out


def _fmt(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


# ---------------------------------------------------------------------------
# finite set specs


def _perm_label(G: FiniteGroup, text: str) -> int:
    labels = G.labels
    if not labels or not isinstance(labels[0], tuple) \
            or not all(isinstance(x, int) for x in labels[0]):
        raise InputError("permutation notation needs a permutation group")
    perm = cycles_to_perm(parse_cycles(text), len(labels[0]))
    try:
        return labels.index(perm)
    except ValueError:
        raise InputError(f"{text} is not an element of {G.name}") from None


def _perm_list(G: FiniteGroup, text: str) -> list[int]:
    pieces = [p.strip() for p in re.split(r",\s*(?=\()", text.strip()) if p.strip()]
    if not pieces:
        raise InputError("empty permutation list")
    return [_perm_label(G, p) for p in pieces]


def _indices(G: FiniteGroup, text: str) -> list[int]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not all(re.fullmatch(r"\d+", p) for p in parts):
        raise InputError(f"malformed index list {text!r}")
    idx = [int(p) for p in parts]
    bad = [i for i in idx if i >= G.order]
    if bad:
        raise InputError(f"index {bad[0]} out of range for a group of order {G.order}")
    return idx


def parse_finite_set(G: FiniteGroup, spec: str) -> int:
    """Bitmask of the subset of ``G`` described by ``spec``."""
    spec = spec.strip()
    if spec == "all":
        return G.full_mask
    if spec == "empty":
        return 0
    kind, sep, rest = spec.partition(":")
    if not sep:
        return bits.from_indices(_indices(G, spec))
    if kind == "gen":
        return generate_mask(G, _indices(G, rest))
    if kind == "perm":
        return bits.from_indices(_perm_list(G, rest))
    if kind == "pgen":
        return generate_mask(G, _perm_list(G, rest))
    if kind == "stab":
        labels = G.labels
        if not re.fullmatch(r"\d+", rest) or not isinstance(labels[0], tuple):
            raise InputError(f"malformed stabiliser spec {spec!r}")
        k = int(rest)
        if k >= len(labels[0]):
            raise InputError(f"point {k} out of range")
        return bits.from_indices(g for g, p in enumerate(labels) if p[k] == k)
    if kind == "coset":
        a, sep2, inner = rest.partition(":")
        if not sep2:
            raise InputError(f"malformed coset spec {spec!r}")
        (g,) = _indices(G, a) if a.strip().isdigit() else (_perm_label(G, a),)
        return G.left_mask(g, parse_finite_set(G, inner))
    if kind == "compl":
        return G.full_mask & ~parse_finite_set(G, rest)
    raise InputError(f"unknown set spec {spec!r}")


# ---------------------------------------------------------------------------
# helpers


def _group_summary(G: FiniteGroup) -> dict:
    return {"name": G.name, "order": G.order, "abelian": G.is_abelian()}


def _identify(G: FiniteGroup) -> str | None:
    """Catalogue name of ``G`` for orders up to 16, matched by invariants."""
    if G.order > 16:
        return None
    from stablesets.battery import fingerprint, groups_up_to
    fp = fingerprint(G)
    for name, H in groups_up_to(G.order):
        if H.order == G.order and fingerprint(H) == fp:
            return name
    return None


def _ideal_group(E) -> FiniteGroup:
    """The minimal ideal as a group, with its idempotent first."""
    order = [E.identity] + [i for i in E.minimal_ideal if i != E.identity]
    pos = {e: k for k, e in enumerate(order)}
    table = [[pos[E.compose(a, b)] for b in order] for a in order]
    return FiniteGroup(table, name="minimal ideal")


def _subset_list(mask: int) -> list[int]:
    return bits.to_list(mask)


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args, rep: Report) -> None:
    G = build_group(args.group)
    A = parse_finite_set(G, args.set)
    rep.instance = {"group": _group_summary(G), "set": _subset_list(A)}
    R = relation_from_set(G, A)
    ocn = order_coding_number(R, args.kmax)
    w = ocn.witness
    rep.data["order_coding_number"] = ocn.value
    rep.data["coding_saturated"] = ocn.saturated
    rep.data["coding_witness"] = None if w is None else {"a": list(w.a_seq), "b": list(w.b_seq)}
    if A:
        g = genericity(G, A)
        rep.data["genericity"] = {"generic": g.is_generic, "min_cover": g.min_cover_size,
                                  "exact": g.exact, "cover": list(g.cover_witness),
                                  "right_cover": g.right_cover_size,
                                  "two_sided": g.two_sided}
    else:
        rep.data["genericity"] = {"generic": False}
    B = algebra_generated(G, [A], "left")
    rep.data["algebra_atoms"] = len(B.atoms)
    d = structure_decomposition(B, A)
    rep.data["structure"] = {"H": d.H.members(), "index": d.H.index,
                             "cosets": [_subset_list(c) for c in d.C],
                             "defect": d.defect, "measure": d.measure}
    rep.data["stab_mu"] = stab_mu(B, A).members()
    rep.add_record("structure", d.defect == 0 and d.formula_holds and d.Y.mask == A,
                   None if d.formula_holds else {"defect": d.defect, "measure": d.measure})
    rep.add(measure_check(B, [A]))
    if A:
        cres = two_stable_coset_check(G, A)
        coset, K = cres.details["coset"], cres.details["subgroup"]
        if coset and A & 1:
            verdict = "subgroup"
        elif coset:
            verdict = f"left coset of {K}"
        else:
            verdict = "not a coset"
        rep.data["coset_verdict"] = verdict
        rep.add(cres)
    else:
        rep.data["coset_verdict"] = "empty set"


def _algebra_from_args(args, G: FiniteGroup):
    gens = []
    for spec in args.generators or []:
        for piece in spec.split(";"):
            if piece.strip():
                gens.append(parse_finite_set(G, piece))
    return algebra_generated(G, gens, args.closure)


def cmd_stone(args, rep: Report, with_ellis: bool = True) -> None:
    G = build_group(args.group)
    B = _algebra_from_args(args, G)
    rep.instance = {"group": _group_summary(G), "closure": args.closure,
                    "generators": args.generators or []}
    rep.data["types"] = len(B.atoms)
    rep.data["atoms"] = [_subset_list(a) for a in B.atoms] if len(B.atoms) <= 64 else None
    rep.data["left_invariant"] = B.left_invariant
    rep.data["bi_invariant"] = B.bi_invariant
    if not B.left_invariant:
        rep.data["note"] = "not left-invariant: the type space is not a G-flow"
        return
    H0 = connected_component(B)
    rep.data["connected_component"] = H0.members()
    rep.data["component_index"] = H0.index
    S = stone_flow(B)
    rep.data["generic_types"] = generic_types(S)
    if with_ellis:
        E = ellis_semigroup(S)
        rep.data["ellis_order"] = E.order
        rep.data["ellis_is_group"] = E.is_group()
        rep.data["minimal_ideal_order"] = len(E.minimal_ideal)
        if E.identity is not None:
            I = _ideal_group(E)
            rep.data["minimal_ideal_group"] = {"order": I.order, "abelian": I.is_abelian(),
                                               "catalogue": _identify(I)}
        rep.add(ellis_idempotent_check(E))
        K = connected_component(bsharp(B)).mask
        rep.data["quotient_kernel"] = _subset_list(K)
        rep.add(quotient_isomorphism_check(G, K, E))
    rep.add(phi_isomorphism_check(B))
    rep.add(local_components_check(B))
    hd = homogeneous_decomposition(B)
    rep.data["homogeneous"] = {"idempotent": hd["u"], "K": hd["K"], "cosets": hd["cosets"],
                               "sharp_types": hd["sharp_types"]}
    rep.add_record("homogeneous", hd["ok"], hd["problems"][0] if hd["problems"] else None)
    rep.add(connectedness_report(B))


def cmd_ellis(args, rep: Report) -> None:
    cmd_stone(args, rep, with_ellis=True)


def cmd_verify(args, rep: Report) -> None:
    names = [s for s in SUITES if s != "ellis"] if args.suite == "all" else [args.suite]
    rep.instance = {"suites": names, "max_order": args.max_order, "seed": args.seed}
    for name in names:
        res = run_suite(name, args.max_order, args.seed, args.threads, args.covers)
        rep.data[name] = {"checked": res.checked, "details": res.details}
        rep.add_record(name, res.passed, res.counterexample, {"checked": res.checked},
                       anchor=SUITE_ANCHOR.get(name, name))


def _parse_window(text: str | None) -> tuple[int, int]:
    if text is None:
        raise InputError("--window lo,hi is required for this subcommand")
    m = re.fullmatch(r"\s*(-?\d+)\s*,\s*(-?\d+)\s*", text)
    if not m or int(m.group(1)) > int(m.group(2)):
        raise InputError(f"malformed window {text!r}")
    return int(m.group(1)), int(m.group(2))


def _zset(args):
    if args.set is None:
        raise InputError("--set is required for this subcommand")
    return parse_zset(args.set)


def cmd_zwindow(args, rep: Report) -> None:
    sub = args.zcmd
    rep.instance = {"set": args.set, "window": args.window, "subcommand": sub}
    if sub == "fgball":
        rhos = args.rho or [r for r in (3, 4, 5) if r < args.radius]
        out = fg_genericity_checks(args.radius, rhos)
        rep.data["ball_size"] = out["ball_size"]
        rep.add_record("fg_cover", out["cover_ok"] and out["prefix_analysis_ok"]
                       and out["ball_size"] == out["expected_size"],
                       None if out["cover_ok"] else {"word": out["cover_counterexample"]})
        for rho, r in out["right_failure"].items():
            rep.data[f"right_witness_rho{rho}"] = r["witness"]
            rep.add_record("fg_right", r["ok"], None if r["ok"] else {"F": r["violations"]},
                           {"rho": rho, "witness": r["witness"], "checked": r["checked"]})
        return
    A = _zset(args)
    if sub == "density":
        wins = parse_folner(args.folner)
        d = banach_density(A, wins)
        rep.data["window_densities"] = [{"window": w, "density": v}
                                        for w, v in d.window_densities]
        rep.data["upper_estimate"] = d.upper_estimate
        rep.data["lower_estimate"] = d.lower_estimate
        rep.data["consistent_with_equal_density"] = d.consistent_with_equal_density
        rep.data["caveat"] = d.caveat
        if isinstance(A, APExample):
            dens = ap_block_densities(A)
            rep.data["block_densities"] = [{"block": n, "window": w, "density": v}
                                           for n, w, v in dens]
            bad = [n for n, _, v in dens if v * n > 1]
            rep.add_record("ap_density", not bad, {"block": bad[0]} if bad else None)
        return
    lo, hi = _parse_window(args.window)
    if sub == "classify":
        c = classify_window(A, (lo, hi), args.gap, args.run)
        rep.data.update({"syndetic": c.syndetic, "thick": c.thick,
                         "piecewise_syndetic": c.piecewise_syndetic,
                         "supergeneric": c.supergeneric, "largest_gap": c.largest_gap,
                         "longest_run": c.longest_run, "gap": c.gap, "run": c.run})
        rep.data["caveat"] = "bounded-window statistics only"
        return
    if sub == "coding":
        wc = window_coding_number((lo, hi), A, args.kmax)
        rep.data["window_coding_number"] = wc.number
        rep.data["saturated"] = wc.saturated
        rep.data["witnesses"] = {str(k): {"a": list(a), "b": list(b)}
                                 for k, (a, b) in wc.witnesses.items()}
        bad = [k for k, (a, b) in wc.witnesses.items() if not check_int_witness(A, a, b)]
        rep.add_record("window_witness", not bad, {"k": bad[0]} if bad else None)
        return
    if sub == "sumset":
        F = [int(x) for x in args.F.split(",")]
        seq = list(range(lo, hi + 1))
        try:
            res = sumset_search(A, F, seq, seq, args.target)
        except SumsetFailure as e:
            rep.data["sumset"] = None
            rep.add_record("sumset", False, {"reason": str(e)})
            return
        rep.data["sumset"] = {"g": res.g, "B": list(res.B), "C": list(res.C)}
        rep.add_record("sumset", True)
        return
    raise InputError(f"unknown zwindow subcommand {sub!r}")


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stablesets",
                                description="Stable sets in finite and windowed groups.")
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a nested parser from resetting a value given earlier
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                        help="append wall-clock time to the summary")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="analyse one subset of a group")
    a.add_argument("--group", required=True)
    a.add_argument("--set", required=True)
    a.add_argument("--kmax", type=int, default=4)
    a.set_defaults(func=cmd_analyze)

    for name, func in (("stone", cmd_stone), ("ellis", cmd_ellis)):
        s = sub.add_parser(name, parents=[common], help="type space of a generated algebra")
        s.add_argument("--group", required=True)
        s.add_argument("--generators", action="append",
                       help="finite set spec; repeat or separate with ';'")
        s.add_argument("--closure", choices=("none", "left", "bi"), default="left")
        s.set_defaults(func=func)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=tuple(SUITES) + ("all",))
    v.add_argument("--max-order", type=int, default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--threads", type=int, default=1)
    v.add_argument("--covers", type=int, default=1000)
    v.set_defaults(func=cmd_verify)

    z = sub.add_parser("zwindow", parents=[common], help="windowed integer and free group checks")
    z.add_argument("--set")
    z.add_argument("--window")
    zs = z.add_subparsers(dest="zcmd", required=True)
    d = zs.add_parser("density", parents=[common])
    d.add_argument("--folner", default="centered:10,100,1000")
    c = zs.add_parser("classify", parents=[common])
    c.add_argument("--gap", type=int, default=10)
    c.add_argument("--run", type=int, default=10)
    k = zs.add_parser("coding", parents=[common])
    k.add_argument("--kmax", type=int, default=3)
    s = zs.add_parser("sumset", parents=[common])
    s.add_argument("--F", default="0,1")
    s.add_argument("--target", type=int, default=4)
    f = zs.add_parser("fgball", parents=[common])
    f.add_argument("--radius", type=int, default=6)
    f.add_argument("--rho", type=int, action="append")
    z.set_defaults(func=cmd_zwindow)
    return p


def _join_negative_values(argv: list[str]) -> list[str]:
    """Allow ``--window -10,4000`` by rewriting it as ``--window=-10,4000``."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--window" and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"--window={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def run(argv: list[str] | None = None) -> tuple[Report, str]:
    """Parse and execute; returns the report and the requested format."""
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    args = build_parser().parse_args(argv)
    rep = Report(command=argv)
    start = time.perf_counter()
    try:
        args.func(args, rep)
    except LimitExceeded as e:
        rep.refuse(e)
    except (GroupSpecError, InvalidTable, SetSpecError, InputError, NotAMember,
            NotInvariant, OSError, ValueError) as e:
        rep.error = f"{type(e).__name__}: {e}"
    if getattr(args, "timing", False):
        rep.timing = time.perf_counter() - start
    return rep, getattr(args, "format", "text")


def main(argv: list[str] | None = None) -> int:
    try:
        rep, fmt = run(argv)
    except SystemExit as e:  # argparse has already printed its message
        return e.code if isinstance(e.code, int) else EXIT_INPUT
    lines = rep.json_lines() if fmt == "json" else rep.text_lines()
    print("\n".join(lines))
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
