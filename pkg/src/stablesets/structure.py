"""Genericity, the invariant measure and the coset-structure checks on finite carriers."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from stablesets import bits
from stablesets.group_core import (FiniteGroup, GroupSubset, Subgroup, _mask_of,
                                   as_subgroup, enumerate_subgroups, normal_core,
                                   subgroup_generated)
from stablesets.limits import Limits, get_limits
from stablesets.relations import find_order_coding, relation_from_set
from stablesets.report import CheckResult, first_failure
from stablesets.setalg import (AtomPartition, NotInvariant, bsharp, connected_component,
                               is_member, require_member)
from stablesets.types_flow import _generating_set, generic_types, stab_type, stone_flow


# ---------------------------------------------------------------------------
# genericity and set cover


@dataclass(frozen=True)
class GenericityReport:
    is_generic: bool
    min_cover_size: int | None
    exact: bool  # False: min_cover_size is a greedy upper bound
    cover_witness: tuple  # F with G = FA
    right_cover_size: int | None = None
    right_witness: tuple = ()
    two_sided: bool = False  # G = EAF for some finite E, F
    lower_bound: int | None = None


def greedy_cover(universe: int, sets: Sequence[int]) -> list[int]:
    """Indices of a greedy cover (largest new coverage first, ties by index)."""
    chosen, covered = [], 0
    while covered != universe:
        best, gain = -1, 0
        for i, s in enumerate(sets):
            c = (s & ~covered).bit_count()
            if c > gain:
                best, gain = i, c
        if best < 0:
            raise ValueError("sets do not cover the universe")
        chosen.append(best)
        covered |= sets[best]
    return chosen


def exact_cover_size(universe: int, sets: Sequence[int],
                     upper: list[int] | None = None) -> list[int]:
    """Minimum set cover by branch and bound.

    Branches on the uncovered element lying in the fewest sets; prunes with
    ``ceil(uncovered / largest set)``.
    """
    best = list(upper) if upper is not None else greedy_cover(universe, sets)
    nbits = universe.bit_length()
    covers = [[i for i, s in enumerate(sets) if s >> x & 1] for x in range(nbits)]
    biggest = max((s.bit_count() for s in sets), default=1)
    chosen: list[int] = []

    def search(covered: int):
        nonlocal best
        rest = universe & ~covered
        if not rest:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        need = -(-rest.bit_count() // biggest)
        if len(chosen) + need >= len(best):
            return
        pick, fewest = -1, None
        for x in bits.iter_bits(rest):
            c = len(covers[x])
            if fewest is None or c < fewest:
                pick, fewest = x, c
                if c <= 1:
                    break
        for i in covers[pick]:
            chosen.append(i)
            search(covered | sets[i])
            chosen.pop()

    search(0)
    return best


def _translate_cover(G: FiniteGroup, mask: int, side: str, limits: Limits):
    if side == "left":
        sets = [G.left_mask(g, mask) for g in range(G.order)]
    else:
        sets = [G.right_mask(mask, g) for g in range(G.order)]
    # one representative per distinct translate
    reps, distinct = [], []
    seen = set()
    for g, s in enumerate(sets):
        if s not in seen:
            seen.add(s)
            reps.append(g)
            distinct.append(s)
    greedy = greedy_cover(G.full_mask, distinct)
    exact = G.order <= limits.cover_exact
    picked = exact_cover_size(G.full_mask, distinct, greedy) if exact else greedy
    lower = -(-G.order // mask.bit_count())
    return sorted(reps[i] for i in picked), exact, lower


def genericity(G: FiniteGroup, A, exact_limit: int | None = None,
               limits: Limits | None = None) -> GenericityReport:
    """Least ``|F|`` with ``G = FA`` (exact up to ``exact_limit``), plus the right
    and two-sided variants."""
    limits = limits or get_limits()
    if exact_limit is not None:
        limits = Limits(**{**limits.__dict__, "cover_exact": exact_limit})
    mask = _mask_of(G, A)
    if not mask:
        return GenericityReport(False, None, True, (), None, (), False)
    left, exact, lower = _translate_cover(G, mask, "left", limits)
    right, _, _ = _translate_cover(G, mask, "right", limits)
    eaf = G.product_mask(G.product_mask(bits.from_indices(left), mask), 1) == G.full_mask
    return GenericityReport(True, len(left), exact, tuple(left), len(right), tuple(right),
                            eaf, lower)


def is_supergeneric(G: FiniteGroup, A) -> bool:
    """Every finite intersection of left translates is generic.  Taking all of
    ``G`` as the finite set gives the smallest such intersection."""
    mask = _mask_of(G, A)
    inter = G.full_mask
    for g in range(G.order):
        inter &= G.left_mask(g, mask)
    return inter != 0


def is_generic(G: FiniteGroup, A) -> bool:
    mask = _mask_of(G, A)
    cover = 0
    for g in range(G.order):
        cover |= G.left_mask(g, mask)
    return cover == G.full_mask


# ---------------------------------------------------------------------------
# measures


@dataclass(frozen=True)
class Measure:
    algebra: AtomPartition
    atom_weights: tuple  # Fractions
    left_invariant: bool
    right_invariant: bool

    def __call__(self, A) -> Fraction:
        mask = require_member(self.algebra, A)
        return sum((self.atom_weights[i] for i in self.algebra.ids_of(mask)), Fraction(0))


@dataclass(frozen=True)
class UniquenessCertificate:
    unknowns: int
    equations: int
    rank: int

    @property
    def nullity(self) -> int:
        return self.unknowns - self.rank

    @property
    def unique(self) -> bool:
        return self.nullity == 0


def _weights_invariant(B: AtomPartition, w: Sequence[Fraction], side: str) -> bool:
    G = B.carrier
    for g in range(G.order):
        perm = B.left_action(g) if side == "left" else B.right_action(g)
        if any(w[perm[i]] != w[i] for i in range(len(w))):
            return False
    return True


def uniqueness_certificate(B: AtomPartition) -> UniquenessCertificate:
    """Rank of the system ``sum w = 1``, ``w(gX) = w(X)`` for generators ``g``.

    Nullity 0 certifies uniqueness for this algebra only; it says nothing
    about larger algebras that contain it."""
    G = B.carrier
    n = len(B.atoms)
    rows = [[1] * n]
    for g in _generating_set(G) or [0]:
        perm = B.left_action(g)
        for i in range(n):
            if perm[i] != i:
                r = [0] * n
                r[perm[i]] += 1
                r[i] -= 1
                rows.append(r)
    M = DomainMatrix([[QQ(v) for v in r] for r in rows], (len(rows), n), QQ)
    return UniquenessCertificate(n, len(rows), M.rank())


def counting_measure(B: AtomPartition) -> Measure:
    """Weight ``1/#atoms`` on each atom, with its invariance flags."""
    if not B.left_invariant:
        raise NotInvariant("invariant measure needs a left-invariant algebra")
    n = len(B.atoms)
    w = tuple(Fraction(1, n) for _ in range(n))
    left = _weights_invariant(B, w, "left")
    right = B.bi_invariant and _weights_invariant(B, w, "right")
    return Measure(B, w, left, right)


def invariant_measure(B: AtomPartition) -> tuple[Measure, UniquenessCertificate]:
    """Normalised counting measure on the atoms with its uniqueness certificate."""
    return counting_measure(B), uniqueness_certificate(B)


def haar_measure(B: AtomPartition, A, generic: Sequence[int] | None = None) -> Fraction:
    """``#{generic types containing A} / #{generic types}``."""
    gen = generic_types(stone_flow(B)) if generic is None else generic
    mask = require_member(B, A)
    hit = sum(1 for p in gen if B.atoms[p] & mask)
    return Fraction(hit, len(gen))


def measure_check(B: AtomPartition, members: Sequence[int] | None = None) -> CheckResult:
    mu, cert = invariant_measure(B)
    G = B.carrier
    if members is None:
        members = list(B.members())
    gen = generic_types(stone_flow(B))

    def failures():
        if not cert.unique:
            yield {"reason": "invariance system has positive nullity", "nullity": cert.nullity}
            return
        if not mu.left_invariant:
            yield {"reason": "measure is not left-invariant"}
            return
        for A in members:
            if mu(A) != haar_measure(B, A, gen):
                yield {"reason": "Haar identity fails", "A": bits.to_list(A)}
                return
            if B.bi_invariant and mu(G.inverse_mask(A)) != mu(A):
                yield {"reason": "mu(A^-1) != mu(A)", "A": bits.to_list(A)}
                return
    return first_failure("measure_unique", failures(),
                         {"atoms": len(B.atoms), "rank": cert.rank, "nullity": cert.nullity})


@dataclass(frozen=True)
class WeightedType:
    atom_id: int
    weight: Fraction


def measure_decompose(B: AtomPartition, weights: Sequence) -> list[WeightedType]:
    """``mu = sum alpha_n p_n`` with ``p_n`` the type of atom ``n``."""
    w = [Fraction(x) for x in weights]
    if len(w) != len(B.atoms):
        raise ValueError("one weight per atom required")
    if any(x < 0 for x in w) or sum(w) != 1:
        raise ValueError("weights must be non-negative and sum to 1")
    terms = [WeightedType(i, x) for i, x in enumerate(w) if x]
    # reproduce every atom weight from the decomposition
    for i in range(len(w)):
        assert sum(t.weight for t in terms if t.atom_id == i) == w[i]
    return terms


# ---------------------------------------------------------------------------
# structure


@dataclass(frozen=True)
class StructureDecomposition:
    H: Subgroup
    Y: GroupSubset
    C: tuple  # cosets (masks) making up Y
    defect: Fraction
    measure: Fraction
    formula_holds: bool  # mu(A) == |C| / [G:H]


def structure_decomposition(B: AtomPartition, A, limits: Limits | None = None,
                            measure: Measure | None = None) -> StructureDecomposition:
    mask = require_member(B, A)
    G = B.carrier
    H = connected_component(B, limits)
    cosets = []
    rest = mask
    Y = 0
    while rest:
        c = G.left_mask(bits.lowest(rest), H.mask)
        cosets.append(c)
        Y |= c
        rest &= ~c
    mu = measure or counting_measure(B)
    defect = mu(mask ^ Y) if is_member(B, mask ^ Y) else Fraction(-1)
    mA = mu(mask)
    formula = mA == mu(Y) == Fraction(len(cosets), H.index)
    return StructureDecomposition(H, GroupSubset(G, Y), tuple(sorted(cosets, key=bits.lowest)),
                                  defect, mA, formula)


def stab_mu(B: AtomPartition, X, limits: Limits | None = None) -> Subgroup:
    """``{g : mu(gX ^ X) = 0}``; also asserted to be a member of ``B#``."""
    mask = require_member(B, X)
    G = B.carrier
    mu = counting_measure(B)
    out = bits.from_indices(g for g in range(G.order)
                            if mu(G.left_mask(g, mask) ^ mask) == 0)
    if not is_member(bsharp(B, limits), out):
        raise AssertionError("Stab_mu(X) is not in B#")
    return Subgroup(G, out)


def component_chain_check(B: AtomPartition, limits: Limits | None = None) -> CheckResult:
    """``G0(B#) = core(G0(B)) = meet of Stab(p) over generic p = meet of
    Stab_mu(X) over atoms X``."""
    G = B.carrier
    H0 = connected_component(B, limits)
    t1 = connected_component(bsharp(B, limits), limits).mask
    t2 = normal_core(G, H0).mask
    S = stone_flow(B)
    t3 = G.full_mask
    for p in generic_types(S):
        t3 &= stab_type(S, p).mask
    t4 = G.full_mask
    for X in B.atoms:
        t4 &= stab_mu(B, X, limits).mask
    terms = {"sharp_component": bits.to_list(t1), "core": bits.to_list(t2),
             "type_stabilisers": bits.to_list(t3), "measure_stabilisers": bits.to_list(t4)}

    def failures():
        if not (t1 == t2 == t3 == t4):
            yield terms
    return first_failure("component_chain", failures(), terms)


def is_left_coset(G: FiniteGroup, A) -> tuple[bool, Subgroup | None]:
    """``A = a<a^-1 A>`` for ``a`` the least element of ``A``."""
    mask = _mask_of(G, A)
    if not mask:
        return False, None
    a = bits.lowest(mask)
    K = subgroup_generated(G, G.left_mask(G.inverses[a], mask))
    return G.left_mask(a, K.mask) == mask, K


def two_stable_coset_check(G: FiniteGroup, A, limits: Limits | None = None) -> CheckResult:
    mask = _mask_of(G, A)
    if not mask:
        raise ValueError("A must be nonempty")
    w = find_order_coding(relation_from_set(G, mask, limits), 2, limits=limits)
    stable2 = w is None
    coset, K = is_left_coset(G, mask)
    details = {"A": bits.to_list(mask), "two_stable": stable2, "coset": coset,
               "subgroup": K.members() if coset else None,
               "witness": None if w is None else {"a": w.a_seq, "b": w.b_seq}}
    return CheckResult("coset2stable", stable2 == coset,
                       None if stable2 == coset else details, details)


def neumann_check(G: FiniteGroup, cover: Sequence[tuple]) -> CheckResult:
    """``cover`` lists ``(coset, subgroup)`` pairs, left cosets, covering ``G``."""
    total = 0
    indices = []
    for coset, H in cover:
        c, h = _mask_of(G, coset), as_subgroup(G, H)
        if not c or G.left_mask(bits.lowest(c), h.mask) != c:
            raise ValueError("cover entry is not a left coset of its subgroup")
        total |= c
        indices.append(h.index)
    if total != G.full_mask:
        raise ValueError("the cosets do not cover the group")
    size = len(indices)
    recip = sum((Fraction(1, i) for i in indices), Fraction(0))
    details = {"size": size, "min_index": min(indices), "reciprocal_sum": recip}
    ok = min(indices) <= size and recip >= 1
    return CheckResult("neumann", ok, None if ok else details, details)


def random_coset_cover(G: FiniteGroup, rng: random.Random,
                       subgroups: Sequence[Subgroup] | None = None) -> list[tuple[int, int]]:
    """Random left-coset cover: pick an uncovered point and a random subgroup,
    add the coset through that point; then drop redundant cosets at random."""
    subs = list(subgroups) if subgroups is not None else enumerate_subgroups(G)
    proper = [H for H in subs if H.mask != G.full_mask] or subs
    cover, covered = [], 0
    while covered != G.full_mask:
        x = rng.choice(bits.to_list(G.full_mask & ~covered))
        H = rng.choice(proper)
        c = G.left_mask(x, H.mask)
        cover.append((c, H.mask))
        covered |= c
    for i in rng.sample(range(len(cover)), len(cover)):
        rest = [cv for j, cv in enumerate(cover) if j != i and cv is not None]
        union = 0
        for c, _ in rest:
            union |= c
        if union == G.full_mask and rng.random() < 0.5:
            cover[i] = None
    return [cv for cv in cover if cv is not None]


def connectedness_report(B: AtomPartition, limits: Limits | None = None) -> CheckResult:
    """The six equivalent forms of connectedness, plus ``G = A B^-1`` for all
    pairs of nonempty members when connected."""
    G = B.carrier
    S = stone_flow(B)
    conds = {}
    conds["component_is_G"] = connected_component(B, limits).mask == G.full_mask
    conds["sharp_component_is_G"] = (
        connected_component(bsharp(B, limits), limits).mask == G.full_mask)
    conds["unique_generic_type"] = len(generic_types(S)) == 1
    members = list(B.members(limits))
    conds["exactly_one_supergeneric"] = all(
        is_supergeneric(G, A) != is_supergeneric(G, G.full_mask & ~A) for A in members)
    conds["generic_iff_supergeneric"] = all(
        is_generic(G, A) == is_supergeneric(G, A) for A in members)
    mu = counting_measure(B)
    conds["measure_01"] = all(mu(A) in (0, 1) for A in members)
    agree = len(set(conds.values())) == 1
    connected = conds["component_is_G"]
    product_ok = True
    if connected:
        nonempty = [A for A in members if A]
        for A in nonempty:
            for C in nonempty:
                if G.product_mask(A, G.inverse_mask(C)) != G.full_mask:
                    product_ok = False
    details = {"conditions": conds, "connected": connected, "product_identity": product_ok}
    ok = agree and product_ok
    return CheckResult("connectedness", ok, None if ok else details, details)
