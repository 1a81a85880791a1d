"""The type space of a finite left-invariant algebra as a G-flow.

Types of a finite algebra are principal ultrafilters, one per atom, so a type is
identified with its atom id.  ``gp`` is the type of the atom ``g * atom(p)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from stablesets import bits
from stablesets.group_core import (FiniteGroup, GroupSubset, Subgroup, _mask_of,
                                   generate_mask, is_normal, normal_core)
from stablesets.limits import Limits, get_limits
from stablesets.report import CheckResult, first_failure
from stablesets.setalg import (AtomPartition, NotInvariant, bsharp, identity_atom,
                               is_member, require_member, subgroups_in_algebra)


class InternalError(AssertionError):
    pass


@dataclass(frozen=True)
class TypePoint:
    atom_id: int

    def contains(self, B: AtomPartition, A) -> bool:
        """``A in p``, for a member ``A`` of ``B``."""
        mask = require_member(B, A)
        return bool(B.atoms[self.atom_id] & mask)


def is_ultrafilter(B: AtomPartition, chosen: Sequence[int]) -> bool:
    """Check the ultrafilter axioms for a family of members given as masks."""
    fam = set(chosen)
    G = B.carrier
    if G.full_mask not in fam or 0 in fam:
        return False
    for A in B.members():
        if (A in fam) == ((G.full_mask & ~A) in fam):
            return False
    for A in fam:
        for C in fam:
            if A & C not in fam:
                return False
    return True


@dataclass(frozen=True, eq=False)
class StoneFlow:
    algebra: AtomPartition
    action: tuple  # action[g][p] = gp
    principal_of: tuple  # element -> type

    @property
    def group(self) -> FiniteGroup:
        return self.algebra.carrier

    @property
    def size(self) -> int:
        return len(self.algebra.atoms)

    @property
    def types(self) -> list[TypePoint]:
        return [TypePoint(i) for i in range(self.size)]

    def act(self, g: int, p: int) -> int:
        return self.action[g][p]

    def type_members(self, p: int) -> list[int]:
        """All members of ``B`` in the type ``p`` (small algebras only)."""
        X = self.algebra.atoms[p]
        return [A for A in self.algebra.members() if A & X]


def stone_flow(B: AtomPartition) -> StoneFlow:
    if not B.left_invariant:
        raise NotInvariant("the type space is a G-flow only for left-invariant algebras")
    G = B.carrier
    action = tuple(tuple(B.left_action(g)) for g in range(G.order))
    return StoneFlow(B, action, tuple(B.atom_of))


def _type_id(p) -> int:
    return p.atom_id if isinstance(p, TypePoint) else int(p)


def dp_set(S: StoneFlow, p, A) -> GroupSubset:
    """``dp(A) = {x : x^-1 A in p}``, i.e. the ``x`` with ``x * atom(p)`` inside ``A``."""
    B = S.algebra
    mask = require_member(B, A)
    p = _type_id(p)
    inside = set(B.ids_of(mask))
    out = 0
    for x in range(S.group.order):
        if S.action[x][p] in inside:
            out |= 1 << x
    return GroupSubset(S.group, out)


def dp_star_set(S_sharp: StoneFlow, p, A, B: AtomPartition | None = None) -> GroupSubset:
    """``dp*(A) = {x : A x^-1 in p}`` for a type ``p`` of the bi-invariant algebra.

    When ``B`` is given the result is asserted to be a member of ``B``.
    """
    Bs = S_sharp.algebra
    if not Bs.bi_invariant:
        raise NotInvariant("dp* needs a bi-invariant type space")
    G = S_sharp.group
    mask = _mask_of(G, A)
    p = _type_id(p)
    inside = set(Bs.ids_of(mask)) if is_member(Bs, mask) else None
    if inside is None:
        raise ValueError("set is not a member of the bi-invariant algebra")
    out = 0
    for x in range(G.order):
        if Bs.right_action(x)[p] in inside:
            out |= 1 << x
    if B is not None and not is_member(B, out):
        raise InternalError("dp*(A) is not a member of B")
    return GroupSubset(G, out)


def star(S_sharp: StoneFlow, p, q) -> int:
    """``p * q = {A : dq(A) in p}``.

    ``dq(A)`` contains ``atom(p)`` iff ``atom(p) * atom(q)`` lies inside ``A``;
    the product set must therefore be one atom, which is the answer.
    """
    B = S_sharp.algebra
    if not B.bi_invariant:
        raise NotInvariant("the star operation needs a bi-invariant algebra")
    G = B.carrier
    Xp, Xq = B.atoms[_type_id(p)], B.atoms[_type_id(q)]
    prod = G.product_mask(Xp, Xq)
    r = B.atom_of[bits.lowest(prod)]
    if B.atoms[r] != prod:
        raise InternalError("atom product is not an atom")
    return r


def star_table(S_sharp: StoneFlow) -> list[list[int]]:
    n = S_sharp.size
    return [[star(S_sharp, p, q) for q in range(n)] for p in range(n)]


def star_by_definition(S_sharp: StoneFlow, p: int, q: int) -> int:
    """``p * q`` evaluated literally: the unique atom ``Z`` whose members are
    exactly the ``A`` with ``dq(A) in p``.  Independent of :func:`star`."""
    B = S_sharp.algebra
    Xp = B.atoms[p]
    hits = [z for z in range(len(B.atoms))
            if Xp & ~dp_set(S_sharp, q, B.atoms[z]).mask == 0]
    if len(hits) != 1:
        raise InternalError("{A : dq(A) in p} is not an ultrafilter")
    return hits[0]


# ---------------------------------------------------------------------------
# Ellis semigroup


@dataclass(frozen=True, eq=False)
class EllisSemigroup:
    elements: tuple  # maps as tuples
    index: dict
    table: tuple | None  # table[i][j] = index of elements[i] o elements[j]
    generator_of: tuple  # g -> index of pi_g
    idempotents: tuple
    minimal_ideal: tuple  # indices
    identity: int | None  # the idempotent of the minimal ideal when unique
    inverse: dict  # on the minimal ideal

    @property
    def order(self) -> int:
        return len(self.elements)

    def compose(self, i: int, j: int) -> int:
        if self.table is not None:
            return self.table[i][j]
        f, g = self.elements[i], self.elements[j]
        return self.index[tuple(f[x] for x in g)]

    def is_group(self) -> bool:
        return len(self.minimal_ideal) == self.order and self.identity is not None


def _compose_maps(f: tuple, g: tuple) -> tuple:
    """``f o g``."""
    return tuple(f[x] for x in g)


def _generating_set(G: FiniteGroup) -> list[int]:
    gens, h = [], 1
    while h != G.full_mask:
        g = bits.lowest(G.full_mask & ~h)
        gens.append(g)
        h = generate_mask(G, gens)
    return gens


def transformation_closure(gens: Sequence[tuple], limits: Limits | None = None) -> list[tuple]:
    """All compositions of the given maps (the maps themselves included)."""
    limits = limits or get_limits()
    gens = [tuple(g) for g in gens]
    seen = set(gens)
    elems = list(dict.fromkeys(gens))
    queue = deque(elems)
    while queue:
        f = queue.popleft()
        for s in gens:
            h = _compose_maps(f, s)
            if h not in seen:
                seen.add(h)
                elems.append(h)
                queue.append(h)
                limits.check("ellis_limit", len(elems))
    return elems


def _sink_component(n: int, succ) -> list[int]:
    """Vertices of the strongly connected components with no outgoing edges,
    as a list of components (iterative Tarjan)."""
    index = [-1] * n
    low = [0] * n
    on = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    comp_of = [-1] * n
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on[w] = True
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if on[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on[w] = False
                    comp_of[w] = len(comps)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    sinks = []
    for c, comp in enumerate(comps):
        if all(comp_of[w] == c for v in comp for w in succ(v)):
            sinks.append(comp)
    return sinks


def ellis_from_maps(maps_by_g: Sequence[tuple], gens: Sequence[int],
                    limits: Limits | None = None) -> EllisSemigroup:
    limits = limits or get_limits()
    gen_maps = [maps_by_g[g] for g in gens]
    elems = transformation_closure(gen_maps, limits)
    for f in maps_by_g:
        if f not in set(elems):
            elems.append(f)
    elems = sorted(set(elems))
    index = {f: i for i, f in enumerate(elems)}
    n = len(elems)
    table = None
    if n <= 2048:
        table = tuple(tuple(index[_compose_maps(f, g)] for g in elems) for f in elems)
    gen_idx = [index[f] for f in gen_maps]

    def comp(i, j):
        if table is not None:
            return table[i][j]
        return index[_compose_maps(elems[i], elems[j])]

    def succ(i):
        out = []
        for s in gen_idx:
            out.append(comp(i, s))
            out.append(comp(s, i))
        return out

    sinks = _sink_component(n, succ)
    if len(sinks) != 1:
        raise InternalError("the semigroup has more than one minimal ideal")
    ideal = tuple(sinks[0])
    idem = tuple(i for i in range(n) if comp(i, i) == i)
    ideal_idem = [i for i in ideal if i in set(idem)]
    identity = ideal_idem[0] if len(ideal_idem) == 1 else None
    inverse = {}
    if identity is not None:
        for i in ideal:
            for j in ideal:
                if comp(i, j) == identity and comp(j, i) == identity:
                    inverse[i] = j
                    break
    generator_of = tuple(index[f] for f in maps_by_g)
    return EllisSemigroup(tuple(elems), index, table, generator_of, idem, ideal,
                          identity, inverse)


def ellis_semigroup(S: StoneFlow, limits: Limits | None = None) -> EllisSemigroup:
    """Closure of the translation maps ``pi_g`` under composition."""
    G = S.group
    return ellis_from_maps(S.action, _generating_set(G) or [0], limits)


def ellis_idempotent_check(E: EllisSemigroup) -> CheckResult:
    """Unique idempotent ``u`` in the minimal ideal, and ``f o u = u o f`` for all ``f``."""
    def failures():
        ideal_idem = [i for i in E.minimal_ideal if i in set(E.idempotents)]
        if len(ideal_idem) != 1:
            yield {"reason": "minimal ideal idempotents", "count": len(ideal_idem)}
            return
        u = ideal_idem[0]
        for f in range(E.order):
            if E.compose(f, u) != E.compose(u, f):
                yield {"reason": "f o u != u o f", "f": f}
                return
        ideal = set(E.minimal_ideal)
        for i in E.minimal_ideal:
            if E.compose(u, i) != i or i not in E.inverse:
                yield {"reason": "minimal ideal is not a group under u", "element": i}
                return
            for j in E.minimal_ideal:
                if E.compose(i, j) not in ideal:
                    yield {"reason": "minimal ideal not closed", "pair": (i, j)}
                    return
    return first_failure("ellis_idempotent", failures(),
                         {"order": E.order, "ideal": len(E.minimal_ideal)})


def ellis_associativity_check(E: EllisSemigroup) -> bool:
    n = E.order
    return all(E.compose(E.compose(a, b), c) == E.compose(a, E.compose(b, c))
               for a in range(n) for b in range(n) for c in range(n))


def quotient_isomorphism_check(G: FiniteGroup, K: int, E: EllisSemigroup) -> CheckResult:
    """``E`` is a group and ``gK -> pi_g`` is an isomorphism ``G/K -> E``.

    ``K`` is a normal subgroup computed independently of ``E``.
    """
    def failures():
        if not E.is_group():
            yield {"reason": "Ellis semigroup is not a group", "order": E.order,
                   "ideal": len(E.minimal_ideal)}
            return
        pi = E.generator_of
        for g in range(G.order):
            for h in range(G.order):
                if pi[G.table[g][h]] != E.compose(pi[g], pi[h]):
                    yield {"reason": "pi is not a homomorphism", "g": g, "h": h}
                    return
        if set(pi) != set(range(E.order)):
            yield {"reason": "pi is not onto E"}
            return
        kernel = bits.from_indices(g for g in range(G.order) if pi[g] == pi[0])
        if kernel != K:
            yield {"reason": "kernel differs from the given normal subgroup",
                   "kernel": bits.to_list(kernel), "expected": bits.to_list(K)}
            return
        if E.order * K.bit_count() != G.order:
            yield {"reason": "order mismatch", "E": E.order, "index": G.order // K.bit_count()}
    return first_failure("coset_ellis", failures(), {"order": E.order})


# ---------------------------------------------------------------------------
# Phi


def phi_maps(B: AtomPartition) -> dict:
    """For each type ``p`` of ``B#`` the map ``f_p`` on ``S(B)``.

    ``f_p(q)`` is the unique ``B``-type containing ``{A in B : dq(A) in p}``;
    since ``dq`` preserves unions it is enough to find the atom ``X`` with
    ``atom#(p)`` inside ``dq(X)``.
    """
    S = stone_flow(B)
    Bs = bsharp(B)
    n = S.size
    dq = [[dp_set(S, q, B.atoms[x]).mask for x in range(n)] for q in range(n)]
    maps = []
    bad = None
    for p in range(len(Bs.atoms)):
        Y = Bs.atoms[p]
        f = []
        for q in range(n):
            hits = [x for x in range(n) if Y & ~dq[q][x] == 0]
            if len(hits) != 1:
                bad = bad or {"reason": "f_p(q) is not a type", "p": p, "q": q}
                f.append(-1)
            else:
                f.append(hits[0])
        maps.append(tuple(f))
    return {"flow": S, "sharp": Bs, "dq": dq, "maps": maps, "bad": bad}


def phi_isomorphism_check(B: AtomPartition, limits: Limits | None = None) -> CheckResult:
    """Verify that ``p -> f_p`` is a G-semigroup isomorphism ``S(B#) -> E(S(B))``."""
    data = phi_maps(B)
    S, Bs, dq, maps = data["flow"], data["sharp"], data["dq"], data["maps"]
    G = B.carrier

    def failures():
        if data["bad"]:
            yield data["bad"]
            return
        for q in range(S.size):
            for x in range(S.size):
                if not is_member(Bs, dq[q][x]):
                    yield {"reason": "dq(A) is not in B#", "q": q, "atom": x}
                    return
        E = ellis_semigroup(S, limits)
        images = [E.index.get(f) for f in maps]
        if None in images:
            p = images.index(None)
            yield {"reason": "f_p is not in E(S(B))", "p": p}
            return
        if len(set(images)) != len(images):
            yield {"reason": "Phi is not injective"}
            return
        if len(images) != E.order:
            yield {"reason": "Phi is not onto E(S(B))", "types": len(images), "E": E.order}
            return
        Ss = stone_flow(Bs)
        for a in range(G.order):
            pa = S.action[a]
            for p in range(len(maps)):
                lhs = maps[Ss.action[a][p]]
                rhs = tuple(pa[v] for v in maps[p])
                if lhs != rhs:
                    yield {"reason": "Phi(ap) != pi_a o Phi(p)", "a": a, "p": p}
                    return
        for p in range(len(maps)):
            for q in range(len(maps)):
                r = star_by_definition(Ss, p, q)
                if maps[r] != _compose_maps(maps[p], maps[q]):
                    yield {"reason": "Phi(p*q) != Phi(p) o Phi(q)", "p": p, "q": q}
                    return
    return first_failure("phi", failures(),
                         {"types": S.size, "sharp_types": len(Bs.atoms)})


def symmetry_check(B: AtomPartition, members: Sequence[int] | None = None) -> CheckResult:
    """``dp*(A) in B`` and ``dq(A) in p  <=>  dp*(A) in q`` for all ``A``, ``p``, ``q``.

    ``members`` defaults to every member of ``B``.
    """
    S = stone_flow(B)
    Bs = bsharp(B)
    Ss = stone_flow(Bs)
    G = B.carrier
    if members is None:
        members = list(B.members())
    right = [Bs.right_action(x) for x in range(G.order)]

    def failures():
        for A in members:
            ids = set(B.ids_of(A))
            sharp_ids = set(Bs.ids_of(A))
            dq = [bits.from_indices(x for x in range(G.order) if S.action[x][q] in ids)
                  for q in range(S.size)]
            for p in range(Ss.size):
                dstar = bits.from_indices(x for x in range(G.order)
                                          if right[x][p] in sharp_ids)
                if not is_member(B, dstar):
                    yield {"reason": "dp*(A) not in B", "A": bits.to_list(A), "p": p}
                    return
                Yp = Bs.atoms[p]
                for q in range(S.size):
                    lhs = Yp & ~dq[q] == 0
                    rhs = bool(dstar & B.atoms[q])
                    if lhs != rhs:
                        yield {"reason": "dq(A) in p differs from dp*(A) in q",
                               "A": bits.to_list(A), "p": p, "q": q}
                        return
    return first_failure("symmetry", failures(), {"members": len(members)})


# ---------------------------------------------------------------------------
# genericity, stabilisers, decompositions


def genericity_of_set(B: AtomPartition, A) -> bool:
    """``A`` generic: finitely many left translates cover the group."""
    G = B.carrier
    mask = _mask_of(G, A)
    cover = 0
    for g in range(G.order):
        cover |= G.left_mask(g, mask)
        if cover == G.full_mask:
            return True
    return False


def orbits(S: StoneFlow) -> list[list[int]]:
    seen, out = set(), []
    for p in range(S.size):
        if p in seen:
            continue
        orb = sorted({S.action[g][p] for g in range(S.group.order)})
        seen.update(orb)
        out.append(orb)
    return out


def minimal_subflows(S: StoneFlow) -> list[list[int]]:
    """Minimal closed invariant subsets; for a group acting by permutations on a
    finite set these are the orbits."""
    out = []
    for orb in orbits(S):
        # a closed invariant subset of an orbit is the whole orbit
        sub = {orb[0]}
        frontier = [orb[0]]
        while frontier:
            p = frontier.pop()
            for g in range(S.group.order):
                r = S.action[g][p]
                if r not in sub:
                    sub.add(r)
                    frontier.append(r)
        if sorted(sub) == orb:
            out.append(orb)
    return out


def generic_types(S: StoneFlow) -> list[int]:
    """Types all of whose members are generic; it suffices to test the atom."""
    return [p for p in range(S.size) if genericity_of_set(S.algebra, S.algebra.atoms[p])]


def generic_minimal_check(S: StoneFlow) -> CheckResult:
    gen = generic_types(S)
    mins = minimal_subflows(S)

    def failures():
        if gen != list(range(S.size)):
            yield {"reason": "a type is not generic", "generic": gen}
        if len(mins) != 1:
            yield {"reason": "minimal subflow is not unique", "count": len(mins)}
        elif mins[0] != gen:
            yield {"reason": "minimal subflow differs from generic types"}
    return first_failure("genericity", failures(), {"generic": len(gen)})


def stab_type(S: StoneFlow, p) -> Subgroup:
    p = _type_id(p)
    return Subgroup(S.group, bits.from_indices(
        g for g in range(S.group.order) if S.action[g][p] == p))


def stab_type_by_cosets(S: StoneFlow, p, limits: Limits | None = None) -> Subgroup:
    """``Stab(p)`` as the intersection over subgroups ``H`` in ``B`` of the
    stabiliser ``aHa^-1`` of the coset ``pH``."""
    B, G = S.algebra, S.group
    p = _type_id(p)
    a = bits.lowest(B.atoms[p])
    core = G.full_mask
    for H in subgroups_in_algebra(B, limits):
        core &= G.conj_mask(a, H.mask)
    return Subgroup(G, core)


def restriction(Bs: AtomPartition, B: AtomPartition, p: int) -> int:
    """The ``B``-type below the ``B#``-type ``p``."""
    return B.atom_of[bits.lowest(Bs.atoms[p])]


def homogeneous_decomposition(B: AtomPartition) -> dict:
    """``K = {p : p|B = u|B}`` inside the generic ``B#``-types and the induced
    bijection ``p*K -> p|B`` onto the generic ``B``-types."""
    Bs = bsharp(B)
    Ss = stone_flow(Bs)
    S = stone_flow(B)
    G = B.carrier
    n = Ss.size
    tab = star_table(Ss)
    idem = [p for p in range(n) if tab[p][p] == p]
    problems = []
    if len(idem) != 1:
        problems.append({"reason": "idempotent count", "count": len(idem)})
    u = idem[0] if idem else 0
    uB = restriction(Bs, B, u)
    K = [p for p in range(n) if restriction(Bs, B, p) == uB]
    Kset = set(K)
    for p in K:
        for q in K:
            if tab[p][q] not in Kset:
                problems.append({"reason": "K not closed", "p": p, "q": q})
                break
    cosets = {}
    for p in range(n):
        cos = frozenset(tab[p][k] for k in K)
        img = {restriction(Bs, B, r) for r in cos}
        if len(img) != 1:
            problems.append({"reason": "p*K -> p|B not well defined", "p": p})
            continue
        cosets[cos] = img.pop()
    generic_B = generic_types(S)
    if sorted(cosets.values()) != generic_B:
        problems.append({"reason": "p*K -> p|B is not a bijection onto S^g(B)"})
    for g in range(G.order):
        for cos, t in cosets.items():
            moved = frozenset(Ss.action[g][r] for r in cos)
            if moved not in cosets or cosets[moved] != S.action[g][t]:
                problems.append({"reason": "not action preserving", "g": g})
                break
        else:
            continue
        break
    K_mask = 0
    for p in K:
        K_mask |= Bs.atoms[p]
    return {"u": u, "K": K, "K_elements": bits.to_list(K_mask), "cosets": len(cosets),
            "sharp_types": n, "problems": problems, "ok": not problems}


def profinite_completion(B: AtomPartition, limits: Limits | None = None) -> dict:
    """``G/G0_B`` and the map ``tau: p -> (pH)_H`` over the subgroups ``H`` in ``B``."""
    G = B.carrier
    S = stone_flow(B)
    fam = list(subgroups_in_algebra(B, limits))
    H0 = identity_atom(B)
    problems = []
    comp = G.full_mask
    for H in fam:
        comp &= H.mask
    if comp != H0.mask:
        problems.append({"reason": "intersection of subgroups differs from atom(e)"})

    def coset_id(H: Subgroup, mask: int) -> int:
        return bits.lowest(G.left_mask(bits.lowest(mask), H.mask))

    tau = [tuple(coset_id(H, B.atoms[p]) for H in fam) for p in range(S.size)]
    if len(set(tau)) != S.size:
        problems.append({"reason": "tau is not injective"})
    # compatible threads: cosets of every H in the family nested consistently
    threads = {tuple(coset_id(H, 1 << g) for H in fam) for g in range(G.order)}
    if set(tau) != threads:
        problems.append({"reason": "tau is not onto the inverse limit"})
    group_table = None
    if B.bi_invariant:
        Ss = S
        tab = star_table(Ss)
        for H in fam:
            if not is_normal(G, H):
                continue
            for p in range(S.size):
                for q in range(S.size):
                    lhs = coset_id(H, B.atoms[tab[p][q]])
                    rhs = coset_id(H, G.product_mask(
                        G.left_mask(bits.lowest(B.atoms[p]), H.mask),
                        G.left_mask(bits.lowest(B.atoms[q]), H.mask)))
                    if lhs != rhs:
                        problems.append({"reason": "(p*q)H != pH.qH", "p": p, "q": q})
        group_table = tab
    return {"index": G.order // len(H0), "component": H0.members(),
            "is_group": B.bi_invariant, "tau": tau, "group_table": group_table,
            "problems": problems, "ok": not problems}


def local_components_check(B: AtomPartition, limits: Limits | None = None) -> CheckResult:
    """Generic types biject with ``G/G0_B`` via ``p -> pG0_B`` (G-equivariantly),
    and ``Stab(p) = a G0_B a^-1`` for ``a`` in the atom of ``p``."""
    S = stone_flow(B)
    G = B.carrier
    H0 = connected_component_mask(B, limits)

    def coset_of(mask: int) -> int:
        return G.left_mask(bits.lowest(mask), H0)

    def failures():
        gen = generic_types(S)
        images = {}
        for p in gen:
            X = B.atoms[p]
            c = coset_of(X)
            if X & ~c:
                yield {"reason": "type does not lie in a coset of the component", "p": p}
                return
            images[p] = c
        if len(set(images.values())) != len(images):
            yield {"reason": "p -> pG0 is not injective"}
            return
        if len(images) * H0.bit_count() != G.order:
            yield {"reason": "p -> pG0 is not onto G/G0"}
            return
        for g in range(G.order):
            for p in gen:
                if images[S.action[g][p]] != G.left_mask(g, images[p]):
                    yield {"reason": "bijection does not commute with the action",
                           "g": g, "p": p}
                    return
        for p in gen:
            a = bits.lowest(B.atoms[p])
            if stab_type(S, p).mask != G.conj_mask(a, H0):
                yield {"reason": "Stab(p) != a G0 a^-1", "p": p}
                return
            if stab_type_by_cosets(S, p, limits).mask != G.conj_mask(a, H0):
                yield {"reason": "Stab(p) differs from intersection of H^p", "p": p}
                return
    return first_failure("local_components", failures(),
                         {"types": S.size, "component_order": H0.bit_count()})


def connected_component_mask(B: AtomPartition, limits: Limits | None = None) -> int:
    fam = subgroups_in_algebra(B, limits)
    core = B.carrier.full_mask
    for H in fam:
        core &= H.mask
    return core


def wap_note() -> CheckResult:
    """On a finite discrete type space every self-map is continuous."""
    return CheckResult("wap", True, None, {"note": "vacuous for finite type spaces"})


def coset_ellis_check(G: FiniteGroup, H, limits: Limits | None = None) -> CheckResult:
    """Ellis semigroup of the coset flow of ``H`` is ``G/core(H)``."""
    from stablesets.setalg import coset_algebra
    B = coset_algebra(G, H, limits)
    E = ellis_semigroup(stone_flow(B), limits)
    K = normal_core(G, H).mask
    res = quotient_isomorphism_check(G, K, E)
    res.details.update({"subgroup": bits.to_list(_mask_of(G, H)), "core": bits.to_list(K)})
    return res
