"""Finite Boolean algebras of subsets of a group, stored by their atoms.

An algebra is never enumerated member by member; a set belongs to it iff it is
a union of atoms.  Atom ids are assigned in order of least element.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from stablesets import bits
from stablesets.group_core import (FiniteGroup, GroupSubset, Subgroup, _mask_of,
                                   as_subgroup, generate_mask, subgroup_sort_key)
from stablesets.limits import Limits, get_limits

CLOSURES = ("none", "left", "bi")


class CarrierMismatch(ValueError):
    pass


class NotInvariant(ValueError):
    pass


class NotAMember(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AtomPartition:
    carrier: FiniteGroup
    atoms: tuple  # bitsets, sorted by least element
    atom_of: tuple  # element -> atom id
    left_invariant: bool
    bi_invariant: bool

    @property
    def size(self) -> int:
        return len(self.atoms)

    def __len__(self):
        return len(self.atoms)

    def __eq__(self, other):
        if not isinstance(other, AtomPartition):
            return NotImplemented
        return self.carrier is other.carrier and self.atoms == other.atoms

    def __hash__(self):
        return hash(self.atoms)

    def atom(self, i: int) -> GroupSubset:
        return GroupSubset(self.carrier, self.atoms[i])

    def atom_containing(self, g: int) -> int:
        return self.atoms[self.atom_of[g]]

    def upper(self, mask: int) -> int:
        """Least member containing ``mask``."""
        out = 0
        atoms, atom_of = self.atoms, self.atom_of
        while mask:
            low = mask & -mask
            a = atoms[atom_of[low.bit_length() - 1]]
            out |= a
            mask &= ~a
        return out

    def ids_of(self, mask: int) -> list[int]:
        """Atom ids meeting ``mask``."""
        out = []
        atoms, atom_of = self.atoms, self.atom_of
        while mask:
            low = mask & -mask
            i = atom_of[low.bit_length() - 1]
            out.append(i)
            mask &= ~atoms[i]
        return sorted(out)

    def union(self, ids: Iterable[int]) -> int:
        out = 0
        for i in ids:
            out |= self.atoms[i]
        return out

    def left_action(self, g: int) -> list[int]:
        """Atom permutation ``X -> gX`` (left-invariant algebras only)."""
        if not self.left_invariant:
            raise NotInvariant("algebra is not left-invariant")
        G = self.carrier
        row = G.table[g]
        return [self.atom_of[row[bits.lowest(X)]] for X in self.atoms]

    def right_action(self, g: int) -> list[int]:
        """Atom permutation ``X -> Xg`` (bi-invariant algebras only)."""
        if not self.bi_invariant:
            raise NotInvariant("algebra is not bi-invariant")
        t = self.carrier.table
        return [self.atom_of[t[bits.lowest(X)][g]] for X in self.atoms]

    def refines(self, other: "AtomPartition") -> bool:
        """Every atom of ``other`` is a union of atoms of ``self``."""
        return self.carrier is other.carrier and all(
            is_member(self, X) for X in other.atoms)

    def members(self, limits: Limits | None = None) -> Iterator[int]:
        """Every member, as a mask (refuses above the member_enum cap)."""
        limits = limits or get_limits()
        limits.check("member_enum", 2 ** len(self.atoms))
        atoms = self.atoms
        for pick in range(2 ** len(atoms)):
            out = 0
            for i in bits.iter_bits(pick):
                out |= atoms[i]
            yield out


def _from_signatures(G: FiniteGroup, sig: Sequence, limits: Limits) -> tuple[tuple, tuple]:
    classes: dict = {}
    atom_of = [0] * G.order
    for x in range(G.order):
        classes.setdefault(sig[x], len(classes))
        atom_of[x] = classes[sig[x]]
        if len(classes) > limits.atom_limit:
            limits.check("atom_limit", len(classes))
    atoms = [0] * len(classes)
    for x in range(G.order):
        atoms[atom_of[x]] |= 1 << x
    # ids already follow least element since x runs upwards
    return tuple(atoms), tuple(atom_of)


def _partition_is_left_invariant(G: FiniteGroup, atoms: tuple, atom_of: tuple) -> bool:
    for g in range(G.order):
        for X in atoms:
            Y = G.left_mask(g, X)
            if atoms[atom_of[bits.lowest(Y)]] != Y:
                return False
    return True


def _partition_is_right_invariant(G: FiniteGroup, atoms: tuple, atom_of: tuple) -> bool:
    for g in range(G.order):
        for X in atoms:
            Y = G.right_mask(X, g)
            if atoms[atom_of[bits.lowest(Y)]] != Y:
                return False
    return True


def partition_algebra(G: FiniteGroup, atoms: Iterable, limits: Limits | None = None
                      ) -> AtomPartition:
    """Wrap an explicit partition of ``G``, computing the invariance flags."""
    limits = limits or get_limits()
    masks = sorted((_mask_of(G, X) for X in atoms), key=bits.lowest)
    if any(m == 0 for m in masks):
        raise ValueError("empty block in partition")
    total = 0
    for m in masks:
        if total & m:
            raise ValueError("blocks overlap")
        total |= m
    if total != G.full_mask:
        raise ValueError("blocks do not cover the group")
    limits.check("atom_limit", len(masks))
    atom_of = [0] * G.order
    for i, m in enumerate(masks):
        for x in bits.iter_bits(m):
            atom_of[x] = i
    atoms, atom_of = tuple(masks), tuple(atom_of)
    left = _partition_is_left_invariant(G, atoms, atom_of)
    bi = left and _partition_is_right_invariant(G, atoms, atom_of)
    return AtomPartition(G, atoms, atom_of, left, bi)


def algebra_generated(G: FiniteGroup, family: Sequence, closure: str = "none",
                      limits: Limits | None = None) -> AtomPartition:
    """Atoms of the algebra generated by ``family`` and, depending on
    ``closure``, all its left translates or all its two-sided translates.

    Two elements share an atom iff no generating set separates them.  For the
    left closure ``x`` lies in ``gA`` iff ``g`` lies in ``x A^-1``, so the
    signature of ``x`` is the tuple of masks ``x A^-1``.
    """
    limits = limits or get_limits()
    if closure not in CLOSURES:
        raise ValueError(f"closure must be one of {CLOSURES}")
    masks = [_mask_of(G, A) for A in family]
    for m in masks:
        if m >> G.order:
            raise CarrierMismatch("family member outside the carrier")
    n = G.order
    if closure == "none":
        sig = [tuple(m >> x & 1 for m in masks) for x in range(n)]
        atoms, atom_of = _from_signatures(G, sig, limits)
        left = _partition_is_left_invariant(G, atoms, atom_of)
        bi = left and _partition_is_right_invariant(G, atoms, atom_of)
        return AtomPartition(G, atoms, atom_of, left, bi)
    inv_masks = [G.inverse_mask(m) for m in masks]
    sig = [tuple(G.left_mask(x, im) for im in inv_masks) for x in range(n)]
    atoms, atom_of = _from_signatures(G, sig, limits)
    B = AtomPartition(G, atoms, atom_of, True,
                      _partition_is_right_invariant(G, atoms, atom_of))
    if closure == "bi":
        return bsharp(B, limits)
    return B


def coset_algebra(G: FiniteGroup, H, limits: Limits | None = None) -> AtomPartition:
    """The left-invariant algebra whose atoms are the left cosets of ``H``."""
    H = as_subgroup(G, H)
    return algebra_generated(G, [H.mask], "left", limits)


def trivial_algebra(G: FiniteGroup) -> AtomPartition:
    return AtomPartition(G, (G.full_mask,), (0,) * G.order, True, True)


def power_set_algebra(G: FiniteGroup) -> AtomPartition:
    return AtomPartition(G, tuple(1 << g for g in range(G.order)), tuple(range(G.order)),
                         True, True)


def bsharp(B: AtomPartition, limits: Limits | None = None) -> AtomPartition:
    """Smallest bi-invariant algebra containing the left-invariant ``B``.

    It is generated by the right translates ``Xh`` of the atoms, so ``x`` and
    ``y`` share a new atom iff ``xh`` and ``yh`` share a ``B``-atom for every ``h``.
    """
    limits = limits or get_limits()
    if not B.left_invariant:
        raise NotInvariant("bsharp needs a left-invariant algebra")
    if B.bi_invariant:
        return B
    G = B.carrier
    t, atom_of = G.table, B.atom_of
    sig = [bytes_or_tuple([atom_of[v] for v in t[x]], len(B.atoms)) for x in range(G.order)]
    atoms, new_of = _from_signatures(G, sig, limits)
    return AtomPartition(G, atoms, new_of, True, True)


def bytes_or_tuple(seq: list[int], bound: int):
    return bytes(seq) if bound <= 256 else tuple(seq)


def is_member(B: AtomPartition, A) -> bool:
    if isinstance(A, GroupSubset) and A.group is not B.carrier:
        raise CarrierMismatch("set lives on a different carrier")
    mask = _mask_of(B.carrier, A)
    if mask >> B.carrier.order:
        raise CarrierMismatch("set has elements outside the carrier")
    return B.upper(mask) == mask


def require_member(B: AtomPartition, A) -> int:
    mask = _mask_of(B.carrier, A)
    if not is_member(B, mask):
        raise NotAMember("set is not a member of the algebra")
    return mask


@dataclass(frozen=True)
class SubgroupFamily:
    subgroups: tuple  # Subgroup, canonical order

    def __len__(self):
        return len(self.subgroups)

    def __iter__(self):
        return iter(self.subgroups)

    def masks(self) -> list[int]:
        return [H.mask for H in self.subgroups]


def _closure_in(B: AtomPartition, gens: list[int]) -> tuple[int, list[int]]:
    """Smallest subgroup in ``B`` containing ``gens``, plus a generating list."""
    G = B.carrier
    gens = list(gens)
    while True:
        h = generate_mask(G, gens)
        up = B.upper(h)
        if up == h:
            return h, gens
        gens.append(bits.lowest(up & ~h))


_FAMILY_CACHE: dict = {}


def subgroups_in_algebra(B: AtomPartition, limits: Limits | None = None) -> SubgroupFamily:
    """Every subgroup of the carrier which is a union of atoms.

    Breadth-first from the least subgroup in ``B``; each step adjoins one
    atom outside the current subgroup and closes up.  Every subgroup in ``B``
    is reached along a chain inside it.
    """
    limits = limits or get_limits()
    key = (B.carrier, B.atoms, limits.subgroup_nodes)
    hit = _FAMILY_CACHE.get(key)
    if hit is not None:
        return hit
    fam = _search_subgroups(B, limits)
    if len(_FAMILY_CACHE) > 2048:
        _FAMILY_CACHE.clear()
    _FAMILY_CACHE[key] = fam
    return fam


def _search_subgroups(B: AtomPartition, limits: Limits) -> SubgroupFamily:
    start, sgens = _closure_in(B, [])
    found = {start: sgens}
    queue = [start]
    for h in queue:
        gens = found[h]
        for i in range(len(B.atoms)):
            X = B.atoms[i]
            if X & h:
                continue
            k, kg = _closure_in(B, gens + [bits.lowest(X)])
            if k not in found:
                found[k] = kg
                queue.append(k)
                limits.check("subgroup_nodes", len(found))
    G = B.carrier
    return SubgroupFamily(tuple(Subgroup(G, m) for m in sorted(found, key=subgroup_sort_key)))


def connected_component(B: AtomPartition, limits: Limits | None = None) -> Subgroup:
    """Intersection of all subgroups in ``B`` (all have finite index here)."""
    fam = subgroups_in_algebra(B, limits)
    core = B.carrier.full_mask
    for H in fam:
        core &= H.mask
    return Subgroup(B.carrier, core)


def identity_atom(B: AtomPartition) -> Subgroup:
    """``atom(e)``; a subgroup whenever ``B`` is left-invariant."""
    if not B.left_invariant:
        raise NotInvariant("identity atom is a subgroup only for left-invariant algebras")
    return Subgroup(B.carrier, B.atoms[B.atom_of[0]])


def naive_refinement(G: FiniteGroup, family: Sequence, closure: str = "none") -> list[int]:
    """Reference implementation: split blocks by every translate until stable.

    Used as an independent oracle; quadratic-ish and slow on purpose.
    """
    masks = [_mask_of(G, A) for A in family]
    if closure == "none":
        gens = masks
    elif closure == "left":
        gens = [G.left_mask(g, m) for m in masks for g in range(G.order)]
    else:
        gens = [G.right_mask(G.left_mask(g, m), h) for m in masks
                for g in range(G.order) for h in range(G.order)]
    blocks = [G.full_mask]
    changed = True
    while changed:
        changed = False
        nxt = []
        for blk in blocks:
            parts = [blk]
            for s in gens:
                split = []
                for p in parts:
                    inside, outside = p & s, p & ~s
                    split.extend(q for q in (inside, outside) if q)
                parts = split
            if len(parts) > 1:
                changed = True
            nxt.extend(parts)
        blocks = nxt
    return sorted(blocks, key=bits.lowest)


def all_subsets(G: FiniteGroup, nonempty: bool = False) -> Iterator[int]:
    start = 1 if nonempty else 0
    return iter(range(start, 1 << G.order))


def single_subset_algebras(G: FiniteGroup) -> dict[tuple, int]:
    """Distinct left-invariant algebras generated by one subset.

    Returns ``{atoms: first generating mask}``; many subsets give the same algebra.
    """
    seen: dict[tuple, int] = {}
    lim = get_limits()
    for A in range(1 << G.order):
        B = algebra_generated(G, [A], "left", lim)
        seen.setdefault(B.atoms, A)
    return seen


def algebra_signature(B: AtomPartition) -> tuple:
    return tuple(B.atoms)


def subsets_of_ids(count: int) -> Iterator[tuple]:
    for r in range(count + 1):
        yield from itertools.combinations(range(count), r)
