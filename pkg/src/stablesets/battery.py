"""Catalogue of small groups: one representative of every isomorphism class of
order at most 16, plus a few larger groups for spot checks."""

from __future__ import annotations

from functools import lru_cache

from stablesets.group_core import (FiniteGroup, build_group, center_mask, commutator_subgroup,
                                   cyclic, direct_product, enumerate_subgroups, is_normal,
                                   semidirect_product)

SPECS_UP_TO_16 = [
    ("C1", "cyclic:1"),
    ("C2", "cyclic:2"),
    ("C3", "cyclic:3"),
    ("C4", "cyclic:4"), ("C2^2", "product:cyclic:2,cyclic:2"),
    ("C5", "cyclic:5"),
    ("C6", "cyclic:6"), ("S3", "sym:3"),
    ("C7", "cyclic:7"),
    ("C8", "cyclic:8"), ("C4xC2", "product:cyclic:4,cyclic:2"),
    ("C2^3", "product:cyclic:2,product:cyclic:2,cyclic:2"),
    ("D4", "dihedral:4"), ("Q8", "dicyclic:2"),
    ("C9", "cyclic:9"), ("C3^2", "product:cyclic:3,cyclic:3"),
    ("C10", "cyclic:10"), ("D5", "dihedral:5"),
    ("C11", "cyclic:11"),
    ("C12", "cyclic:12"), ("C6xC2", "product:cyclic:6,cyclic:2"), ("D6", "dihedral:6"),
    ("A4", "alt:4"), ("Dic3", "dicyclic:3"),
    ("C13", "cyclic:13"),
    ("C14", "cyclic:14"), ("D7", "dihedral:7"),
    ("C15", "cyclic:15"),
    ("C16", "cyclic:16"), ("C8xC2", "product:cyclic:8,cyclic:2"),
    ("C4^2", "product:cyclic:4,cyclic:4"),
    ("C4xC2^2", "product:cyclic:4,product:cyclic:2,cyclic:2"),
    ("C2^4", "product:product:cyclic:2,cyclic:2,product:cyclic:2,cyclic:2"),
    ("D8", "dihedral:8"), ("Q16", "dicyclic:4"),
    ("SD16", "semidirect:8,2,3"), ("M16", "semidirect:8,2,5"),
    ("C4:C4", "semidirect:4,4,3"),
    ("D4xC2", "product:dihedral:4,cyclic:2"), ("Q8xC2", "product:dicyclic:2,cyclic:2"),
    ("(C4xC2):C2", None), ("Pauli", None),
]


def _c4c2_extension(name: str) -> FiniteGroup:
    N = direct_product(cyclic(4), cyclic(2))  # (x, y) has index 2x + y

    def idx(x, y):
        return 2 * (x % 4) + (y % 2)

    if name == "(C4xC2):C2":
        sigma = [idx(x, y + x) for x in range(4) for y in range(2)]
    else:  # central product of C4 and D4
        sigma = [idx(x + 2 * y, y) for x in range(4) for y in range(2)]
    return semidirect_product(N, sigma, 2, name=name)


@lru_cache(maxsize=None)
def group_by_name(name: str) -> FiniteGroup:
    for n, spec in SPECS_UP_TO_16:
        if n == name:
            G = build_group(spec) if spec else _c4c2_extension(name)
            G.name = name
            return G
    raise KeyError(name)


def groups_up_to(order: int) -> list[tuple[str, FiniteGroup]]:
    out = []
    for name, _ in SPECS_UP_TO_16:
        G = group_by_name(name)
        if G.order <= order:
            out.append((name, G))
    if order >= 17:
        for name, spec in EXTRA:
            G = _extra(name)
            if G.order <= order:
                out.append((name, G))
    return out


EXTRA = [("C18", "cyclic:18"), ("D9", "dihedral:9"), ("C20", "cyclic:20"),
         ("D10", "dihedral:10"), ("C7:C3", "semidirect:7,3,2"), ("Dic5", "dicyclic:5"),
         ("S4", "sym:4"), ("SL23", None), ("C24", "cyclic:24"), ("D12", "dihedral:12"),
         ("S3xC4", "product:sym:3,cyclic:4"), ("A4xC2", "product:alt:4,cyclic:2")]


@lru_cache(maxsize=None)
def _extra(name: str) -> FiniteGroup:
    spec = dict(EXTRA)[name]
    if spec is None:
        # SL(2, 3) as 2x2 matrices over F_3
        from stablesets.group_core import closure, from_elements

        def mul(x, y):
            a, b, c, d = x
            e, f, g, h = y
            return ((a * e + b * g) % 3, (a * f + b * h) % 3,
                    (c * e + d * g) % 3, (c * f + d * h) % 3)

        elems = sorted(closure([(1, 1, 0, 1), (0, 2, 1, 0)], mul, (1, 0, 0, 1)))
        elems.remove((1, 0, 0, 1))
        G = from_elements([(1, 0, 0, 1)] + elems, mul, name=name)
    else:
        G = build_group(spec)
    G.name = name
    return G


def fingerprint(G: FiniteGroup) -> tuple:
    """Cheap isomorphism invariants."""
    orders = sorted(G.element_order(g) for g in range(G.order))
    subs = enumerate_subgroups(G)
    return (G.order, tuple(orders), center_mask(G).bit_count(), len(subs),
            len(commutator_subgroup(G)),
            sum(1 for H in subs if is_normal(G, H)))
