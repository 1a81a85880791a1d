"""Finite group arithmetic on Cayley tables.

Elements are the indices ``0..order-1``; the identity is always index 0.
Subsets of a group are bitsets (Python ints) wrapped in :class:`GroupSubset`.

Element orderings per family:

* ``cyclic:n``      residues ``0..n-1``.
* ``dihedral:n``    order ``2n``; ``r^k s^e`` has index ``e*n + k``.
* ``sym:n``         permutations of ``0..n-1`` in lexicographic one-line
                    notation, composed right to left: ``(s*t)(x) = s(t(x))``.
* ``alt:n``         even permutations, same ordering and composition.
* ``dicyclic:n``    order ``4n``; ``a^k x^e`` has index ``e*2n + k``.
* ``semidirect:m,n,r``  ``C_m x| C_n`` with the generator of ``C_n`` acting by
                    multiplication by ``r``; ``(a, b)`` has index ``b*m + a``.
* ``product:G,H``   pairs ``(g, h)`` lexicographic, index ``g*|H| + h``.
* ``perm:(0 1 2),(0 1)``  permutation group generated by the listed cycles,
                    ordered like ``sym``.
* ``cayley:path``   table read from a file (see :func:`read_cayley_file`).
"""

from __future__ import annotations

import itertools
import math
import random
import re
from array import array
from pathlib import Path
from typing import Callable, Hashable, Iterable, Sequence

from stablesets import bits
from stablesets.limits import Limits, get_limits


class GroupSpecError(ValueError):
    pass


class InvalidTable(ValueError):
    pass


class NotASubgroup(ValueError):
    pass


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[g][h]`` is the index of ``g*h``.
    """

    __slots__ = ("order", "table", "inverses", "labels", "name", "_conj_cache")

    def __init__(self, table: Sequence[Sequence[int]], labels=None, name: str = ""):
        n = len(table)
        if n == 0:
            raise InvalidTable("empty table")
        code = "H" if n < 2**16 else "L"
        self.order = n
        self.table = [array(code, row) for row in table]
        inv = [0] * n
        for g in range(n):
            row = self.table[g]
            for h in range(n):
                if row[h] == 0:
                    inv[g] = h
                    break
        self.inverses = inv
        self.labels = list(labels) if labels is not None else list(range(n))
        self.name = name
        self._conj_cache = {}

    identity = 0

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def __len__(self):
        return self.order

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inv(self, g: int) -> int:
        return self.inverses[g]

    @property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def label(self, g: int) -> str:
        return str(self.labels[g])

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[g][h] == t[h][g] for g in range(self.order) for h in range(g))

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.table[x][g]
            k += 1
        return k

    # subset arithmetic on masks

    def left_mask(self, g: int, mask: int) -> int:
        """``g * A``."""
        return bits.image(mask, self.table[g])

    def right_mask(self, mask: int, g: int) -> int:
        """``A * g``."""
        t = self.table
        out = 0
        for a in bits.iter_bits(mask):
            out |= 1 << t[a][g]
        return out

    def inverse_mask(self, mask: int) -> int:
        return bits.image(mask, self.inverses)

    def conjugation_map(self, a: int) -> list[int]:
        """The map ``x -> a x a^-1`` as a list."""
        cached = self._conj_cache.get(a)
        if cached is None:
            t, ai = self.table, self.inverses[a]
            cached = [t[t[a][x]][ai] for x in range(self.order)]
            if len(self._conj_cache) < 4096:
                self._conj_cache[a] = cached
        return cached

    def conj_mask(self, a: int, mask: int) -> int:
        """``a * A * a^-1``."""
        return bits.image(mask, self.conjugation_map(a))

    def product_mask(self, a_mask: int, b_mask: int) -> int:
        """``A * B``."""
        t = self.table
        out = 0
        bl = bits.to_list(b_mask)
        for a in bits.iter_bits(a_mask):
            row = t[a]
            for b in bl:
                out |= 1 << row[b]
        return out

    def subset(self, members: Iterable[int] | int) -> "GroupSubset":
        if isinstance(members, int):
            return GroupSubset(self, members)
        return GroupSubset(self, bits.from_indices(members))


class GroupSubset:
    """A subset of a fixed :class:`FiniteGroup`, stored as a bitset."""

    __slots__ = ("group", "mask")

    def __init__(self, group: FiniteGroup, mask: int):
        if mask < 0 or mask >> group.order:
            raise ValueError("members outside the carrier")
        self.group = group
        self.mask = mask

    def members(self) -> list[int]:
        return bits.to_list(self.mask)

    def __iter__(self):
        return bits.iter_bits(self.mask)

    def __len__(self):
        return self.mask.bit_count()

    def __contains__(self, g: int) -> bool:
        return bool(self.mask >> g & 1)

    def __eq__(self, other):
        if isinstance(other, GroupSubset):
            return self.group is other.group and self.mask == other.mask
        return NotImplemented

    def __hash__(self):
        return hash(self.mask)

    def _same(self, other: "GroupSubset") -> int:
        if other.group is not self.group:
            raise ValueError("subsets of different groups")
        return other.mask

    def __and__(self, other):
        return GroupSubset(self.group, self.mask & self._same(other))

    def __or__(self, other):
        return GroupSubset(self.group, self.mask | self._same(other))

    def __xor__(self, other):
        return GroupSubset(self.group, self.mask ^ self._same(other))

    def __sub__(self, other):
        return GroupSubset(self.group, self.mask & ~self._same(other))

    def complement(self) -> "GroupSubset":
        return GroupSubset(self.group, self.group.full_mask & ~self.mask)

    def left(self, g: int) -> "GroupSubset":
        return GroupSubset(self.group, self.group.left_mask(g, self.mask))

    def right(self, g: int) -> "GroupSubset":
        return GroupSubset(self.group, self.group.right_mask(self.mask, g))

    def inverse(self) -> "GroupSubset":
        return GroupSubset(self.group, self.group.inverse_mask(self.mask))

    def __repr__(self):
        labels = ", ".join(self.group.label(g) for g in self)
        return f"{{{labels}}}"


class Subgroup(GroupSubset):
    __slots__ = ()

    @property
    def index(self) -> int:
        return self.group.order // len(self)

    def __repr__(self):
        return f"Subgroup(order={len(self)}, index={self.index}, {super().__repr__()})"


def _mask_of(G: FiniteGroup, S) -> int:
    if isinstance(S, GroupSubset):
        if S.group is not G:
            raise ValueError("subset of a different group")
        return S.mask
    if isinstance(S, int):
        return S
    return bits.from_indices(S)


# ---------------------------------------------------------------------------
# validation


def validate_table(table: Sequence[Sequence[int]], limits: Limits | None = None,
                   seed: int = 0) -> None:
    """Raise :class:`InvalidTable` unless ``table`` is a group table with
    identity at index 0."""
    limits = limits or get_limits()
    n = len(table)
    want = list(range(n))
    for g, row in enumerate(table):
        if len(row) != n:
            raise InvalidTable(f"row {g} has length {len(row)}, expected {n}")
        if sorted(row) != want:
            raise InvalidTable(f"row {g} is not a permutation")
    for h in range(n):
        if sorted(table[g][h] for g in range(n)) != want:
            raise InvalidTable(f"column {h} is not a permutation")
    if list(table[0]) != want or [table[g][0] for g in range(n)] != want:
        raise InvalidTable("index 0 is not the identity")
    if n <= limits.full_assoc_order:
        for a in range(n):
            ta = table[a]
            for b in range(n):
                tab = table[ta[b]]
                tb = table[b]
                for c in range(n):
                    if tab[c] != ta[tb[c]]:
                        raise InvalidTable(f"associativity fails at ({a}, {b}, {c})")
    else:
        rng = random.Random(seed)
        for _ in range(200_000):
            a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise InvalidTable(f"associativity fails at ({a}, {b}, {c})")


# ---------------------------------------------------------------------------
# constructors


def from_elements(elements: Sequence[Hashable], mul: Callable, name: str = "",
                  limits: Limits | None = None) -> FiniteGroup:
    """Cayley table of an explicitly listed group; ``elements[0]`` must be the identity."""
    limits = limits or get_limits()
    limits.check("max_order", len(elements))
    index = {x: i for i, x in enumerate(elements)}
    if len(index) != len(elements):
        raise InvalidTable("repeated elements")
    try:
        table = [[index[mul(x, y)] for y in elements] for x in elements]
    except KeyError as exc:
        raise InvalidTable(f"not closed under multiplication: {exc}") from None
    return FiniteGroup(table, labels=elements, name=name)


def closure(generators: Iterable[Hashable], mul: Callable, identity: Hashable,
            limits: Limits | None = None) -> list:
    limits = limits or get_limits()
    gens = list(generators)
    seen = {identity}
    elems = [identity]
    for x in elems:
        for s in gens:
            y = mul(x, s)
            if y not in seen:
                seen.add(y)
                elems.append(y)
                limits.check("max_order", len(elems))
    return elems


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupSpecError("cyclic order must be positive")
    get_limits().check("max_order", n)
    return FiniteGroup([[(g + h) % n for h in range(n)] for g in range(n)],
                       name=f"cyclic:{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    if n < 1:
        raise GroupSpecError("dihedral parameter must be positive")
    get_limits().check("max_order", 2 * n)
    elems = [(k, e) for e in range(2) for k in range(n)]

    def mul(x, y):
        k1, e1 = x
        k2, e2 = y
        return ((k1 + (-k2 if e1 else k2)) % n, (e1 + e2) % 2)

    labels = [f"r{k}" + ("s" if e else "") for k, e in elems]
    g = from_elements(elems, mul, name=f"dihedral:{n}")
    g.labels = labels
    return g


def _compose(s: tuple, t: tuple) -> tuple:
    return tuple(s[x] for x in t)


def _parity(p: tuple) -> int:
    seen, par = set(), 0
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        par ^= (length - 1) & 1
    return par


def sym(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupSpecError("sym degree must be positive")
    get_limits().check("max_order", math.factorial(n))
    elems = list(itertools.permutations(range(n)))
    return from_elements(elems, _compose, name=f"sym:{n}")


def alt(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupSpecError("alt degree must be positive")
    get_limits().check("max_order", max(1, math.factorial(n) // 2))
    elems = [p for p in itertools.permutations(range(n)) if _parity(p) == 0]
    return from_elements(elems, _compose, name=f"alt:{n}")


def dicyclic(n: int) -> FiniteGroup:
    """Order 4n: a^(2n) = 1, x^2 = a^n, x a x^-1 = a^-1. ``dicyclic:2`` is Q8."""
    if n < 1:
        raise GroupSpecError("dicyclic parameter must be positive")
    get_limits().check("max_order", 4 * n)
    m = 2 * n
    elems = [(k, e) for e in range(2) for k in range(m)]

    def mul(x, y):
        k1, e1 = x
        k2, e2 = y
        if not e1:
            return ((k1 + k2) % m, e2)
        if not e2:
            return ((k1 - k2) % m, 1)
        return ((k1 - k2 + n) % m, 0)

    return from_elements(elems, mul, name=f"dicyclic:{n}")


def metacyclic(m: int, n: int, r: int) -> FiniteGroup:
    """``C_m x| C_n`` where the generator of ``C_n`` multiplies by ``r``."""
    if m < 1 or n < 1 or math.gcd(r, m) != 1 or pow(r, n, m) != 1 % m:
        raise GroupSpecError(f"semidirect:{m},{n},{r} needs gcd(r,m)=1 and r^n = 1 mod m")
    get_limits().check("max_order", m * n)
    powers = [pow(r, b, m) for b in range(n)]
    elems = [(a, b) for b in range(n) for a in range(m)]

    def mul(x, y):
        return ((x[0] + powers[x[1]] * y[0]) % m, (x[1] + y[1]) % n)

    return from_elements(elems, mul, name=f"semidirect:{m},{n},{r}")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    get_limits().check("max_order", G.order * H.order)
    m = H.order
    tg, th = G.table, H.table
    table = [[tg[g1][g2] * m + th[h1][h2] for g2 in range(G.order) for h2 in range(m)]
             for g1 in range(G.order) for h1 in range(m)]
    labels = [(G.labels[g], H.labels[h]) for g in range(G.order) for h in range(m)]
    return FiniteGroup(table, labels=labels, name=f"product:{G.name},{H.name}")


def semidirect_product(N: FiniteGroup, sigma: Sequence[int], n: int,
                       name: str = "") -> FiniteGroup:
    """``N x| C_n`` where the generator of ``C_n`` acts by the automorphism ``sigma``.

    ``(x, k)`` has index ``k*|N| + x``.
    """
    size = N.order
    t = N.table
    if sorted(sigma) != list(range(size)) or sigma[0] != 0:
        raise GroupSpecError("sigma is not a permutation fixing the identity")
    for x in range(size):
        for y in range(size):
            if sigma[t[x][y]] != t[sigma[x]][sigma[y]]:
                raise GroupSpecError("sigma is not an automorphism")
    powers = [list(range(size))]
    for _ in range(1, n + 1):
        powers.append([sigma[v] for v in powers[-1]])
    if powers[n] != powers[0]:
        raise GroupSpecError("sigma^n is not the identity")
    get_limits().check("max_order", size * n)
    table = []
    for k in range(n):
        pk = powers[k]
        for x in range(size):
            tx = t[x]
            table.append([((k + l) % n) * size + tx[pk[y]]
                          for l in range(n) for y in range(size)])
    labels = [(N.labels[x], k) for k in range(n) for x in range(size)]
    return FiniteGroup(table, labels=labels, name=name or f"{N.name}x|C{n}")


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> list[list[int]]:
    """``"(0 1 2)(3 4)"`` -> ``[[0, 1, 2], [3, 4]]``."""
    cycles = []
    rest = _CYCLE_RE.sub("", text).strip()
    if rest:
        raise GroupSpecError(f"bad cycle notation: {text!r}")
    for body in _CYCLE_RE.findall(text):
        pts = [int(p) for p in body.replace(",", " ").split()]
        if len(set(pts)) != len(pts):
            raise GroupSpecError(f"repeated point in cycle ({body})")
        cycles.append(pts)
    return cycles


def cycles_to_perm(cycles: Sequence[Sequence[int]], degree: int) -> tuple:
    p = list(range(degree))
    for cyc in cycles:
        for i, x in enumerate(cyc):
            p[x] = cyc[(i + 1) % len(cyc)]
    return tuple(p)


def permutation_group(generators: Sequence[Sequence[Sequence[int]]],
                      degree: int | None = None) -> FiniteGroup:
    pts = [x for g in generators for cyc in g for x in cyc]
    if degree is None:
        degree = max(pts, default=0) + 1
    perms = [cycles_to_perm(g, degree) for g in generators]
    ident = tuple(range(degree))
    elems = sorted(closure(perms, _compose, ident))
    name = "perm:" + ",".join("".join(f"({' '.join(map(str, c))})" for c in g) or "()"
                              for g in generators)
    return from_elements(elems, _compose, name=name)


def read_cayley_file(path: str | Path, limits: Limits | None = None) -> FiniteGroup:
    """Read a table: line 1 ``order n``, then n rows of n 0-based indices."""
    limits = limits or get_limits()
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise GroupSpecError("empty Cayley file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "order" or not head[1].isdigit():
        raise GroupSpecError("first line must be 'order n'")
    n = int(head[1])
    limits.check("max_order", n)
    if len(lines) != n + 1:
        raise GroupSpecError(f"expected {n} table rows, found {len(lines) - 1}")
    try:
        table = [[int(v) for v in ln.split()] for ln in lines[1:]]
    except ValueError:
        raise GroupSpecError("non-integer table entry") from None
    validate_table(table, limits)
    return FiniteGroup(table, name=f"cayley:{path}")


def write_cayley_file(G: FiniteGroup, path: str | Path) -> None:
    rows = [" ".join(str(v) for v in G.table[g]) for g in range(G.order)]
    Path(path).write_text(f"order {G.order}\n" + "\n".join(rows) + "\n")


def _split_top_commas(text: str) -> list[int]:
    depth, out = 0, []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append(i)
    return out


def _strip_parens(text: str) -> str:
    text = text.strip()
    while text.startswith("(") and text.endswith(")") and _balanced(text[1:-1]):
        text = text[1:-1].strip()
    return text


def _balanced(text: str) -> bool:
    depth = 0
    for ch in text:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


def _int_args(args: str, count: int, spec: str) -> list[int]:
    parts = [p.strip() for p in args.split(",")]
    if len(parts) != count or not all(re.fullmatch(r"-?\d+", p) for p in parts):
        raise GroupSpecError(f"malformed group spec {spec!r}")
    return [int(p) for p in parts]


def build_group(spec: str, limits: Limits | None = None) -> FiniteGroup:
    """Build a group from a spec string such as ``sym:3`` or
    ``product:cyclic:2,cyclic:2``; see the module docstring for the families."""
    limits = limits or get_limits()
    spec = _strip_parens(spec)
    family, sep, args = spec.partition(":")
    if not sep:
        raise GroupSpecError(f"malformed group spec {spec!r}")
    family = family.strip()
    if family == "cyclic":
        (n,) = _int_args(args, 1, spec)
        return cyclic(n)
    if family == "dihedral":
        (n,) = _int_args(args, 1, spec)
        return dihedral(n)
    if family == "sym":
        (n,) = _int_args(args, 1, spec)
        return sym(n)
    if family == "alt":
        (n,) = _int_args(args, 1, spec)
        return alt(n)
    if family == "dicyclic":
        (n,) = _int_args(args, 1, spec)
        return dicyclic(n)
    if family == "semidirect":
        m, n, r = _int_args(args, 3, spec)
        return metacyclic(m, n, r)
    if family == "product":
        for cut in _split_top_commas(args):
            try:
                left = build_group(args[:cut], limits)
                right = build_group(args[cut + 1:], limits)
            except GroupSpecError:
                continue
            return direct_product(left, right)
        raise GroupSpecError(f"malformed product spec {spec!r}")
    if family == "perm":
        gens = []
        for piece in re.split(r",\s*(?=\()", args.strip()):
            if piece.strip():
                gens.append(parse_cycles(piece.strip()))
        if not gens:
            raise GroupSpecError("perm: needs at least one generator")
        return permutation_group(gens)
    if family == "cayley":
        return read_cayley_file(args, limits)
    raise GroupSpecError(f"unknown group family {family!r}")


# ---------------------------------------------------------------------------
# subgroups


def generate_mask(G: FiniteGroup, gens: Iterable[int]) -> int:
    """Mask of the subgroup generated by ``gens``."""
    gens = [g for g in gens if g != 0]
    t = G.table
    mask, elems = 1, [0]
    for x in elems:
        row = t[x]
        for s in gens:
            y = row[s]
            if not mask >> y & 1:
                mask |= 1 << y
                elems.append(y)
    return mask


def subgroup_generated(G: FiniteGroup, S) -> Subgroup:
    """Smallest subgroup containing ``S`` (trivial for empty ``S``)."""
    return Subgroup(G, generate_mask(G, bits.iter_bits(_mask_of(G, S))))


def is_subgroup_mask(G: FiniteGroup, mask: int) -> bool:
    if not mask & 1:
        return False
    members = bits.to_list(mask)
    t = G.table
    for a in members:
        row = t[a]
        for b in members:
            if not mask >> row[b] & 1:
                return False
    return True


def as_subgroup(G: FiniteGroup, H) -> Subgroup:
    mask = _mask_of(G, H)
    if not is_subgroup_mask(G, mask):
        raise NotASubgroup("not a subgroup")
    return Subgroup(G, mask)


def conjugate_subgroup(G: FiniteGroup, H, a: int) -> Subgroup:
    """``a H a^-1``."""
    H = as_subgroup(G, H)
    return Subgroup(G, G.conj_mask(a, H.mask))


def normal_core(G: FiniteGroup, H) -> Subgroup:
    """Intersection of all conjugates of ``H``."""
    H = as_subgroup(G, H)
    core = H.mask
    for a in range(G.order):
        core &= G.conj_mask(a, H.mask)
        if core == 1:
            break
    return Subgroup(G, core)


def is_normal(G: FiniteGroup, H) -> bool:
    mask = _mask_of(G, H)
    return all(G.conj_mask(a, mask) == mask for a in range(G.order))


def left_cosets(G: FiniteGroup, H) -> list[GroupSubset]:
    """Left cosets ``gH`` ordered by least element."""
    H = as_subgroup(G, H)
    out, rest = [], G.full_mask
    while rest:
        g = bits.lowest(rest)
        c = G.left_mask(g, H.mask)
        out.append(GroupSubset(G, c))
        rest &= ~c
    return out


def right_cosets(G: FiniteGroup, H) -> list[GroupSubset]:
    H = as_subgroup(G, H)
    out, rest = [], G.full_mask
    while rest:
        g = bits.lowest(rest)
        c = G.right_mask(H.mask, g)
        out.append(GroupSubset(G, c))
        rest &= ~c
    return out


def subgroup_sort_key(mask: int) -> tuple:
    return (mask.bit_count(), tuple(bits.iter_bits(mask)))


def enumerate_subgroups(G: FiniteGroup, limits: Limits | None = None) -> list[Subgroup]:
    """All subgroups, ordered by size then lexicographically by members."""
    limits = limits or get_limits()
    limits.check("exhaustive_order", G.order)
    found = {1: ()}
    queue = [1]
    for h in queue:
        gens = found[h]
        rest = G.full_mask & ~h
        while rest:
            g = bits.lowest(rest)
            rest &= ~G.left_mask(g, h)
            k = generate_mask(G, gens + (g,))
            if k not in found:
                found[k] = gens + (g,)
                queue.append(k)
                limits.check("subgroup_nodes", len(found))
    return [Subgroup(G, m) for m in sorted(found, key=subgroup_sort_key)]


def center_mask(G: FiniteGroup) -> int:
    t = G.table
    return bits.from_indices(g for g in range(G.order)
                             if all(t[g][h] == t[h][g] for h in range(G.order)))


def commutator_subgroup(G: FiniteGroup) -> Subgroup:
    t, inv = G.table, G.inverses
    comms = {t[t[g][h]][t[inv[g]][inv[h]]] for g in range(G.order) for h in range(G.order)}
    return Subgroup(G, generate_mask(G, comms))
