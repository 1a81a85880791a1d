"""Binary relations and the half-graph (linear order coding) search.

A relation on ``U x V`` is stored row-wise: ``rows[x]`` is the bitset of
``y`` with ``phi(x, y)``.  A coding of a linear order of size ``k`` is a pair of
sequences with ``phi(a_i, b_j)`` iff ``i <= j``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from stablesets import bits
from stablesets.group_core import FiniteGroup, _mask_of, as_subgroup
from stablesets.limits import Limits, get_limits


@dataclass(frozen=True)
class BipartiteRelation:
    u_size: int
    v_size: int
    rows: tuple  # of int bitsets over range(v_size)
    u_labels: tuple | None = None
    v_labels: tuple | None = None

    def __post_init__(self):
        if len(self.rows) != self.u_size:
            raise ValueError("row count does not match u_size")
        if any(r >> self.v_size for r in self.rows):
            raise ValueError("row has bits beyond v_size")

    def holds(self, x: int, y: int) -> bool:
        return bool(self.rows[x] >> y & 1)

    def column(self, y: int) -> int:
        return bits.from_indices(x for x in range(self.u_size) if self.rows[x] >> y & 1)

    def transpose(self) -> "BipartiteRelation":
        return BipartiteRelation(self.v_size, self.u_size,
                                 tuple(self.column(y) for y in range(self.v_size)),
                                 self.v_labels, self.u_labels)

    def to_matrix(self) -> list[list[int]]:
        return [[r >> y & 1 for y in range(self.v_size)] for r in self.rows]

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows)


@dataclass(frozen=True)
class CodingWitness:
    a_seq: tuple
    b_seq: tuple

    @property
    def size(self) -> int:
        return len(self.a_seq)

    def is_valid_for(self, R: BipartiteRelation) -> bool:
        k = len(self.a_seq)
        if len(self.b_seq) != k:
            return False
        return all(R.holds(a, b) == (i <= j)
                   for i, a in enumerate(self.a_seq) for j, b in enumerate(self.b_seq))


@dataclass(frozen=True)
class CodingNumber:
    value: int
    saturated: bool  # value == k_max, so the true number may be larger
    witness: CodingWitness | None = field(default=None, compare=False)


def _check_cells(u: int, v: int, limits: Limits) -> None:
    limits.check("matrix_cells", u * v)


def relation_from_set(G: FiniteGroup, A, limits: Limits | None = None) -> BipartiteRelation:
    """``phi(x, y) = (x*y in A)`` on ``G x G``; row ``x`` is ``x^-1 A``."""
    limits = limits or get_limits()
    _check_cells(G.order, G.order, limits)
    mask = _mask_of(G, A)
    rows = tuple(G.left_mask(G.inverses[x], mask) for x in range(G.order))
    return BipartiteRelation(G.order, G.order, rows)


def left_coset_relation(G: FiniteGroup, H, limits: Limits | None = None) -> BipartiteRelation:
    """``phi(x, y) = (x in yH)``; row ``x`` is ``xH``."""
    limits = limits or get_limits()
    H = as_subgroup(G, H)
    _check_cells(G.order, G.order, limits)
    rows = tuple(G.left_mask(x, H.mask) for x in range(G.order))
    return BipartiteRelation(G.order, G.order, rows)


def sharp_relation(R: BipartiteRelation, G: FiniteGroup,
                   limits: Limits | None = None) -> BipartiteRelation:
    """``phi#(x; y, z) = phi(x*z, y)``; column ``(y, z)`` has index ``y*|G| + z``."""
    limits = limits or get_limits()
    n = G.order
    if R.u_size != n:
        raise ValueError("relation rows must be indexed by the group")
    _check_cells(n, R.v_size * n, limits)
    t = G.table
    rows = []
    for x in range(n):
        tx = t[x]
        row = 0
        for z in range(n):
            r = R.rows[tx[z]]
            while r:
                low = r & -r
                row |= 1 << ((low.bit_length() - 1) * n + z)
                r ^= low
        rows.append(row)
    labels = tuple((y, z) for y in range(R.v_size) for z in range(n))
    return BipartiteRelation(n, R.v_size * n, tuple(rows), R.u_labels, labels)


def find_order_coding(R: BipartiteRelation, k: int, distinct: bool = False,
                      limits: Limits | None = None) -> CodingWitness | None:
    """Lexicographically least witness that ``R`` codes a linear order of size ``k``.

    Runs a depth-first search over the ``a`` sequence.  After choosing
    ``a_1..a_m`` the legal values of ``b_j`` form the set
    ``C_j = row(a_1) & .. & row(a_min(j,m)) & ~row(a_j+1) & .. & ~row(a_m)``;
    a branch dies as soon as some ``C_j`` is empty, and a finished branch takes
    ``b_j = min C_j``.  Failed search states are memoised.

    ``distinct`` is accepted for completeness: in any witness the ``a_i`` are
    pairwise distinct (their rows differ) and so are the ``b_j`` (the ``C_j``
    are disjoint), so the flag never changes the answer.
    """
    limits = limits or get_limits()
    if k < 1:
        raise ValueError("k must be positive")
    limits.check("max_k", k)
    rows = R.rows
    # group row indices by row value; equal rows give identical subtrees
    order = []
    seen_rows = set()
    for x in range(R.u_size):
        r = rows[x]
        if r and r not in seen_rows:
            seen_rows.add(r)
            order.append(x)
    full = (1 << R.v_size) - 1
    dead: set = set()
    a_seq: list[int] = []

    def extend(cs: tuple, fut: int) -> tuple | None:
        m = len(a_seq)
        if m == k:
            return cs
        key = (cs, fut)
        if key in dead:
            return None
        for x in order:
            r = rows[x]
            nf = fut & r
            if not nf:
                continue
            nr = ~r
            ncs = []
            ok = True
            for c in cs:
                c &= nr
                if not c:
                    ok = False
                    break
                ncs.append(c)
            if not ok:
                continue
            ncs.append(nf)
            a_seq.append(x)
            res = extend(tuple(ncs), nf)
            if res is not None:
                return res
            a_seq.pop()
        if len(dead) < 1 << 21:
            dead.add(key)
        return None

    cs = extend((), full)
    if cs is None:
        return None
    # only the least index of each distinct row was tried, which is the one a
    # lexicographically least witness uses
    return CodingWitness(tuple(a_seq), tuple(bits.lowest(c) for c in cs))


def order_coding_number(R: BipartiteRelation, k_max: int,
                        limits: Limits | None = None) -> CodingNumber:
    """Largest ``k <= k_max`` for which ``R`` codes a linear order of size ``k``."""
    limits = limits or get_limits()
    limits.check("max_k", k_max)
    best = None
    for k in range(1, k_max + 1):
        w = find_order_coding(R, k, limits=limits)
        if w is None:
            return CodingNumber(k - 1, False, best)
        best = w
    return CodingNumber(k_max, True, best)


def brute_force_coding(R: BipartiteRelation, k: int) -> CodingWitness | None:
    """Exhaustive oracle over all ``(a, b)`` sequence pairs, in lexicographic order."""
    for a in itertools.product(range(R.u_size), repeat=k):
        for b in itertools.product(range(R.v_size), repeat=k):
            w = CodingWitness(a, b)
            if w.is_valid_for(R):
                return w
    return None


def split_intersection_coding(RA: BipartiteRelation, RB: BipartiteRelation,
                              w: CodingWitness) -> tuple[str, CodingWitness]:
    """Given a coding for ``A & B``, extract the largest monochromatic coding.

    Every ``i > j`` pair fails ``A`` or fails ``B``; colour it by the first
    relation it fails.  A set of indices whose pairs all share colour ``c``
    restricts ``w`` to a coding for that relation.  The largest such set is
    found by exhaustive search (``w.size`` is at most the ``max_k`` cap).
    """
    if not w.is_valid_for(BipartiteRelation(
            RA.u_size, RA.v_size, tuple(a & b for a, b in zip(RA.rows, RB.rows)))):
        raise ValueError("witness does not code the intersection")
    n = w.size
    colour = {}
    for j in range(n):
        for i in range(j + 1, n):
            failsA = not RA.holds(w.a_seq[i], w.b_seq[j])
            colour[(j, i)] = "A" if failsA else "B"
    best = ("A", (0,)) if n else ("A", ())
    for size in range(n, 1, -1):
        for idx in itertools.combinations(range(n), size):
            cols = {colour[(p, q)] for p, q in itertools.combinations(idx, 2)}
            if len(cols) == 1:
                best = (cols.pop(), idx)
                break
        else:
            continue
        break
    which, idx = best
    sub = CodingWitness(tuple(w.a_seq[i] for i in idx), tuple(w.b_seq[i] for i in idx))
    target = RA if which == "A" else RB
    assert sub.is_valid_for(target)
    return which, sub


def ramsey_bound(m: int) -> int:
    """The binomial upper bound ``C(2m-2, m-1)`` for the diagonal Ramsey number."""
    from math import comb
    return comb(2 * m - 2, m - 1)


def stabilizer_family_matrix(n: int) -> dict:
    """The transposition family in ``Sym(n)`` with ``H = Stab(0)``.

    ``a_i = (0 i)`` and ``b_j`` is the cycle ``(0 1 .. j-1)``, which fixes a point
    ``m >= 1`` exactly when ``m >= j``.  Returns the membership matrix
    ``[b_j in a_i H a_i]`` for ``1 <= i, j <= n-1`` and which inequality it follows.
    """
    from stablesets.group_core import cycles_to_perm, sym
    G = sym(n)
    index = {p: g for g, p in enumerate(G.labels)}
    a = [index[cycles_to_perm([[0, i]], n)] for i in range(1, n)]
    b = [index[cycles_to_perm([list(range(j))] if j > 1 else [], n)] for j in range(1, n)]
    stab0 = bits.from_indices(g for g, p in enumerate(G.labels) if p[0] == 0)
    matrix = []
    for ai in a:
        conj = G.conj_mask(ai, stab0)
        matrix.append([int(conj >> bj & 1) for bj in b])
    size = n - 1
    j_ge_i = all(matrix[i][j] == (j >= i) for i in range(size) for j in range(size))
    j_le_i = all(matrix[i][j] == (j <= i) for i in range(size) for j in range(size))
    return {"group": G, "a": a, "b": b, "matrix": matrix,
            "holds_iff_j_ge_i": j_ge_i, "holds_iff_j_le_i": j_le_i}
