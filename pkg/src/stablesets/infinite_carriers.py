"""Windowed computations on the integers and on the free group of rank two.

Sets of integers are predicates; a window ``[lo, hi]`` only bounds the search.
Membership of ``x + y`` is always decided by the ambient rule, even when the
sum leaves the window.

Grammar for integer set specs::

    ap:start,step,len        arithmetic progression
    mod:q,r1,r2,...          residues mod q
    halfline:lo              x >= lo
    below:hi                 x < hi
    finite:x1,x2,...         a finite set
    apexample:n              the separated progressions with blocks 1..n
    all | empty
    union(S; T; ...)         also accepted: union:S;T;...
    inter(S; T; ...)
    compl(S)
    shift(S, t)              S + t
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from stablesets import bits
from stablesets.limits import Limits, get_limits
from stablesets.relations import BipartiteRelation, find_order_coding


class SetSpecError(ValueError):
    pass


class ZSet:
    """A subset of the integers given by a membership rule."""

    def __init__(self, rule: Callable[[int], bool], spec: str):
        self.rule = rule
        self.spec = spec

    def __contains__(self, x: int) -> bool:
        return self.rule(x)

    def __repr__(self):
        return f"ZSet({self.spec})"

    def window_mask(self, lo: int, hi: int) -> int:
        """Bit ``i`` set iff ``lo + i`` is in the set."""
        out = 0
        rule = self.rule
        for i, x in enumerate(range(lo, hi + 1)):
            if rule(x):
                out |= 1 << i
        return out

    def members_in(self, lo: int, hi: int) -> list[int]:
        return [x for x in range(lo, hi + 1) if self.rule(x)]


class APExample(ZSet):
    """Union of blocks ``A_n``: ``n`` terms with difference ``n``, block 1 = {0},
    and block ``n`` starting at ``max A_(n-1) + n^2 + 1``."""

    def __init__(self, n_max: int):
        if not 1 <= n_max <= 30:
            raise SetSpecError("apexample needs 1 <= n <= 30")
        self.n_max = n_max
        self.blocks: list[tuple[int, ...]] = []
        prev_max = None
        for n in range(1, n_max + 1):
            start = 0 if prev_max is None else prev_max + n * n + 1
            block = tuple(start + n * i for i in range(n))
            self.blocks.append(block)
            prev_max = block[-1]
        self.points = frozenset(x for b in self.blocks for x in b)
        self.block_of = {x: n for n, b in enumerate(self.blocks, 1) for x in b}
        super().__init__(self.points.__contains__, f"apexample:{n_max}")

    def spacing_ok(self) -> bool:
        return all(min(self.blocks[n - 1]) > max(self.blocks[n - 2]) + n * n
                   for n in range(2, self.n_max + 1))

    def block_window(self, n: int) -> tuple[int, int]:
        """``[max A_(n-1) + 1, max A_n]``: block ``n`` with the gap before it."""
        lo = 0 if n == 1 else self.blocks[n - 2][-1] + 1
        return lo, self.blocks[n - 1][-1]


def ap_example(n_max: int) -> APExample:
    return APExample(n_max)


def _split_args(text: str) -> list[str]:
    depth, cur, out = 0, [], []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == ";" and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur).strip())
    return [p for p in out if p]


def _ints(text: str, spec: str) -> list[int]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not all(re.fullmatch(r"-?\d+", p) for p in parts):
        raise SetSpecError(f"malformed integer list in {spec!r}")
    return [int(p) for p in parts]


def parse_zset(spec: str) -> ZSet:
    spec = spec.strip()
    if spec == "all":
        return ZSet(lambda x: True, spec)
    if spec == "empty":
        return ZSet(lambda x: False, spec)
    m = re.fullmatch(r"(union|inter|compl|shift)\((.*)\)", spec, re.S)
    if m:
        head, body = m.groups()
        if head == "shift":
            inner, sep, t = body.rpartition(",")
            if not sep or not re.fullmatch(r"\s*-?\d+\s*", t):
                raise SetSpecError(f"malformed shift in {spec!r}")
            S, t = parse_zset(inner), int(t)
            return ZSet(lambda x: (x - t) in S, spec)
        parts = [parse_zset(p) for p in _split_args(body)]
        if head == "compl":
            if len(parts) != 1:
                raise SetSpecError("compl takes one argument")
            S = parts[0]
            return ZSet(lambda x: x not in S, spec)
        if not parts:
            raise SetSpecError(f"{head} needs arguments")
        if head == "union":
            return ZSet(lambda x: any(x in S for S in parts), spec)
        return ZSet(lambda x: all(x in S for S in parts), spec)
    kind, sep, args = spec.partition(":")
    if not sep:
        raise SetSpecError(f"malformed set spec {spec!r}")
    if kind == "union":
        parts = [parse_zset(p) for p in _split_args(args)]
        return ZSet(lambda x: any(x in S for S in parts), spec)
    if kind == "ap":
        vals = _ints(args, spec)
        if len(vals) != 3 or vals[1] == 0 or vals[2] < 0:
            raise SetSpecError("ap needs start,step,len with step != 0")
        start, step, length = vals
        pts = frozenset(start + step * i for i in range(length))
        return ZSet(pts.__contains__, spec)
    if kind == "mod":
        vals = _ints(args, spec)
        if len(vals) < 1 or vals[0] <= 0:
            raise SetSpecError("mod needs q > 0")
        q, res = vals[0], frozenset(r % vals[0] for r in vals[1:])
        return ZSet(lambda x: x % q in res, spec)
    if kind in ("halfline", "below"):
        vals = _ints(args, spec)
        if len(vals) != 1:
            raise SetSpecError(f"{kind} takes one argument")
        edge = vals[0]
        if kind == "halfline":
            return ZSet(lambda x: x >= edge, spec)
        return ZSet(lambda x: x < edge, spec)
    if kind == "finite":
        pts = frozenset(_ints(args, spec))
        return ZSet(pts.__contains__, spec)
    if kind == "apexample":
        vals = _ints(args, spec)
        if len(vals) != 1:
            raise SetSpecError("apexample takes one argument")
        return APExample(vals[0])
    raise SetSpecError(f"unknown set kind {kind!r}")


def parity_example() -> ZSet:
    """``{even x >= 0} U {odd x < 0}``: the non-negative evens together with
    the negative evens shifted by one."""
    return parse_zset("union(inter(mod:2,0; halfline:0); inter(mod:2,1; below:0))")


@dataclass(frozen=True)
class IntWindow:
    lo: int
    hi: int
    members: int  # bit i <-> lo + i

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty window")

    @property
    def length(self) -> int:
        return self.hi - self.lo + 1

    def elements(self) -> list[int]:
        return [self.lo + i for i in bits.iter_bits(self.members)]


def window(A: ZSet, lo: int, hi: int) -> IntWindow:
    return IntWindow(lo, hi, A.window_mask(lo, hi))


# ---------------------------------------------------------------------------
# coding on windows


def window_relation(A: ZSet, lo: int, hi: int, limits: Limits | None = None
                    ) -> BipartiteRelation:
    """``phi(x, y) = (x + y in A)`` for ``x, y`` in ``[lo, hi]``."""
    limits = limits or get_limits()
    n = hi - lo + 1
    limits.check("matrix_cells", n * n)
    sums = A.window_mask(2 * lo, 2 * hi)
    mask = (1 << n) - 1
    rows = tuple((sums >> i) & mask for i in range(n))
    labels = tuple(range(lo, hi + 1))
    return BipartiteRelation(n, n, rows, labels, labels)


@dataclass(frozen=True)
class WindowCoding:
    number: int
    saturated: bool
    witnesses: dict  # k -> (a integers, b integers)


def window_coding_number(W: tuple[int, int], A: ZSet, k_max: int,
                         limits: Limits | None = None) -> WindowCoding:
    """Order-coding number of ``x + y in A`` on the window, with a witness per size."""
    limits = limits or get_limits()
    lo, hi = W
    R = window_relation(A, lo, hi, limits)
    limits.check("max_k", k_max)
    witnesses = {}
    number = 0
    for k in range(1, k_max + 1):
        w = find_order_coding(R, k, limits=limits)
        if w is None:
            return WindowCoding(number, False, witnesses)
        number = k
        witnesses[k] = (tuple(lo + i for i in w.a_seq), tuple(lo + j for j in w.b_seq))
    return WindowCoding(number, True, witnesses)


def check_int_witness(A: ZSet, a: Sequence[int], b: Sequence[int]) -> bool:
    return all(((x + y) in A) == (i <= j)
               for i, x in enumerate(a) for j, y in enumerate(b))


# ---------------------------------------------------------------------------
# densities


@dataclass(frozen=True)
class DensityReport:
    window_densities: tuple  # ((lo, hi), Fraction)
    upper_estimate: Fraction
    lower_estimate: Fraction
    caveat: str = ("window statistics over the later half of the windows; "
                   "they are consistent with, not a proof of, any limiting density")

    @property
    def consistent_with_equal_density(self) -> bool:
        return self.upper_estimate == self.lower_estimate


def parse_folner(spec: str) -> list[tuple[int, int]]:
    """``centered:L1,L2,...`` windows ``[-(L//2), -(L//2) + L - 1]``;
    ``from:lo:L1,L2,...`` windows ``[lo, lo + L - 1]``;
    ``intervals:lo..hi;lo..hi``."""
    kind, _, rest = spec.partition(":")
    if kind == "centered":
        lengths = _ints(rest, spec)
        if any(L <= 0 for L in lengths):
            raise SetSpecError("window lengths must be positive")
        return [(-(L // 2), -(L // 2) + L - 1) for L in lengths]
    if kind == "from":
        lo, _, ls = rest.partition(":")
        lo_v = _ints(lo, spec)
        lengths = _ints(ls, spec)
        if len(lo_v) != 1 or any(L <= 0 for L in lengths):
            raise SetSpecError(f"malformed folner spec {spec!r}")
        return [(lo_v[0], lo_v[0] + L - 1) for L in lengths]
    if kind == "intervals":
        out = []
        for part in rest.split(";"):
            m = re.fullmatch(r"\s*(-?\d+)\.\.(-?\d+)\s*", part)
            if not m or int(m.group(1)) > int(m.group(2)):
                raise SetSpecError(f"malformed interval {part!r}")
            out.append((int(m.group(1)), int(m.group(2))))
        return out
    raise SetSpecError(f"unknown folner spec {spec!r}")


def banach_density(A: ZSet, windows: Sequence[tuple[int, int]]) -> DensityReport:
    if not windows:
        raise SetSpecError("no windows given")
    dens = []
    for lo, hi in windows:
        count = A.window_mask(lo, hi).bit_count()
        dens.append(((lo, hi), Fraction(count, hi - lo + 1)))
    tail = [d for _, d in dens[len(dens) // 2:]]
    return DensityReport(tuple(dens), max(tail), min(tail))


def ap_block_densities(ex: APExample) -> list[tuple[int, tuple[int, int], Fraction]]:
    """Density of ``A`` on each block window; block ``n`` gives
    ``n / (2n^2 - n + 1)`` for ``n >= 2``."""
    out = []
    for n in range(1, ex.n_max + 1):
        lo, hi = ex.block_window(n)
        count = ex.window_mask(lo, hi).bit_count()
        out.append((n, (lo, hi), Fraction(count, hi - lo + 1)))
    return out


# ---------------------------------------------------------------------------
# bounded classification


@dataclass(frozen=True)
class Classification:
    window: tuple
    gap: int
    run: int
    syndetic: bool  # every length-gap subinterval meets A
    thick: bool  # A contains a run of length `run`
    piecewise_syndetic: bool  # A is gap-syndetic on some length-`run` subinterval
    supergeneric: bool  # intersection of A + f over f in [0, run) is gap-syndetic
    largest_gap: int  # longest run of non-members inside the window
    longest_run: int


def _longest_run(mask: int, length: int, value: int) -> int:
    best = cur = 0
    for i in range(length):
        if (mask >> i & 1) == value:
            cur += 1
            best = max(best, cur)
        else:
            cur = 0
    return best


def _syndetic_on(mask: int, length: int, gap: int) -> bool:
    if gap > length:
        return mask != 0
    return _longest_run(mask, length, 0) < gap


def classify_window(A: ZSet, W: tuple[int, int], gap: int, run: int) -> Classification:
    lo, hi = W
    n = hi - lo + 1
    mask = A.window_mask(lo, hi)
    synd = _syndetic_on(mask, n, gap)
    long_run = _longest_run(mask, n, 1)
    thick = long_run >= run
    pws = False
    for start in range(0, max(1, n - run + 1)):
        sub = (mask >> start) & ((1 << min(run, n)) - 1)
        if _syndetic_on(sub, min(run, n), gap):
            pws = True
            break
    inter = (1 << n) - 1
    for f in range(run):
        inter &= ZSet(lambda x, f=f: (x - f) in A, "").window_mask(lo, hi)
    superg = _syndetic_on(inter, n, gap)
    return Classification((lo, hi), gap, run, synd, thick, pws, superg,
                          _longest_run(mask, n, 0), long_run)


# ---------------------------------------------------------------------------
# sumsets


class SumsetFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class SumsetResult:
    g: int
    B: tuple
    C: tuple
    indices: tuple
    colours: dict = field(compare=False, default_factory=dict)


def greedy_pigeonhole(n: int, colour: Callable[[int, int], Hashable]) -> list[tuple]:
    """Repeatedly take the least live index and keep the largest colour class
    of its pairs with the later live indices.  Returns ``(index, colour)``
    records; the indices sharing a recorded colour form a monochromatic set."""
    live = list(range(n))
    chosen = []
    while live:
        i = live.pop(0)
        classes: dict = {}
        for j in live:
            classes.setdefault(colour(i, j), []).append(j)
        if not classes:
            chosen.append((i, None))
            break
        c, members = max(classes.items(), key=lambda kv: (len(kv[1]), -kv[1][0]))
        chosen.append((i, c))
        live = members
    return chosen


def sumset_search(A: ZSet, F: Sequence[int], b_seq: Sequence[int], c_seq: Sequence[int],
                  target_size: int) -> SumsetResult:
    """Find ``g`` in ``F`` and ``B', C'`` of size ``target_size`` with ``B' + C'``
    inside ``g + A``, following the Ramsey argument with greedy pigeonhole."""
    if len(set(b_seq)) != len(b_seq) or len(set(c_seq)) != len(c_seq):
        raise ValueError("sequences must be injective")
    n = min(len(b_seq), len(c_seq))
    F = list(F)

    def pick(i: int, j: int) -> int:
        s = b_seq[i] + c_seq[j]
        for g in F:
            if (s - g) in A:
                return g
        raise SumsetFailure(f"no translate in F covers b_{i} + c_{j} = {s}")

    colours: dict = {}

    def colour(i: int, j: int):
        g = pick(i, j)
        k = int((b_seq[j] + c_seq[i] - g) in A)
        colours[(i, j)] = (g, k)
        return (g, k)

    records = greedy_pigeonhole(n, colour)
    groups: dict = {}
    for i, c in records:
        groups.setdefault(c, []).append(i)
    # the last record carries no colour; it joins every class
    last = records[-1][0] if records and records[-1][1] is None else None
    best = None
    for c, idx in groups.items():
        if c is None or c[1] != 1:
            continue
        cand = sorted(idx + ([last] if last is not None else []))
        if best is None or len(cand) > len(best[1]):
            best = (c, cand)
    if best is None:
        raise SumsetFailure("no monochromatic class of type k=1")
    (g, _), idx = best
    I1, I2 = idx[0::2], idx[1::2]
    if min(len(I1), len(I2)) < target_size:
        raise SumsetFailure(f"extraction gave {len(idx)} indices, need {2 * target_size}")
    I1, I2 = I1[:target_size], I2[:target_size]
    Bp = tuple(b_seq[i] for i in I1)
    Cp = tuple(c_seq[j] for j in I2)
    for x in Bp:
        for y in Cp:
            if (x + y - g) not in A:
                raise SumsetFailure(f"re-validation failed at {x} + {y}")
    return SumsetResult(g, Bp, Cp, tuple(sorted(I1 + I2)), colours)


def generic_witness_on_window(A: ZSet, F: Sequence[int], lo: int, hi: int) -> bool:
    """``F + A`` contains every point of the window."""
    return all(any((x - f) in A for f in F) for x in range(lo, hi + 1))


def sumset_obstruction(lo: int = -100, hi: int = 99, t_bound: int = 50) -> dict:
    """Exhaustive checks for ``A = {even >= 0} U {odd < 0}``, ``B`` the even
    non-negatives and ``C`` the even negatives, on ``[lo, hi]``.

    * threshold identity: for ``b`` in ``B``, ``c`` in ``C`` and ``|t| <= t_bound``,
      ``b + c in A + t`` iff ``b + c >= t`` (``t`` even) or ``b + c < t`` (``t`` odd);
    * so a rectangle ``B' x C'`` inside ``A + t`` needs ``min B' + min C' >= t``
      or ``max B' + max C' < t``: one side is confined to a range fixed by the
      other side and ``t``, never by the window, which rules out infinite
      ``B'`` and ``C'``;
    * ``A`` is covered by ``F = {0, 1}`` on the window;
    * :func:`sumset_search` fails along ``B`` and ``C``.
    """
    A = parity_example()
    Bw = [x for x in range(lo, hi + 1) if x >= 0 and x % 2 == 0]
    Cw = [x for x in range(lo, hi + 1) if x < 0 and x % 2 == 0]
    identity_ok = True
    for t in range(-t_bound, t_bound + 1):
        for b in Bw:
            for c in Cw:
                pred = (b + c >= t) if t % 2 == 0 else (b + c < t)
                if ((b + c - t) in A) != pred:
                    identity_ok = False
    # for t even the admissible partners of b are the c >= t - b, for t odd the
    # admissible partners of c are the b < t - c; doubling the window adds none
    bounded = True
    B2 = range(0, 2 * hi + 2, 2)
    C2 = range(2 * lo, 0, 2)
    for t in range(-t_bound, t_bound + 1):
        if t % 2 == 0:
            for b in Bw:
                small = [c for c in Cw if (b + c - t) in A]
                big = [c for c in C2 if (b + c - t) in A]
                if small != [c for c in Cw if c >= t - b] or (t - b >= lo and big != small):
                    bounded = False
        else:
            for c in Cw:
                small = [b for b in Bw if (b + c - t) in A]
                big = [b for b in B2 if (b + c - t) in A]
                if small != [b for b in Bw if b < t - c] or (t - c <= hi and big != small):
                    bounded = False
    generic_ok = generic_witness_on_window(A, [0, 1], 2 * lo, 2 * hi)
    b_seq = Bw[: len(Cw)]
    c_seq = list(reversed(Cw))
    try:
        sumset_search(A, [0, 1], b_seq, c_seq, 2)
        search_fails = False
    except SumsetFailure:
        search_fails = True
    # the literal finite claim is false: a 2 x 2 rectangle exists for t = 0
    rect = None
    for b1 in Bw:
        for b2 in Bw:
            if b2 <= b1:
                continue
            for c1 in Cw:
                for c2 in Cw:
                    if c2 <= c1:
                        continue
                    if all((x + y) in A for x in (b1, b2) for y in (c1, c2)):
                        rect = ((b1, b2), (c1, c2))
                        break
                if rect:
                    break
            if rect:
                break
        if rect:
            break
    return {"window": (lo, hi), "t_bound": t_bound, "threshold_identity": identity_ok,
            "rectangles_bounded_by_t": bounded, "generic_with_F01": generic_ok,
            "search_fails": search_fails, "finite_rectangle_t0": rect,
            "ok": identity_ok and bounded and generic_ok and search_fails}


# ---------------------------------------------------------------------------
# free group on a, b; 'A' and 'B' are the inverse letters

LETTERS = "aAbB"
_INV = {"a": "A", "A": "a", "b": "B", "B": "b"}
_RANK = {c: i for i, c in enumerate(LETTERS)}


def reduce_word(w: str) -> str:
    out: list[str] = []
    for c in w:
        if c not in _INV:
            raise ValueError(f"bad letter {c!r}")
        if out and out[-1] == _INV[c]:
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def fg_mul(u: str, v: str) -> str:
    return reduce_word(u + v)


def fg_inv(w: str) -> str:
    return "".join(_INV[c] for c in reversed(w))


def shortlex_key(w: str) -> tuple:
    return (len(w), [_RANK[c] for c in w])


@dataclass(frozen=True)
class FreeGroupBall:
    radius: int
    elements: tuple

    def __len__(self):
        return len(self.elements)


def free_group_ball(r: int) -> FreeGroupBall:
    if not 0 <= r <= 12:
        raise ValueError("radius must be between 0 and 12")
    words = [""]
    layer = [""]
    for _ in range(r):
        nxt = []
        for w in layer:
            for c in LETTERS:
                if w and w[-1] == _INV[c]:
                    continue
                nxt.append(w + c)
        words.extend(nxt)
        layer = nxt
    return FreeGroupBall(r, tuple(sorted(words, key=shortlex_key)))


def starts_with_a(w: str) -> bool:
    return w.startswith("a")


def fg_genericity_checks(r: int, rhos: Iterable[int] = (3,)) -> dict:
    """With ``A`` the reduced words starting with ``a``: every word of the ball
    lies in ``b a^-1 A`` or ``a^-1 A``; and for each ``rho`` the word
    ``a^-(rho+1)`` is outside ``A F`` for every ``F`` inside the ball of radius
    ``rho``."""
    ball = free_group_ball(r)
    cover_fail = None
    prefix_fail = None
    for w in ball.elements:
        in1 = starts_with_a(fg_mul("a", w))  # w in a^-1 A
        in2 = starts_with_a(fg_mul("aB", w))  # w in b a^-1 A
        if not (in1 or in2) and cover_fail is None:
            cover_fail = w
        if (not in1) != w.startswith("A") or (not in2) != w.startswith("bA"):
            prefix_fail = prefix_fail or w
    right = {}
    for rho in rhos:
        if not 0 <= rho < max(r, 1) + 1:
            raise ValueError("rho must be below the radius")
        x = "A" * (rho + 1)
        small = free_group_ball(rho)
        bad = [f for f in small.elements if starts_with_a(fg_mul(x, fg_inv(f)))]
        right[rho] = {"witness": x, "checked": len(small), "violations": bad[:5],
                      "ok": not bad}
    return {"radius": r, "ball_size": len(ball), "expected_size": 2 * 3 ** r - 1,
            "cover_ok": cover_fail is None, "cover_counterexample": cover_fail,
            "prefix_analysis_ok": prefix_fail is None, "right_failure": right}
