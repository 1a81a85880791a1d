"""Bitset helpers. A subset of ``range(n)`` is a Python int."""

from __future__ import annotations

from typing import Iterable, Iterator


def from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_list(mask: int) -> list[int]:
    return list(iter_bits(mask))


def popcount(mask: int) -> int:
    return mask.bit_count()


def lowest(mask: int) -> int:
    """Index of the least set bit; -1 for the empty set."""
    return (mask & -mask).bit_length() - 1


def full(n: int) -> int:
    return (1 << n) - 1


def image(mask: int, mapping) -> int:
    """Image of a subset under an index map (a sequence)."""
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << mapping[low.bit_length() - 1]
        mask ^= low
    return out
