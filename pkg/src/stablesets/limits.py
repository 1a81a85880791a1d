"""Size caps for every exhaustive search in the package.

Defaults can be overridden with the ``STABLESETS_LIMITS`` environment
variable, a comma separated list of ``key=value`` pairs, e.g.::

    STABLESETS_LIMITS="max_order=500,max_k=6"

Recognised keys are the field names of :class:`Limits`.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

ENV_VAR = "STABLESETS_LIMITS"


class LimitExceeded(RuntimeError):
    """A computation refused to run because it would exceed a configured cap.

    This signals refusal, never absence of a witness.
    """

    def __init__(self, key: str, value: int, cap: int):
        self.key = key
        self.value = value
        self.cap = cap
        super().__init__(f"{key}: {value} exceeds configured limit {cap}")


@dataclass(frozen=True)
class Limits:
    max_order: int = 2000  # table storage
    exhaustive_order: int = 64  # enumerate_subgroups
    full_assoc_order: int = 256  # full O(n^3) check on ingested tables
    max_k: int = 8  # order-coding searches
    matrix_cells: int = 2**26
    atom_limit: int = 4096
    subgroup_nodes: int = 2**20
    ellis_limit: int = 10**6
    cover_exact: int = 64  # exact branch-and-bound set cover
    member_enum: int = 4096  # exhaustive member sweeps in verification

    def check(self, key: str, value: int) -> None:
        cap = getattr(self, key)
        if value > cap:
            raise LimitExceeded(key, value, cap)


def parse_limits(text: str, base: Limits | None = None) -> Limits:
    base = base or Limits()
    names = {f.name for f in dataclasses.fields(Limits)}
    updates = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in names:
            raise ValueError(f"bad {ENV_VAR} entry: {item!r}")
        updates[key] = int(value)
    return dataclasses.replace(base, **updates)


def get_limits() -> Limits:
    return parse_limits(os.environ.get(ENV_VAR, ""))
