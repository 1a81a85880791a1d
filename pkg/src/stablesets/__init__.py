"""Desk-scale computations for stable subsets of groups.

Finite groups are handled exactly through Cayley tables; the integers and the
free group on two generators are handled through bounded windows.
"""

from stablesets.group_core import FiniteGroup, GroupSubset, Subgroup, build_group
from stablesets.limits import Limits, LimitExceeded, get_limits

__all__ = [
    "FiniteGroup",
    "GroupSubset",
    "Subgroup",
    "build_group",
    "Limits",
    "LimitExceeded",
    "get_limits",
]

__version__ = "0.1.0"
