"""Check records shared by the verification functions and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

SCHEMA = "stablesets.report/1"

# Descriptive names for the statement each check exercises.
ANCHORS = {
    "coset_ellis": "Ellis semigroup of a coset flow is the quotient by the normal core",
    "phi": "type space of the bi-invariant closure is isomorphic to the Ellis semigroup",
    "symmetry": "definability of types: dq(A) in p iff dp*(A) in q",
    "dp_star_member": "dp*(A) lies in the algebra",
    "local_components": "generic types biject with cosets of the connected component",
    "stab_type": "stabiliser of a generic type is a conjugate of the connected component",
    "component_chain": "connected component of the bi-invariant closure is the core of the component",
    "structure": "members are a.e. unions of cosets of a finite-index subgroup in the algebra",
    "measure_unique": "unique left-invariant probability measure",
    "measure_inverse": "measure is inversion invariant on bi-invariant algebras",
    "haar": "measure equals normalised Haar measure of the generic types",
    "coset2stable": "2-stable sets are exactly cosets of subgroups",
    "neumann": "a finite coset cover has a member of index at most its size",
    "connectedness": "equivalent forms of connectedness of an algebra",
    "sym_stabilizer": "coset relation of a point stabiliser is 2-stable, its sharp form is not",
    "ap_example": "separated arithmetic progressions: stable but not k-stable",
    "ap_density": "separated arithmetic progressions have upper Banach density 0",
    "fg_cover": "in a free group the set of words starting with a is left generic",
    "fg_right": "in a free group the set of words starting with a is not right generic",
    "sumset": "generic sets contain a translate of an infinite sumset",
    "sumset_obstruction": "sumsets need not sit inside A itself",
    "ellis_idempotent": "minimal ideal has a unique idempotent commuting with everything",
    "genericity": "generic members are those of positive measure",
    "homogeneous": "generic types form a homogeneous space of the minimal ideal group",
    "profinite": "type space is the profinite completion relative to the algebra",
    "density_consistency": "window densities are consistent with equal upper and lower density",
    "window_witness": "coding witnesses on a window are re-checked against the ambient rule",
    "size_cap": "computation refused by a configured size cap",
    "wap": "every map in a finite Ellis semigroup is continuous (vacuous check)",
}


@dataclass
class CheckResult:
    name: str
    passed: bool | None  # None means the check refused on a size cap
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.passed is None:
            return "refused"
        return "pass" if self.passed else "fail"

    @property
    def anchor(self) -> str:
        return ANCHORS.get(self.name, self.name)

    def __bool__(self):
        return bool(self.passed)

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "anchor": self.anchor,
                "counterexample": jsonable(self.counterexample),
                "details": jsonable(self.details)}


def first_failure(name: str, failures, details: dict | None = None) -> CheckResult:
    """Build a result from an iterator of counterexample dicts (first one wins)."""
    for cex in failures:
        return CheckResult(name, False, cex, details or {})
    return CheckResult(name, True, None, details or {})


def jsonable(obj: Any):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj, key=repr) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in items]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    return repr(obj)
