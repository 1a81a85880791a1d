import itertools

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from stablesets.battery import groups_up_to

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

BATTERY_12 = [name for name, _ in groups_up_to(12)]
BATTERY_24 = [name for name, _ in groups_up_to(24)]


def group_named(name):
    from stablesets.suites import _group
    return _group(name)


def groups_and_masks(max_order=12):
    """Strategy yielding ``(G, mask)`` for battery groups up to ``max_order``."""
    names = [n for n, G in groups_up_to(max_order)]

    @st.composite
    def strat(draw):
        G = group_named(draw(st.sampled_from(names)))
        mask = draw(st.integers(min_value=0, max_value=G.full_mask))
        return G, mask
    return strat()


def brute_subgroups(G):
    """All subsets containing the identity and closed under multiplication."""
    out = []
    for mask in range(1, 1 << G.order, 2):
        els = [g for g in range(G.order) if mask >> g & 1]
        if all(mask >> G.mul(x, y) & 1 for x, y in itertools.product(els, els)):
            out.append(mask)
    return sorted(out)


@pytest.fixture(scope="session")
def s3():
    from stablesets.group_core import build_group
    return build_group("sym:3")


@pytest.fixture(scope="session")
def c6():
    from stablesets.group_core import build_group
    return build_group("cyclic:6")
