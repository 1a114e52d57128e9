from __future__ import annotations

import sys
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from softconvex import SoftFamily, SoftSet, Space  # noqa: E402
from softconvex.document import load  # noqa: E402
from softconvex.oracle import enumerate_structures, make_space  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


@lru_cache(maxsize=None)
def structures_on(n: int, m: int):
    return enumerate_structures(make_space(n, m))


@pytest.fixture(scope="session")
def example():
    return load(FIXTURES / "example.json")


@pytest.fixture(scope="session")
def structures_2x2():
    return structures_on(2, 2)


@st.composite
def spaces(draw, max_elems=3, max_params=2):
    n = draw(st.integers(1, max_elems))
    m = draw(st.integers(1, max_params))
    return make_space(n, m)


@st.composite
def soft_set_in(draw, space: Space):
    return SoftSet(space, draw(st.integers(0, space.full_mask)))


@st.composite
def space_and_sets(draw, k=2, max_elems=3, max_params=2):
    space = draw(spaces(max_elems, max_params))
    return (space, *[draw(soft_set_in(space)) for _ in range(k)])


@st.composite
def space_and_family(draw, max_elems=3, max_params=2, max_size=6):
    space = draw(spaces(max_elems, max_params))
    masks = draw(st.lists(st.integers(0, space.full_mask), max_size=max_size))
    return space, SoftFamily(space, tuple(masks))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
