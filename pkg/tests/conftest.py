import os

import numpy as np
import pytest
from hypothesis import strategies as st

from isingbraid.cyclotomic import cyc

ZETA = np.exp(1j * np.pi / 4)

small = st.integers(min_value=-50, max_value=50)
cyc_elements = st.builds(cyc, small, small, small, small, st.integers(min_value=0, max_value=6))


def complex_matrix(u):
    """Float oracle for an exact matrix."""
    return u.to_complex()


def pytest_collection_modifyitems(config, items):
    if os.environ.get("ISINGBRAID_LONG") == "1":
        return
    skip = pytest.mark.skip(reason="set ISINGBRAID_LONG=1 to run")
    for item in items:
        if "longrun" in item.keywords:
            item.add_marker(skip)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
