import math
from pathlib import Path

import pytest
from hypothesis import settings

from rankzeta.dataio import TraceCache, parse_curve_csv
from rankzeta.ec import CurveQ
from rankzeta.traces import ap_table

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"

# y^2 + xy = x^3 + 87x + 442, conductor 2225, analytic rank 2, j = 4657463/7921
FIG_CURVE = CurveQ("2225.fig", (1, 0, 0, 87, 442), conductor=2225, rank=2, cm_flag=False)

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def fig_curve():
    return FIG_CURVE


@pytest.fixture(scope="session")
def trace_cache(request):
    # survives between runs so the 1e6 table is only computed once
    return TraceCache(Path(request.config.cache.mkdir("rankzeta")) / "traces.csv")


@pytest.fixture(scope="session")
def fig_table(trace_cache):
    """[(p, a_p)] of the figure curve for good p <= 1e6."""
    return ap_table(FIG_CURVE, 10**6, cache=trace_cache)


@pytest.fixture(scope="session")
def family_dataset():
    return parse_curve_csv(DATA / "family_7500_10000.csv")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
