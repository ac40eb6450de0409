import os

from hypothesis import HealthCheck, settings, strategies as st

from drinfeld_tree.arith import Poly, field
from drinfeld_tree.ideals import IdealA
from drinfeld_tree.parse import parse_poly

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

F2 = field(2)


def polys(q=2, max_deg=4, nonzero=False):
    F = field(q)
    lo = 1 if nonzero else 0
    return st.integers(lo, q ** (max_deg + 1) - 1).map(lambda k: Poly.from_key(F, k))


def ideal(lit, q=2):
    return IdealA(parse_poly(lit, q))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
