from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from homological.core import Norm, RationalVector

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

NORMS = list(Norm)


def rationals(bound=3, den=6):
    return st.builds(Fraction, st.integers(-bound * den, bound * den), st.integers(1, den))


def vectors(d, bound=3, den=6):
    return st.lists(rationals(bound, den), min_size=d, max_size=d).map(RationalVector)


@st.composite
def zero_sum_families(draw, n_min=1, n_max=7, d=None):
    d = d or draw(st.integers(1, 3))
    n = draw(st.integers(n_min, n_max))
    vs = [draw(vectors(d)) for _ in range(n - 1)]
    total = RationalVector.zero(d)
    for v in vs:
        total = total + v
    return vs + [-total]


@pytest.fixture(params=NORMS, ids=[n.value for n in NORMS])
def norm(request):
    return request.param


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    results = item.config._criteria
    prior = results.get(number)
    failed = rep.failed or (prior is not None and prior[1] == "FAIL")
    seconds = (prior[2] if prior else 0.0) + rep.duration
    results[number] = (title, "FAIL" if failed else "PASS", seconds)


def pytest_terminal_summary(terminalreporter, config):
    results = config._criteria
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, verdict, seconds = results[number]
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {title}  ({seconds:.2f} s)")
