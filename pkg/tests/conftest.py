import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile(
    "thorough", max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

small = st.integers(min_value=-4, max_value=4)


@st.composite
def square_matrices(draw, min_m=2, max_m=4, elements=small):
    m = draw(st.integers(min_m, max_m))
    return [[Fraction(draw(elements)) for _ in range(m)] for _ in range(m)]


@st.composite
def zero_diagonal(draw, min_m=2, max_m=4, elements=small):
    A = draw(square_matrices(min_m, max_m, elements))
    for i in range(len(A)):
        A[i][i] = Fraction(0)
    return A


@st.composite
def type_spaces(draw, min_m=2, max_m=3, max_r=6, coords=st.integers(-3, 3)):
    m = draw(st.integers(min_m, max_m))
    r = draw(st.integers(m, max(m, max_r)))
    return [[0] + [draw(coords) for _ in range(m - 1)] for _ in range(r)]


@st.composite
def mechanisms(draw, **kw):
    """A type space together with a surjective 0-based outcome assignment."""
    T = draw(type_spaces(**kw))
    m, r = len(T[0]), len(T)
    head = draw(st.permutations(range(m)))
    tail = [draw(st.integers(0, m - 1)) for _ in range(r - m)]
    g = list(head) + tail
    order = draw(st.permutations(range(r)))
    return T, tuple(g[i] for i in order)


# -- acceptance summary ---------------------------------------------------------

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _RESULTS[n] = (title, rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        title, outcome = _RESULTS[n]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {verdict}  {title}")


@st.composite
def feasible_constraints(draw, min_m=2, max_m=4):
    """Zero-diagonal ``L`` whose polytrope contains a drawn point ``x``.

    Slack zero is common so forced equalities occur.
    """
    m = draw(st.integers(min_m, max_m))
    x = [draw(small) for _ in range(m)]
    slack = st.one_of(st.just(0), st.integers(0, 5))
    return [
        [Fraction(0) if i == j else Fraction(x[i] - x[j] + draw(slack)) for j in range(m)]
        for i in range(m)
    ]
