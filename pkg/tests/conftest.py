from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from hecke_eigen.exact import ExactMatrix, ExactScalar
from hecke_eigen.local_systems import AddChar, MultChar
from hecke_eigen.moduli import curve

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

small_fractions = st.fractions(min_value=-4, max_value=4, max_denominator=5)
scalars = st.builds(ExactScalar, small_fractions, small_fractions)
nonzero_scalars = scalars.filter(lambda z: not z.is_zero())


def matrices(n: int):
    return st.lists(st.lists(scalars, min_size=n, max_size=n), min_size=n, max_size=n).map(ExactMatrix.of)


def invertible_matrices(n: int):
    return matrices(n).filter(lambda m: m.is_invertible())


@st.composite
def curve_chars(draw, g=None):
    g = draw(st.integers(1, 3)) if g is None else g
    vals = draw(st.lists(nonzero_scalars, min_size=2 * g, max_size=2 * g))
    return MultChar(curve(g), tuple(vals))


@st.composite
def curve_add_chars(draw, g):
    vals = draw(st.lists(scalars, min_size=2 * g, max_size=2 * g))
    return AddChar(curve(g), tuple(vals))


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def record_criterion(request):
    def record(number: int, title: str, ok: bool, detail: str = ""):
        tag = "PASS" if ok else "FAIL"
        request.config._acceptance_lines.append(f"[{tag}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))
        print(f"[{tag}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))

    return record


__all__ = ["Fraction"]
