import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from layered_defense.curves import (
    AffineLine,
    ClampWarning,
    PWLCurve,
    constant_curve,
    curve_eval,
    curve_from_lines,
    curve_max_slope,
    identity_curve,
)
from layered_defense.errors import (
    AtBreakpoint,
    EmptyLines,
    InvalidCurve,
    NegativeAtZero,
    NotConcaveRepresentable,
    OutOfDomain,
)

INNER_LINES = [AffineLine(0.2, 0.0), AffineLine(0.1, 0.4)]
OUTER1_LINES = [AffineLine(0.3, 0.0), AffineLine(0.1, 0.3), AffineLine(0.05, 0.5)]


def sampled_min(lines, domain_max, n=10_001):
    r = np.linspace(0.0, domain_max, n)
    env = np.min([ln.slope * r + ln.intercept for ln in lines], axis=0)
    return r, np.minimum(env, 1.0)


def assert_breakpoints(curve, expected):
    got = np.array(curve.breakpoints)
    assert got.shape == (len(expected), 2)
    np.testing.assert_allclose(got, np.array(expected), atol=1e-12)


def test_inner_example_curve_breakpoints():
    curve = curve_from_lines(INNER_LINES, 10.0)
    assert_breakpoints(curve, [(0, 0), (4, 0.8), (6, 1.0), (10, 1.0)])
    # the kinks agree with a dense sample of the expression
    r, ref = sampled_min(INNER_LINES, 10.0)
    np.testing.assert_allclose(curve_eval(curve, r), ref, atol=1e-12)


def test_identity_curve():
    assert_breakpoints(curve_from_lines([AffineLine(1.0, 0.0)], 1.0), [(0, 0), (1, 1)])


def test_three_line_outer_curve():
    curve = curve_from_lines(OUTER1_LINES, 10.0)
    assert_breakpoints(curve, [(0, 0), (1.5, 0.45), (4, 0.7), (10, 1.0)])
    r, ref = sampled_min(OUTER1_LINES, 10.0)
    np.testing.assert_allclose(curve_eval(curve, r), ref, atol=1e-12)


@pytest.mark.parametrize("r, expected", [(0.0, 0.0), (4.0, 0.8), (6.0, 1.0)])
def test_eval_points(r, expected):
    curve = curve_from_lines(INNER_LINES, 10.0)
    assert curve_eval(curve, r) == pytest.approx(expected, abs=1e-12)


def test_eval_out_of_domain():
    curve = identity_curve()
    with pytest.raises(OutOfDomain):
        curve_eval(curve, 1.5)
    with pytest.raises(OutOfDomain):
        curve_eval(curve, -0.1)


def test_max_slope():
    assert curve_max_slope(curve_from_lines(INNER_LINES, 10.0)) == pytest.approx(0.2)
    assert curve_max_slope(identity_curve()) == 1.0
    assert curve_max_slope(constant_curve(0.5)) == 0.0


def test_clamp_warns():
    with pytest.warns(ClampWarning):
        curve_from_lines(INNER_LINES, 10.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error", ClampWarning)
        curve_from_lines(INNER_LINES, 4.0)


def test_constructor_errors():
    with pytest.raises(EmptyLines):
        curve_from_lines([], 1.0)
    with pytest.raises(InvalidCurve):
        AffineLine(-1.0, 0.0)
    with pytest.raises(NotConcaveRepresentable):
        PWLCurve(((0, 0), (1, 0.1), (2, 0.5)))
    with pytest.raises(NegativeAtZero):
        PWLCurve(((0, -0.1), (1, 0.5)))
    with pytest.raises(InvalidCurve):
        PWLCurve(((0, 0), (1, 1.2)))
    with pytest.raises(InvalidCurve):
        PWLCurve(((0, 0.5), (1, 0.4)))
    with pytest.raises(InvalidCurve):
        PWLCurve(((0.1, 0.0), (1, 0.4)))


def test_colinear_breakpoints_merge():
    curve = PWLCurve(((0, 0), (0.5, 0.25), (1, 0.5), (2, 0.75)))
    assert curve.breakpoints == ((0.0, 0.0), (1.0, 0.5), (2.0, 0.75))


def test_slope_at_rejects_interior_breakpoint():
    curve = curve_from_lines(INNER_LINES, 10.0)
    assert curve.slope_at(1.0) == pytest.approx(0.2)
    assert curve.slope_at(5.0) == pytest.approx(0.1)
    assert curve.slope_at(10.0) == 0.0
    with pytest.raises(AtBreakpoint):
        curve.slope_at(4.0)


lines_strategy = st.lists(
    st.builds(
        AffineLine,
        st.floats(0.0, 3.0, allow_nan=False),
        st.floats(0.0, 1.5, allow_nan=False),
    ),
    min_size=1,
    max_size=5,
)


@settings(max_examples=200, deadline=None)
@given(lines=lines_strategy, domain_max=st.floats(0.1, 20.0))
def test_matches_dense_sampling(lines, domain_max):
    curve = curve_from_lines(lines, domain_max)
    r, ref = sampled_min(lines, domain_max)
    np.testing.assert_allclose(curve_eval(curve, r), ref, atol=1e-12, rtol=0)


@settings(max_examples=200, deadline=None)
@given(
    lines=lines_strategy,
    domain_max=st.floats(0.1, 20.0),
    ts=st.lists(st.floats(0.0, 1.0), min_size=3, max_size=3, unique=True),
)
def test_concave_and_monotone(lines, domain_max, ts):
    curve = curve_from_lines(lines, domain_max)
    r1, r2, r3 = sorted(t * domain_max for t in ts)
    v1, v2, v3 = (curve_eval(curve, r) for r in (r1, r2, r3))
    assert v1 <= v2 + 1e-15 <= v3 + 2e-15
    if r3 > r1:
        chord = v1 + (v3 - v1) * (r2 - r1) / (r3 - r1)
        assert v2 >= chord - 1e-12
    assert all(0.0 <= v <= 1.0 for v in curve.values)
