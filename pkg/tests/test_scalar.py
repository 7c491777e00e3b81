import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lieblab.common.errors import DomainError, InvalidInput
from lieblab.functions.scalar import (
    FnFlag,
    build_function,
    classify_sampled,
    make_affine,
    make_example_a4,
    make_log,
    make_pick_integral,
    make_power,
    screen_flags,
    standard_audit_grid,
)


def test_power_flags_for_square_root():
    f = make_power(0.5)
    assert f.has(FnFlag.NON_DECREASING, FnFlag.CONCAVE, FnFlag.OPERATOR_MONOTONE)
    assert not f.has(FnFlag.CONVEX)


def test_power_flags_for_square():
    f = make_power(2.0)
    assert f.has(FnFlag.NON_DECREASING, FnFlag.CONVEX)
    assert FnFlag.OPERATOR_MONOTONE not in f.flags


def test_negative_power_is_operator_monotone_decreasing():
    f = make_power(-0.5)
    assert f.has(FnFlag.NON_INCREASING, FnFlag.CONVEX, FnFlag.OPERATOR_MONOTONE)


def test_domain_error_off_positive_axis():
    with pytest.raises(DomainError):
        make_log()(np.array([1.0, 0.0]))


def test_scalar_call_returns_float():
    assert isinstance(make_power(2.0)(3.0), float)
    assert make_power(2.0).eval(3.0) == pytest.approx(9.0)


def test_compose_power_goes_through_descriptor():
    g = make_power(0.5).compose_power(2.0)
    assert g.eval(7.0) == pytest.approx(7.0)
    assert g.label == "x^1"


def test_compose_power_of_log_scales():
    g = make_log().compose_power(3.0)
    assert g.eval(np.e) == pytest.approx(3.0)


def test_pick_value_at_one_is_h1_plus_b():
    f = make_pick_integral(0.7, 0.2, [(1.0, 0.3), (2.0, 0.1)])
    assert f.eval(1.0) == pytest.approx(0.9)


def test_pick_reproduces_x_over_one_plus_x():
    f = make_pick_integral(0.5, 0.0, [(1.0, 0.25)])
    xs = np.array([0.1, 1.0, 3.0, 50.0])
    np.testing.assert_allclose(f(xs), xs / (1.0 + xs))


def test_pick_rejects_negative_weight():
    with pytest.raises(InvalidInput):
        make_pick_integral(0.0, 0.0, [(1.0, -0.5)])


def test_pick_derivative_matches_finite_difference():
    f = make_pick_integral(0.0, 0.5, [(0.5, 1.0)])
    x, h = 2.0, 1e-6
    numeric = (f.eval(x + h) - f.eval(x - h)) / (2 * h)
    assert f.derivative(x) == pytest.approx(numeric, rel=1e-6)


def test_affine_flags():
    assert make_affine(0.5, 0.5).has(FnFlag.NON_DECREASING, FnFlag.CONVEX, FnFlag.CONCAVE)
    assert make_affine(-1.0, 0.0).has(FnFlag.NON_INCREASING)


def test_classify_log():
    report = classify_sampled(make_log())
    assert FnFlag.NON_DECREASING in report.flags
    assert FnFlag.CONCAVE in report.flags
    assert FnFlag.NON_INCREASING not in report.flags
    assert FnFlag.CONVEX not in report.flags


def test_classify_rejects_short_grid():
    with pytest.raises(InvalidInput):
        classify_sampled(make_log(), grid=np.array([1.0, 2.0]))


def test_screen_flags_reports_missing():
    assert screen_flags(make_power(2.0), [FnFlag.CONCAVE]) == [FnFlag.CONCAVE]
    assert screen_flags(make_power(2.0), [FnFlag.CONVEX, FnFlag.NON_DECREASING]) == []


def test_screen_flags_after_composition():
    assert screen_flags(make_power(0.5), [FnFlag.CONVEX], gamma=4.0) == []


@settings(max_examples=25, deadline=None)
@given(s=st.floats(min_value=0.1, max_value=0.9))
def test_sampled_classes_of_concave_powers(s):
    flags = classify_sampled(make_power(s)).flags
    assert FnFlag.NON_DECREASING in flags
    assert FnFlag.CONCAVE in flags


def test_a4_shifted_power_requires_exponent_bound():
    with pytest.raises(InvalidInput):
        make_example_a4("shifted_power", {"s": 1.5, "r": 0.5})
    f = make_example_a4("shifted_power", {"s": 2.0, "r": 0.5})
    assert f.eval(0.5) == 0.0
    assert f.eval(3.0) == pytest.approx(4.0)


def test_a4_concave_capped_is_continuous_at_knot():
    s, alpha = 0.5, 1.0
    f = make_example_a4("concave_capped", {"s": s, "alpha": alpha})
    knot = (s / alpha) ** (1.0 / (1.0 - s))
    below = knot * (1 - 1e-9)
    assert f.eval(below) == pytest.approx(f.eval(knot * 2.0), rel=1e-6)


def test_a4_concave_families_accept_r_of_one_and_above():
    capped = make_example_a4("concave_capped", {"s": 0.5, "r": 1.0})
    assert capped.has(FnFlag.CONCAVE)
    assert capped.eval(0.25) == pytest.approx(0.25)
    with pytest.raises(InvalidInput, match="0.5"):
        make_example_a4("concave_capped", {"s": 0.6, "r": 1.0})
    spliced = make_example_a4("concave_spliced", {"s1": 0.3, "s2": 0.25, "r": 2.0})
    assert spliced.eval(1.0) == pytest.approx(1.0)


def test_a4_families_pass_their_screens():
    convex = make_example_a4("convex_spliced", {"s1": 2.0, "s2": 3.0})
    concave = make_example_a4("concave_spliced", {"s1": 0.4, "s2": 0.3, "beta": 1.0})
    assert screen_flags(convex, [FnFlag.NON_DECREASING, FnFlag.CONVEX]) == []
    assert screen_flags(concave, [FnFlag.NON_DECREASING, FnFlag.CONCAVE]) == []


def test_build_function_power_with_composition():
    f = build_function({"kind": "power", "params": {"s": 0.5}, "power": 2.0})
    assert f.eval(3.0) == pytest.approx(3.0)


def test_build_function_log_power_scales():
    f = build_function({"kind": "log", "power": 2.0})
    assert f.eval(np.e) == pytest.approx(2.0)


def test_build_function_pick_keeps_descriptor():
    f = build_function({"kind": "pick", "params": {"h1": 1.0, "atoms": [[1.0, 0.5]]}})
    assert f.descriptor["kind"] == "pick"
    assert f.eval(1.0) == pytest.approx(1.0)


def test_build_function_a4_without_variant():
    with pytest.raises(InvalidInput, match="variant"):
        build_function({"kind": "a4", "params": {"s": 2.0}})


def test_build_function_composed_pick():
    f = build_function(
        {"kind": "pick", "params": {"h1": 0.5, "atoms": [[1.0, 0.25]]}, "power": 0.5}
    )
    x = 4.0
    assert f.eval(x) == pytest.approx(2.0 / 3.0)


def test_audit_grid_shape():
    grid = standard_audit_grid()
    assert grid.size == 201
    assert grid[0] == pytest.approx(1e-3) and grid[-1] == pytest.approx(1e3)
