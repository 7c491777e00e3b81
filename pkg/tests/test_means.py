import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lieblab.common.errors import InvalidInput
from lieblab.functions.scalar import make_affine, make_power
from lieblab.linalg.matrices import PosDefMatrix, pd_power, random_posdef
from lieblab.operators.means import (
    OperatorMean,
    adjoint_mean,
    arithmetic_mean,
    build_mean,
    geometric_mean,
    harmonic_mean,
    mean_apply,
    pick_mean,
    power_mean,
)


def test_arithmetic_mean(rng):
    a, b = random_posdef(3, rng), random_posdef(3, rng)
    out = mean_apply(arithmetic_mean(), a, b)
    np.testing.assert_allclose(out.entries, (a.entries + b.entries) / 2, atol=1e-10)


def test_geometric_mean_of_commuting(diag_pair):
    a, b = diag_pair
    out = mean_apply(geometric_mean(), a, b)
    np.testing.assert_allclose(out.entries, np.diag(np.sqrt([3.0, 8.0])), atol=1e-12)


def test_harmonic_mean(rng):
    a, b = random_posdef(2, rng), random_posdef(2, rng)
    expected = 2.0 * pd_power(pd_power(a.entries, -1) + pd_power(b.entries, -1), -1)
    out = mean_apply(harmonic_mean(), a, b)
    np.testing.assert_allclose(out.entries, expected, atol=1e-10)


def test_adjoint_of_arithmetic_is_harmonic(rng):
    a, b = random_posdef(3, rng), random_posdef(3, rng)
    adjoint = adjoint_mean(arithmetic_mean())
    assert adjoint.label == "arithmetic*"
    np.testing.assert_allclose(
        mean_apply(adjoint, a, b).entries,
        mean_apply(harmonic_mean(), a, b).entries,
        atol=1e-10,
    )
    assert adjoint_mean(adjoint).label == "arithmetic"


@pytest.mark.parametrize("name", ["arithmetic", "geometric", "harmonic"])
def test_mean_of_equal_arguments(name, rng):
    a = random_posdef(3, rng)
    out = mean_apply(build_mean(name), a, a)
    np.testing.assert_allclose(out.entries, a.entries, atol=1e-10)


def test_power_mean_endpoints(rng):
    a, b = random_posdef(2, rng), random_posdef(2, rng)
    np.testing.assert_allclose(mean_apply(power_mean(0.0), a, b).entries, a.entries, atol=1e-10)
    np.testing.assert_allclose(mean_apply(power_mean(1.0), a, b).entries, b.entries, atol=1e-10)


def test_power_mean_range():
    with pytest.raises(InvalidInput):
        power_mean(1.5)


def test_mean_rejects_unnormalized_representing_function():
    with pytest.raises(InvalidInput, match="m\\(1\\)=1"):
        OperatorMean(make_affine(1.0, 1.0), "shifted")


def test_mean_rejects_convex_representing_function():
    with pytest.raises(InvalidInput, match="screening"):
        OperatorMean(make_power(2.0), "square")


def test_mean_rejects_size_mismatch(rng):
    with pytest.raises(InvalidInput):
        mean_apply(arithmetic_mean(), random_posdef(2, rng), random_posdef(3, rng))


def test_build_mean_descriptors():
    assert build_mean({"kind": "power", "alpha": 0.3}).label == "power[0.3]"
    assert build_mean({"kind": "geometric", "adjoint": True}).adjoint
    pick = build_mean({"kind": "pick", "params": {"h1": 1.0, "atoms": [[1.0, 0.5]]}})
    assert pick.rep_fn.eval(3.0) == pytest.approx(1.5)
    with pytest.raises(InvalidInput):
        build_mean({"kind": "power"})


def test_pick_mean_matches_harmonic(rng):
    a, b = random_posdef(2, rng), random_posdef(2, rng)
    np.testing.assert_allclose(
        mean_apply(pick_mean(1.0, 0.0, [(1.0, 0.5)]), a, b).entries,
        mean_apply(harmonic_mean(), a, b).entries,
        atol=1e-12,
    )


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_geometric_mean_is_symmetric(seed):
    rng = np.random.default_rng(seed)
    a, b = random_posdef(3, rng), random_posdef(3, rng)
    left = mean_apply(geometric_mean(), a, b).entries
    right = mean_apply(geometric_mean(), b, a).entries
    np.testing.assert_allclose(left, right, atol=1e-8 * np.linalg.norm(left))


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_harmonic_below_geometric_below_arithmetic(seed):
    rng = np.random.default_rng(seed)
    a, b = random_posdef(2, rng), random_posdef(2, rng)
    h = mean_apply(harmonic_mean(), a, b).entries
    g = mean_apply(geometric_mean(), a, b).entries
    m = mean_apply(arithmetic_mean(), a, b).entries
    assert np.linalg.eigvalsh(g - h)[0] >= -1e-9
    assert np.linalg.eigvalsh(m - g)[0] >= -1e-9


def test_from_array_returns_posdef(diag_pair):
    a, b = diag_pair
    assert isinstance(mean_apply(arithmetic_mean(), a, b), PosDefMatrix)
