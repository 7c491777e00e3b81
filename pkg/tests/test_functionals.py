import numpy as np
import pytest

from lieblab.common.errors import InvalidInput
from lieblab.functions.scalar import make_log, make_power
from lieblab.lieb.functionals import (
    GammaRule,
    LiebSpec,
    LineSegment,
    epstein_norm,
    epstein_probe,
    epstein_tolerance,
    epstein_trace,
    lieb_matrix,
    lieb_trace,
    lieb_trace_inverted,
    log_limit_approx,
    log_limit_trace,
    mean_norm_fn,
    mean_norm_values,
    mean_trace,
)
from lieblab.lieb.maps import (
    compression_map,
    identity_map,
    random_congruence_map,
    random_kraus_map,
)
from lieblab.linalg.matrices import (
    HermMatrix,
    PosDefMatrix,
    make_rng,
    random_hermitian,
    random_posdef,
)
from lieblab.operators.means import arithmetic_mean, geometric_mean


def test_zero_powers_rejected(id2):
    with pytest.raises(InvalidInput, match="\\(p,q\\)≠\\(0,0\\)"):
        LiebSpec(make_power(1.0), id2, id2, 0.0, 0.0)


def test_output_sizes_must_agree(id2):
    squash = compression_map(np.array([[0.5, 0.5], [0.5, 0.5]]))
    with pytest.raises(InvalidInput, match="output size"):
        LiebSpec(make_power(1.0), id2, squash, 1.0, 1.0)


@pytest.mark.parametrize(
    "p, q, expected",
    [(0.5, 1.0, 1.0), (1.0, 0.25, 1.0), (-0.5, -1.0, -1.0), (-0.25, 0.0, -0.25)],
)
def test_extremal_gamma(id2, p, q, expected):
    spec = LiebSpec(make_power(1.0), id2, id2, p, q, GammaRule.EXTREMAL)
    assert spec.gamma == expected


def test_extremal_gamma_needs_one_sign(id2):
    spec = LiebSpec(make_power(1.0), id2, id2, 0.5, -0.5, "extremal")
    with pytest.raises(InvalidInput):
        spec.gamma


def test_sum_gamma(id2):
    assert LiebSpec(make_power(1.0), id2, id2, 0.5, 0.25).gamma == pytest.approx(0.75)


def test_lieb_trace_commuting(id2, diag_pair):
    a, b = diag_pair
    spec = LiebSpec(make_power(1.0), id2, id2, 1.0, 1.0)
    assert lieb_trace(spec, a, b) == pytest.approx(11.0)
    assert lieb_trace_inverted(spec, a, b) == pytest.approx(11.0)


def test_lieb_matrix_is_hermitian(rng):
    phi = random_kraus_map(2, 2, rng)
    psi = random_kraus_map(2, 2, rng)
    spec = LiebSpec(make_power(0.5), phi, psi, 0.5, 0.5)
    m = lieb_matrix(spec, random_posdef(2, rng), random_posdef(2, rng))
    np.testing.assert_allclose(m, m.conj().T)


def test_lieb_trace_matches_product_trace(id2, rng):
    a, b = random_posdef(2, rng), random_posdef(2, rng)
    spec = LiebSpec(make_power(1.0), id2, id2, 1.0, 1.0)
    expected = np.trace(a.entries @ b.entries).real
    assert lieb_trace(spec, a, b) == pytest.approx(expected)


def test_mean_trace_and_norms(id2, diag_pair):
    a, b = diag_pair
    spec = LiebSpec(make_power(1.0), id2, id2, 1.0, 1.0, GammaRule.EXTREMAL)
    assert mean_trace(spec, arithmetic_mean(), a, b) == pytest.approx(5.0)
    smallest = mean_norm_fn(spec, geometric_mean(), "ky_fan_anti:1", a, b)
    assert smallest == pytest.approx(np.sqrt(3.0))
    values = mean_norm_values(spec, geometric_mean(), ["ky_fan_norm:1", "trace_norm"], a, b)
    np.testing.assert_allclose(values, [np.sqrt(8.0), np.sqrt(3.0) + np.sqrt(8.0)])


def test_epstein_trace_identity_map(id2, rng):
    a = random_posdef(2, rng)
    f = make_power(0.5)
    expected = np.sum(np.sqrt(a.eigenvalues))
    assert epstein_trace(f, id2, 0.5, a) == pytest.approx(expected)
    assert epstein_trace(f, id2, 0.5, a, inverted=True) == pytest.approx(expected)


def test_epstein_trace_needs_nonzero_power(id2, rng):
    with pytest.raises(InvalidInput):
        epstein_trace(make_log(), id2, 0.0, random_posdef(2, rng))


def test_epstein_norm_orientations(id2, diag_pair):
    a, _ = diag_pair
    h = make_power(1.0)
    assert epstein_norm(h, id2, 0.5, a, "ky_fan_anti:1") == pytest.approx(1.0)
    assert epstein_norm(h, id2, 0.5, a, "ky_fan_anti:1", inverted=True) == pytest.approx(1.0)
    assert epstein_norm(h, id2, 0.5, a, "ky_fan_norm:1") == pytest.approx(1.0)
    assert epstein_norm(h, id2, 1.0, a, "trace_norm") == pytest.approx(1.5)


def test_log_limit_commuting(id2, diag_pair):
    a, b = diag_pair
    value = log_limit_trace(make_power(1.0), id2, id2, 0.5, a, b)
    assert value == pytest.approx(np.sqrt(3.0) + np.sqrt(8.0))


def test_log_limit_requires_unital_maps(id2, rng):
    phi = random_congruence_map(2, rng)
    a = random_posdef(2, rng)
    with pytest.raises(InvalidInput, match="unital"):
        log_limit_trace(make_power(1.0), phi, id2, 0.5, a, a)


def test_log_limit_approximation_converges(id2, rng):
    a, b = random_posdef(2, rng), random_posdef(2, rng)
    f = make_power(1.0)
    limit = log_limit_trace(f, id2, id2, 0.3, a, b)
    assert log_limit_approx(f, id2, id2, 0.3, a, b, 1e-4) == pytest.approx(limit, rel=1e-3)


def test_line_segment_leaving_cone():
    a0 = PosDefMatrix.from_array(np.eye(2))
    step = HermMatrix(-np.eye(2))
    with pytest.raises(InvalidInput, match="positive cone"):
        LineSegment(a0, step, a0, step, x_max=2.0)


def test_epstein_probe_on_constant_segment(id2):
    a0 = PosDefMatrix.from_array(np.diag([1.0, 2.0]))
    zero = HermMatrix(np.zeros((2, 2)))
    seg = LineSegment(a0, zero, a0, zero, x_max=1.0)
    spec = LiebSpec(make_power(1.0), id2, id2, 0.5, 0.5)
    assert epstein_probe(spec, seg, 0.5) == pytest.approx(0.0, abs=1e-6)


def test_epstein_probe_scalar_closed_form():
    one = PosDefMatrix.from_array(np.eye(1))
    up = HermMatrix(np.eye(1))
    seg = LineSegment(one, up, one, up, x_max=1.0)
    spec = LiebSpec(make_power(1.0), identity_map(1), identity_map(1), 1.0, 1.0)
    # (1+x)/(2+x) = 1 - 1/(2+x)
    assert epstein_probe(spec, seg, 0.0) == pytest.approx(-0.25, abs=1e-6)


def random_segment(dim, rng, x_max=0.2):
    a0 = random_posdef(dim, rng, cond_cap=10.0)
    b0 = random_posdef(dim, rng, cond_cap=10.0)
    directions = []
    for base in (a0, b0):
        h = random_hermitian(dim, rng).entries.copy()
        h *= 0.5 * base.eigenvalues[0] / (x_max * np.linalg.norm(h, 2))
        directions.append(HermMatrix.symmetrized(h))
    return LineSegment(a0, directions[0], b0, directions[1], x_max=x_max)


@pytest.mark.parametrize("dim", [2, 3])
def test_epstein_probe_non_positive_on_random_segments(dim):
    rng = make_rng(2024 + dim)
    for _ in range(50):
        p, q = rng.uniform(0.1, 1.0, size=2)
        spec = LiebSpec(
            make_power(1.0),
            random_kraus_map(dim, dim, rng),
            random_kraus_map(dim, dim, rng),
            float(p),
            float(q),
        )
        seg = random_segment(dim, rng)
        for x in (0.01, 0.05, 0.1):
            assert epstein_probe(spec, seg, x) <= epstein_tolerance(spec, seg, x)
