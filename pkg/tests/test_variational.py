import numpy as np
import pytest

from lieblab.common.errors import InvalidInput
from lieblab.functions.scalar import make_power
from lieblab.lieb.functionals import LiebSpec, lieb_trace
from lieblab.lieb.maps import random_kraus_map
from lieblab.lieb.variational import (
    analytic_optimizer,
    random_candidates,
    variational_inf,
    variational_inf_result,
    variational_sup,
    variational_sup_result,
)
from lieblab.linalg.matrices import make_rng, random_posdef


@pytest.fixture
def maps(rng):
    return random_kraus_map(2, 2, rng), random_kraus_map(2, 2, rng)


def test_inf_attained_at_optimizer(maps, rng):
    phi, psi = maps
    spec = LiebSpec(make_power(0.5), phi, psi, 0.5, 0.5)
    a, b = random_posdef(2, rng), random_posdef(2, rng)
    optimum = analytic_optimizer(spec, a, b)
    candidates = random_candidates(optimum, rng, count=6)
    result = variational_inf_result(spec, a, b, candidates)
    target = lieb_trace(spec, a, b)
    assert result.optimizer_value == pytest.approx(target, rel=1e-6)
    assert min(result.candidate_values) >= target - 1e-6 * abs(target)
    assert result.value == pytest.approx(target, rel=1e-6)


def test_sup_attained_at_optimizer(maps, rng):
    phi, psi = maps
    spec = LiebSpec(make_power(2.0), phi, psi, 0.5, 0.5)
    a, b = random_posdef(2, rng), random_posdef(2, rng)
    optimum = analytic_optimizer(spec, a, b)
    candidates = random_candidates(optimum, rng, count=6)
    result = variational_sup_result(spec, a, b, candidates)
    target = lieb_trace(spec, a, b)
    assert result.optimizer_value == pytest.approx(target, rel=1e-6)
    assert max(result.candidate_values) <= target + 1e-6 * abs(target)


def test_inf_needs_concave_function(maps, rng):
    phi, psi = maps
    spec = LiebSpec(make_power(2.0), phi, psi, 0.5, 0.5)
    a = random_posdef(2, rng)
    with pytest.raises(InvalidInput):
        variational_inf(spec, a, a)


def test_candidates_are_positive_definite(rng):
    center = random_posdef(3, rng).entries
    for candidate in random_candidates(center, rng, count=10):
        assert np.linalg.eigvalsh(candidate)[0] > 0


def test_sup_value_matches_trace_with_identity_maps(id2, diag_pair):
    a, b = diag_pair
    spec = LiebSpec(make_power(2.0), id2, id2, 0.5, 0.5)
    assert lieb_trace(spec, a, b) == pytest.approx(11.0)
    assert variational_sup(spec, a, b) == pytest.approx(11.0, rel=1e-6)
INSTANCES = 50


def random_instance(dim, seed, s):
    rng = make_rng(seed)
    phi = random_kraus_map(dim, dim, rng)
    psi = random_kraus_map(dim, dim, rng)
    spec = LiebSpec(make_power(s), phi, psi, 0.5, 0.5)
    return spec, random_posdef(dim, rng), random_posdef(dim, rng), rng


@pytest.mark.parametrize("dim", [2, 3])
def test_inf_bounds_trace_on_random_instances(dim):
    for seed in range(INSTANCES):
        spec, a, b, rng = random_instance(dim, (dim, seed), 0.5)
        candidates = random_candidates(analytic_optimizer(spec, a, b), rng, count=4)
        result = variational_inf_result(spec, a, b, candidates)
        target = lieb_trace(spec, a, b)
        assert result.optimizer_value == pytest.approx(target, rel=1e-6)
        assert result.value >= target - 1e-6 * (1.0 + abs(target))


@pytest.mark.parametrize("dim", [2, 3])
def test_sup_bounds_trace_on_random_instances(dim):
    for seed in range(INSTANCES):
        spec, a, b, rng = random_instance(dim, (dim, seed), 2.0)
        candidates = random_candidates(analytic_optimizer(spec, a, b), rng, count=4)
        result = variational_sup_result(spec, a, b, candidates)
        target = lieb_trace(spec, a, b)
        assert result.optimizer_value == pytest.approx(target, rel=1e-6)
        assert result.value <= target + 1e-6 * (1.0 + abs(target))
