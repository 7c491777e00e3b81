import logging

import pytest

from lieblab.common.errors import InvalidInput
from lieblab.verifier.falsify import (
    DEFAULT_FALSIFICATION,
    DEFAULT_FALSIFY_TRIALS,
    NO_CLAIM_BANNER,
    falsify_boundary,
    in_concavity_box,
    missing_region_points,
    missing_region_sweep,
)


@pytest.mark.parametrize(
    "p, q, s, inside",
    [
        (1.0, 1.0, 0.5, True),
        (1.0, 1.0, 0.6, False),
        (0.5, 0.25, 0.0, True),
        (-1.0, -1.0, -0.5, True),
        (-1.0, -1.0, 0.1, False),
        (1.5, 0.5, 0.1, False),
    ],
)
def test_concavity_box(p, q, s, inside):
    assert in_concavity_box(p, q, s) is inside


def test_falsify_rejects_points_inside_the_box():
    with pytest.raises(InvalidInput, match="inside the concavity box"):
        falsify_boundary(1.0, 1.0, 0.5, trials=10)


def test_falsify_finds_violation_past_the_boundary():
    p, q, s = DEFAULT_FALSIFICATION
    report = falsify_boundary(p, q, s, trials=DEFAULT_FALSIFY_TRIALS, seed=42)
    assert report.violations > 0
    assert report.worst_witness is not None
    assert report.params["s"] == pytest.approx(0.6)


def test_missing_region_points_stay_in_region():
    points = missing_region_points()
    assert points
    for p, q, s in points:
        assert -1 < p < 0 and 1 < q < 2
        assert 1.0 / (p + q) - 1e-12 <= s < min(1.0 / (p + 1.0), 1.0 / (q - 1.0))
        assert abs(s - 1.0) > 1e-9


def test_missing_region_points_reject_outside_pairs():
    with pytest.raises(InvalidInput):
        missing_region_points(ps=(0.5,), qs=(1.5,))


def test_missing_region_sweep_logs_banner(caplog):
    with caplog.at_level(logging.WARNING):
        reports = missing_region_sweep(trials=3, dims=(2, 3), points=[(-0.5, 1.5, 1.2)])
    assert len(reports) == 2
    assert all(report.trials_run == 3 for report in reports)
    assert NO_CLAIM_BANNER in caplog.text
