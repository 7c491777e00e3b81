import pytest

from lieblab.common.errors import ConfigError
from lieblab.verifier.pipeline import SuitePipeline, default_pipeline, normalize_suite_id
from lieblab.verifier.suites import ALL_SUITES, RangeISuite, SuiteSettings

RANGE_I_POINT = [{"p": 0.5, "q": 0.5, "s": -0.5}]


def strip_runtime(payload):
    for point in payload["points"]:
        point.pop("runtime_ms")
    return payload


@pytest.mark.parametrize(
    "raw, expected",
    [("thm2.1", "thm2_1"), ("Range-II", "range_ii"), (" cor4.5 ", "cor4_5")],
)
def test_normalize_suite_id(raw, expected):
    assert normalize_suite_id(raw) == expected


def test_default_pipeline_registers_every_suite():
    available = default_pipeline().available()
    assert len(available) == len(ALL_SUITES)
    assert {"thm2_1", "thm3_1", "cor3_2", "thm5_6", "range_iv"} <= set(available)


def test_unknown_suite():
    with pytest.raises(ConfigError, match="Available"):
        default_pipeline().get("thm9.9")


def test_get_accepts_dotted_ids():
    assert default_pipeline().get("thm2.1").theorem_id == "thm2_1"


def test_register_custom_pipeline():
    pipeline = SuitePipeline([RangeISuite()])
    assert pipeline.available() == ["range_i"]


def test_run_produces_result():
    settings = SuiteSettings(seed=5, trials=15)
    result = default_pipeline().run("range-i", settings, dims=(2,), grid=RANGE_I_POINT)
    assert result.passed
    payload = result.to_dict()
    assert payload["suite"] == "range_i"
    assert payload["expected"] == "convex"
    assert payload["seed"] == 5
    assert payload["summary"]["points"] == 1
    assert payload["summary"]["failing_points"] == 0
    assert payload["points"][0]["trials"] == 15


def test_run_is_deterministic():
    settings = SuiteSettings(seed=5, trials=15)
    pipeline = default_pipeline()
    first = pipeline.run("range_i", settings, dims=(2, 3), grid=RANGE_I_POINT)
    second = pipeline.run("range_i", settings, dims=(2, 3), grid=RANGE_I_POINT)
    assert strip_runtime(first.to_dict()) == strip_runtime(second.to_dict())


def test_run_rejects_invalid_grid_point():
    settings = SuiteSettings(seed=5, trials=5)
    with pytest.raises(ConfigError, match="range_i"):
        default_pipeline().run("range_i", settings, grid=[{"p": 0.5, "q": 0.5, "s": 0.5}])


@pytest.mark.parametrize("suite_id", default_pipeline().available())
def test_default_grid_runs_clean(suite_id):
    settings = SuiteSettings(seed=11, trials=20)
    result = default_pipeline().run(suite_id, settings, dims=(2,))
    failing = [report.label for report in result.reports if not report.passed]
    assert result.reports
    assert failing == []
