import pytest
from pydantic import ValidationError

from lieblab.models import LiebSpecDescriptor, MapDescriptor, MatrixFile, RunConfig


def test_run_config_parses_dims():
    config = RunConfig(command="verify", dims="2, 3,4")
    assert config.dims == [2, 3, 4]
    assert config.header()["dims"] == [2, 3, 4]


@pytest.mark.parametrize(
    "overrides",
    [
        {"trials": 0},
        {"seed": -1},
        {"rel_tol": 0.0},
        {"cond_cap": 0.5},
        {"jobs": 0},
        {"dims": "0"},
        {"format": "xml"},
        {"command": "plot"},
    ],
)
def test_run_config_rejects(overrides):
    with pytest.raises(ValidationError):
        RunConfig(**{"command": "verify", **overrides})


def test_run_config_out_path_directory_must_exist(tmp_path):
    assert RunConfig(command="eval", out_path=tmp_path / "out.json").out_path
    with pytest.raises(ValidationError):
        RunConfig(command="eval", out_path=tmp_path / "missing" / "out.json")


def test_matrix_file_shape():
    record = MatrixFile(dim=2, re=[[1, 0], [0, 1]])
    assert record.cols == 2 and record.im == [[0.0, 0.0], [0.0, 0.0]]
    with pytest.raises(ValidationError):
        MatrixFile(dim=2, re=[[1, 0]])


def test_map_descriptor_payloads():
    with pytest.raises(ValidationError):
        MapDescriptor(kind="kraus")
    with pytest.raises(ValidationError):
        MapDescriptor(kind="congruence")
    assert MapDescriptor(kind="identity", dim=3).dim == 3


def test_lieb_spec_descriptor_defaults():
    parsed = LiebSpecDescriptor.model_validate(
        {
            "f": {"kind": "POWER", "params": {"s": 0.5}},
            "phi": {"kind": "identity", "dim": 2},
            "psi": {"kind": "identity", "dim": 2},
            "p": 1,
            "q": 0,
        }
    )
    assert parsed.f.kind == "power"
    assert parsed.gamma_rule == "sum"
