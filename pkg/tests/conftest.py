import json

import numpy as np
import pytest

from lieblab.lieb.maps import identity_map
from lieblab.linalg.matrices import PosDefMatrix, matrix_to_record
from lieblab.verifier.suites import SuiteSettings


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def diag_pair():
    return (
        PosDefMatrix.from_array(np.diag([1.0, 2.0])),
        PosDefMatrix.from_array(np.diag([3.0, 4.0])),
    )


@pytest.fixture
def id2():
    return identity_map(2)


@pytest.fixture
def small_settings():
    return SuiteSettings(seed=7, trials=20)


@pytest.fixture
def matrix_json():
    def dump(arr):
        return json.dumps(matrix_to_record(np.asarray(arr, dtype=complex)))

    return dump
