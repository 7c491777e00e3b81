import numpy as np
import pytest

from lieblab.common.errors import InvalidInput
from lieblab.lieb.maps import (
    PosLinMap,
    apply_map,
    build_map,
    compression_map,
    congruence_map,
    identity_map,
    pinching_map,
    random_kraus_map,
    random_map,
    random_unital_map,
)
from lieblab.linalg.matrices import matrix_to_record, random_posdef

HALF = np.array([[0.5, 0.5], [0.5, 0.5]])


def test_identity_map(rng):
    a = random_posdef(3, rng)
    phi = identity_map(3)
    assert phi.unital and phi.strict
    np.testing.assert_allclose(phi(a.entries), a.entries)


def test_congruence_map(rng):
    a = random_posdef(2, rng)
    x = np.array([[1.0, 2.0], [0.0, 1.0]])
    np.testing.assert_allclose(congruence_map(x)(a.entries), x.T @ a.entries @ x)


def test_reduced_compression_is_strict():
    phi = compression_map(HALF)
    assert phi.out_dim == 1 and phi.in_dim == 2
    assert phi(np.diag([1.0, 4.0]))[0, 0].real == pytest.approx(2.5)


def test_full_compression_is_not_strict():
    phi = compression_map(HALF, reduced=False)
    assert not phi.strict
    np.testing.assert_allclose(phi(np.eye(2)), HALF)


def test_strict_check_rejects_singular_image():
    with pytest.raises(InvalidInput, match="strictly positive"):
        PosLinMap((HALF,))


def test_pinching_zeroes_off_diagonal_blocks(rng):
    a = random_posdef(3, rng)
    out = pinching_map([1, 2])(a.entries)
    assert out[0, 1] == 0 and out[0, 2] == 0
    np.testing.assert_allclose(out[1:, 1:], a.entries[1:, 1:])


def test_random_unital_map(rng):
    phi = random_unital_map(3, rng)
    np.testing.assert_allclose(phi.image_of_identity(), np.eye(3), atol=1e-10)


def test_random_kraus_map_trace_normalization(rng):
    phi = random_kraus_map(3, 2, rng)
    assert phi.out_dim == 2
    assert np.trace(phi.image_of_identity()).real == pytest.approx(2.0)


def test_random_map_kinds(rng):
    assert random_map("identity", 2, rng).label == "id[2]"
    assert random_map("congruence", 2, rng).label == "congruence"
    assert random_map("unital", 2, rng).unital
    with pytest.raises(InvalidInput):
        random_map("bogus", 2, rng)


def test_wrong_input_shape(rng):
    with pytest.raises(InvalidInput):
        identity_map(2)(np.eye(3))


def test_kraus_shapes_must_agree():
    with pytest.raises(InvalidInput):
        PosLinMap((np.eye(2), np.eye(3)))


def test_apply_map_returns_hermitian(rng):
    phi = random_kraus_map(2, 2, rng)
    out = apply_map(phi, random_posdef(2, rng))
    np.testing.assert_allclose(out.entries, out.entries.conj().T)


def test_build_map_descriptors():
    assert build_map({"kind": "identity", "dim": 2}).unital
    pinch = build_map({"kind": "pinching", "dim": 3, "blocks": [2, 1]})
    assert pinch.rank == 2
    with pytest.raises(InvalidInput):
        build_map({"kind": "pinching", "dim": 3, "blocks": [1, 1]})
    comp = build_map({"kind": "compression", "matrix": matrix_to_record(HALF)})
    assert comp.out_dim == 1
    kraus = build_map({"kind": "kraus", "kraus": [matrix_to_record(np.eye(2))]})
    np.testing.assert_allclose(kraus.image_of_identity(), np.eye(2))
