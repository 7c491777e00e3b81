import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lieblab.common.errors import InvalidInput
from lieblab.verifier.counterexamples import remark_4_6


def test_square_case():
    pair = remark_4_6(4.0, 1.0, 1.0)
    assert pair.lhs == pytest.approx(2.5)
    assert pair.rhs == pytest.approx(1.6)
    assert pair.convexity_violated
    assert pair.consistent


def test_higher_power_case():
    pair = remark_4_6(4.0, 2.0, 2.0)
    assert pair.lhs == pytest.approx(6.25)
    assert pair.rhs == pytest.approx(1.88235, rel=1e-5)
    assert pair.convexity_violated


def test_direct_evaluation_matches_closed_forms():
    pair = remark_4_6(9.0, 0.5, 1.5)
    assert pair.direct_lhs == pytest.approx(pair.lhs, rel=1e-12)
    assert pair.direct_rhs == pytest.approx(pair.rhs, rel=1e-12)


@pytest.mark.parametrize("t, p, s", [(0.0, 1.0, 1.0), (4.0, -1.0, 1.0), (4.0, 1.0, 0.0)])
def test_non_positive_inputs(t, p, s):
    with pytest.raises(InvalidInput):
        remark_4_6(t, p, s)


@settings(max_examples=40, deadline=None)
@given(
    t=st.floats(min_value=1.01, max_value=50.0),
    p=st.floats(min_value=0.1, max_value=3.0),
    s=st.floats(min_value=0.1, max_value=3.0),
)
def test_always_violated_and_consistent(t, p, s):
    pair = remark_4_6(t, p, s)
    assert pair.convexity_violated
    assert pair.consistent
