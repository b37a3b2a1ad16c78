import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fharmonic import target as T
from fharmonic.errors import DomainError, ParameterError


def test_flat_margin_is_one():
    assert T.matrix_condition_margin(T.flat(3), 2.0) == 1.0


@pytest.mark.parametrize("k,holds,regime", [(0.25, False, False), (0.5, True, False),
                                            (0.75, True, False), (1.0, True, True), (2.0, True, True)])
def test_power_family(k, holds, regime):
    m = T.power(1.0, k)
    assert T.matrix_condition_margin(m, 3.0) == pytest.approx(2 * k - 1)
    assert T.check_family(m) == (holds, regime)


def test_margin_generic_formula_matches_power():
    m = T.power(2.0, 1.7)
    generic = T.TargetMetric(n=1, kind="custom", lam=m.lam, lam_prime=m.lam_prime)
    rho = np.array([0.3, 1.0, 4.0])
    np.testing.assert_allclose(T.matrix_condition_margin(generic, rho), 2 * 1.7 - 1, rtol=1e-14)


def test_errors():
    with pytest.raises(DomainError):
        T.matrix_condition_margin(T.flat(), 0.0)
    with pytest.raises(ParameterError):
        T.power(0.0, 1.0)
    with pytest.raises(ParameterError):
        T.check_family(T.flat())


def test_norm_sq_batches():
    np.testing.assert_allclose(T.norm_sq(T.scalar(), np.array([1.0, -2.0, 3.0])), [1.0, 4.0, 9.0])
    assert T.norm_sq(T.flat(2), np.array([3.0, 4.0])) == 25.0
    np.testing.assert_allclose(T.norm_sq(T.power(2.0, 1.5), np.array([1.0, 4.0])), [4.0, 4.0 * 4.0 ** 3])


@settings(max_examples=50, deadline=None)
# |v| below 1e-30 can underflow y = (k|v|/k1)^(1/k) to zero
@given(k1=st.floats(0.1, 5), k=st.floats(0.3, 4),
       v=st.floats(-50, 50).filter(lambda x: x == 0 or abs(x) > 1e-30))
def test_arclength_inverse(k1, k, v):
    m = T.power(k1, k)
    y = float(T.to_target_coordinate(m, v))
    assert k1 * abs(y) ** k / k == pytest.approx(abs(v), rel=1e-12, abs=1e-300)
    assert np.sign(y) == np.sign(v)
