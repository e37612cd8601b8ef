"""Adaptive panel quadrature against closed-form integrals."""

import math

import numpy as np
import pytest

from hierstat import AccuracyError, ValidationError
from hierstat.quadrature import integrate_adaptive


def test_polynomial_is_exact():
    est = integrate_adaptive(lambda x: 3 * x ** 2, 0.0, 2.0)
    assert est == pytest.approx(8.0, rel=1e-14)


def test_oscillatory_integrand():
    est = integrate_adaptive(math.sin, 0.0, math.pi)
    assert est == pytest.approx(2.0, rel=1e-12)
    est = integrate_adaptive(lambda x: math.sin(40 * x), 0.0, 1.0)
    assert est == pytest.approx((1 - math.cos(40.0)) / 40.0, rel=1e-10, abs=1e-12)


def test_breakpoints_isolate_kink():
    f = lambda x: abs(x - 0.3)
    exact = 0.3 ** 2 / 2 + 0.7 ** 2 / 2
    est = integrate_adaptive(f, 0.0, 1.0, breakpoints=(0.3,))
    assert est == pytest.approx(exact, rel=1e-14)


def test_vector_integrand():
    est = integrate_adaptive(lambda x: np.array([1.0, x, x * x]), 0.0, 1.0)
    assert est == pytest.approx([1.0, 0.5, 1 / 3], rel=1e-13)


def test_nonconvergence_carries_estimate_and_bound():
    # a step function can never satisfy a 1e-10 relative tolerance
    f = lambda x: 0.0 if x < math.pi / 6 else 1.0
    with pytest.raises(AccuracyError) as err:
        integrate_adaptive(f, 0.0, 1.0, max_depth=4)
    assert err.value.estimate == pytest.approx(1 - math.pi / 6, abs=1e-2)
    assert err.value.error_bound > 0.0


def test_interval_validation():
    with pytest.raises(ValidationError):
        integrate_adaptive(math.sin, 1.0, 0.0)
    assert integrate_adaptive(math.sin, 1.0, 1.0) == 0.0
