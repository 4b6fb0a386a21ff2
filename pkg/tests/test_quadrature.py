import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.polynomial import Polynomial
from scipy import special

from vacfocus import quadrature as quad


def test_k0_matches_scipy():
    x = np.geomspace(1e-4, 60, 200)
    assert np.allclose(quad.k0_bessel(x), special.k0(x), rtol=1e-12, atol=0)
    with pytest.raises(ValueError):
        quad.k0_bessel(0.0)


@given(st.floats(0.1, 5.0))
def test_omega_moment_closed_forms(dl):
    assert math.isclose(quad.omega_moment(1, dl), -1 / dl ** 2)
    assert math.isclose(quad.omega_moment(3, dl), 6 / dl ** 4)
    # the regulated closed form tends to the limit as alpha -> 0
    assert math.isclose(quad.regulated_omega_moment_exact(3, dl, 1e-6 * dl),
                        6 / dl ** 4, rel_tol=1e-9)


@pytest.mark.parametrize("n", [1, 3])
@pytest.mark.parametrize("dl", [0.4, 1.3, -2.0])
def test_omega_moment_numeric(n, dl):
    est = quad.omega_moment_numeric(n, dl)
    assert abs(est.value - quad.omega_moment(n, dl)) <= 1e-6 * abs(quad.omega_moment(n, dl))


def test_regulated_quadrature_matches_closed_form():
    for n in (1, 3):
        for alpha in (0.5, 0.25):
            num = quad.regulated_omega_moment(n, 1.0, alpha)
            exact = quad.regulated_omega_moment_exact(n, 1.0, alpha)
            assert math.isclose(num, exact, rel_tol=1e-9)


def test_moment_errors():
    with pytest.raises(ValueError):
        quad.omega_moment(2, 1.0)
    with pytest.raises(ZeroDivisionError):
        quad.omega_moment(1, 0.0)
    with pytest.raises(ValueError):
        quad.bessel_moment(1, -1.0)


@pytest.mark.parametrize("p", [1, 2])
def test_bessel_moments(p):
    beta = 0.7
    assert math.isclose(quad.bessel_moment(1, beta), 1 / (3 * beta ** 2))
    assert math.isclose(quad.bessel_moment(2, beta), 4 / (15 * beta ** 3))
    est = quad.bessel_moment_numeric(p, beta)
    assert math.isclose(est.value, quad.bessel_moment(p, beta), rel_tol=1e-5)
    # regulated quadrature against the regulated closed form
    assert math.isclose(quad.regulated_bessel_moment(p, 0.9, beta),
                        quad.regulated_bessel_moment_exact(p, 0.9, beta), rel_tol=1e-9)


def test_richardson_recovers_polynomial_limit():
    h = np.array([0.4, 0.2, 0.1, 0.05])
    v = 2.0 + 3 * h ** 2 - 5 * h ** 4 + h ** 6
    est = quad.richardson(h, v, [2, 4, 6])
    assert abs(est.value - 2.0) < 1e-12


def test_cauchy_derivatives():
    d = quad.cauchy_derivatives(np.exp, np.array([0.3]), [1, 2, 4], 0.5)
    for k in (1, 2, 4):
        assert np.allclose(d[k], math.exp(0.3), rtol=1e-12)


def _bump(c):
    p = Polynomial(c)
    return quad.SmoothIntegrand(lambda x: p(x) * (1 - x * x) ** 6, tapered=True,
                                analytic=True, radius=0.2)


def test_log_kernel_on_constant_bump():
    # finite part of int (1-x^2)^6 / x^2 dx on (-1, 1) by direct expansion
    f = _bump([1.0])
    # (1-x^2)^6 = sum_k C(6,k) (-1)^k x^(2k); FP int x^(2k-2) = 2/(2k-1), k=0 gives -2
    exact = sum(math.comb(6, k) * (-1) ** k * 2 / (2 * k - 1) for k in range(7))
    assert math.isclose(quad.log_kernel_integral(f, 2, (-1.0, 1.0)), exact, rel_tol=1e-10)
    exact4 = sum(math.comb(6, k) * (-1) ** k * 2 / (2 * k - 3) for k in range(7))
    assert math.isclose(quad.log_kernel_integral(f, 4, (-1.0, 1.0)), exact4, rel_tol=1e-10)


@given(st.lists(st.floats(-2, 2), min_size=1, max_size=5), st.sampled_from([2, 4]))
def test_log_kernel_agrees_with_excision(coeffs, n):
    f = _bump(coeffs)
    ibp = quad.log_kernel_integral(f, n, (-1.0, 1.0))
    exc = quad.excision_finite_part(f, n, (-1.0, 1.0)).value
    scale = max(1.0, max(abs(c) for c in coeffs))
    assert abs(ibp - exc) <= 1e-6 * scale


def test_log_kernel_rejects_bad_input():
    f = _bump([1.0])
    with pytest.raises(ValueError):
        quad.log_kernel_integral(f, 3, (-1.0, 1.0))
    with pytest.raises(ValueError):
        quad.log_kernel_integral(f, 2, (0.1, 1.0))
    untapered = quad.SmoothIntegrand(lambda x: 1 + 0 * x, tapered=False, analytic=True)
    with pytest.raises(ValueError):
        quad.log_kernel_integral(untapered, 2, (-1.0, 1.0))
