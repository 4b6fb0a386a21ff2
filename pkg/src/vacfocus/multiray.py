"""Conjugate reflected rays near the critical rim angle ``pi/3``.

For an axial point close to the focus, one incident direction can produce two
reflected rays, at ``theta1' = pi/3 + xi1`` and ``theta2' = pi/3 + xi2``.  Both
share the value of the scaled incident angle

    f(theta') = sin^3 theta' sec theta' / (sec theta' - 1) = sin theta' (1 + cos theta')

so the pair is found by solving ``f(pi/3 + xi2) = f(pi/3 + xi1)`` for the
non-trivial root.  Two routes are provided: bracketed root finding and the
exact power-series reversion ``xi2(xi1)`` over Q(sqrt 3).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import optimize

from . import series as ps
from .geometry import CRITICAL_RIM_ANGLE, path_difference, scaled_incident_angle
from .series import QSqrt3

#: root-finder tolerance on xi2, radians
ROOT_TOL = 1e-12
#: exclusion around the trivial root xi2 = xi1
EPSILON = 1e-15
#: number of series coefficients computed and cached
MAX_ORDER = 12


class SubCriticalMirror(ValueError):
    """The mirror does not extend past ``pi/3``, so no conjugate pair exists."""


@dataclass(frozen=True)
class SeriesCoefficients:
    """Exact coefficients of ``f(pi/3 + xi)`` and of the reversion ``xi2(xi1)``.

    ``theta[k]`` multiplies ``xi**k``; ``conjugate[k]`` multiplies ``xi1**(k+1)``,
    so ``conjugate[0]`` is the linear coefficient ``-1``.
    """

    theta: tuple
    conjugate: tuple

    def as_floats(self) -> tuple[list[float], list[float]]:
        return [float(c) for c in self.theta], [float(c) for c in self.conjugate]


@dataclass(frozen=True)
class ConjugateRayPair:
    xi1: float
    xi2: float
    theta_shared: float  # incident angle in units of a/b
    delta_ell_over_a: float

    @property
    def theta1_prime(self) -> float:
        return CRITICAL_RIM_ANGLE + self.xi1

    @property
    def theta2_prime(self) -> float:
        return CRITICAL_RIM_ANGLE + self.xi2


def theta_scaled(xi):
    """Scaled incident angle ``theta * b/a`` at ``theta' = pi/3 + xi``."""
    return scaled_incident_angle(CRITICAL_RIM_ANGLE + np.asarray(xi))


def numeric_argmax() -> float:
    """Maximiser of the incident-angle curve on ``(0, pi/2)``, found numerically.

    The slope comes from complex-step differentiation (no subtraction, so it
    is accurate to rounding) and its zero is bracketed with Brent's method.
    """
    h = 1e-20

    def slope(t):
        return float(np.imag(scaled_incident_angle(t + 1j * h))) / h

    return optimize.brentq(slope, 0.1, math.pi / 2, xtol=1e-15, rtol=4 * np.finfo(float).eps)


@lru_cache(maxsize=None)
def critical_angle() -> float:
    """The reflected angle at which the incident angle peaks, ``pi/3``.

    The closed form is cross-checked against :func:`numeric_argmax` on first use.
    """
    found = numeric_argmax()
    if abs(found - CRITICAL_RIM_ANGLE) > 1e-10:
        raise RuntimeError(f"incident-angle maximum found at {found}, expected pi/3")
    return CRITICAL_RIM_ANGLE


# -- exact series ---------------------------------------------------------

def _trig_at_pi_over_3(order: int) -> tuple[ps.Series, ps.Series]:
    """Series of sin(pi/3 + x) and cos(pi/3 + x) in x."""
    s, c = ps.sin_series(order), ps.cos_series(order)
    half = QSqrt3(Fraction(1, 2))
    half_root3 = QSqrt3(0, Fraction(1, 2))
    sin_shift = ps.add(ps.scale(c, half_root3), ps.scale(s, half))
    cos_shift = ps.sub(ps.scale(c, half), ps.scale(s, half_root3))
    return sin_shift, cos_shift


def theta_series(order: int) -> ps.Series:
    """Exact Taylor coefficients of ``f(pi/3 + xi)`` through ``xi**order``.

    Built from the literal ``sin^3 sec / (sec - 1)`` form with series
    arithmetic; ``sec - 1`` is invertible because ``sec(pi/3) = 2``.
    """
    sin_t, cos_t = _trig_at_pi_over_3(order)
    sec_t = ps.inverse(cos_t)
    one = ps.series([1], order)
    return ps.div(ps.mul(ps.power(sin_t, 3), sec_t), ps.sub(sec_t, one))


def _revert(theta: ps.Series, order: int) -> ps.Series:
    # xi2 = sum c_k xi^k, c_1 = -1; order by order, the xi^(k+1) coefficient of
    # f(xi2) - f(xi) is linear in c_k with slope 2 * theta[2] * c_1
    if not theta[1] == 0 or not theta[2]:
        raise ValueError("expansion point is not a non-degenerate extremum")
    coeffs = [ps.ZERO, QSqrt3(-1)]
    slope = 2 * theta[2] * coeffs[1]
    for k in range(2, order + 1):
        trial = ps.series(coeffs + [ps.ZERO], k + 1)
        residual = ps.sub(ps.compose(ps.series(theta, k + 1), trial),
                          ps.series(theta, k + 1))
        coeffs.append(-residual[k + 1] / slope)
    return tuple(coeffs[1:])


@lru_cache(maxsize=None)
def derive_series_coefficients(order: int = 6) -> SeriesCoefficients:
    """Expansion of ``f`` about ``pi/3`` and its reversion ``xi2(xi1)``.

    ``theta`` holds terms ``xi**0 .. xi**order``; ``conjugate`` holds terms
    ``xi1**1 .. xi1**order``.
    """
    if order < 2:
        raise ValueError("order must be at least 2")
    theta = theta_series(order + 1)
    return SeriesCoefficients(theta=theta[: order + 1], conjugate=_revert(theta, order))


def conjugate_series(xi1, order: int = 5):
    """Truncated reversion series for ``xi2``, terms ``xi1**1 .. xi1**order``."""
    if order < 1 or order > MAX_ORDER:
        raise ValueError(f"order must be in 1..{MAX_ORDER}, got {order}")
    coeffs = derive_series_coefficients(MAX_ORDER).conjugate[:order]
    xi1 = np.asarray(xi1)
    acc = 0.0 * xi1
    for c in reversed([float(c) for c in coeffs]):
        acc = (acc + c) * xi1
    return float(acc) if acc.ndim == 0 and not np.iscomplexobj(acc) else acc


# -- numeric conjugate ------------------------------------------------------

def _reduced_condition(xi1, s):
    # f(A) - f(B) = 2 sin(D) [cos M + cos 2M cos D], M = (A+B)/2, D = (A-B)/2;
    # the bracket vanishes exactly on the non-trivial conjugate.  With
    # s = xi1 + xi2 it equals -2 sin(3s/4) cos(M/2) - 2 cos(2M) sin^2(D/2),
    # which has no cancellation as s -> 0
    m = CRITICAL_RIM_ANGLE + 0.5 * s
    d = xi1 - 0.5 * s
    return -2 * np.sin(0.75 * s) * np.cos(0.5 * m) - 2 * np.cos(2 * m) * np.sin(0.5 * d) ** 2


def _reduced_condition_ds(xi1, s):
    m = CRITICAL_RIM_ANGLE + 0.5 * s
    h = 0.5 * (xi1 - 0.5 * s)
    return (-1.5 * np.cos(0.75 * s) * np.cos(0.5 * m) + 0.5 * np.sin(0.75 * s) * np.sin(0.5 * m)
            + 2 * np.sin(2 * m) * np.sin(h) ** 2 + np.cos(2 * m) * np.sin(h) * np.cos(h))


def _bracketed_sum(xi1: float, lo: float, hi: float) -> float:
    g_lo, g_hi = _reduced_condition(xi1, lo), _reduced_condition(xi1, hi)
    if not g_lo * g_hi < 0:
        raise RuntimeError(f"conjugate root not bracketed for xi1 = {xi1}")
    return optimize.brentq(lambda s: _reduced_condition(xi1, s), lo, hi,
                           xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)


def conjugate_sum(xi1: float) -> float:
    """``xi1 + xi2`` for real ``xi1`` of either sign, to full relative precision."""
    if xi1 > 0:
        if not xi1 < 2 * math.pi / 3:
            raise ValueError(f"xi1 must lie in (0, 2pi/3), got {xi1}")
        # xi2 in (max(-xi1, -pi/3), 0)
        return _bracketed_sum(xi1, max(0.0, xi1 - CRITICAL_RIM_ANGLE) + EPSILON * xi1,
                              xi1 * (1 - EPSILON))
    if xi1 < 0:
        if not -CRITICAL_RIM_ANGLE < xi1:
            raise ValueError(f"xi1 must lie in (-pi/3, 0), got {xi1}")
        # xi2 in (-xi1, 2pi/3)
        return _bracketed_sum(xi1, -xi1 * EPSILON, 2 * math.pi / 3 + xi1 - EPSILON)
    return 0.0


def conjugate_angle(xi1: float, xi0: float | None = None) -> float:
    """Conjugate reflection offset ``xi2`` for ``0 < xi1 (<= xi0)``.

    Bracketed root finding (Brent: bisection with secant/inverse-quadratic
    steps) for ``s = xi1 + xi2`` on ``(0, xi1)``, i.e. ``xi2`` in
    ``(-xi1, 0)``.  The objective is the conjugacy condition with the trivial
    factor ``sin((xi1 - xi2)/2)`` divided out, so it has the same non-trivial
    root as ``f(xi2) - f(xi1)`` without the cancellation near ``pi/3``.
    """
    if xi0 is not None:
        if xi0 <= 0:
            raise SubCriticalMirror(
                "mirror rim does not pass pi/3: the incident-angle curve is "
                "monotone on its aperture and no conjugate pair exists")
        if xi1 > xi0 * (1 + 1e-12):
            raise ValueError(f"xi1 = {xi1} lies beyond the rim offset xi0 = {xi0}")
    if not 0 < xi1 < 2 * math.pi / 3:
        raise ValueError(f"xi1 must lie in (0, 2pi/3), got {xi1}")
    return conjugate_sum(xi1) - xi1


def conjugate_angle_positive(xi2: float) -> float:
    """Inverse direction: the positive partner of a negative offset ``xi2``."""
    if not -CRITICAL_RIM_ANGLE < xi2 < 0:
        raise ValueError(f"xi2 must lie in (-pi/3, 0), got {xi2}")
    return conjugate_sum(xi2) - xi2


def conjugate_pair(xi1: float, xi0: float | None = None) -> ConjugateRayPair:
    xi2 = conjugate_angle(xi1, xi0)
    theta1 = CRITICAL_RIM_ANGLE + xi1
    theta2 = CRITICAL_RIM_ANGLE + xi2
    return ConjugateRayPair(xi1, xi2, float(theta_scaled(xi1)),
                            path_difference(1.0, theta1, theta2))


def conjugate_map_sum(xi1, tol: float = 1e-14, max_iter: int = 50):
    """``xi1 + xi2`` along the analytic involution, for arrays, real or complex.

    Newton's method started from the reversion series.  Negative (or complex)
    ``xi1`` follow the analytic continuation of the map; for real negative
    ``xi1`` this gives the positive partner.
    """
    xi1 = np.asarray(xi1)
    s = conjugate_series(xi1, MAX_ORDER) + xi1
    for _ in range(max_iter):
        step = _reduced_condition(xi1, s) / _reduced_condition_ds(xi1, s)
        s = s - step
        if np.all(np.abs(step) <= tol * np.abs(s)):
            break
    else:
        raise RuntimeError("conjugate_map: Newton iteration did not converge")
    return s


def conjugate_map(xi1, tol: float = 1e-14, max_iter: int = 50):
    """Analytic involution ``xi1 -> xi2``; see :func:`conjugate_map_sum`."""
    return conjugate_map_sum(xi1, tol, max_iter) - np.asarray(xi1)
