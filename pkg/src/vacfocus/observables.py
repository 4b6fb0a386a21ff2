"""Renormalised vacuum expectation values near the focus.

Values are in units with hbar = c = 1.  ``phi_sq`` scales as ``a**-2``; the
electric-field class (``E_sq``, ``B_sq``, energy densities) as ``a**-4``.

Per conjugate pair the contribution is ``C * M_n(dl)`` with ``M_n`` the
frequency moment and ``dl = a (cos theta1' - cos theta2')``.  Integrating over
``xi1`` on ``[-xi0, xi0]`` (with a factor 1/2 for counting each pair twice)
and regularising the ``1/xi1^n`` pole by parts leaves

    phi_sq = -1/(8 pi^2 a^2) * I_2[g_2],        E_sq = 3/(2 pi^2 a^4) * I_4[g_4],

where ``g_n = xi1^n / (cos(pi/3 + xi1) - cos(pi/3 + xi2))^n`` and ``I_n`` is
the log-kernel integral of :func:`vacfocus.quadrature.log_kernel_integral`.
The small-``xi0`` closed forms keep the leading ``xi0 (1 - ln xi0)`` term.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache

import numpy as np

from . import series as ps
from .geometry import CRITICAL_RIM_ANGLE, MirrorKind
from .multiray import MAX_ORDER, _trig_at_pi_over_3, conjugate_map_sum, derive_series_coefficients
from .quadrature import SmoothIntegrand, bessel_moment, log_kernel_integral, omega_moment

#: default smoothing width at the rim, as a fraction of xi0
TAPER_WIDTH = 0.02
#: contour radius for derivatives of the conjugate integrand
CONTOUR_RADIUS = 0.25


class Kind(str, Enum):
    PHI_SQ = "phi_sq"
    PHIDOT_SQ = "phidot_sq"
    E_SQ = "E_sq"
    B_SQ = "B_sq"
    RHO_SCALAR = "rho_scalar"
    RHO_EM = "rho_EM"


class Geometry(str, Enum):
    REVOLUTION = "revolution"
    CYLINDER = "cylinder"
    FLAT_PLATE = "flat_plate"


class Method(str, Enum):
    CLOSED_FORM = "closed_form"
    NUMERIC = "numeric_quadrature"

    @classmethod
    def _missing_(cls, value):
        return cls.NUMERIC if value == "numeric" else None


# relative to E_sq: E^2 = B^2 = rho_EM = 2 <phidot^2> = 2 rho_scalar
_E_CLASS = {Kind.E_SQ: 1.0, Kind.B_SQ: 1.0, Kind.RHO_EM: 1.0,
            Kind.PHIDOT_SQ: 0.5, Kind.RHO_SCALAR: 0.5}


@dataclass(frozen=True)
class VacuumObservable:
    kind: Kind
    geometry: Geometry
    a: float
    value: float
    method: Method
    xi0: float | None = None
    error: float = 0.0
    status: str = "ok"

    @property
    def scaling_exponent(self) -> int:
        return -2 if self.kind is Kind.PHI_SQ else -4

    @property
    def coefficient(self) -> float:
        """Dimensionless coefficient, e.g. ``Lambda`` in ``E_sq = Lambda / a^4``."""
        return self.value * self.a ** (-self.scaling_exponent)


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Exact Taylor coefficients of ``g_2`` (``A``) and ``g_4`` (``B``) in ``xi1``."""

    A: tuple
    B: tuple


@lru_cache(maxsize=None)
def expansion_coefficients(order: int = 6) -> ExpansionCoefficients:
    """``A_0..A_order`` and ``B_0..B_order`` by exact series composition."""
    if order + 1 > MAX_ORDER:
        raise ValueError(f"order {order} needs more than {MAX_ORDER} reversion terms")
    n = order + 1
    xi2 = (ps.ZERO,) + derive_series_coefficients(MAX_ORDER).conjugate[:n]
    ident = ps.series([0, 1], n)
    _, cos_shift = _trig_at_pi_over_3(n)
    dcos = ps.sub(ps.compose(cos_shift, ident), ps.compose(cos_shift, xi2))
    ratio = ps.inverse(ps.shift_down(dcos, 1))  # xi1 / dcos
    a_series = ps.power(ratio, 2)
    b_series = ps.power(ratio, 4)
    return ExpansionCoefficients(A=a_series[: order + 1], B=b_series[: order + 1])


# -- prefactors -----------------------------------------------------------------

def revolution_density(kind: Kind, delta_ell: float = 1.0) -> float:
    """Per-radian contribution of one conjugate pair, parabola of revolution."""
    if kind is Kind.PHI_SQ:
        return omega_moment(1, delta_ell) / (4 * math.pi ** 2)
    return _E_CLASS[Kind(kind)] * omega_moment(3, delta_ell) / (2 * math.pi ** 2)


def cylinder_density(kind: Kind, delta_ell: float = 1.0) -> float:
    """Per-radian contribution for the parabolic cylinder, both halves included.

    The ``k_z`` integral leaves Bessel moments evaluated at the imaginary
    argument ``beta = -i dl/2``; the closed forms continue analytically.
    """
    beta = -0.5j * delta_ell
    if kind is Kind.PHI_SQ:
        m1 = bessel_moment(1, 1.0) / beta ** 2
        return 2 * m1.real / (8 * math.pi ** 3)
    m2 = bessel_moment(2, 1.0) / beta ** 3
    # d/d(dl) of Im m2, with Im m2 proportional to dl^-3
    deriv = -3 * m2.imag / delta_ell
    return _E_CLASS[Kind(kind)] * 2 * deriv / (4 * math.pi ** 3)


def cylinder_factor(kind: Kind) -> float:
    """Cylinder / revolution ratio: ``4/(3 pi)`` for phi_sq, ``16/(15 pi)`` otherwise."""
    return cylinder_density(kind) / revolution_density(kind)


def _pole_order(kind: Kind) -> int:
    return 2 if kind is Kind.PHI_SQ else 4


def _pair_prefactor(kind: Kind, geometry: Geometry) -> float:
    # density * 1/2 overcount; the sign and moment constant are in the density
    # and a power of (cos1 - cos2) = dcos is left for the integral
    base = 0.5 * revolution_density(kind)
    if Geometry(geometry) is Geometry.CYLINDER:
        base *= cylinder_factor(kind)
    return base


# -- numeric path --------------------------------------------------------------

def conjugate_integrand(xi1, power: int):
    """``(xi1 / (cos(pi/3 + xi1) - cos(pi/3 + xi2)))**power``; complex-capable."""
    xi1 = np.asarray(xi1)
    s = conjugate_map_sum(xi1)
    m = CRITICAL_RIM_ANGLE + 0.5 * s
    d = xi1 - 0.5 * s
    safe_d = np.where(d == 0, 1.0, d)
    ratio = np.where(d == 0, 1.0, xi1 / np.sin(safe_d))  # xi1 / sin(d) -> 1 at 0
    return (ratio / (-2.0 * np.sin(m))) ** power


def smooth_step(t):
    """C-infinity step: 0 for t <= -1, 1 for t >= 1, and ``S(t) + S(-t) = 1``."""
    t = np.clip(np.asarray(t, dtype=float), -1.0, 1.0)

    def psi(u):
        return np.where(u > 0, np.exp(-1.0 / np.where(u > 0, u, 1.0)), 0.0)

    left, right = psi(1 + t), psi(1 - t)
    return left / (left + right)


def rim_window(xi0: float, width: float):
    """Plateau equal to 1 inside ``|xi| < xi0 - width/2`` and 0 beyond ``xi0 + width/2``."""
    def window(x):
        return smooth_step((xi0 - np.abs(x)) / (0.5 * width))
    return window


def _log_kernel(xi0: float, n: int, taper_width: float, nodes: int):
    f = SmoothIntegrand(lambda z: conjugate_integrand(z, n), tapered=True,
                        analytic=True, radius=CONTOUR_RADIUS)
    if taper_width <= 0:
        return log_kernel_integral(f, n, (-xi0, xi0), nodes=nodes, full_output=True)
    width = taper_width * xi0
    edge = xi0 + 0.5 * width
    inner = xi0 - 0.5 * width
    return log_kernel_integral(f, n, (-edge, edge), window=rim_window(xi0, width),
                               breakpoints=(-inner, inner), nodes=nodes,
                               full_output=True)


def _numeric(kind: Kind, geometry: Geometry, a: float, xi0: float,
             taper_width: float, nodes: int) -> tuple[float, float]:
    n = _pole_order(kind)
    pref = _pair_prefactor(kind, geometry) / a ** n
    value, quad_err = _log_kernel(xi0, n, taper_width, nodes)
    err = quad_err
    if taper_width > 0:
        # regularisation dependence, estimated from the next-coarser taper
        coarser, _ = _log_kernel(xi0, n, 2 * taper_width, nodes)
        err += abs(coarser - value)
    return float(pref * value), float(abs(pref) * err)


# -- closed form ---------------------------------------------------------------

def _log_moment(j: int, xi0: float) -> float:
    # int_{-xi0}^{xi0} xi^(2j) ln xi^2 d xi
    p = 2 * j + 1
    return 4 * (xi0 ** p * math.log(xi0) / p - xi0 ** p / p ** 2)


def _closed(kind: Kind, geometry: Geometry, a: float, xi0: float) -> tuple[float, float]:
    n = _pole_order(kind)
    coeffs = expansion_coefficients(n + 2)
    series_ = coeffs.A if n == 2 else coeffs.B
    kernel = -0.5 if n == 2 else -1.0 / 12.0
    pref = _pair_prefactor(kind, geometry) / a ** n * kernel

    def term(j):
        # n-th derivative of c xi^(n + 2j) is c (n+2j)!/(2j)! xi^(2j)
        k = n + 2 * j
        c = float(series_[k]) * math.factorial(k) / math.factorial(2 * j)
        return pref * c * _log_moment(j, xi0)

    return term(0), abs(term(1))


def leading_coefficient(kind: Kind, geometry: Geometry = Geometry.REVOLUTION) -> float:
    """``c`` in ``value ~ c xi0 (1 - ln xi0) / a^p`` for small ``xi0``."""
    lead, _ = _closed(Kind(kind), Geometry(geometry), 1.0, math.e ** -1)
    # at xi0 = 1/e: xi0 (1 - ln xi0) = 2/e
    return lead / (2 * math.exp(-1))


def _observable(kind: Kind, geometry, a: float, xi0: float, method,
                taper_width: float, nodes: int) -> VacuumObservable:
    geometry = Geometry(getattr(geometry, "value", geometry))
    method = Method(method)
    if geometry is Geometry.FLAT_PLATE:
        raise ValueError("use flat_plate_E_sq for the flat plate")
    if not a > 0:
        raise ValueError(f"a must be positive, got {a}")
    if xi0 < 0:
        raise ValueError(f"xi0 must be non-negative, got {xi0}")
    if xi0 == 0:
        return VacuumObservable(kind, geometry, a, 0.0, method, xi0, 0.0, "sub-critical")
    if method is Method.CLOSED_FORM:
        value, err = _closed(kind, geometry, a, xi0)
    else:
        value, err = _numeric(kind, geometry, a, xi0, taper_width, nodes)
    return VacuumObservable(kind, geometry, a, value, method, xi0, err)


def phi_sq(geometry, a: float, xi0: float, method=Method.CLOSED_FORM, *,
           taper_width: float = TAPER_WIDTH, nodes: int = 48) -> VacuumObservable:
    """Renormalised ``<phi^2>`` on the axis at distance ``a`` from the focus."""
    return _observable(Kind.PHI_SQ, geometry, a, xi0, method, taper_width, nodes)


def E_sq(geometry, a: float, xi0: float, method=Method.CLOSED_FORM, *,
         taper_width: float = TAPER_WIDTH, nodes: int = 48) -> VacuumObservable:
    """Renormalised ``<E^2>`` on the axis at distance ``a`` from the focus."""
    return _observable(Kind.E_SQ, geometry, a, xi0, method, taper_width, nodes)


def flat_plate_E_sq(z: float) -> VacuumObservable:
    """``<E^2> = 3 / (16 pi^2 z^4)`` at distance ``z`` from a perfectly conducting plate."""
    if not z > 0:
        raise ValueError(f"z must be positive, got {z}")
    return VacuumObservable(Kind.E_SQ, Geometry.FLAT_PLATE, z,
                            3.0 / (16 * math.pi ** 2 * z ** 4), Method.CLOSED_FORM)


def related_quantity(base: VacuumObservable, kind) -> VacuumObservable:
    """Convert within the electric-field class using the two-polarisation relations."""
    kind = Kind(kind)
    if base.kind not in _E_CLASS or kind not in _E_CLASS:
        raise ValueError(f"cannot convert {base.kind.value} to {kind.value}")
    factor = _E_CLASS[kind] / _E_CLASS[base.kind]
    return replace(base, kind=kind, value=base.value * factor, error=base.error * factor)


def mirror_geometry(kind: MirrorKind) -> Geometry:
    return Geometry(MirrorKind(kind).value)


def fit_leading_coefficient(kind, xi0_values, geometry=Geometry.REVOLUTION, *,
                            taper_width: float = TAPER_WIDTH) -> float:
    """Fit numeric values to ``c xi0 (1 - ln xi0)`` (a = 1), minimising relative residuals."""
    kind = Kind(kind)
    xs = np.asarray(xi0_values, dtype=float)
    f = phi_sq if kind is Kind.PHI_SQ else E_sq
    values = np.array([f(geometry, 1.0, x, Method.NUMERIC, taper_width=taper_width).value
                       for x in xs])
    ratio = xs * (1 - np.log(xs)) / values
    scale = _E_CLASS.get(kind, 1.0)
    return float(scale * np.sum(ratio) / np.sum(ratio ** 2))
