"""Singular and oscillatory integrals used by the observables.

* regulated frequency moments ``int_0^inf w^n cos(w dl) exp(-alpha w) dw``
  in the limit ``alpha -> 0``;
* moments of the modified Bessel function ``K0`` in the limit ``alpha -> beta``;
* the integration-by-parts form of ``int f(x)/x^n dx`` with a ``ln x^2`` kernel,
  together with an independent Hadamard finite-part (excision) evaluation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate

EULER_GAMMA = float(np.euler_gamma)

#: default regulator schedule, alpha / |dl|
OMEGA_REGULATORS = (0.1, 0.05, 0.025, 0.0125, 0.00625)
#: default schedule for alpha = beta (1 + delta)
BESSEL_OFFSETS = (0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125)


class Estimate(NamedTuple):
    value: float
    error: float


# -- extrapolation -----------------------------------------------------------

def richardson(steps: Sequence[float], values: Sequence[float],
               powers: Sequence[float]) -> Estimate:
    """Extrapolate ``values(h)`` to ``h = 0`` assuming ``v(h) = v0 + sum c_k h^p_k``.

    Uses every point; ``powers`` must supply at least ``len(values) - 1``
    exponents.  The error is the change from dropping the coarsest point.
    """
    h = np.asarray(steps, dtype=float)
    v = np.asarray(values, dtype=float)
    m = len(v)
    if m < 2 or len(powers) < m - 1:
        raise ValueError("need at least two values and len(values)-1 powers")

    def solve(hh, vv):
        k = len(vv)
        mat = np.ones((k, k))
        for j in range(1, k):
            mat[:, j] = hh ** powers[j - 1]
        return float(np.linalg.solve(mat, vv)[0])

    best = solve(h, v)
    coarse = solve(h[1:], v[1:]) if m > 2 else float(v[-1])
    return Estimate(best, abs(best - coarse))


# -- frequency moments --------------------------------------------------------

def regulated_omega_moment_exact(n: int, delta_ell: float, alpha: float) -> float:
    """Closed form of the regulated moment: ``Re n! / (alpha - i dl)^(n+1)``."""
    z = complex(alpha, -delta_ell)
    return (math.factorial(n) / z ** (n + 1)).real


def regulated_omega_moment(n: int, delta_ell: float, alpha: float) -> float:
    """Numeric quadrature of ``int_0^inf w^n cos(w dl) e^(-alpha w) dw``."""
    dl = abs(delta_ell)
    u = alpha / dl
    # QAWF only takes an absolute tolerance; scale it by int |integrand| = n!/u^(n+1)
    val, _ = integrate.quad(lambda w: w ** n * math.exp(-u * w), 0, np.inf,
                            weight="cos", wvar=1.0, limlst=200,
                            epsabs=1e-13 * math.factorial(n) / u ** (n + 1))
    return val / dl ** (n + 1)


def _check_moment_order(n: int) -> None:
    if n not in (1, 3):
        raise ValueError(f"frequency moment order must be 1 or 3, got {n}")


def omega_moment(n: int, delta_ell: float) -> float:
    """``lim_{alpha->0} int_0^inf w^n cos(w dl) e^(-alpha w) dw``.

    ``-1/dl^2`` for ``n = 1`` and ``6/dl^4`` for ``n = 3``.
    """
    _check_moment_order(n)
    if delta_ell == 0:
        raise ZeroDivisionError("coincident rays: the moment diverges at dl = 0")
    return -1.0 / delta_ell ** 2 if n == 1 else 6.0 / delta_ell ** 4


def omega_moment_numeric(n: int, delta_ell: float,
                         regulators: Sequence[float] = OMEGA_REGULATORS) -> Estimate:
    """Regulated quadrature at ``alpha = r |dl|`` for each ``r``, extrapolated to 0.

    The regulated moment is even in ``alpha``, so extrapolation is in ``alpha^2``.
    Very small regulators are avoided for ``n = 3``: the integrand's magnitude
    grows like ``alpha^-4`` while the result stays O(1).
    """
    _check_moment_order(n)
    if delta_ell == 0:
        raise ZeroDivisionError("coincident rays: the moment diverges at dl = 0")
    regs = sorted(regulators, reverse=True)
    if any(not r > 0 for r in regs):
        raise ValueError("regulators must be positive")
    dl = abs(delta_ell)
    vals = [regulated_omega_moment(n, dl, r * dl) for r in regs]
    powers = [2 * k for k in range(1, len(regs))]
    return richardson([r * dl for r in regs], vals, powers)


# -- K0 -------------------------------------------------------------------

_SERIES_MAX = 2.0
_ASYMPTOTIC_MIN = 18.0


def _k0_series(x):
    # K0 = -(ln(x/2) + gamma) I0 + sum (x^2/4)^k / (k!)^2 H_k
    q = 0.25 * x * x
    term = np.ones_like(x)
    i0 = np.ones_like(x)
    acc = np.zeros_like(x)
    harmonic = 0.0
    for k in range(1, 40):
        term = term * q / (k * k)
        harmonic += 1.0 / k
        i0 = i0 + term
        acc = acc + term * harmonic
    return -(np.log(0.5 * x) + EULER_GAMMA) * i0 + acc


def _k0_integral(x):
    # K0(x) = int_0^inf exp(-x cosh t) dt; the trapezoid rule converges
    # geometrically for this entire, doubly-decaying integrand
    h = 0.125
    t = np.arange(0.0, 6.0 + h, h)
    w = np.full(t.shape, h)
    w[0] = 0.5 * h
    return np.exp(-np.multiply.outer(x, np.cosh(t))) @ w


def _k0_asymptotic(x):
    # sqrt(pi/2x) e^-x sum_k (-1)^k prod (2j-1)^2 / (k! (8x)^k), cut at smallest term
    term = np.ones_like(x)
    acc = np.ones_like(x)
    for k in range(1, 40):
        nxt = -term * (2 * k - 1) ** 2 / (k * 8.0 * x)
        if np.all(np.abs(nxt) >= np.abs(term)):
            break
        term = np.where(np.abs(nxt) < np.abs(term), nxt, 0.0)
        acc = acc + term
    return np.sqrt(np.pi / (2 * x)) * np.exp(-x) * acc


def k0_bessel(x):
    """Modified Bessel function of the second kind, order zero.

    Power series for ``x <= 2``, the integral representation
    ``int_0^inf exp(-x cosh t) dt`` (trapezoid rule) for ``2 < x < 18``, and
    the Hankel asymptotic expansion beyond.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0) or np.any(np.isnan(arr)):
        raise ValueError("K0 is defined here for x > 0 only")
    flat = np.atleast_1d(arr).ravel()
    out = np.empty_like(flat)
    small = flat <= _SERIES_MAX
    large = flat >= _ASYMPTOTIC_MIN
    mid = ~small & ~large
    if small.any():
        out[small] = _k0_series(flat[small])
    if mid.any():
        out[mid] = _k0_integral(flat[mid])
    if large.any():
        out[large] = _k0_asymptotic(flat[large])
    out = out.reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


# -- Bessel moments ------------------------------------------------------------

def _check_bessel_order(p: int) -> None:
    if p not in (1, 2):
        raise ValueError(f"Bessel moment order must be 1 or 2, got {p}")


def bessel_moment(p: int, beta: float) -> float:
    """``lim_{alpha->beta} int_0^inf x^p e^(-alpha x) K0(beta x) dx``.

    ``1/(3 beta^2)`` for ``p = 1``; ``4/(15 beta^3)`` for ``p = 2``.
    """
    _check_bessel_order(p)
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    return 1.0 / (3 * beta ** 2) if p == 1 else 4.0 / (15 * beta ** 3)


def regulated_bessel_moment_exact(p: int, alpha: float, beta: float) -> float:
    """Tabulated closed form of the regulated moment for ``alpha > beta``."""
    _check_bessel_order(p)
    d2 = alpha * alpha - beta * beta
    root = math.sqrt(d2)
    acosh = math.acosh(alpha / beta)
    if p == 1:
        return (alpha / root * acosh - 1.0) / d2
    # minus the alpha-derivative of the p = 1 form
    dbracket = acosh / root - alpha * alpha * acosh / root ** 3 + alpha / (root * root)
    bracket = alpha / root * acosh - 1.0
    return -(dbracket / d2 - 2 * alpha * bracket / d2 ** 2)


def regulated_bessel_moment(p: int, alpha: float, beta: float) -> float:
    """Adaptive quadrature of ``int_0^inf x^p e^(-alpha x) K0(beta x) dx``."""
    _check_bessel_order(p)
    scale = alpha / beta

    def integrand(t):
        return t ** p * math.exp(-scale * t) * k0_bessel(t)

    head, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=0, epsrel=1e-13, limit=200)
    tail, _ = integrate.quad(integrand, 1.0, np.inf, epsabs=0, epsrel=1e-13, limit=200)
    return (head + tail) / beta ** (p + 1)


def bessel_moment_numeric(p: int, beta: float,
                          offsets: Sequence[float] = BESSEL_OFFSETS) -> Estimate:
    """Quadrature at ``alpha = beta (1 + delta)``, extrapolated to ``delta = 0``."""
    _check_bessel_order(p)
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    offs = sorted(offsets, reverse=True)
    vals = [regulated_bessel_moment(p, beta * (1 + d), beta) for d in offs]
    return richardson(offs, vals, list(range(1, len(offs))))


# -- log-kernel integrals -------------------------------------------------------

def cauchy_derivatives(func: Callable, x, orders: Sequence[int], radius: float,
                       points: int = 64) -> dict[int, np.ndarray]:
    """Derivatives of an analytic function from its values on circles about ``x``.

    ``func`` must accept complex arrays.  The trapezoid rule on the circle is
    spectrally accurate; the roundoff on order ``k`` is about ``k! eps / radius^k``.
    """
    x = np.asarray(x, dtype=float)
    angles = 2 * np.pi * np.arange(points) / points
    z = x[..., None] + radius * np.exp(1j * angles)
    coeffs = np.fft.fft(func(z), axis=-1) / points
    return {k: (math.factorial(k) * coeffs[..., k] / radius ** k).real for k in orders}


@dataclass(frozen=True)
class SmoothIntegrand:
    """A function regular at the origin, with access to derivatives up to order 4.

    ``derivative(x, k)`` may be supplied; otherwise derivatives come from
    contour integrals (``analytic=True``, ``func`` accepts complex input) or
    from central finite differences.  ``tapered`` records the caller's claim
    that the function and its derivatives vanish at the outer endpoints, so the
    surface terms of the integrations by parts can be dropped.
    """

    func: Callable
    derivative: Callable | None = None
    tapered: bool = False
    analytic: bool = False
    radius: float = 0.05
    fd_step: float = 1e-2

    def __call__(self, x):
        return self.func(x)

    def deriv(self, x, k: int):
        if k == 0:
            return self.func(np.asarray(x, dtype=float))
        if self.derivative is not None:
            return self.derivative(np.asarray(x, dtype=float), k)
        if self.analytic:
            return cauchy_derivatives(self.func, x, [k], self.radius)[k]
        return _finite_difference(self.func, np.asarray(x, dtype=float), k, self.fd_step)

    def check_taper(self, points: Sequence[float], orders: int, tol: float) -> bool:
        return all(np.all(np.abs(self.deriv(np.asarray([p]), k)) <= tol)
                   for p in points for k in range(orders + 1))


# eighth-order central stencils for derivatives 1..4
_FD_STENCILS = {
    1: [1 / 280, -4 / 105, 1 / 5, -4 / 5, 0, 4 / 5, -1 / 5, 4 / 105, -1 / 280],
    2: [-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560],
    3: [-7 / 240, 3 / 10, -169 / 120, 61 / 30, 0, -61 / 30, 169 / 120, -3 / 10, 7 / 240],
    4: [7 / 240, -2 / 5, 169 / 60, -122 / 15, 91 / 8, -122 / 15, 169 / 60, -2 / 5, 7 / 240],
}


def _finite_difference(func, x, k, h):
    if k not in _FD_STENCILS:
        raise ValueError(f"finite differences available for orders 1..4, not {k}")
    offsets = np.arange(-4, 5) * h
    vals = func(x[..., None] + offsets)
    return vals @ np.asarray(_FD_STENCILS[k]) / h ** k


_LOG_KERNEL_FACTOR = {2: -0.5, 4: -1.0 / 12.0}


def _gauss(nodes: int):
    return np.polynomial.legendre.leggauss(nodes)


def _plain_panel(h, lo, hi, t, w):
    x = 0.5 * (hi - lo) * t + 0.5 * (hi + lo)
    return 0.5 * (hi - lo) * np.sum(w * np.log(x * x) * h(x))


def _singular_panel(h, length, sign, h0, t, w):
    # int_0^L ln x^2 h(sign x) dx: subtract h(0), integrate the analytic piece
    # exactly, and map x = L u^2 so the remainder becomes u^3 ln u - smooth enough
    u = 0.5 * (t + 1.0)
    x = length * u * u
    jac = 2.0 * length * u * 0.5
    rem = np.sum(w * jac * np.log(x * x) * (h(sign * x) - h0))
    return h0 * 2.0 * length * (math.log(length) - 1.0) + rem


def _log_kernel_sum(h, lo, hi, cuts, nodes):
    t, w = _gauss(nodes)
    h0 = float(h(np.asarray([0.0]))[0])
    total = 0.0
    for side_lo, side_hi, sign in ((0.0, hi, 1.0), (0.0, -lo, -1.0)):
        if side_hi <= 0:
            continue
        inner = sorted(c for c in (sign * c for c in cuts) if 0 < c < side_hi)
        edges = [side_lo] + inner + [side_hi]
        total += _singular_panel(h, edges[1], sign, h0, t, w)
        for a, b in zip(edges[1:-1], edges[2:]):
            if sign > 0:
                total += _plain_panel(h, a, b, t, w)
            else:
                total += _plain_panel(h, -b, -a, t, w)
    return total


def log_kernel_integral(f: SmoothIntegrand, n: int, interval: tuple[float, float], *,
                        window: Callable | None = None, breakpoints: Sequence[float] = (),
                        nodes: int = 48, check_taper: bool = False,
                        taper_tol: float = 1e-8, full_output: bool = False):
    """Regularised ``int f(x)/x^n dx`` over ``interval`` for ``n`` in {2, 4}.

    Evaluated as ``-1/2 int ln x^2 f''`` (``n = 2``) or ``-1/12 int ln x^2 f''''``
    (``n = 4``), i.e. after integrating by parts with the surface terms
    dropped.  ``f.tapered`` must be set to acknowledge that.  An optional
    ``window`` multiplies the log-kernel integrand; ``breakpoints`` split the
    composite Gauss-Legendre rule where the integrand changes character.

    With ``full_output`` a ``(value, error)`` pair is returned, the error
    being the change between ``nodes`` and ``2*nodes`` points per panel.
    """
    if n not in _LOG_KERNEL_FACTOR:
        raise ValueError(f"kernel order must be 2 or 4, got {n}")
    lo, hi = map(float, interval)
    if not lo <= 0 <= hi or lo == hi:
        raise ValueError(f"interval {interval} must contain the pole at 0")
    if not f.tapered:
        raise ValueError("surface terms are only dropped for integrands flagged as tapered")
    if check_taper:
        ends = [e for e in (lo, hi) if e != 0]
        if not f.check_taper(ends, n - 1, taper_tol):
            raise ValueError("integrand does not vanish at the endpoints")

    def h(x):
        vals = np.asarray(f.deriv(x, n), dtype=float)
        return vals * window(x) if window is not None else vals

    coarse = _log_kernel_sum(h, lo, hi, breakpoints, nodes)
    fine = _log_kernel_sum(h, lo, hi, breakpoints, 2 * nodes)
    factor = _LOG_KERNEL_FACTOR[n]
    value = factor * fine
    if full_output:
        return Estimate(value, abs(factor) * abs(fine - coarse))
    return value


def excision_finite_part(f: SmoothIntegrand, n: int, interval: tuple[float, float], *,
                         eps0: float | None = None, levels: int = 5) -> Estimate:
    """Hadamard finite part of ``int f(x)/x^n dx`` by excising ``(-eps, eps)``.

    The divergent pieces ``sum_k 2 f^(k)(0)/k! eps^(k-n+1)/(n-k-1)`` (even
    ``k <= n-2``) are subtracted and the result extrapolated in odd powers of
    ``eps``.  This uses only ``f`` and its Taylor data at the origin, so it is
    independent of the log-kernel route.
    """
    if n not in _LOG_KERNEL_FACTOR:
        raise ValueError(f"pole order must be 2 or 4, got {n}")
    lo, hi = map(float, interval)
    if not lo < 0 < hi:
        raise ValueError("excision needs the pole strictly inside the interval")
    if eps0 is None:
        eps0 = 0.2 * min(-lo, hi)
    taylor = {k: float(np.asarray(f.deriv(np.asarray([0.0]), k))[0]) / math.factorial(k)
              for k in range(0, n - 1, 2)}

    def g(x):
        return float(np.asarray(f(np.asarray([x])))[0]) / x ** n

    eps_values = [eps0 / 2 ** j for j in range(levels)]
    vals = []
    for eps in eps_values:
        right, _ = integrate.quad(g, eps, hi, epsabs=0, epsrel=1e-13, limit=400)
        left, _ = integrate.quad(g, lo, -eps, epsabs=0, epsrel=1e-13, limit=400)
        counter = sum(2 * c * eps ** (k - n + 1) / (n - k - 1) for k, c in taylor.items())
        vals.append(right + left - counter)
    return richardson(eps_values, vals, [2 * j + 1 for j in range(levels - 1)])
