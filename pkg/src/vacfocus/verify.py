"""Self-checks: exact coefficients, integral identities, ray census, geometry.

Each suite returns a list of :class:`Check` records carrying the measured
value, the expected value and the tolerance, so reports are machine readable.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial import Polynomial

from . import geometry as geo
from . import quadrature as quad
from . import segments as seg
from .multiray import (CRITICAL_RIM_ANGLE, _reduced_condition, _reduced_condition_ds,
                       conjugate_angle, conjugate_sum, derive_series_coefficients)
from .observables import expansion_coefficients
from .series import QSqrt3

R3 = QSqrt3(0, 1)

#: published expansion of the scaled incident angle about pi/3
PUBLISHED_THETA = (R3 * Fraction(3, 4), QSqrt3(0), -R3 * Fraction(3, 4), QSqrt3(Fraction(1, 4)),
                   R3 * Fraction(3, 16), QSqrt3(Fraction(-1, 16)), -R3 * Fraction(11, 480))
#: published reversion coefficients xi1^1 .. xi1^5
PUBLISHED_CONJUGATE = (QSqrt3(-1), R3 * Fraction(1, 3), QSqrt3(Fraction(-1, 27)),
                       R3 * Fraction(35, 972), QSqrt3(Fraction(-97, 2916)))
A2 = Fraction(23, 324)
B4 = Fraction(4051, 524880)


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    measured: object
    expected: object
    tolerance: float

    def as_row(self) -> dict:
        row = asdict(self)
        row["measured"] = _fmt(self.measured)
        row["expected"] = _fmt(self.expected)
        return row


def _fmt(x):
    if isinstance(x, (QSqrt3, Fraction)):
        return str(x)
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(str(_fmt(v)) for v in x) + "]"
    if isinstance(x, (float, np.floating)):
        return float(x)
    return x


def _rel(measured: float, expected: float) -> float:
    return abs(measured - expected) / abs(expected)


# -- float oracle for the expansion coefficients -----------------------------------

def taylor_fit_coefficients(power: int, radius: float = 0.4, points: int = 64) -> np.ndarray:
    """Taylor coefficients of ``(xi1 / dcos)^power`` by a Fourier fit on a circle.

    The conjugate sum is found by bracketed root finding at ``xi1 = radius``
    and continued around the circle with Newton steps on the defining
    equation, so the exact series enters nowhere.
    """
    z = radius * np.exp(2j * np.pi * np.arange(points) / points)
    s = np.empty(points, dtype=complex)
    guess = complex(conjugate_sum(radius))
    for k, zk in enumerate(z):
        for _ in range(50):
            step = _reduced_condition(zk, guess) / _reduced_condition_ds(zk, guess)
            guess -= step
            if abs(step) < 1e-16 * abs(guess):
                break
        s[k] = guess
    m = CRITICAL_RIM_ANGLE + 0.5 * s
    g = (z / (-2 * np.sin(m) * np.sin(z - 0.5 * s))) ** power
    coeffs = np.fft.fft(g) / points / radius ** np.arange(points)
    return coeffs.real


# -- suites ------------------------------------------------------------------------

def series_suite() -> list[Check]:
    out = []
    coeffs = derive_series_coefficients(6)
    out.append(Check("series", "theta_coefficients", tuple(coeffs.theta) == PUBLISHED_THETA,
                     list(coeffs.theta), list(PUBLISHED_THETA), 0.0))
    derived = tuple(coeffs.conjugate[:5])
    out.append(Check("series", "xi2_coefficients_published", derived == PUBLISHED_CONJUGATE,
                     list(derived), list(PUBLISHED_CONJUGATE), 0.0))
    # independent check of the reversion against bracketed root finding
    xs = np.linspace(0.002, 0.02, 10)
    roots = np.array([conjugate_angle(x) for x in xs])
    fit = np.polynomial.polynomial.polyfit(xs, roots, 6)
    rel = max(_rel(fit[k], float(derived[k - 1])) for k in (1, 2))
    out.append(Check("series", "xi2_low_order_vs_roots", rel < 1e-5, rel, 0.0, 1e-5))
    ex = expansion_coefficients(4)
    a_fit = taylor_fit_coefficients(2)
    b_fit = taylor_fit_coefficients(4)
    out.append(Check("series", "A2_exact", ex.A[2] == A2, ex.A[2], A2, 0.0))
    out.append(Check("series", "B4_exact", ex.B[4] == B4, ex.B[4], B4, 0.0))
    ra, rb = _rel(a_fit[2], float(A2)), _rel(b_fit[4], float(B4))
    out.append(Check("series", "A2_taylor_fit", ra < 1e-10, float(a_fit[2]), float(A2), 1e-10))
    out.append(Check("series", "B4_taylor_fit", rb < 1e-10, float(b_fit[4]), float(B4), 1e-10))
    return out


def _taper_functions():
    def bump(x):
        return (1 - x * x) ** 6

    polys = [(1.0,), (1.0, 0.5), (0.3, -1.0, 2.0), (1.0, 0.0, 0.0, 0.7), (2.0, -0.3, 0.1, 0.05, -1.2)]
    out = []
    for c in polys:
        p = Polynomial(c)
        out.append(quad.SmoothIntegrand(lambda x, p=p: p(x) * bump(x), tapered=True,
                                        analytic=True, radius=0.2))
    return out


def integrals_suite(regulators=quad.OMEGA_REGULATORS) -> list[Check]:
    out = []
    dl = 1.3
    for n in (1, 3):
        est = quad.omega_moment_numeric(n, dl, regulators)
        exact = quad.omega_moment(n, dl)
        r = _rel(est.value, exact)
        out.append(Check("integrals", f"omega_moment_{n}", r < 1e-6, float(est.value), exact, 1e-6))
    beta = 0.7
    for p in (1, 2):
        est = quad.bessel_moment_numeric(p, beta)
        exact = quad.bessel_moment(p, beta)
        r = _rel(est.value, exact)
        out.append(Check("integrals", f"bessel_moment_{p}", r < 1e-5, float(est.value), exact, 1e-5))
    for i, f in enumerate(_taper_functions()):
        for n in (2, 4):
            ibp = quad.log_kernel_integral(f, n, (-1.0, 1.0))
            exc = quad.excision_finite_part(f, n, (-1.0, 1.0)).value
            r = abs(ibp - exc) / max(abs(exc), 1e-300)
            out.append(Check("integrals", f"log_kernel_vs_excision_f{i}_n{n}", r < 1e-6,
                             float(ibp), float(exc), 1e-6))
    return out


def random_segment_mirrors(count: int, seed: int = 0) -> list[seg.SegmentMirror]:
    rng = np.random.default_rng(seed)
    mirrors = []
    while len(mirrors) < count:
        t1 = rng.uniform(0.2, 1.5)
        t2 = rng.uniform(t1 + 0.1, 2.8)
        a1, a2 = rng.uniform(0.2, 1.5, size=2)
        try:
            mirrors.append(seg.SegmentMirror(a1, a2, t1, t2))
        except ValueError:
            continue
    return mirrors


def census_suite(count: int = 100, resolution: int = 100_000, seed: int = 0) -> list[Check]:
    exact_err = sampled_err = comp_err = 0.0
    for m in random_segment_mirrors(count, seed):
        c = seg.census(m)
        exact_err = max(exact_err, abs(c.ray_measure - 2 * math.pi), abs(c.total - 2 * math.pi))
        comp_err = max(comp_err, abs(c.reflected_measure - c.shadow_measure))
        s = seg.census(m, resolution)
        sampled_err = max(sampled_err, abs(s.ray_measure - 2 * math.pi))
    tol = 2 * math.pi / 1e4
    return [
        Check("census", "conservation_interval", exact_err < 1e-12, exact_err, 0.0, 1e-12),
        Check("census", "compensation_interval", comp_err < 1e-12, comp_err, 0.0, 1e-12),
        Check("census", "conservation_sampled", sampled_err < tol, sampled_err, 0.0, tol),
    ]


def geometry_suite(samples: int = 50) -> list[Check]:
    thetas = np.linspace(math.pi / 6, math.pi / 2, samples)
    b = 1.0
    mirror = geo.ParabolicMirror(b, xi0=1.0)
    theta_err, ell_err = {}, {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", geo.FirstOrderValidityWarning)
        for ratio in (1e-3, 1e-2):
            a = ratio * b
            dt, dl = [], []
            for t in thetas:
                sol = geo.reflect(mirror, a, t)
                dt.append(abs(sol.theta - geo.incident_angle_first_order(mirror, a, t)))
                dl.append(abs(sol.ell - geo.path_length(mirror, a, t).ell))
            theta_err[ratio], ell_err[ratio] = max(dt), max(dl)
    shrink = theta_err[1e-2] / theta_err[1e-3]
    ell_scaled = max(ell_err[r] / (r * r * b) for r in ell_err)
    return [
        Check("geometry", "theta_convergence_ratio", shrink >= 8, shrink, 8.0, 0.0),
        Check("geometry", "path_length_second_order", ell_scaled < 10, ell_scaled, 10.0, 0.0),
    ]


SUITES = {"series": series_suite, "integrals": integrals_suite,
          "census": census_suite, "geometry": geometry_suite}


def run(suite: str = "all", *, regulators=quad.OMEGA_REGULATORS) -> list[Check]:
    names = list(SUITES) if suite == "all" else [suite]
    out = []
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
        if name == "integrals":
            out.extend(integrals_suite(tuple(regulators)))
        else:
            out.extend(SUITES[name]())
    return out
