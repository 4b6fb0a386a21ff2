"""Ray geometry of a parabolic mirror with its focus at the origin.

The mirror is the curve ``x = (b**2 - y**2) / (2*b)`` (vertex at ``x = b/2``,
opening towards ``-x``).  Observation points sit on the symmetry axis at
``(a, 0)``.  A reflected ray reaches the observation point travelling along
``y = tan(theta') * (x - a)``; ``theta'`` is therefore the direction from the
observation point to the reflection point, measured counter-clockwise from
``+x``.  The incident angle ``theta`` follows the clockwise convention of the
reflection relation ``theta = theta' - pi + 2*alpha``: it is minus the
direction of travel of the incoming ray, so rays travelling along ``+x``
have ``theta = 0``.

Only the upper half plane (``y_i > 0``) is treated; the lower half follows by
symmetry.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Union

import numpy as np

#: first-order formulas are trusted up to this ``a/b``
FIRST_ORDER_LIMIT = 1e-2
#: on-parabola residual tolerance, in units of ``b``
PARABOLA_TOL = 1e-12
#: tolerance used when comparing angles
ANGLE_TOL = 1e-10

CRITICAL_RIM_ANGLE = math.pi / 3


class FirstOrderValidityWarning(UserWarning):
    """Raised when ``a/b`` is too large for the first-order expansions."""


class NoReflectionError(ValueError):
    """The reflected ray does not meet the mirror."""


class MirrorKind(str, Enum):
    REVOLUTION = "revolution"
    CYLINDER = "cylinder"


@dataclass(frozen=True)
class ParabolicMirror:
    """Parabolic mirror with focal parameter ``b`` and rim angle ``pi/3 + xi0``."""

    b: float
    xi0: float = 0.0
    kind: MirrorKind = MirrorKind.REVOLUTION

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError(f"focal parameter b must be positive, got {self.b}")
        if not 0 <= self.xi0 < 2 * math.pi / 3:
            raise ValueError(f"xi0 must lie in [0, 2pi/3), got {self.xi0}")
        object.__setattr__(self, "kind", MirrorKind(self.kind))

    @property
    def rim_angle(self) -> float:
        return CRITICAL_RIM_ANGLE + self.xi0

    @property
    def y_rim(self) -> float:
        # rim point seen from the focus: r = b / (1 + cos), y = r sin = b tan(angle/2)
        return self.b * math.tan(self.rim_angle / 2)


@dataclass(frozen=True)
class AxialPoint:
    """Observation point at distance ``a`` from the focus, towards the vertex."""

    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"axial distance a must be positive, got {self.a}")


Distance = Union[AxialPoint, float]


class PathLength(NamedTuple):
    ell: float
    s1: float
    s2: float


@dataclass(frozen=True)
class ReflectionSolution:
    theta_prime: float
    theta: float
    x_i: float
    y_i: float
    alpha_t: float
    s1: float
    s2: float
    ell: float


def _distance(point: Distance) -> float:
    a = point.a if isinstance(point, AxialPoint) else float(point)
    if a < 0:
        raise ValueError(f"axial distance must be non-negative, got {a}")
    return a


def _check_ratio(mirror: ParabolicMirror, a: float) -> None:
    if a / mirror.b > FIRST_ORDER_LIMIT:
        warnings.warn(
            f"a/b = {a / mirror.b:.3g} exceeds {FIRST_ORDER_LIMIT}; first-order "
            "formulas may be inaccurate", FirstOrderValidityWarning, stacklevel=3)


def _check_angle(mirror: ParabolicMirror, theta_prime: float) -> None:
    if not 0 < theta_prime < math.pi:
        raise ValueError(f"theta' must lie in (0, pi), got {theta_prime}")
    if theta_prime > mirror.rim_angle + ANGLE_TOL:
        raise NoReflectionError(
            f"theta' = {theta_prime} lies beyond the rim angle {mirror.rim_angle}")


def parabola_point(mirror: ParabolicMirror, y: float) -> float:
    """x coordinate of the mirror at height ``y``."""
    if abs(y) > mirror.y_rim * (1 + PARABOLA_TOL):
        raise ValueError(f"|y| = {abs(y)} lies beyond the rim at {mirror.y_rim}")
    b = mirror.b
    return (b * b - y * y) / (2 * b)


def _ray_distance(b: float, a: float, theta_prime: float) -> float:
    # distance from (a, 0) to the forward intersection with the parabola; this
    # is the minus-sign root of the quadratic for y_i, rationalised so it stays
    # finite at theta' = pi/2
    s, c = math.sin(theta_prime), math.cos(theta_prime)
    disc = 1.0 - 2.0 * (a / b) * s * s
    if disc < 0:
        raise NoReflectionError(
            f"no intersection: discriminant {disc:.3g} < 0 at theta' = {theta_prime}")
    return (b - 2 * a) / (c + math.sqrt(disc))


def reflection_point(mirror: ParabolicMirror, point: Distance,
                     theta_prime: float) -> tuple[float, float]:
    """Exact reflection point ``(x_i, y_i)`` of the ray arriving at angle ``theta'``."""
    a = _distance(point)
    _check_angle(mirror, theta_prime)
    r = _ray_distance(mirror.b, a, theta_prime)
    x_i = a + r * math.cos(theta_prime)
    y_i = r * math.sin(theta_prime)
    if not y_i > 0:
        raise NoReflectionError(f"reflection point below the axis (y_i = {y_i})")
    return x_i, y_i


def scaled_incident_angle(theta_prime):
    """``sin^3 t sec t / (sec t - 1)``, i.e. the first-order incident angle per unit ``a/b``.

    Evaluated as ``sin t (1 + cos t)``, which is the same function without the
    removable 0/0 at ``t = pi/2``.  Accepts arrays and complex input.
    """
    return np.sin(theta_prime) * (1 + np.cos(theta_prime))


def incident_angle_first_order(mirror: ParabolicMirror, point: Distance,
                               theta_prime: float) -> float:
    a = _distance(point)
    if not 0 < theta_prime < math.pi:
        raise ValueError(f"theta' must lie in (0, pi), got {theta_prime}")
    _check_ratio(mirror, a)
    return (a / mirror.b) * float(scaled_incident_angle(theta_prime))


def exact_incident_angle(mirror: ParabolicMirror, point: Distance,
                         theta_prime: float) -> float:
    """Incident angle from the reflection law at the exact reflection point."""
    _, y_i = reflection_point(mirror, point, theta_prime)
    alpha = math.atan2(mirror.b, y_i)
    return theta_prime - math.pi + 2 * alpha


def reflect(mirror: ParabolicMirror, point: Distance,
            theta_prime: float) -> ReflectionSolution:
    """Full exact solution for one reflected ray, including path segments.

    ``s2`` is signed: it is negative when the reflection point lies on the
    focus side of the line ``x = a``.
    """
    a = _distance(point)
    x_i, y_i = reflection_point(mirror, a, theta_prime)
    alpha = math.atan2(mirror.b, y_i)
    theta = theta_prime - math.pi + 2 * alpha
    s1 = math.hypot(x_i - a, y_i)
    s2 = (x_i - a) / math.cos(theta)
    return ReflectionSolution(theta_prime, theta, x_i, y_i, alpha, s1, s2, s1 + s2)


def path_length(mirror: ParabolicMirror, point: Distance,
                theta_prime: float) -> PathLength:
    """First-order path length after the ray first crosses ``x = a``."""
    a = _distance(point)
    _check_angle(mirror, theta_prime)
    if 1.0 - 2.0 * (a / mirror.b) * math.sin(theta_prime) ** 2 < 0:
        raise NoReflectionError("no intersection with the mirror")
    _check_ratio(mirror, a)
    b = mirror.b
    s, c = math.sin(theta_prime), math.cos(theta_prime)
    common = (b / (s * s)) * (1 - c - (a / b) * s * s)
    s1 = common
    s2 = c * common
    ell = b - a * (1 + c)
    return PathLength(ell, s1, s2)


def path_difference(point: Distance, theta1_prime, theta2_prime):
    """``a (cos theta1' - cos theta2')``; vectorised over the angles."""
    a = _distance(point)
    # cos A - cos B = -2 sin((A+B)/2) sin((A-B)/2) avoids cancellation
    half_sum = 0.5 * (np.asarray(theta1_prime) + np.asarray(theta2_prime))
    half_diff = 0.5 * (np.asarray(theta1_prime) - np.asarray(theta2_prime))
    out = -2.0 * a * np.sin(half_sum) * np.sin(half_diff)
    return float(out) if np.ndim(out) == 0 else out
