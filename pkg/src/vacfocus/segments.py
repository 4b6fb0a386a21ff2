"""Two attached flat mirror segments and the ray census around a point.

Conventions.  The observation point ``O`` is the origin.  The mirror is the
polyline ``P0 - P1 - P2`` with ``P0 = (r0, 0)``, ``P1`` on the ray from ``O`` at
angle ``theta1'`` and ``P2`` on the ray at ``theta2'``.  Segment ``k`` makes an
angle ``alpha_k`` with the horizontal, i.e. its direction of travel from ``P0``
towards ``P2`` has polar angle ``pi - alpha_k``.

A ray travelling with polar direction ``psi`` has incident angle
``theta = -psi`` (``theta`` grows clockwise); a ray reflected once from
segment ``k`` and arriving from direction ``theta'`` then obeys
``theta = theta' + 2 alpha_k - pi``.

Tracing runs backwards: a ray leaves ``O`` in direction ``sigma``, bounces off
the segments (both faces reflect) and escapes.  Every escaping ray corresponds
to exactly one ray reaching ``O`` from infinity, and each bounce maps angles
with unit slope, so the census is measure preserving by construction.  The
direct (unreflected) ray at ``theta`` is the backward ray at
``sigma = pi - theta`` when it escapes without a bounce.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

TWO_PI = 2 * math.pi
#: maximum number of bounces followed before giving up
MAX_BOUNCES = 16
#: rays closer than this (relative) to a previous hit are not re-intersected
_HIT_EPS = 1e-12


def _wrap(angle):
    """Map angles to ``(-pi, pi]``."""
    out = np.mod(np.asarray(angle, dtype=float) + math.pi, TWO_PI) - math.pi
    return np.where(out == -math.pi, math.pi, out)


@dataclass(frozen=True)
class SegmentMirror:
    alpha1: float
    alpha2: float
    theta1_prime: float
    theta2_prime: float
    r0: float = 1.0
    vertices: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.r0 > 0:
            raise ValueError(f"r0 must be positive, got {self.r0}")
        if self.theta1_prime == 0 and self.theta2_prime == 0:
            object.__setattr__(self, "vertices", np.zeros((0, 2)))
            return
        if not 0 < self.theta1_prime < self.theta2_prime < math.pi:
            raise ValueError("need 0 < theta1' < theta2' < pi")
        p0 = np.array([self.r0, 0.0])
        p1 = self._advance(p0, self.alpha1, self.theta1_prime)
        p2 = self._advance(p1, self.alpha2, self.theta2_prime)
        object.__setattr__(self, "vertices", np.array([p0, p1, p2]))

    @staticmethod
    def _advance(start, alpha, theta_prime):
        # walk from `start` along direction pi - alpha to the ray at theta'
        u = np.array([-math.cos(alpha), math.sin(alpha)])
        e = np.array([math.cos(theta_prime), math.sin(theta_prime)])
        mat = np.column_stack([u, -e])
        if abs(np.linalg.det(mat)) < 1e-14:
            raise ValueError("degenerate segment: parallel to the bounding ray")
        s, t = np.linalg.solve(mat, -start)
        if not (s > 1e-12 and t > 0):
            raise ValueError(
                f"degenerate segment: orientation {alpha} does not reach theta' = {theta_prime}")
        return t * e

    @property
    def empty(self) -> bool:
        return len(self.vertices) == 0

    @property
    def line_angles(self) -> tuple[float, float]:
        return (math.pi - self.alpha1, math.pi - self.alpha2)

    @property
    def blocked_band(self) -> tuple[float, float]:
        """Incident angles whose direct ray is shadowed: ``(pi - theta2', pi]``."""
        return (math.pi - self.theta2_prime, math.pi)

    @classmethod
    def removed(cls) -> "SegmentMirror":
        return cls(0.0, 0.0, 0.0, 0.0)


class RayCount(NamedTuple):
    incident: int
    reflected: int

    @property
    def label(self) -> str:
        return _CLASS_LABELS.get((self.incident, self.reflected),
                                 f"incident{self.incident}_reflected{self.reflected}")


_CLASS_LABELS = {(0, 0): "blocked", (1, 0): "incident_only",
                 (1, 1): "one_reflected", (1, 2): "two_reflected"}


@dataclass(frozen=True)
class RayCensus:
    """Angular measure of incident directions per ``(incident, reflected)`` class."""

    measures: dict
    mode: str
    resolution: int | None = None

    def _get(self, key) -> float:
        return self.measures.get(key, 0.0)

    @property
    def blocked(self) -> float:
        return self._get((0, 0))

    @property
    def incident_only(self) -> float:
        return self._get((1, 0))

    @property
    def one_reflected(self) -> float:
        return self._get((1, 1))

    @property
    def two_reflected(self) -> float:
        return self._get((1, 2))

    @property
    def other(self) -> float:
        """Measure in classes outside the four canonical ones (e.g. multi-bounce)."""
        return sum(v for k, v in self.measures.items() if k not in _CLASS_LABELS)

    @property
    def total(self) -> float:
        return sum(self.measures.values())

    @property
    def ray_measure(self) -> float:
        """Incident plus reflected rays, with multiplicity, integrated over direction."""
        return sum((i + r) * v for (i, r), v in self.measures.items())

    @property
    def reflected_measure(self) -> float:
        return sum(r * v for (_, r), v in self.measures.items())

    @property
    def shadow_measure(self) -> float:
        """Measure of directions whose direct ray is missing."""
        return sum(v for (i, _), v in self.measures.items() if i == 0)

    @property
    def incident_range(self) -> float:
        """Measure of incident angles producing at least one reflected ray."""
        return sum(v for (_, r), v in self.measures.items() if r > 0)

    @property
    def double_counted(self) -> float:
        """Extra reflected measure beyond one ray per direction."""
        return sum((r - 1) * v for (_, r), v in self.measures.items() if r > 1)


# -- tracing ----------------------------------------------------------------------

def trace(mirror: SegmentMirror, sigma, max_bounces: int = MAX_BOUNCES):
    """Backward-trace rays leaving the origin in directions ``sigma``.

    Returns ``(escape_direction, sequence)`` where ``sequence`` encodes the
    segments hit (base 3, most recent bounce in the lowest digit, 0 for none).
    """
    sigma = np.atleast_1d(np.asarray(sigma, dtype=float))
    n = sigma.size
    pos = np.zeros((n, 2))
    d = np.column_stack([np.cos(sigma), np.sin(sigma)])
    seq = np.zeros(n, dtype=np.int64)
    last = np.full(n, -1)
    live = np.ones(n, dtype=bool)
    if mirror.empty:
        return np.arctan2(d[:, 1], d[:, 0]), seq
    verts = mirror.vertices
    scale = float(np.max(np.abs(verts)))
    for bounce in range(max_bounces + 1):
        best_t = np.full(n, np.inf)
        best_k = np.full(n, -1)
        for k in range(2):
            a, b = verts[k], verts[k + 1]
            e = b - a
            # pos + t d = a + u e
            det = d[:, 0] * (-e[1]) - d[:, 1] * (-e[0])
            rx, ry = a[0] - pos[:, 0], a[1] - pos[:, 1]
            with np.errstate(divide="ignore", invalid="ignore"):
                t = (rx * (-e[1]) - ry * (-e[0])) / det
                u = (d[:, 0] * ry - d[:, 1] * rx) / det
            ok = live & (last != k) & (det != 0) & (t > _HIT_EPS * scale) & (u >= 0) & (u <= 1)
            closer = ok & (t < best_t)
            best_t[closer] = t[closer]
            best_k[closer] = k
        hit = best_k >= 0
        if not hit.any():
            break
        if bounce == max_bounces:
            raise RuntimeError(f"ray still bouncing after {max_bounces} reflections")
        idx = np.nonzero(hit)[0]
        pos[idx] += best_t[idx, None] * d[idx]
        beta = np.array(mirror.line_angles)[best_k[idx]]
        ang = 2 * beta - np.arctan2(d[idx, 1], d[idx, 0])
        d[idx] = np.column_stack([np.cos(ang), np.sin(ang)])
        seq[idx] = seq[idx] * 3 + best_k[idx] + 1
        last[idx] = best_k[idx]
        live = hit
    return np.arctan2(d[:, 1], d[:, 0]), seq


def _sequences(max_bounces: int):
    # bounce sequences with no immediate repeat: two segments alternate
    out = [()]
    for m in range(1, max_bounces + 1):
        for first in (0, 1):
            out.append(tuple((first + j) % 2 for j in range(m)))
    return out


def _encode(seq) -> int:
    code = 0
    for k in seq:
        code = code * 3 + k + 1
    return code


def _escape_map(mirror: SegmentMirror, seq):
    # escape = sign * sigma + offset (mod 2 pi)
    betas = mirror.line_angles
    sign, offset = 1.0, 0.0
    for k in seq:
        sign, offset = -sign, 2 * betas[k] - offset
    return sign, offset


def _incident_from_escape(escape):
    # the forward ray travels along escape + pi; theta = -(escape + pi)
    return _wrap(-np.asarray(escape) - math.pi)


def classify_many(mirror: SegmentMirror, theta, max_bounces: int = MAX_BOUNCES):
    """Vectorised ray counts ``(incident, reflected)`` for incident angles ``theta``."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    incident = np.zeros(theta.size, dtype=int)
    reflected = np.zeros(theta.size, dtype=int)
    for seq in _sequences(0 if mirror.empty else max_bounces):
        sign, offset = _escape_map(mirror, seq)
        escape = -theta - math.pi
        sigma = _wrap((escape - offset) / sign)
        if seq:
            inside = (sigma > 0) & (sigma < mirror.theta2_prime)
        else:
            inside = np.ones(theta.size, dtype=bool)
        if not inside.any():
            continue
        out, code = trace(mirror, sigma[inside], max_bounces)
        match = (code == _encode(seq)) & (np.abs(_wrap(out - escape[inside])) < 1e-9)
        which = np.nonzero(inside)[0][match]
        if seq:
            reflected[which] += 1
        else:
            incident[which] += 1
    return incident, reflected


def classify_incident(mirror: SegmentMirror, theta: float,
                      max_bounces: int = MAX_BOUNCES) -> RayCount:
    """Number of incident and reflected rays reaching the origin for incident angle ``theta``."""
    if not -math.pi < theta <= math.pi:
        raise ValueError(f"theta must lie in (-pi, pi], got {theta}")
    if not mirror.empty:
        lengths = np.linalg.norm(np.diff(mirror.vertices, axis=0), axis=1)
        if np.any(lengths < 1e-14 * mirror.r0):
            raise ValueError("degenerate segment of zero length")
    inc, refl = classify_many(mirror, theta, max_bounces)
    return RayCount(int(inc[0]), int(refl[0]))


# -- census ----------------------------------------------------------------------

def _reflect_point(p, line_point, beta):
    u = np.array([math.cos(beta), math.sin(beta)])
    r = p - line_point
    return line_point + 2 * np.dot(r, u) * u - r


def _line_hit(p, q, line_point, beta):
    # intersection of line p-q with the mirror line through line_point at angle beta
    u = np.array([math.cos(beta), math.sin(beta)])
    mat = np.column_stack([q - p, -u])
    if abs(np.linalg.det(mat)) < 1e-15:
        return None
    s, _ = np.linalg.solve(mat, line_point - p)
    return p + s * (q - p)


def _sigma_breakpoints(mirror: SegmentMirror, max_bounces: int) -> list[float]:
    """Emission angles where the bounce sequence can change.

    Uses the unfolding of straight lines through mirror images of the origin:
    after bounces ``k1..km`` the ray lies on the line from the image of ``O``
    (reflected across ``k1``, then ``k2``, ...) through the last hit point.
    """
    verts = mirror.vertices
    betas = mirror.line_angles
    anchors = (verts[0], verts[1])
    points = [0.0, mirror.theta1_prime, mirror.theta2_prime]
    for seq in _sequences(max_bounces)[1:]:
        images = [np.zeros(2)]
        for k in seq:
            images.append(_reflect_point(images[-1], anchors[k], betas[k]))
        for v in verts:
            hit = v
            ok = True
            for j in range(len(seq) - 1, -1, -1):
                hit = _line_hit(images[j + 1], hit, anchors[seq[j]], betas[seq[j]])
                if hit is None:
                    ok = False
                    break
            if ok and np.linalg.norm(hit) > 0:
                points.append(math.atan2(hit[1], hit[0]))
    return points


def _interval_census(mirror: SegmentMirror, max_bounces: int) -> dict:
    cuts = [math.pi]
    if not mirror.empty:
        sigmas = np.array(_sigma_breakpoints(mirror, max_bounces))
        for seq in _sequences(max_bounces):
            sign, offset = _escape_map(mirror, seq)
            cuts.extend(_incident_from_escape(sign * sigmas + offset).tolist())
    cuts = np.unique(_wrap(np.array(cuts)))
    edges = np.concatenate([[-math.pi], cuts[cuts > -math.pi]])
    if edges[-1] != math.pi:
        edges = np.append(edges, math.pi)
    widths = np.diff(edges)
    keep = widths > 0
    mids = 0.5 * (edges[:-1] + edges[1:])[keep]
    widths = widths[keep]
    inc, refl = classify_many(mirror, mids, max_bounces)
    measures: dict = {}
    for i, r, w in zip(inc, refl, widths):
        key = (int(i), int(r))
        measures[key] = measures.get(key, 0.0) + float(w)
    return measures


def _bounce_depth(mirror: SegmentMirror, max_bounces: int, margin: int = 1) -> int:
    # deepest bounce sequence seen on a dense emission grid, plus a margin
    if mirror.empty:
        return 0
    sigma = np.linspace(0, mirror.theta2_prime, 4001)[1:-1]
    _, code = trace(mirror, sigma, max_bounces)
    depth = 0
    while code.max() >= 3 ** depth:
        depth += 1
    return min(depth + margin, max_bounces)


def census(mirror: SegmentMirror, resolution: int | None = None, *,
           max_bounces: int = MAX_BOUNCES) -> RayCensus:
    """Angular measure of each ray-count class over ``theta`` in ``(-pi, pi]``.

    With ``resolution=None`` class boundaries are computed analytically and
    the measures are exact up to rounding.  Otherwise ``resolution`` equally
    spaced directions are classified, an independent check whose error is
    bounded by the number of class boundaries times ``2 pi / resolution``.
    """
    if resolution is None:
        depth = _bounce_depth(mirror, max_bounces, margin=2)
        return RayCensus(_interval_census(mirror, depth), "interval")
    if resolution < 1000:
        raise ValueError(f"resolution must be at least 1000, got {resolution}")
    step = TWO_PI / resolution
    theta = -math.pi + step * (np.arange(resolution) + 0.5)
    inc, refl = classify_many(mirror, theta, _bounce_depth(mirror, max_bounces))
    width = int(refl.max()) + 1
    counts = np.bincount(inc * width + refl)
    measures = {(k // width, k % width): float(c) * step
                for k, c in enumerate(counts) if c}
    return RayCensus(measures, "sampled", resolution)


def band_table(mirror: SegmentMirror) -> list[tuple[float, float, RayCount]]:
    """The six-band classification for a single-bounce configuration.

    Valid when ``alpha2 < alpha1`` and the bands are ordered as listed; used as
    the expected output for the tracer.
    """
    a1, a2 = mirror.alpha1, mirror.alpha2
    t1, t2 = mirror.theta1_prime, mirror.theta2_prime
    return [
        (-math.pi, 2 * a1 - math.pi, RayCount(1, 0)),
        (2 * a1 - math.pi, t1 + 2 * a2 - math.pi, RayCount(1, 1)),
        (t1 + 2 * a2 - math.pi, t1 + 2 * a1 - math.pi, RayCount(1, 2)),
        (t1 + 2 * a1 - math.pi, t2 + 2 * a2 - math.pi, RayCount(1, 1)),
        (t2 + 2 * a2 - math.pi, math.pi - t2, RayCount(1, 0)),
        (math.pi - t2, math.pi, RayCount(0, 0)),
    ]


def table_applies(mirror: SegmentMirror) -> bool:
    """Whether the six bands are non-empty and ordered for this mirror."""
    if mirror.empty:
        return False
    return all(lo < hi for lo, hi, _ in band_table(mirror))
