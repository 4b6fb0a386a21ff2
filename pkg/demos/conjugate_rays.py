"""Pairs of reflected rays that reach the same near-focus point from one direction.

Close to the critical angle pi/3 every reflected ray has a partner on the
other side.  The partner is found by root finding and compared with the
truncated power series, and the path difference of the pair is printed.
"""
import math

import numpy as np

from vacfocus import geometry as geo
from vacfocus import multiray as mr

a = 1e-3
mirror = geo.ParabolicMirror(1.0, xi0=0.3)

print(f"{'xi1':>8} {'xi2 (root)':>14} {'xi2 (series)':>14} {'dl / a':>12}")
for xi1 in (0.01, 0.05, 0.1, 0.2):
    xi2 = mr.conjugate_angle(xi1)
    approx = mr.conjugate_series(xi1, 12)
    t1, t2 = mr.CRITICAL_RIM_ANGLE + xi1, mr.CRITICAL_RIM_ANGLE + xi2
    dl = geo.path_difference(a, t1, t2)
    print(f"{xi1:8.3f} {xi2:14.10f} {approx:14.10f} {dl / a:12.3e}")

# both members of a pair arrive with the same incident angle, up to O((a/b)^2)
pair = mr.conjugate_pair(0.1, xi0=mirror.xi0)
th = [geo.reflect(mirror, a, t).theta for t in (pair.theta1_prime, pair.theta2_prime)]
print(f"\nexact incident angles: {th[0]:.9f}, {th[1]:.9f} (difference {abs(th[0] - th[1]):.1e})")

# the scaled incident angle peaks at pi/3, which is why pairs exist only past it
t = np.linspace(0.2, 2.0, 2001)
print(f"argmax of the scaled incident angle: {t[np.argmax(geo.scaled_incident_angle(t))]:.4f}"
      f" (pi/3 = {math.pi / 3:.4f})")
