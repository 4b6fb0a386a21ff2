"""Ray bookkeeping for a mirror made of two flat segments.

The tracer counts direct and reflected rays reaching the origin for every
incident direction.  Whatever the mirror, the reflected rays exactly make up
for the direct rays it blocks.
"""
import math

from vacfocus import segments as seg

mirror = seg.SegmentMirror(alpha1=1.0, alpha2=0.8, theta1_prime=0.8, theta2_prime=1.6)

print("band                         expected          traced")
for lo, hi, expected in seg.band_table(mirror):
    got = seg.classify_incident(mirror, 0.5 * (lo + hi))
    print(f"({lo:+.3f}, {hi:+.3f})     {expected.label:>16}  {got.label:>16}")

c = seg.census(mirror)
print(f"\nreflected measure {c.reflected_measure:.12f}")
print(f"shadow measure    {c.shadow_measure:.12f}")
print(f"total rays        {c.ray_measure:.12f}  (2 pi = {2 * math.pi:.12f})")

sampled = seg.census(mirror, 200_000)
print(f"sampled two-reflection band {sampled.two_reflected:.5f} vs exact {c.two_reflected:.5f}")
