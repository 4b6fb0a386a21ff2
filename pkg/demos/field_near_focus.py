"""Vacuum <E^2> and <phi^2> on the axis of a parabolic mirror.

The closed form keeps the leading logarithmic term in the rim angle xi0; the
numeric path integrates the full conjugate-pair integrand.  Their ratio tends
to 1 as xi0 shrinks.
"""
import numpy as np

from vacfocus import observables as ob

a = 1.0
print(f"{'xi0':>7} {'E^2 closed':>12} {'E^2 numeric':>12} {'ratio':>8} {'phi^2 closed':>13}")
for xi0 in (0.005, 0.02, 0.05, 0.1, 0.2):
    closed = ob.E_sq("revolution", a, xi0)
    num = ob.E_sq("revolution", a, xi0, "numeric")
    phi = ob.phi_sq("revolution", a, xi0)
    print(f"{xi0:7.3f} {closed.value:12.4e} {num.value:12.4e} {num.value / closed.value:8.5f}"
          f" {phi.value:13.4e}")

print("\nleading coefficient of E^2, closed form:", ob.leading_coefficient("E_sq"))
print("same, fitted to numeric values:        ",
      ob.fit_leading_coefficient("E_sq", np.geomspace(2e-3, 2e-2, 5)))

flat = ob.flat_plate_E_sq(a).value
cyl = ob.E_sq("cylinder", a, 0.1).value
print(f"\nxi0 = 0.1 at a = {a}: revolution / flat plate = {ob.E_sq('revolution', a, 0.1).value / flat:.4f},"
      f" cylinder / flat plate = {cyl / flat:.4f}")
