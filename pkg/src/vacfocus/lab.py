"""Laboratory-scale estimates in CGS units.

Observables computed with hbar = c = 1 are written ``<E^2> = Lambda / a^4``;
restoring units gives ``<E^2> = Lambda hbar c / a^4`` (erg/cm^3).
Polarisabilities are static and in the Heaviside-Lorentz convention, which is
``4 pi`` times the Gaussian value, so the potential is ``V = -alpha <E^2> / 2``
with no further ``4 pi``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

from .observables import E_sq, Geometry, VacuumObservable, flat_plate_E_sq

#: default plasma-wavelength floor, cm (0.1 micron)
PLASMA_WAVELENGTH = 1e-5
#: the trap temperature quoted in the literature for the reference case, K
QUOTED_TRAP_TEMPERATURE = 2e-5

MICRON = 1e-4


class SubPlasmaWarning(UserWarning):
    """Distance below the plasma wavelength; perfect reflectivity is not justified."""


class SubPlasmaError(ValueError):
    """Distance below the plasma wavelength; perfect reflectivity is not justified."""


@dataclass(frozen=True)
class PhysicalConstants:
    """CGS constants (CODATA 2018 exact or recommended values)."""

    hbar: float = 1.054571817e-27  # erg s
    c: float = 2.99792458e10  # cm/s
    k_B: float = 1.380649e-16  # erg/K
    g: float = 980.665  # cm/s^2
    version: str = "CODATA2018"

    @property
    def hbar_c(self) -> float:
        return self.hbar * self.c

    def scaled(self, hbar: float = 1.0, c: float = 1.0) -> "PhysicalConstants":
        return replace(self, hbar=self.hbar * hbar, c=self.c * c,
                       version=f"{self.version}*scaled")


CGS = PhysicalConstants()


@dataclass(frozen=True)
class AtomSpec:
    """Atom for the estimates: mass in g, static polarisability in cm^3 (Heaviside-Lorentz)."""

    name: str
    mass: float
    polarizability: float

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not self.polarizability > 0:
            raise ValueError(f"polarizability must be positive, got {self.polarizability}")

    @classmethod
    def from_gaussian(cls, name: str, mass: float, polarizability_gaussian: float) -> "AtomSpec":
        return cls(name, mass, 4 * math.pi * polarizability_gaussian)


SODIUM = AtomSpec("Na", mass=3.8e-23, polarizability=3.0e-22)
ATOMS = {"Na": SODIUM}


@dataclass(frozen=True)
class LambdaCoefficient:
    """Dimensionless ``Lambda`` with ``<E^2> = Lambda / a^4``."""

    geometry: Geometry
    xi0: float | None
    value: float

    @classmethod
    def from_observable(cls, obs: VacuumObservable) -> "LambdaCoefficient":
        if obs.scaling_exponent != -4:
            raise ValueError(f"{obs.kind.value} is not an a^-4 observable")
        return cls(obs.geometry, obs.xi0, obs.coefficient)

    @classmethod
    def mirror(cls, geometry, xi0: float) -> "LambdaCoefficient":
        """Closed-form ``Lambda`` for the parabolic mirrors."""
        return cls.from_observable(E_sq(geometry, 1.0, xi0))

    @classmethod
    def flat_plate(cls) -> "LambdaCoefficient":
        return cls.from_observable(flat_plate_E_sq(1.0))


def _lam(value) -> float:
    lam = value.value if isinstance(value, LambdaCoefficient) else float(value)
    if not lam > 0:
        raise ValueError(f"Lambda must be positive, got {lam}")
    return lam


def check_distance(a: float, *, plasma_wavelength: float = PLASMA_WAVELENGTH,
                   allow_sub_plasma: bool = False) -> None:
    if not a > 0:
        raise ValueError(f"distance must be positive, got {a}")
    if a < plasma_wavelength:
        msg = (f"a = {a:.3g} cm is below the plasma wavelength {plasma_wavelength:.3g} cm; "
               "geometric optics is not valid there")
        if not allow_sub_plasma:
            raise SubPlasmaError(msg)
        warnings.warn(msg, SubPlasmaWarning, stacklevel=3)


def e_sq_cgs(lam, a: float, constants: PhysicalConstants = CGS) -> float:
    """``<E^2>`` in erg/cm^3."""
    return _lam(lam) * constants.hbar_c / a ** 4


def casimir_polder_potential(atom: AtomSpec, lam, a: float, *,
                             constants: PhysicalConstants = CGS, **floor) -> float:
    """``V = -alpha <E^2> / 2`` in erg."""
    check_distance(a, **floor)
    return -0.5 * atom.polarizability * e_sq_cgs(lam, a, constants)


def deflection_ratio(atom: AtomSpec, lam, a: float, t: float, *,
                     constants: PhysicalConstants = CGS, **floor) -> float:
    """``Delta a / a`` after time ``t`` under the constant force at the initial ``a``.

    ``F = -dV/da = -2 alpha Lambda hbar c / a^5`` and ``Delta a = F t^2 / (2 m)``.
    """
    check_distance(a, **floor)
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    return atom.polarizability * _lam(lam) * constants.hbar_c * t ** 2 / (atom.mass * a ** 6)


@dataclass(frozen=True)
class Levitation:
    height: float  # cm
    viable: bool  # above the plasma-wavelength floor


def levitation_height(atom: AtomSpec, lam, *, constants: PhysicalConstants = CGS,
                      plasma_wavelength: float = PLASMA_WAVELENGTH) -> Levitation:
    """Distance at which ``|F| = m g``: ``a = (2 alpha Lambda hbar c / (m g))^(1/5)``."""
    height = (2 * atom.polarizability * _lam(lam) * constants.hbar_c
              / (atom.mass * constants.g)) ** 0.2
    return Levitation(height, height >= plasma_wavelength)


@dataclass(frozen=True)
class TrapTemperature:
    kelvin: float
    quoted: float
    ratio_to_quoted: float

    @property
    def discrepant(self) -> bool:
        # more than a factor 2 either way
        return not 0.5 < self.ratio_to_quoted < 2.0


def trap_temperature(atom: AtomSpec, lam, a: float, *, constants: PhysicalConstants = CGS,
                     quoted: float = QUOTED_TRAP_TEMPERATURE, **floor) -> TrapTemperature:
    """``(3/2) k T = |V|``, i.e. ``T = alpha Lambda hbar c / (3 k_B a^4)``."""
    v = casimir_polder_potential(atom, lam, a, constants=constants, **floor)
    kelvin = 2 * abs(v) / (3 * constants.k_B)
    return TrapTemperature(kelvin, quoted, kelvin / quoted)


def phase_shift(atom: AtomSpec, a: float, t: float, xi0: float, *,
                constants: PhysicalConstants = CGS, **floor) -> float:
    """Interferometric phase ``(t / 2hbar) alpha <E^2>`` near a parabolic cylinder.

    With ``<E^2> = Lambda hbar c / a^4`` the ``hbar`` cancels, leaving
    ``t alpha Lambda c / (2 a^4)``.
    """
    check_distance(a, **floor)
    lam = LambdaCoefficient.mirror(Geometry.CYLINDER, xi0).value
    return 0.5 * t * atom.polarizability * lam * constants.c / a ** 4


def phase_coefficient(atom: AtomSpec = SODIUM, a: float = MICRON, t: float = 1e-3, *,
                      constants: PhysicalConstants = CGS) -> float:
    """Phase per unit ``xi0 (1 - ln xi0)`` for the cylinder."""
    xi0 = math.exp(-1)
    return phase_shift(atom, a, t, xi0, constants=constants) / (2 * xi0)


#: powers of (hbar, c) carried by each estimate, for the dimensional audit
DIMENSIONS = {
    "casimir_polder_potential": (1, 1),
    "deflection_ratio": (1, 1),
    "levitation_height": (0.2, 0.2),
    "trap_temperature": (1, 1),
    "phase_shift": (0, 1),
}
