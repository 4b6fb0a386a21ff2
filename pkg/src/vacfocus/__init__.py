"""Vacuum fluctuations near the focus of a parabolic mirror.

Ray geometry of the mirror, conjugate reflected-ray pairs near the critical
rim angle, regularised singular integrals, the resulting renormalised
``<phi^2>`` and ``<E^2>``, the two-segment ray census, and laboratory
estimates for polarisable atoms.
"""
from .geometry import (AxialPoint, FirstOrderValidityWarning, MirrorKind, NoReflectionError,
                       ParabolicMirror, path_difference, path_length, reflect)
from .lab import SODIUM, AtomSpec, LambdaCoefficient, PhysicalConstants
from .multiray import (SubCriticalMirror, conjugate_angle, conjugate_map, conjugate_pair,
                       derive_series_coefficients)
from .observables import (ExpansionCoefficients, VacuumObservable, E_sq, expansion_coefficients,
                          flat_plate_E_sq, phi_sq, related_quantity)
from .segments import RayCensus, SegmentMirror, census, classify_incident

__version__ = "0.1.0"
