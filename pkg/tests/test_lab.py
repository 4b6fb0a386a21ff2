import math
import warnings

import pytest
from hypothesis import given, strategies as st

from vacfocus import lab
from vacfocus.observables import Geometry

NA = lab.SODIUM
lams = st.floats(1e-5, 1e-1)
dists = st.floats(2e-5, 1e-2)


def test_reference_values():
    assert math.isclose(lab.deflection_ratio(NA, 1e-3, 1e-4, 1e-3), 0.2496, rel_tol=1e-3)
    assert math.isclose(lab.levitation_height(NA, 1e-3).height, 0.5513e-4, rel_tol=1e-3)
    v = lab.casimir_polder_potential(NA, 1e-3, 1e-4)
    assert math.isclose(v, -4.742e-26, rel_tol=1e-3)


def test_trap_temperature_oracle():
    temp = lab.trap_temperature(NA, 1e-3, 1e-5)
    oracle = NA.polarizability * 1e-3 * lab.CGS.hbar_c / (3 * lab.CGS.k_B * 1e-20)
    assert math.isclose(temp.kelvin, oracle, rel_tol=1e-12)
    # an order of magnitude below the quoted value
    assert temp.discrepant and temp.ratio_to_quoted < 0.2


def test_phase_coefficient():
    c = lab.phase_coefficient()
    lam = 16 / (15 * math.pi) * 12 * 4051 / 524880 / math.pi ** 2
    oracle = 0.5 * 1e-3 * NA.polarizability * lam * lab.CGS.c / 1e-16
    assert math.isclose(c, oracle, rel_tol=1e-12)


@given(lams, dists)
def test_potential_linear_in_lambda(lam, a):
    v1 = lab.casimir_polder_potential(NA, lam, a)
    v2 = lab.casimir_polder_potential(NA, 2 * lam, a)
    assert math.isclose(v2, 2 * v1, rel_tol=1e-14)
    assert v1 < 0


@given(lams)
def test_levitation_fifth_root(lam):
    h1 = lab.levitation_height(NA, lam).height
    h2 = lab.levitation_height(NA, 32 * lam).height
    assert math.isclose(h2, 2 * h1, rel_tol=1e-12)


@pytest.mark.parametrize("name", sorted(lab.DIMENSIONS))
def test_dimensional_audit(name):
    # scaling hbar and c by known factors must rescale each estimate by their declared powers
    p_hbar, p_c = lab.DIMENSIONS[name]
    k_h, k_c = 3.0, 5.0
    scaled = lab.CGS.scaled(k_h, k_c)

    def evaluate(constants):
        if name == "casimir_polder_potential":
            return lab.casimir_polder_potential(NA, 1e-3, 1e-4, constants=constants)
        if name == "deflection_ratio":
            return lab.deflection_ratio(NA, 1e-3, 1e-4, 1e-3, constants=constants)
        if name == "levitation_height":
            return lab.levitation_height(NA, 1e-3, constants=constants).height
        if name == "trap_temperature":
            return lab.trap_temperature(NA, 1e-3, 1e-4, constants=constants).kelvin
        return lab.phase_shift(NA, 1e-4, 1e-3, 0.1, constants=constants)

    ratio = evaluate(scaled) / evaluate(lab.CGS)
    assert math.isclose(ratio, k_h ** p_hbar * k_c ** p_c, rel_tol=1e-12)


def test_sub_plasma():
    with pytest.raises(lab.SubPlasmaError):
        lab.casimir_polder_potential(NA, 1e-3, 1e-6)
    with pytest.warns(lab.SubPlasmaWarning):
        lab.casimir_polder_potential(NA, 1e-3, 1e-6, allow_sub_plasma=True)
    assert not lab.levitation_height(NA, 1e-12).viable


def test_invalid_inputs():
    with pytest.raises(ValueError):
        lab.AtomSpec("X", -1.0, 1.0)
    with pytest.raises(ValueError):
        lab.casimir_polder_potential(NA, -1e-3, 1e-4)
    with pytest.raises(ValueError):
        lab.deflection_ratio(NA, 1e-3, 1e-4, -1.0)


def test_gaussian_conversion():
    atom = lab.AtomSpec.from_gaussian("Na", NA.mass, NA.polarizability / (4 * math.pi))
    assert math.isclose(atom.polarizability, NA.polarizability)


def test_lambda_coefficients():
    flat = lab.LambdaCoefficient.flat_plate()
    assert math.isclose(flat.value, 3 / (16 * math.pi ** 2))
    cyl = lab.LambdaCoefficient.mirror(Geometry.CYLINDER, 0.1)
    rev = lab.LambdaCoefficient.mirror(Geometry.REVOLUTION, 0.1)
    assert math.isclose(cyl.value / rev.value, 16 / (15 * math.pi))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert lab.e_sq_cgs(rev, 1e-4) > 0
