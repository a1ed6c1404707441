import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cslrad.domain import (
    CONSTANTS,
    DEFAULT_WINDOW,
    KEV_IN_JOULES,
    M_NUCLEON,
    EnergyWindow,
    NoiseParams,
    Particle,
    ParticleSystem,
    joule_to_kev,
    kev_to_joule,
    particle_system_from_json,
    wavelength_from_energy,
)

# CODATA 2018 values retyped here by hand so a transcription slip in the
# package constants cannot hide.
HBAR = 1.054571817e-34
C_LIGHT = 2.99792458e8
EPS0 = 8.8541878128e-12
E_CHARGE = 1.602176634e-19
AMU = 1.66053906660e-27
M_PROTON = 1.67262192369e-27


def test_constants_match_codata_2018():
    assert CONSTANTS.hbar == HBAR
    assert CONSTANTS.c == C_LIGHT
    assert CONSTANTS.eps0 == EPS0
    assert CONSTANTS.e_charge == E_CHARGE
    assert CONSTANTS.amu == AMU
    assert M_NUCLEON == M_PROTON


def test_kev_in_joules_exact():
    assert KEV_IN_JOULES == 1.602176634e-16
    assert kev_to_joule(1.0) == KEV_IN_JOULES
    assert kev_to_joule(1000.0) == pytest.approx(1.602176634e-13, rel=1e-15)


@given(st.floats(min_value=1e-6, max_value=1e9))
def test_energy_conversion_round_trip(e_kev):
    assert joule_to_kev(kev_to_joule(e_kev)) == pytest.approx(e_kev, rel=1e-15)


def test_wavelength_reference_point():
    # 12.398 keV photons have a wavelength of almost exactly 1 angstrom.
    assert wavelength_from_energy(12.398) == pytest.approx(
        1.0000338631814227e-10, rel=1e-12)


def test_wavelength_at_window_energies():
    lam = wavelength_from_energy(1000.0)
    assert lam == pytest.approx(1.2398419843320025e-12, rel=1e-10)
    # reduced wavelength c/omega at 1000 keV, the scale entering b
    assert lam / (2.0 * math.pi) == pytest.approx(1.9732698033839646e-13,
                                                  rel=1e-12)


@given(st.floats(min_value=1e-3, max_value=1e6))
def test_wavelength_inverse_in_energy(e_kev):
    # lambda * E is the constant 2*pi*hbar*c
    prod = wavelength_from_energy(e_kev) * kev_to_joule(e_kev)
    assert prod == pytest.approx(2.0 * math.pi * HBAR * C_LIGHT, rel=1e-13)


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_wavelength_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        wavelength_from_energy(bad)


def test_noise_params_validation():
    ok = NoiseParams(lambda_collapse=1e-16, r_c=1e-7)
    assert ok.m0 == M_PROTON
    with pytest.raises(ValueError):
        NoiseParams(lambda_collapse=0.0, r_c=1e-7)
    with pytest.raises(ValueError):
        NoiseParams(lambda_collapse=1e-16, r_c=-1e-7)
    with pytest.raises(ValueError):
        NoiseParams(lambda_collapse=1e-16, r_c=1e-7, m0=0.0)


def test_particle_fields():
    p = Particle(charge_e=1.0, mass=M_PROTON, position=(1.0, 2.0, 3.0))
    assert p.position == (1.0, 2.0, 3.0)
    assert p.charge_coulomb == pytest.approx(E_CHARGE, rel=1e-15)
    neutral = Particle(charge_e=0.0, mass=M_PROTON)
    assert neutral.charge_coulomb == 0.0


def test_particle_validation():
    with pytest.raises(ValueError):
        Particle(charge_e=1.0, mass=0.0)
    with pytest.raises(ValueError):
        Particle(charge_e=1.0, mass=M_PROTON, position=(1.0, 2.0))


def test_particle_system_preserves_order_and_rejects_empty():
    a = Particle(1.0, M_PROTON, (0.0, 0.0, 0.0))
    b = Particle(-1.0, M_PROTON, (1.0, 0.0, 0.0))
    sys2 = ParticleSystem((a, b))
    assert len(sys2) == 2
    assert list(sys2) == [a, b]
    with pytest.raises(ValueError):
        ParticleSystem(())


def test_particle_system_json_round_trip():
    text = json.dumps([
        {"charge_e": 1, "mass_kg": M_PROTON, "position_m": [0, 0, 0]},
        {"charge_e": -1, "mass_kg": 9.1093837015e-31, "position_m": [1e-10, 0, 0]},
    ])
    system = particle_system_from_json(text)
    assert len(system) == 2
    assert system.particles[0].charge_e == 1.0
    assert system.particles[1].position == (1e-10, 0.0, 0.0)


@pytest.mark.parametrize("payload, fragment", [
    ('{"charge_e": 1}', "array"),
    ('[42]', "particle 0"),
    ('[{"charge_e": 1, "position_m": [0,0,0]}]', "mass_kg"),
    ('[{"mass_kg": 1e-27, "position_m": [0,0,0]}]', "charge_e"),
    ('[{"charge_e": 1, "mass_kg": 1e-27}]', "position_m"),
    ('[{"charge_e": 1, "mass_kg": 1e-27, "position_m": [0,0]}]', "3-element"),
])
def test_particle_system_json_errors_name_the_problem(payload, fragment):
    with pytest.raises(ValueError, match=fragment):
        particle_system_from_json(payload)


def test_energy_window():
    w = EnergyWindow(1000.0, 3800.0)
    assert w.width == 2800.0
    assert w.contains(1000.0) and w.contains(3800.0) and w.contains(2000.0)
    assert not w.contains(999.9) and not w.contains(3800.1)
    assert DEFAULT_WINDOW == w


@pytest.mark.parametrize("lo, hi", [(0.0, 10.0), (-5.0, 10.0), (10.0, 10.0),
                                    (20.0, 10.0)])
def test_energy_window_validation(lo, hi):
    with pytest.raises(ValueError):
        EnergyWindow(lo, hi)
