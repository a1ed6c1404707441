"""Core value types, physical constants, and unit conventions.

Conventions used across the package:

* public interfaces take photon energies in keV; everything internal to a
  formula is SI (J, m, s, kg, C),
* charges are stored as multiples of the elementary charge and converted
  on demand, so neutral systems sum to exactly zero,
* all types are immutable values and all operations are pure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PhysConstants:
    """CODATA 2018 constants, frozen so results are bit-reproducible."""

    hbar: float = 1.054571817e-34        # J s
    c: float = 2.99792458e8              # m/s (exact)
    eps0: float = 8.8541878128e-12       # F/m
    e_charge: float = 1.602176634e-19    # C (exact)
    amu: float = 1.66053906660e-27       # kg

    def __post_init__(self):
        for name in ("hbar", "c", "eps0", "e_charge", "amu"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


CONSTANTS = PhysConstants()

# Nucleon reference mass for the mass-proportional noise coupling.  The
# proton mass is adopted (the amu alternative differs by <0.8%, below
# every tolerance used here).
M_NUCLEON = 1.67262192369e-27  # kg, CODATA 2018 proton mass

KEV_IN_JOULES = 1e3 * CONSTANTS.e_charge  # 1.602176634e-16 J, exact


def kev_to_joule(energy_kev: float) -> float:
    """Convert a photon energy from keV to joules."""
    return energy_kev * KEV_IN_JOULES


def joule_to_kev(energy_j: float) -> float:
    """Inverse of :func:`kev_to_joule`."""
    return energy_j / KEV_IN_JOULES


def wavelength_from_energy(energy_kev: float) -> float:
    """Photon wavelength 2*pi*hbar*c / E in meters, for E in keV."""
    if energy_kev <= 0:
        raise ValueError(f"photon energy must be positive, got {energy_kev}")
    return 2.0 * math.pi * CONSTANTS.hbar * CONSTANTS.c / kev_to_joule(energy_kev)


@dataclass(frozen=True)
class NoiseParams:
    """Collapse-noise parameters: strength, correlation length, reference mass.

    lambda_collapse : collapse rate in 1/s
    r_c             : noise correlation length in m
    m0              : reference nucleon mass in kg
    """

    lambda_collapse: float
    r_c: float
    m0: float = M_NUCLEON

    def __post_init__(self):
        if self.lambda_collapse <= 0:
            raise ValueError("lambda_collapse must be positive")
        if self.r_c <= 0:
            raise ValueError("r_c must be positive")
        if self.m0 <= 0:
            raise ValueError("m0 must be positive")


@dataclass(frozen=True)
class Particle:
    """A point charge: charge in units of e, mass in kg, mean position in m."""

    charge_e: float
    mass: float
    position: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError("particle mass must be positive")
        if len(self.position) != 3:
            raise ValueError("position must be a 3-vector")
        object.__setattr__(self, "position", tuple(float(x) for x in self.position))

    @property
    def charge_coulomb(self) -> float:
        return self.charge_e * CONSTANTS.e_charge


@dataclass(frozen=True)
class ParticleSystem:
    """An ordered, non-empty collection of point charges."""

    particles: tuple[Particle, ...]

    def __post_init__(self):
        object.__setattr__(self, "particles", tuple(self.particles))
        if not self.particles:
            raise ValueError("particle system must not be empty")

    def __len__(self) -> int:
        return len(self.particles)

    def __iter__(self):
        return iter(self.particles)


def particle_system_from_json(text: str) -> ParticleSystem:
    """Parse the particle-system JSON wire format.

    Expected shape: an array of objects
    ``{"charge_e": number, "mass_kg": number, "position_m": [x, y, z]}``.
    """
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("particle system JSON must be an array of objects")
    particles = []
    for i, entry in enumerate(data):
        if not isinstance(entry, dict):
            raise ValueError(f"particle {i}: expected an object")
        for key in ("charge_e", "mass_kg", "position_m"):
            if key not in entry:
                raise ValueError(f"particle {i}: missing field '{key}'")
        pos = entry["position_m"]
        if not isinstance(pos, (list, tuple)) or len(pos) != 3:
            raise ValueError(f"particle {i}: 'position_m' must be a 3-element array")
        particles.append(
            Particle(
                charge_e=float(entry["charge_e"]),
                mass=float(entry["mass_kg"]),
                position=tuple(float(x) for x in pos),
            )
        )
    return ParticleSystem(tuple(particles))


@dataclass(frozen=True)
class EnergyWindow:
    """A photon-energy acceptance window [e_min, e_max] in keV."""

    e_min: float
    e_max: float

    def __post_init__(self):
        if not 0 < self.e_min < self.e_max:
            raise ValueError(
                f"need 0 < e_min < e_max, got ({self.e_min}, {self.e_max})"
            )

    @property
    def width(self) -> float:
        return self.e_max - self.e_min

    def contains(self, energy_kev: float) -> bool:
        return self.e_min <= energy_kev <= self.e_max


# The counting analysis window of the bundled dataset.
DEFAULT_WINDOW = EnergyWindow(1000.0, 3800.0)
