"""Detector folding: efficiency polynomials and the expected-signal constant.

The expected signal count in the analysis window is

    z_s = integral over the window of
          sum_i N_pi^2 * alpha_i * beta * (lam / r_c^2 E) * eps_i(E) dE
        = a * (lam / r_c^2),

with alpha_i = mass * atoms-per-kg * live-time of material i, beta the
universal rate constant hbar e^2 / (4 pi^2 eps0 c^3 m0^2) in m^2, and
eps_i a fitted detection-efficiency polynomial in E (keV).

Energy bookkeeping: written fully in SI the integrand carries 1/E_J and
the measure dE_J; converting both to keV cancels the keV-to-joule factor
exactly, so the integral is evaluated directly in keV and a*(lam/r_c^2)
is a pure count.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .domain import CONSTANTS, M_NUCLEON, EnergyWindow
from .specfun import QuadratureSpec, integrate


class EfficiencyClampWarning(UserWarning):
    """A fitted efficiency polynomial went negative and was clamped to 0."""


def beta_constant(m0: float = M_NUCLEON) -> float:
    """hbar e^2 / (4 pi^2 eps0 c^3 m0^2), in m^2."""
    return (CONSTANTS.hbar * CONSTANTS.e_charge ** 2
            / (4.0 * math.pi ** 2 * CONSTANTS.eps0 * CONSTANTS.c ** 3 * m0 ** 2))


@dataclass(frozen=True)
class EfficiencyPoly:
    """Detection-efficiency polynomial sum_j coeffs[j] * E^j, E in keV.

    ``uncertainties`` carries the fit errors as metadata only; nothing
    here propagates them.
    """

    coeffs: tuple[float, ...]
    uncertainties: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("efficiency polynomial needs at least one coefficient")
        if self.uncertainties is not None:
            object.__setattr__(self, "uncertainties", tuple(self.uncertainties))
            if len(self.uncertainties) != len(self.coeffs):
                raise ValueError("uncertainties must match coefficients in length")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def raw_value(self, energy_kev: float) -> float:
        """Horner evaluation without the non-negativity clamp."""
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * energy_kev + c
        return acc


def eval_efficiency(poly: EfficiencyPoly, energy_kev: float) -> float:
    """Clamped polynomial efficiency; negative fit extrapolations become 0."""
    if energy_kev <= 0:
        raise ValueError(f"energy must be positive, got {energy_kev}")
    value = poly.raw_value(energy_kev)
    if value < 0.0:
        warnings.warn(
            f"efficiency polynomial negative ({value:.3e}) at {energy_kev} keV; "
            "clamped to 0", EfficiencyClampWarning, stacklevel=2)
        return 0.0
    return value


# Fitted efficiency polynomials of the five detector components that
# contribute significantly, transcribed exactly (absent high-order terms
# are absent, not zero).  Arguments in keV, valid over the 1000-3800 keV
# analysis window.
PAPER_TABLE_1 = {
    "Ge crystal": EfficiencyPoly(
        coeffs=(4.82e-1, -4.42e-4, 2.10e-7, -4.87e-11, 4.32e-15),
        uncertainties=(0.03e-1, 0.03e-4, 0.01e-7, 0.03e-11, 0.07e-15),
    ),
    "Inner Cu": EfficiencyPoly(
        coeffs=(3.77e-2, -2.48e-5, 1.03e-8, -2.24e-12, 1.93e-16),
        uncertainties=(0.04e-2, 0.03e-5, 0.01e-8, 0.04e-12, 0.08e-16),
    ),
    "Cu block + plate": EfficiencyPoly(
        coeffs=(2.6e-3, 2.9e-7, -3.1e-10, 5.7e-14, -3.1e-18),
        uncertainties=(0.1e-3, 1.4e-7, 0.5e-10, 1.6e-14, 3.3e-18),
    ),
    "Cu shield": EfficiencyPoly(
        coeffs=(-1.01e-5, 7.8e-8, -2.07e-11, 1.61e-15),
        uncertainties=(0.07e-5, 0.1e-8, 0.06e-11, 0.09e-15),
    ),
    "Pb shield": EfficiencyPoly(
        coeffs=(-5.76e-4, 3.812e-6, -2.728e-9, 9.036e-13, -1.477e-16, 9.60e-21),
        uncertainties=(0.03e-4, 0.003e-6, 0.001e-9, 0.004e-13, 0.001e-16, 0.02e-21),
    ),
}

BUILTIN_DATASETS = {"paper-table-1": PAPER_TABLE_1}


def builtin_polynomials(dataset: str = "paper-table-1") -> dict[str, EfficiencyPoly]:
    """Look up a built-in efficiency dataset by name."""
    try:
        return dict(BUILTIN_DATASETS[dataset])
    except KeyError:
        raise ValueError(
            f"unknown dataset '{dataset}'; available: "
            + ", ".join(sorted(BUILTIN_DATASETS))
        ) from None


@dataclass(frozen=True)
class MaterialComponent:
    """One detector material: proton number, atom inventory, exposure, efficiency."""

    name: str
    n_protons: int
    atoms_per_kg: float
    mass: float          # kg
    live_time: float     # s
    efficiency: EfficiencyPoly

    def __post_init__(self):
        for attr in ("n_protons", "atoms_per_kg", "mass", "live_time"):
            if getattr(self, attr) <= 0:
                raise ValueError(f"{attr} must be positive for '{self.name}'")

    @property
    def alpha(self) -> float:
        """Exposure factor mass * atoms_per_kg * live_time, in atom s."""
        return self.mass * self.atoms_per_kg * self.live_time


@dataclass(frozen=True)
class SignalModel:
    """A detector inventory, its analysis window, and the rate constant beta."""

    materials: tuple[MaterialComponent, ...]
    window: EnergyWindow
    beta: float = field(default_factory=beta_constant)

    def __post_init__(self):
        object.__setattr__(self, "materials", tuple(self.materials))


def signal_density(model: SignalModel, noise_ratio: float,
                   energy_kev: float) -> float:
    """Expected signal counts per keV at one energy, for lam/r_c^2 = noise_ratio."""
    if not model.window.contains(energy_kev):
        raise ValueError(
            f"energy {energy_kev} keV outside window "
            f"[{model.window.e_min}, {model.window.e_max}]")
    total = 0.0
    for mat in model.materials:
        total += (mat.n_protons ** 2 * mat.alpha
                  * eval_efficiency(mat.efficiency, energy_kev))
    return total * model.beta * noise_ratio / energy_kev


def material_signal_constant(mat: MaterialComponent, window: EnergyWindow,
                             beta: float) -> float:
    """One material's contribution to the signal constant a, in s m^2."""
    def eff_over_e(e):
        return eval_efficiency(mat.efficiency, e) / e

    integral = integrate(eff_over_e, window.e_min, window.e_max,
                         QuadratureSpec(rel_tol=1e-11))
    return mat.n_protons ** 2 * mat.alpha * beta * integral


def compute_a(model: SignalModel) -> float:
    """Signal constant a: expected counts are a * (lam / r_c^2)."""
    return sum(
        material_signal_constant(mat, model.window, model.beta)
        for mat in model.materials
    )


def signal_shape(model: SignalModel, n_points: int):
    """Sampled signal spectrum over the window, normalized to unit area.

    Returns (energies_kev, density_per_kev) arrays whose trapezoid
    integral is 1.  The shape is independent of lam/r_c^2.
    """
    if n_points < 2:
        raise ValueError(f"need at least 2 sample points, got {n_points}")
    energies = np.linspace(model.window.e_min, model.window.e_max, n_points)
    density = np.array([signal_density(model, 1.0, e) for e in energies])
    area = np.trapezoid(density, energies)
    if area <= 0.0:
        raise ValueError("signal density is identically zero; cannot normalize")
    return energies, density / area


# --- inventory JSON wire format ---------------------------------------------

_MATERIAL_FIELDS = {
    "name": str,
    "n_protons": int,
    "atoms_per_kg": (int, float),
    "mass_kg": (int, float),
    "live_time_s": (int, float),
    "efficiency_coeffs": list,
}


def signal_model_from_json(text: str) -> SignalModel:
    """Parse the material-inventory JSON format.

    Expected shape::

        {"window_kev": [1000, 3800],
         "materials": [{"name": ..., "n_protons": ..., "atoms_per_kg": ...,
                        "mass_kg": ..., "live_time_s": ...,
                        "efficiency_coeffs": [...]}, ...]}
    """
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("inventory JSON must be an object")
    if "window_kev" not in data:
        raise ValueError("inventory missing field 'window_kev'")
    window_spec = data["window_kev"]
    if not isinstance(window_spec, (list, tuple)) or len(window_spec) != 2:
        raise ValueError("'window_kev' must be a [min, max] pair")
    window = EnergyWindow(float(window_spec[0]), float(window_spec[1]))
    if "materials" not in data:
        raise ValueError("inventory missing field 'materials'")
    if not isinstance(data["materials"], list):
        raise ValueError("'materials' must be an array")

    materials = []
    for i, entry in enumerate(data["materials"]):
        label = entry.get("name", f"#{i}") if isinstance(entry, dict) else f"#{i}"
        if not isinstance(entry, dict):
            raise ValueError(f"material {label}: expected an object")
        for key, kind in _MATERIAL_FIELDS.items():
            if key not in entry:
                raise ValueError(f"material {label}: missing field '{key}'")
            if not isinstance(entry[key], kind) or isinstance(entry[key], bool):
                raise ValueError(f"material {label}: field '{key}' has wrong type")
        materials.append(MaterialComponent(
            name=entry["name"],
            n_protons=entry["n_protons"],
            atoms_per_kg=float(entry["atoms_per_kg"]),
            mass=float(entry["mass_kg"]),
            live_time=float(entry["live_time_s"]),
            efficiency=EfficiencyPoly(tuple(float(c)
                                            for c in entry["efficiency_coeffs"])),
        ))
    return SignalModel(tuple(materials), window)
