"""Electron-temperature closed forms for the on-chip biasing resistor.

Joule power from the average recharging current, electronic heat capacity
and thermal rise time, electron-phonon steady state, the hot-electron wire
profile and the phonon-wavelength thermalization criterion.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.constants as sc

from .constants import e, h, k_B

#: Deliberate lower bound of the electron-phonon coupling [W/(m^3 K^5)].
SIGMA_EP_DEFAULT = 0.2e9


@dataclass
class Material:
    mass_density: float              # [kg/m^3]
    atomic_mass: float               # relative atomic mass [kg/mol]
    fermi_temperature: float         # [K]
    sound_speed: float               # [m/s]
    debye_temperature: float         # [K]
    electrons_per_atom: float = 1.0

    @property
    def electron_density(self) -> float:
        return self.electrons_per_atom * self.mass_density * sc.N_A / self.atomic_mass


CHROMIUM = Material(mass_density=7.19e3, atomic_mass=52e-3,
                    fermi_temperature=5e4, sound_speed=5.9e3,
                    debye_temperature=460.0)


@dataclass
class ResistorGeometry:
    wire_length: float               # per resistive line [m]
    wire_width: float
    wire_thickness: float
    n_wires: int
    total_volume: float              # wires + cooling pads [m^3]
    material: Material = field(default_factory=lambda: CHROMIUM)
    sigma_ep: float = SIGMA_EP_DEFAULT
    film_stack_thickness: float = 620e-9

    def __post_init__(self):
        if self.total_volume < self.wire_volume:
            raise ValueError("total volume cannot be below the wire volume")

    @property
    def wire_volume(self) -> float:
        return self.n_wires * self.wire_length * self.wire_width * self.wire_thickness


#: The device's resistor: 12 thin lines of 20 um x 0.3 um x 15 nm between
#: cooling pads dominating the ~2000 um^3 total volume.
PAPER_RESISTOR = ResistorGeometry(wire_length=20e-6, wire_width=0.3e-6,
                                  wire_thickness=15e-9, n_wires=12,
                                  total_volume=2000e-18)


def joule_power(r: float, rc_time: float) -> dict:
    """Average recharging current I = 2e/RC and dissipated power I^2 R."""
    if r <= 0 or rc_time <= 0:
        raise ValueError("inputs must be > 0")
    current = 2.0 * e / rc_time
    return {"current": current, "power": current**2 * r}


def heat_capacity(geom: ResistorGeometry, temperature: float) -> float:
    """Electronic heat capacity (pi^2/2) k_B n V T/T_F [J/K]."""
    if temperature <= 0:
        raise ValueError("temperature must be > 0")
    m = geom.material
    return (np.pi**2 / 2.0) * k_B * m.electron_density * geom.total_volume \
        * temperature / m.fermi_temperature


def rise_time(geom: ResistorGeometry, temperature: float, delta_t: float,
              power: float) -> float:
    """Time to raise the electron temperature by delta_t at constant power."""
    return heat_capacity(geom, temperature) * delta_t / power


def steady_temperature(power: float, sigma_ep: float, volume: float,
                       t_phonon: float) -> float:
    """Electron-phonon steady state T_e = (T_ph^5 + P/(Sigma V))^(1/5)."""
    if sigma_ep <= 0 or volume <= 0 or t_phonon <= 0 or power < 0:
        raise ValueError("inputs must be positive")
    return (t_phonon**5 + power / (sigma_ep * volume)) ** 0.2


def wire_profile(r_wire: float, current: float, t_boundary: float, x) -> np.ndarray:
    """Hot-electron temperature profile along one wire segment.

    T(x) = sqrt(T_b^2 + (3/pi^2) x (1-x) (e R I / k_B)^2) for the normalized
    coordinate x in [0, 1]; r_wire is the resistance of that segment.
    """
    x = np.asarray(x, dtype=float)
    if np.any((x < 0) | (x > 1)):
        raise ValueError("x must lie in [0, 1]")
    scale = (e * r_wire * current / k_B) ** 2
    return np.sqrt(t_boundary**2 + (3.0 / np.pi**2) * x * (1.0 - x) * scale)


def min_phonon_temperature(d: float, v_c: float) -> float:
    """Minimum temperature exciting phonons with quarter wavelength d:
    T = h v_c / (4 d k_B)."""
    if d <= 0 or v_c < 0:
        raise ValueError("need d > 0 and v_c >= 0")
    return h * v_c / (4.0 * d * k_B)


def thermal_report(r: float, rc_time: float,
                   geom: ResistorGeometry | None = None,
                   t_phonon: float = 15e-3) -> dict:
    """Full closed-form thermal budget for one resistor geometry."""
    geom = geom or PAPER_RESISTOR
    jp = joule_power(r, rc_time)
    t_full = steady_temperature(jp["power"], geom.sigma_ep, geom.total_volume, t_phonon)
    t_wire = steady_temperature(jp["power"], geom.sigma_ep, geom.wire_volume, t_phonon)
    r_wire = r / geom.n_wires
    profile_mid = float(wire_profile(r_wire, jp["current"], t_full, 0.5))
    return {
        "current_A": jp["current"],
        "power_W": jp["power"],
        "heat_capacity_J_per_K": heat_capacity(geom, t_full),
        "rise_time_s": rise_time(geom, t_full, 1e-3, jp["power"]),
        "t_electron_full_K": t_full,
        "t_electron_wire_only_K": t_wire,
        "wire_profile_max_K": profile_mid,
        "wire_profile_flatness": profile_mid / t_full - 1.0,
        "min_phonon_temperature_K": min_phonon_temperature(
            geom.film_stack_thickness, geom.material.sound_speed),
    }
