"""Design formulas: SQUID inductance, anti-resonance, quarter-wave modes."""

from __future__ import annotations

import numpy as np

from ..constants import Phi_0

#: Sentinel for a fully frustrated SQUID (flux at half a flux quantum); the
#: stamper treats it as an open.
INFINITE_INDUCTANCE = float("inf")


def squid_inductance(ic: float, flux: float) -> float:
    """Tunable Josephson inductance Phi0 / (2 pi Ic |cos(pi Phi/Phi0)|).

    Returns INFINITE_INDUCTANCE at exactly half-integer frustration.
    """
    if ic <= 0:
        raise ValueError("Ic must be > 0")
    c = abs(np.cos(np.pi * flux / Phi_0))
    if c < 1e-12:  # half-integer frustration up to floating rounding
        return INFINITE_INDUCTANCE
    return Phi_0 / (2.0 * np.pi * ic * c)


def anti_resonance_frequency(l_eff: float, c_eff: float, l_squid: float) -> float:
    """Frequency [Hz] of the transmission dip of the shunted quarter-wave mode.

    The lumped model is a series-LC resonator whose capacitance is shunted by
    the SQUID inductance; the formula is interpreted as angular frequency and
    divided by 2 pi.
    """
    if l_eff <= 0 or c_eff <= 0:
        raise ValueError("effective L and C must be > 0")
    inv = 1.0 / (l_eff * c_eff)
    if not np.isinf(l_squid):
        if l_squid <= 0:
            raise ValueError("L_squid must be > 0 or infinite")
        inv += 1.0 / (l_squid * c_eff)
    return np.sqrt(inv) / (2.0 * np.pi)


def anti_resonance_flux_sweep(l_eff, c_eff, ic, flux_values, v_bias, r_series):
    """Anti-resonance versus flux with the latched-region gating.

    The SQUID contributes its inductance only while it sits on the current
    branch, i.e. while V_b < R * Ic |cos(pi Phi/Phi0)|; elsewhere the mode
    frequency is the bare resonator value.

    Returns (nu0 array, latched bool array).
    """
    flux_values = np.asarray(flux_values, dtype=float)
    nu0 = np.empty(flux_values.size)
    latched = np.zeros(flux_values.size, dtype=bool)
    for i, phi in enumerate(flux_values):
        ic_eff = ic * abs(np.cos(np.pi * phi / Phi_0))
        if v_bias < r_series * ic_eff:
            latched[i] = True
            nu0[i] = anti_resonance_frequency(l_eff, c_eff, squid_inductance(ic, phi))
        else:
            nu0[i] = anti_resonance_frequency(l_eff, c_eff, INFINITE_INDUCTANCE)
    return nu0, latched


def resonator_summary(z_r: float, length_delay: float, z_c_load: float, n_max: int):
    """Mode frequencies, impedances and quality factors of a shorted
    quarter-wave resonator loaded by z_c_load.

    f_n = (2n+1)/(4 delay), Z_n = 4 Z_R / (pi (2n+1)),
    Q_n = (pi/4)(Z_R/Z_C)/(2n+1).
    """
    if z_r <= 0 or length_delay <= 0 or z_c_load <= 0:
        raise ValueError("inputs must be > 0")
    n = np.arange(n_max + 1)
    odd = 2 * n + 1
    return {
        "n": n,
        "f_n": odd / (4.0 * length_delay),
        "z_n": 4.0 * z_r / (np.pi * odd),
        "q_n": (np.pi / 4.0) * (z_r / z_c_load) / odd,
    }
