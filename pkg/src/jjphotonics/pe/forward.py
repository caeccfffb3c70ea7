"""Forward observables: emission-rate density, tunneling rate, band rates."""

from __future__ import annotations

import numpy as np

from ..constants import e, h
from .grids import EmissionMap, EnvironmentImpedance, FrequencyGrid, JunctionParams, PEFunction


def emission_rate_density(pe: PEFunction, z: EnvironmentImpedance,
                          j: JunctionParams, f_grid: FrequencyGrid,
                          vj_grid: FrequencyGrid) -> EmissionMap:
    """gamma(f, nu_J) = (Ic^2/2) (ReZ(f)/f) P(nu_J - f) / h  [photons/s/Hz].

    P is interpolated linearly; the P grid must cover every nu_J - f
    difference requested.
    """
    f = f_grid.values
    vj = vj_grid.values
    lo_req = vj[0] - f[-1]
    hi_req = vj[-1] - f[0]
    lo_have = pe.nu[0]
    hi_have = pe.nu[-1]
    if lo_req < lo_have or hi_req > hi_have:
        raise ValueError(
            "P grid does not cover requested differences: need "
            f"[{lo_req:.4g}, {hi_req:.4g}] Hz, have [{lo_have:.4g}, {hi_have:.4g}] Hz")
    prefactor = 0.5 * j.ic**2 / h
    col = prefactor * z.at(f) / f                      # per-f factor
    gamma = np.empty((vj.size, f.size))
    for k in range(f.size):
        gamma[:, k] = col[k] * pe.value_at(vj - f[k])
    temperature = pe.metadata.get("temperature_K", float("nan"))
    return EmissionMap(f_grid=f_grid, vj_grid=vj_grid, gamma=gamma,
                       ic=j.ic, temperature=temperature)


def tunneling_rate(pe: PEFunction, j: JunctionParams, vj) -> np.ndarray | float:
    """Cooper pair tunneling rate Gamma(nu_J) = (Ic^2/4)(h/4e^2) P_E(h nu_J).

    With P in per-Hz units this is Ic^2 P(nu_J) / (16 e^2) [events/s].
    """
    vja = np.asarray(vj, dtype=float)
    if np.any(vja < pe.nu[0]) or np.any(vja > pe.nu[-1]):
        raise ValueError("nu_J outside the P grid")
    out = j.ic**2 * pe.value_at(vja) / (16.0 * e**2)
    return float(out) if np.isscalar(vj) else out


def band_rate(emap: EmissionMap, f_lo: float, f_hi: float, vj: float) -> float:
    """Trapezoidal integral of gamma over [f_lo, f_hi] at fixed nu_J [photons/s]."""
    f = emap.f_grid.values
    if f_hi <= f_lo:
        raise ValueError("empty band")
    if f_lo < f[0] - 1e-9 or f_hi > f[-1] + 1e-9:
        raise ValueError("band outside the map's frequency grid")
    vjs = emap.vj_grid.values
    if vj < vjs[0] or vj > vjs[-1]:
        raise ValueError("nu_J outside the map's bias grid")
    # row at vj by linear interpolation between neighbouring bias rows
    i = int(np.clip(np.searchsorted(vjs, vj), 1, vjs.size - 1))
    w = (vj - vjs[i - 1]) / (vjs[i] - vjs[i - 1])
    row = (1 - w) * emap.gamma[i - 1] + w * emap.gamma[i]
    sel = (f >= f_lo) & (f <= f_hi)
    fs = f[sel]
    gs = row[sel]
    # close the band edges exactly
    if fs[0] > f_lo:
        fs = np.concatenate([[f_lo], fs])
        gs = np.concatenate([[np.interp(f_lo, f, row)], gs])
    if fs[-1] < f_hi:
        fs = np.concatenate([fs, [f_hi]])
        gs = np.concatenate([gs, [np.interp(f_hi, f, row)]])
    return float(np.trapezoid(gs, fs))
