"""Weight functions for the inverse-pipeline integral identities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..pe.grids import EmissionMap, PEFunction


@dataclass
class WeightFunction:
    """Sampled weight on a frequency grid.

    sigma_P and sigma_beta weights are nonnegative and normalized to unit
    integral; sigma_V may take signed values (its overall scale cancels in
    the critical-current identity).
    """

    grid: np.ndarray
    weights: np.ndarray
    role: str

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.grid.shape != self.weights.shape:
            raise ValueError("grid/weights shape mismatch")
        if self.role not in ("sigma_P", "sigma_beta", "sigma_V"):
            raise ValueError(f"unknown weight role {self.role!r}")
        if self.role != "sigma_V" and np.any(self.weights < 0):
            raise ValueError(f"{self.role} weights must be nonnegative")

    def at(self, f) -> np.ndarray:
        return np.interp(np.asarray(f, dtype=float), self.grid, self.weights,
                         left=0.0, right=0.0)


def sigma_p_from_map(emap: EmissionMap) -> WeightFunction:
    """sigma_P proportional to the band-integrated rate, large where the
    signal is large."""
    f = emap.f_grid.values
    w = np.trapezoid(emap.gamma, emap.vj_grid.values, axis=0)
    total = np.trapezoid(w, f)
    if total <= 0:
        raise ValueError("map carries no signal")
    return WeightFunction(grid=f, weights=w / total, role="sigma_P")


def sigma_beta_from_pe(pe: PEFunction, floor_frac: float = 1e-6) -> WeightFunction:
    """sigma_beta proportional to P(nu) P(-nu), a signal-to-noise proxy for
    the detailed-balance log ratio."""
    nu = pe.nu
    n = nu.size
    nu_pos = nu[n // 2:]
    prod = pe.values[n // 2:] * pe.values[: n // 2][::-1]
    floor = floor_frac * pe.values.max()
    prod = np.where((pe.values[n // 2:] > floor) & (pe.values[: n // 2][::-1] > floor),
                    prod, 0.0)
    total = np.trapezoid(prod, nu_pos)
    if total <= 0:
        raise ValueError("no usable +-nu pairs above the noise floor")
    return WeightFunction(grid=nu_pos, weights=prod / total, role="sigma_beta")


WIDTH_GRID = (0.4e9, 0.55e9, 0.7e9, 0.9e9, 1.1e9)


def sigma_v_two_gaussians(pe: PEFunction, band: tuple[float, float],
                          r_dc: float | None = None,
                          width_grid=WIDTH_GRID,
                          c_grid: np.ndarray | None = None) -> WeightFunction:
    """Signed sigma_V: a Gaussian on the photon-assisted peak minus a scaled
    Gaussian on the charging peak.

    The width and relative scale c are chosen to keep
    sigma_f = int P(nu - f) sigma_V(nu) dnu contained in the measurable band.
    When the independently measured DC resistance r_dc is supplied, the
    below-band response is additionally nulled against the RC-impedance
    shape it implies (with the charging energy taken from the data), which
    suppresses the dominant low-frequency bias of the critical-current
    identity; pe.beta must then be set.
    """
    nu = pe.nu
    p = pe.values
    dnu = pe.grid.df
    pos = nu > 0
    # charging peak below 4.5 GHz; photon-assisted peak is the strongest
    # local maximum a few GHz above it
    lo_sel = pos & (nu < 4.5e9)
    nu1 = nu[lo_sel][np.argmax(p[lo_sel])]
    hi_sel = pos & (nu >= nu1 + 2.5e9) & (nu < nu1 + 10e9)
    idx = np.flatnonzero(hi_sel)
    interior = idx[1:-1]
    is_max = (p[interior] > p[interior - 1]) & (p[interior] > p[interior + 1])
    if np.any(is_max):
        cand = interior[is_max]
        nu2 = nu[cand[np.argmax(p[cand])]]
    else:
        nu2 = nu[idx[np.argmax(p[idx])]]

    f_probe = np.concatenate([-np.arange(dnu / 2, 14e9, 2 * dnu)[::-1],
                              np.arange(dnu / 2, 16e9, 2 * dnu)])
    in_band = (f_probe >= band[0]) & (f_probe <= band[1])
    below = np.abs(f_probe) < band[0]
    p_shift = pe.value_at(nu[None, :] - f_probe[:, None])

    xhat = None
    if r_dc is not None:
        if not np.isfinite(pe.beta):
            raise ValueError("pe.beta must be set to use the r_dc prior")
        # charging energy from the charge-peak centroid
        wsel = (nu > -3e9) & (nu < 4.5e9)
        ec_h = np.sum(nu[wsel] * p[wsel]) / np.sum(p[wsel])
        from ..constants import e as _e, h as _h
        c_cap = (2 * _e) ** 2 / (2 * _h * ec_h)
        xhat = (r_dc / (1 + (2 * np.pi * f_probe * r_dc * c_cap) ** 2)
                / (1 - np.exp(-pe.beta * _h * f_probe)))

    if c_grid is None:
        c_grid = np.linspace(0.0, 2.0, 401)
    best = None
    for width in width_grid:
        g1 = np.exp(-0.5 * ((nu - nu1) / width) ** 2)
        g2 = np.exp(-0.5 * ((nu - nu2) / width) ** 2)
        sf1 = p_shift @ g1 * dnu
        sf2 = p_shift @ g2 * dnu
        for c in c_grid:
            sf = sf2 - c * sf1
            band_mass = np.sum(np.abs(sf[in_band]))
            if band_mass <= 0:
                continue
            containment = band_mass / np.sum(np.abs(sf))
            if xhat is None:
                score = 1.0 - containment
            else:
                leak = abs(np.sum((sf * xhat)[below]))
                score = leak / (band_mass * np.mean(np.abs(xhat[in_band]))) \
                    + 0.1 * (1.0 - containment)
            if best is None or score < best[0]:
                best = (score, width, c)
    _, width, c = best
    g1 = np.exp(-0.5 * ((nu - nu1) / width) ** 2)
    g2 = np.exp(-0.5 * ((nu - nu2) / width) ** 2)
    w = g2 - c * g1
    w /= np.sum(np.abs(w)) * dnu
    return WeightFunction(grid=nu, weights=w, role="sigma_V")
