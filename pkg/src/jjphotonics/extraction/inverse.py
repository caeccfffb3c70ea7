"""Inverse pipeline: P(nu), effective temperature, critical current and
environment impedance from an emission map."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..constants import e, h, k_B
from ..pe.grids import EmissionMap, EnvironmentImpedance, FrequencyGrid, PEFunction
from .weights import WeightFunction, sigma_beta_from_pe, sigma_p_from_map, sigma_v_two_gaussians

#: Relative floor guarding ratios and logarithms of map-derived quantities.
NOISE_FLOOR_FRAC = 1e-6


class ExtractionError(RuntimeError):
    pass


@dataclass
class ExtractionResult:
    pe: PEFunction
    beta: float
    t_eff: float
    ic: float
    z_extracted: EnvironmentImpedance
    diagnostics: dict = field(default_factory=dict)


def _column_integrals(emap: EmissionMap) -> np.ndarray:
    """int_V gamma(f, nu') dnu' for every f column."""
    return np.trapezoid(emap.gamma, emap.vj_grid.values, axis=0)


def extract_pe(emap: EmissionMap, sigma_p: WeightFunction | None = None) -> PEFunction:
    """P(nu) = int df sigma_P(f) gamma(f, nu+f) / int_V gamma(f, nu') dnu'.

    The returned density lives on a symmetric grid with the map's bias
    spacing and is renormalized over the covered range; its beta field is
    NaN until extract_beta fills it in.
    """
    if sigma_p is None:
        sigma_p = sigma_p_from_map(emap)
    f = emap.f_grid.values
    vj = emap.vj_grid.values
    denom = _column_integrals(emap)
    floor = NOISE_FLOOR_FRAC * denom.max()
    w = sigma_p.at(f)
    usable = (denom > floor) & (w > 0)
    if not np.any(usable):
        raise ExtractionError("all frequency columns below the noise floor")
    n_excl = int(np.sum((w > 0) & ~usable))

    dv = emap.vj_grid.df
    half = dv * round((vj[-1] - f[-1]) / dv)
    grid = FrequencyGrid.symmetric(half, dv)
    nu = grid.values

    num = np.zeros(nu.size)
    wsum = np.zeros(nu.size)
    for k in np.flatnonzero(usable):
        target = nu + f[k]
        inside = (target >= vj[0]) & (target <= vj[-1])
        vals = np.interp(target[inside], vj, emap.gamma[:, k])
        num[inside] += w[k] * vals / denom[k]
        wsum[inside] += w[k]
    covered = wsum > 0
    p = np.zeros(nu.size)
    p[covered] = num[covered] / wsum[covered]
    p = np.clip(p, 0.0, None)
    total = p.sum() * dv
    if total <= 0:
        raise ExtractionError("extracted density is empty")
    p /= total
    return PEFunction(grid=grid, values=p, beta=float("nan"),
                      metadata={"excluded_columns": n_excl,
                                "covered_fraction": float(np.mean(covered))})


def extract_beta(pe: PEFunction, sigma_beta: WeightFunction | None = None) -> dict:
    """beta = int sigma_beta(nu) ln(P(nu)/P(-nu)) / (h nu) dnu and the
    effective temperature 1/(k_B beta)."""
    if sigma_beta is None:
        sigma_beta = sigma_beta_from_pe(pe)
    nu = pe.nu
    n = nu.size
    nu_pos = nu[n // 2:]
    p_pos = pe.values[n // 2:]
    p_neg = pe.values[: n // 2][::-1]
    floor = NOISE_FLOOR_FRAC * pe.values.max()
    usable = (p_pos > floor) & (p_neg > floor)
    if not np.any(usable):
        raise ExtractionError("negative-energy signal absent")
    w = sigma_beta.at(nu_pos) * usable
    wtot = np.trapezoid(w, nu_pos)
    if wtot <= 0:
        raise ExtractionError("weights vanish on the usable pairs")
    ratio = np.zeros(nu_pos.size)
    ratio[usable] = np.log(p_pos[usable] / p_neg[usable]) / (h * nu_pos[usable])
    beta = float(np.trapezoid(w * ratio, nu_pos) / wtot)
    if beta <= 0:
        raise ExtractionError("nonpositive extracted beta")
    return {"beta": beta, "t_eff": 1.0 / (k_B * beta)}


def extract_ic(emap: EmissionMap, pe: PEFunction, beta: float,
               sigma_v: WeightFunction | None = None) -> tuple[float, dict]:
    """Critical current from the integrated Minnhagen identity.

    Returns (ic, diagnostics) where diagnostics reports the in-band
    containment fraction of sigma_f = sigma_V correlated with P.
    """
    f = emap.f_grid.values
    band = (f[0], f[-1])
    if sigma_v is None:
        sigma_v = sigma_v_two_gaussians(pe, band)
    nu = pe.nu
    dnu = pe.grid.df
    sv = sigma_v.at(nu)

    # sigma_f(f) = int P(nu - f) sigma_V(nu) dnu on a wide probe grid
    f_probe = np.arange(band[0] - 10e9, band[1] + 6e9, dnu * 4)
    p_shift = pe.value_at(nu[None, :] - f_probe[:, None])
    sf_probe = p_shift @ sv * dnu
    total = np.sum(np.abs(sf_probe))
    in_band = (f_probe >= band[0]) & (f_probe <= band[1])
    containment = float(np.sum(np.abs(sf_probe[in_band])) / total) if total > 0 else 0.0

    sf = pe.value_at(nu[None, :] - f[:, None]) @ sv * dnu
    col = _column_integrals(emap)
    thermal = 1.0 - np.exp(-beta * h * f)
    numerator = np.trapezoid(sf * col * f / thermal, f)
    denominator = np.trapezoid(sv * pe.values * nu, nu)
    if abs(denominator) < 1e-30:
        raise ExtractionError("sigma_V weighted first moment vanishes")
    ratio = numerator / denominator
    if ratio <= 0:
        raise ExtractionError("negative rate ratio; check weights and beta")
    diagnostics = {"sigma_f_containment": containment}
    if containment < 0.9:
        diagnostics["warning"] = (
            f"sigma_f containment {containment:.3f} below 0.9; "
            "critical current may be biased")
    return 4.0 * e * np.sqrt(ratio), diagnostics


def extract_impedance(emap: EmissionMap, ic: float) -> EnvironmentImpedance:
    """Re Z(f) = (2 h f / Ic^2) int_V gamma(f, nu) dnu."""
    if ic <= 0:
        raise ValueError("Ic must be > 0")
    f = emap.f_grid.values
    re_z = 2.0 * h * f * _column_integrals(emap) / ic**2
    return EnvironmentImpedance(grid=emap.f_grid, re_z=re_z, provenance="extracted")


def run_extraction(emap: EmissionMap,
                   sigma_p: WeightFunction | None = None,
                   sigma_beta: WeightFunction | None = None,
                   sigma_v: WeightFunction | None = None,
                   r_dc: float | None = None) -> ExtractionResult:
    """Full inverse pipeline on one emission map.

    r_dc, when given (it is measured independently in DC transport), feeds
    the low-frequency prior of the default sigma_V construction.
    """
    pe = extract_pe(emap, sigma_p)
    tb = extract_beta(pe, sigma_beta)
    pe.beta = tb["beta"]
    pe.metadata["t_eff_K"] = tb["t_eff"]
    if sigma_v is None:
        f = emap.f_grid.values
        sigma_v = sigma_v_two_gaussians(pe, (f[0], f[-1]), r_dc=r_dc)
    ic, diag = extract_ic(emap, pe, tb["beta"], sigma_v)
    z = extract_impedance(emap, ic)
    diag.update({"pe_coverage": pe.metadata["covered_fraction"]})
    warnings = [v for k, v in diag.items() if k == "warning"]
    return ExtractionResult(pe=pe, beta=tb["beta"], t_eff=tb["t_eff"], ic=ic,
                            z_extracted=z,
                            diagnostics={**diag, "warnings": warnings})
