"""Six-parameter circuit fit of an emission map by damped least squares."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from ..constants import e, h
from ..network.models import PAPER_F_DESIGN, paper_circuit_impedance
from ..pe.grids import EmissionMap, EnvironmentImpedance, FrequencyGrid, JunctionParams
from ..pe.forward import emission_rate_density
from ..pe.solver import MinnhagenOptions, solve_minnhagen

PARAM_NAMES = ("c", "l_p", "z0", "z1", "t", "ic")

#: physically motivated box around the device values
BOUNDS = {
    "c": (10e-15, 200e-15),
    "l_p": (1e-15, 500e-12),
    "z0": (5.0, 300.0),
    "z1": (5.0, 300.0),
    "t": (10e-3, 100e-3),
    "ic": (0.05e-9, 5e-9),
}

_SCALES = {"c": 1e-15, "l_p": 1e-12, "z0": 1.0, "z1": 1.0, "t": 1e-3, "ic": 1e-9}


@dataclass
class FitOptions:
    max_nfev: int = 400
    ftol: float = 1e-10
    xtol: float = 1e-10
    diff_step: float = 1e-4
    pe_half_span: float = 26e9
    f_design: float = PAPER_F_DESIGN
    minnhagen: MinnhagenOptions = field(default_factory=MinnhagenOptions)


@dataclass
class CircuitFit:
    params: dict
    residual_norm: float
    iterations: int
    converged: bool
    fixed_r: float

    @property
    def ec(self) -> float:
        """Island charging energy (2e)^2 / 2C [J], derived, not fitted."""
        return (2.0 * e) ** 2 / (2.0 * self.params["c"])

    @property
    def ec_ghz(self) -> float:
        return self.ec / h / 1e9


def forward_map(params: dict, fixed_r: float, f_grid: FrequencyGrid,
                vj_grid: FrequencyGrid, opts: FitOptions | None = None) -> EmissionMap:
    """Emission map predicted by the circuit model at the given parameters."""
    opts = opts or FitOptions()
    df_p = vj_grid.df
    z = EnvironmentImpedance.from_function(
        lambda f: paper_circuit_impedance(
            f, r=fixed_r, c=params["c"], l_p=params["l_p"],
            z0=params["z0"], z1=params["z1"], f_design=opts.f_design),
        opts.pe_half_span + 2 * df_p, df_p / 2)
    grid = FrequencyGrid.symmetric(opts.pe_half_span, df_p)
    pe = solve_minnhagen(z, params["t"], grid, opts.minnhagen)
    return emission_rate_density(pe, z, JunctionParams(ic=params["ic"]), f_grid, vj_grid)


def fit_circuit(emap: EmissionMap, fixed_r: float, init: dict,
                opts: FitOptions | None = None) -> CircuitFit:
    """Least-squares fit of {C, L_p, Z0, Z1, T, Ic} with R held fixed.

    Trust-region damped least squares with a numerically differenced
    Jacobian inside the declared parameter box; returns best-so-far values
    with a convergence flag if the iteration budget runs out.
    """
    if fixed_r <= 0:
        raise ValueError("fixed R must be > 0")
    opts = opts or FitOptions()
    for name in PARAM_NAMES:
        lo, hi = BOUNDS[name]
        if not lo <= init[name] <= hi:
            raise ValueError(f"initial {name}={init[name]:.4g} outside bounds [{lo:.4g}, {hi:.4g}]")

    scale_vec = np.array([_SCALES[n] for n in PARAM_NAMES])
    x0 = np.array([init[n] for n in PARAM_NAMES]) / scale_vec
    lo = np.array([BOUNDS[n][0] for n in PARAM_NAMES]) / scale_vec
    hi = np.array([BOUNDS[n][1] for n in PARAM_NAMES]) / scale_vec
    data = emap.gamma
    norm = np.max(np.abs(data))
    if norm <= 0:
        raise ValueError("empty emission map")

    def residuals(x):
        p = dict(zip(PARAM_NAMES, x * scale_vec))
        model = forward_map(p, fixed_r, emap.f_grid, emap.vj_grid, opts)
        return ((model.gamma - data) / norm).ravel()

    res = least_squares(residuals, x0, bounds=(lo, hi), method="trf",
                        diff_step=opts.diff_step, max_nfev=opts.max_nfev,
                        ftol=opts.ftol, xtol=opts.xtol)
    params = dict(zip(PARAM_NAMES, res.x * scale_vec))
    return CircuitFit(params=params, residual_norm=float(np.linalg.norm(res.fun)),
                      iterations=int(res.nfev), converged=bool(res.status > 0),
                      fixed_r=fixed_r)
