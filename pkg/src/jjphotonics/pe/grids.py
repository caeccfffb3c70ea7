"""Domain types shared by the forward and inverse pipelines."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..constants import R_Q, e, h, k_B


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform frequency grid [Hz].

    Probability grids are symmetric about zero with points offset by df/2,
    so no sample sits exactly at zero and the grid is closed under negation.
    """

    f_min: float
    f_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 2 or self.f_max <= self.f_min:
            raise ValueError("need n_points >= 2 and f_max > f_min")

    @property
    def df(self) -> float:
        return (self.f_max - self.f_min) / (self.n_points - 1)

    @property
    def values(self) -> np.ndarray:
        return self.f_min + self.df * np.arange(self.n_points)

    @classmethod
    def linspace(cls, f_min: float, f_max: float, n: int) -> "FrequencyGrid":
        return cls(f_min=f_min, f_max=f_max, n_points=n)

    @classmethod
    def step(cls, f_min: float, f_max: float, df: float) -> "FrequencyGrid":
        """Grid from f_min with spacing df, ending at or just past f_max."""
        n = int(np.ceil((f_max - f_min) / df - 1e-9)) + 1
        return cls(f_min=f_min, f_max=f_min + df * (n - 1), n_points=n)

    @classmethod
    def symmetric(cls, half_span: float, df: float) -> "FrequencyGrid":
        """Zero-symmetric grid with points at (k + 1/2 - n/2) df."""
        half_n = int(round(half_span / df))
        n = 2 * half_n
        lo = (0.5 - n / 2) * df
        hi = (n - 0.5 - n / 2) * df
        return cls(f_min=lo, f_max=hi, n_points=n)

    @property
    def is_symmetric(self) -> bool:
        v = self.values
        return self.n_points % 2 == 0 and abs(v[0] + v[-1]) < 1e-6 * self.df


@dataclass
class PEFunction:
    """Probability density P(nu) [1/Hz] on a symmetric grid, with its beta."""

    grid: FrequencyGrid
    values: np.ndarray
    beta: float                      # 1/(k_B T) [1/J]
    metadata: dict = field(default_factory=dict)

    @property
    def nu(self) -> np.ndarray:
        return self.grid.values

    def value_at(self, nu) -> np.ndarray:
        """Linear interpolation; zero outside the grid."""
        return np.interp(np.asarray(nu, dtype=float), self.nu, self.values,
                         left=0.0, right=0.0)

    def norm_residual(self) -> float:
        return abs(float(np.sum(self.values) * self.grid.df) - 1.0)

    def balance_residual(self, floor_frac: float = 1e-12) -> float:
        """Max relative deviation of P(-nu) from exp(-beta h nu) P(nu)."""
        v = self.values
        n = v.size
        pos = v[n // 2:]
        neg = v[: n // 2][::-1]
        nu_pos = self.nu[n // 2:]
        expected = np.exp(-self.beta * h * nu_pos) * pos
        floor = floor_frac * v.max()
        ok = (expected > floor) & (neg > floor)
        if not np.any(ok):
            return 0.0
        return float(np.max(np.abs(neg[ok] - expected[ok]) / expected[ok]))

    def write_csv(self, path, sidecar: bool = True):
        with open(path, "w") as fh:
            fh.write("nu_hz,p_per_hz\n")
            for nu, p in zip(self.nu, self.values):
                fh.write(f"{nu:.9e},{p:.9e}\n")
        if sidecar:
            meta = dict(self.metadata)
            meta["beta_per_joule"] = self.beta
            meta["t_eff_kelvin"] = 1.0 / (k_B * self.beta)
            with open(str(path) + ".json", "w") as fh:
                json.dump(meta, fh, indent=2)


@dataclass
class EnvironmentImpedance:
    """Re Z(f) on a nonnegative frequency grid, extended evenly to f < 0."""

    grid: FrequencyGrid
    re_z: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        self.re_z = np.asarray(self.re_z, dtype=float)
        if self.grid.f_min < 0:
            raise ValueError("impedance grid must start at f >= 0")
        if self.re_z.shape != (self.grid.n_points,):
            raise ValueError("re_z shape mismatch")

    def at(self, f) -> np.ndarray:
        """Even-extended linear interpolation; frequencies beyond the grid
        are an error (the environment must be tabulated there)."""
        fa = np.abs(np.asarray(f, dtype=float))
        if np.any(fa > self.grid.f_max * (1 + 1e-9) + self.grid.df):
            raise ValueError(
                f"impedance requested at {fa.max():.4g} Hz beyond tabulated "
                f"{self.grid.f_max:.4g} Hz")
        return np.interp(fa, self.grid.values, self.re_z)

    @classmethod
    def from_samples(cls, f, re_z, provenance="measured") -> "EnvironmentImpedance":
        f = np.asarray(f, dtype=float)
        grid = FrequencyGrid(f_min=float(f[0]), f_max=float(f[-1]), n_points=f.size)
        return cls(grid=grid, re_z=np.asarray(re_z, dtype=float), provenance=provenance)

    @classmethod
    def from_function(cls, zfunc, f_max: float, df: float,
                      provenance="circuit") -> "EnvironmentImpedance":
        """Tabulate Re z(f) of a complex-impedance callable on [0, f_max].

        Isolated non-finite samples (exact transmission-line poles) are
        repaired by linear interpolation from their neighbours; small
        negative excursions from rounding are clipped to zero.
        """
        grid = FrequencyGrid.step(0.0, f_max, df)
        f = grid.values.copy()
        f[0] = max(f[0], df * 1e-6)  # evaluate the DC sample just off zero
        z = np.asarray(zfunc(f))
        re = np.real(z).astype(float)
        bad = ~np.isfinite(re)
        if np.any(bad):
            if bad.sum() > 0.01 * re.size:
                raise ValueError("impedance evaluation failed on >1% of the grid")
            good = ~bad
            re[bad] = np.interp(grid.values[bad], grid.values[good], re[good])
        re = np.where(re < 0, 0.0, re)
        return cls(grid=grid, re_z=re, provenance=provenance)

    def write_csv(self, path, im_z=None):
        im = np.zeros_like(self.re_z) if im_z is None else np.asarray(im_z)
        with open(path, "w") as fh:
            fh.write("f_hz,re_z_ohm,im_z_ohm\n")
            for f, r, i in zip(self.grid.values, self.re_z, im):
                fh.write(f"{f:.9e},{r:.9e},{i:.9e}\n")


@dataclass(frozen=True)
class JunctionParams:
    """Critical current plus the fixed constants entering the rate formulas."""

    ic: float

    def __post_init__(self):
        if self.ic <= 0:
            raise ValueError("Ic must be > 0")

    e: float = e
    h: float = h
    k_B: float = k_B
    r_q: float = R_Q


@dataclass
class EmissionMap:
    """Photon rate density gamma(f, nu_J) [photons/s/Hz], gamma[i_vj, i_f]."""

    f_grid: FrequencyGrid
    vj_grid: FrequencyGrid
    gamma: np.ndarray
    ic: float
    temperature: float

    def __post_init__(self):
        self.gamma = np.asarray(self.gamma, dtype=float)
        expected = (self.vj_grid.n_points, self.f_grid.n_points)
        if self.gamma.shape != expected:
            raise ValueError(f"gamma shape {self.gamma.shape} != {expected}")

    def argmax(self):
        """(f, vj) of the global maximum."""
        i, j = np.unravel_index(np.argmax(self.gamma), self.gamma.shape)
        return self.f_grid.values[j], self.vj_grid.values[i]

    def write_csv(self, path):
        f = self.f_grid.values
        with open(path, "w") as fh:
            fh.write("vj_hz," + ",".join(f"{x:.9e}" for x in f) + "\n")
            for vj, row in zip(self.vj_grid.values, self.gamma):
                fh.write(f"{vj:.9e}," + ",".join(f"{g:.9e}" for g in row) + "\n")

    @classmethod
    def read_csv(cls, path, ic=float("nan"), temperature=float("nan")) -> "EmissionMap":
        with open(path) as fh:
            header = fh.readline().strip().split(",")
            f = np.array([float(x) for x in header[1:]])
            rows, vjs = [], []
            for line in fh:
                parts = line.strip().split(",")
                if not parts or parts == [""]:
                    continue
                vjs.append(float(parts[0]))
                rows.append([float(x) for x in parts[1:]])
        f_grid = FrequencyGrid(f_min=float(f[0]), f_max=float(f[-1]), n_points=f.size)
        vj = np.array(vjs)
        vj_grid = FrequencyGrid(f_min=float(vj[0]), f_max=float(vj[-1]), n_points=vj.size)
        return cls(f_grid=f_grid, vj_grid=vj_grid, gamma=np.array(rows),
                   ic=ic, temperature=temperature)
