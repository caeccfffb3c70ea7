"""Stochastic simulation of the photon emission process.

The instantaneous tunneling rate follows the island charge: each emission
adds one Cooper pair, shifting the effective bias by 2 E_C / h; the charge
relaxes exponentially with the RC time. The bias-to-rate law is a Gaussian
resonance window of width max(k_B T_eff / h, kappa / 2 pi). A two-state
latch can trap the source dark after an emission until the drive's
frustration pulse resets it.

Events are generated by thinning against the global maximum rate; the
per-candidate loop runs in the compiled kernel when available, with a
bit-identical pure-Python fallback.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .._kernels import thinning_chunk
from ..constants import h, k_B

CHUNK = 65536
DRIVE_SAMPLES = 4096


@dataclass
class DriveParams:
    """Periodic Gaussian flux pulses toward frustration.

    Flux is in units of the flux quantum: it sits at base_flux_frac and is
    pulsed to pulse_flux_frac with the given FWHM every period. The pulse is
    centered at half the period.
    """

    period: float = 6e-9
    fwhm: float = 1.5e-9
    base_flux_frac: float = 0.30
    pulse_flux_frac: float = 0.50

    def ic_scale(self, t) -> np.ndarray:
        """Ic_eff(t) normalized to its value at the base flux."""
        t = np.asarray(t, dtype=float)
        sigma = self.fwhm / (2.0 * np.sqrt(2.0 * np.log(2.0)))
        x = (t % self.period) - 0.5 * self.period
        phi = self.base_flux_frac + (self.pulse_flux_frac - self.base_flux_frac) * (
            np.exp(-0.5 * (x / sigma) ** 2)
            + np.exp(-0.5 * ((x + self.period) / sigma) ** 2)
            + np.exp(-0.5 * ((x - self.period) / sigma) ** 2))
        base = abs(np.cos(np.pi * self.base_flux_frac))
        return np.abs(np.cos(np.pi * phi)) / base


@dataclass
class LatchParams:
    enabled: bool = False
    enter_ic_frac: float = 0.0       # enter dark on emission when the drive
                                     # scale is at least this fraction
    exit_ic_frac: float = 0.3        # frustration threshold on the drive scale
    exit_on_frustration: bool = True


@dataclass
class SourceParams:
    base_rate: float                 # Gamma_0 at the nominal bias [1/s]
    rc_time: float = 1.64e-9
    charging_energy: float = 9.05e-25   # E_C [J] (~h * 1.37 GHz)
    bias_detuning: float = 0.0       # nu_J - (f_0 + E_C/h) [Hz]
    kappa: float = 1.0 / 0.28e-9     # resonator energy decay [1/s]
    t_eff: float = 0.021
    drive: DriveParams | None = None
    latch: LatchParams = field(default_factory=LatchParams)
    charge_reset: bool = False       # validation mode: q := 1 on emission,
                                     # making the process exactly renewal

    def window_sigma(self) -> float:
        """Width of the thermally broadened resonance window [Hz]."""
        return max(k_B * self.t_eff / h, self.kappa / (2.0 * np.pi))


@dataclass
class EventRecord:
    times: np.ndarray                # strictly increasing emission times [s]
    charge_after: np.ndarray         # island charge right after each emission
    latch_transitions: list          # [(time, "dark"|"bright"), ...]
    duration: float
    seed: int
    rc_time: float

    def charge_at(self, t) -> np.ndarray:
        """Island charge q(t), decaying exponentially between emissions."""
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.times, t, side="right") - 1
        q = np.zeros_like(t)
        has = idx >= 0
        q[has] = self.charge_after[idx[has]] * np.exp(
            -(t[has] - self.times[idx[has]]) / self.rc_time)
        return q

    def write_csv(self, path):
        states = np.full(self.times.size, "bright", dtype=object)
        ti = 0
        current = "bright"
        trans = sorted(self.latch_transitions)
        for k, t in enumerate(self.times):
            while ti < len(trans) and trans[ti][0] <= t:
                current = trans[ti][1]
                ti += 1
            states[k] = current
        with open(path, "w") as fh:
            fh.write("time_s,charge_after,latch_state\n")
            for t, q, s in zip(self.times, self.charge_after, states):
                fh.write(f"{t:.12e},{q:.9f},{s}\n")


def _frustration_onset(drive: DriveParams, exit_frac: float) -> float:
    """Time within the period of the first downward crossing of the drive
    scale below the frustration threshold."""
    t = np.linspace(0.0, drive.period, DRIVE_SAMPLES, endpoint=False)
    s = drive.ic_scale(t)
    below = s < exit_frac
    if not np.any(below):
        raise ValueError(
            f"drive never frustrates below exit_ic_frac={exit_frac}; "
            "the latch would never reset")
    return float(t[np.argmax(below)])


def simulate_source(p: SourceParams, duration: float, seed: int) -> EventRecord:
    """Draw one realization of the emission process.

    Identical (params, duration, seed) produce identical records regardless
    of which kernel implementation is active.
    """
    if duration <= 0:
        raise ValueError("duration must be > 0")
    rng = np.random.default_rng(seed)
    sigma = p.window_sigma()
    inv2s2 = 1.0 / (2.0 * sigma * sigma)
    # rate at the operating point is base_rate; the window peak sits at the
    # resonance, so the thinning bound divides out the detuning suppression
    base = p.base_rate * np.exp(p.bias_detuning**2 * inv2s2)

    if p.drive is not None:
        tgrid = np.linspace(0.0, p.drive.period, DRIVE_SAMPLES, endpoint=False)
        drive_scale = np.ascontiguousarray(p.drive.ic_scale(tgrid))
        period = p.drive.period
        dt_drive = period / DRIVE_SAMPLES
        s_max = float(drive_scale.max())
        frus_onset = (_frustration_onset(p.drive, p.latch.exit_ic_frac)
                      if p.latch.enabled and p.latch.exit_on_frustration else 0.0)
    else:
        drive_scale = np.empty(0)
        period = duration
        dt_drive = 1.0
        s_max = 1.0
        frus_onset = 0.0
        if p.latch.enabled and p.latch.exit_on_frustration:
            raise ValueError("latch exit-on-frustration requires a drive")

    lam_max = base * s_max**2
    shift = 2.0 * p.charging_energy / h
    params = (lam_max, base, p.rc_time, shift, p.bias_detuning, inv2s2,
              duration, period, dt_drive, int(p.latch.enabled),
              p.latch.enter_ic_frac, frus_onset,
              int(p.latch.exit_on_frustration), int(p.charge_reset))

    state = (0.0, 0.0, 0, 0.0)
    times = []
    charges = []
    out_t = np.empty(CHUNK)
    out_q = np.empty(CHUNK)
    while True:
        waits = rng.standard_exponential(CHUNK)
        accepts = rng.random(CHUNK)
        n, consumed, done, state = thinning_chunk(
            waits, accepts, state, params, drive_scale, out_t, out_q)
        if n:
            times.append(out_t[:n].copy())
            charges.append(out_q[:n].copy())
        if done:
            break
    times = np.concatenate(times) if times else np.empty(0)
    charges = np.concatenate(charges) if charges else np.empty(0)

    transitions = []
    if p.latch.enabled:
        next_unlatch = -np.inf
        dark = False
        for t in times:
            if dark and p.latch.exit_on_frustration and t >= next_unlatch:
                transitions.append((next_unlatch, "bright"))
                dark = False
            if p.drive is not None:
                s = float(p.drive.ic_scale(t))
            else:
                s = 1.0
            if s >= p.latch.enter_ic_frac:
                transitions.append((float(t), "dark"))
                dark = True
                if p.latch.exit_on_frustration:
                    k = np.floor((t - frus_onset) / period)
                    next_unlatch = (k + 1.0) * period + frus_onset
        if dark and p.latch.exit_on_frustration and next_unlatch <= duration:
            transitions.append((float(next_unlatch), "bright"))

    return EventRecord(times=times, charge_after=charges,
                       latch_transitions=transitions, duration=duration,
                       seed=seed, rc_time=p.rc_time)


def rate_profile_after_event(p: SourceParams, tau, from_charge: float = 1.0) -> np.ndarray:
    """Conditional rate a time tau after an emission left charge
    from_charge on the island (no drive, no latch): the renewal-oracle
    input matching simulate_source."""
    tau = np.asarray(tau, dtype=float)
    sigma = p.window_sigma()
    q = from_charge * np.exp(-tau / p.rc_time)
    d = p.bias_detuning - q * 2.0 * p.charging_energy / h
    return p.base_rate * np.exp((p.bias_detuning**2 - d**2) / (2.0 * sigma**2))


def equilibrium_start_charge(p: SourceParams, horizon_rc: float = 40.0,
                             n_iter: int = 6) -> float:
    """Self-consistent post-emission charge 1 + E[residual at the next event].

    The simulated charge accumulates across events, so the renewal picture
    is most faithful when its profile starts from this equilibrium value
    rather than exactly 1. Pure closed-form fixed point on the parameters.
    """
    dt = p.rc_time / 2000.0
    tau = (np.arange(int(horizon_rc * p.rc_time / dt)) + 0.5) * dt
    q0 = 1.0
    for _ in range(n_iter):
        lam = rate_profile_after_event(p, tau, from_charge=q0)
        f = lam * np.exp(-(np.cumsum(lam) - 0.5 * lam) * dt)
        mass = f.sum() * dt
        if mass <= 0:
            return 1.0
        q_res = float(np.sum(q0 * np.exp(-tau / p.rc_time) * f) * dt / mass)
        q0 = 1.0 + q_res
    return q0
