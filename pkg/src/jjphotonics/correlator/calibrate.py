"""Hot/cold load calibration of the chain and drift compensation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..constants import h, k_B
from .chain import ChainModel, simulate_chain
from .demod import demodulate_envelopes


def s_in_photons(temperature: float, f: float) -> float:
    """Noise power of a matched 50 Ohm load in photon units:
    S(in)/hf = 0.5 coth(hf / 2 k_B T)."""
    if temperature <= 0:
        return 0.5
    return 0.5 / np.tanh(h * f / (2.0 * k_B * temperature))


@dataclass
class CalibrationRecord:
    f_bins: np.ndarray                # absolute RF frequency per bin [Hz]
    gain: np.ndarray                  # (2, n_bins) effective power gain
    noise_photons: np.ndarray         # (2, n_bins)
    t_hot: float
    t_cold: float


def _spectra(chain: ChainModel, temperature: float, n_blocks: int,
             rng: np.random.Generator):
    """Per-channel envelope power spectra with a load at `temperature`
    switched straight into the amplifiers. Returns (psd0, psd1) in photon
    units per bin (fftshifted)."""
    n = chain.block_size
    n_samples = 2 * n * n_blocks
    excess = max(s_in_photons(temperature, chain.f0) - 0.5, 0.0)
    if excess > 0:
        load = (rng.standard_normal(n_samples) + 1j * rng.standard_normal(n_samples)) \
            * np.sqrt(excess / chain.dt / 2.0)
    else:
        load = None
    v0, v1 = simulate_chain(load, chain, n_samples, rng=rng, calibration=True)
    env = demodulate_envelopes(v0, v1, chain)
    out = []
    for s in (env.s0, env.s1):
        blocks = s.reshape(n_blocks, n)
        f = np.fft.fft(blocks, axis=1)
        psd = (np.abs(f) ** 2).mean(axis=0) * env.sample_interval / n
        out.append(np.fft.fftshift(psd))
    return out


def calibrate(chain: ChainModel, t_hot: float, t_cold: float,
              n_blocks: int = 20000, seed: int = 0) -> CalibrationRecord:
    """Extract per-bin gain and noise photon number from two load
    temperatures:

        g = (S_hot - S_cold) / (S_in(T_hot) - S_in(T_cold))
        N = S_cold / g - S_in(T_cold)

    The contrast must be resolvable: t_hot > t_cold is required and a tiny
    temperature difference is flagged.
    """
    if t_hot <= t_cold:
        raise ValueError("t_hot must exceed t_cold")
    rng = np.random.default_rng(seed)
    hot = _spectra(chain, t_hot, n_blocks, rng)
    cold = _spectra(chain, t_cold, n_blocks, rng)
    n = chain.block_size
    f_env = np.fft.fftshift(np.fft.fftfreq(n, d=chain.envelope_interval))
    f_rf = chain.f0 + f_env
    s_hot = np.array([s_in_photons(t_hot, f) for f in f_rf])
    s_cold = np.array([s_in_photons(t_cold, f) for f in f_rf])
    contrast = s_hot - s_cold
    if np.min(contrast) < 0.05:
        raise ValueError("load temperatures too close for a stable calibration")
    gain = np.empty((2, n))
    noise = np.empty((2, n))
    for ch in range(2):
        gain[ch] = (hot[ch] - cold[ch]) / contrast
        noise[ch] = cold[ch] / gain[ch] - s_cold
    return CalibrationRecord(f_bins=f_rf, gain=gain, noise_photons=noise,
                             t_hot=t_hot, t_cold=t_cold)


def drift_compensate(g1_series, s_off_series, noise_reference: float,
                     tau: np.ndarray, fit_window: float = 2.5e-9):
    """Gain and phase drift correction of a series of G1 measurements.

    Each measurement i carries its off-state power s_off_i; the
    instantaneous gain g_inst = s_off_i / N renormalizes the magnitudes.
    The phase delta_i + 2 pi Delta f_i tau is fitted on the lags within
    fit_window (|tau| <= 2.5 ns covers {0, +-1, +-2 ns} at 1 ns sampling)
    and removed, aligning the corrected G1 on the real axis.

    Returns (corrected array, g_inst array).
    """
    g1_series = np.asarray(g1_series, dtype=complex)
    s_off = np.asarray(s_off_series, dtype=float)
    if g1_series.ndim != 2 or g1_series.shape[0] != s_off.size:
        raise ValueError("series shape mismatch")
    g_inst = s_off / noise_reference
    corrected = g1_series / g_inst[:, None]
    sel = np.abs(tau) <= fit_window
    tsel = tau[sel]
    out = np.empty_like(corrected)
    for i, row in enumerate(corrected):
        w = np.abs(row[sel])
        ang = np.angle(row[sel])
        # weighted linear fit ang ~ delta + 2 pi df tau
        a = np.vstack([np.ones(tsel.size), 2.0 * np.pi * tsel]).T
        wa = a * w[:, None]
        coef, *_ = np.linalg.lstsq(wa, ang * w, rcond=None)
        delta, dfreq = coef
        out[i] = row * np.exp(-1j * (delta + 2.0 * np.pi * dfreq * tau))
    return out, g_inst
