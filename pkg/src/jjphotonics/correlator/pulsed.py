"""Time-resolved correlators for pulsed operation.

With a drive of period P envelope samples and block sizes chosen as a
multiple of P, every on-block starts at drive phase zero, so correlators
can be resolved in the time t relative to the pulse clock by striding
within blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainModel
from .correlate import block_statistics
from .demod import EnvelopeRecord


@dataclass
class PulsedCorrelationResult:
    tau: np.ndarray                   # lag grid [s], nonnegative
    g1_t0: np.ndarray                 # G1(t=0, tau)
    sigma_g1_t0: np.ndarray
    g2_t0: np.ndarray                 # unnormalized G2(t=0, tau)
    sigma_g2_t0: np.ndarray
    g2_norm: np.ndarray               # g2(0, tau) where the rate allows
    sigma_g2_norm: np.ndarray
    rate_vs_phase: np.ndarray         # G1(t, 0) over one period
    phase0: int                       # sample index of the reference phase


def pulsed_correlators(env: EnvelopeRecord, chain: ChainModel,
                       period_samples: int, max_lag: int,
                       n_groups: int = 16,
                       phase0: int | None = None) -> PulsedCorrelationResult:
    """G1(0, tau) and assembled G2(0, tau) for a periodic drive.

    The reference phase t = 0 defaults to the phase of maximum emission
    rate. Noise terms are stationary and built from the off blocks.
    """
    n = env.block_size
    if n % period_samples != 0:
        raise ValueError("block size must be a multiple of the drive period")
    root_g = np.sqrt(chain.g0 * chain.g1)
    gg = chain.g0 * chain.g1

    n_blocks = env.n_blocks
    s0 = env.s0[: n_blocks * n].reshape(n_blocks, n)
    s1 = env.s1[: n_blocks * n].reshape(n_blocks, n)
    on = env.block_tags == 1
    off = env.block_tags == 0
    u = np.conj(s0) * s1

    # emission rate versus drive phase from on/off difference
    per = np.arange(n) % period_samples
    rate_phase = np.empty(period_samples)
    for ph in range(period_samples):
        cols = per == ph
        on_mean = np.real(u[on][:, cols]).mean()
        off_mean = np.real(u[off][:, cols]).mean() if np.any(off) else 0.0
        rate_phase[ph] = 2.0 * (on_mean - off_mean) / root_g
    if phase0 is None:
        phase0 = int(np.argmax(rate_phase))

    lags = np.arange(max_lag + 1)
    starts = np.arange(phase0, n - max_lag, period_samples)
    g1_groups, g2_groups = [], []
    groups = np.arange(n_blocks) % n_groups
    # stationary noise cross-correlator from off blocks (lag-resolved)
    g1n = np.zeros(max_lag + 1, dtype=complex)
    if np.any(off):
        s0_off = s0[off]
        s1_off = s1[off]
        for j in lags:
            g1n[j] = np.mean(np.conj(s0_off[:, : n - j]) * s1_off[:, j:]) / root_g
    g2n = np.zeros(max_lag + 1, dtype=complex)
    if np.any(off):
        u_off = u[off]
        for j in lags:
            g2n[j] = np.mean(u_off[:, starts] * u_off[:, starts + j])

    for g in range(n_groups):
        sel = on & (groups == g)
        if not np.any(sel):
            continue
        s0g, s1g, ug = s0[sel], s1[sel], u[sel]
        g1_row = np.empty(max_lag + 1, dtype=complex)
        g2_row = np.empty(max_lag + 1, dtype=complex)
        for j in lags:
            g1_row[j] = np.mean(np.conj(s0g[:, starts]) * s1g[:, starts + j])
            g2_row[j] = np.mean(ug[:, starts] * ug[:, starts + j])
        g1_sig = 2.0 * (g1_row / root_g - g1n)
        # assembled G2(0, tau): subtract noise cross terms and the off-state
        # second-order correlator, as in the stationary bracket
        rate_t = np.real(g1_sig[0])
        rate_t_tau = np.interp((phase0 + lags) % period_samples,
                               np.arange(period_samples), rate_phase)
        g2_row = 4.0 * (g2_row - g2n) / gg
        g2_row -= 4.0 * np.real(g1_sig * g1n)
        g2_row -= 2.0 * np.real((rate_t + rate_t_tau) * g1n[0])
        g1_groups.append(g1_sig)
        g2_groups.append(np.real(g2_row))
    g1_arr = np.array(g1_groups)
    g2_arr = np.array(g2_groups)
    g1_mean, g1_sigma = block_statistics(g1_arr)
    g2_mean, g2_sigma = block_statistics(g2_arr)

    # normalization per main-text definition: G1(t,0) G1(t+tau,0)
    rate0 = rate_phase[phase0]
    rate_tau = np.interp((phase0 + lags) % period_samples,
                         np.arange(period_samples), rate_phase)
    denom = rate0 * rate_tau
    floor = 0.05 * rate0 * rate0
    ok = denom > floor
    g2_norm = np.where(ok, g2_mean / np.where(ok, denom, 1.0), np.nan)
    sig_norm = np.where(ok, g2_sigma / np.where(ok, denom, 1.0), np.nan)

    return PulsedCorrelationResult(
        tau=lags * env.sample_interval,
        g1_t0=g1_mean, sigma_g1_t0=np.abs(g1_sigma),
        g2_t0=g2_mean, sigma_g2_t0=g2_sigma,
        g2_norm=g2_norm, sigma_g2_norm=sig_norm,
        rate_vs_phase=rate_phase, phase0=phase0)
