"""Independent test oracles.

These deliberately avoid the code paths they check: the probability density
comes from Fourier-transforming the exponentiated phase-correlation
integral, and the predicted chain-level g2 comes from closed-form packet
overlap integrals over the renewal pair density.
"""

import numpy as np
from scipy.signal import fftconvolve

from jjphotonics.constants import R_Q, h, k_B
from jjphotonics.correlator import ChainModel, demodulate_envelopes
from jjphotonics.dynamics import (
    equilibrium_start_charge,
    events_to_envelope,
    rate_profile_after_event,
    renewal_g2_oracle,
)


def characteristic_function_pe(re_z_func, temperature, half_span, df,
                               f_extent=None, t_chunk=256, span_factor=2):
    """P(nu) via the phase-correlation route: P = FT[exp(J(t))] with

        J(t) = int_0^inf df (2 ReZ/(f R_Q)) [coth(beta h f/2)(cos 2pi f t - 1)
                                             - i sin 2pi f t].

    The transform runs on a span_factor-wider grid so multi-photon peaks
    beyond the requested span do not alias back, then is cropped to the
    requested half-offset grid and renormalized over it (the solver's
    truncated-support convention).

    Returns (nu, P) on the same half-offset grid the solver uses.
    """
    beta = 1.0 / (k_B * temperature)
    n_req = 2 * int(round(half_span / df))
    n = span_factor * n_req
    dt = 1.0 / (n * df)
    t = (np.arange(n) - n / 2) * dt
    f_extent = f_extent or half_span
    dfj = df / 4.0
    fj = np.arange(dfj / 2, f_extent, dfj)
    a = 2.0 * np.asarray(re_z_func(fj), dtype=float) / (R_Q * fj)
    coth = 1.0 / np.tanh(beta * h * fj / 2.0)
    j_t = np.zeros(n, dtype=complex)
    for s in range(0, n, t_chunk):
        ts = t[s:s + t_chunk][:, None]
        ph = 2.0 * np.pi * fj[None, :] * ts
        j_t[s:s + t_chunk] = np.sum(
            a * (coth * (np.cos(ph) - 1.0) - 1j * np.sin(ph)) * dfj, axis=1)
    phi = np.exp(j_t)
    c = 0.5 - n / 2
    l = np.arange(n)
    nu = (np.arange(n) + c) * df
    p = dt * np.exp(-1j * np.pi * nu * n * dt) * n * np.fft.ifft(
        phi * np.exp(2j * np.pi * c * l / n))
    lo = (n - n_req) // 2
    nu = nu[lo: lo + n_req]
    p = np.clip(p.real[lo: lo + n_req], 0.0, None)
    return nu, p / (p.sum() * df)


def filtered_packet(kappa: float, chain: ChainModel, dtf: float,
                    span: float = 80e-9):
    """Continuous-time single-photon packet as seen after demodulation.

    The discrete demodulation of a packet launched at sub-sample offset
    delta samples one continuous function at (m Delta - delta); sweeping
    delta over one envelope interval reconstructs it exactly.
    """
    delta_env = chain.envelope_interval
    n_off = int(round(delta_env / dtf))
    ts, vals = [], []
    adc_per = 2 * chain.block_size
    for k in range(n_off):
        delta = k * dtf
        env = events_to_envelope(np.array([delta]), kappa, chain.dt, span,
                                 seed=0, random_phase=False)
        n_adc = adc_per * int(np.ceil(env.size / adc_per))
        sig = np.zeros(n_adc, dtype=complex)
        sig[:env.size] = env
        n = np.arange(n_adc)
        even = n % 2 == 0
        sign = np.where(even, (-1.0) ** (n // 2), (-1.0) ** ((n - 1) // 2))
        v = np.where(even, sig.real, sig.imag) * sign
        rec = demodulate_envelopes(v, v, chain)
        m = np.arange(rec.s0.size)
        ts.append(m * delta_env - delta)
        vals.append(np.real(rec.s0))
    ts = np.concatenate(ts)
    vals = np.concatenate(vals)
    order = np.argsort(ts)
    grid = np.arange(ts[order][0], span - 2 * delta_env, dtf)
    return grid, np.interp(grid, ts[order], vals[order])


def packet_self_rate(p_packet, dtf: float) -> float:
    """Effective self-coherence rate 2 int |p|^4 / int |p|^2 of a packet."""
    w = np.abs(p_packet) ** 2
    return 2.0 * float(np.sum(w**2) * dtf / (np.sum(w) * dtf))


def predicted_chain_g2(source, kappa, chain, max_lag, dtf=0.05e-9,
                       horizon=250e-9):
    """Predicted assembled g2(tau) for an antibunched pulse train measured
    through the chain with random per-packet phases.

    Builds the renewal pair density from the equilibrium-charge profile,
    overlaps it with the chain-filtered packet (intensity and coherence
    pairings plus the single-packet self term) and applies the same
    self-coherence subtraction the assembly performs.

    Returns (lags_seconds, g2_predicted, steady_rate, self_rate).
    """
    delta = chain.envelope_interval
    tau_o = (np.arange(int(horizon / dtf)) + 0.5) * dtf
    q0 = equilibrium_start_charge(source)
    lam = rate_profile_after_event(source, tau_o, from_charge=q0)
    to, g2o, rate = renewal_g2_oracle(lam, dtf)

    grid, p = filtered_packet(kappa, chain, dtf)
    w = np.abs(p) ** 2
    self_rate = packet_self_rate(p, dtf)

    ww = fftconvolve(w, w[::-1]) * dtf
    s_ww = (np.arange(ww.size) - (w.size - 1)) * dtf
    rho = fftconvolve(p, p[::-1]) * dtf
    lags = np.arange(max_lag + 1) * delta

    def pair_density(s):
        return rate * rate * np.interp(np.abs(s), to, g2o)

    c1 = np.array([np.sum(pair_density(l - s_ww) * ww) * dtf for l in lags])
    c2 = np.empty(lags.size)
    for k, l in enumerate(lags):
        shift = int(round(l / dtf))
        if shift >= p.size:
            c2[k] = 0.0
            continue
        c = p[: p.size - shift] * p[shift:]
        cc = fftconvolve(c, c[::-1]) * dtf
        s_cc = (np.arange(cc.size) - (c.size - 1)) * dtf
        c2[k] = np.sum(pair_density(s_cc) * cc) * dtf
    self_term = rate * np.interp(lags, s_ww, ww)
    g1 = rate * np.interp(lags, s_ww, rho)
    correction = 0.5 * self_rate * g1**2 / g1[0]
    return lags, (c1 + c2 + self_term - correction) / g1[0] ** 2, rate, self_rate
