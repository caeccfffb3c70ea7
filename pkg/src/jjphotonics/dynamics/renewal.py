"""Analytic renewal-process oracle for the dead-time point process."""

from __future__ import annotations

import numpy as np
from scipy.signal import fftconvolve


def renewal_g2_oracle(rate_profile, dt: float, horizon: float | None = None):
    """g2(tau) of a renewal process whose post-event rate is rate_profile.

    rate_profile samples the conditional intensity lambda_1(tau) on a
    uniform grid of spacing dt starting at tau = dt/2. The inter-event
    density f = lambda_1 exp(-int lambda_1) is self-convolved into the
    renewal density h(tau) = sum_k f^(*k); g2 = h / steady_rate.

    Returns (tau, g2, steady_rate).
    """
    lam = np.asarray(rate_profile, dtype=float)
    if np.any(lam < 0):
        raise ValueError("rate profile must be nonnegative")
    n = lam.size
    if horizon is not None:
        n = min(n, int(round(horizon / dt)))
        lam = lam[:n]
    tau = (np.arange(n) + 0.5) * dt
    cum = np.cumsum(lam) * dt
    survival = np.exp(-(cum - 0.5 * lam * dt))     # midpoint integral
    f = lam * survival
    mass = f.sum() * dt
    if mass < 1.0 - 1e-3:
        raise ValueError(
            f"inter-event density mass {mass:.6f} < 1 on the horizon; "
            "profile is non-normalizable or the horizon is too short")
    mean = float(np.sum(tau * f) * dt)
    # analytic exponential-tail correction for the truncated survival mass
    s_end = survival[-1] * np.exp(-0.5 * lam[-1] * dt)
    if lam[-1] > 0:
        mean += s_end * (tau[-1] + 0.5 * dt + 1.0 / lam[-1])
    steady = 1.0 / mean

    h = f.copy()
    conv = f
    max_terms = int(10 * tau[-1] / mean) + 50
    for _ in range(max_terms):
        conv = fftconvolve(conv, f)[:n] * dt
        h += conv
        if conv.max() < 1e-12 * max(h.max(), 1.0):
            break
    return tau, h / steady, steady
