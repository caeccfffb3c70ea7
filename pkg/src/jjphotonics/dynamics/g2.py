"""Event-level second-order correlation estimator."""

from __future__ import annotations

import numpy as np


def g2_from_events(times, bin_width: float, max_tau: float,
                   duration: float | None = None):
    """Normalized coincidence histogram of ordered pairs.

    Pair counts per delay bin divided by rate^2 * duration * bin; start
    events are restricted to [0, duration - max_tau] so every window is
    complete. Returns (tau_centers, g2, sigma) with Poisson counting errors.
    """
    times = np.asarray(times, dtype=float)
    if times.size < 2:
        raise ValueError("need at least two events")
    if duration is None:
        duration = float(times[-1])
    rate = times.size / duration
    starts = times[times <= duration - max_tau]
    if starts.size == 0:
        raise ValueError("no complete windows; shorten max_tau")
    edges = np.arange(0.0, max_tau + bin_width * 0.5, bin_width)
    counts = np.empty(edges.size - 1)
    # side="right" at offset zero excludes the self pair from the first bin
    hi_prev = np.searchsorted(times, starts + edges[0], side="right")
    for k in range(1, edges.size):
        hi = np.searchsorted(times, starts + edges[k], side="right")
        counts[k - 1] = np.sum(hi - hi_prev)
        hi_prev = hi
    norm = rate * starts.size * bin_width
    tau = 0.5 * (edges[:-1] + edges[1:])
    return tau, counts / norm, np.sqrt(np.maximum(counts, 1.0)) / norm
