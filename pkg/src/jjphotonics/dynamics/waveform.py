"""Photon waveform synthesis from event records."""

from __future__ import annotations

import numpy as np
from scipy.signal import lfilter


def events_to_envelope(times, kappa: float, sample_interval: float,
                       duration: float, seed: int, amplitude: float | None = None,
                       random_phase: bool = True) -> np.ndarray:
    """Complex baseband waveform: one decaying wave packet per emission.

    Each event contributes amplitude * exp(-kappa t / 2) * exp(i phi) for
    t after the event, with phi drawn independently per event (successive
    pulses carry no mutual coherence). The default amplitude sqrt(kappa)
    normalizes each packet to unit photon energy, so |envelope|^2 is a
    photon flux. The exponential tail is generated by a one-pole filter,
    exact at the sample points.
    """
    if sample_interval >= 1.0 / kappa:
        raise ValueError("sample_interval must resolve the packet: < 1/kappa")
    times = np.asarray(times, dtype=float)
    n = int(round(duration / sample_interval))
    impulses = np.zeros(n, dtype=complex)
    if times.size:
        rng = np.random.default_rng(seed)
        phases = (np.exp(2j * np.pi * rng.random(times.size))
                  if random_phase else np.ones(times.size, dtype=complex))
        amp = np.sqrt(kappa) if amplitude is None else amplitude
        idx = np.ceil(times / sample_interval - 1e-12).astype(int)
        keep = idx < n
        # launch amplitude at the first sample after the event
        start = amp * phases[keep] * np.exp(-0.5 * kappa * (idx[keep] * sample_interval
                                                            - times[keep]))
        np.add.at(impulses, idx[keep], start)
    pole = np.exp(-0.5 * kappa * sample_interval)
    return lfilter([1.0], [1.0, -pole], impulses)
