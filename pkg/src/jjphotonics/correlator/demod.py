"""Digital down-conversion of the interleaved ADC records to complex
envelopes.

Sampling at 2 GS/s with the signal centered at 3/(4 dt) puts the real part
of the envelope on the even samples and the imaginary part on the odd ones,
each with alternating signs. The five-tap envelope kernel runs over the raw
interleaved streams (equivalently, its sign-folded form over the
sign-corrected quadratures) and its time reverse over the other quadrature,
centering both at the same instant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .chain import ChainModel


@dataclass
class EnvelopeRecord:
    s0: np.ndarray                  # complex envelopes, sample interval 2 dt
    s1: np.ndarray
    sample_interval: float
    block_size: int
    block_tags: np.ndarray          # per block: 1 on, 0 off, 2 skip

    def __post_init__(self):
        if self.s0.shape != self.s1.shape:
            raise ValueError("channel envelopes must have equal length")
        self.block_tags = np.asarray(self.block_tags).astype(np.int8)
        n_blocks = self.s0.size // self.block_size
        if self.block_tags.size != n_blocks:
            raise ValueError("block_tags length must equal the block count")

    @property
    def n_blocks(self) -> int:
        return self.s0.size // self.block_size


def fir_response(chain: ChainModel, f) -> np.ndarray:
    """Complex response of the envelope kernel at baseband frequency f,
    as seen by the sign-corrected quadrature stream."""
    taps = np.asarray(chain.fir) * (-1.0) ** np.arange(len(chain.fir))
    dt_q = 2.0 * chain.dt
    f = np.asarray(f, dtype=float)
    return np.sum(taps[None, :] * np.exp(-2j * np.pi * f[:, None] * dt_q
                                         * np.arange(len(taps))[None, :]), axis=1)


def demodulate_envelopes(v0, v1, chain: ChainModel,
                         block_tags: np.ndarray | None = None) -> EnvelopeRecord:
    """Deinterleave, sign-correct and FIR-filter both ADC records."""
    v0 = np.asarray(v0, dtype=float)
    v1 = np.asarray(v1, dtype=float)
    if v0.size != v1.size:
        raise ValueError("records must have equal length")
    if v0.size % (2 * chain.block_size) != 0:
        raise ValueError(
            f"record length {v0.size} is not a multiple of 2 N = {2 * chain.block_size}")
    if chain.crosstalk_compensation is not None:
        comp = np.asarray(chain.crosstalk_compensation, dtype=float)
        v0, v1 = (v0 - lfilter(comp, [1.0], v1),
                  v1 - lfilter(comp, [1.0], v0))
    taps = np.asarray(chain.fir, dtype=float) * (-1.0) ** np.arange(len(chain.fir))
    envs = []
    for v in (v0, v1):
        m = np.arange(v.size // 2)
        sign = (-1.0) ** m
        r = v[0::2] * sign
        i = v[1::2] * sign
        envs.append(lfilter(taps, [1.0], r) + 1j * lfilter(taps[::-1], [1.0], i))
    n_blocks = envs[0].size // chain.block_size
    if block_tags is None:
        block_tags = np.ones(n_blocks, dtype=np.int8)
    return EnvelopeRecord(s0=envs[0], s1=envs[1],
                          sample_interval=chain.envelope_interval,
                          block_size=chain.block_size,
                          block_tags=block_tags)
