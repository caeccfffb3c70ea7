"""Block cross-correlators, noise-subtracting assembly and error bars.

Per block of N envelope samples, zero-padded FFTs give the first-order
accumulator conj(F0) F1 and, from the product stream u = conj(S0) S1, the
second-order accumulator F_x(-n) F_x(n). Inverse transforms are taken in
post-processing with the overlap scaling 1/(N - |lag|). On and off blocks
feed separate accumulators; block groups carry the scatter used for the
error bars sigma = sigma_b / sqrt(n_b - 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chain import ChainModel
from .demod import EnvelopeRecord


def block_statistics(values: np.ndarray):
    """Mean and statistical error over block results (axis 0):
    sigma = sigma_b / sqrt(n_b - 1) with sigma_b the block scatter."""
    values = np.asarray(values)
    n_b = values.shape[0]
    if n_b < 2:
        raise ValueError("need at least two blocks")
    mean = values.mean(axis=0)
    sigma = values.std(axis=0, ddof=0) / np.sqrt(n_b - 1)
    return mean, sigma


@dataclass
class RawCorrelators:
    """Per-group raw block-averaged correlators."""

    tau: np.ndarray                       # centered lags [s], length 2N-1
    gamma1_on: np.ndarray                 # (n_groups, 2N-1) complex
    gamma1_off: np.ndarray
    gamma2_on: np.ndarray
    gamma2_off: np.ndarray
    blocks_on: np.ndarray                 # (n_groups,)
    blocks_off: np.ndarray
    block_size: int
    sample_interval: float

    @property
    def zero_lag(self) -> int:
        return self.block_size - 1


class CorrelatorAccumulator:
    """Streaming accumulation of the block FFT products.

    Envelope records are added in arbitrary chunks; block groups are filled
    round-robin by global block index so the grouping is independent of the
    chunking.
    """

    def __init__(self, block_size: int, sample_interval: float, n_groups: int = 16,
                 group_stride: int = 16):
        self.n = block_size
        self.dt = sample_interval
        self.n_groups = n_groups
        self.group_stride = group_stride
        shape = (n_groups, 2 * block_size)
        self._a1 = {True: np.zeros(shape, dtype=complex),
                    False: np.zeros(shape, dtype=complex)}
        self._a2 = {True: np.zeros(shape, dtype=complex),
                    False: np.zeros(shape, dtype=complex)}
        self._count = {True: np.zeros(n_groups, dtype=int),
                       False: np.zeros(n_groups, dtype=int)}
        self._next_block = 0

    def add(self, env: EnvelopeRecord):
        if env.block_size != self.n or env.sample_interval != self.dt:
            raise ValueError("envelope record does not match the accumulator")
        n = self.n
        n_blocks = env.n_blocks
        s0 = env.s0[: n_blocks * n].reshape(n_blocks, n)
        s1 = env.s1[: n_blocks * n].reshape(n_blocks, n)
        pad = np.zeros((n_blocks, n), dtype=complex)
        f0 = np.fft.fft(np.concatenate([s0, pad], axis=1), axis=1)
        f1 = np.fft.fft(np.concatenate([s1, pad], axis=1), axis=1)
        u = np.conj(s0) * s1
        fx = np.fft.fft(np.concatenate([u, pad], axis=1), axis=1)
        a1 = np.conj(f0) * f1
        rev = (2 * n - np.arange(2 * n)) % (2 * n)
        a2 = fx[:, rev] * fx
        # group by runs of blocks so every group sees both on and off data
        groups = ((self._next_block + np.arange(n_blocks)) // self.group_stride) \
            % self.n_groups
        self._next_block += n_blocks
        for tag, key in ((1, True), (0, False)):
            sel = env.block_tags == tag
            if not np.any(sel):
                continue
            gsel = groups[sel]
            order = np.argsort(gsel, kind="stable")
            gsorted = gsel[order]
            bounds = np.flatnonzero(np.diff(gsorted)) + 1
            starts = np.concatenate([[0], bounds])
            uniq = gsorted[starts]
            sums1 = np.add.reduceat(a1[sel][order], starts, axis=0)
            sums2 = np.add.reduceat(a2[sel][order], starts, axis=0)
            counts = np.diff(np.concatenate([starts, [gsorted.size]]))
            self._a1[key][uniq] += sums1
            self._a2[key][uniq] += sums2
            self._count[key][uniq] += counts

    def finalize(self) -> RawCorrelators:
        n = self.n
        lags = np.arange(-(n - 1), n)
        order = np.concatenate([np.arange(n + 1, 2 * n), np.arange(n)])
        scale = 1.0 / (n - np.abs(lags))

        def reduce(acc, counts):
            out = np.zeros((self.n_groups, 2 * n - 1), dtype=complex)
            for g in range(self.n_groups):
                if counts[g] == 0:
                    continue
                c = np.fft.ifft(acc[g] / counts[g])
                out[g] = c[order] * scale
            return out

        return RawCorrelators(
            tau=lags * self.dt,
            gamma1_on=reduce(self._a1[True], self._count[True]),
            gamma1_off=reduce(self._a1[False], self._count[False]),
            gamma2_on=reduce(self._a2[True], self._count[True]),
            gamma2_off=reduce(self._a2[False], self._count[False]),
            blocks_on=self._count[True].copy(),
            blocks_off=self._count[False].copy(),
            block_size=n,
            sample_interval=self.dt)


def gamma1_cross(env: EnvelopeRecord, n_groups: int = 16) -> RawCorrelators:
    """First-order cross-correlator of one envelope record (raw, with the
    second-order accumulators along for the ride)."""
    acc = CorrelatorAccumulator(env.block_size, env.sample_interval, n_groups)
    acc.add(env)
    return acc.finalize()


def gamma2_cross(env: EnvelopeRecord, n_groups: int = 16) -> RawCorrelators:
    """Second-order cross-correlator of one envelope record."""
    return gamma1_cross(env, n_groups)


def direct_correlators(s0_block, s1_block):
    """O(N^2) sliding-window reference for one block: returns
    (gamma1, gamma2) on the centered lag grid. Brute-force oracle for the
    FFT path."""
    n = s0_block.size
    u = np.conj(s0_block) * s1_block
    lags = np.arange(-(n - 1), n)
    g1 = np.empty(lags.size, dtype=complex)
    g2 = np.empty(lags.size, dtype=complex)
    for k, lag in enumerate(lags):
        if lag >= 0:
            g1[k] = np.sum(np.conj(s0_block[: n - lag]) * s1_block[lag:])
            g2[k] = np.sum(u[: n - lag] * u[lag:])
        else:
            g1[k] = np.sum(np.conj(s0_block[-lag:]) * s1_block[: n + lag])
            g2[k] = np.sum(u[-lag:] * u[: n + lag])
        g1[k] /= n - abs(lag)
        g2[k] /= n - abs(lag)
    return g1, g2


@dataclass
class CorrelationResult:
    tau: np.ndarray
    g1: np.ndarray                    # complex G1(tau), source units
    sigma_g1: np.ndarray
    g2: np.ndarray                    # normalized g2(tau)
    sigma_g2: np.ndarray
    gamma1_raw: np.ndarray            # mean on-state raw correlators
    gamma2_raw: np.ndarray
    n_blocks_on: int = 0
    n_blocks_off: int = 0
    meta: dict = field(default_factory=dict)

    def write_csv(self, path):
        with open(path, "w") as fh:
            fh.write("tau_s,g2,sigma,g1_re,g1_im,gamma2_raw_re,gamma2_raw_im\n")
            for k in range(self.tau.size):
                fh.write(f"{self.tau[k]:.9e},{self.g2[k]:.9e},{self.sigma_g2[k]:.9e},"
                         f"{self.g1[k].real:.9e},{self.g1[k].imag:.9e},"
                         f"{self.gamma2_raw[k].real:.9e},{self.gamma2_raw[k].imag:.9e}\n")


def assemble_g1_g2(raw: RawCorrelators, chain: ChainModel,
                   packet_decay_rate: float | None = None) -> CorrelationResult:
    """Noise-subtracted G1, G2 and normalized g2 with block-group error bars.

    G1 = 2 (G1x_on - G1x_off)/sqrt(g0 g1); G2 subtracts the four
    G1-times-noise cross terms (built from the off-state measurement) and
    the off-state second-order correlator, then g2 = G2 / G1(0)^2. The gain
    product cancels in g2.

    packet_decay_rate, when given, additionally subtracts the
    single-packet self-coherence (rate/2) |G1(tau)|^2 / G1(0): a classical
    pulse train carries that term where Fock-state packets do not, so
    removing it restores the photon-counting statistics of the source. For
    exponential packets the rate is the energy decay kappa; in general pass
    2 * int |p|^4 / int |p|^2 of the packet as seen at the correlator (after
    any chain filtering).
    """
    root_g = np.sqrt(chain.g0 * chain.g1)
    gg = chain.g0 * chain.g1
    zl = raw.zero_lag
    keep = (raw.blocks_on > 0) & (raw.blocks_off > 0)
    if keep.sum() < 2:
        raise ValueError("need at least two block groups with on and off data")
    g1_b = 2.0 * (raw.gamma1_on[keep] - raw.gamma1_off[keep]) / root_g
    g1n_b = raw.gamma1_off[keep] / root_g
    g2_b = 4.0 * (raw.gamma2_on[keep] - raw.gamma2_off[keep]) / gg
    g2_b -= 4.0 * np.real(g1_b * g1n_b)
    g2_b -= 4.0 * np.real(g1_b[:, zl] * g1n_b[:, zl])[:, None]
    if packet_decay_rate is not None:
        rate0 = np.real(g1_b[:, zl])[:, None]
        g2_b -= 0.5 * packet_decay_rate * np.abs(g1_b) ** 2 / rate0
    norm_b = np.real(g1_b[:, zl]) ** 2
    g2n_b = np.real(g2_b) / norm_b[:, None]

    g1_mean, g1_sigma = block_statistics(g1_b)
    g2_mean, g2_sigma = block_statistics(g2n_b)
    gamma1_raw, _ = block_statistics(raw.gamma1_on[keep])
    gamma2_raw, _ = block_statistics(raw.gamma2_on[keep])
    return CorrelationResult(
        tau=raw.tau, g1=g1_mean, sigma_g1=np.abs(g1_sigma),
        g2=g2_mean, sigma_g2=g2_sigma,
        gamma1_raw=gamma1_raw, gamma2_raw=gamma2_raw,
        n_blocks_on=int(raw.blocks_on.sum()),
        n_blocks_off=int(raw.blocks_off.sum()),
        meta={"n_groups": int(keep.sum()),
              "self_calibrated": True})
