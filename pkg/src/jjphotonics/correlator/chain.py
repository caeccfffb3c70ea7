"""Semiclassical model of the two-channel amplification and digitization
chain.

The quantum chain is rendered classically: the signal is a complex
waveform, each channel adds an independent complex Gaussian noise of
spectral density (N_i + 0.5) photons per mode (the half photon standing in
for the vacuum, so a signal-free channel shows the amplifier noise floor on
top of it), and the sum is scaled by the amplitude gain, modulated to the
second Nyquist band and sampled. The noise is band-limited to the IF band
the anti-aliasing filter passes, i.e. +-1/(4 dt) around the carrier;
without that filter the quadrature interleave would alias the out-of-band
noise and double the floor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: FIR envelope kernel taps applied during demodulation.
DEFAULT_FIR = (0.042, -0.338, 0.469, -0.150, 0.0)


@dataclass
class ChainModel:
    g0: float = 10_000.0            # power gains
    g1: float = 10_000.0
    n0: float = 7.0                 # input-referred noise photons per mode
    n1: float = 7.0
    cross_noise: float = 0.0        # common fraction of the two noise powers
    crosstalk: float = 0.0          # digitizer channel leakage amplitude
    f0: float = 6.0e9               # carrier [Hz]
    f_lo: float = 4.5e9             # local oscillator [Hz]
    dt: float = 0.5e-9              # ADC sampling interval [s]
    fir: tuple = DEFAULT_FIR
    block_size: int = 128           # envelope samples per block
    splitter: float = 0.5           # power fraction per channel
    quantize_bits: int | None = None
    adc_fullscale: float | None = None
    crosstalk_compensation: np.ndarray | None = None   # 16 taps

    def __post_init__(self):
        if self.g0 <= 0 or self.g1 <= 0:
            raise ValueError("gains must be > 0")
        if self.n0 < 0 or self.n1 < 0:
            raise ValueError("noise photon numbers must be >= 0")
        f_if = self.f0 - self.f_lo
        f_canonical = 3.0 / (4.0 * self.dt)
        if abs(f_if - f_canonical) > 1e-6 * f_canonical:
            nyq = 1.0 / (2.0 * self.dt)
            band = ("first Nyquist band (0, %.3g Hz)" % nyq
                    if f_if < nyq else "beyond the sampled spectrum")
            raise ValueError(
                f"f0 - f_LO = {f_if:.6g} Hz does not sit at 3/(4 dt) = "
                f"{f_canonical:.6g} Hz; the signal would alias into the {band}")

    @property
    def f_if(self) -> float:
        return self.f0 - self.f_lo

    @property
    def envelope_interval(self) -> float:
        return 2.0 * self.dt


def band_limited_noise(rng: np.random.Generator, n_samples: int, flux: float,
                       dt: float) -> np.ndarray:
    """Complex Gaussian noise at sample interval dt, white inside the IF
    envelope band |f| <= 1/(4 dt) and zero outside, with total power `flux`
    [photons/s]. Drawn at the critical rate and Fourier-upsampled by two.
    """
    if n_samples % 2:
        raise ValueError("n_samples must be even")
    m = n_samples // 2
    # stationary power equals the total band flux at any sample rate
    x = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) * np.sqrt(flux / 2.0)
    spec = np.fft.fft(x)
    padded = np.zeros(n_samples, dtype=complex)
    half = m // 2
    padded[:half] = spec[:half]
    padded[n_samples - (m - half):] = spec[half:]
    return np.fft.ifft(padded) * 2.0


def simulate_chain(input_envelope, chain: ChainModel, n_samples: int,
                   seed: int | None = None, rng: np.random.Generator | None = None,
                   calibration: bool = False):
    """Raw real ADC records (v0, v1) of length n_samples.

    input_envelope is the source's complex baseband waveform sampled at
    chain.dt (padded/truncated to n_samples), in units where its squared
    magnitude is a photon flux; None means the source is off. With
    calibration=True the splitter is bypassed (the reference load is
    switched straight into the amplifier).
    """
    if rng is None:
        rng = np.random.default_rng(seed)
    if input_envelope is None:
        sig = np.zeros(n_samples, dtype=complex)
    else:
        sig = np.asarray(input_envelope, dtype=complex)
        if sig.size < n_samples:
            sig = np.concatenate([sig, np.zeros(n_samples - sig.size, dtype=complex)])
        else:
            sig = sig[:n_samples]
    amp_split = 1.0 if calibration else np.sqrt(chain.splitter)

    def cnoise(flux):
        return band_limited_noise(rng, n_samples, flux, chain.dt)

    band = 1.0 / (2.0 * chain.dt)          # IF band width [Hz]
    shared = cnoise(band) if chain.cross_noise > 0 else 0.0
    records = []
    n = np.arange(n_samples)
    even = n % 2 == 0
    sign = np.where(even, (-1.0) ** (n // 2), (-1.0) ** ((n - 1) // 2))
    for g, nph in ((chain.g0, chain.n0), (chain.g1, chain.n1)):
        flux = (nph + 0.5) * band
        if chain.cross_noise > 0:
            noise = (np.sqrt(1 - chain.cross_noise) * cnoise(flux)
                     + np.sqrt(chain.cross_noise * flux / band) * shared)
        else:
            noise = cnoise(flux)
        env = np.sqrt(g) * (amp_split * sig + noise)
        v = np.where(even, env.real, env.imag) * sign
        records.append(v)
    v0, v1 = records
    if chain.crosstalk != 0.0:
        v0, v1 = v0 + chain.crosstalk * v1, v1 + chain.crosstalk * v0
    if chain.quantize_bits is not None:
        full = chain.adc_fullscale or 8.0 * np.sqrt(
            chain.g0 * (chain.n0 + 0.5) / chain.dt)
        lsb = 2.0 * full / 2**chain.quantize_bits
        v0 = np.clip(np.round(v0 / lsb), -2**(chain.quantize_bits - 1),
                     2**(chain.quantize_bits - 1) - 1) * lsb
        v1 = np.clip(np.round(v1 / lsb), -2**(chain.quantize_bits - 1),
                     2**(chain.quantize_bits - 1) - 1) * lsb
    return v0, v1


def on_off_input(signal_envelope, chain: ChainModel, n_blocks: int,
                 run_length: int = 8, guard_blocks: int = 1):
    """Input waveform cycling the source on and off in runs of blocks.

    On-runs carry consecutive slices of the signal. The first guard_blocks
    of every run are tagged 2 (skip): the demodulation filter smears a few
    samples across a transition, so those blocks belong to neither the on
    nor the off ensemble. Returns (input_envelope, tags) with tags per
    block: 1 on, 0 off, 2 skip.
    """
    adc_per_block = 2 * chain.block_size
    total = n_blocks * adc_per_block
    sig = np.asarray(signal_envelope, dtype=complex)
    b = np.arange(n_blocks)
    run, pos = np.divmod(b, run_length)
    on = run % 2 == 0
    tags = np.where(pos < guard_blocks, 2, np.where(on, 1, 0)).astype(np.int8)
    out = np.zeros(total, dtype=complex)
    on_idx = np.flatnonzero(on)
    need = on_idx.size * adc_per_block
    src = np.zeros(need, dtype=complex)
    src[: min(need, sig.size)] = sig[:need]
    view = out.reshape(n_blocks, adc_per_block)
    view[on_idx] = src.reshape(on_idx.size, adc_per_block)
    return out, tags
