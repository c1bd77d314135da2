"""Impairment simulation: sequence-level convolutive channels and the
sample-level OFDM channel with timing/frequency offsets and clock drift.

All randomness flows through explicit numpy Generators so trials are
reproducible and can be parallelized from independently derived seeds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def draw_cir(num_taps: int, rng: np.random.Generator, profile: str = "uniform",
             decay: float = 3.0) -> np.ndarray:
    """Draw one channel impulse response of `num_taps` complex Gaussian taps.

    profile "uniform": every tap has variance 1/num_taps.
    profile "exp": tap variances decay as exp(-l/decay), normalized to unit
    total power (the stand-in for standardized indoor multipath models).
    """
    if num_taps < 1:
        raise ValueError(f"need at least one tap, got {num_taps}")
    if profile == "uniform":
        power = np.full(num_taps, 1.0 / num_taps)
    elif profile == "exp":
        power = np.exp(-np.arange(num_taps) / decay)
        power /= power.sum()
    else:
        raise ValueError(f"unknown power-delay profile {profile!r}")
    taps = rng.normal(size=num_taps) + 1j * rng.normal(size=num_taps)
    return taps * np.sqrt(power / 2.0)


def complex_noise(shape, variance: float, rng: np.random.Generator) -> np.ndarray:
    """Circularly-symmetric complex Gaussian samples of the given variance."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.normal(size=shape) + 1j * rng.normal(size=shape))


def convolve_channel(coeffs, taps, noise_var: float, rng: np.random.Generator) -> np.ndarray:
    """Full linear convolution of codewords with channel taps plus AWGN.

    coeffs: (..., K+1), taps: (L_e,) or (..., L_e) matching the leading
    dims.  Returns (..., K + L_e) received coefficients.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    taps = np.asarray(taps, dtype=complex)
    out_len = coeffs.shape[-1] + taps.shape[-1] - 1
    out = np.zeros(np.broadcast_shapes(coeffs.shape[:-1], taps.shape[:-1]) + (out_len,),
                   dtype=complex)
    for l in range(taps.shape[-1]):
        out[..., l : l + coeffs.shape[-1]] += taps[..., l, None] * coeffs
    if noise_var > 0:
        out = out + complex_noise(out.shape, noise_var, rng)
    return out


def ebn0_to_noise_var(ebn0_db: float, info_bits: int, energy: float) -> float:
    """Per-sample complex noise variance for a target Eb/N0 in dB, given the
    transmit energy spent per `info_bits` information bits."""
    if info_bits <= 0:
        raise ValueError(f"info_bits must be positive, got {info_bits}")
    if energy <= 0:
        raise ValueError(f"energy must be positive, got {energy}")
    return energy / (info_bits * 10.0 ** (ebn0_db / 10.0))


@dataclass(frozen=True)
class ImpairmentSpec:
    """Sample-level impairments applied between transmitter and receiver.

    rotation describes the per-codeword zero-rotation impairment used by the
    sequence-level experiments: None, a fixed angle in radians, or the
    string "uniform" for an independent U[0, 2pi) draw per codeword.
    """

    timing_offset: int = 0
    cfo_hz: float = 0.0
    drift_ppm: float = 0.0
    noise_var: float = 0.0
    rotation: object = None

    def __post_init__(self):
        if self.noise_var < 0:
            raise ValueError("noise_var must be nonnegative")
        ok = self.rotation is None or self.rotation == "uniform" \
            or isinstance(self.rotation, (int, float))
        if not ok:
            raise ValueError(f"bad rotation spec {self.rotation!r}")

    def draw_rotations(self, count: int, rng: np.random.Generator) -> np.ndarray:
        if self.rotation is None:
            return np.zeros(count)
        if self.rotation == "uniform":
            return rng.uniform(0.0, 2.0 * np.pi, count)
        return np.full(count, float(self.rotation))


def apply_ofdm_channel(samples, taps, spec: ImpairmentSpec, sample_rate: float,
                       rng: np.random.Generator = None) -> np.ndarray:
    """Push a sample stream through delay + multipath + CFO + AWGN.

    The timing offset delays the stream by an integer sample count; clock
    drift accumulates as an additional slowly growing delay of
    drift_ppm * 1e-6 * n samples at output sample n, applied at integer
    granularity.  The CFO multiplies output sample n by
    e^{j 2 pi cfo_hz n / sample_rate}.
    """
    samples = np.asarray(samples, dtype=complex)
    taps = np.asarray(taps, dtype=complex)
    faded = np.convolve(samples, taps)
    out_len = len(faded) + spec.timing_offset
    n = np.arange(out_len)
    delay = spec.timing_offset + (spec.drift_ppm * 1e-6 * n).astype(int)
    src = n - delay
    out = np.where((src >= 0) & (src < len(faded)), faded[np.clip(src, 0, len(faded) - 1)], 0.0)
    if spec.cfo_hz != 0.0:
        out = out * np.exp(2j * np.pi * spec.cfo_hz * n / sample_rate)
    if spec.noise_var > 0:
        if rng is None:
            raise ValueError("noise requested but no rng supplied")
        out = out + complex_noise(out.shape, spec.noise_var, rng)
    return out
