"""Capacity-based reliability metric for polynomial zeros.

Dividing a unit-norm polynomial X(z) by one of its root factors (z - alpha_k)
leaves the polynomial formed by the neighbouring zeros, which is read as a
frequency-selective channel.  Its parallel-channel capacity, evaluated on a
uniform unit-circle grid with unit noise power per bin, scores how robustly
that zero survives additive coefficient noise.  Averaging over zeros gives a
per-polynomial score, and averaging over messages a per-codebook score, which
drives the constellation parameter search.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .zeros import ConstellationParams, coeffs_to_zeros, encode_bits, zeros_to_coeffs

DEFAULT_GRID = 1024
EXACT_LIMIT = 16  # full codebook enumeration refused above this many zeros
MIN_SAMPLE_COUNT = 64


def deflate(coeffs, root, tol: float = 1e-6) -> np.ndarray:
    """Divide polynomials by (z - root) via synthetic division.

    coeffs: (..., K+1), root: scalar or (...,).  Returns the (..., K)
    quotient coefficients.  Raises if the remainder shows `root` is not a
    root of the polynomial within `tol` (relative to the evaluation scale).
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    root = np.asarray(root, dtype=complex)
    deg = coeffs.shape[-1] - 1
    out = np.zeros(np.broadcast_shapes(coeffs.shape[:-1], root.shape) + (deg,), dtype=complex)
    out[..., deg - 1] = coeffs[..., deg]
    for i in range(deg - 1, 0, -1):
        out[..., i - 1] = coeffs[..., i] + root * out[..., i]
    remainder = coeffs[..., 0] + root * out[..., 0]
    scale = np.sum(np.abs(coeffs) * np.abs(root[..., None]) ** np.arange(deg + 1), axis=-1)
    if np.any(np.abs(remainder) > tol * scale):
        raise ArithmeticError("given point is not a root of the polynomial")
    return out


def _grid_power(coeffs, grid_size: int) -> np.ndarray:
    """|P(e^{j 2 pi n/N})|^2 on the uniform grid, via zero-padded transform."""
    evals = grid_size * np.fft.ifft(coeffs, n=grid_size, axis=-1)
    return np.abs(evals) ** 2


def reliability_profile(coeffs, roots, grid_size: int = DEFAULT_GRID) -> np.ndarray:
    """Per-zero reliability of a unit-norm polynomial.

    Returns (..., K) scores (1/N) * sum_n log2(1 + |H_k(e^{j2pi n/N})|^2),
    where H_k is the polynomial deflated at roots[..., k].
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    roots = np.asarray(roots, dtype=complex)
    deflated = deflate(coeffs[..., None, :], roots)  # (..., K, K)
    power = _grid_power(deflated, grid_size)
    return np.mean(np.log2(1.0 + power), axis=-1)


def zero_reliability(coeffs, roots, k: int, grid_size: int = DEFAULT_GRID) -> float:
    """Reliability of the single zero roots[k]."""
    return float(reliability_profile(coeffs, roots, grid_size)[..., k])


def poly_stability(coeffs, roots=None, grid_size: int = DEFAULT_GRID) -> float:
    """Mean per-zero reliability of one unit-norm polynomial.

    If `roots` is omitted they are computed numerically; pass exact roots
    whenever they are known (ill-conditioned polynomials shift badly).
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    if roots is None:
        roots = coeffs_to_zeros(coeffs)
    return float(np.mean(reliability_profile(coeffs, roots, grid_size)))


def _message_stabilities(messages, params: ConstellationParams, grid_size: int) -> np.ndarray:
    zeros = encode_bits(messages, params)
    coeffs = zeros_to_coeffs(zeros, energy=1.0)
    out = np.empty(len(messages))
    for i in range(len(messages)):
        out[i] = np.mean(reliability_profile(coeffs[i], zeros[i], grid_size))
    return out


def _all_messages(num_zeros: int) -> np.ndarray:
    idx = np.arange(2**num_zeros, dtype=np.uint32)
    return (idx[:, None] >> np.arange(num_zeros)) & 1


def codebook_stability(
    params: ConstellationParams,
    grid_size: int = DEFAULT_GRID,
    samples: int = None,
    seed: int = 0,
) -> float:
    """Mean polynomial stability over the codebook.

    With samples=None the full 2^K codebook is enumerated (refused for
    K > 16); otherwise a seeded random subset of that many messages is used.
    """
    k = params.num_zeros
    if samples is None:
        if k > EXACT_LIMIT:
            raise ValueError(
                f"exact enumeration of 2^{k} codewords refused; pass samples="
            )
        messages = _all_messages(k)
    else:
        messages = np.random.default_rng(seed).integers(0, 2, (samples, k))
    return float(np.mean(_message_stabilities(messages, params, grid_size)))


def min_codebook_stability(
    params: ConstellationParams,
    grid_size: int = DEFAULT_GRID,
    samples: int = MIN_SAMPLE_COUNT,
    seed: int = 0,
    exact: bool = None,
) -> float:
    """Minimum polynomial stability over the codebook.

    Exact for K <= 16 by default.  Otherwise the all-outside and all-inside
    codewords (the consistent extremes) are checked alongside a seeded
    random sample, and the smallest value found is returned.  Pass `exact`
    to force either path.
    """
    k = params.num_zeros
    if exact is None:
        exact = k <= EXACT_LIMIT
    if exact:
        if k > EXACT_LIMIT:
            raise ValueError(f"exact enumeration of 2^{k} codewords refused")
        messages = _all_messages(k)
    else:
        rng = np.random.default_rng(seed)
        messages = np.vstack(
            [np.ones((1, k), dtype=int), np.zeros((1, k), dtype=int),
             rng.integers(0, 2, (samples, k))]
        )
    return float(np.min(_message_stabilities(messages, params, grid_size)))


def optimize_radius(
    num_zeros: int,
    asymmetry: float,
    radius_grid,
    grid_size: int = DEFAULT_GRID,
    samples: int = MIN_SAMPLE_COUNT,
    seed: int = 0,
) -> float:
    """Grid argmax of the minimum codebook stability over radii.

    Ties break toward the smaller radius (first maximum of the ascending
    grid).
    """
    radius_grid = np.asarray(radius_grid, dtype=float)
    if radius_grid.size == 0:
        raise ValueError("radius grid is empty")
    scores = [
        min_codebook_stability(
            ConstellationParams(num_zeros, float(r), asymmetry),
            grid_size=grid_size, samples=samples, seed=seed,
        )
        for r in radius_grid
    ]
    return float(radius_grid[int(np.argmax(scores))])


def default_radius_grid(num_zeros: int) -> np.ndarray:
    """Search grid for the radius: fine 1e-3 steps for long codewords,
    coarser and wider for short ones."""
    if num_zeros >= 32:
        return np.arange(1.001, 1.5, 0.001)
    return np.arange(1.005, 2.0, 0.005)


@dataclass(frozen=True)
class StabilityReport:
    """Per-zero reliabilities of one codeword with their mean."""

    per_zero: np.ndarray
    poly: float
    params: ConstellationParams


def stability_report(bits, params: ConstellationParams,
                     grid_size: int = DEFAULT_GRID) -> StabilityReport:
    """Reliability profile of the codeword encoding `bits`."""
    zeros = encode_bits(np.asarray(bits), params)
    coeffs = zeros_to_coeffs(zeros, energy=1.0)
    per_zero = reliability_profile(coeffs, zeros, grid_size)
    return StabilityReport(per_zero=per_zero, poly=float(np.mean(per_zero)),
                           params=params)


@dataclass(frozen=True)
class DesignCurvePoint:
    """One row of the asymmetry/stability/peakiness trade-off curve."""

    asymmetry: float
    best_radius: float
    min_stability: float
    template_papr_db: float


def asymmetry_sweep(
    num_zeros: int,
    asymmetry_grid,
    radius_grid,
    grid_size: int = DEFAULT_GRID,
    samples: int = MIN_SAMPLE_COUNT,
    seed: int = 0,
) -> list[DesignCurvePoint]:
    """Sweep the asymmetry factor, optimizing the radius at each point and
    recording the achieved minimum stability and template peakiness."""
    from .phy import papr_fm  # local import: phy depends on zeros only

    asymmetry_grid = np.asarray(asymmetry_grid, dtype=float)
    if asymmetry_grid.size == 0:
        raise ValueError("asymmetry grid is empty")
    points = []
    for zeta in asymmetry_grid:
        r_star = optimize_radius(
            num_zeros, float(zeta), radius_grid,
            grid_size=grid_size, samples=samples, seed=seed,
        )
        params = ConstellationParams(num_zeros, r_star, float(zeta))
        stab = min_codebook_stability(
            params, grid_size=grid_size, samples=samples, seed=seed
        )
        papr_db, _ = papr_fm(params)
        points.append(DesignCurvePoint(float(zeta), r_star, stab, papr_db))
    return points
