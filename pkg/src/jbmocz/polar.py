"""Polar coding with successive-cancellation decoding.

The code is constructed by the Bhattacharyya-parameter recursion and decoded
with min-sum successive cancellation.  LLRs follow the convention of the
zero-testing soft output: positive means bit 1.  A common positive scaling
of the LLRs does not change any decision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PolarSpec:
    block_len: int
    info_len: int
    frozen: tuple

    def __post_init__(self):
        n = self.block_len
        if n < 1 or n & (n - 1):
            raise ValueError(f"block length must be a power of two, got {n}")
        if len(self.frozen) != n - self.info_len:
            raise ValueError("frozen set size must be block_len - info_len")
        if self.frozen and not (0 <= min(self.frozen) and max(self.frozen) < n):
            raise ValueError("frozen indices out of range")

    @property
    def info_positions(self) -> np.ndarray:
        mask = np.ones(self.block_len, dtype=bool)
        mask[list(self.frozen)] = False
        return np.nonzero(mask)[0]

    @property
    def frozen_mask(self) -> np.ndarray:
        mask = np.zeros(self.block_len, dtype=bool)
        mask[list(self.frozen)] = True
        return mask


def polar_construct(block_len: int, info_len: int, design_ebn0_db: float = 4.0) -> PolarSpec:
    """Freeze the block_len - info_len synthetic channels with the largest
    Bhattacharyya parameters at the design point.

    The recursion starts from z = exp(-Eb/N0) and applies z -> 2z - z^2 for
    the degraded half and z -> z^2 for the upgraded half at each level.
    """
    n = block_len
    if n < 1 or n & (n - 1):
        raise ValueError(f"block length must be a power of two, got {n}")
    if not 0 <= info_len <= n:
        raise ValueError(f"info length {info_len} out of range for n={n}")
    z = np.array([np.exp(-(10.0 ** (design_ebn0_db / 10.0)))])
    while len(z) < n:
        z = np.concatenate([2.0 * z - z * z, z * z])
    # freeze the worst channels; ties resolve toward lower indices
    order = np.lexsort((np.arange(n), -z))
    frozen = tuple(sorted(int(i) for i in order[: n - info_len]))
    return PolarSpec(block_len=n, info_len=info_len, frozen=frozen)


def _transform(bits: np.ndarray) -> np.ndarray:
    """x = u F^{tensor m} over GF(2), operating on the last axis."""
    x = bits.copy()
    n = x.shape[-1]
    step = 1
    while step < n:
        for start in range(0, n, 2 * step):
            x[..., start : start + step] ^= x[..., start + step : start + 2 * step]
        step *= 2
    return x


def polar_encode(info_bits, spec: PolarSpec) -> np.ndarray:
    """Encode (..., k) info bits into (..., n) code bits."""
    info_bits = np.asarray(info_bits)
    if info_bits.shape[-1] != spec.info_len:
        raise ValueError(
            f"expected {spec.info_len} info bits, got {info_bits.shape[-1]}"
        )
    u = np.zeros(info_bits.shape[:-1] + (spec.block_len,), dtype=int)
    u[..., spec.info_positions] = info_bits
    return _transform(u)


def _sc_recurse(llrs: np.ndarray, frozen_mask: np.ndarray):
    """Min-sum successive cancellation on (..., m) LLR blocks.

    Returns (u_bits, x_bits): the decided source bits and their re-encoded
    codeword bits for this subtree.
    """
    m = llrs.shape[-1]
    if m == 1:
        if frozen_mask[0]:
            u = np.zeros(llrs.shape[:-1] + (1,), dtype=int)
        else:
            u = (llrs > 0).astype(int)
        return u, u.copy()
    half = m // 2
    a, b = llrs[..., :half], llrs[..., half:]
    # check node: sign-min combine, negated for the positive-means-one
    # convention (the xor of two likely-one bits is likely zero)
    left_llrs = -np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
    u_left, x_left = _sc_recurse(left_llrs, frozen_mask[:half])
    # bit node: combine under the known left codeword
    right_llrs = b + (1 - 2 * x_left) * a
    u_right, x_right = _sc_recurse(right_llrs, frozen_mask[half:])
    u = np.concatenate([u_left, u_right], axis=-1)
    x = np.concatenate([x_left ^ x_right, x_right], axis=-1)
    return u, x


def polar_decode_sc(llrs, spec: PolarSpec) -> np.ndarray:
    """Successive-cancellation decode of (..., n) LLRs to (..., k) info bits.

    Frozen positions are forced to zero; a zero LLR resolves to bit 0.
    """
    llrs = np.asarray(llrs, dtype=float)
    if llrs.shape[-1] != spec.block_len:
        raise ValueError(f"expected {spec.block_len} LLRs, got {llrs.shape[-1]}")
    u_hat, _ = _sc_recurse(llrs, spec.frozen_mask)
    return u_hat[..., spec.info_positions]
