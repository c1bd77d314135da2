"""Constellation, codeword expansion, autocorrelation and template tests."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jbmocz.zeros import (
    ConstellationParams,
    aacf,
    aacf_closed_form,
    aacf_edge_scale,
    coeffs_to_zeros,
    default_radius,
    demap_zeros,
    encode_bits,
    make_template,
    power_spectrum,
    zeros_to_coeffs,
)

FIG2 = ConstellationParams(8, 1.176, 1.15)
FIG2_BITS = np.array([1, 0, 1, 1, 1, 0, 0, 1])


def brute_force_aacf(coeffs):
    """Direct double-sum correlation, the independent oracle."""
    k = len(coeffs) - 1
    out = np.zeros(2 * k + 1, dtype=complex)
    for lag in range(-k, k + 1):
        acc = 0.0 + 0.0j
        for i in range(k + 1):
            j = i + lag
            if 0 <= j <= k:
                acc += np.conj(coeffs[i]) * coeffs[j]
        out[lag + k] = acc
    return out


class TestConstellationParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            ConstellationParams(1, 1.1)
        with pytest.raises(ValueError):
            ConstellationParams(8, 1.0)
        with pytest.raises(ValueError):
            ConstellationParams(8, 1.1, 0.9)

    def test_derived_quantities(self):
        p = ConstellationParams(4, 1.5, 1.2)
        assert p.base_angle == pytest.approx(np.pi / 2)
        np.testing.assert_allclose(p.zero_radii, [1.8, 1.5, 1.5, 1.5])
        assert not p.is_huffman and ConstellationParams(4, 1.5).is_huffman


class TestEncodeBits:
    def test_fig2_jutted_zero(self):
        zeros = encode_bits(FIG2_BITS, FIG2)
        # first bit is 1: the jutted zero sits at 1.15*1.176 on the real axis
        assert zeros[0] == pytest.approx(1.15 * 1.176)
        assert zeros[0].imag == 0.0

    def test_huffman_all_outside(self):
        p = ConstellationParams(8, 1.3)
        zeros = encode_bits(np.ones(8, dtype=int), p)
        np.testing.assert_allclose(np.abs(zeros), 1.3, atol=1e-12)
        np.testing.assert_allclose(np.angle(zeros) % (2 * np.pi),
                                   2 * np.pi * np.arange(8) / 8, atol=1e-12)

    def test_k2_hand_case(self):
        zeros = encode_bits([0, 1], ConstellationParams(2, 1.5))
        np.testing.assert_allclose(zeros, [2 / 3, -1.5], atol=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            encode_bits([1, 0, 1], FIG2)


class TestZerosToCoeffs:
    def test_k2_hand_expansion(self):
        coeffs = zeros_to_coeffs(np.array([2 / 3, -1.5]), energy=3.0)
        ref = np.array([-1.0, 5 / 6, 1.0])
        ref *= np.sqrt(3.0) / np.linalg.norm(ref)
        np.testing.assert_allclose(coeffs, ref, atol=1e-12)

    def test_energy_contract(self):
        rng = np.random.default_rng(0)
        for k in (4, 16, 64):
            p = ConstellationParams(k, default_radius(k), 1.05)
            x = zeros_to_coeffs(encode_bits(rng.integers(0, 2, k), p))
            assert np.sum(np.abs(x) ** 2) == pytest.approx(k + 1, rel=1e-9)
            assert x[-1].imag == 0.0 and x[-1].real > 0

    def test_huffman_aacf_closed_form(self):
        p = ConstellationParams(8, 1.176)
        x = zeros_to_coeffs(encode_bits(np.random.default_rng(1).integers(0, 2, 8), p))
        got = brute_force_aacf(x)
        expected = np.zeros(17, dtype=complex)
        eta = aacf_edge_scale(p)
        expected[8] = 9.0
        expected[0] = expected[16] = -eta * 9.0
        np.testing.assert_allclose(got, expected, atol=1e-9)

    def test_bad_energy(self):
        with pytest.raises(ValueError):
            zeros_to_coeffs(np.array([1.0 + 0j]), energy=0.0)


class TestCoeffsToZeros:
    def test_hand_roots(self):
        roots = coeffs_to_zeros(np.array([6.0, -5.0, 1.0]))
        np.testing.assert_allclose(sorted(roots.real), [2, 3], atol=1e-9)
        np.testing.assert_allclose(roots.imag, 0, atol=1e-9)

    def test_round_trip_k16(self):
        p = ConstellationParams(16, 1.09, 1.1)
        bits = np.random.default_rng(2).integers(0, 2, 16)
        x = zeros_to_coeffs(encode_bits(bits, p))
        np.testing.assert_array_equal(demap_zeros(coeffs_to_zeros(x), p), bits)

    def test_wilkinson_roots_loose(self):
        # the ill-conditioned middle roots (condition ~5e13) wobble by ~1e-1
        # under double-precision rounding alone; the well-conditioned low
        # roots stay tight -- both facets of the classic instability
        coeffs = [1]
        for k in range(1, 21):
            coeffs = [0] + coeffs
            coeffs = [a - k * b for a, b in zip(coeffs, coeffs[1:] + [0])]
        w = np.array(coeffs, dtype=float)
        w /= np.linalg.norm(w)
        roots = np.sort(coeffs_to_zeros(w).real)
        np.testing.assert_allclose(roots, np.arange(1, 21), atol=0.25)
        np.testing.assert_allclose(roots[:6], np.arange(1, 7), atol=1e-3)

    def test_degenerate_leading(self):
        with pytest.raises(ArithmeticError):
            coeffs_to_zeros(np.array([1.0, 1.0, 0.0]))


class TestAacf:
    def test_zero_lag_is_energy(self):
        p = ConstellationParams(12, 1.07, 1.2)
        x = zeros_to_coeffs(encode_bits(np.random.default_rng(3).integers(0, 2, 12), p))
        a = aacf(x)
        assert a[12] == pytest.approx(13.0, rel=1e-9)

    def test_huffman_impulsive(self):
        p = ConstellationParams(10, 1.12)
        x = zeros_to_coeffs(encode_bits(np.random.default_rng(4).integers(0, 2, 10), p))
        a = aacf(x)
        eta = 1.0 / (1.12**10 + 1.12**-10)
        assert abs(a[0] + eta * 11) < 1e-9 and abs(a[-1] + eta * 11) < 1e-9
        np.testing.assert_allclose(a[1:10], 0, atol=1e-9)

    def test_codebook_invariance_pairs(self):
        rng = np.random.default_rng(5)
        for k in (4, 8, 16):
            p = ConstellationParams(k, default_radius(k), 1.1)
            for _ in range(100):
                x1 = zeros_to_coeffs(encode_bits(rng.integers(0, 2, k), p))
                x2 = zeros_to_coeffs(encode_bits(rng.integers(0, 2, k), p))
                np.testing.assert_allclose(aacf(x1), aacf(x2), atol=1e-9)

    def test_brute_force_oracle(self):
        rng = np.random.default_rng(6)
        for k in (4, 9, 16):
            p = ConstellationParams(k, default_radius(k), 1.15)
            x = zeros_to_coeffs(encode_bits(rng.integers(0, 2, k), p))
            np.testing.assert_allclose(aacf(x), brute_force_aacf(x), atol=1e-9)

    def test_conjugate_symmetry(self):
        x = np.random.default_rng(7).normal(size=6) + 1j * np.random.default_rng(8).normal(size=6)
        a = aacf(x)
        np.testing.assert_allclose(a, np.conj(a[::-1]), atol=1e-12)


class TestEdgeScale:
    def test_huffman_value(self):
        # oracle: -a_K/(K+1) read off a Huffman codeword's autocorrelation
        assert aacf_edge_scale(ConstellationParams(8, 1.176)) == pytest.approx(
            0.2543565335093761, abs=1e-12
        )

    def test_k2_closed_form(self):
        assert aacf_edge_scale(ConstellationParams(2, 2.0)) == pytest.approx(4 / 17)

    def test_jutted_matches_aacf(self):
        p = ConstellationParams(8, 1.176, 1.15)
        x = zeros_to_coeffs(encode_bits(np.random.default_rng(9).integers(0, 2, 8), p))
        oracle = -aacf(x)[-1].real / 9.0
        assert aacf_edge_scale(p) == pytest.approx(oracle, abs=1e-9)

    def test_reduction_to_huffman(self):
        rng = np.random.default_rng(10)
        for _ in range(50):
            k = int(rng.integers(2, 65))
            r = float(rng.uniform(1.005, 1.8))
            got = aacf_edge_scale(ConstellationParams(k, r))
            ref = 1.0 / (r**k + r**-k)
            assert got == pytest.approx(ref, rel=1e-12)


class TestPowerSpectrum:
    def test_huffman_peak(self):
        p = ConstellationParams(8, 1.176)
        eta = aacf_edge_scale(p)
        assert power_spectrum(p, np.pi / 8) == pytest.approx(9 * (1 + 2 * eta), rel=1e-12)

    def test_mean_is_energy(self):
        omega = 2 * np.pi * np.arange(4096) / 4096
        for params in (FIG2, ConstellationParams(16, 1.093, 1.15)):
            mean = np.mean(power_spectrum(params, omega))
            assert mean == pytest.approx(params.num_zeros + 1, rel=1e-9)

    def test_matches_explicit_codeword(self):
        rng = np.random.default_rng(11)
        x = zeros_to_coeffs(encode_bits(rng.integers(0, 2, 8), FIG2))
        omega = np.linspace(0, 2 * np.pi, 501)
        direct = np.abs(x @ np.exp(1j * np.outer(np.arange(9), omega))) ** 2
        spec = power_spectrum(FIG2, omega)
        np.testing.assert_allclose(spec, direct, rtol=1e-8)

    def test_positive_on_dense_grid(self):
        omega = 2 * np.pi * np.arange(4096) / 4096
        for params in (FIG2, ConstellationParams(64, 1.029, 1.072),
                       ConstellationParams(127, 1.018, 1.03),
                       ConstellationParams(4, 1.6)):
            assert np.all(power_spectrum(params, omega) >= 0)

    def test_closed_form_aacf_matches_brute_force(self):
        rng = np.random.default_rng(12)
        for k, r, zeta in [(8, 1.176, 1.15), (12, 1.1, 1.0), (16, 1.093, 1.3)]:
            p = ConstellationParams(k, r, zeta)
            x = zeros_to_coeffs(encode_bits(rng.integers(0, 2, k), p))
            np.testing.assert_allclose(aacf_closed_form(p), brute_force_aacf(x), atol=1e-9)


class TestTemplate:
    def test_huffman_periodicity(self):
        t = make_template(ConstellationParams(8, 1.176), 1024)
        np.testing.assert_allclose(t.samples, np.roll(t.samples, 1024 // 8), atol=1e-9)

    def test_jutted_peak_at_origin(self):
        t = make_template(ConstellationParams(16, 1.093, 1.15), 1024)
        assert int(np.argmax(t.samples)) == 0
        assert t.samples[0] > 1.5 * np.median(t.samples)

    def test_matches_oversampled_codeword(self):
        p = ConstellationParams(8, 1.176, 1.15)
        x = zeros_to_coeffs(encode_bits(np.random.default_rng(13).integers(0, 2, 8), p))
        t = make_template(p, 512)
        mags = 512 * np.abs(np.fft.ifft(x, 512))
        np.testing.assert_allclose(t.samples, mags, atol=1e-9)

    def test_minimum_size(self):
        with pytest.raises(ValueError):
            make_template(FIG2, 17)


class TestRoundTrip:
    @settings(max_examples=25, deadline=None)
    @given(st.integers(2, 64), st.integers(0, 2**32 - 1))
    def test_encode_expand_root_demap(self, k, seed):
        rng = np.random.default_rng(seed)
        p = ConstellationParams(k, default_radius(k), 1.0 if k % 2 else 1.08)
        bits = rng.integers(0, 2, k)
        x = zeros_to_coeffs(encode_bits(bits, p))
        np.testing.assert_array_equal(demap_zeros(coeffs_to_zeros(x), p), bits)
