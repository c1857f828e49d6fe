import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from optofdm import channel, dsp
from optofdm.errors import ConfigError

from conftest import direct_circular_convolve, direct_convolve, direct_dft

D_REF = 8e-9  # reference RMS delay spread, seconds
TAP_DT = 0.75e-9
# Closed form 12*sqrt(11/13)*D evaluated at D = 8 ns (pins the envelope's
# power-weighted RMS delay spread to exactly D).
A_CEILING_8NS = 8.830715625674878e-08


class TestEnvelopes:
    def test_exp_decay_peak_value(self):
        assert channel.exp_decay_envelope(0.0, D_REF) == pytest.approx(1.25e8, rel=1e-12)

    def test_causal(self):
        assert channel.exp_decay_envelope(-1e-9, D_REF) == 0.0
        assert channel.ceiling_bounce_envelope(-1e-9, D_REF) == 0.0

    def test_exp_decay_unit_area_over_20d(self):
        area, _ = integrate.quad(channel.exp_decay_envelope, 0.0, 20.0 * D_REF, args=(D_REF,))
        assert abs(area - 1.0) <= 1e-6

    def test_ceiling_bounce_shape_parameter(self):
        # peak value is 6/a, which fixes a without reaching into the module
        peak = channel.ceiling_bounce_envelope(0.0, D_REF)
        assert peak == pytest.approx(6.0 / A_CEILING_8NS, rel=1e-12)
        assert peak == pytest.approx(67944663.31307612, rel=1e-12)

    def test_ceiling_bounce_unit_area(self):
        # scale-free invariant; D = 1 s keeps quad's infinite-range transform
        # away from nanosecond scales it cannot resolve
        area, _ = integrate.quad(channel.ceiling_bounce_envelope, 0.0, np.inf, args=(1.0,))
        assert abs(area - 1.0) <= 1e-9

    def test_ceiling_bounce_rms_delay_is_d(self):
        """Quadrature check: amplitude-squared weighting gives RMS spread D."""

        def moment(p):
            val, _ = integrate.quad(
                lambda t: t**p * channel.ceiling_bounce_envelope(t, 1.0) ** 2,
                0.0,
                np.inf,
                limit=200,
            )
            return val

        m0, m1, m2 = moment(0), moment(1), moment(2)
        mean = m1 / m0
        rms = math.sqrt(m2 / m0 - mean**2)
        assert rms == pytest.approx(1.0, rel=1e-6)

    def test_array_input(self):
        t = np.array([-1e-9, 0.0, D_REF])
        env = channel.exp_decay_envelope(t, D_REF)
        assert env.shape == (3,)
        assert env[0] == 0.0 and env[2] == pytest.approx(math.exp(-1.0) / D_REF)

    @pytest.mark.parametrize("bad_d", [0.0, -8e-9])
    def test_nonpositive_spread_rejected(self, bad_d):
        with pytest.raises(ConfigError):
            channel.exp_decay_envelope(0.0, bad_d)
        with pytest.raises(ConfigError):
            channel.ceiling_bounce_envelope(0.0, bad_d)


class TestImpulseResponse:
    def test_two_tap_moments(self):
        h = channel.ImpulseResponse(np.array([0.8, 0.6]), 1e-9)
        assert h.energy() == pytest.approx(1.0, abs=1e-15)
        assert h.rms_delay_spread() == pytest.approx(4.8e-10, rel=1e-12)
        np.testing.assert_array_equal(h.delays, [0.0, 1e-9])
        assert h.tap_count == 2

    def test_identity(self):
        h = channel.identity_ir(TAP_DT)
        assert h.tap_count == 1 and h.energy() == 1.0 and h.rms_delay_spread() == 0.0

    def test_all_zero_taps_have_zero_spread(self):
        assert channel.ImpulseResponse(np.zeros(4), 1e-9).rms_delay_spread() == 0.0

    @pytest.mark.parametrize(
        "taps, spacing",
        [
            (np.zeros((2, 2)), 1e-9),
            (np.array([]), 1e-9),
            (np.array([1.0, -0.1]), 1e-9),
            (np.array([np.nan]), 1e-9),
            (np.array([1.0]), 0.0),
            (np.array([1.0]), -1e-9),
        ],
    )
    def test_validation(self, taps, spacing):
        with pytest.raises(ConfigError):
            channel.ImpulseResponse(taps, spacing)


class TestRandomDiffuse:
    def test_unit_energy(self, rng):
        h = channel.random_diffuse_ir(D_REF, TAP_DT, 64, rng)
        assert abs(h.energy() - 1.0) <= 1e-12

    def test_nonnegative_taps(self, rng):
        for _ in range(20):
            h = channel.random_diffuse_ir(D_REF, TAP_DT, 64, rng)
            assert np.all(h.taps >= 0.0)

    def test_half_of_taps_use_ceiling_envelope(self, rng):
        h = channel.random_diffuse_ir(D_REF, TAP_DT, 64, rng)
        assert h.ceiling_mask.sum() == 32
        h = channel.random_diffuse_ir(D_REF, TAP_DT, 7, rng)
        assert h.ceiling_mask.sum() == 3

    def test_span(self, rng):
        h = channel.random_diffuse_ir(D_REF, TAP_DT, 64, rng)
        assert h.delays[-1] == pytest.approx(47.25e-9)

    def test_seeded_reproducibility(self):
        h1 = channel.random_diffuse_ir(D_REF, TAP_DT, 64, np.random.default_rng(5))
        h2 = channel.random_diffuse_ir(D_REF, TAP_DT, 64, np.random.default_rng(5))
        h3 = channel.random_diffuse_ir(D_REF, TAP_DT, 64, np.random.default_rng(6))
        np.testing.assert_array_equal(h1.taps, h2.taps)
        np.testing.assert_array_equal(h1.ceiling_mask, h2.ceiling_mask)
        assert not np.array_equal(h1.taps, h3.taps)

    def test_single_tap_normalizes_to_unity(self, rng):
        h = channel.random_diffuse_ir(D_REF, TAP_DT, 1, rng)
        np.testing.assert_array_equal(h.taps, [1.0])

    def test_invalid_parameters(self, rng):
        with pytest.raises(ConfigError):
            channel.random_diffuse_ir(D_REF, TAP_DT, 0, rng)
        with pytest.raises(ConfigError):
            channel.random_diffuse_ir(D_REF, 0.0, 64, rng)


class TestApplyChannel:
    def test_impulse_reveals_taps(self):
        h = channel.ImpulseResponse(np.array([0.8, 0.6]), TAP_DT)
        y = channel.apply_channel([1.0, 0.0, 0.0, 0.0], h, channel.NoiseSpec(0.0))
        np.testing.assert_allclose(y, [0.8, 0.6, 0.0, 0.0], atol=1e-15)

    def test_identity_is_exact(self, rng):
        x = rng.standard_normal(512)
        y = channel.apply_channel(x, channel.identity_ir(TAP_DT), channel.NoiseSpec(0.0))
        np.testing.assert_array_equal(y, x)

    def test_matches_direct_convolution(self, rng):
        x = rng.standard_normal(300)
        taps = rng.uniform(0.0, 1.0, size=17)
        h = channel.ImpulseResponse(taps, TAP_DT)
        y = channel.apply_channel(x, h, channel.NoiseSpec(0.0))
        np.testing.assert_allclose(y, direct_convolve(x, taps), atol=1e-12)

    @given(
        seed=st.integers(0, 2**32 - 1),
        n=st.integers(2, 1024),
        m=st.integers(1, 64),
    )
    @settings(max_examples=25, deadline=None)
    def test_convolution_oracle_property(self, seed, n, m):
        gen = np.random.default_rng(seed)
        x = gen.standard_normal(n)
        taps = gen.uniform(0.0, 1.0, size=min(m, n))
        h = channel.ImpulseResponse(taps, TAP_DT)
        y = channel.apply_channel(x, h, channel.NoiseSpec(0.0))
        scale = max(1.0, float(np.max(np.abs(y))))
        np.testing.assert_allclose(y, direct_convolve(x, taps), atol=1e-12 * scale)

    def test_noise_statistics(self):
        target = 2.5
        y = channel.apply_channel(
            np.zeros(10_000_000),
            channel.identity_ir(TAP_DT),
            channel.NoiseSpec(target, seed=99),
        )
        assert abs(np.var(y) - target) <= 0.01 * target
        assert abs(np.mean(y)) <= 4.0 * math.sqrt(target / y.size)

    def test_noise_is_reproducible(self):
        x = np.zeros(100)
        h = channel.identity_ir(TAP_DT)
        y1 = channel.apply_channel(x, h, channel.NoiseSpec(1.0, seed=123))
        y2 = channel.apply_channel(x, h, channel.NoiseSpec(1.0, seed=123))
        np.testing.assert_array_equal(y1, y2)

    def test_sample_time_must_match_tap_spacing(self):
        h = channel.identity_ir(TAP_DT)
        with pytest.raises(ConfigError):
            channel.apply_channel([1.0], h, channel.NoiseSpec(0.0), sample_time=1e-9)
        channel.apply_channel([1.0], h, channel.NoiseSpec(0.0), sample_time=TAP_DT)

    def test_input_must_be_1d(self):
        h = channel.identity_ir(TAP_DT)
        with pytest.raises(ConfigError):
            channel.apply_channel(np.zeros((2, 4)), h, channel.NoiseSpec(0.0))
        with pytest.raises(ConfigError):
            channel.apply_channel(np.zeros(0), h, channel.NoiseSpec(0.0))

    def test_negative_variance_rejected(self):
        with pytest.raises(ConfigError):
            channel.NoiseSpec(-1.0)


class TestConvolveStreams:
    def test_matches_apply_channel_rows(self, rng):
        x = rng.standard_normal((3, 128))
        taps = rng.uniform(0.0, 1.0, size=(3, 9))
        out = channel.convolve_streams(x, taps)
        for i in range(3):
            h = channel.ImpulseResponse(taps[i], TAP_DT)
            np.testing.assert_allclose(
                out[i], channel.apply_channel(x[i], h, channel.NoiseSpec(0.0)), atol=1e-12
            )

    def test_batch_mismatch_rejected(self, rng):
        with pytest.raises(ConfigError):
            channel.convolve_streams(np.zeros((2, 16)), np.zeros((3, 4)))
        with pytest.raises(ConfigError):
            channel.convolve_streams(np.zeros((2, 4)), np.zeros((2, 5)))


class TestFrequencyResponse:
    def test_identity_is_flat(self):
        resp = channel.channel_frequency_response(channel.identity_ir(TAP_DT), 16)
        np.testing.assert_array_equal(resp, np.ones(16, dtype=complex))

    def test_two_equal_taps_null_at_nyquist(self):
        h = channel.ImpulseResponse(np.array([0.5, 0.5]), TAP_DT)
        resp = channel.channel_frequency_response(h, 8)
        assert resp[0] == pytest.approx(1.0, abs=1e-15)
        assert abs(resp[4]) <= 1e-15

    def test_matches_dft_oracle(self, rng):
        taps = rng.uniform(0.0, 1.0, size=11)
        h = channel.ImpulseResponse(taps, TAP_DT)
        padded = np.zeros(64, dtype=complex)
        padded[:11] = taps
        np.testing.assert_allclose(
            channel.channel_frequency_response(h, 64), direct_dft(padded), atol=1e-12
        )

    def test_channel_longer_than_frame_rejected(self, rng):
        h = channel.ImpulseResponse(np.ones(17) / 17, TAP_DT)
        with pytest.raises(ConfigError):
            channel.channel_frequency_response(h, 16)

    def test_circular_convolution_theorem(self, rng):
        n = 64
        taps = rng.uniform(0.0, 1.0, size=9)
        h = channel.ImpulseResponse(taps, TAP_DT)
        padded = np.zeros(n)
        padded[:9] = taps
        x = rng.standard_normal(n)
        lhs = dsp.fft(direct_circular_convolve(x, padded))
        rhs = channel.channel_frequency_response(h, n) * dsp.fft(x)
        np.testing.assert_allclose(lhs, rhs, atol=1e-10 * n)

    def test_per_subcarrier_model_is_exact_with_cp(self, rng):
        """CP at least taps-1 long: FFT(stripped RX frame) == H * FFT(frame)."""
        n, cp = 64, 16
        taps = rng.uniform(0.0, 1.0, size=9)
        h = channel.ImpulseResponse(taps, TAP_DT)
        x = rng.standard_normal(n)
        tx = np.concatenate([x[-cp:], x])
        y = channel.apply_channel(tx, h, channel.NoiseSpec(0.0))
        lhs = dsp.fft(y[cp:])
        rhs = channel.channel_frequency_response(h, n) * dsp.fft(x)
        np.testing.assert_allclose(lhs, rhs, atol=1e-10)


class TestChannelDump:
    def test_row_per_tap_and_exact_amplitudes(self, rng):
        h = channel.random_diffuse_ir(D_REF, TAP_DT, 16, rng)
        text = channel.format_channel_dump(h, D_REF, seed=42)
        rows = [line for line in text.splitlines() if not line.startswith("#")]
        assert len(rows) == 16
        amps = np.array([float(row.split()[2]) for row in rows])
        np.testing.assert_array_equal(amps, h.taps)  # repr round-trips exactly
        assert "# seed = 42" in text
        assert "# taps = 16" in text

    def test_identity_dump_has_no_partition(self):
        text = channel.format_channel_dump(channel.identity_ir(TAP_DT), D_REF, seed=None)
        assert "# ceiling_bounce_taps = -" in text
        assert "# exp_decay_taps = -" in text
