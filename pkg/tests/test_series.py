import numpy as np
import pytest

from edalti.errors import InvalidParameterError
from edalti.series import (
    EventSchedule,
    ScreeningConfig,
    UniformSeries,
    butterworth_coefficients,
    butterworth_lowpass,
    decimate,
    detect_responses,
    screen_validity,
    trim,
)


def make_series(samples, dt=0.1, t0=0.0):
    return UniformSeries(np.asarray(samples, dtype=float), dt, t0)


class TestUniformSeries:
    def test_invariants(self):
        with pytest.raises(InvalidParameterError):
            make_series([1.0, np.nan])
        with pytest.raises(InvalidParameterError):
            make_series([])
        with pytest.raises(InvalidParameterError):
            UniformSeries(np.array([1.0]), 0.0)

    def test_immutability(self):
        s = make_series([1.0, 2.0])
        with pytest.raises(ValueError):
            s.samples[0] = 5.0

    def test_times(self):
        s = make_series([1, 2, 3], dt=0.5, t0=10.0)
        assert np.allclose(s.times(), [10.0, 10.5, 11.0])
        assert s.duration == 1.0
        assert s.end_time == 11.0


class TestEventSchedule:
    def test_ordering_enforced(self):
        with pytest.raises(InvalidParameterError):
            EventSchedule((5.0, 5.0), ("a", "b"))
        with pytest.raises(InvalidParameterError):
            EventSchedule((5.0, 3.0), ("a", "b"))
        with pytest.raises(InvalidParameterError):
            EventSchedule((1.0, 2.0), ("a",))

    def test_basic(self):
        ev = EventSchedule((1.0, 2.0, 3.5), ("n", "a", "n"))
        assert len(ev) == 3


class TestButterworth:
    def test_dc_gain_exactly_one(self):
        b, a = butterworth_coefficients(5.0, 2, 32.0)
        assert abs(np.sum(b) / np.sum(a) - 1.0) < 1e-9

    def test_constant_passthrough(self):
        # steady-state initialization keeps a constant input constant
        s = make_series(np.full(200, 3.7), dt=1 / 32)
        out = butterworth_lowpass(s, 5.0, order=2)
        assert np.allclose(out.samples, 3.7, atol=1e-12)
        assert len(out) == len(s)
        assert out.sample_interval == s.sample_interval

    def test_cutoff_attenuation_measured(self):
        # steady-state sinusoid amplitude at the cutoff: 1/sqrt(2) within 0.1 dB
        fs, fc = 32.0, 5.0
        t = np.arange(0, 40.0, 1 / fs)
        s = make_series(np.sin(2 * np.pi * fc * t), dt=1 / fs)
        out = butterworth_lowpass(s, fc, order=2)
        tail = out.samples[len(t) // 2:]          # >= 20 cycles past transient
        ratio = np.max(np.abs(tail))
        db = 20 * np.log10(ratio)
        assert abs(db - (-3.0103)) < 0.1

    def test_stopband_attenuation(self):
        # 12 Hz noise on a 32 Hz-sampled slow signal: attenuated >= 14 dB.
        # The noise-only response is isolated by linearity (filtered noisy
        # minus filtered clean) so trend leakage cannot mask a 50 uV tone.
        fs = 32.0
        t = np.arange(0, 60.0, 1 / fs)
        slow = 2.0 + 0.5 * np.exp(-t / 30.0)
        noise = 50e-6 * np.sin(2 * np.pi * 12.0 * t)
        noisy = butterworth_lowpass(make_series(slow + noise, dt=1 / fs), 5.0, 2)
        clean = butterworth_lowpass(make_series(slow, dt=1 / fs), 5.0, 2)
        residual = (noisy.samples - clean.samples)[t.size // 2:]
        spec_in = np.fft.rfft(noise[t.size // 2:])
        spec_out = np.fft.rfft(residual)
        freqs = np.fft.rfftfreq(residual.size, 1 / fs)
        k = np.argmin(np.abs(freqs - 12.0))
        atten_db = 20 * np.log10(np.abs(spec_in[k]) / np.abs(spec_out[k]))
        assert atten_db >= 14.0

    def test_cutoff_at_nyquist_rejected(self):
        s = make_series(np.zeros(10), dt=0.1)
        with pytest.raises(InvalidParameterError):
            butterworth_lowpass(s, 5.0, 2)
        with pytest.raises(InvalidParameterError):
            butterworth_lowpass(s, 6.0, 2)
        with pytest.raises(InvalidParameterError):
            butterworth_lowpass(s, 1.0, 7)


class TestDecimate:
    def test_non_integer_ratio_rejected(self):
        s = make_series(np.zeros(320), dt=1 / 32)
        with pytest.raises(InvalidParameterError):
            decimate(s, 10.0)

    def test_every_second_sample(self):
        s = make_series([1, 2, 3, 4], dt=0.05)
        out = decimate(s, 10.0)
        assert np.array_equal(out.samples, [1, 3])
        assert out.sample_interval == pytest.approx(0.1)

    def test_identity(self):
        s = make_series([1, 2, 3], dt=0.1)
        out = decimate(s, 10.0)
        assert np.array_equal(out.samples, s.samples)

    def test_composition(self):
        rng = np.random.default_rng(0)
        s = make_series(rng.standard_normal(240), dt=1 / 120)
        two_step = decimate(decimate(s, 60.0), 20.0)
        one_step = decimate(s, 20.0)
        assert np.array_equal(two_step.samples, one_step.samples)
        assert two_step.sample_interval == one_step.sample_interval


class TestTrim:
    def test_basic_window(self):
        s = make_series(np.arange(6001, dtype=float), dt=0.1)
        out = trim(s, 180.0, 600.0)
        assert out.start_time == pytest.approx(180.0)
        assert out.end_time == pytest.approx(600.0)
        assert len(out) == 4201

    def test_identity(self):
        s = make_series(np.arange(100, dtype=float), dt=0.1)
        out = trim(s, 0.0, s.end_time)
        assert np.array_equal(out.samples, s.samples)

    def test_reversed_bounds_rejected(self):
        s = make_series(np.arange(6001, dtype=float), dt=0.1)
        with pytest.raises(InvalidParameterError):
            trim(s, 500.0, 100.0)
        with pytest.raises(InvalidParameterError):
            trim(s, -5.0, 100.0)
        with pytest.raises(InvalidParameterError):
            trim(s, 0.0, 1e6)


class TestDetectResponses:
    def test_monotone_has_no_pairs(self):
        assert detect_responses(np.linspace(0, 1, 50), 0.01) == []

    def test_single_bump(self):
        x = np.concatenate([np.linspace(1, 0.5, 20), np.linspace(0.5, 1.5, 30),
                            np.linspace(1.5, 1.0, 25)])
        pairs = detect_responses(x, 0.01)
        assert len(pairs) == 1
        valley, peak, amp = pairs[0]
        assert valley == 19
        assert x[peak] == pytest.approx(1.5)
        assert amp == pytest.approx(1.0, abs=1e-9)

    def test_plateau_tie_breaks_at_first_sample(self):
        x = np.array([3, 2, 2, 2, 3, 4, 4, 3], dtype=float)
        pairs = detect_responses(x, 0.5)
        assert pairs == [(1, 5, 2.0)]

    def test_subthreshold_rise_ignored(self):
        x = np.array([1.0, 0.999, 1.003, 1.0])
        assert detect_responses(x, 0.01) == []


class TestScreenValidity:
    def test_all_zero_flat(self):
        s = make_series(np.zeros(601), dt=0.1)
        report = screen_validity(s)
        assert report.flat_segments == ((0.0, 60.0),)
        assert not report.has_scr
        assert not report.usable

    def test_drop_artifact_flagged(self):
        x = 2.0 + 0.3 * np.sin(np.linspace(0, 6 * np.pi, 600))
        x[300:] -= 1.0
        report = screen_validity(make_series(x, dt=0.1))
        assert len(report.drop_artifacts) == 1
        start, end = report.drop_artifacts[0]
        assert start == pytest.approx(29.9)
        assert end == pytest.approx(30.0)
        assert not report.usable

    def test_deterministic(self):
        rng = np.random.default_rng(7)
        s = make_series(2 + np.abs(rng.standard_normal(500)), dt=0.1)
        r1 = screen_validity(s)
        r2 = screen_validity(s)
        assert r1 == r2

    def test_flat_above_minimum_not_flagged(self):
        # constant stretch well above the series minimum is not a flat-at-floor flag
        x = np.concatenate([np.linspace(0.5, 2.0, 100), np.full(200, 2.0),
                            2.0 + 0.3 * np.sin(np.linspace(0, 3 * np.pi, 300))])
        report = screen_validity(make_series(x, dt=0.1))
        assert report.flat_segments == ()

    def test_custom_thresholds(self):
        # one small SCR-ish bump on a declining baseline
        x = np.linspace(1.4, 1.0, 400)
        x[100:140] += 0.05 * np.sin(np.linspace(0, np.pi, 40))
        cfg = ScreeningConfig(flat_min_duration=5.0, min_scr_amplitude=0.01)
        report = screen_validity(make_series(x, dt=0.1), cfg)
        assert report.has_scr
