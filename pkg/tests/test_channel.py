import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import molsig as m
from molsig.channel import log_peak_response

FREE = m.ChannelModel.FREE_DIFFUSION
DRIFT = m.ChannelModel.DRIFT_DIFFUSION


class TestChannelParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            m.ChannelParams(FREE, 0.0, 1e-9, 1.0)
        with pytest.raises(ValueError):
            m.ChannelParams(FREE, 1.0, -1e-9, 1.0)
        with pytest.raises(ValueError):
            m.ChannelParams(FREE, 1.0, 1e-9, 0.0)
        with pytest.raises(ValueError):
            m.ChannelParams(DRIFT, 1.0, 1e-9, 1.0)  # missing velocity
        with pytest.raises(ValueError):
            m.ChannelParams(DRIFT, 1.0, 1e-9, 1.0, -0.5)
        with pytest.raises(ValueError):
            m.ChannelParams(FREE, 1.0, 1e-9, 1.0, 0.5)  # velocity on free model
        with pytest.raises(ValueError):
            m.ChannelParams("free", 1.0, 1e-9, 1.0)

    def test_zero_drift_allowed(self):
        p = m.ChannelParams(DRIFT, 1.0, 1e-9, 1.0, 0.0)
        assert p.drift_shift == 0.0


class TestFreeResponse:
    def test_peak_formula(self):
        p = m.ChannelParams(FREE, 2.5, 1e-9, 50.0)
        expected = 2.5 / (4.0 * math.pi * 1e-9 * 50.0)
        assert m.free_diffusion_response(0.0, p) == pytest.approx(expected, rel=1e-14)

    def test_reference_parameter_set(self):
        # M = 1, D = 1e-5 cm^2/s = 1e-9 m^2/s, t = 300 s
        p = m.ChannelParams(FREE, 1.0, 1e-9, 300.0)
        assert m.free_diffusion_response(0.0, p) == pytest.approx(
            265258.23848649223, rel=1e-12)

    def test_strictly_decreasing(self):
        p = m.ChannelParams(FREE, 1.0, 1e-9, 300.0)
        x = np.linspace(0.0, 5e-3, 400)
        y = m.free_diffusion_response(x, p)
        assert np.all(np.diff(y) < 0.0)

    def test_log_concave(self):
        p = m.ChannelParams(FREE, 1.0, 1e-9, 300.0)
        x = np.linspace(0.0, 3e-3, 200)
        logy = np.log(m.free_diffusion_response(x, p))
        assert np.all(np.diff(logy, 2) < 0.0)

    def test_negative_distance_rejected(self):
        p = m.ChannelParams(FREE, 1.0, 1e-9, 300.0)
        with pytest.raises(ValueError):
            m.free_diffusion_response(-1e-6, p)

    def test_positive_and_underflows_gracefully(self):
        p = m.ChannelParams(FREE, 1.0, 1e-9, 300.0)
        assert m.free_diffusion_response(1e-3, p) > 0.0
        assert m.free_diffusion_response(10.0, p) == 0.0  # exponent below float range

    def test_model_mismatch(self):
        p = m.ChannelParams(DRIFT, 1.0, 1e-9, 300.0, 0.0)
        with pytest.raises(ValueError):
            m.free_diffusion_response(0.0, p)


class TestDriftResponse:
    def test_peak_at_drift_displacement(self):
        p = m.ChannelParams(DRIFT, 1.0, 1e-9, 300.0, 1e-5)
        peak = 1.0 / math.sqrt(4.0 * math.pi * 1e-9 * 300.0)
        assert m.drift_diffusion_response(p.drift_shift, p) == pytest.approx(
            peak, rel=1e-14)

    def test_reference_parameter_set(self):
        p = m.ChannelParams(DRIFT, 1.0, 1e-9, 300.0, 0.0)
        assert m.drift_diffusion_response(0.0, p) == pytest.approx(
            515.0322693642528, rel=1e-12)

    def test_zero_drift_reduces_to_undrifted_gaussian(self):
        p = m.ChannelParams(DRIFT, 1.0, 1e-9, 300.0, 0.0)
        x = np.linspace(0.0, 3e-3, 100)
        expected = np.exp(-x * x / p.four_dt) / math.sqrt(math.pi * p.four_dt)
        assert np.allclose(m.drift_diffusion_response(x, p), expected, rtol=1e-13)

    def test_symmetric_about_peak(self):
        p = m.ChannelParams(DRIFT, 1.0, 1e-9, 100.0, 2e-5)
        vt = p.drift_shift
        delta = np.linspace(0.0, vt, 50)
        assert np.allclose(
            m.drift_diffusion_response(vt + delta, p),
            m.drift_diffusion_response(vt - delta, p),
            rtol=1e-12,
        )


class TestResponseInverse:
    def test_peak_maps_to_zero_exactly(self):
        for p in (
            m.ChannelParams(FREE, 1.0, 1e-9, 300.0),
            m.ChannelParams(DRIFT, 3.0, 2e-9, 100.0, 1e-5),
        ):
            assert m.response_inverse(m.peak_response(p), p) == 0.0

    def test_unit_log_offset(self):
        p = m.ChannelParams(FREE, 1.0, 1e-9, 300.0)
        y = m.peak_response(p) * math.exp(-1.0)
        assert m.response_inverse(y, p) == pytest.approx(p.four_dt, rel=1e-12)

    @pytest.mark.parametrize("model", [FREE, DRIFT])
    def test_round_trip_relative_accuracy(self, model):
        # strict 1e-12 wherever float64 can carry z through y: the signal
        # value stores z/(4Dt) only down to ~1e-16 absolute, so the
        # relative contract applies for z/(4Dt) >= 1e-2
        v = 1e-5 if model is DRIFT else None
        p = m.ChannelParams(model, 1.0, 1e-9, 300.0, v)
        z = np.logspace(np.log10(p.four_dt * 1e-2), np.log10(p.four_dt * 700.0), 60)
        x = np.sqrt(z) + (p.drift_shift if model is DRIFT else 0.0)
        y = m.response(x, p)
        back = m.response_inverse(y, p)
        assert np.all(np.abs(back - z) <= 1e-12 * z)

    @pytest.mark.parametrize("model", [FREE, DRIFT])
    def test_round_trip_over_twelve_decades(self, model):
        # across 12 decades of z the error never exceeds the larger of the
        # relative target and the float64 information floor of the signal
        v = 1e-5 if model is DRIFT else None
        p = m.ChannelParams(model, 1.0, 1e-9, 300.0, v)
        top = 700.0 * p.four_dt
        z = np.logspace(np.log10(top) - 12.0, np.log10(top), 100)
        x = np.sqrt(z) + (p.drift_shift if model is DRIFT else 0.0)
        back = m.response_inverse(m.response(x, p), p)
        floor = 2e-15 * p.four_dt
        assert np.all(np.abs(back - z) <= np.maximum(1e-12 * z, floor))

    def test_domain_errors(self):
        p = m.ChannelParams(FREE, 1.0, 1e-9, 300.0)
        with pytest.raises(ValueError):
            m.response_inverse(0.0, p)
        with pytest.raises(ValueError):
            m.response_inverse(-1.0, p)
        with pytest.raises(ValueError):
            m.response_inverse(m.peak_response(p) * 1.001, p)


@given(
    d=st.floats(1e-12, 1e-3),
    t=st.floats(1e-2, 1e6),
    mol=st.floats(1e-6, 1e9),
    frac=st.floats(1e-4, 1.0),
)
@settings(max_examples=150, deadline=None)
def test_round_trip_property(d, t, mol, frac):
    p = m.ChannelParams(FREE, mol, d, t)
    z = frac * 500.0 * p.four_dt  # exp argument within float range
    y = math.exp(log_peak_response(p) - z / p.four_dt)
    if y > 0.0 and math.isfinite(y):
        assert m.response_inverse(y, p) == pytest.approx(z, rel=1e-11)
