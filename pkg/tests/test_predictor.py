import numpy as np
import pytest
from hypothesis import given, strategies as st

from mchist.errors import FitError, ParameterError
from mchist.phase import (PhaseContext, SpectralPoint, circle_angle_for_speed,
                          circle_norming_constant, expand_spectrum)
from mchist.predictor import decay_exponent_fit, predict, window_center, window_error
from mchist.scattering import ScatteringData
from mchist.soliton import SolitonData, field_on_y, profile_on_x_grid
from mchist.tfunc import TFunction


def circle_spectrum(speeds):
    gens = []
    for v in speeds:
        w = np.exp(1j * circle_angle_for_speed(v))
        gens.append(SpectralPoint(w, circle_norming_constant(w), "ON_CIRCLE"))
    return expand_spectrum(gens)


@given(st.floats(-2.0, 0.5), st.floats(0.1, 10.0))
def test_decay_fit_recovers_power(p, c):
    t = np.array([10.0, 20.0, 40.0, 80.0])
    assert decay_exponent_fit(np.c_[t, c * t ** p]) == pytest.approx(p, abs=1e-10)


def test_decay_fit_rejects_bad_input():
    for bad in ([[1, 1], [2, 1]], [[1, 1], [2, -1], [3, 1]], [[2, 1], [1, 1], [3, 1]],
                [[1, 1], [1, 1], [1, 1]]):
        with pytest.raises(FitError):
            decay_exponent_fit(bad)


def test_empty_lambda_gives_zero():
    sd = ScatteringData.reflectionless(circle_spectrum([3.0]))
    p = predict(sd, PhaseContext(6.0), 10.0, np.linspace(40, 80, 41))
    assert p.lambda_data.N == 0
    assert np.all(p.u_pred == 0)
    assert window_center(p) == pytest.approx(60.0 - p.shift)


def test_single_soliton_is_reproduced_exactly():
    spec = circle_spectrum([3.0])
    sd = ScatteringData.reflectionless(spec)
    t = 10.0
    x = np.linspace(10, 50, 401)
    p = predict(sd, PhaseContext(3.0), t, x)
    assert p.shift == 0 and p.T_i == 1
    exact = profile_on_x_grid(SolitonData.from_spectrum(spec), t, x)
    assert np.max(np.abs(p.u_pred - exact)) < 1e-8


def test_coordinate_limit_matches_T_at_i():
    """x - y -> -2 ln T(i) as y -> -inf when every pole is in Delta."""
    spec = circle_spectrum([3.0, 3.2])
    T = TFunction(PhaseContext(3.0), delta_poles=spec.zeta)
    x, _ = field_on_y(SolitonData.from_spectrum(spec), [-300.0], 0.0)
    assert x[0] + 300.0 == pytest.approx(-2 * np.log(T.T_at_i()).real, abs=1e-10)


@pytest.fixture(scope="module")
def two_speed():
    spec = circle_spectrum([3.0, 3.2])
    return spec, ScatteringData.reflectionless(spec), SolitonData.from_spectrum(spec)


def test_two_soliton_prediction_converges(two_speed):
    spec, sd, full = two_speed
    ctx = PhaseContext(3.0)
    errs, naive = [], []
    for t in (10.0, 20.0, 40.0, 80.0):
        x = np.linspace(3 * t - 60, 3 * t + 60, 2401)
        p = predict(sd, ctx, t, x)
        assert set(p.partition.delta) == {2, 3}
        exact = profile_on_x_grid(full, t, x)
        e, xc = window_error(p, x, exact)
        errs.append(e)
        sel = np.abs(x - xc) <= 0.05 * t
        bare = profile_on_x_grid(SolitonData.from_spectrum(spec, p.partition.lam), t, x[sel])
        naive.append(np.max(np.abs(exact[sel] - bare)))
    assert np.all(np.diff(errs) < 0)
    assert errs[-1] < 1e-4
    # without the T corrections the error does not decay
    assert min(naive) > 1.0


def test_prediction_diagnostics(two_speed):
    _, sd, _ = two_speed
    p = predict(sd, PhaseContext(3.0), 16.0, np.linspace(20, 60, 41), rho=0.2)
    assert p.diagnostics["error_scale"] == pytest.approx(16.0 ** -0.6)
    assert p.x_offset == -p.shift
    with pytest.raises(ParameterError):
        predict(sd, PhaseContext(3.0), 16.0, [0.0], rho=0.3)
    with pytest.raises(ParameterError):
        predict(sd, PhaseContext(3.0), 0.0, [0.0])
    with pytest.raises(ParameterError):
        window_error(p, np.array([1e4]), np.zeros(1))
