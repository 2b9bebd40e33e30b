import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from mchist.errors import DegeneracyError, DomainError, ParameterError, SingularityError
from mchist.phase import (Kind, PhaseContext, Regime, SpectralPoint, breather_speed,
                          check_sector_bound, circle_angle_for_speed, circle_speed,
                          expand_spectrum, im_theta, partition_spectrum, sector_bound_gap,
                          signature_grid, theta, uniformize)

finite = st.floats(-4, 4, allow_nan=False)
zs = st.builds(complex, finite, finite).filter(
    lambda z: abs(z) > 0.05 and abs(z - 1j) > 0.05 and abs(z + 1j) > 0.05)
xis = st.one_of(st.floats(-5, -0.31), st.floats(2.06, 8))


def test_context_regimes():
    assert PhaseContext(-0.3).regime is Regime.LEFT
    assert PhaseContext(2.5).regime is Regime.RIGHT
    for bad in (0.0, -0.25, 2.0, 2.04):
        with pytest.raises(ParameterError):
            PhaseContext(bad, 0.05)


def test_uniformize_examples():
    assert np.allclose(uniformize(1j), (-1, 0))
    assert np.allclose(uniformize(1), (0, 1))
    assert np.allclose(uniformize(2), (0.75j, 1.25))
    with pytest.raises(DomainError):
        uniformize(0)


@given(zs)
def test_uniformize_identity(z):
    k, lam = uniformize(z)
    assert abs(k * k + lam * lam - 1) < 1e-12 * max(1, abs(k) ** 2)


def test_theta_examples():
    assert theta(1.0, -0.3) == 0
    z = 1.3 + 0.4j
    assert abs(theta(-1 / z, -0.3) - theta(z, -0.3)) < 1e-14
    phi = np.pi / 3
    th = theta(np.exp(1j * phi), -0.3)
    want = -(np.sin(phi) / 2) * (-0.3 - 2 / np.cos(phi) ** 2)
    assert abs(th.real) < 1e-14 and abs(th.imag - want) < 1e-13
    for s in (0, 1j, -1j):
        with pytest.raises(SingularityError):
            theta(s, -0.3)


@given(zs, xis)
def test_theta_symmetries(z, xi):
    t = theta(z, xi)
    scale = max(1.0, abs(t))
    assert abs(theta(np.conj(z), xi) - np.conj(t)) < 1e-12 * scale
    assert abs(theta(-1 / z, xi) - t) < 1e-12 * scale
    assert abs(theta(-np.conj(z), xi) + np.conj(t)) < 1e-12 * scale


@given(st.floats(0.01, np.pi - 0.01).filter(lambda a: abs(a - np.pi / 2) > 0.05), xis)
def test_theta_real_part_vanishes_on_circle(phi, xi):
    t = theta(np.exp(1j * phi), xi)
    assert abs(t.real) < 1e-12 * max(1.0, abs(t))


@given(zs, xis)
def test_im_theta_two_paths(z, xi):
    a = im_theta(z, xi)
    b = im_theta(z, xi, method="expanded")
    assert abs(a - b) <= 1e-12 * max(1.0, abs(theta(z, xi)))


def test_im_theta_examples():
    assert im_theta(1.7, -0.3) == 0
    z = 0.5 + 0.5j
    mz = mp.mpc(0.5, 0.5)
    want = mp.im(-mp.mpf(1) / 4 * (mz - 1 / mz) * (mp.mpf(-0.3) - 8 / (mz + 1 / mz) ** 2))
    assert abs(im_theta(z, -0.3) - float(want)) < 1e-14
    z = 1.2 + 0.7j
    assert im_theta(np.conj(z), -0.3) == pytest.approx(-im_theta(z, -0.3), rel=1e-14)


def test_signature_grid():
    ctx = PhaseContext(2.5)
    X, Y, S = signature_grid(ctx, (-2, 2, -2, 2), 41)
    assert np.isnan(S[20, 20])  # z = 0
    assert np.isnan(S[30, 20])  # z = i
    assert np.all(S[20, np.abs(X[20]) > 1e-9] == 0)  # real axis
    phi = np.arccos(np.sqrt(2 / 2.5))
    # unit-circle point on the zero set
    assert abs(im_theta(np.exp(1j * phi), ctx)) < 1e-14
    _, _, S2 = signature_grid(PhaseContext(-0.3), (1, 2, 1, 2), 2)
    assert S2[0, 0] == 1  # z = 1 + i
    assert im_theta(1 + 1j, -0.3) > 0


def test_sector_case_two_positive_constant():
    xi = 2.5
    phi = 0.5 * np.arccos(2 / xi)
    rep = check_sector_bound(PhaseContext(xi), phi, 20000, seed=1)
    assert rep.violations == 0 and rep.margin > 0


def test_sector_left_narrow_sector_holds():
    rep = check_sector_bound(PhaseContext(-0.3, 0.05), 0.1, 20000, seed=2)
    assert rep.violations == 0


def test_sector_left_counterexample_high_precision():
    """A point of the pi/16 sector where the LEFT bound fails, checked
    independently in 50-digit arithmetic."""
    mp.mp.dps = 50
    z = mp.mpf(3.7) * mp.expj(mp.mpf("0.19"))
    th = -(z - 1 / z) / 4 * (mp.mpf("-0.3") - 8 / (z + 1 / z) ** 2)
    assert mp.im(th) < mp.mpf("0.05") / 4 * mp.im(z)
    zz = 3.7 * np.exp(0.19j)
    assert sector_bound_gap(zz, PhaseContext(-0.3, 0.05)) < 0


def test_sector_bound_on_real_axis_equality():
    ctx = PhaseContext(-0.3, 0.05)
    assert np.all(sector_bound_gap(np.array([0.5, 2.0, -3.0]), ctx) == 0)


def test_sector_phi_range():
    with pytest.raises(ParameterError):
        check_sector_bound(PhaseContext(-0.3), 0.5, 10, 0)


def test_expand_off_circle_literal():
    z = 1.5 * np.exp(1j * np.pi / 3)
    spec = expand_spectrum([SpectralPoint(z, 1.0, Kind.OFF_CIRCLE)])
    want_z = [z, -np.conj(z), 1 / np.conj(z), -1 / z]
    want_c = [1, 1, -np.conj(z) ** -2, -z ** -2]
    assert np.allclose(spec.zeta, want_z) and np.allclose(spec.C, want_c)
    assert np.allclose(np.abs(spec.zeta), [1.5, 1.5, 2 / 3, 2 / 3])


def test_expand_on_circle_literal():
    w = np.exp(3j * np.pi / 4)
    spec = expand_spectrum([SpectralPoint(w, 0.5j, "ON_CIRCLE")])
    assert np.allclose(spec.zeta, [w, np.exp(1j * np.pi / 4)])
    assert np.allclose(spec.C, [0.5j, -0.5j])


def test_expand_rejects_imaginary_axis():
    with pytest.raises(DegeneracyError):
        expand_spectrum([SpectralPoint(2j, 1.0, "OFF_CIRCLE")])


def test_partition_on_circle_lambda():
    w = np.exp(3j * np.pi / 4)
    spec = expand_spectrum([SpectralPoint(w, 1.0, "ON_CIRCLE")])
    part = partition_spectrum(spec, PhaseContext(2 / np.cos(np.pi / 4) ** 2))
    assert set(part.lam) == {0, 1} and part.rho0 == 0


def test_partition_empty():
    part = partition_spectrum(expand_spectrum([]), PhaseContext(-1))
    assert part.nabla == part.delta == part.lam == () and part.rho0 == 0


def test_partition_brute_force():
    spec = expand_spectrum([SpectralPoint(1.5 * np.exp(1j * np.pi / 3), 1.0, "OFF_CIRCLE")])
    ctx = PhaseContext(-0.3)
    part = partition_spectrum(spec, ctx)
    for j, z in enumerate(spec.zeta):
        v = im_theta(z, ctx)
        assert (j in part.delta) == (v > 0) and (j in part.nabla) == (v < 0)


@given(st.floats(1.05, 4), st.floats(0.05, 1.5), st.floats(0.1, 0.95),
       st.sampled_from([-2.0, -0.4, 2.2, 3.0, 6.0]))
def test_partition_is_orbit_invariant(r, a, phi_frac, xi):
    gens = [SpectralPoint(r * np.exp(1j * a), 1.0, "OFF_CIRCLE"),
            SpectralPoint(np.exp(1j * (np.pi / 2 + phi_frac * np.pi / 2)), 1.0, "ON_CIRCLE")]
    spec = expand_spectrum(gens)
    ctx = PhaseContext(xi)
    part = partition_spectrum(spec, ctx)
    im = part.im_theta
    for g in range(2):
        sel = spec.generator_index == g
        assert np.ptp(im[sel]) <= 1e-12 * max(1, np.max(np.abs(im[sel])))
        labels = {0 if j in part.nabla else 1 if j in part.delta else 2 for j in np.flatnonzero(sel)}
        assert len(labels) == 1
    off = list(part.nabla) + list(part.delta)
    if off:
        assert part.rho0 == pytest.approx(min(abs(im_theta(spec.zeta[j], ctx)) for j in off), rel=1e-12)


def test_circle_helpers():
    phi = circle_angle_for_speed(3.0)
    assert circle_speed(phi) == pytest.approx(3.0)
    assert abs(im_theta(np.exp(1j * phi), 3.0)) < 1e-14
    z = 3 * np.exp(0.3j)
    assert abs(im_theta(z, breather_speed(z))) < 1e-14
