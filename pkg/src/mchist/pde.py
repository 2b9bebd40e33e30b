"""Pseudospectral reference solver for m_t + (m(u^2 - u_x^2))_x + 2 u_x = 0,
m = u - u_xx, on a periodic domain."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InstabilityError, ParameterError

RK4_IMAG_LIMIT = 2.8


def wavenumbers(n: int, L: float):
    return 2 * np.pi * np.fft.rfftfreq(n, L / n)


def _check_n(n):
    if n < 4 or n & (n - 1):
        raise ParameterError(f"n = {n} is not a power of two")


def dealias_mask(n: int):
    """2/3 rule: keep |k| below two thirds of the Nyquist index."""
    kk = np.arange(n // 2 + 1)
    return kk < (2.0 / 3.0) * (n // 2)


def helmholtz_invert(m, L: float):
    """u with (1 - d^2/dx^2) u = m, by division by 1 + k^2."""
    m = np.asarray(m, dtype=float)
    _check_n(len(m))
    k = wavenumbers(len(m), L)
    return np.fft.irfft(np.fft.rfft(m) / (1 + k * k), n=len(m))


def spectral_derivative(f, L: float, order: int = 1):
    f = np.asarray(f, dtype=float)
    n = len(f)
    k = wavenumbers(n, L)
    fh = np.fft.rfft(f) * (1j * k) ** order
    if order % 2 and n % 2 == 0:
        fh[-1] = 0.0
    return np.fft.irfft(fh, n=n)


@dataclass(frozen=True)
class FieldGrid:
    L: float
    x: np.ndarray
    u: np.ndarray
    m: np.ndarray
    t: float = 0.0

    @property
    def n(self) -> int:
        return len(self.x)

    @classmethod
    def from_u(cls, u, L: float, x0: float = 0.0, t: float = 0.0):
        u = np.asarray(u, dtype=float)
        _check_n(len(u))
        x = x0 + L * np.arange(len(u)) / len(u)
        m = u - spectral_derivative(u, L, 2)
        return cls(float(L), x, u, m, t)

    @classmethod
    def from_m(cls, m, L: float, x0: float = 0.0, t: float = 0.0):
        m = np.asarray(m, dtype=float)
        _check_n(len(m))
        x = x0 + L * np.arange(len(m)) / len(m)
        return cls(float(L), x, helmholtz_invert(m, L), m, t)

    def consistency_defect(self) -> float:
        m2 = self.u - spectral_derivative(self.u, self.L, 2)
        return float(np.max(np.abs(m2 - self.m)) / max(np.max(np.abs(self.m)), 1e-300))


def rhs(m, L: float, mask=None):
    """dm/dt = -(m(u^2 - u_x^2))_x - 2 u_x with the flux dealiased."""
    n = len(m)
    k = wavenumbers(n, L)
    if mask is None:
        mask = dealias_mask(n)
    mh = np.fft.rfft(m) * mask
    uh = mh / (1 + k * k)
    u = np.fft.irfft(uh, n=n)
    ux = np.fft.irfft(1j * k * uh, n=n)
    mf = np.fft.irfft(mh, n=n)
    flux = np.fft.rfft(mf * (u * u - ux * ux)) * mask
    out = -1j * k * (flux + 2 * uh)
    out[0] = 0.0
    return np.fft.irfft(out, n=n)


def rhs_grid(grid: FieldGrid):
    return rhs(grid.m, grid.L)


def stable_dt(grid: FieldGrid, safety: float = 0.5) -> float:
    """Largest dt with the RK4 imaginary-axis limit, times safety."""
    h = grid.L / grid.n
    ux = spectral_derivative(grid.u, grid.L)
    vmax = float(np.max(np.abs(grid.u ** 2 - ux ** 2)))
    rate = (np.pi / h) * vmax + 1.0
    return safety * RK4_IMAG_LIMIT / rate


def evolve(grid: FieldGrid, t_end: float, dt: float, growth_limit: float = 1e3,
           callback=None, check_every: int = 50) -> FieldGrid:
    """Classical RK4 in m from grid.t to t_end with fixed step (the last step
    is shortened to land on t_end)."""
    if t_end < grid.t:
        raise ParameterError("t_end before the initial time")
    if dt <= 0 or dt > stable_dt(grid, safety=1.0):
        raise ParameterError(f"dt = {dt} above the stability bound {stable_dt(grid, 1.0):.3e}")
    L = grid.L
    mask = dealias_mask(grid.n)
    m = np.fft.irfft(np.fft.rfft(grid.m) * mask, n=grid.n)
    u0max = max(float(np.max(np.abs(grid.u))), 1e-12)
    nsteps = int(np.ceil((t_end - grid.t) / dt - 1e-9))
    t = grid.t
    for j in range(nsteps):
        h = min(dt, t_end - t)
        k1 = rhs(m, L, mask)
        k2 = rhs(m + 0.5 * h * k1, L, mask)
        k3 = rhs(m + 0.5 * h * k2, L, mask)
        k4 = rhs(m + h * k3, L, mask)
        m = m + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t = grid.t + (j + 1) * dt if j + 1 < nsteps else t_end
        if (j + 1) % check_every == 0 or j + 1 == nsteps:
            if not np.all(np.isfinite(m)):
                raise InstabilityError(f"non-finite field at t = {t}")
            umax = float(np.max(np.abs(helmholtz_invert(m, L))))
            if umax > growth_limit * u0max and umax > 1e-8:
                raise InstabilityError(f"|u| grew by {umax / u0max:.3e} at t = {t}")
        if callback is not None:
            callback(t, m)
    return FieldGrid(L, grid.x, helmholtz_invert(m, L), m, float(t))


def pde_residual(u_series, dt: float, L: float) -> float:
    """Relative L2 residual of the PDE at the middle slice of three (or more)
    equally spaced u snapshots, m_t by central differences."""
    us = np.asarray(u_series, dtype=float)
    if us.ndim != 2 or us.shape[0] < 3:
        raise ParameterError("need at least three time slices")
    j = us.shape[0] // 2
    ms = [u - spectral_derivative(u, L, 2) for u in (us[j - 1], us[j], us[j + 1])]
    mt = (ms[2] - ms[0]) / (2 * dt)
    u = us[j]
    ux = spectral_derivative(u, L)
    res = mt + spectral_derivative(ms[1] * (u * u - ux * ux), L) + 2 * ux
    scale = np.linalg.norm(mt)
    if scale == 0:
        return float(np.linalg.norm(res))
    return float(np.linalg.norm(res) / scale)
