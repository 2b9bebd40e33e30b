"""End-to-end pipelines shared by the command line, tests and demos."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pde import FieldGrid, evolve
from .phase import PhaseContext, SpectralPoint, expand_spectrum
from .predictor import decay_exponent_fit, predict, window_error
from .scattering import ScatteringData
from .soliton import SolitonData, field_on_y, profile_on_x_grid


def periodic_grid(L: float, n: int, x0: float):
    return x0 + L * np.arange(n) / n


def soliton_field_grid(data: SolitonData, t: float, L: float, n: int, x0: float) -> FieldGrid:
    """Engine profile at time t sampled on a periodic grid."""
    x = periodic_grid(L, n, x0)
    return FieldGrid.from_u(profile_on_x_grid(data, t, x), L, x0, t)


def place_breather(z: complex, y_peak: float, t: float = 0.0) -> float:
    """Real constant c putting the |u| maximum of the quadruple generated by
    z near y = y_peak at time t (translation acts through |c|)."""
    z = complex(z)
    d = SolitonData.from_spectrum(expand_spectrum([SpectralPoint(z, 1.0, "OFF_CIRCLE")]))
    ys = np.linspace(-60.0, 60.0, 12001) + t * _speed(z)
    _, u = field_on_y(d, ys, t)
    y0 = ys[int(np.argmax(np.abs(u)))]
    return float(np.exp(0.5 * (z - 1 / z).imag * (y_peak - y0)))


def _speed(z):
    from .phase import breather_speed
    return breather_speed(z)


@dataclass
class ResolutionResult:
    times: list
    errors: list
    slope: float
    centers: list
    pde_vs_exact: list = field(default_factory=list)

    @property
    def strictly_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.errors) < 0))


def resolution_experiment(spectrum_gens, ctx: PhaseContext, times, L: float, n: int,
                          x0: float, dt: float, half_width_frac: float = 0.05,
                          rho: float = 0.2, exact_check: bool = True) -> ResolutionResult:
    """Evolve reflectionless data with the PDE solver and compare with the
    soliton prediction in a window that follows the ray xi = y/t."""
    spec = expand_spectrum(spectrum_gens)
    sdata = ScatteringData.reflectionless(spec)
    full = SolitonData.from_spectrum(spec)
    grid = soliton_field_grid(full, 0.0, L, n, x0)
    errs, centers, pde_err = [], [], []
    for t in sorted(times):
        grid = evolve(grid, t, dt)
        pred = predict(sdata, ctx, t, grid.x, rho=rho)
        e, xc = window_error(pred, grid.x, grid.u, half_width_frac)
        errs.append(e)
        centers.append(xc)
        if exact_check:
            pde_err.append(float(np.max(np.abs(grid.u - profile_on_x_grid(full, t, grid.x)))))
    ts = sorted(float(t) for t in times)
    slope = decay_exponent_fit(list(zip(ts, errs)))
    return ResolutionResult(ts, errs, slope, centers, pde_err)
