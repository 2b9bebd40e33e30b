#!/usr/bin/env python3
"""On-circle soliton and off-circle breather from the reflectionless
engine, with a PDE check of the one-soliton.

The on-circle pair at angle phi travels with y-speed 2/cos^2(phi) and is
smooth for phi in (3 pi/4, pi); closer to 3 pi/4 the profile steepens and
the map y -> x stops being invertible.
"""
import numpy as np

from mchist.experiments import periodic_grid, place_breather, soliton_field_grid
from mchist.pde import evolve, pde_residual
from mchist.phase import (SpectralPoint, breather_speed, circle_norming_constant, circle_speed,
                          expand_spectrum)
from mchist.soliton import SolitonData, field_on_y, profile_on_x_grid
from mchist.errors import InversionError


def circle_pair(phi):
    w = np.exp(1j * phi)
    c = circle_norming_constant(w)
    return SolitonData([w, -np.conj(w)], [c, np.conj(c)])


def main():
    y = np.linspace(-30, 30, 6001)
    for phi in (0.95 * np.pi, 5 * np.pi / 6, 0.78 * np.pi):
        data = circle_pair(phi)
        x, u = field_on_y(data, y, 0.0)
        dxdy = np.diff(x).min() / (y[1] - y[0])
        print(f"phi = {phi / np.pi:.3f} pi  speed {circle_speed(phi):6.3f}  max u {u.max():.4f}  "
              f"min dx/dy {dxdy:.2e}")
        try:
            profile_on_x_grid(data, 0.0, np.linspace(-10, 10, 11))
        except InversionError as e:
            print(f"    not a graph over x: {e}")

    z = 2.5 * np.exp(0.25j)
    c = place_breather(z, 0.0)
    br = SolitonData.from_spectrum(expand_spectrum([SpectralPoint(z, c, "OFF_CIRCLE")]))
    x, u = field_on_y(br, y, 0.0)
    print(f"breather z = {z:.3f}  speed {breather_speed(z):.3f}  u in [{u.min():.3f}, {u.max():.3f}]")

    data = circle_pair(5 * np.pi / 6)
    L, n, x0 = 160.0, 2048, -80.0
    g0 = soliton_field_grid(data, 0.0, L, n, x0)
    g1 = evolve(g0, 5.0, 0.004)
    err = np.max(np.abs(g1.u - profile_on_x_grid(data, 5.0, g0.x)))
    dt = 1e-3
    xg = periodic_grid(L, n, x0)
    res = pde_residual([profile_on_x_grid(data, t, xg) for t in (5 - dt, 5.0, 5 + dt)], dt, L)
    print(f"one-soliton: PDE vs engine at t=5 {err:.2e}, residual of engine profile {res:.2e}")


if __name__ == "__main__":
    main()
