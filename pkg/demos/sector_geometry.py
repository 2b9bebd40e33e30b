#!/usr/bin/env python3
"""Sign table of Im theta and empirical sector bounds near the real axis."""
import numpy as np

from mchist.phase import PhaseContext, check_sector_bound, signature_grid


def main():
    for xi in (-0.3, 2.5):
        ctx = PhaseContext(xi)
        _, Y, S = signature_grid(ctx, (-3, 3, -3, 3), 121)
        pos = np.nanmean(S[Y > 0] > 0)
        print(f"xi = {xi:5.2f} ({ctx.regime.value}): Im theta > 0 on {pos:.2f} of the upper window")
    for phi in (np.pi / 64, np.pi / 32, np.pi / 16):
        rep = check_sector_bound(PhaseContext(-0.3), phi, 100000, seed=0)
        print(f"  LEFT  phi = pi/{np.pi / phi:.0f}: violations {rep.violations:6d}  "
              f"worst z {rep.worst_z:.3f}")
    phi = 0.5 * np.arccos(2 / 2.5)
    rep = check_sector_bound(PhaseContext(2.5), phi, 100000, seed=0)
    print(f"  RIGHT phi = {phi:.4f}: violations {rep.violations}  fitted c {rep.margin:.4f}")


if __name__ == "__main__":
    main()
