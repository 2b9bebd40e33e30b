"""Long-time soliton prediction along a ray xi = y/t: only the poles with
Im theta = 0 survive, with constants C T(zeta)^2 and a shift of the
coordinate map by 2 ln T(i)."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import FitError, ParameterError, ReconstructionError
from .phase import Partition, PhaseContext, partition_spectrum
from .scattering import ScatteringData
from .soliton import SolitonData, profile_on_x_grid
from .tfunc import TFunction

DEFAULT_RHO = 0.2


@dataclass
class Prediction:
    ctx: PhaseContext
    t: float
    lambda_data: SolitonData
    T_i: complex
    shift: float
    x_grid: np.ndarray
    u_pred: np.ndarray
    partition: Partition
    rho: float = DEFAULT_RHO
    diagnostics: dict = field(default_factory=dict)

    @property
    def x_offset(self) -> float:
        """Offset added to y + c_plus^r in the predicted coordinate map."""
        return -self.shift


def predict(sdata: ScatteringData, ctx: PhaseContext, t: float, x_grid,
            rho: float = DEFAULT_RHO, dy: float = 0.01) -> Prediction:
    """Soliton prediction u_pred(x, t) on x_grid.

    The coordinate map is x = y - 2 ln T(i) + c_plus^r(y, t) (see the
    README for the sign).
    """
    if not t > 0:
        raise ParameterError("t must be positive")
    if not 0 < rho < 0.25:
        raise ParameterError("rho must lie in (0, 1/4)")
    spec = sdata.spectrum
    part = partition_spectrum(spec, ctx)
    T = TFunction(ctx, sdata, spec, delta_poles=spec.zeta[list(part.delta)] if part.delta else [])
    lam = list(part.lam)
    if lam:
        Tz = np.asarray(T(spec.zeta[lam]))
        data = SolitonData.from_spectrum(spec, lam, factors=Tz ** 2)
    else:
        data = SolitonData(np.zeros(0, complex), np.zeros(0, complex))
    Ti = T.T_at_i()
    lnT = np.log(Ti)
    if abs(2 * lnT.imag) > 1e-8:
        raise ReconstructionError(f"2 ln T(i) not real: {2 * lnT}")
    shift = float(2 * lnT.real)
    x_grid = np.asarray(x_grid, dtype=float)
    u = profile_on_x_grid(data, t, x_grid, dy=dy, shift=-shift)
    diag = {
        "lambda": list(part.lam), "delta": list(part.delta), "nabla": list(part.nabla),
        "rho0": part.rho0, "T_i": [Ti.real, Ti.imag], "shift": shift,
        "rho": rho, "error_scale": float(t ** (-1 + 2 * rho)),
    }
    return Prediction(ctx, float(t), data, Ti, shift, x_grid, u, part, rho, diag)


def decay_exponent_fit(errors) -> float:
    """Least-squares slope of log e against log t."""
    pts = np.asarray(errors, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3 or pts.shape[1] != 2:
        raise FitError("need at least three (t, e) pairs")
    t, e = pts[:, 0], pts[:, 1]
    if np.any(t <= 0) or np.any(e <= 0):
        raise FitError("t and e must be positive")
    if np.any(np.diff(t) <= 0):
        raise FitError("t must be strictly increasing")
    lt = np.log(t)
    if np.ptp(lt) < 1e-8:
        raise FitError("degenerate spread in t")
    return float(np.polyfit(lt, np.log(e), 1)[0])


def window_center(pred: Prediction) -> float:
    """Centre of the comparison window: the predicted peak when Lambda is
    nonempty, otherwise the image of y = xi t under the predicted map."""
    if pred.lambda_data.N:
        return float(pred.x_grid[np.argmax(np.abs(pred.u_pred))])
    return float(pred.ctx.xi * pred.t + pred.x_offset)


def window_error(pred: Prediction, x, u_ref, half_width_frac: float = 0.05):
    """max |u_ref - u_pred| over |x - centre| <= half_width_frac * t.

    u_pred is re-evaluated on the window nodes of ``x``, which may differ
    from pred.x_grid.
    """
    x = np.asarray(x, dtype=float)
    u_ref = np.asarray(u_ref, dtype=float)
    xc = window_center(pred)
    sel = np.abs(x - xc) <= half_width_frac * pred.t
    if not sel.any():
        raise ParameterError("comparison window contains no nodes")
    up = profile_on_x_grid(pred.lambda_data, pred.t, x[sel], shift=pred.x_offset)
    return float(np.max(np.abs(u_ref[sel] - up))), xc
