"""Reflectionless Riemann-Hilbert problem in closed partial-fraction form
and the parametric N-soliton (u(y, t), x(y, t)).

Ansatz, with poles zeta_k in the upper half plane:

    M(z) = I + sum_k [[beta_k/(z - zeta_k), -conj(sig_k)/(z - conj zeta_k)],
                      [sig_k/(z - zeta_k),   conj(beta_k)/(z - conj zeta_k)]]

Residue conditions, with c~_k = C_k exp(-2 i t theta(zeta_k)):

    Res_{zeta_k} M       = lim M(z) [[0, 0], [c~_k, 0]]
    Res_{conj zeta_k} M  = lim M(z) [[0, -conj c~_k], [0, 0]]

Imposing the first one on column 1 gives the linear system for
(beta, conj sig)

    beta_k + c~_k sum_h conj(sig_h)/(zeta_k - conj zeta_h) = 0
    conj(sig_k) - conj(c~_k) sum_h beta_h/(conj zeta_k - zeta_h) = conj(c~_k)

and the second condition then holds by conjugation symmetry.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import (BranchError, DegeneracyError, InversionError, ParameterError,
                     PoleError, ReconstructionError, SolveError)
from .phase import DiscreteSpectrum, t_theta

COND_MAX = 1e12
IMAG_TOL = 1e-10
LIMIT_H = 1e-5
LIMIT_TOL = 1e-6


@dataclass(frozen=True)
class SolitonData:
    zeta: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.zeta, dtype=complex))
        c = np.atleast_1d(np.asarray(self.C, dtype=complex))
        if z.shape != c.shape or z.ndim != 1:
            raise ParameterError("zeta and C must be matching 1-d arrays")
        if np.any(z.imag <= 0):
            raise ParameterError("poles must lie in the upper half plane")
        if np.any(np.abs(z - 1j) < 1e-8):
            raise DegeneracyError("pole at z = i")
        if np.any(c == 0):
            raise ParameterError("norming constants must be nonzero")
        if len(z) > 1:
            d = np.abs(z[:, None] - z[None, :]) + np.diag(np.full(len(z), np.inf))
            if d.min() < 1e-8:
                raise DegeneracyError("poles must be pairwise distinct")
        object.__setattr__(self, "zeta", z)
        object.__setattr__(self, "C", c)

    @property
    def N(self) -> int:
        return len(self.zeta)

    @classmethod
    def from_spectrum(cls, spec: DiscreteSpectrum, indices=None, factors=None):
        """Poles of an expanded spectrum, optionally a subset, with constants
        optionally multiplied by ``factors`` (e.g. T^2 at each pole)."""
        idx = np.arange(len(spec)) if indices is None else np.asarray(list(indices), dtype=int)
        C = spec.C[idx] if len(idx) else np.zeros(0, complex)
        if factors is not None:
            C = C * np.asarray(factors, dtype=complex)
        return cls(spec.zeta[idx] if len(idx) else np.zeros(0, complex), C)


@dataclass(frozen=True)
class SolitonState:
    y: float
    t: float
    beta: np.ndarray
    sigma: np.ndarray
    u_r: complex
    c_plus: complex

    @property
    def x_of_y(self) -> float:
        return float(self.y + self.c_plus.real)


def effective_constants(data: SolitonData, y, t):
    """c~_k = C_k exp(-2 i t theta(zeta_k)), shape (len(y), N)."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    tt = t_theta(data.zeta[None, :], y[:, None], t)
    return data.C[None, :] * np.exp(-2j * tt)


def solve_batch(data: SolitonData, y, t, cond_max: float = COND_MAX):
    """beta, sigma with shape (len(y), N) for every y at fixed t."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    N = data.N
    if N == 0:
        return np.zeros((len(y), 0), complex), np.zeros((len(y), 0), complex)
    ct = effective_constants(data, y, t)
    D = 1.0 / (data.zeta[:, None] - np.conj(data.zeta)[None, :])
    A = np.zeros((len(y), 2 * N, 2 * N), dtype=complex)
    idx = np.arange(N)
    A[:, idx, idx] = 1
    A[:, N + idx, N + idx] = 1
    A[:, :N, N:] = ct[:, :, None] * D[None]
    A[:, N:, :N] = -np.conj(ct)[:, :, None] * np.conj(D)[None]
    rhs = np.zeros((len(y), 2 * N), dtype=complex)
    rhs[:, N:] = np.conj(ct)
    if not np.all(np.isfinite(A)):
        raise SolveError("overflow in the effective norming constants")
    # one pass of row then column equilibration: far from the soliton cores
    # the effective constants are exponentially large or small
    R = 1.0 / np.max(np.abs(A), axis=2)
    A = A * R[:, :, None]
    Cs = 1.0 / np.max(np.abs(A), axis=1)
    A = A * Cs[:, None, :]
    cond = np.linalg.cond(A)
    if np.any(~np.isfinite(cond) | (cond > cond_max)):
        raise SolveError(f"ill-conditioned residue system (cond {np.nanmax(cond):.3e})")
    sol = np.linalg.solve(A, (rhs * R)[..., None])[..., 0] * Cs
    return sol[:, :N], np.conj(sol[:, N:])


def _sums_at(data, beta, sigma, z, power=1):
    """sum (beta+sigma)/(z-zeta)^p and sum (conj beta - conj sigma)/(z-conj zeta)^p."""
    z1 = (z - data.zeta[None, :]) ** power
    z2 = (z - np.conj(data.zeta)[None, :]) ** power
    return (np.sum((beta + sigma) / z1, axis=-1),
            np.sum((np.conj(beta) - np.conj(sigma)) / z2, axis=-1))


def closed_form(data: SolitonData, beta, sigma):
    """Complex u and c_plus from solved coefficients (batched)."""
    if data.N == 0:
        n = beta.shape[0]
        return np.zeros(n, complex), np.zeros(n, complex), np.ones(n, complex), np.ones(n, complex)
    a1, a2 = _sums_at(data, beta, sigma, 1j)
    d1, d2 = _sums_at(data, beta, sigma, 1j, power=2)
    s1, s2 = 1 + a1, 1 + a2
    if np.any(np.abs(s1 * s2) < 1e-14):
        raise DegeneracyError("degenerate normalization (M11+M21)(M12+M22) = 0 at z = i")
    u = d1 / s1 + d2 / s2
    c_plus = -np.log(s2 / s1)
    return u, c_plus, s1, s2


def assemble_and_solve(data: SolitonData, y: float, t: float) -> SolitonState:
    """Solve the residue system at one (y, t). The raw complex u and c_plus
    are stored; ``reconstruct_u``/``coordinate_map`` validate them."""
    beta, sigma = solve_batch(data, [y], t)
    u, cp, _, _ = closed_form(data, beta, sigma)
    return SolitonState(float(y), float(t), beta[0], sigma[0], complex(u[0]), complex(cp[0]))


def eval_M(state: SolitonState, data: SolitonData, z) -> np.ndarray:
    z = complex(z)
    M = np.eye(2, dtype=complex)
    if data.N == 0:
        return M
    d1 = z - data.zeta
    d2 = z - np.conj(data.zeta)
    if np.min(np.abs(np.concatenate([d1, d2]))) < 1e-12:
        raise PoleError(f"eval_M at a pole: z = {z}")
    b, s = state.beta, state.sigma
    M[0, 0] += np.sum(b / d1)
    M[1, 0] += np.sum(s / d1)
    M[0, 1] += np.sum(-np.conj(s) / d2)
    M[1, 1] += np.sum(np.conj(b) / d2)
    return M


def residue_check(state: SolitonState, data: SolitonData, beta=None) -> float:
    """Max defect of both residue conditions over all poles.

    Each defect is relative to max(1, |residue|, |c~_k| * sum of |terms| of
    the regular column), the rounding scale of evaluating that column.
    """
    if data.N == 0:
        return 0.0
    b = state.beta if beta is None else np.asarray(beta, dtype=complex)
    s = state.sigma
    ct = effective_constants(data, state.y, state.t)[0]
    zeta, zb = data.zeta, np.conj(data.zeta)
    worst = 0.0
    for k in range(data.N):
        # column 2 of M is regular at zeta_k, column 1 at conj zeta_k
        t12 = -np.conj(s) / (zeta[k] - zb)
        t22 = np.conj(b) / (zeta[k] - zb)
        t11 = b / (zb[k] - zeta)
        t21 = s / (zb[k] - zeta)
        checks = (
            (np.array([b[k], s[k]]), ct[k] * np.array([t12.sum(), 1 + t22.sum()]),
             abs(ct[k]) * (1 + np.abs(t12).sum() + np.abs(t22).sum())),
            (np.array([-np.conj(s[k]), np.conj(b[k])]), -np.conj(ct[k]) * np.array([1 + t11.sum(), t21.sum()]),
             abs(ct[k]) * (1 + np.abs(t11).sum() + np.abs(t21).sum())),
        )
        for res, want, mag in checks:
            scale = max(1.0, mag, np.linalg.norm(res))
            worst = max(worst, np.linalg.norm(res - want) / scale)
    return float(worst)


def _limit_u(state, data, h):
    """(1/(z - i))(1 - P(z)/P(i)), P = (M11+M21)(M12+M22), averaged over
    z = i +- h so the O(h) term cancels."""
    Mi = eval_M(state, data, 1j)
    Pi = (Mi[0, 0] + Mi[1, 0]) * (Mi[0, 1] + Mi[1, 1])
    vals = []
    for z in (1j + h, 1j - h):
        Mz = eval_M(state, data, z)
        Pz = (Mz[0, 0] + Mz[1, 0]) * (Mz[0, 1] + Mz[1, 1])
        vals.append((1 - Pz / Pi) / (z - 1j))
    return 0.5 * (vals[0] + vals[1])


def reconstruct_u(state: SolitonState, data: SolitonData, h: float = LIMIT_H,
                  limit_tol: float = LIMIT_TOL, imag_tol: float = IMAG_TOL) -> float:
    """u^r from the closed form, checked against the z -> i limit and for
    reality."""
    if data.N == 0:
        return 0.0
    u = state.u_r
    lim = _limit_u(state, data, h)
    if abs(lim - u) > limit_tol * max(1.0, abs(u)):
        raise ReconstructionError(f"closed form {u} disagrees with the z -> i limit {lim}")
    if abs(u.imag) > imag_tol:
        raise ReconstructionError(f"u^r not real: Im u = {u.imag:.3e}")
    return float(u.real)


def coordinate_map(state: SolitonState, data: SolitonData, imag_tol: float = IMAG_TOL):
    """(c_plus, x) with c_plus = -ln[(M12+M22)(i)/(M11+M21)(i)], x = y + c_plus."""
    if data.N == 0:
        return 0.0, state.y
    Mi = eval_M(state, data, 1j)
    ratio = (Mi[0, 1] + Mi[1, 1]) / (Mi[0, 0] + Mi[1, 0])
    if ratio.real <= 0 and abs(ratio.imag) < 1e-12 * max(1.0, abs(ratio)):
        raise BranchError(f"log argument {ratio} on the branch cut")
    cp = -np.log(ratio)
    if abs(cp.imag) > imag_tol:
        raise ReconstructionError(f"c_plus not real: Im = {cp.imag:.3e}")
    return float(cp.real), float(state.y + cp.real)


def field_on_y(data: SolitonData, y, t: float, imag_tol: float = IMAG_TOL, check: bool = True):
    """(x(y), u(y)) on an array of y at fixed t."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    beta, sigma = solve_batch(data, y, t)
    u, cp, _, _ = closed_form(data, beta, sigma)
    if check:
        bad = max(np.max(np.abs(u.imag), initial=0.0), np.max(np.abs(cp.imag), initial=0.0))
        if bad > imag_tol:
            raise ReconstructionError(f"soliton field not real (max imaginary part {bad:.3e})")
    return y + cp.real, u.real


def profile_on_x_grid(data: SolitonData, t: float, x_grid, dy: float = 0.01,
                      y_range=None, newton_iter: int = 3, shift: float = 0.0,
                      return_y: bool = False):
    """Resample the parametric pair (x(y,t) + shift, u(y,t)) onto x_grid.

    A dense y-sweep is checked for monotonicity, inverted with monotone
    cubic interpolation and polished with Newton steps on x(y) = x.
    """
    x_grid = np.asarray(x_grid, dtype=float)
    if data.N == 0:
        u = np.zeros_like(x_grid)
        return (u, x_grid - shift) if return_y else u
    xmin, xmax = x_grid.min() - shift, x_grid.max() - shift
    if y_range is None:
        # c_plus is bounded by its limits at y -> +-inf
        far = field_on_y(data, [xmin - 200.0, xmax + 200.0], t, check=False)[0] - \
            np.array([xmin - 200.0, xmax + 200.0])
        pad = float(np.max(np.abs(far))) + 5.0
        y_range = (xmin - pad, xmax + pad)
    ys = np.arange(y_range[0], y_range[1] + dy, dy)
    xs, _ = field_on_y(data, ys, t)
    dx = np.diff(xs)
    if np.any(dx <= 0):
        j = int(np.argmin(dx))
        raise InversionError(f"y -> x not monotone near y = {ys[j]:.4f} (dx/dy ~ {dx[j] / dy:.3e})")
    if xs[0] > xmin or xs[-1] < xmax:
        raise InversionError(f"x-grid [{xmin}, {xmax}] outside the image [{xs[0]}, {xs[-1]}]")
    yg = PchipInterpolator(xs, ys)(x_grid - shift)
    h = 1e-6
    for _ in range(newton_iter):
        x0, _ = field_on_y(data, yg, t)
        x1, _ = field_on_y(data, yg + h, t)
        yg = yg - (x0 - (x_grid - shift)) * h / (x1 - x0)
    _, u = field_on_y(data, yg, t)
    return (u, yg) if return_y else u
