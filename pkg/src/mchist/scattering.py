"""Direct scattering at t = 0: Jost solutions of the x-part of the Lax
pair, the coefficients a and b, reflection data, the trace formula and a
zero search for a in the upper half plane."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import CubicSpline

from .errors import (AccuracyError, DataIOError, ParameterError, QuadratureError,
                     SearchError, SpectralSingularityError)
from .phase import DiscreteSpectrum, SpectralPoint, expand_spectrum

ODE_RTOL = 1e-11
ODE_ATOL = 1e-13
Z_MIN = 1e-2


class InitialProfile:
    """Initial datum m0(x) = u0 - u0'' on [-X, X].

    Holds callables ``m`` and ``mx`` (used by the ODE solver) and the
    sampled fields x, m, q = sqrt(1 + m^2) and p(x) = x - int_x^X (q - 1).
    """

    def __init__(self, m, mx, X: float, h: float = 0.01, trunc_tol: float = 1e-8):
        if not X > 0 or not 0 < h < X:
            raise ParameterError(f"need 0 < h < X, got h={h}, X={X}")
        self.m_func, self.mx_func = m, mx
        self.X, self.h = float(X), float(h)
        n = int(round(2 * X / h)) + 1
        self.x = np.linspace(-X, X, n)
        self.m = np.asarray(m(self.x), dtype=float)
        self.q = np.sqrt(1 + self.m ** 2)
        tail = np.concatenate([[0.0], np.cumsum(0.5 * (self.q[1:] + self.q[:-1] - 2) * np.diff(self.x))])
        self.p = self.x - (tail[-1] - tail)
        edge = max(abs(self.m[0]), abs(self.m[-1]))
        if edge > trunc_tol:
            raise ParameterError(f"profile not decayed at +-X: |m| = {edge:.3e}")
        self._int_q = None
        self._p0 = None

    @classmethod
    def gaussian(cls, A: float = 0.5, w: float = 1.0, X: float = 6.5, h: float = 0.01):
        """m0 = A exp(-(x/w)^2)."""
        def m(x):
            return A * np.exp(-(np.asarray(x) / w) ** 2)

        def mx(x):
            return -2 * np.asarray(x) / w ** 2 * m(x)
        return cls(m, mx, X, h)

    @classmethod
    def zero(cls, X: float = 5.0, h: float = 0.01):
        def m(x):
            return np.zeros_like(np.asarray(x, dtype=float))
        return cls(m, m, X, h)

    @classmethod
    def from_samples(cls, x, m, X: float | None = None, h: float | None = None,
                     trunc_tol: float = 1e-8):
        """Cubic-spline interpolant of sampled m on a sorted grid."""
        x = np.asarray(x, dtype=float)
        m = np.asarray(m, dtype=float)
        if x.ndim != 1 or x.shape != m.shape or len(x) < 4:
            raise ParameterError("need matching 1-d samples with at least 4 nodes")
        if np.any(np.diff(x) <= 0):
            raise ParameterError("sample grid must be strictly increasing")
        spl = CubicSpline(x, m)
        dspl = spl.derivative()
        if X is None:
            X = min(-x[0], x[-1])
        if X > min(-x[0], x[-1]) + 1e-12:
            raise ParameterError("X exceeds the sampled range")
        if h is None:
            h = float(np.median(np.diff(x)))
        return cls(spl, dspl, X, h, trunc_tol)

    @classmethod
    def from_file(cls, path, **kw):
        x, m = read_profile(path)
        return cls.from_samples(x, m, **kw)

    def integral_q_minus_1(self) -> float:
        """int_{-X}^{X} (q - 1) dx by adaptive quadrature."""
        if self._int_q is None:
            f = lambda s: np.sqrt(1 + self.m_func(s) ** 2) - 1
            self._int_q = quad(f, -self.X, self.X, epsabs=1e-15, epsrel=1e-13, limit=400)[0]
        return self._int_q

    def p0(self) -> float:
        """p(0) = -int_0^X (q - 1) dx."""
        if self._p0 is None:
            f = lambda s: np.sqrt(1 + self.m_func(s) ** 2) - 1
            self._p0 = -quad(f, 0.0, self.X, epsabs=1e-15, epsrel=1e-13, limit=400)[0]
        return self._p0


def read_profile(path):
    """Read two-column text (x, m); '#' starts a comment."""
    xs, ms = [], []
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                s = line.split("#", 1)[0].strip()
                if not s:
                    continue
                parts = s.replace(",", " ").split()
                if len(parts) != 2:
                    raise DataIOError(f"{path}:{lineno}: expected 2 columns, got {len(parts)}")
                try:
                    xs.append(float(parts[0]))
                    ms.append(float(parts[1]))
                except ValueError:
                    raise DataIOError(f"{path}:{lineno}: cannot parse {s!r}") from None
    except OSError as e:
        if isinstance(e, DataIOError):
            raise
        raise DataIOError(f"cannot read {path}: {e}") from e
    if len(xs) < 4:
        raise DataIOError(f"{path}: too few samples ({len(xs)})")
    return np.array(xs), np.array(ms)


def _lax_rhs(profile: InitialProfile, z):
    s = z - 1 / z
    nz = len(z)

    def f(x, y):
        Y = y.reshape(2, 2, nz)
        m = float(profile.m_func(x))
        mx = float(profile.mx_func(x))
        q = np.sqrt(1 + m * m)
        a1 = 1j * mx / (2 * q * q)
        b = m / (2 * z * q)
        P00, P01, P10, P11 = -1j * m * b, a1 + b, a1 - b, 1j * m * b
        out = np.empty_like(Y)
        ph = -0.25j * s * q
        out[0] = P00 * Y[0] + P01 * Y[1]
        out[1] = P10 * Y[0] + P11 * Y[1]
        # commutator [sigma3, mu] = [[0, 2 mu12], [-2 mu21, 0]]
        out[0, 1] += 2 * ph * Y[0, 1]
        out[1, 0] -= 2 * ph * Y[1, 0]
        return out.ravel()
    return f


def jost_at_origin(profile: InitialProfile, z, side: int, rtol: float = ODE_RTOL,
                   atol: float = ODE_ATOL):
    """mu_-(0, z) (side=-1, from -X) or mu_+(0, z) (side=+1, from +X).

    Vectorized over z; returns shape (..., 2, 2).
    """
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    zf = z.ravel()
    if np.any(zf == 0):
        raise ParameterError("Jost solutions are undefined at z = 0")
    if np.any(np.abs(zf) < Z_MIN):
        warnings.warn("|z| below z_min: 1/z growth degrades conditioning", RuntimeWarning)
    if side not in (-1, 1):
        raise ParameterError("side must be -1 or +1")
    y0 = np.zeros((2, 2, len(zf)), dtype=complex)
    y0[0, 0] = 1
    y0[1, 1] = 1
    sol = solve_ivp(_lax_rhs(profile, zf), (side * profile.X, 0.0), y0.ravel(),
                    method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise AccuracyError(f"Jost integration failed: {sol.message}")
    mu = sol.y[:, -1].reshape(2, 2, len(zf))
    return np.moveaxis(mu, -1, 0).reshape(shape + (2, 2))


def _b_phase(profile, z):
    return np.exp(-0.5j * (z - 1 / z) * profile.p0())


def scattering_coefficients(profile: InitialProfile, z):
    """a(z), b(z) on the real line.

    a uses the real-axis conjugate formula; b is the Wronskian of
    [mu_+]_1 and [mu_-]_1 with its x-dependent phase removed at x = 0.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z == 0):
        raise ParameterError("z = 0 excluded")
    zc = z.astype(complex)
    mm = jost_at_origin(profile, zc, -1)
    mp = jost_at_origin(profile, zc, +1)
    a = mm[..., 0, 0] * np.conj(mp[..., 0, 0]) + mm[..., 1, 0] * np.conj(mp[..., 1, 0])
    bt = mp[..., 0, 0] * mm[..., 1, 0] - mp[..., 1, 0] * mm[..., 0, 0]
    b = bt * _b_phase(profile, zc)
    return a, b


def a_upper_half(profile: InitialProfile, z):
    """a(z) for Im z >= 0 as det([mu_-]_1, [mu_+]_2) at x = 0."""
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag < 0):
        raise ParameterError("a_upper_half requires Im z >= 0")
    mm = jost_at_origin(profile, z, -1)
    mp = jost_at_origin(profile, z, +1)
    a = mm[..., 0, 0] * mp[..., 1, 1] - mm[..., 1, 0] * mp[..., 0, 1]
    return complex(a) if a.ndim == 0 else a


def a_at_i_printed(profile: InitialProfile) -> float:
    """exp(+1/2 int (q - 1)), the value of a(i) as printed in the source."""
    return float(np.exp(0.5 * profile.integral_q_minus_1()))


def a_at_i_closed_form(profile: InitialProfile) -> float:
    """exp(-1/2 int (q - 1)); consistent with the trace formula (|a(i)| <= 1)."""
    return float(np.exp(-0.5 * profile.integral_q_minus_1()))


def log_symmetric_grid(n: int = 200, zmax: float = 50.0):
    """Real grid {+-e^sigma}, sigma uniform on [-ln zmax, ln zmax].

    Closed under z -> -z and z -> 1/z, clustered near 0, excludes 0.
    """
    if n % 2 or n < 8:
        raise ParameterError("n must be even and >= 8")
    s = np.exp(np.linspace(-np.log(zmax), np.log(zmax), n // 2))
    return np.concatenate([-s[::-1], s])


@dataclass
class ScatteringData:
    z_grid: np.ndarray
    r: np.ndarray
    spectrum: DiscreteSpectrum = field(default_factory=lambda: expand_spectrum([]))
    a_at_i: complex = complex("nan")
    a: np.ndarray | None = None
    b: np.ndarray | None = None

    @classmethod
    def reflectionless(cls, spectrum: DiscreteSpectrum, z_grid=None):
        z = log_symmetric_grid() if z_grid is None else np.asarray(z_grid, dtype=float)
        return cls(z, np.zeros(len(z), dtype=complex), spectrum)

    def symmetry_defects(self):
        """max|r(z) - conj r(1/z)|, max|r(z) + conj r(-z)| and |r| at the two
        nodes nearest 0, using nodes that are images of each other."""
        z, r = self.z_grid, self.r
        out = {}
        for name, img, fn in (("inv", 1 / z, lambda v: np.conj(v)),
                              ("neg", -z, lambda v: -np.conj(v))):
            j = np.argmin(np.abs(z[None, :] - img[:, None]), axis=1)
            ok = np.abs(z[j] - img) <= 1e-9 * np.abs(img)
            out[name] = float(np.max(np.abs(r[ok] - fn(r[j[ok]])))) if ok.any() else float("nan")
        near = np.argsort(np.abs(z))[:2]
        out["near0"] = float(np.max(np.abs(r[near])))
        return out


def reflection_grid(profile: InitialProfile, z_grid=None, a_min: float = 1e-8) -> ScatteringData:
    """r = b/a on a symmetric real grid (spectrum left empty)."""
    z = log_symmetric_grid() if z_grid is None else np.asarray(z_grid, dtype=float)
    if np.any(z == 0):
        raise ParameterError("z-grid must exclude 0")
    if not np.allclose(np.sort(z), -np.sort(z)[::-1]):
        raise ParameterError("z-grid must be symmetric about 0")
    a, b = scattering_coefficients(profile, z)
    if np.min(np.abs(a)) < a_min:
        raise SpectralSingularityError(f"|a| = {np.min(np.abs(a)):.3e} on the real line")
    return ScatteringData(z, b / a, expand_spectrum([]), a_upper_half(profile, 1j), a, b)


def _cauchy_integral_grid(z_grid, L, z):
    """int L(s)/(s - z) ds by the trapezoid rule in sigma = ln|s| on each half."""
    z = np.asarray(z, dtype=complex)
    s = np.asarray(z_grid, dtype=float)
    out = np.zeros(z.shape, dtype=complex)
    for half in (s > 0, s < 0):
        sh, Lh = s[half], L[half]
        order = np.argsort(np.abs(sh))
        sh, Lh = sh[order], Lh[order]
        sig = np.log(np.abs(sh))
        f = Lh[None, :] * np.abs(sh)[None, :] / (sh[None, :] - z.reshape(-1, 1))
        out += np.trapezoid(f, sig, axis=1).reshape(z.shape)
    return out


def _log1p_r2(r):
    return np.log1p(np.abs(r) ** 2)


def trace_formula_a(sdata: ScatteringData, z, quad_gap: float = 0.05):
    """a(z) = prod (z - zeta)/(z - conj zeta) * exp(-(1/2 pi i) int log(1+|r|^2)/(s - z) ds)."""
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag <= 0):
        raise ParameterError("trace formula needs Im z > 0")
    if np.any(z.imag < quad_gap):
        raise QuadratureError(f"Im z below quad_gap={quad_gap}")
    L = _log1p_r2(sdata.r)
    I = _cauchy_integral_grid(sdata.z_grid, L, z)
    out = np.exp(-I / (2j * np.pi))
    for zeta in sdata.spectrum.zeta:
        out = out * (z - zeta) / (z - np.conj(zeta))
    return complex(out) if out.ndim == 0 else out


def moment_zero_check(sdata: ScatteringData) -> float:
    """|(1/2 pi i) int log(1 + |r|^2)/s ds| on the symmetric grid."""
    L = _log1p_r2(sdata.r)
    return float(abs(_cauchy_integral_grid(sdata.z_grid, L, 0.0) / (2j * np.pi)))


# zero search ---------------------------------------------------------------

def _boundary(region, n_side):
    x0, x1, y0, y1 = region
    t = np.linspace(0, 1, n_side, endpoint=False)
    return np.concatenate([x0 + (x1 - x0) * t + 1j * y0,
                           x1 + 1j * (y0 + (y1 - y0) * t),
                           x1 - (x1 - x0) * t + 1j * y1,
                           x0 + 1j * (y1 - (y1 - y0) * t)])


def _winding(f, region, n_side=64, max_refine=6):
    """Winding number of f around 0 along the rectangle boundary."""
    for _ in range(max_refine):
        zb = _boundary(region, n_side)
        fb = f(zb)
        if np.min(np.abs(fb)) < 1e-10:
            raise SearchError("zero on the search contour")
        dphi = np.angle(np.roll(fb, -1) / fb)
        if np.max(np.abs(dphi)) < np.pi / 4:
            return int(round(np.sum(dphi) / (2 * np.pi)))
        n_side *= 2
    raise SearchError("argument increments not resolved on the contour")


def _newton(f, z0, tol=1e-12, maxit=40, h=1e-6, noise=1e-6):
    """Newton iteration with a central-difference slope.

    The ODE solve carries ~1e-9 noise, so once steps stop contracting below
    `noise` the iterate with the smallest residual is accepted.
    """
    z = complex(z0)
    best, best_res, prev = z, np.inf, np.inf
    for _ in range(maxit):
        v = f(np.array([z, z + h, z - h]))
        if abs(v[0]) < best_res:
            best, best_res = z, abs(v[0])
        d = (v[1] - v[2]) / (2 * h)
        if d == 0:
            break
        dz = v[0] / d
        if abs(dz) < tol:
            return z - dz
        if abs(dz) < noise and abs(dz) > 0.5 * prev:
            return best
        prev = abs(dz)
        z -= dz
    raise SearchError(f"Newton refinement did not converge near {z0}")


def _derivative_cauchy(f, z0, rho, n=32):
    th = 2 * np.pi * np.arange(n) / n
    v = f(z0 + rho * np.exp(1j * th))
    return complex(np.mean(v * np.exp(-1j * th)) / rho)


def norming_constant(profile: InitialProfile, zeta: complex, rho: float = 1e-2) -> complex:
    """C = b / a'(zeta) with b from the Jost column ratio [mu_-]_1 = b~ [mu_+]_2."""
    mm = jost_at_origin(profile, np.array([zeta]), -1)[0]
    mp = jost_at_origin(profile, np.array([zeta]), +1)[0]
    col_m, col_p = mm[:, 0], mp[:, 1]
    k = int(np.argmax(np.abs(col_p)))
    bt = col_m[k] / col_p[k]
    ap = _derivative_cauchy(lambda w: a_upper_half(profile, w), zeta, rho)
    return complex(bt * _b_phase(profile, zeta) / ap)


def locate_zeros(profile: InitialProfile, region, min_cell: float = 0.05,
                 max_depth: int = 8, n_side: int = 64):
    """Zeros of a in a rectangle (xmin, xmax, ymin, ymax) of the upper half
    plane, with their norming constants.

    Argument-principle counts on a quadtree of sub-rectangles, Newton
    refinement of each isolated zero, then a recount check.
    """
    x0, x1, y0, y1 = map(float, region)
    if not (x1 > x0 and y1 > y0 and y0 > 0):
        raise ParameterError("region must be a rectangle strictly inside the upper half plane")
    if x0 <= 0 <= x1 and y0 <= 1 <= y1:
        raise ParameterError("region must avoid z = i")
    f = lambda w: a_upper_half(profile, w)
    total = _winding(f, (x0, x1, y0, y1), n_side)
    if total < 0:
        raise SearchError(f"negative winding number {total}")
    found = []
    stack = [((x0, x1, y0, y1), total, 0)]
    while stack:
        reg, cnt, depth = stack.pop()
        if cnt == 0:
            continue
        a0, a1, b0, b1 = reg
        if cnt == 1 and max(a1 - a0, b1 - b0) <= min_cell * max(1.0, abs(complex(a0, b0))):
            z = _newton(f, complex(0.5 * (a0 + a1), 0.5 * (b0 + b1)))
            found.append(z)
            continue
        if depth >= max_depth:
            raise SearchError(f"could not isolate {cnt} zeros in {reg}")
        am, bm = 0.5 * (a0 + a1), 0.5 * (b0 + b1)
        # nudge the split lines off any zero that would sit on them
        am += 1e-3 * (a1 - a0) * 0.37
        bm += 1e-3 * (b1 - b0) * 0.61
        subs = [(a0, am, b0, bm), (am, a1, b0, bm), (a0, am, bm, b1), (am, a1, bm, b1)]
        counts = [_winding(f, sr, n_side) for sr in subs]
        if sum(counts) != cnt:
            raise SearchError(f"count mismatch {sum(counts)} != {cnt} in {reg}")
        stack += [(sr, c, depth + 1) for sr, c in zip(subs, counts)]
    found.sort(key=lambda w: (w.real, w.imag))
    for i, w in enumerate(found):
        if not (x0 <= w.real <= x1 and y0 <= w.imag <= y1):
            raise SearchError(f"refined zero {w} left the region")
        for v in found[:i]:
            if abs(v - w) < 1e-8:
                raise SearchError("two cells refined to the same zero")
    out = []
    for w in found:
        rho = min(1e-2, 0.5 * w.imag)
        out.append((w, norming_constant(profile, w, rho)))
    return out


def spectrum_from_zeros(zeros, tol: float = 1e-6) -> DiscreteSpectrum:
    """Generators from located zeros: on-circle points with Re > 0 are the
    mirror images of the Re < 0 ones, off-circle generators have |z| > 1 and
    Re z > 0. Returns the expanded orbit."""
    gens = []
    for z, c in zeros:
        if abs(abs(z) - 1) < tol:
            if z.real < 0:
                gens.append(SpectralPoint(z / abs(z), c, "ON_CIRCLE"))
        elif abs(z) > 1 and z.real > 0:
            gens.append(SpectralPoint(z, c, "OFF_CIRCLE"))
    return expand_spectrum(gens)
