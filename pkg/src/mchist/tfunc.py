"""The scalar functions delta(z) and T(z) attached to a ray xi = y/t."""
from __future__ import annotations

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from .errors import ParameterError, PoleError, QuadratureError
from .phase import DiscreteSpectrum, PhaseContext, Regime, partition_spectrum
from .scattering import ScatteringData, _cauchy_integral_grid

R_CUTOFF = 1e-10
QUAD_GAP = 1e-3
RICHARDSON_EPS = (1e-2, 5e-3, 2.5e-3)


class _LogWeight:
    """L(s) = log(1 + |r(s)|^2) on a symmetric grid, with a spline in
    sigma = ln|s| on each half for near-axis Cauchy integrals."""

    def __init__(self, z_grid, r):
        s = np.asarray(z_grid, dtype=float)
        r = np.asarray(r, dtype=complex)
        L = np.log1p(np.abs(r) ** 2)
        L[np.abs(r) < R_CUTOFF] = 0.0
        self.s, self.L = s, L
        self.zero = not np.any(L)
        self.halves = []
        for sign in (1.0, -1.0):
            sel = np.sign(s) == sign
            sh, Lh = np.abs(s[sel]), L[sel]
            o = np.argsort(sh)
            sig = np.log(sh[o])
            self.halves.append((sign, sig, CubicSpline(sig, Lh[o])))
        ds = np.diff(np.sort(np.log(np.abs(s[s > 0]))))
        self.dsig = float(ds.max()) if len(ds) else 1.0

    def cauchy(self, z, k: int = 1):
        """int L(s)/(s - z)^k ds."""
        z = np.asarray(z, dtype=complex)
        if self.zero:
            return np.zeros(z.shape, dtype=complex)
        out = np.empty(z.shape, dtype=complex)
        flat, res = z.ravel(), out.ravel()
        # grid trapezoid when z is far from the axis relative to the local
        # node spacing, adaptive quadrature of the spline otherwise
        far = np.abs(flat.imag) >= 4 * self.dsig * np.maximum(np.abs(flat.real), 1e-3)
        if k == 1 and far.any():
            res[far] = _cauchy_integral_grid(self.s, self.L, flat[far])
        for j in np.flatnonzero(~far if k == 1 else np.ones(len(flat), bool)):
            res[j] = self._adaptive(flat[j], k)
        return out

    def _adaptive(self, z, k):
        total = 0j
        for sign, sig, spl in self.halves:
            def g(t, part):
                s = sign * np.exp(t)
                v = spl(t) * np.exp(t) / (s - z) ** k
                return v.real if part == 0 else v.imag
            pts = None
            if z.real * sign > 0:
                t0 = np.log(abs(z.real))
                if sig[0] < t0 < sig[-1]:
                    pts = [t0]
            re = quad(g, sig[0], sig[-1], args=(0,), points=pts, limit=800, epsabs=1e-12, epsrel=1e-10)[0]
            im = quad(g, sig[0], sig[-1], args=(1,), points=pts, limit=800, epsabs=1e-12, epsrel=1e-10)[0]
            total += re + 1j * im
        return total


class TFunction:
    """T(z) = prod_{n in Delta} (z - zeta_n)/(z - conj zeta_n) * delta(z).

    delta(z) = exp(-(1/2 pi i) int_I log(1+|r|^2)/(s - z) ds) with I = R in
    the LEFT regime and I empty in the RIGHT regime. The product is the
    orbit-complete form, so that T(0) = T(inf) = 1.
    """

    def __init__(self, ctx: PhaseContext, sdata: ScatteringData | None = None,
                 spectrum: DiscreteSpectrum | None = None, delta_poles=None,
                 pole_tol: float = 1e-10):
        self.ctx = ctx
        if spectrum is None and sdata is not None:
            spectrum = sdata.spectrum
        if delta_poles is None:
            if spectrum is None or len(spectrum) == 0:
                delta_poles = []
            else:
                part = partition_spectrum(spectrum, ctx)
                delta_poles = spectrum.zeta[list(part.delta)]
        self.delta_poles = np.asarray(delta_poles, dtype=complex)
        self.pole_tol = pole_tol
        if ctx.regime is Regime.LEFT and sdata is not None:
            self._w = _LogWeight(sdata.z_grid, sdata.r)
        else:
            self._w = None
        self._Ti = None

    @property
    def has_jump(self) -> bool:
        return self._w is not None and not self._w.zero

    def delta_factor(self, z, quad_gap: float = QUAD_GAP):
        z = np.asarray(z, dtype=complex)
        if not self.has_jump:
            out = np.ones(z.shape, dtype=complex)
        else:
            inf = np.isinf(z.real) | np.isinf(z.imag)
            at0 = z == 0
            near = (np.abs(z.imag) < quad_gap) & ~inf & ~at0
            if near.any():
                raise QuadratureError(f"|Im z| below quad_gap={quad_gap}")
            out = np.ones(z.shape, dtype=complex)
            reg = ~inf & ~at0
            if reg.any():
                out[reg] = np.exp(-self._w.cauchy(z[reg]) / (2j * np.pi))
            if at0.any():
                out[at0] = np.exp(-_cauchy_integral_grid(self._w.s, self._w.L, 0.0) / (2j * np.pi))
        return complex(out) if out.ndim == 0 else out

    def blaschke(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones(z.shape, dtype=complex)
        fin = np.isfinite(z)
        for zeta in self.delta_poles:
            zb = np.conj(zeta)
            if np.any(np.abs(z[fin] - zb) < self.pole_tol):
                raise PoleError(f"T evaluated at its pole {zb}")
            out[fin] *= (z[fin] - zeta) / (z[fin] - zb)
        return out

    def __call__(self, z, quad_gap: float = QUAD_GAP):
        z = np.asarray(z, dtype=complex)
        out = self.blaschke(z) * self.delta_factor(z, quad_gap)
        return complex(out) if out.ndim == 0 else out

    def T_at_i(self) -> complex:
        """Closed form at z = i: per off-circle quadruple the squared factor
        [(i - z)/(i - conj z) (i + conj z)/(i + z)]^2, per on-circle pair the
        single factor, times delta(i)."""
        if self._Ti is not None:
            return self._Ti
        zs = list(self.delta_poles)
        val = 1 + 0j
        used = np.zeros(len(zs), bool)
        for j, z in enumerate(zs):
            if used[j]:
                continue
            orbit = [z, -np.conj(z)]
            if abs(abs(z) - 1) > 1e-8:
                orbit += [1 / np.conj(z), -1 / z]
            idx = [int(np.argmin(np.abs(np.array(zs) - w))) for w in orbit]
            if any(abs(zs[k] - w) > 1e-8 for k, w in zip(idx, orbit)):
                raise ParameterError("Delta set is not a union of orbits")
            used[idx] = True
            g = (1j - z) / (1j - np.conj(z)) * (1j + np.conj(z)) / (1j + z)
            val *= g ** 2 if len(orbit) == 4 else g
        self._Ti = complex(val * self.delta_factor(1j))
        return self._Ti

    def T_slope_at_i(self) -> complex:
        """dT/dz at i including the derivative of the Delta product."""
        dlog = sum(1 / (1j - z) - 1 / (1j - np.conj(z)) for z in self.delta_poles)
        if self.has_jump:
            dlog += -complex(self._w.cauchy(np.array([1j]), k=2)[0]) / (2j * np.pi)
        return complex(self.T_at_i() * dlog)

    def boundary_values(self, x, eps=RICHARDSON_EPS):
        """(T_+(x), T_-(x)) from x +- i eps, Richardson-extrapolated in eps."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        e1, e2, e3 = eps
        if not (np.isclose(e2, e1 / 2) and np.isclose(e3, e1 / 4)):
            raise ParameterError("eps must be (e, e/2, e/4)")
        out = []
        for sgn in (1, -1):
            f = [self(x + sgn * 1j * e, quad_gap=min(eps) / 2) for e in eps]
            out.append((8 * f[2] - 6 * f[1] + f[0]) / 3)
        return out[0], out[1]
