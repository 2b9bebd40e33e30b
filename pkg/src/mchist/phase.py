"""Phase function geometry: uniformization, theta, sector bounds and the
classification of discrete spectrum by the sign of Im theta."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyError, DomainError, ParameterError, SingularityError

LAMBDA_TOL = 1e-10
ORBIT_TOL = 1e-8
CIRCLE_TOL = 1e-10


class Regime(enum.Enum):
    LEFT = "LEFT"
    RIGHT = "RIGHT"


class Kind(enum.Enum):
    OFF_CIRCLE = "OFF_CIRCLE"
    ON_CIRCLE = "ON_CIRCLE"


@dataclass(frozen=True)
class PhaseContext:
    """Ray parameter xi = y/t with the regime margin delta0.

    LEFT means xi <= -1/4 - delta0 and RIGHT means xi >= 2 + delta0; the
    band in between is rejected.
    """
    xi: float
    delta0: float = 0.05
    regime: Regime = field(init=False)

    def __post_init__(self):
        xi, d0 = float(self.xi), float(self.delta0)
        if not np.isfinite(xi) or not d0 > 0:
            raise ParameterError(f"need finite xi and delta0 > 0, got {xi}, {d0}")
        if xi <= -0.25 - d0:
            reg = Regime.LEFT
        elif xi >= 2.0 + d0:
            reg = Regime.RIGHT
        else:
            raise ParameterError(f"xi={xi} lies outside both regimes for delta0={d0}")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "delta0", d0)
        object.__setattr__(self, "regime", reg)


def _xi(ctx) -> float:
    return ctx.xi if isinstance(ctx, PhaseContext) else float(ctx)


def uniformize(z):
    """k = (i/2)(z - 1/z), lambda = (1/2)(z + 1/z)."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise DomainError("uniformization undefined at z = 0")
    k = 0.5j * (z - 1 / z)
    lam = 0.5 * (z + 1 / z)
    if k.ndim == 0:
        return complex(k), complex(lam)
    return k, lam


def _check_singular(z):
    if np.any((z == 0) | (z == 1j) | (z == -1j)):
        raise SingularityError("theta is singular at z in {0, i, -i}")


def theta(z, ctx):
    """theta(z; xi) = -(1/4)(z - 1/z)[xi - 8/(z + 1/z)^2].

    ``ctx`` is a PhaseContext or a bare float xi.
    """
    z = np.asarray(z, dtype=complex)
    _check_singular(z)
    xi = _xi(ctx)
    out = -0.25 * (z - 1 / z) * (xi - 8.0 / (z + 1 / z) ** 2)
    return complex(out) if out.ndim == 0 else out


def t_theta(z, y, t):
    """t*theta with xi = y/t, written so that t = 0 is allowed."""
    z = np.asarray(z, dtype=complex)
    y = np.asarray(y, dtype=float)
    _check_singular(z)
    return -0.25 * (z - 1 / z) * (y - 8.0 * t / (z + 1 / z) ** 2)


def im_theta(z, ctx, method: str = "direct"):
    """Im theta(z; xi).

    ``method="direct"`` takes the imaginary part of theta; ``"expanded"``
    uses the closed real form in a = Re z, b = Im z.
    """
    z = np.asarray(z, dtype=complex)
    _check_singular(z)
    xi = _xi(ctx)
    if method == "direct":
        out = np.imag(theta(z, xi))
    elif method == "expanded":
        a, b = z.real, z.imag
        r2 = a * a + b * b
        den = ((a * a - b * b + 1) ** 2 + 4 * a * a * b * b) ** 2
        num = -r2 ** 3 + 2 * r2 ** 2 + (3 * a * a - b * b) * (1 + r2) + 2 * r2 - 1
        out = b * (-0.25 * xi * (1 + 1 / r2) + 2 * num / den)
    else:
        raise ParameterError(f"unknown method {method!r}")
    return float(out) if np.ndim(out) == 0 else out


def signature_grid(ctx, window, n: int, tol: float = 1e-10):
    """Sign of Im theta on an n x n grid over window = (xmin, xmax, ymin, ymax).

    Returns (X, Y, S); S holds -1, 0, +1 and NaN at the punctured
    singular nodes {0, +-i}.
    """
    if n < 2:
        raise ParameterError("n must be >= 2")
    xmin, xmax, ymin, ymax = map(float, window)
    X, Y = np.meshgrid(np.linspace(xmin, xmax, n), np.linspace(ymin, ymax, n))
    Z = X + 1j * Y
    bad = (np.abs(Z) < 1e-12) | (np.abs(Z - 1j) < 1e-12) | (np.abs(Z + 1j) < 1e-12)
    Zs = np.where(bad, 2.0 + 0j, Z)
    th = theta(Zs, ctx)
    im = th.imag
    S = np.sign(im).astype(float)
    S[np.abs(im) < tol * np.maximum(1.0, np.abs(th))] = 0.0
    S[bad] = np.nan
    return X, Y, S


@dataclass(frozen=True)
class SectorReport:
    violations: int
    margin: float
    samples: int
    phi: float
    radius: float
    worst_z: complex


def sector_samples(phi: float, samples: int, seed: int, radius: float = 10.0):
    """Area-uniform random points of Omega_1 U Omega_2 (|z| < radius)."""
    rng = np.random.default_rng(seed)
    ell = radius * np.sqrt(rng.random(samples))
    ang = phi * rng.random(samples)
    ang = np.where(rng.random(samples) < 0.5, ang, np.pi - ang)
    z = ell * np.exp(1j * ang)
    # the unit-circle point i is never in a sector with phi < pi/8; drop
    # exact zeros, which have measure zero anyway
    return z[np.abs(z) > 0]


def sector_bound_gap(z, ctx):
    """Im theta - (delta0/4) Im z, the slack of the LEFT-regime bound."""
    z = np.asarray(z, dtype=complex)
    return im_theta(z, ctx) - 0.25 * ctx.delta0 * z.imag


def check_sector_bound(ctx: PhaseContext, phi: float, samples: int, seed: int,
                       radius: float = 10.0) -> SectorReport:
    """Empirical check of the sector bounds on Omega_1 U Omega_2.

    LEFT: counts samples with Im theta < (delta0/4) Im z; margin is the
    smallest slack. RIGHT: fits c = min(-Im theta / Im z); a violation is a
    sample where no positive c can work (Im theta >= 0); margin is c.
    """
    if not 0 < phi < np.pi / 8:
        raise ParameterError(f"phi={phi} outside (0, pi/8)")
    z = sector_samples(phi, samples, seed, radius)
    v = z.imag
    if ctx.regime is Regime.LEFT:
        gap = sector_bound_gap(z, ctx)
        j = int(np.argmin(gap))
        return SectorReport(int(np.sum(gap < 0)), float(gap[j]), len(z), phi, radius, complex(z[j]))
    ratio = -im_theta(z, ctx) / v
    j = int(np.argmin(ratio))
    return SectorReport(int(np.sum(ratio <= 0)), float(ratio[j]), len(z), phi, radius, complex(z[j]))


@dataclass(frozen=True)
class SpectralPoint:
    zeta: complex
    C: complex
    kind: Kind

    def __post_init__(self):
        zeta = complex(self.zeta)
        kind = Kind(self.kind)
        object.__setattr__(self, "zeta", zeta)
        object.__setattr__(self, "C", complex(self.C))
        object.__setattr__(self, "kind", kind)
        if not zeta.imag > 0:
            raise ParameterError(f"generator {zeta} not in the upper half plane")
        if abs(zeta.real) < ORBIT_TOL:
            raise DegeneracyError(f"generator {zeta} on the imaginary axis")
        if kind is Kind.ON_CIRCLE and abs(abs(zeta) - 1) > CIRCLE_TOL:
            raise ParameterError(f"ON_CIRCLE point {zeta} has |zeta| != 1")
        if kind is Kind.OFF_CIRCLE and not abs(zeta) > 1:
            raise ParameterError(f"OFF_CIRCLE generator {zeta} must have |zeta| > 1")

    @classmethod
    def auto(cls, zeta, C):
        kind = Kind.ON_CIRCLE if abs(abs(complex(zeta)) - 1) <= CIRCLE_TOL else Kind.OFF_CIRCLE
        return cls(zeta, C, kind)


@dataclass(frozen=True)
class DiscreteSpectrum:
    generators: tuple
    zeta: np.ndarray
    C: np.ndarray
    kind: tuple
    generator_index: np.ndarray

    def __len__(self):
        return len(self.zeta)

    @property
    def expanded(self):
        return [SpectralPoint(z, c, k) for z, c, k in zip(self.zeta, self.C, self.kind)]


def expand_spectrum(generators, tol: float = ORBIT_TOL) -> DiscreteSpectrum:
    """Expand generators into their full symmetry orbits.

    Off-circle z, c -> {z, -conj z, 1/conj z, -1/z} with constants
    {c, conj c, -conj(z)^-2 conj c, -z^-2 c}; on-circle w, c -> {w, -conj w}
    with {c, conj c}.
    """
    zs, cs, ks, gi = [], [], [], []
    for g, p in enumerate(generators):
        z, c = p.zeta, p.C
        if p.kind is Kind.OFF_CIRCLE:
            zz = [z, -np.conj(z), 1 / np.conj(z), -1 / z]
            cc = [c, np.conj(c), -np.conj(z) ** -2 * np.conj(c), -z ** -2 * c]
        else:
            zz = [z, -np.conj(z)]
            cc = [c, np.conj(c)]
        zs += zz
        cs += cc
        ks += [p.kind] * len(zz)
        gi += [g] * len(zz)
    zeta = np.array(zs, dtype=complex)
    if len(zeta) > 1:
        d = np.abs(zeta[:, None] - zeta[None, :])
        np.fill_diagonal(d, np.inf)
        if d.min() < tol:
            raise DegeneracyError(f"orbit points coincide (min separation {d.min():.3e})")
    return DiscreteSpectrum(tuple(generators), zeta, np.array(cs, dtype=complex),
                            tuple(ks), np.array(gi, dtype=int))


@dataclass(frozen=True)
class Partition:
    nabla: tuple
    delta: tuple
    lam: tuple
    rho0: float
    im_theta: np.ndarray


def partition_spectrum(spec: DiscreteSpectrum, ctx: PhaseContext,
                       tol: float = LAMBDA_TOL) -> Partition:
    """Split expanded indices by the sign of Im theta at each pole."""
    if len(spec) == 0:
        return Partition((), (), (), 0.0, np.zeros(0))
    th = theta(spec.zeta, ctx)
    im = th.imag
    band = tol * np.maximum(1.0, np.abs(th))
    nabla = tuple(int(i) for i in np.flatnonzero(im < -band))
    delta = tuple(int(i) for i in np.flatnonzero(im > band))
    lam = tuple(int(i) for i in np.flatnonzero(np.abs(im) <= band))
    off = list(nabla) + list(delta)
    rho0 = float(np.min(np.abs(im[off]))) if off else 0.0
    return Partition(nabla, delta, lam, rho0, im)


# helpers for on-circle solitons

def circle_norming_constant(w, kappa: float = 1.0) -> complex:
    """Norming constant -i w kappa; the only phase giving real u for an
    on-circle pair (kappa > 0 gives a positive soliton)."""
    return complex(-1j * complex(w) * kappa)


def circle_speed(phi: float) -> float:
    """y-speed 2/cos^2(phi) of the on-circle soliton at w = e^{i phi}."""
    return 2.0 / np.cos(phi) ** 2


def circle_angle_for_speed(v: float) -> float:
    """Angle in (pi/2, pi) of the on-circle pole travelling at y-speed v."""
    if not v > 2:
        raise ParameterError("on-circle speeds exceed 2")
    return float(np.pi - np.arccos(np.sqrt(2.0 / v)))


def breather_speed(z) -> float:
    """y-speed of the off-circle quadruple generated by z (Im theta = 0)."""
    z = complex(z)
    s = z - 1 / z
    return float((8 * s / (z + 1 / z) ** 2).imag / s.imag)
