"""One-particle space of the U(1)-current on a periodic spatial grid.

Fourier convention ``fh(p) = int f(x) e^{ipx} dx / sqrt(2 pi)``.  The inner
product is ``(f, g) = int_0^inf p fh(p) conj(gh(p)) dp`` and the symplectic form
is its imaginary part.  A symmetric inner function phi of the momentum acts by
``fh(p) -> phi(p) fh(p)`` for p > 0 and by ``conj(phi(-p)) fh(p)`` for p < 0, so
real functions stay real.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.polynomial import legendre
from numpy.polynomial import polynomial as npoly

from . import inner
from .errors import InputError, NormalizationError, ParameterError, RealityError
from .inner import Domain, InnerFunction
from .parallel import pmap
from .reports import CheckReport

SUPPORT_TOL = 1e-10
# growth per refinement above which the Hoelder integral is called divergent
DIVERGENCE_GROWTH = 0.2


@dataclass(frozen=True)
class SpatialGrid:
    m: int = 16384
    x_max: float = 32.0

    def __post_init__(self):
        m = int(self.m)
        if m < 2 or m & (m - 1):
            raise ParameterError(f"grid size must be a power of two, got {self.m}")
        if not self.x_max > 0:
            raise ParameterError("x_max must be positive")
        object.__setattr__(self, "m", m)

    @property
    def dx(self) -> float:
        return 2 * self.x_max / self.m

    @property
    def dp(self) -> float:
        return 2 * math.pi / (self.m * self.dx)

    @property
    def x(self) -> np.ndarray:
        return -self.x_max + self.dx * np.arange(self.m)

    @property
    def k(self) -> np.ndarray:
        return np.fft.fftfreq(self.m) * self.m

    @property
    def p(self) -> np.ndarray:
        return self.k * self.dp

    def ft(self, values) -> np.ndarray:
        sign = (-1.0) ** self.k
        return self.dx / math.sqrt(2 * math.pi) * sign * self.m * np.fft.ifft(values)

    def ift(self, spectrum) -> np.ndarray:
        sign = (-1.0) ** self.k
        return self.dp / math.sqrt(2 * math.pi) * np.fft.fft(spectrum * sign)

    def contains(self, a: float, b: float) -> bool:
        return -self.x_max < a < b < self.x_max

    def summary(self) -> dict:
        return {"m": self.m, "x_max": self.x_max, "dx": self.dx, "dp": self.dp}


@dataclass(frozen=True)
class TestFunction:
    grid: SpatialGrid
    values: np.ndarray
    support: tuple

    __test__ = False  # not a pytest class

    def __post_init__(self):
        vals = np.array(self.values)
        if np.iscomplexobj(vals):
            if np.any(vals.imag != 0):
                raise RealityError("test functions must be real")
            vals = vals.real
        vals = vals.astype(float)
        if vals.shape != (self.grid.m,):
            raise InputError(f"expected {self.grid.m} samples, got shape {vals.shape}")
        a, b = map(float, self.support)
        if not a < b:
            raise InputError(f"empty support interval ({a}, {b})")
        x = self.grid.x
        nrm = np.linalg.norm(vals)
        outside = np.linalg.norm(vals[(x < a) | (x > b)])
        if nrm > 0 and outside > SUPPORT_TOL * nrm:
            raise InputError(f"mass outside the declared support ({a}, {b})")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "support", (a, b))

    @property
    def spectrum(self) -> np.ndarray:
        return self.grid.ft(self.values)


def _cubic_bump(x, a, b):
    return np.where((x > a) & (x < b), (x - a) ** 3 * (b - x) ** 3, 0.0)


def random_bump(grid: SpatialGrid, interval, rng, degree: int = 3) -> TestFunction:
    """P(x) (x-a)^3 (b-x)^3 on (a, b) with a random polynomial P."""
    a, b = map(float, interval)
    x = grid.x
    coeffs = rng.normal(size=degree + 1)
    vals = _cubic_bump(x, a, b) * np.polyval(coeffs, x - (a + b) / 2)
    return TestFunction(grid, vals, (a, b))


@dataclass(frozen=True)
class ChargeDensity:
    """ell(x) = A (x-a)^3 (b-x)^3 on (a, b), scaled so (1/2pi) int ell = charge."""

    support: tuple = (1.0, 3.0)
    charge: float = 2.0
    _poly: np.ndarray = field(init=False, repr=False, compare=False)
    _prim: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a, b = map(float, self.support)
        if not a < b:
            raise InputError(f"empty support interval ({a}, {b})")
        g = float(self.charge)
        if not math.isfinite(g):
            raise InputError("charge must be finite")
        base = npoly.polymul(npoly.polypow([-a, 1.0], 3), npoly.polypow([b, -1.0], 3))
        prim = npoly.polyint(base)
        mass = npoly.polyval(b, prim) - npoly.polyval(a, prim)
        amp = 2 * math.pi * g / mass
        object.__setattr__(self, "support", (a, b))
        object.__setattr__(self, "charge", g)
        object.__setattr__(self, "_poly", amp * base)
        object.__setattr__(self, "_prim", amp * prim)

    @classmethod
    def bump(cls, support=(1.0, 3.0), charge: float = 2.0) -> "ChargeDensity":
        return cls(tuple(support), charge)

    def ell(self, x) -> np.ndarray:
        a, b = self.support
        x = np.asarray(x, dtype=float)
        return np.where((x > a) & (x < b), npoly.polyval(x, self._poly), 0.0)

    def primitive(self, x) -> np.ndarray:
        """L(x) = int_{-inf}^x ell; equals 2 pi g right of the support."""
        a, b = self.support
        x = np.asarray(x, dtype=float)
        xc = np.clip(x, a, b)
        inside = npoly.polyval(xc, self._prim) - npoly.polyval(a, self._prim)
        return np.where(x <= a, 0.0, np.where(x >= b, 2 * math.pi * self.charge, inside))

    def on_grid(self, grid: SpatialGrid) -> TestFunction:
        return TestFunction(grid, self.ell(grid.x), self.support)

    def momentum_profile(self, p, nodes: int = 256) -> np.ndarray:
        """ell-hat(p) by Gauss-Legendre quadrature on the support (no FFT)."""
        a, b = self.support
        xg, wg = legendre.leggauss(nodes)
        xs = (a + b) / 2 + (b - a) / 2 * xg
        ws = (b - a) / 2 * wg * self.ell(xs)
        p = np.atleast_1d(np.asarray(p, dtype=float))
        return np.exp(1j * np.outer(p, xs)) @ ws / math.sqrt(2 * math.pi)


@dataclass(frozen=True)
class ExtensionParams:
    """Spin N of the extension; the charge is g = sqrt(2N)."""

    N: int = 1

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 1:
            raise ParameterError(f"spin N must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def g(self) -> float:
        return math.sqrt(2 * self.N)

    @classmethod
    def from_charge(cls, g: float) -> "ExtensionParams":
        n = g * g / 2
        if abs(n - round(n)) > 1e-9:
            raise ParameterError(f"charge {g} gives non-integer spin {n}")
        return cls(int(round(n)))


# -- one-particle structure ------------------------------------------------------

def _spectrum(f, grid: SpatialGrid | None = None):
    if isinstance(f, TestFunction):
        return f.grid, f.spectrum
    return grid, grid.ft(np.asarray(f))


def inner_product(grid: SpatialGrid, fh: np.ndarray, gh: np.ndarray) -> complex:
    p = grid.p
    pos = p > 0
    return complex(np.sum(p[pos] * fh[pos] * np.conj(gh[pos])) * grid.dp)


def one_particle_form(f: TestFunction, g: TestFunction) -> tuple[complex, float]:
    """(inner product, symplectic form) of two real test functions."""
    if f.grid != g.grid:
        raise InputError("test functions live on different grids")
    ip = inner_product(f.grid, f.spectrum, g.spectrum)
    return ip, ip.imag


def one_particle_norm(f: TestFunction) -> float:
    return math.sqrt(max(inner_product(f.grid, f.spectrum, f.spectrum).real, 0.0))


def momentum_multiplier(phi: InnerFunction, grid: SpatialGrid, naive: bool = False) -> np.ndarray:
    """Array multiplying the spectrum.  Boundary values come from the closed
    form on the real axis; p = 0 uses the limit along the imaginary axis."""
    p = grid.p
    pos, neg = p > 0, p < 0
    mult = np.empty(grid.m, dtype=complex)
    mult[pos] = inner.boundary_values(phi, p[pos], Domain.UPPER_HALF_PLANE, eps=0.0)
    at_zero = complex(inner.evaluate(phi, 1e-12j, Domain.UPPER_HALF_PLANE))
    if naive:
        mult[neg] = inner.boundary_values(phi, p[neg], Domain.UPPER_HALF_PLANE, eps=0.0)
        mult[p == 0] = at_zero
        return mult
    mult[neg] = np.conj(inner.boundary_values(phi, -p[neg], Domain.UPPER_HALF_PLANE, eps=0.0))
    mult[p == 0] = at_zero.real
    nyq = np.argmin(p)  # the Nyquist bin has no partner
    mult[nyq] = mult[nyq].real
    return mult


@dataclass
class MultipliedFunction:
    grid: SpatialGrid
    values: np.ndarray
    reality_residual: float

    @property
    def spectrum(self) -> np.ndarray:
        return self.grid.ft(self.values)


def apply_multiplier_V(phi: InnerFunction, f: TestFunction, naive: bool = False) -> MultipliedFunction:
    """V f with V = phi(P); ``naive`` uses phi(p) on the whole real line."""
    spec = f.spectrum * momentum_multiplier(phi, f.grid, naive)
    out = f.grid.ift(spec)
    nrm = np.linalg.norm(out)
    res = float(np.linalg.norm(out.imag) / nrm) if nrm > 0 else 0.0
    return MultipliedFunction(f.grid, out, res)


def _check_intervals(I1, I2, grid: SpatialGrid):
    a1, b1 = map(float, I1)
    a2, b2 = map(float, I2)
    if not (a1 < b1 and a2 < b2):
        raise InputError("intervals must have positive length")
    if not b1 < a2:
        raise InputError(f"interval I1={I1} must lie strictly left of I2={I2}")
    if not (grid.contains(a1, b1) and grid.contains(a2, b2)):
        raise InputError("intervals must lie inside the grid range")
    return (a1, b1), (a2, b2)


def locality_check(
    phi: InnerFunction,
    I1,
    I2,
    n_pairs: int = 64,
    tol: float = 1e-6,
    grid: SpatialGrid | None = None,
    seed=0,
    csv_path=None,
) -> CheckReport:
    """max over random bump pairs of |omega(f1, V f2)| / (||f1|| ||f2||) with
    supp f1 in I1, supp f2 in I2."""
    grid = grid or SpatialGrid()
    I1, I2 = _check_intervals(I1, I2, grid)
    rng = np.random.default_rng(seed)
    pairs = [(random_bump(grid, I1, rng), random_bump(grid, I2, rng)) for _ in range(n_pairs)]
    mult = momentum_multiplier(phi, grid)

    def one(pair):
        f1, f2 = pair
        h1, h2 = f1.spectrum, f2.spectrum
        n1 = math.sqrt(inner_product(grid, h1, h1).real)
        n2 = math.sqrt(inner_product(grid, h2, h2).real)
        return abs(inner_product(grid, h1, mult * h2).imag) / (n1 * n2)

    res = pmap(one, pairs)
    if csv_path is not None:
        path = Path(csv_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["pair", "residual"])
            for i, r in enumerate(res):
                w.writerow([i, repr(float(r))])
    worst = float(max(res))
    return CheckReport(
        "locality",
        worst,
        tol,
        worst < tol,
        {"I1": list(I1), "I2": list(I2), "n_pairs": n_pairs, "residuals": [float(r) for r in res]},
    )


# -- charge transport ----------------------------------------------------------

def phi_at_zero(phi: InnerFunction) -> complex:
    return complex(inner.evaluate(phi, 1e-12j, Domain.UPPER_HALF_PLANE))


def _symmetry_samples() -> np.ndarray:
    return np.geomspace(1e-2, 1e2, 81)


def _require_symmetric(phi: InnerFunction, tol: float = 1e-10):
    rep = inner.symmetry_check(phi, _symmetry_samples(), tol, coords=Domain.UPPER_HALF_PLANE)
    if not rep.passed:
        raise RealityError(f"transport needs a symmetric inner function (residual {rep.max_residual:.2e})")


def _require_normalized(phi: InnerFunction, tol: float = 1e-6):
    val = phi_at_zero(phi)
    if abs(val - 1) > tol:
        raise NormalizationError(f"phi(0) = {val:.6g}; multiply by -1 or rescale so phi(0) = 1")


def _composite_gl(fun, lo: float, hi: float, panels_per_octave: int = 64, nodes: int = 16) -> float:
    octaves = max(1, int(math.ceil(math.log2(hi / lo))))
    edges = np.geomspace(lo, hi, octaves * panels_per_octave + 1)
    gx, gw = legendre.leggauss(nodes)
    mid = (edges[:-1] + edges[1:]) / 2
    half = (edges[1:] - edges[:-1]) / 2
    pts = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
    wts = (half[:, None] * gw[None, :]).ravel()
    return float(np.sum(fun(pts) * wts))


def holder_integral(
    phi: InnerFunction,
    rho: ChargeDensity | None = None,
    cut: float = 0.2,
    p_max: float = 200.0,
) -> float:
    """int_cut^p_max |1 - phi(p)|^2 / p |ell-hat(p)|^2 dp, or without the
    |ell-hat|^2 weight (and up to p_max) when ``rho`` is None."""

    def integrand(p):
        val = inner.boundary_values(phi, p, Domain.UPPER_HALF_PLANE, eps=0.0)
        out = np.abs(1 - val) ** 2 / p
        if rho is not None:
            out = out * np.abs(rho.momentum_profile(p)) ** 2
        return out

    return _composite_gl(integrand, cut, p_max)


@dataclass
class RefinementStudy:
    cuts: list
    values: list
    growth: list
    divergent: bool

    @property
    def increments(self) -> list:
        """Absolute change per halving; roughly constant for a log divergence."""
        return [b - a for a, b in zip(self.values, self.values[1:])]

    def to_dict(self) -> dict:
        return {
            "cuts": list(self.cuts),
            "values": list(self.values),
            "growth": list(self.growth),
            "increments": self.increments,
            "verdict": "divergent" if self.divergent else "finite",
        }


def holder_refinement(
    phi: InnerFunction,
    rho: ChargeDensity | None = None,
    cut: float = 0.2,
    levels: int = 3,
    p_max: float | None = None,
    growth_tol: float = DIVERGENCE_GROWTH,
) -> RefinementStudy:
    """Evaluate the integral with the lower cutoff halved ``levels - 1`` times;
    divergent iff every refinement grows it by more than ``growth_tol``."""
    if p_max is None:
        p_max = 200.0 if rho is not None else 1.0
    cuts = [cut / 2**lvl for lvl in range(levels)]
    vals = [holder_integral(phi, rho, c, p_max) for c in cuts]
    growth = [(b - a) / a if a > 0 else (math.inf if b > 0 else 0.0) for a, b in zip(vals, vals[1:])]
    divergent = bool(growth) and all(gr > growth_tol for gr in growth)
    return RefinementStudy(cuts, vals, growth, divergent)


@dataclass
class TransportResult:
    grid: SpatialGrid
    ell: np.ndarray
    ell1: np.ndarray
    checks: list
    holder: RefinementStudy
    holder_unweighted: RefinementStudy

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and not self.holder.divergent

    def to_dict(self) -> dict:
        return {
            "checks": [c.to_dict() for c in self.checks],
            "holder": self.holder.to_dict(),
            "holder_unweighted": self.holder_unweighted.to_dict(),
        }


def _check_density(rho: ChargeDensity, grid: SpatialGrid, shift: float = 0.0):
    a, b = rho.support
    if not a > 0:
        raise InputError(f"charge density must be supported in (0, inf), got {rho.support}")
    if not grid.contains(a, b + max(shift, 0.0)):
        raise InputError("charge density (after shift) leaves the grid")


def transport_density(
    phi: InnerFunction,
    rho: ChargeDensity,
    grid: SpatialGrid | None = None,
    require_normalized: bool = True,
    reality_tol: float = 1e-8,
    charge_tol: float = 1e-6,
    leak_tol: float = 1e-3,
    holder_cut: float = 0.2,
) -> TransportResult:
    """ell_1 with ell_1-hat = phi ell-hat, plus diagnostics (reality, charge,
    leakage to the left of the origin, Hoelder integral under refinement)."""
    grid = grid or SpatialGrid()
    _check_density(rho, grid)
    _require_symmetric(phi)
    if require_normalized:
        _require_normalized(phi)
    ell = rho.ell(grid.x)
    ell1c = grid.ift(grid.ft(ell) * momentum_multiplier(phi, grid))
    nrm = np.linalg.norm(ell1c)
    reality = float(np.linalg.norm(ell1c.imag) / nrm)
    ell1 = ell1c.real
    q0 = float(np.sum(ell) * grid.dx)
    q1 = float(np.sum(ell1) * grid.dx)
    charge = abs(q1 - q0) / abs(q0) if q0 != 0 else abs(q1)
    delta = 10 * grid.dx
    leak = float(np.linalg.norm(ell1[grid.x < -delta]) / np.linalg.norm(ell1))
    checks = [
        CheckReport("reality", reality, reality_tol, reality < reality_tol),
        CheckReport("charge", charge, charge_tol, charge < charge_tol, {"charge_in": q0 / (2 * math.pi), "charge_out": q1 / (2 * math.pi)}),
        CheckReport("leakage", leak, leak_tol, leak < leak_tol, {"delta": delta}),
    ]
    return TransportResult(
        grid,
        ell,
        ell1,
        checks,
        holder_refinement(phi, rho, holder_cut),
        holder_refinement(phi, None, holder_cut),
    )


def cocycle_check(
    phi: InnerFunction,
    rho: ChargeDensity,
    t: float,
    grid: SpatialGrid | None = None,
    tol: float = 1e-8,
    require_normalized: bool = True,
) -> CheckReport:
    """L_1 - L_{1,t} against V_0 (L - L_t) for the shift by t.

    Left side: primitive (in momentum space) of the transported difference
    ell_1 - ell_{1,t}.  Right side: the analytic primitive L - L_t, then
    transported.  Relative sup-norm residual.
    """
    grid = grid or SpatialGrid()
    t = float(t)
    _check_density(rho, grid, t)
    if rho.support[0] + min(t, 0.0) <= -grid.x_max:
        raise InputError("shifted density leaves the grid")
    _require_symmetric(phi)
    if require_normalized:
        _require_normalized(phi)
    x, p = grid.x, grid.p
    mult = momentum_multiplier(phi, grid)
    diff_hat = mult * grid.ft(rho.ell(x) - rho.ell(x - t))
    nz = p != 0
    prim_hat = np.zeros(grid.m, dtype=complex)
    prim_hat[nz] = 1j * diff_hat[nz] / p[nz]
    lhs = grid.ift(prim_hat)
    lhs = lhs - lhs[0]
    rhs = grid.ift(mult * grid.ft(rho.primitive(x) - rho.primitive(x - t)))
    scale = np.max(np.abs(rhs))
    err = np.max(np.abs(lhs - rhs))
    res = float(err / scale) if scale > 0 else float(err)
    return CheckReport("cocycle", res, tol, res < tol, {"t": t})
