"""The irreducible standard pair on a rapidity grid.

States are sampled on ``q_j = -q_max + j dq``.  With ``P = exp(Q)``:

    T(t)         multiply by exp(i t e^q)
    Delta^{-is}  f(q) -> f(q + 2 pi s)      (cyclic shift, 2 pi s / dq integer)
    J            complex conjugation
    psi(Q)       multiply by boundary values of psi in strip coordinates

H consists of the f which continue analytically to the strip ``0 < Im q < pi``
with ``f(q + i pi) = conj f(q)``.  Writing ``g`` for the dual profile
``g(s) = (1/2pi) int f(q) e^{-isq} dq`` this says ``u(s) = e^{-pi s/2} g(s)`` is
the transform of a real function, which is what membership_residual tests
on the band ``|s| <= s_max``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import inner
from .errors import (
    AdmissibilityError,
    DegenerateProjectionError,
    InputError,
    NotInnerError,
    ParameterError,
    PrecisionError,
)
from .inner import Domain, Generator, InnerFunction
from .parallel import pmap
from .reports import CheckReport

EDGE_MASS_TOL = 1e-8
UNIMODULAR_TOL = 1e-8


@dataclass(frozen=True)
class RapidityGrid:
    n: int = 4096
    q_max: float = 16.0
    s_max: float = 12 / math.pi
    # admissibility: share of the dual-profile norm that must sit in the band
    min_band_fraction: float = 0.25

    def __post_init__(self):
        n = int(self.n)
        if n < 2 or n & (n - 1):
            raise ParameterError(f"grid size must be a power of two, got {self.n}")
        if not self.q_max > 0 or not self.s_max > 0:
            raise ParameterError("q_max and s_max must be positive")
        if not 0 < self.min_band_fraction <= 1:
            raise ParameterError("min_band_fraction must lie in (0, 1]")
        object.__setattr__(self, "n", n)

    @property
    def dq(self) -> float:
        return 2 * self.q_max / self.n

    @property
    def ds(self) -> float:
        return 2 * math.pi / (self.n * self.dq)

    @property
    def q(self) -> np.ndarray:
        return -self.q_max + self.dq * np.arange(self.n)

    @property
    def k(self) -> np.ndarray:
        return np.fft.fftfreq(self.n) * self.n

    @property
    def s(self) -> np.ndarray:
        return self.k * self.ds

    @property
    def band(self) -> np.ndarray:
        return np.abs(self.s) <= self.s_max

    def weight(self) -> np.ndarray:
        """e^{-pi s/2} on the band (clipped outside, where it is never used)."""
        return np.exp(-math.pi * np.clip(self.s, -self.s_max, self.s_max) / 2)

    def _sign(self) -> np.ndarray:
        # the grid starts at -q_max = -n dq / 2, which contributes e^{i s_k q_max} = (-1)^k
        return (-1.0) ** self.k

    def dual(self, values) -> np.ndarray:
        """g(s_k) = (1/2pi) sum_j f(q_j) e^{-i s_k q_j} dq."""
        return self.dq / (2 * math.pi) * self._sign() * np.fft.fft(values)

    def undual(self, g) -> np.ndarray:
        return self.ds * self.n * np.fft.ifft(g / self._sign())

    def summary(self) -> dict:
        return {"n": self.n, "q_max": self.q_max, "s_max": self.s_max, "dq": self.dq, "ds": self.ds}


@dataclass(frozen=True)
class WaveFunction:
    grid: RapidityGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.shape != (self.grid.n,):
            raise InputError(f"expected {self.grid.n} samples, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise InputError("wave function has non-finite samples")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid: RapidityGrid, fn) -> "WaveFunction":
        return cls(grid, fn(grid.q))

    @property
    def norm(self) -> float:
        return float(math.sqrt(self.grid.dq) * np.linalg.norm(self.values))

    def normalized(self) -> "WaveFunction":
        nrm = self.norm
        if nrm == 0:
            raise InputError("cannot normalise the zero vector")
        return WaveFunction(self.grid, self.values / nrm)

    def __add__(self, other):
        _same_grid(self, other)
        return WaveFunction(self.grid, self.values + other.values)

    def __sub__(self, other):
        _same_grid(self, other)
        return WaveFunction(self.grid, self.values - other.values)

    def __mul__(self, c):
        return WaveFunction(self.grid, self.values * complex(c))

    __rmul__ = __mul__

    def dump_csv(self, path) -> None:
        """Columns q, Re f, Im f."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["q", "re", "im"])
            for qj, v in zip(self.grid.q, self.values):
                w.writerow([repr(float(qj)), repr(float(v.real)), repr(float(v.imag))])


def _same_grid(a: WaveFunction, b: WaveFunction):
    if a.grid != b.grid:
        raise InputError("wave functions live on different grids")


# -- operators -------------------------------------------------------------

def boundary_multiplier(spec: InnerFunction, grid: RapidityGrid) -> np.ndarray:
    """psi(q) on the real rapidity line (p = e^q), from the closed form."""
    return np.asarray(inner.boundary_values(spec, grid.q, Domain.STRIP, eps=0.0))


def flow_multiplier(gen: Generator, t: float, grid: RapidityGrid) -> np.ndarray:
    """exp(i t f(e^q)); negative t is allowed here (the unitary group)."""
    f = inner.generator_eval(gen, np.exp(grid.q) + 0j)
    return np.exp(1j * t * f)


def dilation_shift(s: float, grid: RapidityGrid) -> int:
    k = 2 * math.pi * s / grid.dq
    kr = round(k)
    if abs(k - kr) > 1e-9 * max(1.0, abs(k)):
        raise ParameterError(f"dilation parameter s={s!r} is not commensurate with dq={grid.dq!r}")
    return int(kr)


def _edge_mass(values: np.ndarray, k: int) -> float:
    if k == 0:
        return 0.0
    k = min(abs(k), values.size)
    tot = np.linalg.norm(values)
    if tot == 0:
        return 0.0
    edge = np.concatenate([values[:k], values[-k:]])
    return float(np.linalg.norm(edge) / tot)


OPERATORS = ("qphase", "translation", "dilation", "conjugation", "multiplier")


def apply_operator(op: str, param, f: WaveFunction) -> WaveFunction:
    """Apply one of OPERATORS.  ``param`` is t (qphase, translation), s
    (dilation, meaning Delta^{-is}), None (conjugation) or an InnerFunction /
    array of samples (multiplier)."""
    g = f.grid
    v = f.values
    if op == "qphase":
        out = np.exp(1j * float(param) * g.q) * v
    elif op == "translation":
        out = np.exp(1j * float(param) * np.exp(g.q)) * v
    elif op == "dilation":
        k = dilation_shift(float(param), g)
        mass = _edge_mass(v, k)
        if mass > EDGE_MASS_TOL:
            raise PrecisionError(f"edge mass {mass:.2e} within the dilation shift exceeds {EDGE_MASS_TOL:g}")
        out = np.roll(v, -k)
    elif op == "conjugation":
        out = np.conj(v)
    elif op == "multiplier":
        mult = boundary_multiplier(param, g) if isinstance(param, InnerFunction) else np.asarray(param, complex)
        out = mult * v
    else:
        raise ParameterError(f"unknown operator {op!r}; expected one of {OPERATORS}")
    return WaveFunction(g, out)


# -- subspaces and membership -------------------------------------------------

@dataclass(frozen=True)
class SubspaceHandle:
    """H itself, K = psi(Q) H, or K = exp(i t f(P)) H."""

    which: str = "H"
    psi: InnerFunction | None = None
    gen: Generator | None = None
    t: float = 0.0

    def __post_init__(self):
        if self.which not in ("H", "VH", "flow"):
            raise InputError(f"unknown subspace {self.which!r}")
        if self.which == "VH" and self.psi is None:
            raise InputError("VH subspace needs an inner function")
        if self.which == "flow" and self.gen is None:
            raise InputError("flow subspace needs a generator")

    @classmethod
    def H(cls) -> "SubspaceHandle":
        return cls("H")

    @classmethod
    def VH(cls, psi: InnerFunction) -> "SubspaceHandle":
        return cls("VH", psi=psi)

    @classmethod
    def flow(cls, gen: Generator, t: float) -> "SubspaceHandle":
        return cls("flow", gen=gen, t=float(t))

    def multiplier(self, grid: RapidityGrid) -> np.ndarray | None:
        if self.which == "VH":
            return boundary_multiplier(self.psi, grid)
        if self.which == "flow":
            return flow_multiplier(self.gen, self.t, grid)
        return None


@dataclass
class MembershipReport:
    residual: float
    tol: float
    band_fraction: float = 1.0

    @property
    def passed(self) -> bool:
        return bool(self.residual < self.tol)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {
            "check": "membership",
            "max_residual": float(self.residual),
            "tol": float(self.tol),
            "verdict": self.verdict,
            "details": {"band_fraction": float(self.band_fraction)},
        }


def _pull_back(f: WaveFunction, sub: SubspaceHandle | None) -> np.ndarray:
    if sub is None or sub.which == "H":
        return f.values
    return np.conj(sub.multiplier(f.grid)) * f.values


def band_fraction(values: np.ndarray, grid: RapidityGrid) -> float:
    g = grid.dual(values)
    tot = np.linalg.norm(g)
    return float(np.linalg.norm(g[grid.band]) / tot) if tot > 0 else 0.0


def _admissible_dual(values: np.ndarray, grid: RapidityGrid) -> np.ndarray:
    if not np.any(values):
        raise InputError("zero vector has no membership residual")
    g = grid.dual(values)
    frac = float(np.linalg.norm(g[grid.band]) / np.linalg.norm(g))
    if frac < grid.min_band_fraction:
        raise AdmissibilityError(
            f"only {frac:.3g} of the dual profile lies in |s| <= {grid.s_max:.4g}"
            f" (need {grid.min_band_fraction:g})"
        )
    return g


def involution(g: np.ndarray, grid: RapidityGrid) -> np.ndarray:
    """(theta g)(s) = e^{pi s} conj g(-s) on the band, zero outside."""
    band = grid.band
    g_minus = np.roll(g[::-1], 1)  # index of -s_k is (n - k) mod n
    out = np.exp(math.pi * np.clip(grid.s, -grid.s_max, grid.s_max)) * np.conj(g_minus)
    return np.where(band, out, 0)


def membership_residual(f: WaveFunction, sub: SubspaceHandle | None = None, tol: float = 1e-6) -> MembershipReport:
    """Relative imaginary part ||Im v|| / ||v|| of the function whose dual
    profile is e^{-pi s/2} g(s) on the band."""
    grid = f.grid
    vals = _pull_back(f, sub)
    g = _admissible_dual(vals, grid)
    u = np.where(grid.band, grid.weight() * g, 0)
    v = grid.undual(u)
    nv = np.linalg.norm(v)
    res = float(np.linalg.norm(v.imag) / nv) if nv > 0 else 1.0
    frac = float(np.linalg.norm(g[grid.band]) / np.linalg.norm(g))
    return MembershipReport(res, tol, frac)


def project_to_H(f: WaveFunction, sub: SubspaceHandle | None = None) -> WaveFunction:
    """Real-linear idempotent (1 + theta)/2 onto H (or onto V H by conjugating
    with the multiplier).  Not an orthogonal projection."""
    grid = f.grid
    mult = None if sub is None else sub.multiplier(grid)
    vals = f.values if mult is None else np.conj(mult) * f.values
    g = _admissible_dual(vals, grid)
    w = grid.weight()
    u = np.where(grid.band, w * g, 0)
    u_sym = (u + np.conj(np.roll(u[::-1], 1))) / 2
    out = grid.undual(np.where(grid.band, u_sym / w, 0))
    if mult is not None:
        out = mult * out
    if np.linalg.norm(out) < 1e-12 * np.linalg.norm(f.values):
        raise DegenerateProjectionError("projection is numerically zero (input lies in iH)")
    return WaveFunction(grid, out)


# -- sample generators ---------------------------------------------------------

def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def strip_gaussian(grid: RapidityGrid, center: float, width: float) -> np.ndarray:
    """exp(-(q - i pi/2 - a)^2 / (2 sigma^2)); real multiples of it lie in H."""
    z = grid.q - 1j * math.pi / 2 - center
    return np.exp(-(z**2) / (2 * width**2))


def projected_samples(grid: RapidityGrid, count: int, seed=0, centers=(-1.0, 1.0), widths=(1.8, 2.0), terms=3):
    """Random H vectors: complex combinations of wide strip Gaussians passed
    through project_to_H and normalised.  Wide inputs keep band-edge content
    (amplified by e^{pi s_max}) near roundoff."""
    rng = _rng(seed)
    out = []
    for _ in range(count):
        vals = np.zeros(grid.n, complex)
        for _ in range(terms):
            c = complex(rng.normal(), rng.normal())
            vals += c * strip_gaussian(grid, rng.uniform(*centers), rng.uniform(*widths))
        out.append(project_to_H(WaveFunction(grid, vals)).normalized())
    return out


def analytic_samples(grid: RapidityGrid, count: int, seed=0, centers=(0.0, 2.0), widths=(0.6, 0.8), terms=3):
    """Exact H vectors: real combinations of strip Gaussians."""
    rng = _rng(seed)
    out = []
    for _ in range(count):
        vals = np.zeros(grid.n, complex)
        for _ in range(terms):
            vals += rng.normal() * strip_gaussian(grid, rng.uniform(*centers), rng.uniform(*widths))
        out.append(WaveFunction(grid, vals).normalized())
    return out


def localized_random(grid: RapidityGrid, count: int, seed=0, width: float = 2.0):
    """Complex noise under a Gaussian envelope; negligible mass near the edges."""
    rng = _rng(seed)
    env = np.exp(-grid.q**2 / (2 * width**2))
    return [
        WaveFunction(grid, (rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n)) * env).normalized()
        for _ in range(count)
    ]


# -- verifications -------------------------------------------------------------

def _rel(a: WaveFunction, b: WaveFunction, ref: WaveFunction) -> float:
    return float(np.linalg.norm(a.values - b.values) / np.linalg.norm(ref.values))


def verify_borchers(f: WaveFunction, t: float, s: float) -> tuple[float, float]:
    """Relative residuals of Delta^{is} T(t) Delta^{-is} = T(e^{-2 pi s} t) and
    J T(t) J = T(-t) on ``f``."""
    inner_ = apply_operator("dilation", s, f)
    lhs = apply_operator("dilation", -s, apply_operator("translation", t, inner_))
    rhs = apply_operator("translation", math.exp(-2 * math.pi * s) * t, f)
    r1 = _rel(lhs, rhs, f)
    lhs2 = apply_operator("conjugation", None, apply_operator("translation", t, apply_operator("conjugation", None, f)))
    rhs2 = apply_operator("translation", -t, f)
    return r1, _rel(lhs2, rhs2, f)


def _symmetry_grid(grid: RapidityGrid) -> np.ndarray:
    # interior part of the rapidity range; e^q stays moderate
    return grid.q[np.abs(grid.q) <= min(grid.q_max, 10.0)][::8]


def _check_unimodular(mult: np.ndarray) -> float:
    defect = float(np.max(np.abs(np.abs(mult) - 1)))
    if defect > UNIMODULAR_TOL:
        raise NotInnerError(f"multiplier is not unimodular on the grid (defect {defect:.2e})")
    return defect


def verify_endomorphism(
    psi: InnerFunction,
    n_samples: int = 32,
    tol: float = 1e-6,
    grid: RapidityGrid | None = None,
    seed=0,
    sym_tol: float = 1e-10,
) -> CheckReport:
    """Does psi(Q) map H into itself?  Samples H, multiplies, tests membership."""
    grid = grid or RapidityGrid()
    mult = boundary_multiplier(psi, grid)
    defect = _check_unimodular(mult)
    sym = inner.symmetry_check(psi, _symmetry_grid(grid), sym_tol, coords=Domain.STRIP)
    samples = projected_samples(grid, n_samples, seed)
    res = pmap(lambda f: membership_residual(WaveFunction(grid, mult * f.values)).residual, samples)
    tvec = samples[0]
    commute = _rel(
        apply_operator("translation", 1.0, WaveFunction(grid, mult * tvec.values)),
        WaveFunction(grid, mult * apply_operator("translation", 1.0, tvec).values),
        tvec,
    )
    worst = float(max(res))
    return CheckReport(
        "endomorphism",
        worst,
        tol,
        worst < tol and sym.passed,
        {
            "n_samples": n_samples,
            "min_residual": float(min(res)),
            "symmetric": sym.passed,
            "symmetry_residual": sym.max_residual,
            "unimodular_defect": defect,
            "translation_commutator": commute,
        },
    )


def gamma_check(psi: InnerFunction, f: WaveFunction, tol: float = 1e-12) -> CheckReport:
    """Gamma = V J V* J against V^2 with V = psi(Q).  V^2 is evaluated from the
    product spec, not by squaring the samples."""
    grid = f.grid
    mult = boundary_multiplier(psi, grid)
    _check_unimodular(mult)
    v_star = WaveFunction(grid, np.conj(mult))
    gamma_f = apply_operator(
        "multiplier", mult,
        apply_operator("conjugation", None,
                       apply_operator("multiplier", v_star.values, apply_operator("conjugation", None, f))),
    )
    sq = apply_operator("multiplier", inner.product(psi, psi), f)
    res = _rel(gamma_f, sq, f)
    return CheckReport("gamma", res, tol, res < tol)


def flow_invariance(
    gen: Generator,
    t: float,
    n_samples: int = 32,
    tol: float = 1e-6,
    grid: RapidityGrid | None = None,
    seed=0,
) -> CheckReport:
    """Membership of exp(i t f(P)) h for exact H vectors h.  Invariance is
    expected for t >= 0 only.

    Samples are centred in rapidity near log|t|, where the multiplier's phase
    varies on the scale the grid resolves.
    """
    grid = grid or RapidityGrid()
    t = float(t)
    mult = flow_multiplier(gen, t, grid)
    c0 = math.log(abs(t)) if t != 0 else 0.0
    samples = analytic_samples(grid, n_samples, seed, centers=(c0, c0 + 2.0))
    res = pmap(lambda f: membership_residual(WaveFunction(grid, mult * f.values)).residual, samples)
    worst = float(max(res))
    return CheckReport(
        "flow_invariance",
        worst,
        tol,
        worst < tol,
        {"t": t, "expected_invariant": t >= 0 or gen.is_trivial, "min_residual": float(min(res))},
    )


def dump_samples(directory, vectors: Sequence[WaveFunction], stem: str = "vector") -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, f in enumerate(vectors):
        path = d / f"{stem}_{i:03d}.csv"
        f.dump_csv(path)
        paths.append(path)
    return paths
