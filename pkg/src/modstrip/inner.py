"""Inner functions on the disk, the upper half-plane and the strip.

A spec is the canonical data ``phase * Blaschke * exp(-singular)`` with a
finite list of zeros and a purely atomic singular measure.  Disk specs carry
disk data; half-plane and strip specs both carry half-plane data (zeros with
``Im a > 0``, atoms on the real line or at infinity), a strip spec simply being
evaluated at ``p = exp(w)``.

Points are moved between coordinate systems by composition with the fixed
chain

    disk --h--> upper half-plane --log--> strip,     h(z) = i (1 + z) / (1 - z)

and never by rewriting the canonical data.

Half-plane Blaschke factors are ``(p - a) / (p - conj(a))`` without a
normalising phase; for purely imaginary ``a`` this is ``(p - a) / (p + a)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, InputError, PoleError, SingularityError
from .reports import CheckReport, residual_report

DEFAULT_EPS = 1e-6
_LOC_TOL = 1e-12
# evaluation refuses points this close to an atom (relative to max(1, |atom|))
_HIT_TOL = 1e-14


class Domain(enum.Enum):
    DISK = "Disk"
    UPPER_HALF_PLANE = "UpperHalfPlane"
    STRIP = "Strip"

    @classmethod
    def parse(cls, value: "Domain | str") -> "Domain":
        if isinstance(value, Domain):
            return value
        key = str(value).replace("_", "").replace("-", "").lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        aliases = {"uhp": cls.UPPER_HALF_PLANE, "halfplane": cls.UPPER_HALF_PLANE, "d": cls.DISK}
        if key in aliases:
            return aliases[key]
        raise InputError(f"unknown domain {value!r}")

    @property
    def uses_disk_formula(self) -> bool:
        return self is Domain.DISK


# -- conformal chain ---------------------------------------------------------

def cayley(z):
    """Disk to upper half-plane."""
    z = np.asarray(z, dtype=complex)
    return 1j * (1 + z) / (1 - z)


def cayley_inverse(p):
    """Upper half-plane to disk."""
    p = np.asarray(p, dtype=complex)
    return (p - 1j) / (p + 1j)


def is_interior(z, domain: Domain) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if domain is Domain.DISK:
        return np.abs(z) < 1
    if domain is Domain.UPPER_HALF_PLANE:
        return z.imag > 0
    return (z.imag > 0) & (z.imag < math.pi)


def to_formula_coords(z, coords: Domain, disk_formula: bool) -> np.ndarray:
    """Map points given in ``coords`` to the coordinates of the closed-form
    expression (disk, or half-plane for half-plane/strip specs)."""
    z = np.asarray(z, dtype=complex)
    if coords is Domain.STRIP:
        z = np.exp(z)
        coords = Domain.UPPER_HALF_PLANE
    if disk_formula:
        return z if coords is Domain.DISK else cayley_inverse(z)
    return cayley(z) if coords is Domain.DISK else z


# -- canonical data ----------------------------------------------------------

@dataclass(frozen=True)
class InnerFunction:
    """Canonical data of an inner function.

    ``zeros`` is a tuple of ``(location, multiplicity)``; ``atoms`` a tuple of
    ``(location, weight)`` where the location is a unit complex number for the
    disk and a real number or ``math.inf`` otherwise.
    """

    domain: Domain = Domain.DISK
    phase: complex = 1.0 + 0.0j
    zeros: tuple = ()
    atoms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "domain", Domain.parse(self.domain))
        phase = complex(self.phase)
        if abs(abs(phase) - 1.0) > 1e-12:
            raise InputError(f"phase must be unimodular, got |phase| = {abs(phase)!r}")
        object.__setattr__(self, "phase", phase)
        object.__setattr__(self, "zeros", tuple(self._check_zero(a, m) for a, m in self.zeros))
        atoms = tuple(self._check_atom(s, w) for s, w in self.atoms)
        for i, (s, _) in enumerate(atoms):
            for t, _ in atoms[i + 1:]:
                if s == t:
                    raise InputError(f"atom locations must be distinct, {s!r} repeats")
        object.__setattr__(self, "atoms", atoms)

    def _check_zero(self, a, mult):
        a = complex(a)
        mult = int(mult)
        if mult < 1:
            raise InputError(f"zero multiplicity must be a positive integer, got {mult}")
        if self.domain is Domain.DISK:
            if not abs(a) < 1:
                raise InputError(f"zero outside open disk: {a!r}")
        elif not a.imag > 0:
            raise InputError(f"zero outside open upper half-plane: {a!r}")
        return a, mult

    def _check_atom(self, loc, weight):
        weight = float(weight)
        if not weight > 0 or not math.isfinite(weight):
            raise InputError(f"atom weight must be positive and finite, got {weight!r}")
        if self.domain is Domain.DISK:
            loc = complex(loc)
            if abs(abs(loc) - 1.0) > 1e-9:
                raise InputError(f"disk atom must lie on the unit circle, got {loc!r}")
            loc = loc / abs(loc)
        else:
            if isinstance(loc, complex):
                if loc.imag != 0:
                    raise InputError(f"half-plane atom must be real or infinite, got {loc!r}")
                loc = loc.real
            loc = float(loc)
            if math.isnan(loc) or loc == -math.inf:
                raise InputError(f"invalid atom location {loc!r}")
        return loc, weight

    # convenience constructors
    @classmethod
    def constant(cls, domain=Domain.DISK, phase: complex = 1.0) -> "InnerFunction":
        return cls(domain, phase)

    @classmethod
    def blaschke(cls, zeros: Iterable, domain=Domain.DISK, phase: complex = 1.0) -> "InnerFunction":
        return cls(domain, phase, tuple(_as_pair(z, 1) for z in zeros))

    @classmethod
    def singular(cls, atoms: Iterable, domain=Domain.DISK, phase: complex = 1.0) -> "InnerFunction":
        return cls(domain, phase, (), tuple(atoms))

    @classmethod
    def two_atom(cls, c1: float, c2: float) -> "InnerFunction":
        """Disk form ``exp(c1 (z+1)/(z-1) + c2 (z-1)/(z+1))``: atoms at 1 and -1."""
        atoms = [(1.0, c1), (-1.0, c2)]
        return cls(Domain.DISK, 1.0, (), tuple((complex(s), w) for s, w in atoms if w > 0))

    def with_domain(self, domain) -> "InnerFunction":
        """Relabel half-plane data as strip data or vice versa."""
        domain = Domain.parse(domain)
        if (domain is Domain.DISK) != (self.domain is Domain.DISK):
            raise DomainError("disk data cannot be relabelled; transport points instead")
        return InnerFunction(domain, self.phase, self.zeros, self.atoms)

    def __mul__(self, other: "InnerFunction") -> "InnerFunction":
        return product(self, other)

    def __call__(self, z, coords=None):
        return evaluate(self, z, coords)

    @property
    def is_singular(self) -> bool:
        return not self.zeros


def _as_pair(z, default_mult):
    if isinstance(z, (tuple, list)) and len(z) == 2:
        return complex(z[0]), int(z[1])
    return complex(z), default_mult


# -- evaluation ----------------------------------------------------------------

def _disk_formula(spec: InnerFunction, z: np.ndarray) -> np.ndarray:
    out = np.full(z.shape, spec.phase, dtype=complex)
    for a, mult in spec.zeros:
        if a == 0:
            factor = z
        else:
            factor = (abs(a) / a) * (z - a) / (1 - np.conj(a) * z)
        out = out * factor**mult
    if spec.atoms:
        exponent = np.zeros(z.shape, dtype=complex)
        for zeta, w in spec.atoms:
            exponent += w * (zeta + z) / (zeta - z)
        out = out * np.exp(-exponent)
    return out


def _half_plane_kernel(p: np.ndarray, s: float) -> np.ndarray:
    if math.isinf(s):
        return -p
    return (1 + p * s) / (p - s)


def _half_plane_formula(spec: InnerFunction, p: np.ndarray) -> np.ndarray:
    out = np.full(p.shape, spec.phase, dtype=complex)
    for a, mult in spec.zeros:
        out = out * ((p - a) / (p - np.conj(a))) ** mult
    if spec.atoms:
        exponent = np.zeros(p.shape, dtype=complex)
        for s, w in spec.atoms:
            exponent += w * _half_plane_kernel(p, s)
        out = out * np.exp(-1j * exponent)
    return out


def _formula(spec: InnerFunction, u: np.ndarray) -> np.ndarray:
    if spec.domain.uses_disk_formula:
        return _disk_formula(spec, u)
    return _half_plane_formula(spec, u)


def _check_atoms_avoided(spec: InnerFunction, u: np.ndarray) -> None:
    for s, _ in spec.atoms:
        if spec.domain.uses_disk_formula:
            hit = np.abs(u - s) < _HIT_TOL
        elif math.isinf(s):
            hit = ~np.isfinite(u)
        else:
            hit = np.abs(u - s) < _HIT_TOL * max(1.0, abs(s))
        if np.any(hit):
            raise SingularityError(f"evaluation at singular atom {s!r}")


def evaluate(spec: InnerFunction, z, coords=None):
    """Value at interior points ``z`` given in ``coords`` (default: the spec's
    own domain).  Raises DomainError for points on or outside the boundary."""
    coords = spec.domain if coords is None else Domain.parse(coords)
    zz = np.asarray(z, dtype=complex)
    if not np.all(is_interior(zz, coords)):
        raise DomainError(f"point(s) not interior to {coords.value}")
    u = to_formula_coords(zz, coords, spec.domain.uses_disk_formula)
    _check_atoms_avoided(spec, u)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = _formula(spec, u)
    return out if np.ndim(z) else complex(out)


def boundary_points(x, coords: Domain, eps: float = DEFAULT_EPS, upper: bool = False) -> np.ndarray:
    """Points at distance ``eps`` inside the boundary above the real samples
    ``x``.  For the disk ``x`` is an angle; for the strip ``upper`` selects the
    line ``Im = pi``."""
    x = np.asarray(x, dtype=float)
    if eps < 0:
        raise DomainError("eps must be nonnegative")
    if coords is Domain.DISK:
        return (1.0 - eps) * np.exp(1j * x)
    if coords is Domain.UPPER_HALF_PLANE:
        return x + 1j * eps
    return x + 1j * (math.pi - eps if upper else eps)


def boundary_values(spec: InnerFunction, x, coords=None, eps: float = DEFAULT_EPS, upper: bool = False):
    """Boundary values approached from inside.  ``eps = 0`` evaluates the
    closed form on the boundary itself, which is valid off the singular
    support."""
    coords = spec.domain if coords is None else Domain.parse(coords)
    pts = boundary_points(x, coords, eps, upper)
    if eps > 0:
        return evaluate(spec, pts, coords)
    u = to_formula_coords(pts, coords, spec.domain.uses_disk_formula)
    _check_atoms_avoided(spec, u)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = _formula(spec, u)
    return out if np.ndim(x) else complex(out)


def modulus_defect(spec: InnerFunction, x, eps: float = DEFAULT_EPS, coords=None) -> float:
    """max | |phi(x + i eps)| - 1 | over boundary samples."""
    vals = boundary_values(spec, np.atleast_1d(x), coords, eps)
    return float(np.max(np.abs(np.abs(vals) - 1.0)))


def distance_to_atoms(spec: InnerFunction, x, coords=None) -> np.ndarray:
    """Distance of boundary samples to the singular support, measured in the
    sample's own coordinate (angle on the disk, real line otherwise)."""
    coords = spec.domain if coords is None else Domain.parse(coords)
    x = np.asarray(x, dtype=float)
    out = np.full(x.shape, np.inf)
    for s, _ in spec.atoms:
        if coords is Domain.DISK:
            theta = (
                np.angle(s)
                if spec.domain.uses_disk_formula
                else np.angle(cayley_inverse(s)) if math.isfinite(s) else 0.0
            )
            d = np.abs(np.angle(np.exp(1j * (x - theta))))
        elif coords is Domain.UPPER_HALF_PLANE:
            loc = s if not spec.domain.uses_disk_formula else _disk_atom_to_line(s)
            d = np.abs(x - loc) if math.isfinite(loc) else np.full(x.shape, np.inf)
        else:
            loc = s if not spec.domain.uses_disk_formula else _disk_atom_to_line(s)
            d = np.abs(x - math.log(abs(loc))) if math.isfinite(loc) and loc != 0 else np.full(x.shape, np.inf)
        out = np.minimum(out, d)
    return out


def _disk_atom_to_line(zeta: complex) -> float:
    if abs(zeta - 1) < _LOC_TOL:
        return math.inf
    return float(cayley(zeta).real)


def product(s1: InnerFunction, s2: InnerFunction) -> InnerFunction:
    """Pointwise product, realised on the canonical data."""
    if s1.domain is not s2.domain:
        raise DomainError(f"cannot multiply {s1.domain.value} and {s2.domain.value} specs")
    zeros: dict = {}
    for a, m in s1.zeros + s2.zeros:
        zeros[a] = zeros.get(a, 0) + m
    atoms: dict = {}
    for s, w in s1.atoms + s2.atoms:
        atoms[s] = atoms.get(s, 0.0) + w
    return InnerFunction(s1.domain, s1.phase * s2.phase, tuple(zeros.items()), tuple(atoms.items()))


def reflection(spec: InnerFunction) -> InnerFunction:
    """The spec of ``conj(phi(conj z))`` (disk) or ``conj(phi(-conj p))``
    (half-plane/strip).  ``spec * reflection(spec)`` is always symmetric."""
    if spec.domain.uses_disk_formula:
        zeros = tuple((np.conj(a), m) for a, m in spec.zeros)
        atoms = tuple((np.conj(s), w) for s, w in spec.atoms)
    else:
        zeros = tuple((-np.conj(a), m) for a, m in spec.zeros)
        atoms = tuple((s if math.isinf(s) else -s, w) for s, w in spec.atoms)
    return InnerFunction(spec.domain, np.conj(spec.phase), zeros, atoms)


def symmetrize(spec: InnerFunction) -> InnerFunction:
    return product(spec, reflection(spec))


# -- checks ------------------------------------------------------------------

def symmetry_residual(spec: InnerFunction, grid, coords=None, eps: float = DEFAULT_EPS) -> np.ndarray:
    coords = spec.domain if coords is None else Domain.parse(coords)
    grid = np.asarray(grid)
    if grid.size == 0:
        raise InputError("empty sample grid")
    if coords is Domain.DISK:
        z = grid.astype(complex)
        return np.abs(evaluate(spec, z, coords) - np.conj(evaluate(spec, np.conj(z), coords)))
    x = grid.astype(float)
    if coords is Domain.UPPER_HALF_PLANE:
        lhs = boundary_values(spec, -x, coords, eps)
        rhs = boundary_values(spec, x, coords, eps)
    else:
        lhs = boundary_values(spec, x, coords, eps, upper=True)
        rhs = boundary_values(spec, x, coords, eps)
    return np.abs(lhs - np.conj(rhs))


def symmetry_check(spec: InnerFunction, grid, tol: float = 1e-10, coords=None, eps: float = DEFAULT_EPS) -> CheckReport:
    """Reflection symmetry.

    Half-plane: ``phi(-p) = conj phi(p)`` on real samples; strip:
    ``phi(q + i pi) = conj phi(q)``; disk: ``phi(z) = conj phi(conj z)`` on
    interior samples.  Boundary values are taken ``eps`` inside, where the
    identity is still exact for symmetric specs.
    """
    res = symmetry_residual(spec, grid, coords, eps)
    return residual_report("symmetry", np.max(res), tol)


def default_strip_samples(q_max: float = 3.0, nq: int = 61, n_im: int = 7, eps: float = DEFAULT_EPS) -> np.ndarray:
    q = np.linspace(-q_max, q_max, nq)
    y = np.linspace(eps, math.pi - eps, n_im)
    return (q[None, :] + 1j * y[:, None]).ravel()


def scattering_check(
    spec: InnerFunction,
    tol: float = 1e-10,
    samples=None,
    eps: float = DEFAULT_EPS,
) -> CheckReport:
    """Scattering-function test in strip coordinates.

    Passes iff (a) the spec is symmetric, (b) ``S(-conj z) = conj S(z)`` on a
    closed-strip sample (equivalently ``S(i pi - z) = S(z)`` given (a)), and
    (c) the singular support sits only at the strip's ends, i.e. at +-1 on the
    disk or at 0 and infinity on the half-plane.
    """
    if samples is None:
        samples = default_strip_samples(eps=eps)
    samples = np.asarray(samples, dtype=complex)
    q = np.unique(samples.real)
    sym = float(np.max(symmetry_residual(spec, q, Domain.STRIP, eps)))
    lhs = evaluate(spec, -np.conj(samples), Domain.STRIP)
    rhs = np.conj(evaluate(spec, samples, Domain.STRIP))
    cross = float(np.max(np.abs(lhs - rhs)))
    if spec.domain.uses_disk_formula:
        bad = [s for s, _ in spec.atoms if min(abs(s - 1), abs(s + 1)) > _LOC_TOL]
    else:
        bad = [s for s, _ in spec.atoms if not (math.isinf(s) or s == 0.0)]
    continuous = not bad
    details = {
        "symmetry_residual": sym,
        "crossing_residual": cross,
        "symmetric": sym < tol,
        "crossing": cross < tol,
        "continuous": continuous,
        "discontinuities": [str(s) for s in bad],
    }
    worst = max(sym, cross)
    return CheckReport("scattering", worst, tol, sym < tol and cross < tol and continuous, details)


# -- one-parameter semigroups --------------------------------------------------

@dataclass(frozen=True)
class Generator:
    """Generator ``f(z) = (c + c1) z + sum_k w_k z / (lambda_k^2 - z^2) - c2 / z``
    of the symmetric semigroup ``phi_t = exp(i t f)``."""

    c: float = 0.0
    atoms: tuple = ()
    c1: float = 0.0
    c2: float = 0.0

    def __post_init__(self):
        for name in ("c", "c1", "c2"):
            val = float(getattr(self, name))
            if not val >= 0 or not math.isfinite(val):
                raise InputError(f"generator coefficient {name} must be nonnegative, got {val!r}")
            object.__setattr__(self, name, val)
        atoms = []
        for lam, w in self.atoms:
            lam, w = float(lam), float(w)
            if not lam >= 0 or not math.isfinite(lam):
                raise InputError(f"generator atom location must be nonnegative, got {lam!r}")
            if not w > 0 or not math.isfinite(w):
                raise InputError(f"generator atom weight must be positive, got {w!r}")
            atoms.append((lam, w))
        object.__setattr__(self, "atoms", tuple(atoms))

    @classmethod
    def inverse_momentum(cls, weight: float = 1.0) -> "Generator":
        """``f(p) = -weight / p``."""
        return cls(atoms=((0.0, weight),))

    @property
    def poles(self) -> list[float]:
        out = [lam for lam, _ in self.atoms]
        if self.c2 > 0:
            out.append(0.0)
        return sorted(set(out))

    @property
    def is_trivial(self) -> bool:
        return self.c == 0 and self.c1 == 0 and self.c2 == 0 and not self.atoms

    def __call__(self, z):
        return generator_eval(self, z)

    def to_inner(self, t: float) -> InnerFunction:
        """Half-plane canonical data of ``exp(i t f)``.

        The linear part is an atom at infinity, ``-w/p`` an atom at 0, and a
        term ``w p/(lambda^2 - p^2)`` the symmetric pair ``+-lambda`` with
        weight ``w / (2 (1 + lambda^2))`` each.
        """
        if t < 0:
            raise DomainError("semigroup parameter must be nonnegative")
        atoms: dict = {}

        def add(s, w):
            if w > 0:
                atoms[s] = atoms.get(s, 0.0) + w

        add(math.inf, t * (self.c + self.c1))
        add(0.0, t * self.c2)
        for lam, w in self.atoms:
            if lam == 0:
                add(0.0, t * w)
            else:
                half = t * w / (2 * (1 + lam * lam))
                add(lam, half)
                add(-lam, half)
        return InnerFunction(Domain.UPPER_HALF_PLANE, 1.0, (), tuple(atoms.items()))


def generator_eval(gen: Generator, z):
    """``f(z)`` for ``Im z >= 0``; real poles raise PoleError."""
    zz = np.asarray(z, dtype=complex)
    if np.any(zz.imag < 0):
        raise DomainError("generator is defined on the closed upper half-plane")
    on_axis = zz.imag == 0
    for lam in gen.poles:
        if np.any(on_axis & (np.abs(np.abs(zz.real) - lam) <= _LOC_TOL * max(1.0, lam))):
            raise PoleError(f"generator pole at +-{lam}")
    out = (gen.c + gen.c1) * zz
    for lam, w in gen.atoms:
        out = out + w * zz / (lam * lam - zz * zz)
    if gen.c2:
        out = out - gen.c2 / zz
    return out if np.ndim(z) else complex(out)


def semigroup_eval(gen: Generator, t: float, z):
    """``phi_t(z) = exp(i t f(z))``."""
    if t < 0:
        raise DomainError("semigroup parameter must be nonnegative")
    if t == 0:
        zz = np.asarray(z, dtype=complex)
        out = np.ones(zz.shape, dtype=complex)
        return out if np.ndim(z) else 1.0 + 0j
    f = generator_eval(gen, z)
    return np.exp(1j * t * f)


def compact_disk_sample(r: float, n_radial: int = 12, n_angle: int = 48) -> np.ndarray:
    rho = np.linspace(0.0, r, n_radial)
    theta = np.linspace(-math.pi, math.pi, n_angle, endpoint=False)
    return (rho[:, None] * np.exp(1j * theta[None, :])).ravel()


def identity_convergence_check(gen: Generator, r: float, ts: Sequence[float], tol: float = 0.05) -> CheckReport:
    """sup over the disk ``|z| <= r`` (moved to the half-plane) of
    ``|phi_t - 1|`` for each ``t``; passes iff the sups decrease strictly and
    the last one is below ``tol``."""
    if not 0 <= r < 1:
        raise DomainError("compact radius must satisfy 0 <= r < 1")
    p = cayley(compact_disk_sample(r))
    sups = [float(np.max(np.abs(semigroup_eval(gen, t, p) - 1.0))) for t in ts]
    decreasing = all(b < a for a, b in zip(sups, sups[1:]))
    last = sups[-1] if sups else 0.0
    return CheckReport(
        "identity_convergence",
        last,
        tol,
        decreasing and last < tol,
        {"t": list(map(float, ts)), "sup": sups, "decreasing": decreasing},
    )


# -- matrix-valued case ------------------------------------------------------

@dataclass
class MatrixInnerSample:
    """An ``n x n`` matrix of functions sampled at ``p + i eps`` and
    ``-p + i eps`` for a common positive grid ``p``.  ``eps = 0`` samples the
    closed form on the real line."""

    p: np.ndarray
    values: np.ndarray
    reflected: np.ndarray
    eps: float = 0.0
    n: int = field(init=False)

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        self.reflected = np.asarray(self.reflected, dtype=complex)
        if self.p.ndim != 1 or not np.all(self.p > 0):
            raise InputError("matrix sample grid must be a 1-d array of positive momenta")
        m = self.p.size
        for arr in (self.values, self.reflected):
            if arr.ndim != 3 or arr.shape[0] != m or arr.shape[1] != arr.shape[2]:
                raise InputError(f"entries must have shape ({m}, n, n), got {arr.shape}")
        if self.values.shape != self.reflected.shape:
            raise InputError("reflected samples do not match the forward samples")
        self.n = self.values.shape[1]

    @classmethod
    def from_functions(cls, funcs: Sequence[Sequence], p, eps: float = 0.0) -> "MatrixInnerSample":
        """Entries may be half-plane InnerFunctions, callables of the complex
        momentum, or constants."""
        p = np.asarray(p, dtype=float)
        n = len(funcs)
        if any(len(row) != n for row in funcs):
            raise InputError("matrix of functions must be square")
        fwd = np.empty((p.size, n, n), dtype=complex)
        back = np.empty_like(fwd)
        for h, row in enumerate(funcs):
            for k, fn in enumerate(row):
                fwd[:, h, k] = _sample_entry(fn, p, eps)
                back[:, h, k] = _sample_entry(fn, -p, eps)
        return cls(p, fwd, back, eps)

    @classmethod
    def from_arrays(cls, p, entries: Sequence[Sequence], reflected: Sequence[Sequence], eps: float = 0.0):
        def stack(rows):
            n = len(rows)
            lengths = {len(np.atleast_1d(e)) for row in rows for e in row}
            if any(len(row) != n for row in rows) or len(lengths) != 1:
                raise InputError("ragged matrix entry grids")
            return np.stack([np.stack([np.asarray(e, complex) for e in row], -1) for row in rows], -2)

        return cls(p, stack(entries), stack(reflected), eps)

    def rotated(self, left: np.ndarray, right: np.ndarray) -> "MatrixInnerSample":
        """``L Phi R`` for constant matrices; real orthogonal L, R keep symmetry."""
        left, right = np.asarray(left), np.asarray(right)
        return MatrixInnerSample(self.p, left @ self.values @ right, left @ self.reflected @ right, self.eps)


def _sample_entry(fn, x, eps):
    if isinstance(fn, InnerFunction):
        vals = boundary_values(fn, x, Domain.UPPER_HALF_PLANE, eps)
    elif callable(fn):
        vals = fn(x + 1j * eps)
    else:
        vals = complex(fn)
    return np.broadcast_to(np.asarray(vals, dtype=complex), x.shape)


def matrix_unitarity_check(m: MatrixInnerSample, tol: float = 1e-10) -> CheckReport:
    """Pointwise unitarity of the sampled matrix and entrywise symmetry
    ``phi_hk(-p) = conj phi_hk(p)``."""
    eye = np.eye(m.n)
    gram = m.values @ np.conj(np.swapaxes(m.values, 1, 2))
    unit = float(np.max(np.linalg.norm(gram - eye, ord=2, axis=(1, 2))))
    sym = float(np.max(np.abs(m.reflected - np.conj(m.values))))
    return CheckReport(
        "matrix_unitarity",
        max(unit, sym),
        tol,
        unit < tol and sym < tol,
        {"unitarity_residual": unit, "symmetry_residual": sym, "unitary": unit < tol, "symmetric": sym < tol},
    )
