"""JSON documents for inner functions, generators and scenarios.

Inner function::

    {"domain": "UpperHalfPlane", "phase": [re, im],
     "blaschke": [{"a": [re, im], "mult": 1}],
     "singular": [{"loc": 0.0, "weight": 1.0}]}

``loc`` is a real number or "inf" on the half-plane/strip and ``[re, im]`` (or
an angle ``{"angle": theta}``) on the disk.

A scenario carries one case or a list under ``"cases"``; each case may hold
``phi``, ``generator``, ``grid``, ``intervals``, ``ell``, ``t_values``,
``matrix``, ``expect`` and suite-specific numbers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .current import ChargeDensity, SpatialGrid
from .errors import InputError, SpecParseError
from .inner import Domain, Generator, InnerFunction
from .standardpair import RapidityGrid


def _num(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecParseError(f"{what}: expected a number, got {value!r}")
    return float(value)


def _complex(value, what: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(_num(value[0], what), _num(value[1], what))
    if isinstance(value, dict) and set(value) <= {"re", "im"}:
        return complex(_num(value.get("re", 0.0), what), _num(value.get("im", 0.0), what))
    raise SpecParseError(f"{what}: expected [re, im], got {value!r}")


def _wrap(fn, *args):
    try:
        return fn(*args)
    except SpecParseError:
        raise
    except InputError as exc:
        raise SpecParseError(str(exc)) from exc


def _location(value, domain: Domain, what: str):
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "+inf", "infinity"):
            if domain is Domain.DISK:
                raise SpecParseError(f"{what}: infinity is not a disk boundary point")
            return math.inf
        raise SpecParseError(f"{what}: unrecognised location {value!r}")
    if isinstance(value, dict) and "angle" in value:
        if domain is not Domain.DISK:
            raise SpecParseError(f"{what}: angles are only meaningful on the disk")
        theta = _num(value["angle"], what)
        return complex(math.cos(theta), math.sin(theta))
    loc = _complex(value, what)
    if domain is Domain.DISK:
        return loc
    if loc.imag != 0:
        raise SpecParseError(f"{what}: half-plane atom must be real or 'inf', got {value!r}")
    return loc.real


def parse_inner(doc: dict) -> InnerFunction:
    if not isinstance(doc, dict):
        raise SpecParseError(f"inner function spec must be an object, got {type(doc).__name__}")
    unknown = set(doc) - {"domain", "phase", "blaschke", "singular", "generator", "name", "comment"}
    if unknown:
        raise SpecParseError(f"unknown inner-function field(s): {sorted(unknown)}")
    domain = _wrap(Domain.parse, doc.get("domain", "Disk"))
    phase = _complex(doc.get("phase", [1.0, 0.0]), "phase")
    zeros = []
    for i, z in enumerate(doc.get("blaschke", [])):
        if not isinstance(z, dict) or "a" not in z:
            raise SpecParseError(f"blaschke[{i}]: expected {{'a': [re, im], 'mult': k}}")
        mult = z.get("mult", 1)
        if isinstance(mult, bool) or not isinstance(mult, int) or mult < 1:
            raise SpecParseError(f"blaschke[{i}]: multiplicity must be a positive integer, got {mult!r}")
        zeros.append((_complex(z["a"], f"blaschke[{i}].a"), mult))
    atoms = []
    for i, s in enumerate(doc.get("singular", [])):
        if not isinstance(s, dict):
            raise SpecParseError(f"singular[{i}]: expected an object")
        if s.get("kind", "atom") != "atom" or "density" in s:
            raise SpecParseError(f"singular[{i}]: only atomic singular measures are supported")
        if "loc" not in s or "weight" not in s:
            raise SpecParseError(f"singular[{i}]: needs 'loc' and 'weight'")
        w = _num(s["weight"], f"singular[{i}].weight")
        if not w > 0:
            raise SpecParseError(f"singular[{i}]: weight must be positive, got {w!r}")
        atoms.append((_location(s["loc"], domain, f"singular[{i}].loc"), w))
    return _wrap(InnerFunction, domain, phase, tuple(zeros), tuple(atoms))


def dump_inner(spec: InnerFunction) -> dict:
    def loc(s):
        if spec.domain is Domain.DISK:
            return [s.real, s.imag]
        return "inf" if math.isinf(s) else s

    return {
        "domain": spec.domain.value,
        "phase": [spec.phase.real, spec.phase.imag],
        "blaschke": [{"a": [a.real, a.imag], "mult": m} for a, m in spec.zeros],
        "singular": [{"loc": loc(s), "weight": w} for s, w in spec.atoms],
    }


def parse_generator(doc: dict) -> Generator:
    if not isinstance(doc, dict):
        raise SpecParseError("generator must be an object")
    atoms = []
    for i, a in enumerate(doc.get("atoms", [])):
        if not isinstance(a, dict) or "lambda" not in a or "weight" not in a:
            raise SpecParseError(f"generator.atoms[{i}]: needs 'lambda' and 'weight'")
        lam = _num(a["lambda"], f"generator.atoms[{i}].lambda")
        w = _num(a["weight"], f"generator.atoms[{i}].weight")
        if not w > 0:
            raise SpecParseError(f"generator.atoms[{i}]: weight must be positive, got {w!r}")
        if lam < 0:
            raise SpecParseError(f"generator.atoms[{i}]: lambda must be nonnegative, got {lam!r}")
        atoms.append((lam, w))
    vals = {k: _num(doc.get(k, 0.0), f"generator.{k}") for k in ("c", "c1", "c2")}
    for k, v in vals.items():
        if v < 0:
            raise SpecParseError(f"generator.{k} must be nonnegative, got {v!r}")
    return _wrap(Generator, vals["c"], tuple(atoms), vals["c1"], vals["c2"])


def dump_generator(gen: Generator) -> dict:
    return {
        "c": gen.c,
        "atoms": [{"lambda": lam, "weight": w} for lam, w in gen.atoms],
        "c1": gen.c1,
        "c2": gen.c2,
    }


def _power_of_two(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 2 or value & (value - 1):
        raise SpecParseError(f"{what} must be a power of two, got {value!r}")
    return value


def parse_rapidity_grid(doc: dict | None, n_override: int | None = None) -> RapidityGrid:
    doc = doc or {}
    kw: dict[str, Any] = {}
    if "n" in doc:
        kw["n"] = _power_of_two(doc["n"], "grid.n")
    if n_override is not None:
        kw["n"] = _power_of_two(n_override, "--grid-n")
    for key in ("q_max", "s_max", "min_band_fraction"):
        if key in doc:
            kw[key] = _num(doc[key], f"grid.{key}")
    return _wrap(lambda: RapidityGrid(**kw))


def parse_spatial_grid(doc: dict | None, m_override: int | None = None, default_m: int = 16384) -> SpatialGrid:
    doc = doc or {}
    m = _power_of_two(doc["m"], "grid.m") if "m" in doc else default_m
    if m_override is not None:
        m = _power_of_two(m_override, "--grid-n")
    x_max = _num(doc.get("X", doc.get("x_max", 32.0)), "grid.X")
    return _wrap(SpatialGrid, m, x_max)


def _interval(value, what: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise SpecParseError(f"{what}: expected [a, b]")
    a, b = (_num(v, what) for v in value)
    if not a < b:
        raise SpecParseError(f"{what}: empty interval [{a}, {b}]")
    return a, b


def parse_intervals(doc: dict) -> tuple[tuple, tuple]:
    if not isinstance(doc, dict) or "I1" not in doc or "I2" not in doc:
        raise SpecParseError("intervals: expected {'I1': [a, b], 'I2': [c, d]}")
    I1 = _interval(doc["I1"], "intervals.I1")
    I2 = _interval(doc["I2"], "intervals.I2")
    if not I1[1] < I2[0]:
        raise SpecParseError(f"intervals overlap or are misordered: I1={list(I1)} must lie left of I2={list(I2)}")
    return I1, I2


def parse_density(doc: dict) -> ChargeDensity:
    if not isinstance(doc, dict):
        raise SpecParseError("ell must be an object")
    kind = doc.get("kind", "bump")
    if kind != "bump":
        raise SpecParseError(f"ell.kind: only 'bump' is supported, got {kind!r}")
    support = _interval(doc.get("support", [1.0, 3.0]), "ell.support")
    if "N" in doc:
        n = doc["N"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise SpecParseError(f"ell.N must be a positive integer, got {n!r}")
        charge = math.sqrt(2 * n)
    else:
        charge = _num(doc.get("charge", 2.0), "ell.charge")
    return _wrap(ChargeDensity, support, charge)


@dataclass
class Case:
    name: str
    phi: InnerFunction | None = None
    generator: Generator | None = None
    grid: dict = field(default_factory=dict)
    intervals: tuple | None = None
    ell: ChargeDensity | None = None
    t_values: list = field(default_factory=list)
    matrix: dict | None = None
    expect: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)

    def expectation(self, check: str) -> str:
        return self.expect.get(check, self.expect.get("*", "pass"))


_CASE_KEYS = {"name", "phi", "spec", "generator", "grid", "intervals", "ell", "t_values", "matrix", "expect"}
_INNER_KEYS = {"domain", "phase", "blaschke", "singular"}


def _parse_expect(value, what: str) -> dict:
    if value is None:
        return {}
    if isinstance(value, str):
        value = {"*": value}
    if not isinstance(value, dict):
        raise SpecParseError(f"{what}: expected 'pass', 'fail' or a mapping of check names")
    for k, v in value.items():
        if v not in ("pass", "fail"):
            raise SpecParseError(f"{what}.{k}: expected 'pass' or 'fail', got {v!r}")
    return dict(value)


def parse_case(doc: dict, index: int = 0) -> Case:
    if not isinstance(doc, dict):
        raise SpecParseError(f"case {index}: expected an object")
    if _INNER_KEYS & set(doc):
        # a bare inner-function document
        inner_doc = {k: v for k, v in doc.items() if k in _INNER_KEYS}
        rest = {k: v for k, v in doc.items() if k not in _INNER_KEYS}
        rest["phi"] = inner_doc
        doc = rest
    name = str(doc.get("name", f"case{index}"))
    phi_doc = doc.get("phi", doc.get("spec"))
    phi = parse_inner(phi_doc) if phi_doc is not None else None
    gen = parse_generator(doc["generator"]) if "generator" in doc else None
    grid = doc.get("grid", {})
    if not isinstance(grid, dict):
        raise SpecParseError("grid must be an object")
    for key in ("n", "m"):
        if key in grid:
            _power_of_two(grid[key], f"grid.{key}")
    intervals = parse_intervals(doc["intervals"]) if "intervals" in doc else None
    ell = parse_density(doc["ell"]) if "ell" in doc else None
    t_values = [_num(t, "t_values") for t in doc.get("t_values", [])]
    matrix = doc.get("matrix")
    if matrix is not None and not isinstance(matrix, dict):
        raise SpecParseError("matrix must be an object")
    options = {k: v for k, v in doc.items() if k not in _CASE_KEYS}
    return Case(
        name, phi, gen, grid, intervals, ell, t_values, matrix,
        _parse_expect(doc.get("expect"), f"{name}.expect"), options,
    )


def parse_document(doc: Any) -> list[Case]:
    if isinstance(doc, list):
        cases = doc
    elif isinstance(doc, dict) and "cases" in doc:
        shared = {k: v for k, v in doc.items() if k != "cases"}
        if not isinstance(doc["cases"], list):
            raise SpecParseError("'cases' must be a list")
        cases = [{**shared, **c} if isinstance(c, dict) else c for c in doc["cases"]]
    else:
        cases = [doc]
    if not cases:
        raise SpecParseError("document has no cases")
    return [parse_case(c, i) for i, c in enumerate(cases)]


def load_json(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{path}: invalid JSON ({exc})") from exc


def parse_spec(path) -> list[Case]:
    """Load and validate a spec or scenario file."""
    return parse_document(load_json(path))
