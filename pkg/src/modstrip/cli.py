"""Command-line front end.

    modstrip --suite pair-verify --spec psi.json [--out report.json]

Exit codes: 0 every check met its expectation, 1 at least one did not,
2 bad input (unreadable or invalid spec, unknown suite, inadmissible vector).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import current, inner, standardpair
from .errors import InputError, ModstripError
from .inner import Domain, MatrixInnerSample
from .reports import CheckReport, _clean
from .specio import Case, _complex, parse_inner, parse_rapidity_grid, parse_spatial_grid, parse_spec

DEFAULT_SEED = 0xB0F7
SUITES = (
    "inner-verify",
    "semigroup",
    "pair-verify",
    "borchers",
    "blax",
    "current-locality",
    "bmt-transport",
    "cocycle",
)

ANCHORS = {
    "modulus": "unimodular boundary values of inner functions",
    "symmetry": "reflection symmetry of inner functions",
    "scattering": "scattering functions on the strip",
    "matrix_unitarity": "finite-multiplicity pairs: unitary symmetric inner matrices",
    "semigroup_law": "one-parameter semigroups of symmetric inner functions",
    "zero_free": "semigroup members are singular inner functions",
    "modulus_bound": "semigroup members are bounded by one",
    "identity_convergence": "continuity of the semigroup at t = 0",
    "canonical_form": "generator versus canonical singular data",
    "endomorphism": "symmetric inner functions of log P preserve H",
    "projection": "real-linear idempotent onto H",
    "flow_invariance": "exp(i t f(P)) preserves H for t >= 0",
    "borchers_dilation": "dilation-translation commutation relation",
    "borchers_conjugation": "conjugation reverses translations",
    "gamma": "canonical unitary of an inclusion equals V squared",
    "gamma_translation": "canonical unitary commutes with translations",
    "locality": "locality of the boundary net at one-particle level",
    "reality": "transported charge density stays real",
    "charge": "charge is preserved by normalized transport",
    "leakage": "transported density stays supported on the half-line",
    "holder": "finiteness of the transport integral",
    "cocycle": "Weyl-exponent cocycle identity for the transported charge",
}


class Context:
    def __init__(self, args):
        self.grid_n = args.grid_n
        self.tol = args.tol
        self.seed = args.seed
        self.csv_dump = Path(args.csv_dump) if args.csv_dump else None

    def tol_or(self, default: float) -> float:
        return self.tol if self.tol is not None else default


# -- suite bodies ---------------------------------------------------------------

def _need(value, what, case: Case):
    if value is None:
        raise InputError(f"case {case.name!r}: this suite needs '{what}'")
    return value


def _boundary_grid(phi: inner.InnerFunction, exclusion: float):
    dom = phi.domain
    if dom is Domain.DISK:
        x = np.linspace(-math.pi, math.pi, 720, endpoint=False)
    elif dom is Domain.UPPER_HALF_PLANE:
        x = np.linspace(-10, 10, 801)
    else:
        x = np.linspace(-6, 6, 481)
    return x[inner.distance_to_atoms(phi, x) >= exclusion]


def _symmetry_grid(phi: inner.InnerFunction):
    dom = phi.domain
    if dom is Domain.DISK:
        return inner.compact_disk_sample(0.9)
    if dom is Domain.UPPER_HALF_PLANE:
        x = np.linspace(0.05, 10, 200)
    else:
        x = np.linspace(-6, 6, 241)
    return x[inner.distance_to_atoms(phi, x) >= 0.05]


def _matrix_sample(doc: dict) -> MatrixInnerSample:
    p = np.geomspace(*doc.get("p_range", [1e-2, 1e2]), int(doc.get("n_p", 101)))
    eps = float(doc.get("eps", 0.0))
    entries = doc.get("entries")
    if not isinstance(entries, list) or not entries:
        raise InputError("matrix.entries must be a non-empty list of rows")
    rows = []
    for row in entries:
        if not isinstance(row, list):
            raise InputError("matrix rows must be lists")
        out = []
        for e in row:
            if isinstance(e, dict):
                out.append(parse_inner(e))
            else:
                out.append(_complex(e, "matrix entry"))
        rows.append(out)
    return MatrixInnerSample.from_functions(rows, p, eps)


def suite_inner_verify(case: Case, ctx: Context):
    phi = _need(case.phi, "phi", case)
    opts = case.options
    checks = opts.get("checks", ["modulus", "symmetry"] + (["scattering"] if opts.get("scattering") else []))
    out = []
    if "modulus" in checks:
        x = _boundary_grid(phi, float(opts.get("exclusion", 0.1)))
        eps = float(opts.get("eps", inner.DEFAULT_EPS))
        defect = inner.modulus_defect(phi, x, eps)
        tol = ctx.tol_or(1e-4)
        out.append(CheckReport("modulus", defect, tol, defect < tol, {"eps": eps, "n_samples": int(x.size)}))
    if "symmetry" in checks:
        out.append(inner.symmetry_check(phi, _symmetry_grid(phi), ctx.tol_or(1e-10)))
    if "scattering" in checks:
        out.append(inner.scattering_check(phi, ctx.tol_or(1e-10)))
    if case.matrix is not None:
        out.append(inner.matrix_unitarity_check(_matrix_sample(case.matrix), ctx.tol_or(1e-10)))
    return out, {}


def _interior_grid():
    x = np.linspace(-5, 5, 40)
    y = np.geomspace(0.05, 5, 25)
    return (x[None, :] + 1j * y[:, None]).ravel()


def suite_semigroup(case: Case, ctx: Context):
    gen = _need(case.generator, "generator", case)
    z = _interior_grid()
    pairs = case.options.get("pairs", [[0.3, 0.5], [1.0, 2.0], [0.1, 0.7]])
    law, bound, canon, low = 0.0, 0.0, 0.0, math.inf
    for t, s in pairs:
        a = inner.semigroup_eval(gen, t, z)
        b = inner.semigroup_eval(gen, s, z)
        ab = inner.semigroup_eval(gen, t + s, z)
        law = max(law, float(np.max(np.abs(ab - a * b))))
        bound = max(bound, float(np.max(np.abs(ab))) - 1.0)
        canon = max(canon, float(np.max(np.abs(inner.evaluate(gen.to_inner(t + s), z, Domain.UPPER_HALF_PLANE) - ab))))
    compact = inner.cayley(inner.compact_disk_sample(float(case.options.get("r", 0.5))))
    for t in case.t_values or [0.1, 1.0, 10.0]:
        low = min(low, float(np.min(np.abs(inner.semigroup_eval(gen, t, compact)))))
    ts = case.options.get("identity_t", [1.0, 0.1, 0.01])
    out = [
        CheckReport("semigroup_law", law, ctx.tol_or(1e-12), law < ctx.tol_or(1e-12), {"pairs": pairs}),
        CheckReport("modulus_bound", max(bound, 0.0), 1e-12, bound < 1e-12),
        CheckReport("zero_free", low, 0.0, low > 0, {"min_modulus": low}),
        inner.identity_convergence_check(gen, float(case.options.get("r", 0.5)), ts),
        CheckReport("canonical_form", canon, 1e-10, canon < 1e-10),
    ]
    return out, {}


def suite_pair_verify(case: Case, ctx: Context):
    grid = parse_rapidity_grid(case.grid, ctx.grid_n)
    n_samples = int(case.options.get("n_samples", 32))
    out = []
    samples = standardpair.projected_samples(grid, n_samples, ctx.seed)
    proj = max(standardpair.membership_residual(f).residual for f in samples)
    out.append(CheckReport("projection", proj, 1e-8, proj < 1e-8))
    if case.phi is not None:
        out.append(standardpair.verify_endomorphism(case.phi, n_samples, ctx.tol_or(1e-6), grid, ctx.seed))
        if ctx.csv_dump is not None:
            mult = standardpair.boundary_multiplier(case.phi, grid)
            images = [standardpair.WaveFunction(grid, mult * f.values) for f in samples]
            standardpair.dump_samples(ctx.csv_dump / case.name, images, "image")
    if case.generator is not None:
        for t in case.t_values or [1.0]:
            rep = standardpair.flow_invariance(case.generator, t, n_samples, ctx.tol_or(1e-6), grid, ctx.seed)
            rep.check = f"flow_invariance[t={t:g}]"
            out.append(rep)
    if case.phi is None and case.generator is None:
        raise InputError(f"case {case.name!r}: pair-verify needs 'phi' or 'generator'")
    return out, grid.summary()


def _commensurate_pairs(grid, rng, count):
    return [(float(rng.uniform(-5, 5)), int(rng.integers(-128, 129)) * grid.dq / (2 * math.pi)) for _ in range(count)]


def suite_borchers(case: Case, ctx: Context):
    grid = parse_rapidity_grid(case.grid, ctx.grid_n)
    rng = np.random.default_rng(ctx.seed)
    n_vec = int(case.options.get("n_vectors", 16))
    vecs = standardpair.localized_random(grid, n_vec, rng)
    pairs = _commensurate_pairs(grid, rng, int(case.options.get("n_pairs", 8)))
    r1 = r2 = 0.0
    for f in vecs:
        for t, s in pairs:
            a, b = standardpair.verify_borchers(f, t, s)
            r1, r2 = max(r1, a), max(r2, b)
    tol = ctx.tol_or(1e-12)
    details = {"n_vectors": n_vec, "pairs": [[t, s] for t, s in pairs]}
    return [
        CheckReport("borchers_dilation", r1, tol, r1 < tol, details),
        CheckReport("borchers_conjugation", r2, tol, r2 < tol),
    ], grid.summary()


def suite_blax(case: Case, ctx: Context):
    out = []
    summary = {}
    if case.phi is not None:
        grid = parse_rapidity_grid(case.grid, ctx.grid_n)
        summary = grid.summary()
        tol = ctx.tol_or(1e-12)
        vecs = standardpair.localized_random(grid, int(case.options.get("n_vectors", 8)), ctx.seed)
        worst = max(standardpair.gamma_check(case.phi, f, tol).max_residual for f in vecs)
        out.append(CheckReport("gamma", worst, tol, worst < tol))
        mult = standardpair.boundary_multiplier(case.phi, grid) ** 2
        f = vecs[0]
        lhs = standardpair.apply_operator("translation", 1.0, standardpair.WaveFunction(grid, mult * f.values))
        rhs = mult * standardpair.apply_operator("translation", 1.0, f).values
        comm = float(np.linalg.norm(lhs.values - rhs) / np.linalg.norm(f.values))
        out.append(CheckReport("gamma_translation", comm, tol, comm < tol))
    if case.matrix is not None:
        out.append(inner.matrix_unitarity_check(_matrix_sample(case.matrix), ctx.tol_or(1e-10)))
    if not out:
        raise InputError(f"case {case.name!r}: blax needs 'phi' or 'matrix'")
    return out, summary


def suite_current_locality(case: Case, ctx: Context):
    phi = _need(case.phi, "phi", case)
    grid = parse_spatial_grid(case.grid, ctx.grid_n, default_m=8192)
    I1, I2 = case.intervals or ((-2.0, -1.0), (1.0, 2.0))
    csv_path = ctx.csv_dump / f"{case.name}_locality.csv" if ctx.csv_dump else None
    rep = current.locality_check(
        phi, I1, I2, int(case.options.get("n_pairs", 64)), ctx.tol_or(1e-6), grid, ctx.seed, csv_path
    )
    return [rep], grid.summary()


def suite_bmt_transport(case: Case, ctx: Context):
    phi = _need(case.phi, "phi", case)
    grid = parse_spatial_grid(case.grid, ctx.grid_n, default_m=8192)
    rho = case.ell or current.ChargeDensity()
    res = current.transport_density(
        phi, rho, grid, require_normalized=bool(case.options.get("normalize", True))
    )
    study = res.holder
    last = study.growth[-1] if study.growth else 0.0
    holder = CheckReport(
        "holder", last, current.DIVERGENCE_GROWTH, not study.divergent,
        {"weighted": study.to_dict(), "unweighted": res.holder_unweighted.to_dict()},
    )
    return res.checks + [holder], grid.summary()


def suite_cocycle(case: Case, ctx: Context):
    phi = _need(case.phi, "phi", case)
    grid = parse_spatial_grid(case.grid, ctx.grid_n)
    rho = case.ell or current.ChargeDensity()
    out = []
    for t in case.t_values or [0.3, 0.7, 1.5]:
        rep = current.cocycle_check(phi, rho, t, grid, ctx.tol_or(1e-8))
        rep.check = f"cocycle[t={t:g}]"
        out.append(rep)
    return out, grid.summary()


DISPATCH = {
    "inner-verify": suite_inner_verify,
    "semigroup": suite_semigroup,
    "pair-verify": suite_pair_verify,
    "borchers": suite_borchers,
    "blax": suite_blax,
    "current-locality": suite_current_locality,
    "bmt-transport": suite_bmt_transport,
    "cocycle": suite_cocycle,
}


def _anchor(check: str) -> str:
    return ANCHORS.get(check.split("[")[0], "")


def run_suite(suite: str, cases: list[Case], ctx: Context) -> tuple[dict, int]:
    if suite not in DISPATCH:
        raise InputError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    t0 = time.perf_counter()
    records, grids = [], {}
    for case in cases:
        reports, summary = DISPATCH[suite](case, ctx)
        if summary:
            grids[case.name] = summary
        for rep in reports:
            base = rep.check.split("[")[0]
            expect = case.expect.get(rep.check) or case.expectation(base)
            rec = {
                "name": f"{case.name}/{rep.check}",
                "residual": float(rep.max_residual),
                "tol": float(rep.tol),
                "verdict": rep.verdict,
                "expect": expect,
                "ok": rep.verdict == expect,
                "anchor": _anchor(rep.check),
            }
            if rep.details:
                rec["details"] = rep.details
            records.append(rec)
    ok = all(r["ok"] for r in records)
    report = {
        "suite": suite,
        "seed": hex(ctx.seed),
        "grid": grids,
        "checks": records,
        "verdict": "pass" if ok else "fail",
        "wall_time": time.perf_counter() - t0,
    }
    return _clean(report), 0 if ok else 1


def _seed(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        try:
            return int(text, 16)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None


def _positive_float(text: str) -> float:
    val = float(text)
    if not val > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return val


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(json.dumps({"error": "usage", "message": message}), file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="modstrip", description="Run a verification suite on a spec or scenario file.")
    ap.add_argument("--suite", required=True, help="one of: " + ", ".join(SUITES))
    ap.add_argument("--spec", required=True, help="JSON spec or scenario file")
    ap.add_argument("--out", help="write the JSON report here instead of stdout")
    ap.add_argument("--grid-n", type=int, help="override the grid size (rapidity n or spatial m)")
    ap.add_argument("--tol", type=_positive_float, help="override the main tolerance of each check")
    ap.add_argument("--seed", type=_seed, default=DEFAULT_SEED, help="RNG seed, hex accepted (default 0xB0F7)")
    ap.add_argument("--csv-dump", help="directory for optional CSV dumps")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.suite not in DISPATCH:
            raise InputError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
        cases = parse_spec(args.spec)
        report, code = run_suite(args.suite, cases, Context(args))
    except ModstripError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
