import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modstrip import standardpair as sp
from modstrip.errors import (
    AdmissibilityError,
    DegenerateProjectionError,
    InputError,
    NotInnerError,
    ParameterError,
    PrecisionError,
)
from modstrip.inner import Domain, Generator, InnerFunction, product
from modstrip.standardpair import RapidityGrid, SubspaceHandle, WaveFunction

GRID = RapidityGrid()
Q = GRID.q
SYM = InnerFunction.blaschke([1j], Domain.STRIP)
NONSYM = InnerFunction.blaschke([1 + 1j], Domain.STRIP)


@pytest.fixture(scope="module")
def members():
    return sp.projected_samples(GRID, 8, seed=11)


def test_grid_layout():
    assert GRID.dq == 1 / 128
    assert Q[0] == -16.0 and Q[-1] == 16.0 - GRID.dq
    assert GRID.ds == pytest.approx(2 * math.pi / 32)
    with pytest.raises(ParameterError):
        RapidityGrid(n=1000)


def test_dual_round_trip():
    f = np.exp(-(Q**2)) * np.exp(0.3j * Q)
    assert np.max(np.abs(GRID.undual(GRID.dual(f)) - f)) < 1e-14


def test_dual_of_gaussian():
    # (1/2pi) int e^{-q^2} e^{-isq} dq = e^{-s^2/4} / (2 sqrt(pi))
    g = GRID.dual(np.exp(-(Q**2)))
    want = np.exp(-(GRID.s**2) / 4) / (2 * math.sqrt(math.pi))
    assert np.max(np.abs(g - want)) < 1e-14


def test_operators_basic():
    f = sp.localized_random(GRID, 1, seed=0)[0]
    jj = sp.apply_operator("conjugation", None, sp.apply_operator("conjugation", None, f))
    assert np.array_equal(jj.values, f.values)
    tf = sp.apply_operator("translation", 2.5, f)
    assert np.allclose(np.abs(tf.values), np.abs(f.values), rtol=1e-15, atol=0)
    k = 5
    d = sp.apply_operator("dilation", k * GRID.dq / (2 * math.pi), f)
    assert np.array_equal(d.values, np.roll(f.values, -k))
    assert tf.norm == pytest.approx(f.norm, rel=1e-12)


def test_dilation_errors():
    f = sp.localized_random(GRID, 1, seed=0)[0]
    with pytest.raises(ParameterError):
        sp.apply_operator("dilation", 0.3 * GRID.dq, f)
    flat = WaveFunction(GRID, np.ones(GRID.n))
    with pytest.raises(PrecisionError):
        sp.apply_operator("dilation", GRID.dq / (2 * math.pi), flat)
    with pytest.raises(ParameterError):
        sp.apply_operator("boost", 1.0, f)


def test_membership_examples():
    f = WaveFunction(GRID, np.exp(-(Q**2) + 1j * math.pi * Q))
    rep = sp.membership_residual(f)
    assert rep.passed and rep.residual < 1e-6
    gauss = sp.membership_residual(WaveFunction(GRID, np.exp(-(Q**2))))
    assert not gauss.passed and gauss.residual > 0.1
    assert sp.membership_residual(1j * f).residual > 0.9


def test_membership_errors():
    with pytest.raises(InputError):
        sp.membership_residual(WaveFunction(GRID, np.zeros(GRID.n)))
    fast = WaveFunction(GRID, np.exp(-(Q**2) / 50 + 20j * Q))
    with pytest.raises(AdmissibilityError):
        sp.membership_residual(fast)


def test_projection(members):
    for h in members:
        assert sp.membership_residual(h).residual < 1e-8
        again = sp.project_to_H(h)
        assert np.linalg.norm(again.values - h.values) / np.linalg.norm(h.values) < 1e-10
    with pytest.raises(DegenerateProjectionError):
        sp.project_to_H(1j * members[0])


def test_projection_of_exact_member_is_identity():
    h = sp.analytic_samples(GRID, 1, seed=2, centers=(-0.5, 0.5), widths=(1.8, 2.0))[0]
    out = sp.project_to_H(h)
    assert np.linalg.norm(out.values - h.values) / np.linalg.norm(h.values) < 1e-10


def test_involution_squares_to_identity():
    g = GRID.dual(sp.strip_gaussian(GRID, 0.3, 1.9) * (0.4 + 0.8j))
    g = np.where(GRID.band, g, 0)
    twice = sp.involution(sp.involution(g, GRID), GRID)
    assert np.max(np.abs(twice - g)) <= 1e-10 * np.max(np.abs(g))


def test_real_linearity_and_i_detection(members):
    a, b = members[0], members[1]
    combo = 0.7 * a + (-1.3) * b
    assert sp.membership_residual(combo).residual < 1e-8
    for h in members:
        assert not sp.membership_residual(1j * h).passed


def test_vh_membership(members):
    handle = SubspaceHandle.VH(SYM)
    mult = sp.boundary_multiplier(SYM, GRID)
    image = WaveFunction(GRID, mult * members[0].values)
    assert sp.membership_residual(image, handle).residual < 1e-8
    projected = sp.project_to_H(WaveFunction(GRID, mult * sp.strip_gaussian(GRID, 0.0, 1.9) * (1 + 1j)), handle)
    assert sp.membership_residual(projected, handle).residual < 1e-8


def test_borchers_examples():
    f = sp.localized_random(GRID, 1, seed=4)[0]
    r1, r2 = sp.verify_borchers(f, 1.0, GRID.dq / (2 * math.pi) * 4)
    assert r1 < 1e-12 and r2 < 1e-12
    assert sp.verify_borchers(f, 0.0, GRID.dq / (2 * math.pi) * 4) == (0.0, 0.0)
    r1, r2 = sp.verify_borchers(f, -3.0, GRID.dq / (2 * math.pi) * 7)
    assert r1 < 1e-12 and r2 < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.floats(-5, 5), st.integers(-128, 128), st.integers(0, 2**16))
def test_borchers_property(t, k, seed):
    f = sp.localized_random(GRID, 1, seed=seed)[0]
    r1, r2 = sp.verify_borchers(f, t, k * GRID.dq / (2 * math.pi))
    assert r1 < 1e-12 and r2 < 1e-12


def test_endomorphism_examples():
    assert sp.verify_endomorphism(SYM, 8).passed
    assert sp.verify_endomorphism(InnerFunction.constant(Domain.STRIP, -1.0), 8).passed
    rep = sp.verify_endomorphism(NONSYM, 8)
    assert not rep.passed and rep.max_residual > 0.05
    assert not rep.details["symmetric"]
    assert rep.details["translation_commutator"] < 1e-15


def test_endomorphism_product_monotone():
    other = InnerFunction.blaschke([0.5 + 2j, -0.5 + 2j], Domain.STRIP)
    assert sp.verify_endomorphism(other, 8).passed
    assert sp.verify_endomorphism(product(SYM, other), 8).passed


def test_not_inner_rejected():
    gen_like = np.full(GRID.n, 1.5)
    with pytest.raises(NotInnerError):
        sp._check_unimodular(gen_like)


def test_gamma_examples():
    f = sp.localized_random(GRID, 1, seed=8)[0]
    assert sp.gamma_check(SYM, f).max_residual < 1e-12
    one = sp.gamma_check(InnerFunction.constant(Domain.STRIP), f)
    assert one.max_residual == 0.0
    two = product(SYM, InnerFunction.blaschke([2j], Domain.STRIP))
    assert sp.gamma_check(two, f).max_residual < 1e-12


def test_flow_examples():
    gen = Generator.inverse_momentum()
    assert sp.flow_invariance(gen, 1.0, 8).passed
    zero = sp.flow_invariance(gen, 0.0, 8)
    assert zero.passed and zero.max_residual < 1e-12
    back = sp.flow_invariance(gen, -1.0, 16)
    assert back.max_residual > 1e-6
    assert not back.details["expected_invariant"]


def test_csv_dump(tmp_path, members):
    paths = sp.dump_samples(tmp_path, members[:2])
    lines = paths[0].read_text().splitlines()
    assert lines[0] == "q,re,im"
    assert len(lines) == GRID.n + 1
