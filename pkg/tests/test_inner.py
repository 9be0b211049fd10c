import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modstrip import inner
from modstrip.errors import DomainError, InputError, PoleError, SingularityError
from modstrip.inner import (
    Domain,
    Generator,
    InnerFunction,
    MatrixInnerSample,
    evaluate,
    product,
    reflection,
)

D, U, S = Domain.DISK, Domain.UPPER_HALF_PLANE, Domain.STRIP


# -- evaluation ----------------------------------------------------------------

def test_blaschke_at_origin_is_identity():
    assert evaluate(InnerFunction.blaschke([0]), 0.5) == pytest.approx(0.5)


def test_blaschke_zero_half():
    # (|a|/a)(z-a)/(1-conj(a)z) at z=0, a=0.5 is -0.5
    assert evaluate(InnerFunction.blaschke([0.5]), 0) == pytest.approx(-0.5)


def test_single_atom_at_origin_gives_total_mass():
    c = 0.7
    assert evaluate(InnerFunction.singular([(1, c)]), 0) == pytest.approx(math.exp(-c))


def test_product_examples():
    b0 = InnerFunction.blaschke([0])
    sq = product(b0, b0)
    assert sq.zeros == ((0j, 2),)
    assert evaluate(sq, 0.5) == pytest.approx(0.25)

    merged = product(InnerFunction.singular([(1, 0.3)]), InnerFunction.singular([(1, 0.4)]))
    assert len(merged.atoms) == 1
    assert merged.atoms[0][1] == pytest.approx(0.7)

    mixed = product(InnerFunction.blaschke([0.5]), InnerFunction.singular([(-1, 1.0)]))
    assert evaluate(mixed, 0) == pytest.approx(-0.5 * math.exp(-1.0))


def test_product_domain_mismatch():
    with pytest.raises(DomainError):
        product(InnerFunction.blaschke([0.5]), InnerFunction.blaschke([1j], U))


def test_boundary_point_rejected():
    with pytest.raises(DomainError):
        evaluate(InnerFunction.blaschke([0.5]), 1.0)
    with pytest.raises(DomainError):
        evaluate(InnerFunction.blaschke([1j], U), 2.0)
    with pytest.raises(DomainError):
        evaluate(InnerFunction.blaschke([1j], S), 1 + 4j)


def test_evaluation_at_atom_rejected():
    spec = InnerFunction.singular([(1.0, 1.0)], U)
    with pytest.raises(SingularityError):
        inner.boundary_values(spec, np.array([1.0]), eps=0.0)


def test_invalid_specs():
    with pytest.raises(InputError, match="outside open disk"):
        InnerFunction.blaschke([1.2])
    with pytest.raises(InputError):
        InnerFunction.blaschke([1 - 1j], U)
    with pytest.raises(InputError):
        InnerFunction.singular([(1, -1.0)])
    with pytest.raises(InputError):
        InnerFunction(D, 1.1)
    with pytest.raises(InputError):
        InnerFunction.singular([(0.0, 1.0), (0.0, 2.0)], U)


def test_zero_only_at_blaschke_zero():
    spec = InnerFunction.blaschke([0.3 + 0.2j], D)
    assert abs(evaluate(spec, 0.3 + 0.2j)) == 0
    assert abs(evaluate(spec, 0.3 + 0.25j)) > 0


def test_strip_matches_disk_through_chain():
    spec = InnerFunction(D, cmath.exp(0.4j), ((0.2 + 0.3j, 1), (-0.5j, 2)), ((1j, 0.5), (-1, 0.2)))
    rng = np.random.default_rng(3)
    w = rng.uniform(-3, 3, 50) + 1j * rng.uniform(0.05, math.pi - 0.05, 50)
    direct = evaluate(spec, w, S)
    chained = evaluate(spec, inner.cayley_inverse(np.exp(w)), D)
    assert np.max(np.abs(direct - chained)) < 1e-12


def test_half_plane_blaschke_corrected_form():
    # zero at a = 1+i is the factor (p - a)/(p - conj a), which is unimodular on R
    spec = InnerFunction.blaschke([1 + 1j], U)
    p = 2.0 + 1e-9j
    assert evaluate(spec, p) == pytest.approx((p - (1 + 1j)) / (p - (1 - 1j)))
    assert abs(abs(inner.boundary_values(spec, 3.0, eps=0.0)) - 1) < 1e-15


def test_two_atom_form_matches_exponential():
    z = 0.3 + 0.2j
    p = inner.cayley(z)
    want = np.exp(1j * (1.0 * p - 0.5 / p))
    assert evaluate(InnerFunction.two_atom(1.0, 0.5), z) == pytest.approx(want)


# -- symmetry and scattering -------------------------------------------------------

def test_symmetry_examples():
    grid = np.linspace(0.1, 5, 50)
    assert inner.symmetry_check(InnerFunction.blaschke([1j], U), grid).passed
    assert not inner.symmetry_check(InnerFunction.blaschke([1 + 1j], U), grid).passed


def test_symmetry_fails_at_one_for_nonsymmetric_zero():
    spec = InnerFunction.blaschke([1 + 1j], U)
    a = inner.boundary_values(spec, -1.0, eps=0.0)
    b = np.conj(inner.boundary_values(spec, 1.0, eps=0.0))
    assert abs(a - b) > 0.1


def test_symmetry_empty_grid():
    with pytest.raises(InputError):
        inner.symmetry_check(InnerFunction.blaschke([1j], U), [])


def test_symmetry_strip_and_disk():
    strip = InnerFunction.blaschke([1j, 2j], S)
    assert inner.symmetry_check(strip, np.linspace(-4, 4, 81)).passed
    disk = InnerFunction.blaschke([0.3 + 0.4j, 0.3 - 0.4j], D)
    assert inner.symmetry_check(disk, inner.compact_disk_sample(0.9)).passed
    assert not inner.symmetry_check(InnerFunction.blaschke([0.3 + 0.4j], D), inner.compact_disk_sample(0.9)).passed


def test_scattering_examples():
    assert inner.scattering_check(InnerFunction.two_atom(1.0, 1.0)).passed
    rep = inner.scattering_check(InnerFunction.two_atom(1.0, 0.0))
    assert not rep.passed
    assert rep.details["continuous"]
    assert not rep.details["crossing"]
    assert inner.scattering_check(InnerFunction.constant(D)).passed


def test_scattering_crossing_at_sample_point():
    spec = InnerFunction.two_atom(1.0, 0.0)
    z = 1 + 1j * math.pi / 2
    lhs = evaluate(spec, -np.conj(z), S)
    rhs = np.conj(evaluate(spec, z, S))
    assert abs(lhs - rhs) > 0.1


def test_scattering_flags_atom_off_the_ends():
    spec = InnerFunction.singular([(1j, 1.0)], D)
    rep = inner.scattering_check(spec)
    assert not rep.details["continuous"]


# -- generators and semigroups --------------------------------------------------------

def test_generator_examples():
    assert inner.generator_eval(Generator(c=1), 2) == pytest.approx(2)
    assert inner.generator_eval(Generator.inverse_momentum(), 2) == pytest.approx(-0.5)
    f = inner.generator_eval(Generator(atoms=((1.0, 1.0),)), 2j)
    assert f == pytest.approx(0.4j)
    assert f.imag > 0


def test_generator_pole():
    with pytest.raises(PoleError):
        inner.generator_eval(Generator(atoms=((1.0, 1.0),)), -1.0)
    with pytest.raises(PoleError):
        inner.generator_eval(Generator(c2=1.0), 0.0)


def test_generator_validation():
    with pytest.raises(InputError):
        Generator(c=-1)
    with pytest.raises(InputError):
        Generator(atoms=((1.0, -1.0),))


def test_semigroup_examples():
    assert inner.semigroup_eval(Generator.inverse_momentum(), math.pi, 1.0) == pytest.approx(-1)
    assert inner.semigroup_eval(Generator(c=3), 0.0, 1 + 1j) == 1
    assert inner.semigroup_eval(Generator(c=1), 1.0, 1j) == pytest.approx(math.exp(-1))
    with pytest.raises(DomainError):
        inner.semigroup_eval(Generator(c=1), -1.0, 1j)


def test_identity_convergence():
    rep = inner.identity_convergence_check(Generator(c=1), 0.5, [1.0, 0.1, 0.01])
    assert rep.passed
    assert rep.details["sup"][0] > rep.details["sup"][1] > rep.details["sup"][2]
    zero = inner.identity_convergence_check(Generator(c=1), 0.5, [0.0])
    assert zero.details["sup"] == [0.0]
    assert inner.identity_convergence_check(Generator.inverse_momentum(), 0.5, [1.0, 0.1, 0.01]).passed


def test_generator_canonical_data():
    gen = Generator(c=0.5, atoms=((0.0, 1.0), (2.0, 0.7)), c1=0.3, c2=0.2)
    z = np.array([0.3 + 1j, -2 + 0.5j, 5 + 3j])
    spec = gen.to_inner(0.8)
    assert np.max(np.abs(evaluate(spec, z, U) - inner.semigroup_eval(gen, 0.8, z))) < 1e-13
    assert inner.symmetry_check(spec, np.linspace(0.1, 5, 40)).passed


# -- matrices -------------------------------------------------------------------------

def test_matrix_examples():
    p = np.geomspace(0.01, 100, 51)
    diag = MatrixInnerSample.from_functions(
        [[InnerFunction.blaschke([1j], U), 0], [0, InnerFunction.blaschke([2j], U)]], p
    )
    assert inner.matrix_unitarity_check(diag).passed

    swap = inner.matrix_unitarity_check(MatrixInnerSample.from_functions([[0, 1j], [1j, 0]], p))
    assert swap.details["unitary"]
    assert not swap.details["symmetric"]
    assert not swap.passed

    assert inner.matrix_unitarity_check(MatrixInnerSample.from_functions([[0, 1], [-1, 0]], p)).passed


def test_matrix_ragged():
    with pytest.raises(InputError):
        MatrixInnerSample.from_arrays([1.0, 2.0], [[np.ones(2), np.ones(3)], [np.ones(2), np.ones(2)]],
                                      [[np.ones(2), np.ones(2)], [np.ones(2), np.ones(2)]])


# -- properties -----------------------------------------------------------------------

disk_zero = st.builds(
    lambda r, th: r * cmath.exp(1j * th),
    st.floats(0.0, 0.9), st.floats(-math.pi, math.pi),
)
uhp_zero = st.builds(complex, st.floats(-3, 3), st.floats(0.2, 3))
unit_angle = st.floats(-math.pi, math.pi)


@st.composite
def disk_specs(draw):
    zeros = draw(st.lists(disk_zero, max_size=3))
    angles = draw(st.lists(unit_angle, max_size=2, unique=True))
    weights = draw(st.lists(st.floats(0.05, 2.0), min_size=len(angles), max_size=len(angles)))
    atoms = tuple((cmath.exp(1j * a), w) for a, w in zip(angles, weights))
    phase = cmath.exp(1j * draw(unit_angle))
    return InnerFunction(D, phase, tuple((z, 1) for z in zeros), atoms)


@st.composite
def uhp_specs(draw):
    zeros = draw(st.lists(uhp_zero, max_size=3))
    locs = draw(st.lists(st.floats(-3, 3), max_size=2, unique=True))
    weights = draw(st.lists(st.floats(0.05, 2.0), min_size=len(locs), max_size=len(locs)))
    atoms = list(zip(locs, weights))
    if draw(st.booleans()):
        atoms.append((math.inf, draw(st.floats(0.05, 2.0))))
    return InnerFunction(U, 1.0, tuple((z, 1) for z in zeros), tuple(atoms))


@settings(max_examples=60, deadline=None)
@given(disk_specs(), st.lists(disk_zero, min_size=1, max_size=8))
def test_modulus_bounded_by_one(spec, pts):
    assert np.all(np.abs(evaluate(spec, np.array(pts))) <= 1 + 1e-12)


@settings(max_examples=40, deadline=None)
@given(disk_specs(), disk_specs(), disk_specs())
def test_product_commutative_associative(a, b, c):
    z = np.array([0.1 + 0.2j, -0.4j, 0.6])
    ab_c = evaluate(product(product(a, b), c), z)
    a_bc = evaluate(product(a, product(b, c)), z)
    ba = evaluate(product(b, a), z)
    assert np.allclose(ab_c, a_bc, atol=1e-12)
    assert np.allclose(evaluate(product(a, b), z), ba, atol=1e-12)
    assert np.allclose(evaluate(product(a, b), z), evaluate(a, z) * evaluate(b, z), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(uhp_specs())
def test_reflection_pairing_is_symmetric(spec):
    sym = product(spec, reflection(spec))
    grid = np.linspace(0.05, 6, 60)
    grid = grid[inner.distance_to_atoms(sym, grid) > 0.05]
    assert inner.symmetry_check(sym, grid, tol=1e-9).passed


@settings(max_examples=30, deadline=None)
@given(uhp_specs(), uhp_specs())
def test_symmetric_closure(a, b):
    sa, sb = inner.symmetrize(a), inner.symmetrize(b)
    grid = np.linspace(0.05, 6, 60)
    both = product(sa, sb)
    grid = grid[inner.distance_to_atoms(both, grid) > 0.05]
    assert inner.symmetry_check(both, grid, tol=1e-9).passed


@settings(max_examples=40, deadline=None)
@given(
    st.floats(0, 2), st.floats(0, 2), st.floats(0, 2),
    st.lists(st.tuples(st.floats(0.0, 3.0), st.floats(0.1, 2.0)), max_size=3),
    st.floats(0, 3), st.floats(0, 3),
)
def test_semigroup_law_property(c, c1, c2, atoms, t, s):
    lams = {}
    for lam, w in atoms:
        lams.setdefault(lam, w)
    gen = Generator(c, tuple(lams.items()), c1, c2)
    z = np.array([0.5 + 0.5j, -1 + 0.2j, 2 + 1j, 0.1 + 3j])
    lhs = inner.semigroup_eval(gen, t + s, z)
    rhs = inner.semigroup_eval(gen, t, z) * inner.semigroup_eval(gen, s, z)
    assert np.max(np.abs(lhs - rhs)) < 1e-12
    assert np.all(np.abs(lhs) <= 1 + 1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 5), st.floats(0.1, 5))
def test_generator_odd_on_real_line(lam, p):
    gen = Generator(c=0.5, atoms=((lam, 1.0),), c1=0.2, c2=0.3)
    if abs(abs(p) - lam) < 1e-6:
        return
    assert inner.generator_eval(gen, -p) == pytest.approx(-inner.generator_eval(gen, p))
