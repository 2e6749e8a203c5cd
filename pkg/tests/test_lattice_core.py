import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from latticelab import linalg
from latticelab.errors import (
    AxisPointPresent,
    DimensionMismatch,
    InputError,
    PrecisionExhausted,
    SingularBasis,
    SingularMinor,
    UnsupportedScalarKind,
)
from latticelab.lattice_core import (
    ScalarKind,
    Subspace,
    best_coordinate_subset,
    distance_to_subspace_lattice,
    integer_scaled,
    lattice_from_basis,
    lll_reduce,
    minimal_rational_subspace,
    project_sublattice,
    reduce_basis,
)


def test_rational_lattice_determinant(z3):
    skew = lattice_from_basis([[2, 1], [1, 3]])
    assert skew.det_abs.contains(5)
    assert z3.det_abs.contains(1)
    assert skew.point([1, -1]).coords == (Fraction(1), Fraction(-2))


def test_float_lattice_keeps_exact_decimals():
    lattice = lattice_from_basis([[0.1, 0], [0, 10]], ScalarKind.FLOAT)
    assert lattice.basis[0][0] == Fraction(1, 10)
    assert lattice.det_abs.contains(1)


def test_number_field_determinant(block3):
    assert block3.det_abs.contains(1)
    assert block3.embeddings == (1, 1, 1)


def test_algebraic_determinant_is_root_of_discriminant(cubic_lattice):
    assert cubic_lattice.det_abs.contains(9)
    assert cubic_lattice.conjugate_layout


@pytest.mark.parametrize(
    "rows, error",
    [([[1, 2], [2, 4]], SingularBasis), ([[1, 0, 0], [0, 1]], DimensionMismatch), ([], DimensionMismatch)],
)
def test_lattice_from_basis_rejects(rows, error):
    with pytest.raises(error):
        lattice_from_basis(rows)


def test_number_field_lattice_needs_a_polynomial():
    with pytest.raises(InputError):
        lattice_from_basis([[1, 0], [0, 1]], ScalarKind.NUMBERFIELD)


def test_number_field_point_intervals(golden_lattice):
    golden = (1 + math.sqrt(5)) / 2
    z = golden_lattice.point_intervals([3, -5])
    assert z[0].contains(3)
    assert z[1].lower() == pytest.approx(3 * golden - 5)
    assert z[1].upper() - z[1].lower() < 1e-30


def test_lll_reduce_keeps_the_lattice():
    rows = np.array([[1.0, 0.0], [1000.0, 1.0]])
    rounded, exponent = integer_scaled(rows)
    assert rounded[1] == [1000 * 2 ** exponent, 2 ** exponent]
    reduced, u = lll_reduce(rows)
    assert abs(linalg.integer_det(u)) == 1
    assert linalg.mat_mul(u, rounded) == reduced
    assert max(np.linalg.norm(np.array(reduced, dtype=float), axis=1)) < 2 * 2.0 ** exponent


def test_integer_scaled_sets_the_leading_bits():
    rounded, exponent = integer_scaled([[Fraction(3, 7), 0], [0, Fraction(-5, 2)]], scale_bits=20)
    assert 2 ** 19 <= max(abs(x) for row in rounded for x in row) < 2 ** 22
    assert rounded[1][1] == -5 * 2 ** (exponent - 1)
    assert integer_scaled([[0, 0]]) == ([[0, 0]], 0)


def test_reduce_basis_preserves_points():
    lattice = lattice_from_basis([[1, 0, 0], [57, 1, 0], [13, 29, 1]])
    reduced = reduce_basis(lattice)
    assert reduced.det_abs.contains(1)
    transform = [list(r) for r in reduced.transform]
    assert abs(linalg.integer_det(transform)) == 1
    assert [list(r) for r in reduced.basis] == linalg.mat_mul(transform, lattice.basis)


def test_scaled_and_permuted(z2):
    scaled = z2.scaled([2, Fraction(1, 3)])
    assert scaled.det_abs.contains(Fraction(2, 3))
    assert scaled.point([1, 1]).coords == (Fraction(2), Fraction(1, 3))
    swapped = scaled.permuted([1, 0])
    assert swapped.point([1, 1]).coords == (Fraction(1, 3), Fraction(2))
    with pytest.raises(InputError):
        z2.scaled([1, 0])
    with pytest.raises(InputError):
        z2.permuted([0, 0])


def test_axis_point_is_reported(z2):
    with pytest.raises(AxisPointPresent) as caught:
        minimal_rational_subspace(z2)
    assert caught.value.u == (1, 0) or list(caught.value.u) == [1, 0]


def test_axis_point_of_a_skewed_lattice():
    lattice = lattice_from_basis([[2, 1], [1, 1]])
    with pytest.raises(AxisPointPresent) as caught:
        minimal_rational_subspace(lattice)
    coords = lattice.exact_point(caught.value.u)
    assert coords[1] == 0 and coords[0] != 0


def test_full_rank_subspace_of_an_algebraic_lattice(cubic_lattice):
    p, subspace, generators = minimal_rational_subspace(cubic_lattice)
    assert p == 3
    assert subspace.rank == 3


def test_block_lattice_subspace(block3):
    p, subspace, generators = minimal_rational_subspace(block3)
    assert p == 2
    assert linalg.rank(generators) == 2
    assert all(block3.exact_point(u)[2] == 0 for u in generators)
    assert best_coordinate_subset(subspace) == (0, 1)
    projected = project_sublattice(block3, generators, (0, 1))
    assert projected.dim == 2
    assert projected.det_abs.contains(1)


def test_distance_to_subspace_lattice(block3):
    _, subspace, _ = minimal_rational_subspace(block3)
    delta = distance_to_subspace_lattice(block3, subspace)
    assert delta.contains(1)


def test_projection_onto_a_vanishing_minor_is_rejected(block3):
    _, _, generators = minimal_rational_subspace(block3)
    with pytest.raises(SingularMinor):
        project_sublattice(block3, generators, (0, 2))


def _brute_force_distance(lattice, subspace, bound):
    basis = lattice.float_basis()
    span = np.array([[x.approx() for x in row] for row in subspace.interval_basis()])
    ranges = range(-bound, bound + 1)
    u = np.array(list(itertools.product(ranges, repeat=lattice.dim)), dtype=float)
    points = u @ basis
    coefficients, *_ = np.linalg.lstsq(span.T, points.T, rcond=None)
    residual = np.linalg.norm(points - (span.T @ coefficients).T, axis=1)
    return residual[residual > 1e-9].min()


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[1, "t", 0], [0, 1, 0], [0, 0, 1]], 1.0),
        ([[1, "t", "t"], [0, 1, 0], [0, 0, 1]], 1 / math.sqrt(2)),
    ],
)
def test_distance_to_subspace_matches_a_brute_force_scan(sqrt2, rows, expected):
    lattice = lattice_from_basis(rows, ScalarKind.NUMBERFIELD, sqrt2)
    _, subspace, _ = minimal_rational_subspace(lattice)
    delta = distance_to_subspace_lattice(lattice, subspace)
    brute = _brute_force_distance(lattice, subspace, 20)
    assert brute == pytest.approx(expected, rel=1e-9)
    assert delta.lower() - 1e-9 <= brute <= delta.upper() + 1e-9


def test_float_lattices_have_no_rational_subspaces():
    lattice = lattice_from_basis([[1, 0], [0.5, 1]], ScalarKind.FLOAT)
    with pytest.raises(UnsupportedScalarKind):
        minimal_rational_subspace(lattice)


def _subspace(lattice, generators):
    basis = tuple(lattice.exact_point(u) for u in generators)
    return Subspace(lattice.dim, len(generators), basis, tuple(tuple(u) for u in generators), lattice)


@pytest.mark.parametrize(
    "generators, expected",
    [
        ([[1, 0, 0], [0, 1, 10]], (0, 2)),
        ([[1, 0, 0], [0, 1, 1]], (0, 1)),
        ([[1, 0, 0], [0, 3, -2]], (0, 1)),
        ([[1, 2, 0], [0, 0, 1]], (0, 2)),
    ],
)
def test_best_coordinate_subset_matches_an_exhaustive_minor_scan(z3, generators, expected):
    subspace = _subspace(z3, generators)
    chosen = best_coordinate_subset(subspace)
    assert chosen == expected
    rows = [list(row) for row in subspace.basis]
    minors = {(0, c): abs(linalg.det([[row[0], row[c]] for row in rows])) for c in (1, 2)}
    assert minors[chosen] == max(minors.values())
    assert all(minors[c] < minors[chosen] for c in minors if c < chosen)


def test_best_coordinate_subset_refines_close_minors():
    lattice = lattice_from_basis([[1, 0, 0], [0, 1, 1 + Fraction(1, 2 ** 100)], [0, 0, 1]])
    subspace = _subspace(lattice, [[1, 0, 0], [0, 1, 0]])
    assert best_coordinate_subset(subspace, bits=64) == (0, 2)
    with pytest.raises(PrecisionExhausted):
        best_coordinate_subset(subspace, bits=64, cap=64)
