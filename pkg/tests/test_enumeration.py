import math
import random
from fractions import Fraction

import pytest

from latticelab.boxes import Weights
from latticelab.enumeration import (
    EnumerationConfig,
    Verdict,
    brute_force_box,
    enumerate_box,
    first_minimum,
    first_minimum_euclidean,
    is_empty,
    successive_minima,
    verify_certificate,
    weighted_norm,
)
from latticelab.errors import BudgetExceeded, DimensionMismatch, InputError, SearchBudgetExceeded
from latticelab.lattice_core import ScalarKind, lattice_from_basis

ORACLE_TRIALS = (25, 50)
MINKOWSKI_TRIALS = (25, 100)
ORACLE_BOUND = 20


def _random_lattice(rng, d, entries=5):
    while True:
        rows = [[rng.randint(-entries, entries) for _ in range(d)] for _ in range(d)]
        try:
            return lattice_from_basis(rows)
        except InputError:
            continue


def _random_weights(rng, d):
    return Weights(tuple(Fraction(rng.randint(1, 12), rng.randint(1, 4)) for _ in range(d)))


def test_unit_box_of_z2(z2):
    found = enumerate_box(z2, Weights.of([1, 1]))
    assert len(found.points) == 8
    assert found.verdict is Verdict.INHABITED
    assert [p.u for p in found.points] == sorted(p.u for p in found.points)
    with_zero = enumerate_box(z2, Weights.of([1, 1]), nonzero_only=False)
    assert len(with_zero.points) == 9


def test_empty_box_certificate_replays(z2):
    certificate = is_empty(z2, Weights.of([Fraction(1, 2), Fraction(9, 10)]))
    assert certificate.verdict is Verdict.CERTIFIED_EMPTY
    assert certificate.witness is None
    assert verify_certificate(z2, certificate)


def test_inhabited_box_has_a_witness(z2):
    certificate = is_empty(z2, Weights.of([1, Fraction(1, 2)]))
    assert certificate.verdict is Verdict.INHABITED
    assert certificate.witness.u in ((1, 0), (-1, 0))
    assert verify_certificate(z2, certificate)


def test_degenerate_weights_restrict_to_a_subspace(z2):
    found = enumerate_box(z2, Weights.of([1, 0]))
    assert sorted(p.u for p in found.points) == [(-1, 0), (1, 0)]
    skew = lattice_from_basis([[1, 1], [0, 2]])
    found = enumerate_box(skew, Weights.of([3, 0]))
    assert sorted(p.coords for p in found.points) == [(Fraction(-2), 0), (Fraction(2), 0)]


def test_enumeration_matches_brute_force(trials):
    rng = random.Random(20240611)
    for _ in range(trials(*ORACLE_TRIALS)):
        d = rng.choice([2, 3])
        lattice = _random_lattice(rng, d)
        w = _random_weights(rng, d)
        fast = {p.u for p in enumerate_box(lattice, w).points if max(map(abs, p.u)) <= ORACLE_BOUND}
        slow = {p.u for p in brute_force_box(lattice, w, ORACLE_BOUND)}
        assert fast == slow


def test_number_field_enumeration_matches_brute_force(golden_lattice):
    w = Weights.of([10, Fraction(1, 10)])
    fast = {p.u for p in enumerate_box(golden_lattice, w).points}
    slow = {p.u for p in brute_force_box(golden_lattice, w, ORACLE_BOUND)}
    assert fast == slow
    assert (5, -8) in fast or (-5, 8) in fast


def test_successive_minima_of_z3(z3):
    result = successive_minima(z3, Weights.of([1, 1, 1]))
    assert result.mu_points == (1, 1, 1)
    assert result.exact
    assert result.minkowski_violation(z3.det_abs) is None


def test_successive_minima_are_ordered_and_independent():
    lattice = lattice_from_basis([[3, 1], [1, 4]])
    result = successive_minima(lattice, Weights.of([1, 2]))
    assert result.mu_points[0] <= result.mu_points[1]
    u1, u2 = (p.u for p in result.witnesses)
    assert u1[0] * u2[1] - u1[1] * u2[0] != 0
    for mu, point in zip(result.mu, result.witnesses):
        norm, exact = weighted_norm(lattice, point, result.box)
        assert mu.contains(exact)
    assert first_minimum(lattice, Weights.of([1, 2])).mu_points[0] == result.mu_points[0]


def test_minkowski_sandwich_on_random_lattices(trials):
    rng = random.Random(11)
    for _ in range(trials(*MINKOWSKI_TRIALS)):
        d = rng.choice([2, 3, 4])
        lattice = _random_lattice(rng, d, entries=10)
        w = _random_weights(rng, d)
        result = successive_minima(lattice, w)
        assert result.minkowski_violation(lattice.det_abs) is None


def test_minkowski_sandwich_for_the_cubic_field(cubic_lattice):
    result = successive_minima(cubic_lattice, Weights.of([1, 1, 1]))
    assert len(result.mu) == 3
    assert not result.exact
    assert result.minkowski_violation(cubic_lattice.det_abs) is None


def test_euclidean_first_minimum():
    lattice = lattice_from_basis([[2, 1], [1, 3]])
    length = first_minimum_euclidean(lattice)
    assert length.lower() <= math.sqrt(5) <= length.upper()


def test_node_budget(z3):
    with pytest.raises(SearchBudgetExceeded):
        enumerate_box(z3, Weights.of([50, 50, 50]), config=EnumerationConfig(node_budget=10))


def test_brute_force_budget(z3):
    with pytest.raises(BudgetExceeded):
        brute_force_box(z3, Weights.of([1, 1, 1]), 1000)


def test_weight_dimension_must_match(z3):
    with pytest.raises(DimensionMismatch):
        enumerate_box(z3, Weights.of([1, 1]))


def test_float_lattice_with_zero_weights_has_no_minima():
    lattice = lattice_from_basis([[1, 0], [0.5, 1]], ScalarKind.FLOAT)
    with pytest.raises(InputError):
        successive_minima(lattice, Weights.of([1, 0]))


def test_enumeration_commutes_with_diagonal_scaling():
    rng = random.Random(7)
    for _ in range(10):
        d = rng.choice([2, 3])
        lattice = _random_lattice(rng, d)
        w = _random_weights(rng, d)
        factors = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(d)]
        stretched = Weights(tuple(v * f for v, f in zip(w.values, factors)))
        plain = {p.u for p in enumerate_box(lattice, w).points}
        scaled = {p.u for p in enumerate_box(lattice.scaled(factors), stretched).points}
        assert plain == scaled


def test_enlarging_a_weight_never_removes_points():
    rng = random.Random(8)
    for _ in range(10):
        d = rng.choice([2, 3])
        lattice = _random_lattice(rng, d)
        w = _random_weights(rng, d)
        k = rng.randrange(d)
        wider = Weights(tuple(v + (Fraction(rng.randint(1, 5), 2) if i == k else 0) for i, v in enumerate(w.values)))
        small = {p.u for p in enumerate_box(lattice, w).points}
        large = {p.u for p in enumerate_box(lattice, wider).points}
        assert small <= large


def test_ill_conditioned_box_is_never_falsely_empty(cubic_lattice):
    # product of half-widths 1/4: the norm form keeps every nonzero point out
    empty = is_empty(cubic_lattice, Weights.of([Fraction(1, 2 ** 40), 2 ** 19, 2 ** 19]))
    assert empty.verdict in (Verdict.CERTIFIED_EMPTY, Verdict.UNDECIDED)
    if empty.verdict is Verdict.CERTIFIED_EMPTY:
        assert empty.margin >= EnumerationConfig().radius_slack
        assert verify_certificate(cubic_lattice, empty)
    # volume 128 >= 2^3 * 9: Minkowski forces a point
    full = is_empty(cubic_lattice, Weights.of([Fraction(1, 2 ** 40), 2 ** 22, 2 ** 22]))
    assert full.verdict is Verdict.INHABITED
    assert verify_certificate(cubic_lattice, full)
