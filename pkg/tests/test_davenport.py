import math
import random
from dataclasses import replace
from fractions import Fraction

import pytest

from latticelab import linalg
from latticelab.boxes import Weights, box_volume
from latticelab.davenport import (
    AxisPoint,
    CylinderWitness,
    DavenportConfig,
    box_exponent,
    case1_empty_cylinder,
    case2_empty_cylinder,
    classify_uniform_exponent,
    cylinder_weights,
    davenport_empty_box,
    dichotomy_ladder,
    dichotomy_witness,
)
from latticelab.enumeration import Verdict, verify_certificate
from latticelab.errors import DegenerateP1, GridExhausted, InputError
from latticelab.lattice_core import ScalarKind, lattice_from_basis

DAVENPORT_TRIALS = (10, 100)
AXIS_TRIALS = 20


def _random_unimodular(rng, d):
    m = linalg.identity(d)
    for _ in range(3 * d):
        i, j = rng.sample(range(d), 2)
        k = rng.randint(-3, 3)
        m[i] = [a + k * b for a, b in zip(m[i], m[j])]
    return m


def test_davenport_box_of_z2(z2, davenport_config):
    result = davenport_empty_box(z2, Weights.of([1, 1]), davenport_config)
    assert result.certificate.verdict is Verdict.CERTIFIED_EMPTY
    assert 0 < result.c < 1
    assert result.c_supremum.contains(1)
    assert result.lambda_prime.values == (result.c, result.c)


def test_davenport_on_random_unimodular_lattices(davenport_config, trials):
    rng = random.Random(3)
    for _ in range(trials(*DAVENPORT_TRIALS)):
        d = rng.choice([2, 3])
        lattice = lattice_from_basis(_random_unimodular(rng, d))
        result = davenport_empty_box(lattice, Weights.of([1] * d), davenport_config)
        assert result.c > 0
        assert result.certificate.verdict is Verdict.CERTIFIED_EMPTY
        volume, _ = box_volume(result.lambda_prime)
        assert volume >= (2 * result.c) ** d / math.factorial(d)


def test_davenport_needs_unit_product(z2, davenport_config):
    with pytest.raises(InputError):
        davenport_empty_box(z2, Weights.of([2, 2]), davenport_config)
    with pytest.raises(InputError):
        davenport_empty_box(z2, Weights.of([1, 0]), davenport_config)


def test_cylinder_weights_have_unit_product():
    w = cylinder_weights(Fraction(16), 3)
    assert w.values[0] == 16
    assert abs(w.values[1] - Fraction(1, 4)) < Fraction(1, 2 ** 100)


def test_box_exponent():
    assert box_exponent(Weights.of([Fraction(1, 2), Fraction(1, 2)])) is None
    assert box_exponent(Weights.of([4, Fraction(1, 4)])) == pytest.approx(0.0, abs=1e-12)
    assert box_exponent(Weights.of([4, Fraction(1, 64)])) == pytest.approx(1.0)


def test_axis_point_branch(z2, davenport_config):
    witness = dichotomy_witness(z2, Fraction(1, 10), davenport_config)
    assert isinstance(witness, AxisPoint)
    assert witness.u == (1, 0)
    assert isinstance(dichotomy_ladder(z2, config=davenport_config), AxisPoint)


def test_case1_ladder_for_the_cubic_field(cubic_lattice, davenport_config, acceptance):
    epsilons = [Fraction(1, 10), Fraction(1, 100)]
    if acceptance:
        epsilons.append(Fraction(1, 1000))
        davenport_config = replace(davenport_config, grid_cap=2 ** 40)
    rows = dichotomy_ladder(cubic_lattice, epsilons, davenport_config)
    assert len(rows) == len(epsilons)
    for row in rows:
        witness = row.witness
        assert isinstance(witness, CylinderWitness)
        assert witness.case_tag == "Case1"
        assert witness.p == 3
        assert all(v < row.epsilon for v in witness.box.values[1:])
        assert witness.certificate.verdict is Verdict.CERTIFIED_EMPTY
        assert witness.volume >= witness.volume_bound.lower_fraction()
        assert verify_certificate(cubic_lattice, witness.certificate)
        # norm form gives Pi >= 1 up to the Davenport margin, Minkowski gives Pi <= 9
        assert witness.gamma_witness <= 0.15
        assert abs(witness.gamma_witness) <= 1.001 * math.log(9) / math.log(witness.t_witness)
    for before, after in zip(rows, rows[1:]):
        assert after.witness.t_witness > before.witness.t_witness


def test_case1_rejects_a_proper_subspace(block3, davenport_config):
    with pytest.raises(InputError):
        case1_empty_cylinder(block3, Fraction(1, 10), davenport_config)


def test_case2_block_lattice(block3, davenport_config):
    witness = dichotomy_witness(block3, Fraction(1, 10), davenport_config)
    assert witness.case_tag == "Case2"
    assert witness.p == 2
    assert witness.coordinates == (0, 1)
    assert witness.delta.contains(1)
    assert witness.epsilon == Fraction(1, 10)
    assert witness.box.values[1] < Fraction(1, 10)
    assert witness.box.values[2] <= Fraction(1, 2)
    assert witness.certificate.verdict is Verdict.CERTIFIED_EMPTY
    assert verify_certificate(block3, witness.certificate)


def test_case2_shrinks_a_large_epsilon(block3, davenport_config):
    witness = case2_empty_cylinder(block3, Fraction(1, 2), davenport_config)
    assert witness.requested_epsilon == Fraction(1, 2)
    assert witness.epsilon < Fraction(1, 4)


def test_case2_rejects_rank_one(z2, davenport_config):
    with pytest.raises(DegenerateP1):
        case2_empty_cylinder(z2, Fraction(1, 10), davenport_config, (1, None, [[1, 0]]))


def test_grid_exhaustion_reports_the_best_value():
    lattice = lattice_from_basis([[1, 0], [0.5, 1]], ScalarKind.FLOAT)
    config = DavenportConfig(grid_cap=Fraction(2 ** 10))
    with pytest.raises(GridExhausted) as caught:
        dichotomy_witness(lattice, Fraction(1, 10), config)
    assert caught.value.best >= 0.5
    rows = dichotomy_ladder(lattice, (Fraction(1, 10),), config)
    assert rows[0].witness is None and rows[0].best >= 0.5


def test_classify_diagonal_images_of_integer_lattices(z2, davenport_config):
    result = classify_uniform_exponent(z2.scaled([2, Fraction(1, 3)]), config=davenport_config)
    assert result.infinite
    assert [p.axis for p in result.axis_points] == [0, 1]
    assert result.axis_points[1].coords[0] == 0


def test_classify_finds_a_free_axis(block3, davenport_config):
    result = classify_uniform_exponent(block3, config=davenport_config)
    assert not result.infinite
    assert result.free_axis == 0
    assert result.witness.case_tag == "Case2"


def test_diagonal_images_of_integer_sublattices_hold_axis_points(davenport_config):
    rng = random.Random(5)
    for _ in range(AXIS_TRIALS):
        d = rng.choice([2, 3])
        basis = _random_unimodular(rng, d)
        basis[0] = [rng.randint(1, 3) * x for x in basis[0]]
        lattice = lattice_from_basis(basis).scaled([Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(d)])
        witness = dichotomy_witness(lattice, Fraction(1, 10), davenport_config)
        assert isinstance(witness, AxisPoint)
        assert all(z == 0 for z in witness.coords[1:])
