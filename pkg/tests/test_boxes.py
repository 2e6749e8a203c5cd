import math
from fractions import Fraction

import pytest

from latticelab.arith import Interval
from latticelab.boxes import (
    ShapeVector,
    Weights,
    box_volume,
    from_t_gamma_shape,
    parse_weights,
    pi_functional,
    pi_prime,
    product_of,
    renormalize,
    rescaled_exponents,
    sup_norm,
)
from latticelab.errors import InfeasibleShape, InputError, ParseError


def test_weights_are_exact():
    w = parse_weights("1,1/2,3*2^-2, 0.1")
    assert w.values == (Fraction(1), Fraction(1, 2), Fraction(3, 4), Fraction(1, 10))
    assert w.dim == 4


@pytest.mark.parametrize("text", ["1,,2", "", "1,x"])
def test_parse_weights_rejects(text):
    with pytest.raises(ParseError):
        parse_weights(text)


@pytest.mark.parametrize("values", [(), (1, -1), (0, 0)])
def test_weights_validation(values):
    with pytest.raises(InputError):
        Weights.of(values)


def test_degenerate_coordinates():
    w = Weights.of([1, 0, 2])
    assert w.active == (0, 2)
    assert w.degenerate == (1,)
    assert w.dilated(Fraction(1, 2)).values == (Fraction(1, 2), Fraction(0), Fraction(1))


def test_norm_and_functionals():
    assert sup_norm([1, -3, 2]) == 3
    assert pi_functional([2, 8]) == pytest.approx(4.0)
    assert pi_functional([0, 5]) == 0.0
    assert pi_functional([Interval.exact(2), Interval.exact(8)]).contains(4)
    assert sup_norm([Interval.exact(-5), Interval.exact(2)]).contains(5)
    assert pi_prime([0.5, 4]) == pytest.approx(2.0)


def test_rescaled_exponents_hit_the_target_sum():
    shape = ShapeVector((1.0, 0.0, 0.5))
    for gamma in (0.0, 0.3, 1.0):
        a = rescaled_exponents(gamma, shape)
        assert max(a) == 1.0
        assert sum(a) == pytest.approx(-3 * gamma)


def test_cube_shape_only_reaches_minus_one():
    cube = ShapeVector((1.0, 1.0))
    assert rescaled_exponents(-1.0, cube) == (1.0, 1.0)
    with pytest.raises(InfeasibleShape):
        rescaled_exponents(0.0, cube)


def test_infeasible_gamma():
    with pytest.raises(InfeasibleShape):
        rescaled_exponents(-1.5, ShapeVector((1.0, 0.0)))
    with pytest.raises(InfeasibleShape):
        rescaled_exponents(10.0, ShapeVector((1.0, 0.9), a_max=2))


def test_shape_from_box():
    shape = ShapeVector.from_box([100, 10])
    assert shape.a == (1.0, pytest.approx(0.5))
    with pytest.raises(InputError):
        ShapeVector.from_box([0.5, 0.25])


def test_box_from_t_gamma_shape():
    w = from_t_gamma_shape(16, 0, ShapeVector((1.0, 0.0)))
    assert w.values[0] == 16
    assert abs(w.values[1] - Fraction(1, 16)) < Fraction(1, 2 ** 100)
    assert -math.log(pi_functional(w.values)) / math.log(16) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(InputError):
        from_t_gamma_shape(1, 0, ShapeVector((1.0, 0.0)))


def test_volume_and_renormalize():
    volume, k = box_volume(Weights.of([1, Fraction(1, 2), 0]))
    assert (volume, k) == (Fraction(2), 2)
    unit = renormalize(Weights.of([2, 8]))
    assert abs(product_of(unit) - 1) < Fraction(1, 2 ** 100)
    assert unit.values[1] == 4 * unit.values[0]
