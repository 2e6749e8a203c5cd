import math
import random
from fractions import Fraction

import mpmath
import pytest

from latticelab.arith import (
    Interval,
    MinimalPolynomial,
    NumberFieldElement,
    certainly_gt,
    certainly_le,
    embedding_root,
    escalate,
    evaluate_scalar,
    format_rational,
    mpf_to_fraction,
    nf_norm,
    parse_rational,
    real_roots,
)
from latticelab.errors import (
    InputError,
    IrreducibilityUnverified,
    NotSquarefree,
    ParseError,
    PrecisionExhausted,
    ZeroElement,
)


@pytest.mark.parametrize(
    "text, expected",
    [("3/4", Fraction(3, 4)), ("-7", Fraction(-7)), ("3*2^-2", Fraction(3, 4)), ("0.25", Fraction(1, 4)),
     (0.1, Fraction(1, 10)), (5, Fraction(5))],
)
def test_parse_rational(text, expected):
    assert parse_rational(text) == expected


@pytest.mark.parametrize("text", ["abc", "1/0", "", True])
def test_parse_rational_rejects(text):
    with pytest.raises(ParseError):
        parse_rational(text)


def test_format_rational():
    assert format_rational(Fraction(6, 2)) == "3"
    assert format_rational(Fraction(-1, 2)) == "-1/2"


def test_interval_encloses_thirds():
    third = Interval.exact(Fraction(1, 3))
    assert third.contains(Fraction(1, 3))
    assert third.lower_fraction() < Fraction(1, 3) < third.upper_fraction()
    assert (third * 3).contains(1)


def test_interval_sqrt_log_exp():
    root = Interval.exact(2).sqrt()
    assert (root * root).contains(2)
    assert root.lower() <= math.sqrt(2) <= root.upper()
    assert Interval.exact(1).log().contains(0)
    assert Interval.exact(0).exp().contains(1)


def test_interval_log_of_nonpositive_fails():
    with pytest.raises(ValueError):
        Interval.from_bounds(-1, 1).log()


def test_certain_comparisons():
    one, two = Interval.exact(1), Interval.exact(2)
    assert certainly_le(one, two)
    assert not certainly_le(two, one)
    assert certainly_gt(two, one)
    assert not certainly_gt(one, Interval.exact(1))
    assert Interval.from_bounds(0, 3).intersects(two)


def test_hull_and_maximum():
    a, b = Interval.from_bounds(0, 1), Interval.from_bounds(2, 5)
    assert Interval.hull([a, b]).contains(Interval.from_bounds(0, 5))
    top = Interval.maximum([a, b])
    assert top.lower_fraction() == 2 and top.upper_fraction() == 5


def test_escalate_doubles_until_decided():
    seen = []

    def attempt(bits):
        seen.append(bits)
        return bits if bits >= 512 else None

    assert escalate(attempt, 128, 4096) == 512
    assert seen == [128, 256, 512]


def test_escalate_gives_up_at_the_cap():
    with pytest.raises(PrecisionExhausted):
        escalate(lambda bits: None, 128, 512, what="comparison")


def test_minimal_polynomial_parse():
    p = MinimalPolynomial.parse("x^3 - 3x + 1")
    assert p.coefficients == (1, 0, -3, 1)
    assert p.degree == 3
    assert p.totally_real
    assert str(p) == "x^3 - 3*x + 1"
    assert not MinimalPolynomial.parse("x^2 + 1").totally_real


@pytest.mark.parametrize(
    "text, error",
    [("x^2 - 4", InputError), ("x^2 - 2x + 1", NotSquarefree), ("2x^2 - 1", InputError),
     ("x^2 - 3y", ParseError), ("x^4 - 10x^2 + 1", IrreducibilityUnverified), ("x^2 x", ParseError)],
)
def test_minimal_polynomial_rejects(text, error):
    with pytest.raises(error):
        MinimalPolynomial.parse(text)


def test_irreducibility_assertion_accepts_quartic():
    p = MinimalPolynomial.parse("x^4 - 10x^2 + 1", assert_irreducible=True)
    assert p.irreducibility_asserted
    assert p.totally_real


def test_real_roots_of_cubic(cubic_minpoly):
    roots = real_roots(cubic_minpoly, 128)
    assert len(roots) == 3
    expected = sorted(2 * math.cos(2 * math.pi * k / 9) for k in (1, 2, 4))
    for root, value in zip(roots, expected):
        assert root.lower() <= value + 1e-15 and value - 1e-15 <= root.upper()
        assert root.upper() - root.lower() < 1e-30
    assert embedding_root(cubic_minpoly, -1, 64).intersects(roots[2])


def test_number_field_arithmetic(sqrt2):
    t = NumberFieldElement.generator(sqrt2)
    assert t * t == NumberFieldElement.from_rational(2, sqrt2)
    x = t + 1
    assert x * x.inverse() == NumberFieldElement.from_rational(1, sqrt2)
    assert nf_norm(x) == -1
    assert NumberFieldElement.parse("1/2*t - 3", sqrt2).coefficients == (Fraction(-3), Fraction(1, 2))
    assert (t ** 3).coefficients == (Fraction(0), Fraction(2))


def test_norm_of_zero_fails(sqrt2):
    with pytest.raises(ZeroElement):
        nf_norm(NumberFieldElement.from_rational(0, sqrt2))


def test_evaluate_scalar_uses_the_chosen_embedding(sqrt2):
    t = NumberFieldElement.generator(sqrt2)
    high = evaluate_scalar(t, sqrt2, 1, 128)
    low = evaluate_scalar(t, sqrt2, 0, 128)
    assert high.lower() == pytest.approx(math.sqrt(2))
    assert low.upper() == pytest.approx(-math.sqrt(2))
    assert evaluate_scalar(Fraction(1, 3), None, None, 64).contains(Fraction(1, 3))


def _random_tree(rng, depth):
    if depth == 0 or rng.random() < 0.2:
        return ("leaf", Fraction(rng.randint(-20, 20), rng.randint(1, 9)))
    op = rng.choice(["+", "-", "*", "/", "sqrt", "log", "exp"])
    if op in ("sqrt", "log", "exp"):
        return (op, _random_tree(rng, depth - 1))
    return (op, _random_tree(rng, depth - 1), _random_tree(rng, depth - 1))


def _evaluate(tree, leaf, sqrt, log, exp):
    op = tree[0]
    if op == "leaf":
        return leaf(tree[1])
    args = [_evaluate(child, leaf, sqrt, log, exp) for child in tree[1:]]
    if op == "+":
        return args[0] + args[1]
    if op == "-":
        return args[0] - args[1]
    if op == "*":
        return args[0] * args[1]
    if op == "/":
        return args[0] / args[1]
    x = args[0]
    if op == "sqrt":
        return sqrt(abs(x))
    if op == "log":
        return log(x ** 2 + 1)
    return exp(x / (x ** 2 + 1))


def test_interval_expressions_enclose_high_precision_values():
    rng = random.Random(5)
    checked = 0
    for _ in range(200):
        tree = _random_tree(rng, 4)
        try:
            enclosure = _evaluate(tree, lambda q: Interval.exact(q, 64), Interval.sqrt, Interval.log, Interval.exp)
        except ZeroDivisionError:
            continue
        with mpmath.workprec(1000):
            value = _evaluate(tree, lambda q: mpmath.mpf(q.numerator) / q.denominator,
                              mpmath.sqrt, mpmath.log, mpmath.exp)
            exact = mpf_to_fraction(value)
        assert enclosure.contains(exact), tree
        checked += 1
    assert checked > 100


def test_norm_is_multiplicative(cubic_minpoly):
    rng = random.Random(9)
    roots = real_roots(cubic_minpoly, 128)
    for _ in range(20):
        a = NumberFieldElement.from_coefficients([rng.randint(-5, 5) for _ in range(3)], cubic_minpoly)
        b = NumberFieldElement.from_coefficients([rng.randint(-5, 5) for _ in range(3)], cubic_minpoly)
        if a.is_zero() or b.is_zero():
            continue
        assert nf_norm(a * b) == nf_norm(a) * nf_norm(b)
        product = a.evaluate(roots[0]) * a.evaluate(roots[1]) * a.evaluate(roots[2])
        assert product.contains(nf_norm(a))
    c = Fraction(-7, 3)
    assert nf_norm(NumberFieldElement.from_rational(c, cubic_minpoly)) == c ** 3


def test_real_roots_nest_as_precision_grows(cubic_minpoly):
    previous = None
    for bits in (32, 64, 128, 256):
        roots = real_roots(cubic_minpoly, bits)
        for root in roots:
            assert root.upper_fraction() - root.lower_fraction() <= Fraction(2, 2 ** bits)
        if previous is not None:
            for coarse, fine in zip(previous, roots):
                assert coarse.contains(fine)
        previous = roots
