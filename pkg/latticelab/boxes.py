"""Weighted boxes P(lambda) = {z : |z_i| <= lambda_i} and the size functionals on points."""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator, Sequence, Tuple, Union

import mpmath

from .arith import DEFAULT_PRECISION_BITS, Interval, mpf_to_fraction, parse_rational
from .errors import InfeasibleShape, InputError, ParseError

logger = logging.getLogger(__name__)

A_MAX = 8
SHAPE_TOLERANCE = 1e-12

Real = Union[int, float, Fraction]


@dataclass(frozen=True)
class Weights:
    """Exact non-negative half-widths; zero entries mark degenerate coordinates."""

    values: Tuple[Fraction, ...]

    def __post_init__(self):
        if not self.values:
            raise InputError("weights must have at least one entry")
        if any(v < 0 for v in self.values):
            raise InputError(f"weights must be non-negative, got {self}")
        if not any(v > 0 for v in self.values):
            raise InputError("at least one weight must be positive")

    @classmethod
    def of(cls, values: Sequence[Any]) -> "Weights":
        return cls(tuple(parse_rational(v) for v in values))

    @classmethod
    def from_floats(cls, values: Sequence[float]) -> "Weights":
        """Weights at the exact binary values of the given floats."""
        return cls(tuple(Fraction(float(v)) for v in values))

    @property
    def dim(self) -> int:
        return len(self.values)

    @property
    def active(self) -> Tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.values) if v > 0)

    @property
    def degenerate(self) -> Tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.values) if v == 0)

    def dilated(self, factor: Real) -> "Weights":
        factor = parse_rational(factor)
        return Weights(tuple(v * factor for v in self.values))

    def floats(self) -> Tuple[float, ...]:
        return tuple(float(v) for v in self.values)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, index: int) -> Fraction:
        return self.values[index]

    def __str__(self) -> str:
        return ",".join(repr(float(v)) for v in self.values)


@dataclass(frozen=True)
class ShapeVector:
    """Exponents a with max a_i = 1; the box at scale t is lambda_i = t^(a_i)."""

    a: Tuple[float, ...]
    a_max: float = A_MAX

    def __post_init__(self):
        if abs(max(self.a) - 1.0) > SHAPE_TOLERANCE:
            raise InputError(f"shape maximum must be 1, got {max(self.a)}")
        if min(self.a) < -self.a_max:
            raise InfeasibleShape(f"shape entry {min(self.a)} below -{self.a_max}")

    @classmethod
    def from_box(cls, values: Sequence[Real], a_max: float = A_MAX) -> "ShapeVector":
        """Shape of a box with sup-norm above 1, clipped at -a_max."""
        logs = [math.log(float(v)) for v in values]
        top = max(logs)
        if top <= 0:
            raise InputError("a box needs sup-norm above 1 to define a shape")
        return cls(tuple(max(x / top, -a_max) if x != top else 1.0 for x in logs), a_max)

    @property
    def dim(self) -> int:
        return len(self.a)


def sup_norm(z: Sequence[Any]) -> Any:
    """max |z_i| for numbers or Intervals."""
    values = [abs(x) for x in z]
    if values and isinstance(values[0], Interval):
        return Interval.maximum(values)
    return max(values, default=0)


def pi_functional(z: Sequence[Any]) -> Any:
    """Geometric mean of |z_i|; an Interval when the entries are Intervals."""
    d = len(z)
    if z and isinstance(z[0], Interval):
        product = Interval.exact(1, z[0].precision_bits)
        for x in z:
            product = product * abs(x)
        if not product.is_positive():
            if product.is_zero():
                return product
            raise ValueError("product interval touches zero; refine precision")
        return (product.log() * Fraction(1, d)).exp()
    values = [abs(float(x)) for x in z]
    if any(v == 0 for v in values):
        return 0.0
    return math.exp(sum(math.log(v) for v in values) / d)


def pi_prime(x: Sequence[Real]) -> float:
    """Geometric mean of max(1, |x_i|)."""
    k = len(x)
    return math.exp(sum(math.log(max(1.0, abs(float(v)))) for v in x) / k)


def rescaled_exponents(gamma: Real, shape: ShapeVector) -> Tuple[float, ...]:
    """Affinely rescale the sub-maximal exponents so that their sum is -d.gamma."""
    d = shape.dim
    gamma = float(gamma)
    deficit = sum(1.0 - a for a in shape.a if a < 1.0)
    if deficit == 0.0:
        if abs(gamma + 1.0) > SHAPE_TOLERANCE:
            raise InfeasibleShape("a cube shape only reaches gamma = -1")
        return tuple(1.0 for _ in shape.a)
    s = d * (1.0 + gamma) / deficit
    if s < 0:
        raise InfeasibleShape(f"gamma = {gamma} is below -1; boxes with |lambda| = t cannot reach it")
    scaled = tuple(1.0 if a >= 1.0 else 1.0 + s * (a - 1.0) for a in shape.a)
    if min(scaled) < -shape.a_max:
        raise InfeasibleShape(
            f"gamma = {gamma} needs exponent {min(scaled):.3f} below the cap -{shape.a_max}"
        )
    return scaled


def from_t_gamma_shape(t: Real, gamma: Real, shape: ShapeVector,
                       precision_bits: int = DEFAULT_PRECISION_BITS) -> Weights:
    """Box with |lambda| = t and Pi(lambda) = t^-gamma along the given shape.

    Entries are exact dyadic rationals; the maximal ones equal t.
    """
    t_exact = parse_rational(t)
    if t_exact <= 1:
        raise InputError(f"scale t must exceed 1, got {t}")
    exponents = rescaled_exponents(gamma, shape)
    with mpmath.workprec(precision_bits):
        log_t = mpmath.log(mpmath.mpf(t_exact.numerator) / t_exact.denominator)
        values = []
        for a in exponents:
            if a == 1.0:
                values.append(t_exact)
            else:
                values.append(mpf_to_fraction(mpmath.exp(log_t * a)))
    weights = Weights(tuple(values))
    error = abs(math.log(pi_functional(weights.values)) + float(gamma) * math.log(float(t_exact)))
    if error > 1e-9 * max(1.0, math.log(float(t_exact))):
        raise InfeasibleShape(f"box misses the target Pi(lambda) = t^-gamma by {error:g} in log scale")
    return weights


def box_volume(w: Weights) -> Tuple[Fraction, int]:
    """Volume of the box in the span of its positive coordinates, and that span's dimension."""
    volume = Fraction(1)
    for v in w.active:
        volume *= 2 * w.values[v]
    return volume, len(w.active)


def renormalize(w: Weights, precision_bits: int = DEFAULT_PRECISION_BITS) -> Weights:
    """Scale the positive entries so that their product is 1, up to dyadic rounding."""
    active = w.active
    with mpmath.workprec(precision_bits):
        log_product = mpmath.fsum(mpmath.log(mpmath.mpf(w.values[i].numerator) / w.values[i].denominator)
                                  for i in active)
        factor = mpmath.exp(-log_product / len(active))
        fraction = mpf_to_fraction(factor)
    return Weights(tuple(v * fraction for v in w.values))


def product_of(w: Weights) -> Fraction:
    product = Fraction(1)
    for i in w.active:
        product *= w.values[i]
    return product


def parse_weights(text: str) -> Weights:
    """Comma-separated decimals, fractions or dyadic "m*2^e" entries."""
    parts = str(text).split(",")
    if any(not part.strip() for part in parts):
        raise ParseError(f"empty entry in weights {text!r}")
    return Weights(tuple(parse_rational(part) for part in parts))
