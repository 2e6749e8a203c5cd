"""Scalar arithmetic: exact rationals, number-field elements and outward-rounded intervals.

Rationals are plain :class:`fractions.Fraction` values. Intervals wrap a pair of raw
mpmath floats and delegate every operation to :mod:`mpmath.libmp`'s interval kernels,
which round the lower end towards -inf and the upper end towards +inf, so every result
contains the exact value. Number-field elements are coefficient vectors in the power
basis of a monic integer minimal polynomial.
"""

import enum
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar, Union

import mpmath
import sympy
from mpmath import libmp

from . import linalg
from .errors import (
    InputError,
    IrreducibilityUnverified,
    NotSquarefree,
    ParseError,
    PrecisionExhausted,
    ZeroElement,
)

logger = logging.getLogger(__name__)

DEFAULT_PRECISION_BITS = 128
PRECISION_CAP_BITS = 4096

Number = Union[int, Fraction]
T = TypeVar("T")

_DYADIC = re.compile(r"^\s*([+-]?\d+)\s*\*\s*2\s*\^\s*\(?\s*([+-]?\d+)\s*\)?\s*$")


# ---------------------------------------------------------------------------
# Rationals
# ---------------------------------------------------------------------------


def parse_rational(text: Union[str, int, float, Fraction]) -> Fraction:
    """Parse "p/q", an integer, a decimal or dyadic "m*2^e" notation exactly.

    Floats are read through their shortest decimal representation, so 0.1 means 1/10.
    """
    if isinstance(text, bool):
        raise ParseError(f"not a rational number: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        return Fraction(repr(text))
    match = _DYADIC.match(str(text))
    if match:
        return Fraction(int(match.group(1))) * Fraction(2) ** int(match.group(2))
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc


def format_rational(value: Number) -> str:
    q = Fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_dyadic(raw: tuple) -> str:
    """Exact "m*2^e" rendering of a raw mpf."""
    sign, man, exp, _ = raw
    if not man:
        return "0"
    return f"{-man if sign else man}*2^{exp}"


def _fraction_of(raw: tuple) -> Fraction:
    p, q = libmp.to_rational(raw)
    return Fraction(p, q)


def mpf_to_fraction(value: mpmath.mpf) -> Fraction:
    return _fraction_of(mpmath.mpf(value)._mpf_)


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------


class Ordering(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    OVERLAPPING = "overlapping"


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with raw mpf endpoints.

    Arithmetic with ints and Fractions is supported on either side; the result carries the
    larger of the operands' precisions.
    """

    lo: tuple
    hi: tuple
    precision_bits: int = DEFAULT_PRECISION_BITS

    @classmethod
    def exact(cls, value: Number, precision_bits: int = DEFAULT_PRECISION_BITS) -> "Interval":
        q = Fraction(value)
        if q.denominator == 1:
            point = libmp.from_int(q.numerator)
            return cls(point, point, precision_bits)
        lo = libmp.from_rational(q.numerator, q.denominator, precision_bits, libmp.round_floor)
        hi = libmp.from_rational(q.numerator, q.denominator, precision_bits, libmp.round_ceiling)
        return cls(lo, hi, precision_bits)

    @classmethod
    def from_bounds(cls, lo: Number, hi: Number, precision_bits: int = DEFAULT_PRECISION_BITS) -> "Interval":
        lo_q, hi_q = Fraction(lo), Fraction(hi)
        if lo_q > hi_q:
            raise ValueError("interval lower bound exceeds upper bound")
        return cls(cls.exact(lo_q, precision_bits).lo, cls.exact(hi_q, precision_bits).hi, precision_bits)

    @classmethod
    def from_float(cls, value: float, precision_bits: int = DEFAULT_PRECISION_BITS) -> "Interval":
        point = libmp.from_float(float(value))
        return cls(point, point, precision_bits)

    @classmethod
    def hull(cls, items: Iterable["Interval"]) -> "Interval":
        items = list(items)
        lo = min((i.lo for i in items), key=_fraction_of)
        hi = max((i.hi for i in items), key=_fraction_of)
        return cls(lo, hi, max(i.precision_bits for i in items))

    @classmethod
    def maximum(cls, items: Iterable["Interval"]) -> "Interval":
        """Interval enclosing max(x_1, ..., x_k) for x_i ranging over the items."""
        items = list(items)
        lo = max((i.lo for i in items), key=_fraction_of)
        hi = max((i.hi for i in items), key=_fraction_of)
        return cls(lo, hi, max(i.precision_bits for i in items))

    @classmethod
    def minimum(cls, items: Iterable["Interval"]) -> "Interval":
        items = list(items)
        lo = min((i.lo for i in items), key=_fraction_of)
        hi = min((i.hi for i in items), key=_fraction_of)
        return cls(lo, hi, max(i.precision_bits for i in items))

    @property
    def midpoint(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(libmp.mpf_shift(libmp.mpf_add(self.lo, self.hi), -1))

    @property
    def radius(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(libmp.mpf_shift(libmp.mpf_sub(self.hi, self.lo), -1))

    def lower(self) -> float:
        return libmp.to_float(self.lo, rnd=libmp.round_floor)

    def upper(self) -> float:
        return libmp.to_float(self.hi, rnd=libmp.round_ceiling)

    def approx(self) -> float:
        return libmp.to_float(libmp.mpf_shift(libmp.mpf_add(self.lo, self.hi), -1))

    def lower_fraction(self) -> Fraction:
        return _fraction_of(self.lo)

    def upper_fraction(self) -> Fraction:
        return _fraction_of(self.hi)

    def with_precision(self, precision_bits: int) -> "Interval":
        return Interval(self.lo, self.hi, precision_bits)

    def _coerce(self, other) -> "Interval":
        if isinstance(other, Interval):
            return other
        if isinstance(other, (int, Fraction)):
            return Interval.exact(other, self.precision_bits)
        if isinstance(other, float):
            return Interval.from_float(other, self.precision_bits)
        return NotImplemented

    def _wrap(self, pair: Tuple[tuple, tuple], other: Optional["Interval"] = None) -> "Interval":
        prec = self.precision_bits if other is None else max(self.precision_bits, other.precision_bits)
        return Interval(pair[0], pair[1], prec)

    def _prec(self, other: "Interval") -> int:
        return max(self.precision_bits, other.precision_bits)

    def __add__(self, other) -> "Interval":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._wrap(libmp.mpi_add((self.lo, self.hi), (other.lo, other.hi), self._prec(other)), other)

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._wrap(libmp.mpi_sub((self.lo, self.hi), (other.lo, other.hi), self._prec(other)), other)

    def __rsub__(self, other) -> "Interval":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> "Interval":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._wrap(libmp.mpi_mul((self.lo, self.hi), (other.lo, other.hi), self._prec(other)), other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.contains_zero():
            raise ZeroDivisionError("interval divisor contains zero")
        return self._wrap(libmp.mpi_div((self.lo, self.hi), (other.lo, other.hi), self._prec(other)), other)

    def __rtruediv__(self, other) -> "Interval":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self) -> "Interval":
        return self._wrap(libmp.mpi_neg((self.lo, self.hi)))

    def __abs__(self) -> "Interval":
        return self._wrap(libmp.mpi_abs((self.lo, self.hi)))

    def __pow__(self, exponent: int) -> "Interval":
        if not isinstance(exponent, int):
            return NotImplemented
        return self._wrap(libmp.mpi_pow_int((self.lo, self.hi), exponent, self.precision_bits))

    def sqrt(self) -> "Interval":
        if libmp.mpf_sign(self.hi) < 0:
            raise ValueError("square root of a negative interval")
        lo = self.lo if libmp.mpf_sign(self.lo) >= 0 else libmp.fzero
        return self._wrap(libmp.mpi_sqrt((lo, self.hi), self.precision_bits))

    def log(self) -> "Interval":
        if not self.is_positive():
            raise ValueError("logarithm of an interval that is not positive")
        return self._wrap(libmp.mpi_log((self.lo, self.hi), self.precision_bits))

    def exp(self) -> "Interval":
        return self._wrap(libmp.mpi_exp((self.lo, self.hi), self.precision_bits))

    def contains(self, value: Union[Number, "Interval"]) -> bool:
        if isinstance(value, Interval):
            return libmp.mpf_le(self.lo, value.lo) and libmp.mpf_le(value.hi, self.hi)
        q = Fraction(value)
        return self.lower_fraction() <= q <= self.upper_fraction()

    def contains_zero(self) -> bool:
        return libmp.mpf_sign(self.lo) <= 0 <= libmp.mpf_sign(self.hi)

    def is_zero(self) -> bool:
        return self.lo == libmp.fzero and self.hi == libmp.fzero

    def is_positive(self) -> bool:
        return libmp.mpf_sign(self.lo) > 0

    def is_negative(self) -> bool:
        return libmp.mpf_sign(self.hi) < 0

    def intersects(self, other: "Interval") -> bool:
        return interval_compare(self, other) is Ordering.OVERLAPPING

    def __str__(self) -> str:
        dps = max(17, libmp.prec_to_dps(min(self.precision_bits, 80)))
        return f"[{libmp.to_str(self.lo, dps)}, {libmp.to_str(self.hi, dps)}]"


def interval_compare(a: Interval, b: Interval) -> Ordering:
    """Certified three-valued comparison; equal exact values are OVERLAPPING."""
    if libmp.mpf_lt(a.hi, b.lo):
        return Ordering.LESS
    if libmp.mpf_lt(b.hi, a.lo):
        return Ordering.GREATER
    return Ordering.OVERLAPPING


def certainly_le(a: Interval, b: Interval) -> bool:
    return libmp.mpf_le(a.hi, b.lo)


def certainly_gt(a: Interval, b: Interval) -> bool:
    return libmp.mpf_gt(a.lo, b.hi)


def escalate(
    attempt: Callable[[int], Optional[T]],
    precision_bits: int = DEFAULT_PRECISION_BITS,
    cap: int = PRECISION_CAP_BITS,
    what: str = "computation",
) -> T:
    """Run `attempt` at doubling precisions until it returns something other than None."""
    bits = precision_bits
    while bits <= cap:
        result = attempt(bits)
        if result is not None:
            return result
        logger.debug("%s undecided at %d bits, doubling precision", what, bits)
        bits *= 2
    raise PrecisionExhausted(f"{what} still undecided at the {cap}-bit precision cap")


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

_TERM = re.compile(r"^(?P<coef>\d+(?:/\d+)?)?(?P<star>\*)?(?:(?P<var>[A-Za-z])(?:\^(?P<exp>\d+))?)?$")
_SHAPE = re.compile(r"^[+-]?[^+-]+(?:[+-][^+-]+)*$")


def parse_polynomial(text: str, var: str = "x", rational: bool = False) -> Dict[int, Fraction]:
    """Parse a sum of monomials in `var` into {exponent: coefficient}.

    A coefficient may precede the indeterminate directly ("3x") or with "*"; any other
    juxtaposition is rejected.
    """
    compact = re.sub(r"\s+", "", str(text))
    if not compact or not _SHAPE.match(compact):
        raise ParseError(f"malformed polynomial: {text!r}")
    terms: Dict[int, Fraction] = {}
    for sign, body in re.findall(r"([+-]?)([^+-]+)", compact):
        match = _TERM.match(body)
        if not match or (match.group("coef") is None and match.group("var") is None):
            raise ParseError(f"malformed term {body!r} in {text!r}")
        coef_text, star, symbol, exp_text = match.group("coef", "star", "var", "exp")
        if symbol is not None and symbol != var:
            raise ParseError(f"unexpected indeterminate {symbol!r} in {text!r}; expected {var!r}")
        if star and (coef_text is None or symbol is None):
            raise ParseError(f"dangling '*' in term {body!r}")
        if coef_text and "/" in coef_text and not rational:
            raise ParseError(f"integer coefficients required, got {coef_text!r}")
        coef = Fraction(coef_text) if coef_text else Fraction(1)
        exponent = int(exp_text) if exp_text else (1 if symbol else 0)
        if sign == "-":
            coef = -coef
        terms[exponent] = terms.get(exponent, Fraction(0)) + coef
    return {e: c for e, c in terms.items() if c}


def format_polynomial(ascending: Sequence[Number], var: str) -> str:
    parts: List[str] = []
    for exponent in range(len(ascending) - 1, -1, -1):
        coef = Fraction(ascending[exponent])
        if not coef:
            continue
        magnitude = abs(coef)
        if exponent == 0:
            body = format_rational(magnitude)
        else:
            power = var if exponent == 1 else f"{var}^{exponent}"
            body = power if magnitude == 1 else f"{format_rational(magnitude)}*{power}"
        if not parts:
            parts.append(f"-{body}" if coef < 0 else body)
        else:
            parts.append(f"{'-' if coef < 0 else '+'} {body}")
    return " ".join(parts) if parts else "0"


def _horner(descending: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in descending:
        acc = acc * x + c
    return acc


def _sympy_fraction(value) -> Fraction:
    rational = sympy.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def _to_sympy(values: Iterable[Number]) -> List[sympy.Rational]:
    return [sympy.Rational(Fraction(v).numerator, Fraction(v).denominator) for v in values]


@dataclass(frozen=True)
class MinimalPolynomial:
    """Monic integer polynomial, coefficients in descending order."""

    coefficients: Tuple[int, ...]
    irreducibility_asserted: bool = False
    totally_real: bool = False

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def ascending(self) -> Tuple[int, ...]:
        return tuple(reversed(self.coefficients))

    def poly(self, var: str = "x") -> sympy.Poly:
        return sympy.Poly(list(self.coefficients), sympy.Symbol(var), domain="QQ")

    def __str__(self) -> str:
        return format_polynomial(self.ascending, "x")

    @classmethod
    def parse(cls, text: str, assert_irreducible: bool = False) -> "MinimalPolynomial":
        terms = parse_polynomial(text, "x")
        if not terms:
            raise ParseError(f"zero polynomial: {text!r}")
        degree = max(terms)
        return cls.build([int(terms.get(e, 0)) for e in range(degree, -1, -1)], assert_irreducible)

    @classmethod
    def build(cls, coefficients: Sequence[int], assert_irreducible: bool = False) -> "MinimalPolynomial":
        coeffs = tuple(int(c) for c in coefficients)
        if len(coeffs) < 2:
            raise InputError("minimal polynomial must have positive degree")
        if coeffs[0] != 1:
            raise InputError(f"minimal polynomial must be monic, leading coefficient is {coeffs[0]}")
        if not _squarefree(coeffs):
            raise NotSquarefree(f"{format_polynomial(tuple(reversed(coeffs)), 'x')} is not squarefree")
        degree = len(coeffs) - 1
        if degree <= 3:
            root = _integer_root(coeffs)
            if root is not None and degree > 1:
                raise InputError(f"polynomial has the rational root {root} and is reducible")
        elif not assert_irreducible:
            raise IrreducibilityUnverified(
                f"irreducibility of a degree-{degree} polynomial is not checked; pass the assertion flag"
            )
        candidate = cls(coeffs, assert_irreducible and degree > 3, False)
        totally_real = len(real_roots(candidate, 32)) == degree
        return cls(coeffs, assert_irreducible and degree > 3, totally_real)


def _integer_root(coeffs: Tuple[int, ...]) -> Optional[int]:
    """Rational-root test for a monic integer polynomial: candidates divide the constant term."""
    constant = coeffs[-1]
    if constant == 0:
        return 0
    descending = [Fraction(c) for c in coeffs]
    for divisor in sympy.divisors(abs(constant)):
        for candidate in (divisor, -divisor):
            if _horner(descending, Fraction(candidate)) == 0:
                return candidate
    return None


# ---------------------------------------------------------------------------
# Number-field elements
# ---------------------------------------------------------------------------


def _reduce(ascending: List[Fraction], modulus: Tuple[int, ...]) -> Tuple[Fraction, ...]:
    degree = len(modulus) - 1
    coeffs = list(ascending) + [Fraction(0)] * max(0, degree - len(ascending))
    for k in range(len(coeffs) - 1, degree - 1, -1):
        c = coeffs[k]
        if c:
            for i in range(degree):
                coeffs[k - degree + i] -= c * modulus[i]
    return tuple(coeffs[:degree])


@dataclass(frozen=True)
class NumberFieldElement:
    """Element of Q[t]/(f): `coefficients[k]` multiplies t^k."""

    coefficients: Tuple[Fraction, ...]
    minpoly: MinimalPolynomial

    @classmethod
    def from_coefficients(cls, ascending: Sequence[Number], minpoly: MinimalPolynomial) -> "NumberFieldElement":
        return cls(_reduce([Fraction(c) for c in ascending], minpoly.ascending), minpoly)

    @classmethod
    def from_rational(cls, value: Number, minpoly: MinimalPolynomial) -> "NumberFieldElement":
        return cls.from_coefficients([Fraction(value)], minpoly)

    @classmethod
    def generator(cls, minpoly: MinimalPolynomial) -> "NumberFieldElement":
        return cls.from_coefficients([0, 1], minpoly)

    @classmethod
    def parse(cls, text: Union[str, int, float, Fraction], minpoly: MinimalPolynomial) -> "NumberFieldElement":
        if not isinstance(text, str):
            return cls.from_rational(parse_rational(text), minpoly)
        terms = parse_polynomial(text, "t", rational=True)
        degree = max(terms) if terms else 0
        return cls.from_coefficients([terms.get(e, Fraction(0)) for e in range(degree + 1)], minpoly)

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coefficients[1:])

    def _coerce(self, other) -> "NumberFieldElement":
        if isinstance(other, NumberFieldElement):
            if other.minpoly.coefficients != self.minpoly.coefficients:
                raise ValueError("number-field elements over different minimal polynomials")
            return other
        if isinstance(other, (int, Fraction)):
            return NumberFieldElement.from_rational(other, self.minpoly)
        return NotImplemented

    def __add__(self, other) -> "NumberFieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return NumberFieldElement(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)), self.minpoly)

    __radd__ = __add__

    def __neg__(self) -> "NumberFieldElement":
        return NumberFieldElement(tuple(-a for a in self.coefficients), self.minpoly)

    def __sub__(self, other) -> "NumberFieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "NumberFieldElement":
        return (-self) + other

    def __mul__(self, other) -> "NumberFieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        product = [Fraction(0)] * (2 * len(self.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(other.coefficients):
                    if b:
                        product[i + j] += a * b
        return NumberFieldElement(_reduce(product, self.minpoly.ascending), self.minpoly)

    __rmul__ = __mul__

    def inverse(self) -> "NumberFieldElement":
        if self.is_zero():
            raise ZeroElement("zero has no inverse")
        t = sympy.Symbol("t")
        g = sympy.Poly(list(reversed(_to_sympy(self.coefficients))), t, domain="QQ")
        f = sympy.Poly(list(self.minpoly.coefficients), t, domain="QQ")
        inverse = sympy.invert(g, f)
        return NumberFieldElement.from_coefficients(
            [_sympy_fraction(c) for c in reversed(inverse.all_coeffs())], self.minpoly
        )

    def __truediv__(self, other) -> "NumberFieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "NumberFieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> "NumberFieldElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = NumberFieldElement.from_rational(1, self.minpoly)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def height_bits(self) -> int:
        """Bit size of the largest numerator or denominator, used to size evaluation precision."""
        return max((max(abs(c.numerator), c.denominator).bit_length() for c in self.coefficients), default=0)

    def evaluate(self, root: Interval) -> Interval:
        acc = Interval.exact(0, root.precision_bits)
        for c in reversed(self.coefficients):
            acc = acc * root + c
        return acc

    def multiplication_matrix(self) -> List[List[Fraction]]:
        rows = []
        current = self
        generator = NumberFieldElement.generator(self.minpoly)
        for _ in range(self.minpoly.degree):
            rows.append(list(current.coefficients))
            current = current * generator
        return rows

    def __str__(self) -> str:
        return format_polynomial(self.coefficients, "t")


Scalar = Union[Fraction, NumberFieldElement]


# ---------------------------------------------------------------------------
# Root isolation and norms
# ---------------------------------------------------------------------------


def _sturm_chain(minpoly: MinimalPolynomial) -> Tuple[Tuple[Fraction, ...], ...]:
    return tuple(tuple(_sympy_fraction(c) for c in p.all_coeffs()) for p in sympy.sturm(minpoly.poly()))


def _sign_changes(chain: Sequence[Sequence[Fraction]], x: Fraction) -> int:
    previous = 0
    changes = 0
    for descending in chain:
        value = _horner(descending, x)
        if not value:
            continue
        sign = 1 if value > 0 else -1
        if previous and sign != previous:
            changes += 1
        previous = sign
    return changes


@lru_cache(maxsize=512)
def _isolate(coefficients: Tuple[int, ...], precision_bits: int) -> Tuple[Tuple[Fraction, Fraction], ...]:
    minpoly = MinimalPolynomial(coefficients)
    chain = _sturm_chain(minpoly)
    descending = [Fraction(c) for c in coefficients]
    bound = Fraction(1 + max(abs(c) for c in coefficients[1:]) if len(coefficients) > 1 else 1)
    floor_width = Fraction(1, 2 ** PRECISION_CAP_BITS)
    target = Fraction(1, 2 ** precision_bits)

    def count(a: Fraction, b: Fraction) -> int:
        return _sign_changes(chain, a) - _sign_changes(chain, b)

    isolated: List[Tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        n = count(a, b)
        if n == 0:
            continue
        if n == 1:
            isolated.append((a, b))
            continue
        if b - a < floor_width:
            raise PrecisionExhausted("root isolation did not separate the roots at the precision cap")
        m = (a + b) / 2
        stack.extend([(a, m), (m, b)])

    refined: List[Tuple[Fraction, Fraction]] = []
    for a, b in sorted(isolated):
        while True:
            if _horner(descending, b) == 0:
                a = b
                break
            if b - a <= target:
                break
            m = (a + b) / 2
            if count(a, m) == 1:
                b = m
            else:
                a = m
        refined.append((a, b))

    # neighbouring closed intervals may share an endpoint that is not a root
    for i in range(len(refined) - 1):
        while refined[i][1] >= refined[i + 1][0]:
            j = i if refined[i][0] != refined[i][1] else i + 1
            a, b = refined[j]
            m = (a + b) / 2
            if _horner(descending, m) == 0:
                a = b = m
            elif count(a, m) == 1:
                b = m
            else:
                a = m
            refined[j] = (a, b)
    return tuple(refined)


@lru_cache(maxsize=256)
def _squarefree(coefficients: Tuple[int, ...]) -> bool:
    poly = sympy.Poly(list(coefficients), sympy.Symbol("x"), domain="QQ")
    return sympy.gcd(poly, poly.diff()).degree() == 0


def real_roots(p: MinimalPolynomial, precision_bits: int) -> List[Interval]:
    """Certified enclosures of the real roots of `p`, ascending, each of radius <= 2^-precision_bits."""
    if precision_bits > PRECISION_CAP_BITS:
        raise PrecisionExhausted(f"{precision_bits} bits exceeds the {PRECISION_CAP_BITS}-bit cap")
    if not _squarefree(p.coefficients):
        raise NotSquarefree(f"{p} is not squarefree")
    slack = max(abs(c) for c in p.coefficients).bit_length() + 16
    return [Interval.from_bounds(a, b, precision_bits + slack) for a, b in _isolate(p.coefficients, precision_bits)]


def embedding_root(p: MinimalPolynomial, index: int, precision_bits: int) -> Interval:
    roots = real_roots(p, precision_bits)
    if index < 0:
        index += len(roots)
    if not 0 <= index < len(roots):
        raise InputError(f"embedding index {index} out of range: {p} has {len(roots)} real roots")
    return roots[index]


def evaluate_scalar(value: Scalar, minpoly: Optional[MinimalPolynomial], root_index: Optional[int],
                    precision_bits: int) -> Interval:
    """Enclose a rational or a real embedding of a number-field element."""
    if isinstance(value, NumberFieldElement):
        if value.is_rational():
            return Interval.exact(value.coefficients[0], precision_bits)
        bits = precision_bits + value.height_bits() + 8 * value.minpoly.degree
        root = embedding_root(value.minpoly, root_index if root_index is not None else -1, bits)
        return value.evaluate(root).with_precision(precision_bits)
    return Interval.exact(value, precision_bits)


def nf_norm(e: NumberFieldElement) -> Fraction:
    """Field norm, i.e. the product of all embeddings, computed as det of multiplication by e."""
    if e.is_zero():
        raise ZeroElement("the norm of zero is undefined")
    return linalg.det(e.multiplication_matrix())
