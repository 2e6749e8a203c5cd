"""The Lattice type and its structural operations.

A lattice is stored by its row basis: the point with basis coordinates u is u . basis. Entries
are kept exactly (Fractions, or number-field elements for the numberfield kind); interval
enclosures are derived on demand and cached per precision.
"""

import enum
import itertools
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from fpylll import LLL, IntegerMatrix

from . import linalg
from .arith import (
    DEFAULT_PRECISION_BITS,
    PRECISION_CAP_BITS,
    Interval,
    MinimalPolynomial,
    NumberFieldElement,
    Scalar,
    embedding_root,
    escalate,
    parse_rational,
)
from .errors import (
    AxisPointPresent,
    DimensionMismatch,
    InputError,
    PrecisionExhausted,
    SingularBasis,
    SingularMinor,
    UnsupportedScalarKind,
)

logger = logging.getLogger(__name__)

LOVASZ_DELTA = 0.99


class ScalarKind(str, enum.Enum):
    RATIONAL = "rational"
    NUMBERFIELD = "numberfield"
    FLOAT = "float"


@dataclass(frozen=True)
class LatticePoint:
    """A lattice vector: ambient coordinates `coords` equal to u . basis."""

    u: Tuple[int, ...]
    coords: Tuple[Scalar, ...]

    def is_zero(self) -> bool:
        return not any(self.u)


@dataclass(frozen=True)
class Lattice:
    basis: Tuple[Tuple[Scalar, ...], ...]
    scalar_kind: ScalarKind
    det_abs: Interval
    minpoly: Optional[MinimalPolynomial] = None
    embeddings: Optional[Tuple[int, ...]] = None
    transform: Optional[Tuple[Tuple[int, ...], ...]] = None
    _cache: Dict[Any, Any] = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def uniform_embedding(self) -> bool:
        return self.embeddings is None or len(set(self.embeddings)) <= 1

    @property
    def conjugate_layout(self) -> bool:
        """Each row repeats one field element and the coordinates run through every real embedding."""
        if self.scalar_kind is not ScalarKind.NUMBERFIELD or self.embeddings is None:
            return False
        if sorted(self.embeddings) != list(range(self.minpoly.degree)) or self.minpoly.degree != self.dim:
            return False
        return all(len(set(row)) == 1 for row in self.basis)

    def coordinate_interval(self, value: Scalar, coordinate: int, bits: int) -> Interval:
        if isinstance(value, NumberFieldElement) and not value.is_rational():
            index = self.embeddings[coordinate] if self.embeddings else self.minpoly.degree - 1
            extra = value.height_bits() + 8 * self.minpoly.degree
            root = embedding_root(self.minpoly, index, bits + extra)
            return value.evaluate(root).with_precision(bits)
        if isinstance(value, NumberFieldElement):
            return Interval.exact(value.coefficients[0], bits)
        return Interval.exact(value, bits)

    def interval_basis(self, bits: int = DEFAULT_PRECISION_BITS) -> List[List[Interval]]:
        key = ("intervals", bits)
        if key not in self._cache:
            self._cache[key] = [
                [self.coordinate_interval(x, i, bits) for i, x in enumerate(row)] for row in self.basis
            ]
        return self._cache[key]

    def float_basis(self) -> np.ndarray:
        if "floats" not in self._cache:
            if self.scalar_kind is ScalarKind.NUMBERFIELD:
                rows = [[x.approx() for x in row] for row in self.interval_basis()]
            else:
                rows = [[float(x) for x in row] for row in self.basis]
            self._cache["floats"] = np.array(rows, dtype=float)
        return self._cache["floats"]

    def exact_point(self, u: Sequence[int]) -> Tuple[Scalar, ...]:
        coords = []
        for i in range(self.dim):
            acc: Any = Fraction(0)
            for j, k in enumerate(u):
                if k:
                    acc = acc + k * self.basis[j][i]
            coords.append(acc)
        return tuple(coords)

    def point(self, u: Sequence[int]) -> LatticePoint:
        u = tuple(int(k) for k in u)
        return LatticePoint(u, self.exact_point(u))

    def point_intervals(self, u: Sequence[int], bits: int = DEFAULT_PRECISION_BITS) -> List[Interval]:
        if self.scalar_kind is not ScalarKind.NUMBERFIELD:
            return [Interval.exact(x, bits) for x in self.exact_point(u)]
        rows = self.interval_basis(bits)
        out = []
        for i in range(self.dim):
            acc = Interval.exact(0, bits)
            for j, k in enumerate(u):
                if k:
                    acc = acc + rows[j][i] * k
            out.append(acc)
        return out

    def gram_intervals(self, bits: int = DEFAULT_PRECISION_BITS) -> List[List[Interval]]:
        rows = self.interval_basis(bits)
        return [[_dot(a, b, bits) for b in rows] for a in rows]

    def det_interval(self, bits: int = DEFAULT_PRECISION_BITS) -> Interval:
        if bits <= self.det_abs.precision_bits:
            return self.det_abs
        return abs(linalg.det_by_minors(self.interval_basis(bits)))

    def transformed(self, unimodular: Sequence[Sequence[int]]) -> "Lattice":
        """Same lattice, new basis unimodular . basis; the recorded transform is composed."""
        rows = linalg.mat_mul(unimodular, self.basis)
        zero = self.basis[0][0] - self.basis[0][0]
        rows = tuple(tuple(x if not isinstance(x, int) else zero + x for x in row) for row in rows)
        previous = self.transform or tuple(tuple(r) for r in linalg.identity(self.dim))
        composed = tuple(tuple(int(x) for x in row) for row in linalg.mat_mul(unimodular, previous))
        return Lattice(rows, self.scalar_kind, self.det_abs, self.minpoly, self.embeddings, composed)

    def scaled(self, factors: Sequence[Any]) -> "Lattice":
        """Image under the diagonal map with positive rational entries `factors`."""
        factors = [parse_rational(f) for f in factors]
        if len(factors) != self.dim:
            raise DimensionMismatch(f"{len(factors)} scale factors for a {self.dim}-dimensional lattice")
        if any(f <= 0 for f in factors):
            raise InputError("diagonal scale factors must be positive")
        rows = tuple(tuple(x * f for x, f in zip(row, factors)) for row in self.basis)
        scale = Fraction(1)
        for f in factors:
            scale *= f
        return Lattice(rows, self.scalar_kind, self.det_abs * scale, self.minpoly, self.embeddings, self.transform)

    def permuted(self, order: Sequence[int]) -> "Lattice":
        """Coordinates reordered so that new coordinate k is old coordinate order[k]."""
        if sorted(order) != list(range(self.dim)):
            raise InputError(f"{tuple(order)} is not a permutation of the coordinates")
        rows = tuple(tuple(row[k] for k in order) for row in self.basis)
        embeddings = tuple(self.embeddings[k] for k in order) if self.embeddings else None
        return Lattice(rows, self.scalar_kind, self.det_abs, self.minpoly, embeddings, self.transform)


def _dot(a: Sequence[Interval], b: Sequence[Interval], bits: int) -> Interval:
    acc = Interval.exact(0, bits)
    for x, y in zip(a, b):
        acc = acc + x * y
    return acc


def _parse_entry(entry: Any, kind: ScalarKind, minpoly: Optional[MinimalPolynomial]) -> Scalar:
    if kind is ScalarKind.NUMBERFIELD:
        if isinstance(entry, NumberFieldElement):
            return entry
        return NumberFieldElement.parse(entry, minpoly)
    if isinstance(entry, NumberFieldElement):
        raise InputError(f"number-field entry {entry} in a {kind.value} lattice")
    return parse_rational(entry)


def lattice_from_basis(
    rows: Sequence[Sequence[Any]],
    kind: Any = ScalarKind.RATIONAL,
    minpoly: Optional[MinimalPolynomial] = None,
    embeddings: Optional[Sequence[int]] = None,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> Lattice:
    """Build a full-rank lattice, certifying that the basis determinant is nonzero."""
    kind = ScalarKind(kind)
    d = len(rows)
    if d == 0 or any(len(row) != d for row in rows):
        raise DimensionMismatch(f"basis must be a nonempty square matrix, got {d} rows of lengths "
                                f"{[len(row) for row in rows]}")
    if kind is ScalarKind.NUMBERFIELD:
        if minpoly is None:
            raise InputError("a numberfield lattice needs a minimal polynomial")
        if embeddings is None:
            embeddings = (minpoly.degree - 1,) * d
        embeddings = tuple(e + minpoly.degree if e < 0 else e for e in embeddings)
        if len(embeddings) != d:
            raise DimensionMismatch(f"{len(embeddings)} embeddings for a {d}-dimensional lattice")
        if any(not 0 <= e < minpoly.degree for e in embeddings):
            raise InputError(f"embedding indices {embeddings} out of range for degree {minpoly.degree}")
    else:
        minpoly, embeddings = None, None
    basis = tuple(tuple(_parse_entry(x, kind, minpoly) for x in row) for row in rows)
    draft = Lattice(basis, kind, Interval.exact(0), minpoly, embeddings)
    det_abs = _certified_det(draft, precision_bits)
    logger.debug("built %s lattice of dimension %d with |det| in %s", kind.value, d, det_abs)
    return Lattice(basis, kind, det_abs, minpoly, embeddings)


def _certified_det(draft: Lattice, precision_bits: int) -> Interval:
    if draft.scalar_kind is not ScalarKind.NUMBERFIELD:
        value = linalg.det(draft.basis)
        if value == 0:
            raise SingularBasis("basis rows are linearly dependent")
        return Interval.exact(abs(value), precision_bits)
    if draft.uniform_embedding:
        value = linalg.det(draft.basis)
        if not value:
            raise SingularBasis("basis rows are linearly dependent")

        def exact_attempt(bits: int) -> Optional[Interval]:
            enclosure = abs(draft.coordinate_interval(value, 0, bits))
            return None if enclosure.contains_zero() else enclosure

        return escalate(exact_attempt, precision_bits, what="determinant enclosure")

    def attempt(bits: int) -> Optional[Interval]:
        enclosure = abs(linalg.det_by_minors(draft.interval_basis(bits)))
        return None if enclosure.contains_zero() else enclosure

    try:
        return escalate(attempt, precision_bits, what="determinant enclosure")
    except PrecisionExhausted as exc:
        raise SingularBasis("determinant enclosure contains zero at the precision cap") from exc


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------


SCALE_BITS = 48


def integer_scaled(rows: Sequence[Sequence[Any]], scale_bits: int = SCALE_BITS) -> Tuple[List[List[int]], int]:
    """Rows multiplied by 2^e and rounded, with e chosen so the largest entry has about `scale_bits` bits."""
    exact = [[Fraction(x) for x in row] for row in rows]
    largest = max((abs(x) for row in exact for x in row), default=Fraction(0))
    if not largest:
        return [[0] * len(row) for row in exact], 0
    exponent = scale_bits - (largest.numerator.bit_length() - largest.denominator.bit_length())
    factor = Fraction(2) ** exponent
    return [[round(x * factor) for x in row] for row in exact], exponent


def integer_rows(matrix: IntegerMatrix) -> List[List[int]]:
    out = [[0] * matrix.ncols for _ in range(matrix.nrows)]
    matrix.to_matrix(out)
    return out


def lll_integer(rows: Sequence[Sequence[int]], delta: float = LOVASZ_DELTA) -> Tuple[List[List[int]], List[List[int]]]:
    """fpylll LLL on integer rows. Returns the reduced rows and the unimodular U with reduced = U . rows."""
    n = len(rows)
    if n < 2:
        return [list(row) for row in rows], linalg.identity(n)
    basis = IntegerMatrix.from_matrix([list(row) for row in rows])
    transform = IntegerMatrix.identity(n)
    LLL.reduction(basis, transform, delta=delta)
    return integer_rows(basis), integer_rows(transform)


def lll_reduce(rows: Sequence[Sequence[Any]], delta: float = LOVASZ_DELTA) -> Tuple[List[List[int]], List[List[int]]]:
    """`lll_integer` on the rows rounded by `integer_scaled`; U satisfies reduced = U . rounded rows."""
    rounded, _ = integer_scaled(rows)
    return lll_integer(rounded, delta)


def reduce_basis(lattice: Lattice, delta: float = LOVASZ_DELTA, passes: int = 4) -> Lattice:
    """Lovasz-reduce the basis on interval midpoints; the point set and det_abs are unchanged."""
    current = lattice
    for _ in range(passes):
        floats = current.float_basis()
        if not np.all(np.isfinite(floats)):
            raise PrecisionExhausted("basis entries overflow double precision")
        _, u = lll_reduce(floats, delta)
        if u == linalg.identity(lattice.dim):
            break
        current = current.transformed(u)
    if current.transform is None:
        current = replace(current, transform=tuple(tuple(r) for r in linalg.identity(lattice.dim)))
    return current


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Subspace:
    """span of generators . basis; generators is a primitive integer basis of the sublattice."""

    ambient_dim: int
    rank: int
    basis: Tuple[Tuple[Scalar, ...], ...]
    generators: Tuple[Tuple[int, ...], ...]
    lattice: Lattice = field(compare=False, repr=False)

    def interval_basis(self, bits: int = DEFAULT_PRECISION_BITS) -> List[List[Interval]]:
        return [self.lattice.point_intervals(u, bits) for u in self.generators]


def _axis_coefficients(lattice: Lattice) -> List[List[Fraction]]:
    """Rational vectors r_k with e_1 = sum_k theta^k (r_k . basis)."""
    e1 = [1] + [0] * (lattice.dim - 1)
    c = linalg.solve_left(lattice.basis, e1)
    if lattice.scalar_kind is ScalarKind.RATIONAL:
        return [[Fraction(x) for x in c]]
    degree = lattice.minpoly.degree
    vectors = []
    for k in range(degree):
        vectors.append([x.coefficients[k] if isinstance(x, NumberFieldElement) else Fraction(x if k == 0 else 0)
                        for x in c])
    return [v for v in vectors if any(v)]


def minimal_rational_subspace(lattice: Lattice) -> Tuple[int, Subspace, List[List[int]]]:
    """Smallest subspace spanned by lattice vectors that contains the first coordinate axis.

    Raises AxisPointPresent when the axis itself holds a nonzero lattice point (p = 1).
    """
    if lattice.scalar_kind is ScalarKind.FLOAT:
        raise UnsupportedScalarKind("rational subspaces are not computed for float lattices")
    d = lattice.dim
    if lattice.conjugate_layout:
        # coefficients of e_1 are one embedding of the trace-dual basis, hence Q-independent
        generators = linalg.identity(d)
    elif lattice.scalar_kind is ScalarKind.NUMBERFIELD and not lattice.uniform_embedding:
        raise UnsupportedScalarKind("mixed embeddings are supported only for conjugate-layout lattices")
    else:
        generators = linalg.saturate(_axis_coefficients(lattice))
    p = len(generators)
    if p == 1:
        u = generators[0]
        raise AxisPointPresent(u, lattice.exact_point(u))
    basis = tuple(lattice.exact_point(u) for u in generators)
    subspace = Subspace(d, p, basis, tuple(tuple(u) for u in generators), lattice)
    logger.debug("minimal rational subspace has rank %d of %d", p, d)
    return p, subspace, [list(u) for u in generators]


def _exact_minor(subspace: Subspace, coords: Sequence[int]) -> Optional[Scalar]:
    if not subspace.lattice.uniform_embedding:
        return None
    return linalg.det([[row[c] for c in coords] for row in subspace.basis])


def _larger_minor(subspace: Subspace, first: Tuple[int, ...], second: Tuple[int, ...], bits: int, cap: int) -> bool:
    """|minor on first| > |minor on second|, refining the enclosures until they separate."""
    exact_first, exact_second = _exact_minor(subspace, first), _exact_minor(subspace, second)
    if exact_first is not None and exact_second is not None and exact_first in (exact_second, -exact_second):
        return False

    def attempt(b: int) -> Optional[bool]:
        rows = subspace.interval_basis(b)
        a = abs(linalg.det_by_minors([[row[c] for c in first] for row in rows]))
        z = abs(linalg.det_by_minors([[row[c] for c in second] for row in rows]))
        if a.lower_fraction() > z.upper_fraction():
            return True
        if a.upper_fraction() < z.lower_fraction():
            return False
        return None

    return escalate(attempt, bits, cap, what=f"comparison of the minors on {first} and {second}")


def best_coordinate_subset(subspace: Subspace, bits: int = DEFAULT_PRECISION_BITS,
                           cap: int = PRECISION_CAP_BITS) -> Tuple[int, ...]:
    """Coordinate subset containing 0 with the largest |p x p minor|, earliest subset on ties.

    Minors that are exactly equal in absolute value tie; otherwise overlapping enclosures are
    refined up to `cap` bits, beyond which PrecisionExhausted is raised.
    """
    p, d = subspace.rank, subspace.ambient_dim
    subsets = [(0,) + rest for rest in itertools.combinations(range(1, d), p - 1)]
    best = subsets[0]
    for coords in subsets[1:]:
        if _larger_minor(subspace, coords, best, bits, cap):
            best = coords
    return best


def project_sublattice(lattice: Lattice, sub_basis: Sequence[Sequence[int]], coords: Sequence[int]) -> Lattice:
    """Rank-p lattice of Lambda cap L read in the chosen coordinates."""
    coords = tuple(coords)
    if len(coords) != len(sub_basis):
        raise DimensionMismatch(f"{len(coords)} coordinates for a rank-{len(sub_basis)} sublattice")
    points = [lattice.exact_point(u) for u in sub_basis]
    rows = [[pt[c] for c in coords] for pt in points]
    embeddings = tuple(lattice.embeddings[c] for c in coords) if lattice.embeddings else None
    try:
        return lattice_from_basis(rows, lattice.scalar_kind, lattice.minpoly, embeddings)
    except SingularBasis as exc:
        raise SingularMinor(f"minor on coordinates {coords} vanishes") from exc


def distance_to_subspace_lattice(lattice: Lattice, subspace: Subspace,
                                 precision_bits: int = DEFAULT_PRECISION_BITS,
                                 cap: int = PRECISION_CAP_BITS) -> Interval:
    """Euclidean distance from the subspace to the nearest lattice point off it.

    Equals the first minimum of the projection of the lattice onto the orthogonal complement,
    computed from the Schur complement of the Gram matrix in a basis adapted to the sublattice.
    """
    from .enumeration import shortest_from_gram

    p, d = subspace.rank, subspace.ambient_dim
    if p >= d:
        raise InputError("the subspace is the whole space; no lattice point lies off it")
    completed = linalg.complete_to_unimodular(subspace.generators)
    adapted = lattice.transformed(completed)

    def attempt(bits: int) -> Optional[Interval]:
        gram = adapted.gram_intervals(bits)
        g11 = [row[:p] for row in gram[:p]]
        try:
            solved = [linalg.solve(g11, [gram[i][j] for i in range(p)]) for j in range(p, d)]
        except ZeroDivisionError:
            return None
        schur = [
            [gram[i][j] - _dot([gram[i][k] for k in range(p)], solved[j - p], bits) for j in range(p, d)]
            for i in range(p, d)
        ]
        length, _ = shortest_from_gram(schur, bits)
        return None if length.contains_zero() else length

    return escalate(attempt, precision_bits, cap, what="distance to the subspace lattice")
