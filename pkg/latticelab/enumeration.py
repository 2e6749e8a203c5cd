"""Certified lattice-point enumeration in weighted boxes.

Candidates come from fpylll: the generators are rescaled so the box becomes {|y_i| <= 1}, rounded to
an integer basis at 2^e, LLL-reduced and enumerated in the ball of radius sqrt(k) around the box.
That ball is widened by an a-posteriori bound on the rounding error against the conditioning of the
rounded basis, so no lattice point of the box can be missed; when conditioning leaves no usable
bound the box is Undecided. Every candidate is then decided exactly (rational kinds) or with
outward-rounded intervals (number-field kinds).
"""

import enum
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from fpylll import Enumeration, EnumerationError, EvaluatorStrategy, IntegerMatrix
from fpylll.fplll.gso import MatGSO

from . import linalg
from .arith import DEFAULT_PRECISION_BITS, PRECISION_CAP_BITS, Interval, NumberFieldElement, escalate
from .boxes import Weights
from .errors import BudgetExceeded, DimensionMismatch, InputError, PrecisionExhausted, SearchBudgetExceeded
from .lattice_core import SCALE_BITS, Lattice, LatticePoint, ScalarKind, integer_scaled, lll_integer, lll_reduce

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnumerationConfig:
    precision_bits: int = DEFAULT_PRECISION_BITS
    precision_cap: int = PRECISION_CAP_BITS
    # relative widening of the enumeration bound against fpylll floating-point rounding
    radius_slack: float = 2.0 ** -30
    # half-width standing in for zero weights on float lattices
    float_zero_margin: Fraction = Fraction(1, 2 ** 30)
    # solutions requested from the enumerator; reaching the count raises SearchBudgetExceeded
    node_budget: int = 5_000_000
    brute_force_budget: int = 10 ** 7
    # relative widening of the dilation used to collect minima candidates
    bisection_width: Fraction = Fraction(1, 2 ** 20)


DEFAULT_CONFIG = EnumerationConfig()


class Verdict(str, enum.Enum):
    CERTIFIED_EMPTY = "CertifiedEmpty"
    INHABITED = "Inhabited"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class EmptinessCertificate:
    box: Weights
    verdict: Verdict
    enumeration_bound: int
    margin: float
    witness: Optional[LatticePoint] = None
    precision_bits: int = DEFAULT_PRECISION_BITS


@dataclass(frozen=True)
class BoxEnumeration:
    points: Tuple[LatticePoint, ...]
    certificate: EmptinessCertificate
    undecided: Tuple[Tuple[int, ...], ...] = ()

    @property
    def verdict(self) -> Verdict:
        return self.certificate.verdict


@dataclass(frozen=True)
class MinimaResult:
    """Successive minima mu_1 <= ... <= mu_k of P(box) with linearly independent witnesses.

    `mu_points` holds a rational inside each mu interval (the exact value for rational kinds).
    """

    mu: Tuple[Interval, ...]
    witnesses: Tuple[LatticePoint, ...]
    box: Weights
    mu_points: Tuple[Fraction, ...]
    exact: bool = False

    @property
    def margins(self) -> Tuple[float, ...]:
        return tuple(float(m.radius) for m in self.mu)

    def product(self) -> Interval:
        acc = Interval.exact(1, self.mu[0].precision_bits)
        for m in self.mu:
            acc = acc * m
        return acc

    def minkowski_terms(self, det: Interval) -> Tuple[Interval, Interval, Interval]:
        """(2^k/k!) det, prod(mu) vol(P), 2^k det."""
        k = len(self.mu)
        volume = Fraction(1)
        for i in self.box.active:
            volume *= 2 * self.box.values[i]
        if self.exact and det.lower_fraction() == det.upper_fraction():
            det_q = det.lower_fraction()
            product = Fraction(1)
            for m in self.mu_points:
                product *= m
            bits = det.precision_bits
            return (Interval.exact(Fraction(2 ** k, math.factorial(k)) * det_q, bits),
                    Interval.exact(product * volume, bits),
                    Interval.exact(2 ** k * det_q, bits))
        return (det * Fraction(2 ** k, math.factorial(k)), self.product() * volume, det * 2 ** k)

    def minkowski_violation(self, det: Interval) -> Optional[str]:
        lower, middle, upper = self.minkowski_terms(det)
        if middle.upper_fraction() < lower.lower_fraction():
            return f"prod(mu) vol = {middle} below (2^k/k!) det = {lower}"
        if middle.lower_fraction() > upper.upper_fraction():
            return f"prod(mu) vol = {middle} above 2^k det = {upper}"
        return None


# ---------------------------------------------------------------------------
# Search core
# ---------------------------------------------------------------------------

# integer scalings tried for the rescaled basis before a box is left undecided
MAX_SCALE_BITS = 384
# largest accepted product of the rounding error and the inverse bound
CONDITIONING_LIMIT = Fraction(1, 2)


def _sqrt_upper(x: Fraction, bits: int = 64) -> Fraction:
    """A dyadic rational s >= sqrt(x)."""
    return Fraction(math.isqrt(math.ceil(x * 4 ** bits)) + 1, 2 ** bits)


@dataclass(frozen=True)
class ScaledBasis:
    """Box-rescaled generators multiplied by 2^exponent and rounded to integers.

    With S the exact rescaled rows, `error2` bounds the squared Frobenius norm of 2^exponent S - rows,
    and `inverse2` bounds the squared norm of the pseudo-inverse of rows by trace((rows rows^T)^-1).
    """

    rows: Tuple[Tuple[int, ...], ...]
    exponent: int
    error2: Fraction
    inverse2: Fraction

    def inflation(self) -> Optional[Fraction]:
        """f such that |a . S| <= r implies |a . rows| <= f 2^exponent r, or None if the basis is too
        ill-conditioned at this scale."""
        q = _sqrt_upper(self.error2 * self.inverse2)
        if q >= CONDITIONING_LIMIT:
            return None
        return 1 / (1 - q)


def _rescaled_entries(lattice: Lattice, generators: Sequence[Sequence[int]], columns: Sequence[int],
                      radii: Sequence[Fraction], bits: int) -> List[List[Tuple[Fraction, Fraction]]]:
    """(midpoint, radius) of z_i(g) / radii[i] for each generator g and column i."""
    rows = []
    for u in generators:
        if lattice.scalar_kind is ScalarKind.NUMBERFIELD:
            values = lattice.point_intervals(u, bits)
            row = []
            for i in columns:
                lo = values[i].lower_fraction() / radii[i]
                hi = values[i].upper_fraction() / radii[i]
                row.append(((lo + hi) / 2, (hi - lo) / 2))
        else:
            point = lattice.exact_point(u)
            row = [(Fraction(point[i]) / radii[i], Fraction(0)) for i in columns]
        rows.append(row)
    return rows


def scaled_basis(entries: Sequence[Sequence[Tuple[Fraction, Fraction]]], scale_bits: int = SCALE_BITS
                 ) -> Optional[ScaledBasis]:
    rows, exponent = integer_scaled([[mid for mid, _ in row] for row in entries], scale_bits)
    factor = Fraction(2) ** exponent
    error2 = sum((Fraction(1, 2) + rad * factor) ** 2 for row in entries for _, rad in row)
    try:
        inverse = linalg.inverse(linalg.mat_mul(rows, linalg.transpose(rows)))
    except ZeroDivisionError:
        return None
    inverse2 = sum(inverse[i][i] for i in range(len(rows)))
    return ScaledBasis(tuple(tuple(row) for row in rows), exponent, Fraction(error2), inverse2)


def short_vectors(rows: Sequence[Sequence[int]], bound: Fraction, slack: float, cap: int) -> List[Tuple[int, ...]]:
    """Every nonzero a with |a . rows|^2 <= bound, both signs, sorted.

    fpylll enumerates in floating point over the integer basis; `slack` widens the bound against
    its rounding and `cap` is the number of solutions requested, reaching it raises.
    """
    basis = IntegerMatrix.from_matrix([list(row) for row in rows])
    gso = MatGSO(basis)
    gso.update_gso()
    enumeration = Enumeration(gso, nr_solutions=cap, strategy=EvaluatorStrategy.BEST_N_SOLUTIONS)
    try:
        solutions = enumeration.enumerate(0, basis.nrows, float(bound) * (1.0 + slack), 0)
    except EnumerationError:
        return []
    if len(solutions) >= cap:
        raise SearchBudgetExceeded(f"enumeration reached the cap of {cap} solutions")
    found = set()
    for _, coefficients in solutions:
        a = tuple(int(round(x)) for x in coefficients)
        found.add(a)
        found.add(tuple(-x for x in a))
    found.discard((0,) * len(rows))
    return sorted(found)


def _restricted_generators(lattice: Lattice, degenerate: Sequence[int]) -> List[List[int]]:
    """Integer basis of {u : z_i(u) = 0 for every i in `degenerate`}."""
    if not degenerate:
        return linalg.identity(lattice.dim)
    key = ("kernel", tuple(degenerate))
    if key not in lattice._cache:
        columns = []
        for i in degenerate:
            if lattice.scalar_kind is ScalarKind.NUMBERFIELD:
                for k in range(lattice.minpoly.degree):
                    columns.append([_coefficient(row[i], k) for row in lattice.basis])
            else:
                columns.append([Fraction(row[i]) for row in lattice.basis])
        lattice._cache[key] = linalg.integer_kernel(linalg.transpose(columns))
    return [list(u) for u in lattice._cache[key]]


def _coefficient(value, k: int) -> Fraction:
    if isinstance(value, NumberFieldElement):
        return value.coefficients[k]
    return Fraction(value) if k == 0 else Fraction(0)


def _reduced_generators(lattice: Lattice, generators: List[List[int]], columns: Sequence[int],
                        radii: Sequence[Fraction]) -> List[List[int]]:
    entries = _rescaled_entries(lattice, generators, columns, radii, DEFAULT_PRECISION_BITS)
    _, u = lll_reduce([[mid for mid, _ in row] for row in entries])
    return [[int(x) for x in row] for row in linalg.mat_mul(u, generators)]


def _box_candidates(lattice: Lattice, generators: List[List[int]], columns: Sequence[int],
                    radii: Sequence[Fraction], config: EnumerationConfig
                    ) -> Tuple[List[Tuple[int, ...]], Optional[Fraction]]:
    """Every a with |a . S|^2 <= len(columns), as coefficients of `generators`, and the inflation used.

    The box {|y_i| <= 1} lies in that ball. The rounded basis is LLL-reduced and enumerated in a
    ball widened by the a-posteriori inflation; when no scale up to MAX_SCALE_BITS brings the
    inflation under control the inflation is None and no candidates are returned.
    """
    scale_bits = SCALE_BITS
    while scale_bits <= MAX_SCALE_BITS:
        bits = min(config.precision_cap, max(config.precision_bits, scale_bits + 64))
        basis = scaled_basis(_rescaled_entries(lattice, generators, columns, radii, bits), scale_bits)
        inflation = basis.inflation() if basis is not None else None
        if inflation is not None:
            reduced, u = lll_integer(basis.rows)
            bound = len(columns) * Fraction(4) ** basis.exponent * inflation ** 2
            found = short_vectors(reduced, bound, config.radius_slack, config.node_budget)
            return sorted(tuple(linalg.vec_mat(a, u)) for a in found), inflation
        logger.debug("rescaled basis too ill-conditioned at %d bits, doubling the scale", scale_bits)
        scale_bits *= 2
    return [], None


def _classify(lattice: Lattice, u: Sequence[int], w: Weights, config: EnumerationConfig,
              relaxed: bool = False) -> Optional[bool]:
    """True if u . basis lies in the closed box, False if not, None if undecided at the cap."""
    if lattice.scalar_kind is not ScalarKind.NUMBERFIELD:
        point = lattice.exact_point(u)
        for i, bound in enumerate(w.values):
            z = abs(Fraction(point[i]))
            if bound > 0:
                if z > bound:
                    return False
            elif z != 0:
                if relaxed and z <= config.float_zero_margin:
                    return None
                return False
        return True
    bits = config.precision_bits
    exact_point = None
    while bits <= config.precision_cap:
        values = lattice.point_intervals(u, bits)
        decided = True
        for i, bound in enumerate(w.values):
            z = abs(values[i])
            if z.lower_fraction() > bound:
                return False
            if z.upper_fraction() > bound:
                if exact_point is None:
                    exact_point = lattice.exact_point(u)
                entry = exact_point[i]
                if not isinstance(entry, NumberFieldElement) or entry.is_rational():
                    rational = entry.coefficients[0] if isinstance(entry, NumberFieldElement) else entry
                    if abs(Fraction(rational)) > bound:
                        return False
                    continue
                decided = False
        if decided:
            return True
        bits *= 2
    return None


def _search(lattice: Lattice, w: Weights, config: EnumerationConfig, nonzero_only: bool,
            first_only: bool) -> BoxEnumeration:
    d = lattice.dim
    if w.dim != d:
        raise DimensionMismatch(f"{w.dim} weights for a {d}-dimensional lattice")
    relaxed = lattice.scalar_kind is ScalarKind.FLOAT and bool(w.degenerate)
    if relaxed:
        radii = [v if v > 0 else config.float_zero_margin for v in w.values]
        generators = linalg.identity(d)
        columns = list(range(d))
    else:
        radii = list(w.values)
        generators = _restricted_generators(lattice, w.degenerate)
        columns = list(w.active)
    margin = config.radius_slack
    conditioned = True
    inside: List[LatticePoint] = []
    undecided: List[Tuple[int, ...]] = []
    examined = 0
    if generators:
        candidates, inflation = _box_candidates(lattice, generators, columns, radii, config)
        if inflation is None:
            conditioned = False
        else:
            margin = float(inflation ** 2 - 1) + config.radius_slack
        if not nonzero_only:
            candidates = [(0,) * len(generators)] + candidates
        for a in candidates:
            examined += 1
            u = tuple(int(x) for x in linalg.vec_mat(a, generators)) if any(a) else (0,) * d
            status = _classify(lattice, u, w, config, relaxed)
            if status is None:
                undecided.append(u)
            elif status:
                inside.append(lattice.point(u))
                if first_only and any(u):
                    break
    elif not nonzero_only:
        inside.append(lattice.point((0,) * d))
    inside.sort(key=lambda p: p.u)
    nonzero = [p for p in inside if not p.is_zero()]
    if nonzero:
        verdict = Verdict.INHABITED
    elif undecided:
        verdict = Verdict.UNDECIDED
        logger.warning("box %s undecided at %d bits for %d candidates", w, config.precision_cap, len(undecided))
    elif not conditioned:
        verdict = Verdict.UNDECIDED
        logger.warning("box %s undecided: rescaled basis too ill-conditioned up to %d bits", w, MAX_SCALE_BITS)
    else:
        verdict = Verdict.CERTIFIED_EMPTY
    certificate = EmptinessCertificate(w, verdict, examined, margin, nonzero[0] if nonzero else None,
                                       config.precision_bits)
    logger.debug("box %s: %d candidates, %d inside, verdict %s", w, examined, len(inside), verdict.value)
    return BoxEnumeration(tuple(inside), certificate, tuple(sorted(undecided)))


def enumerate_box(lattice: Lattice, w: Weights, nonzero_only: bool = True,
                  config: EnumerationConfig = DEFAULT_CONFIG) -> BoxEnumeration:
    """All lattice points in P(w), sorted by basis coordinates, with an emptiness verdict."""
    return _search(lattice, w, config, nonzero_only, first_only=False)


def is_empty(lattice: Lattice, w: Weights, config: EnumerationConfig = DEFAULT_CONFIG) -> EmptinessCertificate:
    """Emptiness certificate for P(w); stops at the first nonzero inhabitant."""
    return _search(lattice, w, config, nonzero_only=True, first_only=True).certificate


def verify_certificate(lattice: Lattice, certificate: EmptinessCertificate,
                       config: EnumerationConfig = DEFAULT_CONFIG) -> bool:
    """Replay a certificate: empty boxes are re-enumerated, witnesses are re-checked."""
    if certificate.verdict is Verdict.INHABITED:
        if certificate.witness is None or certificate.witness.is_zero():
            return False
        return _classify(lattice, certificate.witness.u, certificate.box, config) is True
    if certificate.verdict is Verdict.CERTIFIED_EMPTY:
        return is_empty(lattice, certificate.box, config).verdict is Verdict.CERTIFIED_EMPTY
    return False


# ---------------------------------------------------------------------------
# Minima
# ---------------------------------------------------------------------------


def _canonical(u: Sequence[int]) -> bool:
    return next((x for x in u if x), 0) > 0


def weighted_norm(lattice: Lattice, point: LatticePoint, w: Weights,
                  bits: int = DEFAULT_PRECISION_BITS) -> Tuple[Interval, Optional[Fraction]]:
    """max |z_i| / w_i over the positive weights, with the exact value when it is rational."""
    if lattice.scalar_kind is not ScalarKind.NUMBERFIELD:
        value = max(abs(Fraction(point.coords[i])) / w.values[i] for i in w.active)
        return Interval.exact(value, bits), value
    values = lattice.point_intervals(point.u, bits)
    return Interval.maximum(abs(values[i]) / w.values[i] for i in w.active), None


def successive_minima(lattice: Lattice, w: Weights, config: EnumerationConfig = DEFAULT_CONFIG,
                      count: Optional[int] = None) -> MinimaResult:
    """Successive minima of P(w) with respect to the lattice (restricted to zero weights' subspace).

    All candidates are collected from one dilated box large enough to hold the reduced basis;
    the minima are read off by a greedy independent selection in order of weighted norm,
    ties broken by the lexicographically smallest u with positive leading entry.
    """
    if w.dim != lattice.dim:
        raise DimensionMismatch(f"{w.dim} weights for a {lattice.dim}-dimensional lattice")
    if lattice.scalar_kind is ScalarKind.FLOAT and w.degenerate:
        raise InputError("zero weights need an exact lattice for successive minima")
    generators = _restricted_generators(lattice, w.degenerate)
    if not generators:
        raise InputError("no nonzero lattice point lies in the span of the positive weights")
    k = len(generators) if count is None else min(count, len(generators))
    reduced = _reduced_generators(lattice, generators, list(w.active), list(w.values))
    bounds = [weighted_norm(lattice, lattice.point(u), w, config.precision_bits)[0].upper_fraction()
              for u in reduced]
    reach = (min(bounds) if k == 1 else max(bounds)) * (1 + config.bisection_width)
    box = w.dilated(reach)
    found = enumerate_box(lattice, box, True, config)
    if found.undecided:
        logger.debug("ignoring %d undecided points on the boundary of the collection box", len(found.undecided))

    scored = []
    for point in found.points:
        if not _canonical(point.u):
            continue
        norm, exact = weighted_norm(lattice, point, w, config.precision_bits)
        key = exact if exact is not None else (norm.lower_fraction() + norm.upper_fraction()) / 2
        scored.append((key, point.u, norm, exact, point))
    scored.sort(key=lambda item: (item[0], item[1]))

    mu: List[Interval] = []
    points: List[Fraction] = []
    witnesses: List[LatticePoint] = []
    chosen: List[Tuple[int, ...]] = []
    for key, u, norm, exact, point in scored:
        if len(witnesses) == k:
            break
        if linalg.rank(chosen + [u]) > len(chosen):
            chosen.append(u)
            witnesses.append(point)
            mu.append(norm)
            points.append(exact if exact is not None else norm.lower_fraction())
    if len(witnesses) < k:
        raise PrecisionExhausted("collection box did not yield enough independent lattice points")
    exact_kind = lattice.scalar_kind is not ScalarKind.NUMBERFIELD
    logger.debug("successive minima of %s: %s", w, ", ".join(str(m) for m in mu))
    return MinimaResult(tuple(mu), tuple(witnesses), w, tuple(points), exact_kind)


def first_minimum(lattice: Lattice, w: Weights, config: EnumerationConfig = DEFAULT_CONFIG) -> MinimaResult:
    return successive_minima(lattice, w, config, count=1)


def brute_force_box(lattice: Lattice, w: Weights, bound: int,
                    config: EnumerationConfig = DEFAULT_CONFIG) -> List[LatticePoint]:
    """Exhaustive scan of u in [-N, N]^d; the independent oracle for enumerate_box."""
    d = lattice.dim
    if w.dim != d:
        raise DimensionMismatch(f"{w.dim} weights for a {d}-dimensional lattice")
    size = d * (2 * bound + 1) ** d
    if size > config.brute_force_budget:
        raise BudgetExceeded(f"brute force over [-{bound}, {bound}]^{d} exceeds the budget {config.brute_force_budget}")
    if bound <= 0:
        return []
    grid = np.array(list(itertools.product(range(-bound, bound + 1), repeat=d)), dtype=np.int64)
    z = grid @ lattice.float_basis()
    limits = np.array([float(v) for v in w.values])
    scale = max(1.0, float(np.abs(lattice.float_basis()).max())) * bound * d
    keep = np.all(np.abs(z) <= limits * (1 + 1e-9) + 1e-9 * scale, axis=1) & np.any(grid != 0, axis=1)
    out = []
    for row in grid[keep]:
        u = tuple(int(x) for x in row)
        status = _classify(lattice, u, w, config)
        if status:
            out.append(lattice.point(u))
        elif status is None:
            logger.warning("brute force could not decide u=%s", u)
    return sorted(out, key=lambda p: p.u)


# ---------------------------------------------------------------------------
# Euclidean shortest vectors
# ---------------------------------------------------------------------------


def _quadratic_form(gram: Sequence[Sequence[Interval]], a: Sequence[int], bits: int) -> Interval:
    acc = Interval.exact(0, bits)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(a):
            if y:
                acc = acc + gram[i][j] * (x * y)
    return acc


def shortest_from_gram(gram: Sequence[Sequence[Interval]], bits: int = DEFAULT_PRECISION_BITS,
                       slack: float = DEFAULT_CONFIG.radius_slack,
                       budget: int = DEFAULT_CONFIG.node_budget) -> Tuple[Interval, Tuple[int, ...]]:
    """Shortest nonzero vector of the lattice with the given interval Gram matrix.

    Returns the enclosure of its Euclidean length and its coefficient vector. The lattice is
    reduced on a Cholesky factor; the rounded factor B of the reduced Gram matrix G is enumerated
    in a ball widened by the certified gap between B B^T and 4^e G.
    """
    r = len(gram)
    floats = np.array([[x.approx() for x in row] for row in gram], dtype=float)
    try:
        chol = np.linalg.cholesky(floats)
    except np.linalg.LinAlgError as exc:
        raise PrecisionExhausted("Gram matrix is not numerically positive definite") from exc
    _, u = lll_reduce(chol)
    reduced = linalg.mat_mul(linalg.mat_mul(u, gram), linalg.transpose(u))
    reduced = [[x if isinstance(x, Interval) else Interval.exact(x, bits) for x in row] for row in reduced]
    try:
        chol = np.linalg.cholesky(np.array([[x.approx() for x in row] for row in reduced], dtype=float))
    except np.linalg.LinAlgError as exc:
        raise PrecisionExhausted("reduced Gram matrix is not numerically positive definite") from exc
    rows, exponent = integer_scaled(chol)
    scale = Fraction(4) ** exponent
    products = linalg.mat_mul(rows, linalg.transpose(rows))
    gap2 = sum(abs(reduced[i][j] * scale - products[i][j]).upper_fraction() ** 2
               for i in range(r) for j in range(r))
    try:
        inverse = linalg.inverse(products)
    except ZeroDivisionError as exc:
        raise PrecisionExhausted("rounded Cholesky factor is singular") from exc
    shrink = sum(inverse[i][i] for i in range(r)) * _sqrt_upper(gap2)
    if shrink >= CONDITIONING_LIMIT:
        raise PrecisionExhausted("Gram matrix too ill-conditioned for a double-precision Cholesky factor")
    radius2 = min(reduced[i][i].upper_fraction() for i in range(r))
    candidates = []
    for a in short_vectors(rows, scale * radius2 / (1 - shrink), slack, budget):
        candidates.append((_quadratic_form(reduced, a, bits), a))
    if not candidates:
        raise PrecisionExhausted("no candidate inside the search radius")
    squared = Interval.minimum(q for q, _ in candidates)
    best = min(candidates, key=lambda item: (item[0].approx(), item[1]))[1]
    coefficients = tuple(int(x) for x in linalg.vec_mat(best, u))
    return squared.sqrt(), coefficients


def first_minimum_euclidean(lattice: Lattice, config: EnumerationConfig = DEFAULT_CONFIG) -> Interval:
    """Certified length of a shortest nonzero lattice vector."""

    def attempt(bits: int) -> Optional[Interval]:
        length, _ = shortest_from_gram(lattice.gram_intervals(bits), bits, config.radius_slack, config.node_budget)
        return None if length.contains_zero() else length

    return escalate(attempt, config.precision_bits, config.precision_cap, what="shortest vector length")
