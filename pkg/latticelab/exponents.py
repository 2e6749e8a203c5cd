"""Estimators for the Diophantine exponents of lattices and matrices.

Every trace entry pairs a certified side with a side that is either certified or labelled
heuristic. Points are collected from a hyperbolic cross of dyadic boxes: all nonzero points
with |z| <= T_max and prod |z_i| <= product_cap are guaranteed to be found, and every point
missed has Pi(z) > product_cap^(1/d), which bounds its contribution from above.
"""

import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .arith import (
    DEFAULT_PRECISION_BITS,
    PRECISION_CAP_BITS,
    Interval,
    MinimalPolynomial,
    NumberFieldElement,
    Scalar,
    escalate,
    evaluate_scalar,
    parse_rational,
)
from .boxes import ShapeVector, Weights, from_t_gamma_shape
from .davenport import AxisPoint, CylinderWitness, DavenportConfig, dichotomy_witness
from .enumeration import (
    DEFAULT_CONFIG,
    EmptinessCertificate,
    EnumerationConfig,
    Verdict,
    enumerate_box,
    first_minimum,
    is_empty,
)
from .errors import InfeasibleShape, InputError, LatticeLabError, PrecisionExhausted, SearchBudgetExceeded
from .lattice_core import Lattice, ScalarKind, lattice_from_basis
from .workers import deterministic_map

logger = logging.getLogger(__name__)

INF = math.inf


class ExponentKind(str, enum.Enum):
    REGULAR = "regular"
    UNIFORM = "uniform"
    WEAK_UNIFORM = "weak"
    MULT = "mult"
    MULT_UNIFORM = "mult-uniform"


class TraceVerdict(str, enum.Enum):
    FINITE = "Finite"
    UNBOUNDED_SUSPECTED = "UnboundedSuspected"


@dataclass(frozen=True)
class EstimatorConfig:
    gamma_cap: float = 4.0
    shape_samples: int = 200
    refinement_steps: int = 20
    tail_fraction: float = 0.5
    bisection_steps: int = 12
    product_cap: int = 4
    point_budget: int = 10 ** 6
    seed: int = 0
    threads: int = 1
    davenport_seeds: bool = True
    precision_bits: int = DEFAULT_PRECISION_BITS
    precision_cap: int = PRECISION_CAP_BITS
    enumeration: EnumerationConfig = DEFAULT_CONFIG


@dataclass(frozen=True)
class TraceEntry:
    t: float
    lower: float
    upper: float
    witness_id: str = ""
    profile: Optional[float] = None
    certified_lower: Optional[float] = None
    heuristic_lower: bool = False
    certificate: Optional[EmptinessCertificate] = None


@dataclass(frozen=True)
class ExponentTrace:
    kind: ExponentKind
    entries: Tuple[TraceEntry, ...]
    verdict: TraceVerdict
    estimate: Tuple[float, float]
    witnesses: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    skipped: int = 0

    @property
    def grid(self) -> Tuple[float, ...]:
        return tuple(e.t for e in self.entries)

    @property
    def lower(self) -> Tuple[float, ...]:
        return tuple(e.lower for e in self.entries)

    @property
    def upper(self) -> Tuple[float, ...]:
        return tuple(e.upper for e in self.entries)


def t_grid(start: float, stop: float, scale: str = "geom", count: int = 10) -> Tuple[float, ...]:
    """Strictly increasing scales from start to stop, geometric or linear."""
    start, stop = float(start), float(stop)
    if start <= 1.0:
        raise InputError(f"t-grid must start above 1, got {start:g}")
    if count < 1:
        raise InputError("t-grid needs at least one point")
    if count == 1:
        return (start,)
    if stop <= start:
        raise InputError(f"t-grid stop {stop:g} must exceed start {start:g}")
    if scale == "geom":
        ratio = math.log(stop / start) / (count - 1)
        grid = [start * math.exp(ratio * i) for i in range(count)]
    elif scale == "lin":
        grid = [start + (stop - start) * i / (count - 1) for i in range(count)]
    else:
        raise InputError(f"unknown t-grid scale {scale!r}; expected geom or lin")
    grid[-1] = stop
    return tuple(grid)


def _tail(values: Sequence[Any], fraction: float) -> Sequence[Any]:
    keep = max(1, int(math.ceil(len(values) * fraction)))
    return values[-keep:]


def _compositions(total: int, bounds: Sequence[Tuple[int, int]]) -> Iterator[Tuple[int, ...]]:
    """Integer tuples k with lo_i <= k_i <= hi_i summing to `total`, in lexicographic order."""
    if not bounds:
        if total == 0:
            yield ()
        return
    (lo, hi), rest = bounds[0], bounds[1:]
    rest_lo = sum(b[0] for b in rest)
    rest_hi = sum(b[1] for b in rest)
    for k in range(max(lo, total - rest_hi), min(hi, total - rest_lo) + 1):
        for tail in _compositions(total - k, rest):
            yield (k,) + tail


def _canonical(u: Sequence[int]) -> bool:
    return next((x for x in u if x), 0) > 0


# ---------------------------------------------------------------------------
# Point collection for lattice exponents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScoredPoint:
    u: Tuple[int, ...]
    sup: Interval
    log_product: Interval
    approx: Tuple[float, ...]

    def log_sup(self) -> Interval:
        return self.sup.log()

    def gamma(self, d: int) -> Interval:
        """-log Pi(z) / log |z|; needs |z| > 1."""
        return -(self.log_product * Fraction(1, d)) / self.log_sup()

    def at_scale(self, d: int, log_t: Interval) -> Interval:
        """-log Pi(z) / log t."""
        return -(self.log_product * Fraction(1, d)) / log_t

    def box_at_scale(self, d: int, log_t: Interval) -> Interval:
        """Exponent of the box through z whose largest side is stretched to t."""
        return -((self.log_product + log_t - self.log_sup()) * Fraction(1, d)) / log_t


@dataclass(frozen=True)
class PointCloud:
    points: Tuple[ScoredPoint, ...]
    zero_points: Tuple[Tuple[Tuple[int, ...], float], ...]
    skipped: int
    log_cap: float


def _is_zero(value: Scalar) -> bool:
    return value.is_zero() if isinstance(value, NumberFieldElement) else value == 0


def _score(lattice: Lattice, u: Tuple[int, ...], config: EstimatorConfig) -> Optional[ScoredPoint]:
    def attempt(bits: int) -> Optional[List[Interval]]:
        values = [abs(z) for z in lattice.point_intervals(u, bits)]
        return None if any(z.contains_zero() for z in values) else values

    values = escalate(attempt, config.precision_bits, config.precision_cap, what=f"coordinates of u={u}")
    log_product = Interval.exact(0, config.precision_bits)
    for z in values:
        log_product = log_product + z.log()
    return ScoredPoint(u, Interval.maximum(values), log_product, tuple(z.approx() for z in values))


def collect_points(lattice: Lattice, t_max: float, config: EstimatorConfig = EstimatorConfig()) -> PointCloud:
    """Nonzero points (one of each +-pair) with |z| <= t_max and prod |z_i| <= product_cap."""
    d = lattice.dim
    k_high = max(1, math.ceil(math.log2(t_max)))
    total = math.ceil(math.log2(config.product_cap)) + d
    bounds = [(total - (d - 1) * k_high, k_high)] * d
    seen: Dict[Tuple[int, ...], Any] = {}
    boxes = 0
    for ks in _compositions(total, bounds):
        w = Weights(tuple(Fraction(2) ** k for k in ks))
        boxes += 1
        for point in enumerate_box(lattice, w, True, config.enumeration).points:
            if _canonical(point.u) and point.u not in seen:
                seen[point.u] = point
    points: List[ScoredPoint] = []
    zeros: List[Tuple[Tuple[int, ...], float]] = []
    skipped = 0
    for u in sorted(seen):
        exact = seen[u].coords
        if any(_is_zero(x) for x in exact):
            sup = max(abs(z.approx()) for z in lattice.point_intervals(u))
            if sup <= t_max:
                zeros.append((u, sup))
            continue
        try:
            scored = _score(lattice, u, config)
        except PrecisionExhausted:
            logger.warning("skipping u=%s: a coordinate stays undecided at the precision cap", u)
            skipped += 1
            continue
        if scored.sup.lower() <= t_max:
            points.append(scored)
    logger.debug("collected %d points (%d on coordinate hyperplanes) from %d boxes", len(points), len(zeros), boxes)
    return PointCloud(tuple(points), tuple(zeros), skipped, math.log(config.product_cap))


def _witness_record(point: ScoredPoint, value: Interval) -> Dict[str, Any]:
    return {"u": list(point.u), "z_abs": list(point.approx), "box": list(point.approx),
            "value": [value.lower(), value.upper()]}


def _axis_record(cloud: PointCloud) -> Dict[str, Any]:
    u, sup = cloud.zero_points[0]
    return {"u": list(u), "sup_norm": sup, "note": "lattice point on a coordinate hyperplane"}


def regular_estimate(lattice: Lattice, t_max: float, grid: Optional[Sequence[float]] = None,
                     config: EstimatorConfig = EstimatorConfig(), cloud: Optional[PointCloud] = None
                     ) -> ExponentTrace:
    """Running maxima of gamma(z) = -log Pi(z)/log|z| over collected points, per scale t.

    lower(t) is the best certified value among points with |z| <= t; upper(t) adds the bound
    -log(product_cap)/(d log t) covering every point the collection missed.
    """
    d = lattice.dim
    grid = tuple(grid) if grid is not None else t_grid(2.0, t_max, "geom", 10)
    cloud = cloud if cloud is not None else collect_points(lattice, t_max, config)
    usable = [p for p in cloud.points if p.sup.lower() > 1.0]
    gammas = [(p, p.gamma(d)) for p in usable]
    witnesses: Dict[str, Dict[str, Any]] = {}
    entries = []
    for index, t in enumerate(grid):
        log_t = Interval.exact(Fraction(t)).log()
        missed = -cloud.log_cap / (d * math.log(t))
        inside = [(p, g) for p, g in gammas if p.sup.upper() <= t]
        lower, upper, wid, profile = -INF, missed, "", None
        if inside:
            point, best = max(inside, key=lambda item: item[1].lower())
            lower = best.lower()
            upper = max(upper, max(g.upper() for _, g in inside))
            wid = f"regular-{index}"
            witnesses[wid] = _witness_record(point, best)
            profile = max(p.box_at_scale(d, log_t).approx() for p, _ in inside)
        if any(sup <= t for _, sup in cloud.zero_points):
            upper = INF
        entries.append(TraceEntry(t, lower, upper, wid, profile))

    window_lo = t_max ** (1.0 - config.tail_fraction)
    tail = [g for p, g in gammas if p.sup.lower() >= window_lo]
    floor = -cloud.log_cap / (d * math.log(max(window_lo, 2.0)))
    if tail:
        estimate = (max(g.lower() for g in tail), max(floor, max(g.upper() for g in tail)))
    else:
        estimate = (-INF, floor)
    verdict = TraceVerdict.UNBOUNDED_SUSPECTED if cloud.zero_points else TraceVerdict.FINITE
    if cloud.zero_points:
        witnesses["axis"] = _axis_record(cloud)
    logger.info("regular exponent: estimate [%.6g, %.6g], verdict %s", estimate[0], estimate[1], verdict.value)
    return ExponentTrace(ExponentKind.REGULAR, tuple(entries), verdict, estimate, witnesses, cloud.skipped)


def weak_uniform_estimate(lattice: Lattice, grid: Sequence[float], t_max: Optional[float] = None,
                          config: EstimatorConfig = EstimatorConfig(), cloud: Optional[PointCloud] = None
                          ) -> ExponentTrace:
    """psi(t) = max over |z| <= t of -log Pi(z)/log t, reported on the grid; estimate is the tail minimum.

    Entries are infinite from the first scale reaching a point on a coordinate hyperplane; the
    estimate is still taken over points off the hyperplanes.
    """
    d = lattice.dim
    grid = tuple(grid)
    t_max = t_max if t_max is not None else grid[-1]
    cloud = cloud if cloud is not None else collect_points(lattice, t_max, config)
    witnesses: Dict[str, Dict[str, Any]] = {}
    entries = []
    finite_bounds = []
    for index, t in enumerate(grid):
        log_t = Interval.exact(Fraction(t)).log()
        upper = -cloud.log_cap / (d * math.log(t))
        lower, wid = -INF, ""
        inside = [p for p in cloud.points if p.sup.upper() <= t]
        if inside:
            values = [(p, p.at_scale(d, log_t)) for p in inside]
            point, best = max(values, key=lambda item: item[1].lower())
            lower = best.lower()
            upper = max(upper, max(v.upper() for _, v in values))
            wid = f"weak-{index}"
            witnesses[wid] = _witness_record(point, best)
        finite_bounds.append((lower, upper))
        if any(sup <= t for _, sup in cloud.zero_points):
            upper = INF
        entries.append(TraceEntry(t, lower, upper, wid))
    tail = _tail(finite_bounds, config.tail_fraction)
    estimate = (min(b[0] for b in tail), min(b[1] for b in tail))
    verdict = TraceVerdict.UNBOUNDED_SUSPECTED if cloud.zero_points else TraceVerdict.FINITE
    if cloud.zero_points:
        witnesses["axis"] = _axis_record(cloud)
    logger.info("weak uniform exponent: estimate [%.6g, %.6g], verdict %s", estimate[0], estimate[1], verdict.value)
    return ExponentTrace(ExponentKind.WEAK_UNIFORM, tuple(entries), verdict, estimate, witnesses, cloud.skipped)


# ---------------------------------------------------------------------------
# Uniform exponent
# ---------------------------------------------------------------------------


def _kronecker_deficits(d: int, count: int, seed: int) -> List[Tuple[float, ...]]:
    """Quasi-random deficit vectors 1 - a_i; one coordinate per sample is kept at the maximum."""
    rng = np.random.default_rng(seed)
    offsets = rng.random(d)
    steps = np.sqrt(np.array([2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0][:d])) % 1.0
    out = []
    for n in range(count):
        values = (offsets + (n + 1) * steps) % 1.0
        values = 1e-3 + (1.0 - 2e-3) * values
        values[n % d] = 0.0
        out.append(tuple(float(v) for v in values))
    return out


def _shape_from_deficits(deficits: Sequence[float]) -> ShapeVector:
    return ShapeVector(tuple(1.0 - x for x in deficits))


@dataclass
class _UniformSearch:
    lattice: Lattice
    config: EstimatorConfig
    seeds: List[Tuple[float, ...]]

    def box(self, t: float, gamma: float, deficits: Sequence[float]) -> Optional[Weights]:
        try:
            return from_t_gamma_shape(Fraction(t), gamma, _shape_from_deficits(deficits), self.config.precision_bits)
        except InfeasibleShape:
            return None

    def score(self, w: Weights) -> Fraction:
        return first_minimum(self.lattice, w, self.config.enumeration).mu[0].lower_fraction()

    def certify(self, w: Weights) -> Optional[EmptinessCertificate]:
        certificate = is_empty(self.lattice, w, self.config.enumeration)
        return certificate if certificate.verdict is Verdict.CERTIFIED_EMPTY else None

    def find_empty(self, t: float, gamma: float) -> Optional[Tuple[Weights, EmptinessCertificate]]:
        """Look for a certified-empty box with |lambda| = t and Pi(lambda) = t^-gamma."""
        d = self.lattice.dim
        candidates = self.seeds + _kronecker_deficits(d, self.config.shape_samples, self.config.seed)
        best: Optional[Tuple[Fraction, Tuple[float, ...]]] = None
        for deficits in candidates:
            w = self.box(t, gamma, deficits)
            if w is None:
                continue
            value = self.score(w)
            if value > 1:
                certificate = self.certify(w)
                if certificate is not None:
                    return w, certificate
            if best is None or value > best[0]:
                best = (value, tuple(deficits))
        if best is None:
            return None
        value, current = best
        step = 0.25
        for _ in range(self.config.refinement_steps):
            improved = False
            for i in range(d):
                if current[i] == 0.0:
                    continue
                for sign in (1.0, -1.0):
                    trial = list(current)
                    trial[i] = min(1.0, max(1e-6, trial[i] + sign * step))
                    w = self.box(t, gamma, trial)
                    if w is None:
                        continue
                    trial_value = self.score(w)
                    if trial_value > 1:
                        certificate = self.certify(w)
                        if certificate is not None:
                            return w, certificate
                    if trial_value > value:
                        value, current, improved = trial_value, tuple(trial), True
            if not improved:
                step /= 2
        return None


def _davenport_seed(lattice: Lattice, config: EstimatorConfig) -> Tuple[List[Tuple[float, ...]], Optional[Any]]:
    if not config.davenport_seeds:
        return [], None
    davenport = DavenportConfig(enumeration=config.enumeration, threads=config.threads)
    try:
        witness = dichotomy_witness(lattice, Fraction(1, 10), davenport)
    except LatticeLabError as exc:
        logger.debug("no Davenport seed: %s", exc)
        return [], None
    if isinstance(witness, AxisPoint):
        return [], witness
    try:
        shape = ShapeVector.from_box(witness.box.values)
    except LatticeLabError:
        return [], witness
    top = max(shape.a)
    return [tuple(0.0 if a == top else min(1.0, max(1e-6, (1.0 - a) / (1.0 + shape.a_max))) for a in shape.a)], witness


def uniform_estimate(lattice: Lattice, grid: Sequence[float],
                     config: EstimatorConfig = EstimatorConfig()) -> ExponentTrace:
    """Per scale t, bracket the largest gamma at which every box with |lambda| = t and
    Pi(lambda) = t^-gamma holds a nonzero lattice point.

    Upper bounds come from certified-empty boxes found by bisection over gamma; the lower bound is
    the Minkowski value -log(det)/(d log t) (certified) or the last gamma at which every sampled
    shape was inhabited (heuristic).
    """
    d = lattice.dim
    grid = tuple(grid)
    seeds, seed_witness = _davenport_seed(lattice, config)
    search = _UniformSearch(lattice, config, seeds)
    log_det = lattice.det_abs.log().upper() if lattice.det_abs.is_positive() else 0.0

    def entry(item: Tuple[int, float]) -> TraceEntry:
        index, t = item
        minkowski = -log_det / (d * math.log(t))
        try:
            found = search.find_empty(t, config.gamma_cap)
        except SearchBudgetExceeded as exc:
            logger.warning("t=%g: %s", t, exc)
            return TraceEntry(t, minkowski, INF, "", certified_lower=minkowski)
        if found is None:
            logger.debug("t=%g: no empty box up to gamma cap %g", t, config.gamma_cap)
            return TraceEntry(t, config.gamma_cap, INF, "", certified_lower=minkowski, heuristic_lower=True)
        box, certificate = found
        lo, hi = max(minkowski, -1.0 + 1e-9), config.gamma_cap
        heuristic = False
        for _ in range(config.bisection_steps):
            mid = (lo + hi) / 2
            try:
                hit = search.find_empty(t, mid)
            except SearchBudgetExceeded:
                hit = None
            if hit is not None:
                hi = mid
                box, certificate = hit
            else:
                lo, heuristic = mid, True
        upper = -math.log(_pi_float(box)) / math.log(t)
        return TraceEntry(t, lo, upper, f"uniform-{index}", certified_lower=minkowski, heuristic_lower=heuristic,
                          certificate=certificate)

    entries = deterministic_map(entry, list(enumerate(grid)), config.threads)
    witnesses: Dict[str, Dict[str, Any]] = {}
    for e in entries:
        if e.certificate is not None:
            witnesses[e.witness_id] = {"box": [str(v) for v in e.certificate.box.values],
                                       "gamma": e.upper, "verdict": e.certificate.verdict.value}
    if isinstance(seed_witness, AxisPoint):
        witnesses["axis"] = {"u": list(seed_witness.u), "note": "lattice point on the first axis"}
    elif isinstance(seed_witness, CylinderWitness):
        witnesses["davenport-seed"] = {"box": [str(v) for v in seed_witness.box.values],
                                       "t": seed_witness.t_witness, "gamma": seed_witness.gamma_witness}
    finite = [e for e in entries if e.upper < INF]
    if not finite:
        verdict = TraceVerdict.UNBOUNDED_SUSPECTED
        estimate = (config.gamma_cap, INF)
    else:
        verdict = TraceVerdict.FINITE
        tail = _tail(entries, config.tail_fraction)
        estimate = (min(e.lower for e in tail), min(e.upper for e in tail))
    logger.info("uniform exponent: estimate [%.6g, %.6g], verdict %s", estimate[0], estimate[1], verdict.value)
    return ExponentTrace(ExponentKind.UNIFORM, tuple(entries), verdict, estimate, witnesses)


def _pi_float(w: Weights) -> float:
    return math.exp(sum(math.log(v) for v in w.values) / w.dim)


# ---------------------------------------------------------------------------
# Multiplicative exponents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaMatrix:
    """n x m matrix of rationals or of elements of one real number field."""

    rows: Tuple[Tuple[Scalar, ...], ...]
    minpoly: Optional[MinimalPolynomial] = None
    embedding: int = -1
    kind: ScalarKind = ScalarKind.RATIONAL

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise InputError("theta needs n >= 1 rows and m >= 1 columns")
        if any(len(row) != len(self.rows[0]) for row in self.rows):
            raise InputError("theta rows have different lengths")

    @classmethod
    def of(cls, rows: Sequence[Sequence[Any]], minpoly: Optional[MinimalPolynomial] = None,
           embedding: int = -1, kind: Any = None) -> "ThetaMatrix":
        if minpoly is not None:
            parsed = tuple(tuple(x if isinstance(x, NumberFieldElement) else NumberFieldElement.parse(x, minpoly)
                                 for x in row) for row in rows)
            return cls(parsed, minpoly, embedding, ScalarKind.NUMBERFIELD)
        kind = ScalarKind(kind) if kind is not None else ScalarKind.RATIONAL
        return cls(tuple(tuple(parse_rational(x) for x in row) for row in rows), None, embedding, kind)

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.rows[0])

    def floats(self, bits: int = DEFAULT_PRECISION_BITS) -> np.ndarray:
        return np.array([[evaluate_scalar(x, self.minpoly, self.embedding, bits).approx() for x in row]
                         for row in self.rows], dtype=float)

    def combine(self, x: Sequence[int]) -> List[Scalar]:
        out = []
        for row in self.rows:
            acc: Any = Fraction(0)
            for theta, k in zip(row, x):
                if k:
                    acc = acc + theta * k
            out.append(acc)
        return out


def theta_lattice(theta: ThetaMatrix, precision_bits: int = DEFAULT_PRECISION_BITS) -> Lattice:
    """The (m+n)-dimensional lattice {(x, theta x - y)}: rows (e_j, theta column j) and (0, -e_i)."""
    m, n = theta.m, theta.n
    rows = []
    for j in range(m):
        rows.append([1 if k == j else 0 for k in range(m)] + [theta.rows[i][j] for i in range(n)])
    for i in range(n):
        rows.append([0] * m + [-1 if k == i else 0 for k in range(n)])
    if theta.kind is ScalarKind.NUMBERFIELD:
        return lattice_from_basis(rows, ScalarKind.NUMBERFIELD, theta.minpoly, (theta.embedding,) * (m + n),
                                  precision_bits)
    return lattice_from_basis(rows, theta.kind, precision_bits=precision_bits)


def nearest_residual(theta: ThetaMatrix, x: Sequence[int], bits: int = DEFAULT_PRECISION_BITS,
                     cap: int = PRECISION_CAP_BITS) -> Tuple[Tuple[int, ...], List[Optional[Interval]]]:
    """Nearest integer vector y to theta x and enclosures of theta x - y (None for an exact zero).

    Near half-integers the precision is doubled until the rounding is decided.
    """
    ys: List[int] = []
    residuals: List[Optional[Interval]] = []
    for value in theta.combine(x):
        if isinstance(value, NumberFieldElement):
            rational = value.coefficients[0] if value.is_rational() else None
        else:
            rational = Fraction(value)
        if rational is not None:
            y = math.floor(rational + Fraction(1, 2))
            ys.append(y)
            residuals.append(None if rational == y else Interval.exact(rational - y, bits))
            continue

        def attempt(b: int) -> Optional[Tuple[int, Interval]]:
            enclosure = evaluate_scalar(value, theta.minpoly, theta.embedding, b)
            lo = math.floor(enclosure.lower_fraction() + Fraction(1, 2))
            hi = math.floor(enclosure.upper_fraction() + Fraction(1, 2))
            if lo != hi:
                return None
            residual = enclosure - lo
            return None if residual.contains_zero() else (lo, residual)

        y, residual = escalate(attempt, bits, cap, what="nearest integer rounding")
        ys.append(y)
        residuals.append(residual)
    return tuple(ys), residuals


@dataclass(frozen=True)
class MultRecord:
    x: Tuple[int, ...]
    y: Tuple[int, ...]
    log_height: float
    neg_log_pi: Optional[Interval]


def _record(theta: ThetaMatrix, x: Tuple[int, ...], config: EstimatorConfig) -> MultRecord:
    y, residuals = nearest_residual(theta, x, config.precision_bits, config.precision_cap)
    log_height = sum(math.log(max(1, abs(k))) for k in x) / theta.m
    if any(r is None for r in residuals):
        return MultRecord(x, y, log_height, None)
    acc = Interval.exact(0, config.precision_bits)
    for r in residuals:
        acc = acc + abs(r).log()
    return MultRecord(x, y, log_height, -(acc * Fraction(1, theta.n)))


def _records_exhaustive(theta: ThetaMatrix, t_max: float, config: EstimatorConfig) -> List[MultRecord]:
    """m = 1: scan x = 1..t_max, certify the float running-maximum records exactly."""
    xs = np.arange(1, int(math.floor(t_max)) + 1, dtype=np.float64)
    values = theta.floats()[:, 0]
    prod = np.outer(values, xs)
    residual = np.abs(prod - np.rint(prod))
    with np.errstate(divide="ignore"):
        score = -np.log(residual).mean(axis=0)
    logs = np.log(xs)
    with np.errstate(divide="ignore", invalid="ignore"):
        gamma = np.where(logs > 0, score / np.where(logs > 0, logs, 1.0), -np.inf)
    chosen = set()
    for series in (score, gamma):
        running = np.maximum.accumulate(series)
        previous = np.concatenate(([-np.inf], running[:-1]))
        chosen.update(int(i) for i in np.nonzero(series >= previous - 1e-9)[0])
    chosen.update(int(i) for i in np.nonzero(~np.isfinite(score))[0])
    return [_record(theta, (int(xs[i]),), config) for i in sorted(chosen)]


def _records_from_lattice(theta: ThetaMatrix, t_max: float, config: EstimatorConfig) -> List[MultRecord]:
    """Hyperbolic cross over the theta lattice: every x with prod max(1,|x_j|) * prod |r_i| <= product_cap."""
    m, n = theta.m, theta.n
    lattice = theta_lattice(theta, config.precision_bits)
    k_high = max(1, math.ceil(m * math.log2(t_max)))
    total = math.ceil(math.log2(config.product_cap)) + m + n
    bounds = [(0, k_high)] * m + [(total - m * k_high - 1, 0)] * n
    xs = set()
    for ks in _compositions(total, bounds):
        w = Weights(tuple(Fraction(2) ** k for k in ks))
        for point in enumerate_box(lattice, w, True, config.enumeration).points:
            x = tuple(point.u[:m])
            if any(x) and _canonical(x):
                xs.add(x)
    height_cap = m * math.log(t_max)
    records = []
    for x in sorted(xs):
        if sum(math.log(max(1, abs(k))) for k in x) <= height_cap + 1e-12:
            records.append(_record(theta, x, config))
    logger.debug("theta lattice collection produced %d vectors x", len(records))
    return records


def _mult_records(theta: ThetaMatrix, t_max: float, config: EstimatorConfig) -> Tuple[List[MultRecord], bool]:
    if theta.m == 1 and t_max <= config.point_budget:
        return _records_exhaustive(theta, t_max, config), True
    return _records_from_lattice(theta, t_max, config), False


def _mult_trace(kind: ExponentKind, theta: ThetaMatrix, t_max: float, grid: Optional[Sequence[float]],
                config: EstimatorConfig) -> ExponentTrace:
    grid = tuple(grid) if grid is not None else t_grid(2.0, t_max, "geom", 10)
    m, n = theta.m, theta.n
    records, exhaustive = _mult_records(theta, t_max, config)
    zeros = [r for r in records if r.neg_log_pi is None]
    scored = [r for r in records if r.neg_log_pi is not None and r.log_height > 0]
    log_cap = math.log(config.product_cap)
    witnesses: Dict[str, Dict[str, Any]] = {}
    entries = []
    for index, t in enumerate(grid):
        log_t = math.log(t)
        inside = [r for r in scored if r.log_height <= log_t + 1e-12]
        missed = -INF if exhaustive else m / n - log_cap / (n * log_t)
        profile_lo, profile_hi = -INF, missed
        gamma_lo, gamma_hi = -INF, missed
        wid = ""
        if inside:
            best_profile = max(inside, key=lambda r: r.neg_log_pi.lower())
            profile_lo = best_profile.neg_log_pi.lower() / log_t
            profile_hi = max(profile_hi, max(r.neg_log_pi.upper() for r in inside) / log_t)
            best_gamma = max(inside, key=lambda r: r.neg_log_pi.lower() / r.log_height)
            gamma_lo = best_gamma.neg_log_pi.lower() / best_gamma.log_height
            gamma_hi = max(gamma_hi, max(r.neg_log_pi.upper() / r.log_height for r in inside))
            best = best_gamma if kind is ExponentKind.MULT else best_profile
            wid = f"{kind.value}-{index}"
            witnesses[wid] = {"x": list(best.x), "y": list(best.y),
                              "neg_log_pi": [best.neg_log_pi.lower(), best.neg_log_pi.upper()]}
        if any(r.log_height <= log_t + 1e-12 for r in zeros):
            profile_hi = gamma_hi = INF
        if kind is ExponentKind.MULT:
            entries.append(TraceEntry(t, gamma_lo, gamma_hi, wid, profile=profile_lo))
        else:
            entries.append(TraceEntry(t, profile_lo, profile_hi, wid, profile=profile_lo))

    if kind is ExponentKind.MULT:
        last = entries[-1]
        upper = max(missed_bound(m, n, log_cap, grid[-1], exhaustive), _profile_upper(scored, grid[-1]))
        estimate = (last.profile if last.profile is not None else -INF, upper)
    else:
        tail = _tail(entries, config.tail_fraction)
        estimate = (min(e.lower for e in tail), min(e.upper for e in tail))
    if zeros:
        verdict = TraceVerdict.UNBOUNDED_SUSPECTED
        witnesses["exact-hit"] = {"x": list(zeros[0].x), "y": list(zeros[0].y)}
    else:
        verdict = TraceVerdict.FINITE
    logger.info("%s exponent: estimate [%.6g, %.6g], verdict %s", kind.value, estimate[0], estimate[1], verdict.value)
    return ExponentTrace(kind, tuple(entries), verdict, estimate, witnesses)


def missed_bound(m: int, n: int, log_cap: float, t: float, exhaustive: bool) -> float:
    """Upper bound on -log Pi(theta x - y)/log t over vectors the collection may have missed."""
    return -INF if exhaustive else m / n - log_cap / (n * math.log(t))


def _profile_upper(records: Sequence[MultRecord], t: float) -> float:
    log_t = math.log(t)
    inside = [r for r in records if r.log_height <= log_t + 1e-12]
    return max((r.neg_log_pi.upper() / log_t for r in inside), default=-INF)


def mult_estimate(theta: ThetaMatrix, t_max: float, grid: Optional[Sequence[float]] = None,
                  config: EstimatorConfig = EstimatorConfig()) -> ExponentTrace:
    """Running maxima of gamma(x) = -log Pi(theta x - y)/log Pi'(x).

    The lower column at t is the largest certified gamma(x) over Pi'(x) <= t, so it never decreases
    along the grid. The headline estimate is not that column: it is the scale-t profile
    max -log Pi(theta x - y)/log t at the largest t.
    """
    return _mult_trace(ExponentKind.MULT, theta, t_max, grid, config)


def mult_uniform_estimate(theta: ThetaMatrix, grid: Sequence[float], t_max: Optional[float] = None,
                          config: EstimatorConfig = EstimatorConfig()) -> ExponentTrace:
    """phi(t) = max over 1 < Pi'(x) <= t of -log Pi(theta x - y)/log t; estimate is the tail minimum."""
    grid = tuple(grid)
    return _mult_trace(ExponentKind.MULT_UNIFORM, theta, t_max if t_max is not None else grid[-1], grid, config)


# ---------------------------------------------------------------------------
# Continued fractions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1)
def golden_minpoly() -> MinimalPolynomial:
    """x^2 - x - 1, whose largest root is the golden ratio."""
    return MinimalPolynomial.build([1, -1, -1])


@dataclass(frozen=True)
class ContinuedFraction:
    """[a_0; a_1, a_2, ...]; `tail` is the complete quotient following the listed prefix."""

    quotients: Tuple[int, ...]
    terminates: bool = False
    tail: Optional[NumberFieldElement] = None

    def __post_init__(self):
        if not self.quotients:
            raise InputError("a continued fraction needs at least a_0")
        if any(a < 1 for a in self.quotients[1:]):
            raise InputError("partial quotients a_k must be positive for k >= 1")
        if self.terminates and self.tail is not None:
            raise InputError("a terminating continued fraction has no tail")

    @classmethod
    def parse(cls, text: str) -> "ContinuedFraction":
        """"a0;a1,a2,..." with an optional trailing "..." for a tail of ones."""
        text = text.strip()
        golden = text.endswith("...")
        if golden:
            text = text[:-3].rstrip(", ")
        head, _, rest = text.partition(";")
        try:
            quotients = [int(head)] + [int(part) for part in rest.split(",") if part.strip()]
        except ValueError as exc:
            raise InputError(f"malformed continued fraction {text!r}") from exc
        if golden:
            return cls(tuple(quotients), False, NumberFieldElement.generator(golden_minpoly()))
        return cls(tuple(quotients), True)

    def convergents(self) -> List[Tuple[int, int]]:
        p_prev, p = 0, 1
        q_prev, q = 1, 0
        out = []
        for a in self.quotients:
            p_prev, p = p, a * p + p_prev
            q_prev, q = q, a * q + q_prev
            out.append((p, q))
        return out

    def value(self) -> Union[Fraction, NumberFieldElement]:
        convergents = self.convergents()
        p, q = convergents[-1]
        if self.terminates:
            return Fraction(p, q)
        if self.tail is None:
            raise InputError("the value of an open continued fraction needs a tail")
        p_prev, q_prev = convergents[-2] if len(convergents) > 1 else (1, 0)
        return (self.tail * p + p_prev) / (self.tail * q + q_prev)

    def complete_quotients(self) -> List[float]:
        """alpha_k = [a_k; a_(k+1), ...] as floats, one past the prefix when a tail is known."""
        if self.tail is not None:
            nxt = evaluate_scalar(self.tail, self.tail.minpoly, -1, 64).approx()
        elif self.terminates:
            nxt = INF
        else:
            nxt = 1.0
        out = [nxt]
        for a in reversed(self.quotients):
            nxt = a + (0.0 if nxt == INF else 1.0 / nxt)
            out.append(nxt)
        out.reverse()
        return out


def continued_fraction_lattice(cf: ContinuedFraction, precision_bits: int = DEFAULT_PRECISION_BITS) -> Lattice:
    """Lattice with basis rows (1, alpha), (0, 1)."""
    alpha = cf.value()
    if isinstance(alpha, NumberFieldElement):
        return lattice_from_basis([[1, alpha], [0, 1]], ScalarKind.NUMBERFIELD, alpha.minpoly, (-1, -1),
                                  precision_bits)
    return lattice_from_basis([[1, alpha], [0, 1]], ScalarKind.RATIONAL, precision_bits=precision_bits)


@dataclass(frozen=True)
class OracleStep:
    k: int
    q: int
    product: float
    gamma: float


@dataclass(frozen=True)
class OracleResult:
    estimate: float
    steps: Tuple[OracleStep, ...]
    unbounded: bool


def cf_oracle_2d(cf: ContinuedFraction, count: int, q_window: Optional[Tuple[float, float]] = None,
                 tail_fraction: float = 0.5) -> OracleResult:
    """Exponent sequence of the convergents: gamma_k = -log(q_k |q_k alpha - p_k|)/(2 log q_k).

    |q_k alpha - p_k| = 1/(alpha_(k+1) q_k + q_(k-1)) exactly. The estimate is the maximum over
    convergents with q_k in `q_window`, or over the last `tail_fraction` of the steps.
    """
    count = min(count, len(cf.quotients))
    convergents = cf.convergents()
    complete = cf.complete_quotients()
    steps: List[OracleStep] = []
    unbounded = False
    for k in range(count):
        q = convergents[k][1]
        q_prev = convergents[k - 1][1] if k > 0 else 0
        nxt = complete[k + 1]
        if nxt == INF:
            unbounded = True
            steps.append(OracleStep(k, q, 0.0, INF))
            break
        error = 1.0 / (nxt * q + q_prev)
        product = q * error
        gamma = -math.log(product) / (2 * math.log(q)) if q > 1 else -INF
        steps.append(OracleStep(k, q, product, gamma))
    if q_window is not None:
        chosen = [s.gamma for s in steps if q_window[0] <= s.q <= q_window[1]]
    else:
        chosen = [s.gamma for s in _tail(steps, tail_fraction)]
    estimate = max(chosen, default=-INF)
    return OracleResult(estimate, tuple(steps), unbounded)
