"""Certified-empty boxes from successive minima, and the cylinder witnesses built from them.

A box with unit product is rescaled coordinatewise by a permutation of its successive minima and
by a constant c; for c below the supremal value the rescaled box holds no nonzero lattice point.
Stretching the box along the first axis and running the rescaling yields empty boxes inside thin
cylinders around that axis, which is what drives the uniform exponent to zero.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import mpmath

from .arith import DEFAULT_PRECISION_BITS, Interval, mpf_to_fraction, parse_rational
from .boxes import Weights, box_volume, pi_functional, sup_norm
from .enumeration import (
    DEFAULT_CONFIG,
    EmptinessCertificate,
    EnumerationConfig,
    MinimaResult,
    Verdict,
    first_minimum,
    is_empty,
    successive_minima,
)
from .errors import (
    AxisPointPresent,
    DegenerateP1,
    DimensionMismatch,
    GridExhausted,
    InputError,
    PrecisionExhausted,
    SearchBudgetExceeded,
    WitnessNotEmpty,
)
from .lattice_core import (
    Lattice,
    ScalarKind,
    Subspace,
    best_coordinate_subset,
    distance_to_subspace_lattice,
    minimal_rational_subspace,
    project_sublattice,
)
from .workers import deterministic_map

logger = logging.getLogger(__name__)

DEFAULT_EPSILONS = (Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000))


@dataclass(frozen=True)
class DavenportConfig:
    grid_start: Fraction = Fraction(2)
    grid_ratio: Fraction = Fraction(2)
    grid_cap: Fraction = Fraction(2 ** 40)
    # returned c sits this far (relatively) below the supremal empty constant
    c_margin: Fraction = Fraction(1, 2 ** 20)
    max_dim: int = 6
    precision_bits: int = DEFAULT_PRECISION_BITS
    threads: int = 1
    enumeration: EnumerationConfig = DEFAULT_CONFIG


@dataclass(frozen=True)
class DavenportResult:
    permutation: Tuple[int, ...]
    c: Fraction
    c_supremum: Interval
    lambda_prime: Weights
    certificate: EmptinessCertificate
    minima: MinimaResult


@dataclass(frozen=True)
class CylinderWitness:
    epsilon: Fraction
    box: Weights
    gamma_witness: float
    t_witness: float
    case_tag: str
    certificate: EmptinessCertificate
    davenport: DavenportResult
    volume: Fraction
    volume_bound: Interval
    requested_epsilon: Optional[Fraction] = None
    p: Optional[int] = None
    coordinates: Optional[Tuple[int, ...]] = None
    delta: Optional[Interval] = None


@dataclass(frozen=True)
class AxisPoint:
    """A nonzero lattice point on a coordinate axis: the uniform exponent is infinite."""

    u: Tuple[int, ...]
    coords: Tuple
    axis: int = 0


@dataclass(frozen=True)
class LadderRow:
    epsilon: Fraction
    witness: Optional[CylinderWitness] = None
    error: Optional[str] = None
    best: Optional[float] = None


@dataclass(frozen=True)
class UniformClassification:
    infinite: bool
    axis_points: Tuple[AxisPoint, ...]
    free_axis: Optional[int] = None
    witness: Optional[CylinderWitness] = None


def box_exponent(box: Weights) -> Optional[float]:
    """-log Pi(box) / log |box|, or None when |box| <= 1."""
    top = float(sup_norm(box.values))
    if top <= 1.0:
        return None
    return -math.log(pi_functional(box.values)) / math.log(top)


# ---------------------------------------------------------------------------
# Davenport rescaling
# ---------------------------------------------------------------------------


def davenport_empty_box(lattice: Lattice, w: Weights, config: DavenportConfig = DavenportConfig(),
                        minima: Optional[MinimaResult] = None) -> DavenportResult:
    """Rescale a unit-product box by permuted successive minima into a certified-empty box.

    For each permutation the supremal empty constant is the first minimum of the box
    (mu_{k_i} lambda_i); the permutation with the largest one wins, earliest on ties.
    """
    d = lattice.dim
    if d > config.max_dim:
        raise SearchBudgetExceeded(f"{d}! permutations exceed the dimension limit {config.max_dim}")
    if w.dim != d:
        raise DimensionMismatch(f"{w.dim} weights for a {d}-dimensional lattice")
    if w.degenerate:
        raise InputError("Davenport boxes need positive weights")
    log_product = sum(math.log(v) for v in w.values)
    if abs(log_product) > 1e-9:
        raise InputError(f"weights must have product 1 (log product {log_product:g}); renormalize first")

    if minima is None:
        minima = successive_minima(lattice, w, config.enumeration)
    mu = minima.mu_points
    permutations = list(itertools.permutations(range(d)))

    def supremum(order: Tuple[int, ...]) -> Interval:
        box = Weights(tuple(mu[order[i]] * w.values[i] for i in range(d)))
        return first_minimum(lattice, box, config.enumeration).mu[0]

    suprema = deterministic_map(supremum, permutations, config.threads)
    best = 0
    for i in range(1, len(permutations)):
        if suprema[i].lower_fraction() > suprema[best].lower_fraction():
            best = i
    order = permutations[best]
    c_star = suprema[best]
    c = c_star.lower_fraction() * (1 - config.c_margin)
    if c <= 0:
        raise PrecisionExhausted("supremal Davenport constant is not certified positive")
    lambda_prime = Weights(tuple(c * mu[order[i]] * w.values[i] for i in range(d)))
    certificate = is_empty(lattice, lambda_prime, config.enumeration)
    if certificate.verdict is Verdict.INHABITED:
        raise WitnessNotEmpty(f"rescaled box {lambda_prime} contains u={certificate.witness.u}")
    if certificate.verdict is Verdict.UNDECIDED:
        raise PrecisionExhausted(f"emptiness of {lambda_prime} undecided at the precision cap")
    logger.debug("Davenport permutation %s with c = %.6g", order, float(c))
    return DavenportResult(order, c, c_star, lambda_prime, certificate, minima)


# ---------------------------------------------------------------------------
# Cylinder witnesses
# ---------------------------------------------------------------------------


def cylinder_weights(lam: Fraction, dim: int, bits: int = DEFAULT_PRECISION_BITS) -> Weights:
    """(lam, lam^(-1/(dim-1)), ...), the trailing entries rounded to dyadics."""
    lam = parse_rational(lam)
    with mpmath.workprec(bits):
        other = mpmath.power(mpmath.mpf(lam.numerator) / lam.denominator, mpmath.mpf(-1) / (dim - 1))
        other = mpf_to_fraction(other)
    return Weights((lam,) + (other,) * (dim - 1))


def _cylinder_search(lattice: Lattice, epsilon: Fraction, config: DavenportConfig) -> DavenportResult:
    d = lattice.dim
    if d < 2:
        raise InputError("cylinder witnesses need dimension at least 2")
    best: Optional[float] = None
    lam = Fraction(config.grid_start)
    while lam <= config.grid_cap:
        w = cylinder_weights(lam, d, config.precision_bits)
        minima = successive_minima(lattice, w, config.enumeration)
        reach = minima.mu[-1].upper_fraction() * w.values[1]
        best = float(reach) if best is None else min(best, float(reach))
        logger.debug("lambda=%s: mu_d * lambda^(-1/(d-1)) <= %.6g", lam, float(reach))
        if reach < epsilon:
            result = davenport_empty_box(lattice, w, config, minima)
            if all(result.lambda_prime.values[i] < epsilon for i in range(1, d)):
                return result
        lam *= config.grid_ratio
    raise GridExhausted(f"no lambda up to {float(config.grid_cap):g} reached epsilon = {float(epsilon):g}; "
                        f"best value {best:g}", best)


def _case1_witness(lattice: Lattice, epsilon: Fraction, config: DavenportConfig) -> CylinderWitness:
    result = _cylinder_search(lattice, epsilon, config)
    d = lattice.dim
    volume, _ = box_volume(result.lambda_prime)
    bound = lattice.det_abs * (Fraction(2 * result.c) ** d / math.factorial(d))
    box = result.lambda_prime
    return CylinderWitness(
        epsilon, box, box_exponent(box), float(sup_norm(box.values)), "Case1", result.certificate, result,
        volume, bound, requested_epsilon=epsilon, p=d,
    )


def case1_empty_cylinder(lattice: Lattice, epsilon, config: DavenportConfig = DavenportConfig()) -> CylinderWitness:
    """Empty box inside the cylinder |z_i| < epsilon (i >= 1) when the lattice spans no proper
    rational subspace around the first axis."""
    epsilon = parse_rational(epsilon)
    if lattice.scalar_kind is not ScalarKind.FLOAT:
        p, _, _ = minimal_rational_subspace(lattice)
        if p < lattice.dim:
            raise InputError(f"the first axis lies in a rank-{p} rational subspace; use the Case 2 construction")
    return _case1_witness(lattice, epsilon, config)


def case2_empty_cylinder(lattice: Lattice, epsilon, config: DavenportConfig = DavenportConfig(),
                         subspace: Optional[Tuple[int, Subspace, List[List[int]]]] = None) -> CylinderWitness:
    """Empty box around the first axis when it lies in a proper rational subspace of rank p.

    The Case 1 search runs on the rank-p lattice read in the best-conditioned coordinates; the
    remaining coordinates get delta/(2 sqrt(d-p)), delta being the distance from the subspace to
    the rest of the lattice. Emptiness is re-certified on the full lattice.
    """
    epsilon = parse_rational(epsilon)
    d = lattice.dim
    p, space, generators = subspace if subspace is not None else minimal_rational_subspace(lattice)
    if p == 1:
        raise DegenerateP1("rank-1 subspace around the first axis means an axis lattice point")
    if p >= d:
        raise InputError("the rational subspace is the whole space; use the Case 1 construction")
    coords = best_coordinate_subset(space, config.precision_bits, config.enumeration.precision_cap)
    projected = project_sublattice(lattice, generators, coords)
    delta = distance_to_subspace_lattice(lattice, space, config.precision_bits, config.enumeration.precision_cap)
    root = Interval.exact(d - p, config.precision_bits).sqrt()
    used = epsilon
    if epsilon >= (delta / (root * 4)).lower_fraction():
        used = (delta / (root * 8)).lower_fraction()
        logger.info("epsilon %g shrunk to %g below delta/(4 sqrt(d-p)) with delta in %s",
                    float(epsilon), float(used), delta)
    inner = _cylinder_search(projected, used, config)
    outside = delta.lower_fraction() / (2 * root.upper_fraction())
    values = [outside] * d
    for k, c in enumerate(coords):
        values[c] = inner.lambda_prime.values[k]
    box = Weights(tuple(values))
    certificate = is_empty(lattice, box, config.enumeration)
    if certificate.verdict is Verdict.INHABITED:
        raise WitnessNotEmpty(f"assembled box {box} contains u={certificate.witness.u}")
    if certificate.verdict is Verdict.UNDECIDED:
        raise PrecisionExhausted(f"emptiness of {box} undecided at the precision cap")
    volume, _ = box_volume(box)
    product = inner.minima.product()
    formula = product * (2 ** d) * (Fraction(inner.c) ** p) * (delta ** (d - p)) / ((root * 2) ** (d - p))
    return CylinderWitness(
        used, box, box_exponent(box), float(sup_norm(box.values)), "Case2", certificate, inner,
        volume, formula, requested_epsilon=epsilon, p=p, coordinates=coords, delta=delta,
    )


def dichotomy_witness(lattice: Lattice, epsilon,
                      config: DavenportConfig = DavenportConfig()) -> Union[CylinderWitness, AxisPoint]:
    """Case 1 or Case 2 cylinder witness, or the lattice point sitting on the first axis."""
    epsilon = parse_rational(epsilon)
    if lattice.scalar_kind is ScalarKind.FLOAT:
        return _case1_witness(lattice, epsilon, config)
    try:
        found = minimal_rational_subspace(lattice)
    except AxisPointPresent as exc:
        logger.info("first axis contains the lattice point u=%s", exc.u)
        return AxisPoint(exc.u, exc.coords)
    if found[0] == lattice.dim:
        return _case1_witness(lattice, epsilon, config)
    return case2_empty_cylinder(lattice, epsilon, config, found)


def dichotomy_ladder(lattice: Lattice, epsilons: Sequence = DEFAULT_EPSILONS,
                     config: DavenportConfig = DavenportConfig()) -> Union[AxisPoint, List[LadderRow]]:
    """dichotomy_witness over a sequence of epsilons; grid failures become marked rows."""
    rows: List[LadderRow] = []
    for eps in epsilons:
        eps = parse_rational(eps)
        try:
            witness = dichotomy_witness(lattice, eps, config)
        except GridExhausted as exc:
            logger.warning("epsilon %g: %s", float(eps), exc)
            rows.append(LadderRow(eps, error=str(exc), best=exc.best))
            continue
        if isinstance(witness, AxisPoint):
            return witness
        logger.info("epsilon %g: %s witness at t=%.6g with exponent %.6g", float(eps), witness.case_tag,
                    witness.t_witness, witness.gamma_witness)
        rows.append(LadderRow(eps, witness))
    return rows


def classify_uniform_exponent(lattice: Lattice, epsilon=Fraction(1, 10),
                              config: DavenportConfig = DavenportConfig()) -> UniformClassification:
    """Check every coordinate axis for lattice points.

    All axes inhabited means a diagonal image of an integer lattice (infinite exponent); otherwise
    the first free axis is moved to the front and a cylinder witness is built around it.
    """
    if lattice.scalar_kind is ScalarKind.FLOAT:
        raise InputError("axis classification needs an exact lattice")
    d = lattice.dim
    found: List[AxisPoint] = []
    for axis in range(d):
        order = [axis] + [i for i in range(d) if i != axis]
        moved = lattice.permuted(order)
        try:
            minimal_rational_subspace(moved)
        except AxisPointPresent as exc:
            coords = [None] * d
            for k, i in enumerate(order):
                coords[i] = exc.coords[k]
            found.append(AxisPoint(exc.u, tuple(coords), axis))
            continue
        witness = dichotomy_witness(moved, epsilon, config)
        return UniformClassification(False, tuple(found), axis, witness)
    return UniformClassification(True, tuple(found))
