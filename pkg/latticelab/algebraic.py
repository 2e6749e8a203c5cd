"""Algebraic lattices of totally real fields and their norm form."""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import sympy

from . import linalg
from .arith import DEFAULT_PRECISION_BITS, Interval, MinimalPolynomial, NumberFieldElement, real_roots
from .errors import BudgetExceeded, InputError, NotTotallyReal, UnsupportedScalarKind
from .lattice_core import Lattice, ScalarKind, lattice_from_basis

logger = logging.getLogger(__name__)

NORM_SCAN_BUDGET = 10 ** 7
REPORTED_MINIMIZERS = 16


@dataclass(frozen=True)
class AlgebraicLatticeSpec:
    minpoly: MinimalPolynomial
    precision_bits: int = DEFAULT_PRECISION_BITS
    basis_choice: str = "power"


@dataclass(frozen=True)
class NormFormReport:
    bound: int
    scanned: int
    min_abs_norm: Optional[int]
    minimizers: Tuple[Tuple[int, ...], ...]
    units: Tuple[Tuple[int, ...], ...]
    violations: Tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def build_algebraic_lattice(spec: AlgebraicLatticeSpec) -> Lattice:
    """Lattice of the order Z[theta] under all real embeddings.

    Row j of the basis is (sigma_1(theta^j), ..., sigma_d(theta^j)) with the embeddings in
    ascending order of their roots, so each point's coordinates are the conjugates of one
    field element.
    """
    p = spec.minpoly
    d = p.degree
    if spec.basis_choice != "power":
        raise InputError(f"unknown basis choice {spec.basis_choice!r}")
    if d < 2:
        raise InputError("an algebraic lattice needs a polynomial of degree at least 2")
    if p.coefficients[0] != 1:
        raise InputError(f"{p} is not monic")
    roots = real_roots(p, spec.precision_bits)
    if len(roots) < d:
        raise NotTotallyReal(f"{p} has {len(roots)} real roots out of {d}")
    theta = NumberFieldElement.generator(p)
    rows = [[theta ** j] * d for j in range(d)]
    lattice = lattice_from_basis(rows, ScalarKind.NUMBERFIELD, p, tuple(range(d)), spec.precision_bits)
    logger.debug("algebraic lattice of %s has |det| in %s", p, lattice.det_abs)
    return lattice


def discriminant(minpoly: MinimalPolynomial) -> int:
    return int(sympy.discriminant(minpoly.poly()))


def determinant_matches_discriminant(lattice: Lattice) -> bool:
    """det^2 = |disc| within interval overlap."""
    return (lattice.det_abs ** 2).contains(abs(discriminant(lattice.minpoly)))


def _canonical(u: Tuple[int, ...]) -> bool:
    return next((x for x in u if x), 0) > 0


def norm_form_check(lattice: Lattice, bound: int, budget: int = NORM_SCAN_BUDGET,
                    bits: int = DEFAULT_PRECISION_BITS) -> NormFormReport:
    """Scan 0 < |u| <= bound: the product of coordinates is the norm of one field element.

    Norms are computed exactly as determinants of multiplication matrices and compared with
    the interval product of the coordinates; a non-integral or zero norm, or an interval
    product missing the exact value, is reported as a violation.
    """
    if not lattice.conjugate_layout:
        raise UnsupportedScalarKind("norm form checks need a lattice of conjugate embeddings")
    d = lattice.dim
    if bound <= 0:
        return NormFormReport(bound, 0, None, (), (), ())
    count = (2 * bound + 1) ** d
    if count > budget:
        raise BudgetExceeded(f"norm scan over [-{bound}, {bound}]^{d} exceeds the budget {budget}")
    elements = [row[0] for row in lattice.basis]
    matrices = [e.multiplication_matrix() for e in elements]
    integral = all(x.denominator == 1 for m in matrices for row in m for x in row)
    if integral:
        matrices = [[[int(x) for x in row] for row in m] for m in matrices]

    scanned = 0
    best: Optional[int] = None
    minimizers: List[Tuple[int, ...]] = []
    units: List[Tuple[int, ...]] = []
    violations: List[str] = []
    for u in itertools.product(range(-bound, bound + 1), repeat=d):
        if not _canonical(u):
            continue
        scanned += 1
        combined = [[sum(k * m[i][j] for k, m in zip(u, matrices) if k) for j in range(d)] for i in range(d)]
        norm = linalg.integer_det(combined) if integral else linalg.det(combined)
        if Fraction(norm).denominator != 1 or norm == 0:
            violations.append(f"u={u}: norm {norm} is not a nonzero integer")
            continue
        norm = abs(int(norm))
        product = Interval.exact(1, bits)
        for z in lattice.point_intervals(u, bits):
            product = product * abs(z)
        if not product.contains(norm):
            violations.append(f"u={u}: coordinate product {product} misses |norm| = {norm}")
        if best is None or norm < best:
            best, minimizers = norm, [u]
        elif norm == best and len(minimizers) < REPORTED_MINIMIZERS:
            minimizers.append(u)
        if norm == 1:
            units.append(u)
    logger.info("norm scan of %d elements: min |norm| = %s, %d units, %d violations",
                scanned, best, len(units), len(violations))
    return NormFormReport(bound, scanned, best, tuple(minimizers), tuple(units), tuple(violations))
