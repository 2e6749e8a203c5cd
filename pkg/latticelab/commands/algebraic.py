import logging

from ..algebraic import AlgebraicLatticeSpec, build_algebraic_lattice, discriminant, norm_form_check
from ..arith import MinimalPolynomial
from ..io import lattice_to_payload, write_json
from . import register_command, require

logger = logging.getLogger(__name__)


@register_command("algebraic")
def cmd_algebraic(config) -> int:
    """Algebraic lattice of --minpoly: determinant, discriminant and a norm-form scan."""
    text = require(config.minpoly, "--minpoly", "algebraic")
    minpoly = MinimalPolynomial.parse(text, config.assert_irreducible)
    lattice = build_algebraic_lattice(AlgebraicLatticeSpec(minpoly, config.precision_bits))
    disc = discriminant(minpoly)
    matches = (lattice.det_abs ** 2).contains(abs(disc))
    print(f"minpoly={minpoly} degree={minpoly.degree}")
    print(f"det={lattice.det_abs} discriminant={disc} det^2=|disc|: {'yes' if matches else 'NO'}")

    report = norm_form_check(lattice, config.norm_bound, bits=config.precision_bits)
    print(f"norm scan |u|<={report.bound}: {report.scanned} elements, min |norm|={report.min_abs_norm}, "
          f"{len(report.units)} units")
    for u in report.minimizers:
        print(f"minimizer u={list(u)}")
    for problem in report.violations:
        print(f"violation {problem}")
    write_json(config.out_dir / "algebraic.json", lattice_to_payload(lattice))
    if not matches or not report.ok:
        logger.error("algebraic lattice checks failed")
        return 1
    return 0
