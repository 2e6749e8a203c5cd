import logging
from fractions import Fraction

from ..boxes import box_volume
from ..enumeration import EmptinessCertificate, Verdict, is_empty, successive_minima
from ..io import load_lattice, write_certificates
from . import approx_point, print_table, register_command, require

logger = logging.getLogger(__name__)


@register_command("minima")
def cmd_minima(config) -> int:
    """Successive minima of P(weights) with witnesses and the Minkowski sandwich."""
    path = require(config.lattice_path, "--lattice", "minima")
    w = require(config.weights, "--weights", "minima")
    lattice = load_lattice(path, config.precision_bits, config.assert_irreducible)
    enumeration = config.enumeration_config()
    result = successive_minima(lattice, w, enumeration)

    rows = [[k + 1, mu, list(p.u), approx_point(lattice, p.u)]
            for k, (mu, p) in enumerate(zip(result.mu, result.witnesses))]
    print_table(["k", "mu", "u", "z"], rows)
    lower, middle, upper = result.minkowski_terms(lattice.det_abs)
    violation = result.minkowski_violation(lattice.det_abs)
    print(f"det={lattice.det_abs} volume={box_volume(w)[0]} product_volume={middle}")
    print(f"minkowski: {lower} <= {middle} <= {upper}: {'VIOLATED ' + violation if violation else 'ok'}")
    if violation:
        logger.error("Minkowski sandwich violated: %s", violation)

    if config.emits("certs"):
        certificates = []
        below = result.mu[0].lower_fraction() * (1 - enumeration.bisection_width)
        if below > 0:
            certificates.append(("below-mu1", is_empty(lattice, w.dilated(below), enumeration)))
        for k, (mu, point) in enumerate(zip(result.mu, result.witnesses)):
            box = w.dilated(Fraction(mu.upper_fraction()))
            certificates.append((f"mu{k + 1}-witness", EmptinessCertificate(box, Verdict.INHABITED, 0, 0.0, point,
                                                                             config.precision_bits)))
        write_certificates(config.out_dir / "minima.certs.json", lattice, certificates)
    return 1 if violation else 0
