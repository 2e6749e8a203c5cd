import logging
import math
from fractions import Fraction

from ..boxes import Weights, box_volume, renormalize
from ..davenport import davenport_empty_box
from ..io import load_lattice, write_certificates
from . import print_table, register_command, require

logger = logging.getLogger(__name__)


@register_command("davenport")
def cmd_davenport(config) -> int:
    path = require(config.lattice_path, "--lattice", "davenport")
    lattice = load_lattice(path, config.precision_bits, config.assert_irreducible)
    d = lattice.dim
    w = config.weights if config.weights is not None else Weights((Fraction(1),) * d)
    if w.dim == d and not w.degenerate and abs(sum(math.log(v) for v in w.values)) > 1e-9:
        logger.info("renormalizing weights %s to product 1", w)
        w = renormalize(w, config.precision_bits)
    result = davenport_empty_box(lattice, w, config.davenport_config())

    volume, _ = box_volume(result.lambda_prime)
    bound = lattice.det_abs * (Fraction(2 * result.c) ** d / math.factorial(d))
    print_table(["i", "lambda", "mu", "lambda_prime"],
                [[i, float(w.values[i]), float(result.minima.mu_points[result.permutation[i]]),
                  float(result.lambda_prime.values[i])] for i in range(d)])
    print(f"permutation={list(result.permutation)} c={float(result.c)!r} supremum={result.c_supremum}")
    print(f"verdict={result.certificate.verdict.value} volume={float(volume)!r} lower_bound={bound}")
    if config.emits("certs"):
        write_certificates(config.out_dir / "davenport.certs.json", lattice, [("davenport", result.certificate)])
    return 0
