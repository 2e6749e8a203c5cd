import logging
from typing import List, Tuple

from ..davenport import AxisPoint, CylinderWitness, classify_uniform_exponent, dichotomy_ladder
from ..enumeration import EmptinessCertificate
from ..errors import GridExhausted
from ..io import load_lattice, write_certificates
from ..lattice_core import Lattice
from . import approx_point, print_table, register_command, require

logger = logging.getLogger(__name__)

HEADERS = ["eps", "t_witness", "gamma_witness", "volume", "case", "p", "delta", "verdict"]


def _row(witness: CylinderWitness) -> list:
    delta = str(witness.delta) if witness.delta is not None else "-"
    gamma = repr(witness.gamma_witness) if witness.gamma_witness is not None else "-"
    return [repr(float(witness.epsilon)), repr(witness.t_witness), gamma, repr(float(witness.volume)),
            witness.case_tag, witness.p, delta, witness.certificate.verdict.value]


def _print_axis(lattice: Lattice, point: AxisPoint):
    print(f"axis point u={list(point.u)} z={approx_point(lattice, point.u)} on axis {point.axis}; "
          "uniform exponent infinite")


def _classify(config, lattice: Lattice) -> int:
    result = classify_uniform_exponent(lattice, config.epsilons[0], config.davenport_config())
    for point in result.axis_points:
        _print_axis(lattice, point)
    if result.infinite:
        print("every axis holds lattice points: diagonal image of an integer lattice; uniform exponent infinite")
        return 0
    print(f"axis {result.free_axis} is free of lattice points; uniform exponent zero")
    print_table(HEADERS, [_row(result.witness)])
    if config.emits("certs"):
        order = [result.free_axis] + [i for i in range(lattice.dim) if i != result.free_axis]
        write_certificates(config.out_dir / "dichotomy.certs.json", lattice.permuted(order),
                           [(f"axis{result.free_axis}", result.witness.certificate)])
    return 0


@register_command("dichotomy")
def cmd_dichotomy(config) -> int:
    """Cylinder witnesses across the epsilon ladder, or the lattice point on the first axis."""
    path = require(config.lattice_path, "--lattice", "dichotomy")
    lattice = load_lattice(path, config.precision_bits, config.assert_irreducible)
    if config.all_axes:
        return _classify(config, lattice)

    ladder = dichotomy_ladder(lattice, config.epsilons, config.davenport_config())
    if isinstance(ladder, AxisPoint):
        _print_axis(lattice, ladder)
        return 0
    rows = []
    certificates: List[Tuple[str, EmptinessCertificate]] = []
    for row in ladder:
        if row.witness is None:
            rows.append([repr(float(row.epsilon)), "-", "-", "-", "GridExhausted", "-", "-", f"best={row.best!r}"])
            continue
        rows.append(_row(row.witness))
        certificates.append((f"eps={row.epsilon}", row.witness.certificate))
    print_table(HEADERS, rows)
    if config.emits("certs") and certificates:
        write_certificates(config.out_dir / "dichotomy.certs.json", lattice, certificates)
    if not certificates:
        logger.error("no epsilon produced a witness")
        return GridExhausted.exit_code
    return 0
