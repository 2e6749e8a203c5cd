import logging

from ..errors import InputError
from ..exponents import (
    ExponentKind,
    ExponentTrace,
    mult_estimate,
    mult_uniform_estimate,
    regular_estimate,
    uniform_estimate,
    weak_uniform_estimate,
)
from ..io import (
    load_lattice,
    load_theta,
    plot_trace_svg,
    trace_sidecar,
    write_certificates,
    write_json,
    write_trace_csv,
)
from . import register_command, require

logger = logging.getLogger(__name__)


def _estimate(config, kind: ExponentKind):
    grid = config.grid()
    estimator = config.estimator_config()
    if kind in (ExponentKind.MULT, ExponentKind.MULT_UNIFORM):
        path = require(config.theta_path, "--theta", f"exponent --kind {kind.value}")
        theta = load_theta(path, config.assert_irreducible)
        if kind is ExponentKind.MULT:
            return None, mult_estimate(theta, config.resolved_t_max(), grid, estimator)
        return None, mult_uniform_estimate(theta, grid, config.t_max, estimator)
    path = require(config.lattice_path, "--lattice", f"exponent --kind {kind.value}")
    lattice = load_lattice(path, config.precision_bits, config.assert_irreducible)
    if kind is ExponentKind.REGULAR:
        return lattice, regular_estimate(lattice, config.resolved_t_max(), grid, estimator)
    if kind is ExponentKind.WEAK_UNIFORM:
        return lattice, weak_uniform_estimate(lattice, grid, config.t_max, estimator)
    return lattice, uniform_estimate(lattice, grid, estimator)


def _write(config, lattice, trace: ExponentTrace):
    stem = trace.kind.value
    if config.emits("csv"):
        write_trace_csv(config.out_dir / f"{stem}.csv", trace)
        write_json(config.out_dir / f"{stem}.witnesses.json", trace_sidecar(trace))
    if config.emits("svg"):
        plot_trace_svg(config.out_dir / f"{stem}.svg", trace)
    certificates = [(e.witness_id, e.certificate) for e in trace.entries if e.certificate is not None]
    if config.emits("certs") and lattice is not None and certificates:
        write_certificates(config.out_dir / f"{stem}.certs.json", lattice, certificates)


@register_command("exponent")
def cmd_exponent(config) -> int:
    """Trace of an exponent estimator over the t-grid and its final verdict line."""
    if config.kind is None:
        raise InputError("--kind is required for exponent")
    lattice, trace = _estimate(config, config.kind)
    _write(config, lattice, trace)
    lower, upper = trace.estimate
    print(f"kind={trace.kind.value} lower={lower!r} upper={upper!r} verdict={trace.verdict.value}")
    return 0
