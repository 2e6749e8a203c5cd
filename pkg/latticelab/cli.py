import argparse
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import FrozenSet, List, Optional, Tuple

from .arith import DEFAULT_PRECISION_BITS, PRECISION_CAP_BITS, parse_rational
from .boxes import Weights, parse_weights
from .davenport import DEFAULT_EPSILONS, DavenportConfig
from .enumeration import EnumerationConfig
from .errors import LatticeLabError
from .exponents import ExponentKind, EstimatorConfig, t_grid
from .validators import DEFAULT_VALIDATORS

COMMANDS = ("minima", "davenport", "dichotomy", "exponent", "algebraic", "oracle-cf", "verify")
EMIT_CHOICES = frozenset({"csv", "svg", "certs"})

GridSpec = Tuple[float, float, str, int]


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs; built once from the parsed arguments."""

    command: str
    lattice_path: Optional[Path] = None
    theta_path: Optional[Path] = None
    certificates_path: Optional[Path] = None
    weights: Optional[Weights] = None
    grid_spec: Optional[GridSpec] = None
    t_max: Optional[float] = None
    epsilons: Tuple[Fraction, ...] = DEFAULT_EPSILONS
    kind: Optional[ExponentKind] = None
    minpoly: Optional[str] = None
    assert_irreducible: bool = False
    all_axes: bool = False
    quotients: Optional[str] = None
    count: Optional[int] = None
    norm_bound: int = 10
    precision_bits: int = DEFAULT_PRECISION_BITS
    precision_cap: int = PRECISION_CAP_BITS
    node_budget: int = 5_000_000
    shape_samples: int = 200
    threads: int = 1
    seed: int = 0
    out_dir: Path = Path("out")
    emit: FrozenSet[str] = frozenset({"csv", "certs"})
    validators: Tuple[str, ...] = tuple(DEFAULT_VALIDATORS)
    debug: bool = False

    def enumeration_config(self) -> EnumerationConfig:
        return EnumerationConfig(precision_bits=self.precision_bits, precision_cap=self.precision_cap,
                                 node_budget=self.node_budget)

    def davenport_config(self) -> DavenportConfig:
        return DavenportConfig(precision_bits=self.precision_bits, threads=self.threads,
                               enumeration=self.enumeration_config())

    def estimator_config(self) -> EstimatorConfig:
        return EstimatorConfig(shape_samples=self.shape_samples, seed=self.seed, threads=self.threads,
                               precision_bits=self.precision_bits, precision_cap=self.precision_cap,
                               enumeration=self.enumeration_config())

    def grid(self) -> Tuple[float, ...]:
        """The t-grid; without --t-grid it runs geometrically from 10 to --Tmax (default 1e4)."""
        if self.grid_spec is not None:
            return t_grid(*self.grid_spec)
        return t_grid(10.0, self.t_max if self.t_max is not None else 1e4, "geom", 10)

    def resolved_t_max(self) -> float:
        if self.t_max is not None:
            return self.t_max
        return self.grid()[-1]

    def emits(self, artifact: str) -> bool:
        return artifact in self.emit


def _weights(text: str) -> Weights:
    try:
        return parse_weights(text)
    except LatticeLabError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _grid_spec(text: str) -> GridSpec:
    parts = text.split(":")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"expected start:stop:{{geom|lin}}:count, got {text!r}")
    try:
        spec = (float(parts[0]), float(parts[1]), parts[2], int(parts[3]))
        t_grid(*spec)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"malformed t-grid {text!r}") from exc
    except LatticeLabError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return spec


def _epsilons(text: str) -> Tuple[Fraction, ...]:
    try:
        values = tuple(parse_rational(part) for part in text.split(","))
    except LatticeLabError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if any(not 0 < e < 1 for e in values):
        raise argparse.ArgumentTypeError(f"epsilons must lie in (0, 1), got {text!r}")
    return values


def _emit(text: str) -> FrozenSet[str]:
    chosen = frozenset(part.strip() for part in text.split(",") if part.strip())
    unknown = chosen - EMIT_CHOICES
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown artifacts {sorted(unknown)}; choose from {sorted(EMIT_CHOICES)}")
    return chosen


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not value > 1:
        raise argparse.ArgumentTypeError(f"must exceed 1, got {text!r}")
    return value


def parse_args(args: Optional[List[str]] = None) -> argparse.Namespace:
    """Parses command-line arguments."""
    parser = argparse.ArgumentParser(prog="latticelab", description="Geometry-of-numbers experiment harness")
    parser.add_argument("command", choices=COMMANDS, help="Operation to run")
    parser.add_argument("--lattice", type=Path, default=None, help="Lattice JSON file")
    parser.add_argument("--theta", type=Path, default=None, help="Theta matrix JSON file")
    parser.add_argument("--certificates", type=Path, default=None, help="Certificate sidecar to replay (verify)")
    parser.add_argument("--weights", type=_weights, default=None, help="Box half-widths, comma separated")
    parser.add_argument("--t-grid", dest="t_grid", type=_grid_spec, default=None,
                        help="Scale grid as start:stop:{geom|lin}:count")
    parser.add_argument("--Tmax", dest="t_max", type=_positive_float, default=None, help="Largest scale searched")
    parser.add_argument("--eps", type=_epsilons, default=DEFAULT_EPSILONS, help="Cylinder radii, comma separated")
    parser.add_argument("--kind", type=ExponentKind, choices=list(ExponentKind), default=None,
                        metavar="{" + ",".join(k.value for k in ExponentKind) + "}",
                        help="Exponent to estimate")
    parser.add_argument("--minpoly", default=None, help="Minimal polynomial in x, e.g. 'x^3 - 3x + 1'")
    parser.add_argument("--assert-irreducible", default=False, action="store_true",
                        help="Accept a polynomial of degree > 3 as irreducible without checking")
    parser.add_argument("--all-axes", default=False, action="store_true",
                        help="Classify the uniform exponent by checking every coordinate axis")
    parser.add_argument("--quotients", default=None, help="Continued fraction 'a0;a1,a2,...' (trailing ... = ones)")
    parser.add_argument("--K", dest="count", type=int, default=None, help="Number of convergents")
    parser.add_argument("--N", dest="norm_bound", type=int, default=10, help="Coefficient bound of the norm scan")
    parser.add_argument("--precision-bits", type=int, default=DEFAULT_PRECISION_BITS, help="Working precision")
    parser.add_argument("--precision-cap", type=int, default=PRECISION_CAP_BITS, help="Largest precision tried")
    parser.add_argument("--node-budget", type=int, default=5_000_000, help="Enumeration node budget per box")
    parser.add_argument("--shape-samples", type=int, default=200, help="Quasi-random box shapes per scale")
    parser.add_argument("--threads", type=int, default=1, help="Worker threads")
    parser.add_argument("--seed", type=int, default=0, help="Seed for sampled shapes")
    parser.add_argument("--out-dir", type=Path, default=Path("out"), help="Directory for artifacts")
    parser.add_argument("--emit", type=_emit, default=frozenset({"csv", "certs"}),
                        help="Artifacts to write: csv,svg,certs")
    parser.add_argument(
        "--no-validation",
        default=False,
        action="store_true",
        help="Disable input file validation",
    )
    parser.add_argument("--debug", default=False, action="store_true", help="Debug mode")
    parsed_args = parser.parse_args(args)

    if parsed_args.precision_bits < 16 or parsed_args.precision_cap < parsed_args.precision_bits:
        parser.error("argument --precision-bits: need 16 <= precision bits <= precision cap")
    if parsed_args.threads < 1:
        parser.error("argument --threads: must be at least 1")

    # Default validators to load
    parsed_args.validators = list(DEFAULT_VALIDATORS) if not parsed_args.no_validation else []

    return parsed_args


def build_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        lattice_path=args.lattice,
        theta_path=args.theta,
        certificates_path=args.certificates,
        weights=args.weights,
        grid_spec=args.t_grid,
        t_max=args.t_max,
        epsilons=tuple(args.eps),
        kind=args.kind,
        minpoly=args.minpoly,
        assert_irreducible=args.assert_irreducible,
        all_axes=args.all_axes,
        quotients=args.quotients,
        count=args.count,
        norm_bound=args.norm_bound,
        precision_bits=args.precision_bits,
        precision_cap=args.precision_cap,
        node_budget=args.node_budget,
        shape_samples=args.shape_samples,
        threads=args.threads,
        seed=args.seed,
        out_dir=args.out_dir,
        emit=args.emit,
        validators=tuple(args.validators),
        debug=args.debug,
    )
