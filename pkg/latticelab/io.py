"""Lattice and theta files, trace tables, certificate sidecars and convergence plots."""

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .arith import DEFAULT_PRECISION_BITS, MinimalPolynomial, NumberFieldElement, format_rational, parse_rational
from .boxes import Weights
from .enumeration import EmptinessCertificate, Verdict
from .errors import InputError, ParseError
from .exponents import ExponentTrace, ThetaMatrix
from .lattice_core import Lattice, ScalarKind, lattice_from_basis
from .validators import run_validators

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ("kind", "t", "lower", "upper", "witness_id")

matplotlib.rcParams["svg.hashsalt"] = "latticelab"


def read_json(path: Path) -> Any:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError as exc:
        raise InputError(f"{path}: no such file") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def write_json(path: Path, payload: Any) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
    logger.info("wrote %s", path)
    return path


# ---------------------------------------------------------------------------
# Lattices and theta matrices
# ---------------------------------------------------------------------------


def _format_scalar(value: Any) -> str:
    if isinstance(value, NumberFieldElement):
        return str(value)
    return format_rational(value)


def lattice_from_payload(payload: Dict[str, Any], precision_bits: int = DEFAULT_PRECISION_BITS,
                         assert_irreducible: bool = False) -> Lattice:
    kind = ScalarKind(payload.get("scalar", ScalarKind.RATIONAL.value))
    minpoly = None
    if kind is ScalarKind.NUMBERFIELD:
        asserted = assert_irreducible or bool(payload.get("assert_irreducible", False))
        minpoly = MinimalPolynomial.parse(payload["minpoly"], asserted)
    embeddings = payload.get("embeddings")
    return lattice_from_basis(payload["basis"], kind, minpoly, tuple(embeddings) if embeddings else None,
                              precision_bits)


def lattice_to_payload(lattice: Lattice) -> Dict[str, Any]:
    """Exact serialization: rationals as "p/q", field elements as polynomials in t."""
    payload: Dict[str, Any] = {
        "dim": lattice.dim,
        "scalar": lattice.scalar_kind.value,
        "basis": [[_format_scalar(x) for x in row] for row in lattice.basis],
    }
    if lattice.minpoly is not None:
        payload["minpoly"] = str(lattice.minpoly)
        payload["embeddings"] = list(lattice.embeddings)
        if lattice.minpoly.irreducibility_asserted:
            payload["assert_irreducible"] = True
    return payload


def load_lattice(path: Path, precision_bits: int = DEFAULT_PRECISION_BITS,
                 assert_irreducible: bool = False) -> Lattice:
    payload = read_json(path)
    run_validators("lattice", payload, str(path))
    lattice = lattice_from_payload(payload, precision_bits, assert_irreducible)
    logger.info("loaded %d-dimensional %s lattice from %s", lattice.dim, lattice.scalar_kind.value, path)
    return lattice


def theta_from_payload(payload: Dict[str, Any], assert_irreducible: bool = False) -> ThetaMatrix:
    minpoly = None
    if payload.get("minpoly"):
        asserted = assert_irreducible or bool(payload.get("assert_irreducible", False))
        minpoly = MinimalPolynomial.parse(payload["minpoly"], asserted)
    return ThetaMatrix.of(payload["rows"], minpoly, payload.get("embedding", -1), payload.get("scalar"))


def theta_to_payload(theta: ThetaMatrix) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        "m": theta.m,
        "n": theta.n,
        "scalar": theta.kind.value,
        "rows": [[_format_scalar(x) for x in row] for row in theta.rows],
    }
    if theta.minpoly is not None:
        payload["minpoly"] = str(theta.minpoly)
        payload["embedding"] = theta.embedding
    return payload


def load_theta(path: Path, assert_irreducible: bool = False) -> ThetaMatrix:
    payload = read_json(path)
    run_validators("theta", payload, str(path))
    theta = theta_from_payload(payload, assert_irreducible)
    logger.info("loaded %dx%d theta from %s", theta.n, theta.m, path)
    return theta


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


def certificate_to_payload(certificate: EmptinessCertificate, label: str = "") -> Dict[str, Any]:
    return {
        "label": label,
        "box": [format_rational(v) for v in certificate.box.values],
        "verdict": certificate.verdict.value,
        "enumeration_bound": certificate.enumeration_bound,
        "margin": certificate.margin,
        "witness": list(certificate.witness.u) if certificate.witness is not None else None,
        "precision_bits": certificate.precision_bits,
    }


def certificate_from_payload(payload: Dict[str, Any], lattice: Lattice) -> EmptinessCertificate:
    try:
        box = Weights(tuple(parse_rational(v) for v in payload["box"]))
        witness = payload.get("witness")
        return EmptinessCertificate(
            box=box,
            verdict=Verdict(payload["verdict"]),
            enumeration_bound=int(payload["enumeration_bound"]),
            margin=float(payload["margin"]),
            witness=lattice.point(witness) if witness is not None else None,
            precision_bits=int(payload.get("precision_bits", DEFAULT_PRECISION_BITS)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed certificate {payload!r}: {exc}") from exc


def write_certificates(path: Path, lattice: Lattice,
                       certificates: Sequence[Tuple[str, EmptinessCertificate]]) -> Path:
    """Sidecar holding the lattice and its certificates, replayable by `verify`."""
    return write_json(path, {
        "lattice": lattice_to_payload(lattice),
        "certificates": [certificate_to_payload(c, label) for label, c in certificates],
    })


def load_certificates(path: Path, precision_bits: int = DEFAULT_PRECISION_BITS
                      ) -> Tuple[Lattice, List[Tuple[str, EmptinessCertificate]]]:
    payload = read_json(path)
    if not isinstance(payload, dict) or "lattice" not in payload or "certificates" not in payload:
        raise ParseError(f"{path}: a certificate file needs 'lattice' and 'certificates'")
    run_validators("lattice", payload["lattice"], f"{path}:lattice")
    lattice = lattice_from_payload(payload["lattice"], precision_bits)
    certificates = [(item.get("label", ""), certificate_from_payload(item, lattice))
                    for item in payload["certificates"]]
    return lattice, certificates


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------


def write_trace_csv(path: Path, trace: ExponentTrace) -> Path:
    """One row per grid scale; floats are written with repr so reruns are byte-identical."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for entry in trace.entries:
            writer.writerow((trace.kind.value, repr(entry.t), repr(entry.lower), repr(entry.upper), entry.witness_id))
    logger.info("wrote %s", path)
    return path


def read_trace_csv(path: Path) -> List[Dict[str, Any]]:
    with open(path, encoding="utf-8", newline="") as handle:
        rows = list(csv.DictReader(handle))
    for row in rows:
        for column in ("t", "lower", "upper"):
            row[column] = float(row[column])
    return rows


def trace_sidecar(trace: ExponentTrace) -> Dict[str, Any]:
    """Witnesses plus the per-scale values that do not fit the five CSV columns."""
    return {
        "kind": trace.kind.value,
        "verdict": trace.verdict.value,
        "estimate": list(trace.estimate),
        "skipped": trace.skipped,
        "profile": [e.profile for e in trace.entries],
        "certified_lower": [e.certified_lower for e in trace.entries],
        "heuristic_lower": [e.heuristic_lower for e in trace.entries],
        "witnesses": trace.witnesses,
    }


def _finite(xs: Sequence[float], ys: Sequence[Optional[float]]) -> Tuple[List[float], List[float]]:
    pairs = [(x, y) for x, y in zip(xs, ys) if y is not None and math.isfinite(y)]
    return [x for x, _ in pairs], [y for _, y in pairs]


def plot_trace_svg(path: Path, trace: ExponentTrace, title: Optional[str] = None) -> Path:
    """Lower and upper bounds against log t; infinite values are left out."""
    path.parent.mkdir(parents=True, exist_ok=True)
    log_t = [math.log(t) for t in trace.grid]
    fig, ax = plt.subplots(figsize=(6, 4))
    try:
        for label, values, style in (("lower", trace.lower, "o-"), ("upper", trace.upper, "s--")):
            xs, ys = _finite(log_t, values)
            if xs:
                ax.plot(xs, ys, style, label=label)
        xs, ys = _finite(log_t, [e.certified_lower for e in trace.entries])
        if xs:
            ax.plot(xs, ys, ":", label="certified lower")
        ax.set_xlabel("log t")
        ax.set_ylabel("exponent")
        ax.set_title(title or f"{trace.kind.value} exponent ({trace.verdict.value})")
        if ax.get_legend_handles_labels()[0]:
            ax.legend()
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    logger.info("wrote %s", path)
    return path
