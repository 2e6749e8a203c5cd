import pytest

from latticelab import validators as registry
from latticelab.boxes import Weights
from latticelab.enumeration import Verdict, is_empty, verify_certificate
from latticelab.errors import InputError, ParseError
from latticelab.exponents import ThetaMatrix, regular_estimate
from latticelab.io import (
    TRACE_COLUMNS,
    lattice_from_payload,
    lattice_to_payload,
    load_certificates,
    load_lattice,
    read_trace_csv,
    theta_from_payload,
    theta_to_payload,
    trace_sidecar,
    write_certificates,
    write_trace_csv,
)


@pytest.mark.parametrize("payload", [
    [],
    {"basis": []},
    {"basis": [[1, 0], [0]]},
    {"basis": [[1, True], [0, 1]]},
    {"scalar": "complex", "basis": [[1]]},
    {"scalar": "numberfield", "basis": [[1]]},
    {"scalar": "numberfield", "basis": [[1, 0], [0, 1]], "minpoly": "x^2 - 2", "embeddings": [1]},
    {"dim": 3, "basis": [[1, 0], [0, 1]]},
])
def test_lattice_validator_rejects(payload):
    with pytest.raises(ParseError):
        registry.run_validators("lattice", payload, "test.json")


@pytest.mark.parametrize("payload", [
    {"m": 0, "n": 1, "rows": [[]]},
    {"m": 2, "n": 1, "rows": [[1]]},
    {"m": 1, "n": 1, "rows": [["t"]], "minpoly": 2},
    {"m": 1, "n": 1, "rows": [[1]], "scalar": "complex"},
    {"m": 1, "n": 1, "rows": [["t"]], "minpoly": "x^2 - 2", "embedding": "largest"},
])
def test_theta_validator_rejects(payload):
    with pytest.raises(ParseError):
        registry.run_validators("theta", payload)


def test_validation_can_be_disabled(write_payload):
    path = write_payload("ragged.json", {"basis": [[1, 0], [0]]})
    with pytest.raises(ParseError):
        load_lattice(path)
    registry.load_validators([])
    assert registry.validators == []
    with pytest.raises(InputError):
        load_lattice(path)


def test_reloading_validators_does_not_duplicate():
    registry.load_validators(registry.DEFAULT_VALIDATORS)
    registry.load_validators(registry.DEFAULT_VALIDATORS)
    assert len(registry.validators) == 2


def test_numberfield_lattice_payload_is_exact(block3):
    payload = lattice_to_payload(block3)
    assert payload["scalar"] == "numberfield"
    assert payload["dim"] == 3
    assert payload["basis"][0][1] == "t"
    assert payload["minpoly"] == "x^2 - 2"
    again = lattice_from_payload(payload)
    assert again.basis == block3.basis
    assert again.embeddings == block3.embeddings


def test_theta_payload(sqrt2):
    theta = ThetaMatrix.of([["t", "1/2"]], sqrt2)
    payload = theta_to_payload(theta)
    assert (payload["m"], payload["n"]) == (2, 1)
    assert theta_from_payload(payload).rows == theta.rows


def test_certificate_sidecar_replays(tmp_path, golden_lattice, enumeration_config):
    empty = is_empty(golden_lattice, Weights.of(["1/2", "1/2"]), enumeration_config)
    inhabited = is_empty(golden_lattice, Weights.of([6, "1/6"]), enumeration_config)
    assert empty.verdict is Verdict.CERTIFIED_EMPTY
    assert inhabited.verdict is Verdict.INHABITED
    path = write_certificates(tmp_path / "golden.certs.json", golden_lattice,
                              [("empty", empty), ("inhabited", inhabited)])
    lattice, certificates = load_certificates(path)
    assert [label for label, _ in certificates] == ["empty", "inhabited"]
    assert certificates[1][1].witness.u == inhabited.witness.u
    assert all(verify_certificate(lattice, c) for _, c in certificates)


def test_malformed_certificate_file(write_payload):
    with pytest.raises(ParseError):
        load_certificates(write_payload("certs.json", {"certificates": []}))
    lattice = {"basis": [[1, 0], [0, 1]]}
    with pytest.raises(ParseError):
        load_certificates(write_payload("certs.json", {"lattice": lattice, "certificates": [{"box": ["1"]}]}))


def test_trace_csv_and_sidecar(tmp_path, z2, estimator_config):
    trace = regular_estimate(z2, 50, config=estimator_config)
    path = write_trace_csv(tmp_path / "regular.csv", trace)
    rows = read_trace_csv(path)
    assert tuple(rows[0]) == TRACE_COLUMNS
    assert [row["t"] for row in rows] == list(trace.grid)
    assert [row["upper"] for row in rows] == list(trace.upper)
    sidecar = trace_sidecar(trace)
    assert sidecar["verdict"] == trace.verdict.value
    assert len(sidecar["profile"]) == len(trace.entries)
