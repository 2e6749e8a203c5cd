import json
import sys
from pathlib import Path

import pytest

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from latticelab.arith import MinimalPolynomial  # noqa: E402
from latticelab.davenport import DavenportConfig  # noqa: E402
from latticelab.enumeration import EnumerationConfig  # noqa: E402
from latticelab.exponents import EstimatorConfig  # noqa: E402
from latticelab.lattice_core import ScalarKind, lattice_from_basis  # noqa: E402
from latticelab.validators import DEFAULT_VALIDATORS, load_validators  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--acceptance", action="store_true", default=False, help="run the full acceptance trial counts")


@pytest.fixture
def acceptance(request):
    return request.config.getoption("--acceptance")


@pytest.fixture
def trials(acceptance):
    """Pick the quick or the full trial count for a randomized suite."""

    def pick(quick, full):
        return full if acceptance else quick

    return pick


@pytest.fixture(autouse=True)
def validators():
    load_validators(DEFAULT_VALIDATORS)


@pytest.fixture
def z2():
    return lattice_from_basis([[1, 0], [0, 1]])


@pytest.fixture
def z3():
    return lattice_from_basis([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


@pytest.fixture
def cubic_minpoly():
    return MinimalPolynomial.parse("x^3 - 3x + 1")


@pytest.fixture
def cubic_lattice(cubic_minpoly):
    """Conjugate embedding of Z[theta], theta^3 - 3 theta + 1 = 0; |det| = 9."""
    from latticelab.algebraic import AlgebraicLatticeSpec, build_algebraic_lattice

    return build_algebraic_lattice(AlgebraicLatticeSpec(cubic_minpoly))


@pytest.fixture
def sqrt2():
    return MinimalPolynomial.parse("x^2 - 2")


@pytest.fixture
def block3(sqrt2):
    """(a, a sqrt2 + b, c): the first axis lies in a rank-2 rational subspace."""
    return lattice_from_basis([[1, "t", 0], [0, 1, 0], [0, 0, 1]], ScalarKind.NUMBERFIELD, sqrt2)


@pytest.fixture
def golden_lattice():
    golden = MinimalPolynomial.parse("x^2 - x - 1")
    return lattice_from_basis([[1, "t"], [0, 1]], ScalarKind.NUMBERFIELD, golden, (-1, -1))


@pytest.fixture
def enumeration_config():
    return EnumerationConfig(node_budget=200_000)


@pytest.fixture
def davenport_config(enumeration_config):
    return DavenportConfig(grid_cap=2 ** 24, enumeration=enumeration_config)


@pytest.fixture
def estimator_config(enumeration_config):
    return EstimatorConfig(shape_samples=12, refinement_steps=4, bisection_steps=5, enumeration=enumeration_config)


@pytest.fixture
def write_payload(tmp_path):
    def write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return path

    return write
