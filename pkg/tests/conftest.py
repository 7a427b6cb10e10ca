import json

import numpy as np
import pytest

from harmonic_contact import (
    PowerLawPotential,
    ReferenceConstants,
    TabulatedPotential,
    VolumetricEllipsoidPotential,
)

ELL_SPEEDS = (0.5, 0.99, 1.5)
ELL_MASS = 0.05
ELL_REFS = ReferenceConstants(K=1.0, M=0.75)


def make_ellipsoid():
    return VolumetricEllipsoidPotential(a=0.015, b=0.008, c=0.008, K_n=1e8, alpha=0.5)


def make_tabulated():
    # smooth stiffening law sampled on a dense grid; PCHIP reproduces it closely
    q = np.linspace(0.0, 0.02, 401)
    U = 2.0e5 * q**2.5 + 50.0 * q**2
    return TabulatedPotential(q, U, source="synthetic q^2.5 + q^2")


@pytest.fixture
def ellipsoid():
    return make_ellipsoid()


@pytest.fixture
def tabulated():
    return make_tabulated()


@pytest.fixture
def linear_spring():
    return PowerLawPotential(k=1.0, p=1.0)


@pytest.fixture
def refs():
    return ELL_REFS


@pytest.fixture
def ellipsoid_config(tmp_path):
    doc = {
        "potential": {"type": "ellipsoid", "a": 0.015, "b": 0.008, "c": 0.008,
                      "K_n": 1e8, "alpha": 0.5},
        "m": ELL_MASS,
        "v0": list(ELL_SPEEDS),
        "refs": {"K": 1.0, "M": 0.75},
        "damping": {"C0": 0.5},
        "output": {"dir": str(tmp_path / "out"), "prefix": "ellipsoid"},
    }
    path = tmp_path / "ellipsoid.json"
    path.write_text(json.dumps(doc))
    return path


def write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def rel(a, b):
    return abs(a - b) / abs(b) if b != 0 else abs(a)





_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion."""
    def record(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
