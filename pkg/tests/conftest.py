import pytest

from harvest.fields import ConstantSpinor, DetectorConfig, FieldModel
from harvest.switching import GaussianSwitching

ACCEPTANCE_LINES = []


def pair(kind="RealScalar", mass=0.0, sigma=0.2, gap=1.0, L=5.0, a=(0.0, 0.0, 0.0),
         t0=0.0, states=("Excited", "Ground"), eta=(1, 0, 0, 0), gap2=None, sigma2=None):
    """Model and detector pair: detector 1 at the origin, detector 2 at (0, 0, L)."""
    spinor = ConstantSpinor(eta) if kind == "DiracFermion" else None
    d1 = DetectorConfig(gap, sigma, GaussianSwitching(), (0.0, 0.0, 0.0), a, spinor, states[0])
    d2 = DetectorConfig(gap if gap2 is None else gap2, sigma if sigma2 is None else sigma2,
                        GaussianSwitching(1.0, t0), (0.0, 0.0, L), a, spinor, states[1])
    return FieldModel(kind, mass), d1, d2


@pytest.fixture
def verdict():
    """Record a one-line PASS/FAIL for an acceptance criterion, then assert."""
    def _verdict(n, ok, detail):
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return _verdict


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
