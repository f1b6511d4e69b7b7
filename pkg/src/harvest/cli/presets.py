"""Desk-scale presets for the published figure families.

Curve values inside a figure (masses, gaps, widths, separations) are not all
given alongside the figures, so representative values are used. Heat maps
are 40 x 40.
"""

from __future__ import annotations

from ..fields import ConstantSpinor, DetectorConfig, FieldModel, InitialState
from ..switching import GaussianSwitching
from .config import Axis, SweepSpec

L_PATH = "detector2.position.z"
GAP = "detectors.gap"
SIGMA = "detectors.sigma"
MASS = "model.mass"
AZ = "detectors.phase_vector.z"
AX = "detectors.phase_vector.x"
T0 = "detector2.switching.center"


def _lin(a, b, n):
    step = (b - a) / (n - 1)
    return tuple(a + i * step for i in range(n - 1)) + (float(b),)


def make_spec(name, kind, *, mass=0.0, gap=1.0, sigma=0.1, L=5.0, axes=(), title="",
              plot="auto") -> SweepSpec:
    spinor = ConstantSpinor((1, 0, 0, 0)) if kind == "DiracFermion" else None
    d1 = DetectorConfig(gap, sigma, GaussianSwitching(), (0.0, 0.0, 0.0), (0.0, 0.0, 0.0), spinor,
                        InitialState.EXCITED)
    d2 = DetectorConfig(gap, sigma, GaussianSwitching(), (0.0, 0.0, L), (0.0, 0.0, 0.0), spinor,
                        InitialState.GROUND)
    return SweepSpec(FieldModel(kind, mass), (d1, d2), tuple(Axis(p, v) for p, v in axes),
                     output=f"{name}.csv", plot_style=plot, title=title)


def _family(kind: str, tag: str, first: int) -> dict:
    n = first
    masses = (0.0, 0.25, 0.5, 1.0)
    out = {
        f"fig{n}": make_spec(
            f"fig{n}", kind, gap=1.0, sigma=0.1,
            axes=[(L_PATH, _lin(0.25, 10.0, 40)), (MASS, masses)], plot="lines",
            title=f"{tag}: negativity vs separation"),
        f"fig{n + 1}": make_spec(
            f"fig{n + 1}", kind, L=5.0, sigma=0.2,
            axes=[(GAP, _lin(0.25, 8.0, 32)), (MASS, masses)], plot="lines",
            title=f"{tag}: negativity vs gap"),
        f"fig{n + 2}": make_spec(
            f"fig{n + 2}", kind, L=5.0, sigma=0.1,
            axes=[(MASS, _lin(0.0, 3.0, 31)), (GAP, (1.0, 2.0, 4.0, 6.0))], plot="lines",
            title=f"{tag}: negativity vs mass"),
        f"fig{n + 3}": make_spec(
            f"fig{n + 3}", kind, L=5.0, mass=1.0,
            axes=[(GAP, _lin(0.25, 8.0, 32)), (SIGMA, (0.0, 0.05, 0.1, 0.2))], plot="lines",
            title=f"{tag}: negativity vs gap and width"),
        f"fig{n + 4}": make_spec(
            f"fig{n + 4}", kind, mass=0.0, sigma=0.0,
            axes=[(GAP, _lin(0.25, 8.0, 40)), (L_PATH, _lin(0.25, 10.0, 40))], plot="heatmap",
            title=f"{tag}: pointlike, gap and separation"),
        f"fig{n + 5}": make_spec(
            f"fig{n + 5}", kind, mass=0.0, sigma=0.0, gap=4.0,
            axes=[(L_PATH, _lin(0.25, 10.0, 40)), (T0, _lin(0.0, 10.0, 40))], plot="heatmap",
            title=f"{tag}: pointlike, spatial and temporal offset"),
    }
    return out


def _phase_family(kind: str, tag: str, first: int) -> dict:
    n = first
    common = dict(mass=0.5, sigma=0.5)
    return {
        f"fig{n}": make_spec(
            f"fig{n}", kind, gap=4.0, axes=[(AZ, _lin(-8.0, 8.0, 65)), (L_PATH, (5.0, 6.0, 7.0))],
            plot="lines", title=f"{tag}: parallel phase vector", **common),
        f"fig{n + 1}": make_spec(
            f"fig{n + 1}", kind, L=5.0,
            axes=[(AZ, _lin(-8.0, 8.0, 65)), (GAP, (2.0, 3.0, 4.0, 5.0))],
            plot="lines", title=f"{tag}: parallel phase vector", **common),
        f"fig{n + 2}": make_spec(
            f"fig{n + 2}", kind, gap=4.0, axes=[(AX, _lin(0.0, 8.0, 33)), (L_PATH, (5.0, 6.0, 7.0))],
            plot="lines", title=f"{tag}: orthogonal phase vector", **common),
        f"fig{n + 3}": make_spec(
            f"fig{n + 3}", kind, L=5.0,
            axes=[(AX, _lin(0.0, 8.0, 33)), (GAP, (2.0, 3.0, 4.0, 5.0))],
            plot="lines", title=f"{tag}: orthogonal phase vector", **common),
    }


def _build() -> dict:
    p = {}
    p.update(_family("RealScalar", "real scalar", 1))
    p.update(_phase_family("ComplexScalar", "complex scalar", 7))
    p.update(_family("DiracFermion", "Dirac field", 11))
    p.update(_phase_family("DiracFermion", "Dirac field", 17))
    p["fig2-point"] = make_spec("fig2-point", "RealScalar", mass=0.5, sigma=0.2, L=5.0, gap=3.75,
                                title="real scalar near the gap peak")
    p["fig-az-resonance"] = make_spec(
        "fig-az-resonance", "ComplexScalar", mass=0.5, sigma=0.5, L=5.0, gap=4.0,
        axes=[(AZ, _lin(-8.0, 8.0, 65))], title="complex scalar: phase vector resonance")
    return p


PRESETS = _build()


def get_preset(name: str) -> SweepSpec:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}") from None
