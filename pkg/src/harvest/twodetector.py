"""Two-detector density matrices and their negativity.

Basis order is |g1 g2>, |g1 e2>, |e1 g2>, |e1 e2>. Both protocols are
perturbative: the state is a single O(1) population (the reference state)
plus O(lambda) and O(lambda^2) corrections.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .fields import (DetectorConfig, Element, FieldKind, FieldModel, InitialState, build_integrand)
from .quadrature import IntegralResult, QuadratureSettings, integrate
from .switching import QuadratureError


class Protocol(str, enum.Enum):
    GG = "GG"  # both detectors start in the ground state
    EG = "EG"  # detector 1 excited, detector 2 ground


@dataclass(frozen=True)
class MatrixElements:
    L11: complex = 0j
    L22: complex = 0j
    L12: complex = 0j
    L11p: complex = 0j
    L12p: complex = 0j
    M: complex = 0j
    Mp: complex = 0j
    E1: complex = 0j
    E2: complex = 0j
    coupling: float = 1.0

    def scaled(self, k: float) -> "MatrixElements":
        vals = {n: getattr(self, n) * k for n in ELEMENT_FIELDS}
        return replace(self, **vals)


ELEMENT_FIELDS = ("L11", "L22", "L12", "L11p", "L12p", "M", "Mp", "E1", "E2")


@dataclass(frozen=True)
class TwoDetectorState:
    rho: np.ndarray
    # index of the O(1) population when the state is a perturbative expansion
    reference: int | None = None

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (4, 4):
            raise ValueError("two-qubit density matrix must be 4x4")
        object.__setattr__(self, "rho", rho)


def assemble_gg(me: MatrixElements) -> TwoDetectorState:
    c = np.conj
    rho = np.array([
        [1 - me.L11 - me.L22, 1j * me.E2, 1j * me.E1, c(me.M)],
        [-1j * c(me.E2), me.L22, c(me.L12), 0],
        [-1j * c(me.E1), me.L12, me.L11, 0],
        [me.M, 0, 0, 0],
    ], dtype=complex)
    return TwoDetectorState(rho, reference=0)


def assemble_eg(me: MatrixElements) -> TwoDetectorState:
    c = np.conj
    rho = np.array([
        [me.L11p, 0, -1j * me.E1, me.L12p],
        [0, 0, me.Mp, 0],
        [1j * c(me.E1), c(me.Mp), 1 - me.L11p - me.L22, 1j * me.E2],
        [c(me.L12p), 0, -1j * c(me.E2), me.L22],
    ], dtype=complex)
    return TwoDetectorState(rho, reference=2)


def negativity_closed_form(me: MatrixElements, protocol) -> float:
    protocol = Protocol(protocol)
    if protocol is Protocol.EG:
        if me.E1 != 0 or me.E2 != 0:
            raise ValueError("the excited-ground closed form assumes vanishing one-point terms")
        a, b = me.L11p.real, me.L22.real
        root = math.sqrt(abs(me.Mp) ** 2 + 0.25 * (a - b) ** 2)
        return max(0.0, root - 0.5 * (a + b))
    a = me.L11.real - abs(me.E1) ** 2
    b = me.L22.real - abs(me.E2) ** 2
    coh = me.M + np.conj(me.E1) * np.conj(me.E2)
    root = math.sqrt(abs(coh) ** 2 + 0.25 * (a - b) ** 2)
    return max(0.0, root - 0.5 * (a + b))


def partial_transpose(rho: np.ndarray) -> np.ndarray:
    """Transpose over detector 2."""
    r = np.asarray(rho).reshape(2, 2, 2, 2)
    return r.transpose(0, 3, 2, 1).reshape(4, 4)


def _flips(i: int, j: int) -> int:
    return bin(i ^ j).count("1")


def negativity_eigen(state: TwoDetectorState) -> float:
    """Sum of |negative eigenvalues| of the partial transpose.

    For a perturbative state the O(1) reference population is removed first:
    single-flip couplings to it enter at second order through a Schur
    complement, while couplings at higher order only shift eigenvalues at
    O(lambda^4) and are dropped, as is the rest of that order.
    """
    pt = partial_transpose(state.rho)
    pt = 0.5 * (pt + pt.conj().T)
    if state.reference is None:
        ev = np.linalg.eigvalsh(pt)
        return float(-ev[ev < 0].sum()) + 0.0
    r = state.reference
    rest = [k for k in range(4) if k != r]
    block = pt[np.ix_(rest, rest)]
    # partial transposition preserves the number of detector flips between states
    c = np.array([pt[k, r] if _flips(k, r) == 1 else 0.0 for k in rest], dtype=complex)
    eff = block - np.outer(c, c.conj())
    ev = np.linalg.eigvalsh(eff)
    return float(-ev[ev < 0].sum()) + 0.0


def protocol_of(d1: DetectorConfig, d2: DetectorConfig) -> Protocol:
    s = (d1.initial_state, d2.initial_state)
    if s == (InitialState.GROUND, InitialState.GROUND):
        return Protocol.GG
    if s == (InitialState.EXCITED, InitialState.GROUND):
        return Protocol.EG
    raise ValueError("supported initial states are ground-ground and excited-ground; "
                     "label the excited detector as detector 1")


PROTOCOL_ELEMENTS = {
    Protocol.GG: {"L11": Element.L11, "L22": Element.L22, "L12": Element.L12, "M": Element.MGG},
    Protocol.EG: {"L11p": Element.L11P, "L22": Element.L22, "L12p": Element.L12P, "Mp": Element.MP},
}


@dataclass
class Computation:
    elements: MatrixElements
    state: TwoDetectorState
    negativity: float
    protocol: Protocol
    integrals: dict = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return all(r.converged for r in self.integrals.values())

    @property
    def error_estimate(self) -> float:
        return float(sum(r.error_estimate for r in self.integrals.values()))


def compute_detailed(model: FieldModel, d1: DetectorConfig, d2: DetectorConfig,
                     settings: QuadratureSettings | None = None, coupling: float = 1.0,
                     normalization: str = "defining", strict: bool = True) -> Computation:
    settings = settings or QuadratureSettings()
    protocol = protocol_of(d1, d2)
    values = {}
    integrals: dict[str, IntegralResult] = {}
    charged = model.kind is not FieldKind.REAL_SCALAR
    for name, element in PROTOCOL_ELEMENTS[protocol].items():
        if charged and element in (Element.MGG, Element.L12P):
            # two-field correlators of a charged field vanish in the vacuum
            integrals[name] = IntegralResult(0j, 0.0, 0, True)
            values[name] = 0j
            continue
        res = integrate(build_integrand(model, d1, d2, element, normalization), settings)
        if strict and not res.converged:
            raise QuadratureError(
                f"element {name} did not converge (error estimate {res.error_estimate:.3e})")
        integrals[name] = res
        values[name] = res.value
    lam2 = coupling * coupling
    me = MatrixElements(**{k: v * lam2 for k, v in values.items()}, coupling=coupling)
    state = assemble_gg(me) if protocol is Protocol.GG else assemble_eg(me)
    neg = negativity_closed_form(me, protocol)
    return Computation(me, state, neg, protocol, integrals)


def compute(model: FieldModel, d1: DetectorConfig, d2: DetectorConfig,
            settings: QuadratureSettings | None = None, coupling: float = 1.0,
            normalization: str = "defining"):
    """Matrix elements, density matrix and negativity for one configuration."""
    c = compute_detailed(model, d1, d2, settings, coupling, normalization)
    return c.elements, c.state, c.negativity


def scan_peak(grid, negativities, rel: float = 1e-12) -> tuple[int, float]:
    """Index and grid value of the largest negativity.

    Values within `rel` of the maximum count as ties, and the smallest grid
    value among them wins, so scans are reproducible.
    """
    n = np.asarray(negativities, dtype=float)
    g = np.asarray(grid, dtype=float)
    if n.size == 0 or n.size != g.size:
        raise ValueError("grid and negativities must be non-empty and of equal length")
    top = np.nanmax(n)
    ties = np.nonzero(n >= top - rel * abs(top))[0]
    i = int(ties[np.argmin(g[ties])])
    return i, float(g[i])
