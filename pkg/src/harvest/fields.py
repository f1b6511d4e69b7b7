"""Field models and radial momentum integrands for the detector matrix elements.

Every element is an integral over momentum space of the form

    int d^n p / ((2 pi)^n 2 w_p)  [spatial weight] [time factor] [spinor bilinear]

and the angular part is done in closed form, leaving a 1D integrand in |p|.
The spatial weight of two smearings with Gaussian profiles, phase vectors a_j
and centers X_j is exp(-A p^2 - B) exp(p.c) for a complex vector c, whose
angular average is sinhc(|p| sqrt(c.c)).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .specfun import _canonical, _sinhc_grad_scaled, _sinhc_scaled, hyper0f1_half, sinhc
from .switching import GaussianSwitching, chi_tilde, normalization_factor, q_values, time_kernel


class FieldKind(str, enum.Enum):
    REAL_SCALAR = "RealScalar"
    COMPLEX_SCALAR = "ComplexScalar"
    DIRAC_FERMION = "DiracFermion"


class InitialState(str, enum.Enum):
    GROUND = "Ground"
    EXCITED = "Excited"


class Element(str, enum.Enum):
    L11 = "L11"    # excitation of detector 1
    L22 = "L22"    # excitation of detector 2
    L12 = "L12"    # cross term, both detectors ground
    L11P = "L11p"  # de-excitation of detector 1
    L12P = "L12p"  # double-flip term, detector 1 excited
    MP = "Mp"      # coherence, detector 1 excited
    MGG = "Mgg"    # coherence, both detectors ground


class DecayClass(str, enum.Enum):
    GAUSSIAN = "GaussianDecay"
    OSCILLATORY = "PolynomialOscillatory"


@dataclass(frozen=True)
class FieldModel:
    kind: FieldKind = FieldKind.REAL_SCALAR
    mass: float = 0.0
    spatial_dim: int = 3

    def __post_init__(self):
        object.__setattr__(self, "kind", FieldKind(self.kind))
        if not (self.mass >= 0 and math.isfinite(self.mass)):
            raise ValueError(f"field mass must be finite and non-negative, got {self.mass}")
        if int(self.spatial_dim) != self.spatial_dim or self.spatial_dim < 2:
            raise ValueError(f"spatial dimension must be an integer >= 2, got {self.spatial_dim}")
        if self.kind is FieldKind.DIRAC_FERMION and self.spatial_dim != 3:
            raise ValueError("the Dirac field is only supported in three spatial dimensions")


@dataclass(frozen=True)
class ConstantSpinor:
    components: tuple = (1.0, 0.0, 0.0, 0.0)

    def __post_init__(self):
        comps = tuple(complex(c) for c in self.components)
        if len(comps) != 4:
            raise ValueError("a Dirac spinor has four components")
        if not any(comps):
            raise ValueError("spinor must have a non-zero component")
        object.__setattr__(self, "components", comps)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.components, dtype=complex)


def _vec3(v) -> tuple:
    out = tuple(float(x) for x in v)
    if len(out) != 3:
        raise ValueError("expected a 3-vector")
    return out


@dataclass(frozen=True)
class DetectorConfig:
    gap: float = 1.0
    sigma: float = 0.0
    switching: GaussianSwitching = field(default_factory=GaussianSwitching)
    position: tuple = (0.0, 0.0, 0.0)
    phase_vector: tuple = (0.0, 0.0, 0.0)
    spinor: ConstantSpinor | None = None
    initial_state: InitialState = InitialState.GROUND
    smearing_phase: float = 0.0  # constant phase of the smearing function

    def __post_init__(self):
        object.__setattr__(self, "position", _vec3(self.position))
        object.__setattr__(self, "phase_vector", _vec3(self.phase_vector))
        object.__setattr__(self, "initial_state", InitialState(self.initial_state))
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise ValueError(f"smearing width must be non-negative, got {self.sigma}")
        if not math.isfinite(self.gap):
            raise ValueError("gap must be finite")

    @property
    def a(self) -> np.ndarray:
        return np.array(self.phase_vector)

    @property
    def x(self) -> np.ndarray:
        return np.array(self.position)


@dataclass(frozen=True)
class RadialIntegrand:
    """f(|p|) such that the element (over lambda^2) is prefactor * int_0^inf f dp."""

    evaluator: Callable[[np.ndarray], np.ndarray]
    decay_class: DecayClass
    prefactor: float
    log_envelope: Callable[[np.ndarray], np.ndarray] | None = None
    wavelength: float | None = None  # zero spacing of the oscillating factor
    tail_start: float = 0.0  # beyond this the oscillatory integrand is smooth x sinc

    def __call__(self, p):
        return self.evaluator(np.asarray(p, dtype=float))


# Dirac representation
GAMMA = np.array([
    np.diag([1, 1, -1, -1]).astype(complex),
    [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]],
    [[0, 0, 0, -1j], [0, 0, 1j, 0], [0, 1j, 0, 0], [-1j, 0, 0, 0]],
    [[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]],
], dtype=complex)


def fermion_bilinears(eta1: ConstantSpinor, eta2: ConstantSpinor):
    """J^mu = bar(eta1) gamma^mu eta2 and S = bar(eta1) eta2.

    With these, bar(eta1)(pslash +- m) eta2 = w J0 - p.J +- m S.
    """
    e1 = eta1.array if isinstance(eta1, ConstantSpinor) else np.asarray(eta1, dtype=complex)
    e2 = eta2.array if isinstance(eta2, ConstantSpinor) else np.asarray(eta2, dtype=complex)
    bar = e1.conj() @ GAMMA[0]
    J = np.array([bar @ GAMMA[mu] @ e2 for mu in range(4)])
    S = bar @ e2
    return complex(J[0]), J[1:].astype(complex), complex(S)


def angular_average_scalar(c, p):
    """(1/4pi) int dOmega exp(p phat.c) = sinhc(p sqrt(c.c))."""
    c = np.asarray(c, dtype=complex)
    s = np.sqrt(np.sum(c * c))
    return sinhc(np.asarray(p, dtype=float) * s)


def sphere_area(n: int) -> float:
    """Area of the unit sphere in n dimensions."""
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def angular_average_dim_n(n: int, p, L):
    """Full angular integral int dOmega_{n-1} exp(i p.L) for |p| = p, |L| = L."""
    x = -0.25 * (np.asarray(p, dtype=float) * L) ** 2
    return sphere_area(n) * hyper0f1_half(n, x)


@dataclass(frozen=True)
class _Spatial:
    """exp(-A p^2 - B) times the angular average of exp(p phat.c)."""

    A: float
    B: float
    c: np.ndarray
    dim: int = 3

    @property
    def s(self) -> complex:
        return complex(_canonical(np.sqrt(np.sum(self.c * self.c) + 0j)))

    def scalar(self, p):
        lw = -self.A * p * p - self.B
        if self.dim != 3:
            L = float(np.sqrt(np.sum(np.abs(self.c) ** 2)))
            return np.exp(lw) * hyper0f1_half(self.dim, -0.25 * (p * L) ** 2)
        return _sinhc_scaled(p * self.s, lw)

    def vector_dot(self, p, J):
        # angular average of (p_vec . J) exp(p_vec . c) = p^2 g(p s) (c . J)
        cj = complex(np.sum(self.c * J))
        if cj == 0:
            return np.zeros(np.shape(p), dtype=complex)
        lw = -self.A * p * p - self.B
        return p * p * cj * _sinhc_grad_scaled(p * self.s, lw)

    def log_bound(self, p):
        return -self.A * p * p - self.B + p * abs(self.s.real) + math.log(1.3)


def _pair(d_left: DetectorConfig, d_right: DetectorConfig, sign_left: int, sign_right: int,
          conj_left: bool, conj_right: bool, dim: int) -> _Spatial:
    """Spatial weight of smearing transforms evaluated at +-p (before the angular average).

    A factor is Ft_j(sign p) or its conjugate, with Ft_j(k) = exp(i k.X_j) G_j(k + a_j),
    G_j(k) = exp(-sigma_j^2 k^2 / 2).
    """
    A = 0.5 * (d_left.sigma**2 + d_right.sigma**2)
    B = 0.0
    c = np.zeros(3, dtype=complex)
    for d, sgn, cj in ((d_left, sign_left, conj_left), (d_right, sign_right, conj_right)):
        s2 = d.sigma**2
        B += 0.5 * s2 * float(d.a @ d.a)
        # G(sgn p + a) = exp(-s2 p^2/2 - sgn s2 p.a - s2 a^2/2)
        c += -sgn * s2 * d.a
        c += (-1j if cj else 1j) * sgn * d.x
    return _Spatial(A, B, c, dim)


def _omega(p, m):
    return np.sqrt(p * p + m * m)


def _kernel(sw1, sw2, wa, wb, normalization):
    # identical switchings with equal frequencies reduce to Q(w)
    if sw1 == sw2 and np.array_equal(wa, wb):
        return q_values(wa, sw1.T, normalization)
    return time_kernel(sw1, sw2, wa, wb, normalization)


def _chi_abs2(sw: GaussianSwitching, x):
    return (sw.T**2) * np.exp(-(sw.T * x) ** 2)


def _log_chi_abs2(sw, x):
    return 2 * math.log(sw.T) - (sw.T * x) ** 2


def build_integrand(model: FieldModel, d1: DetectorConfig, d2: DetectorConfig, element,
                    normalization: str = "defining") -> RadialIntegrand:
    """Radial integrand for one matrix element divided by lambda^2."""
    element = Element(element)
    kind = model.kind
    n = model.spatial_dim
    m = model.mass
    fermion = kind is FieldKind.DIRAC_FERMION
    normalization_factor(normalization)

    need = {
        Element.L11: ((d1, InitialState.GROUND),),
        Element.L22: ((d2, InitialState.GROUND),),
        Element.L12: ((d1, InitialState.GROUND), (d2, InitialState.GROUND)),
        Element.MGG: ((d1, InitialState.GROUND), (d2, InitialState.GROUND)),
        Element.L11P: ((d1, InitialState.EXCITED),),
        Element.MP: ((d1, InitialState.EXCITED), (d2, InitialState.GROUND)),
        Element.L12P: ((d1, InitialState.EXCITED), (d2, InitialState.GROUND)),
    }[element]
    for d, state in need:
        if d.initial_state is not state:
            raise ValueError(f"element {element.value} needs detector states "
                             f"{[s.value for _, s in need]}")
    if fermion and (d1.spinor is None or d2.spinor is None):
        raise ValueError("Dirac field detectors need a spinor")
    if n != 3 and (np.any(d1.a) or np.any(d2.a)):
        raise ValueError("phase vectors are only supported in three spatial dimensions")

    prefactor = sphere_area(n) / (2 * math.pi) ** n
    sw1, sw2 = d1.switching, d2.switching
    O1, O2 = d1.gap, d2.gap
    ph1, ph2 = d1.smearing_phase, d2.smearing_phase

    def measure(p):
        if m == 0.0:
            # p^(n-1) / 2p without the 0/0 at the origin
            return 0.5 * p ** (n - 2)
        return p ** (n - 1) / (2.0 * _omega(p, m))

    def log_measure(p):
        return (n - 1) * np.log(np.maximum(p, 1e-300)) + np.log1p(p) * 2

    zero_vacuum = kind is not FieldKind.REAL_SCALAR and element in (Element.MGG, Element.L12P)
    if zero_vacuum:
        # <psi psi> vanishes in the vacuum of a charged field
        return RadialIntegrand(lambda p: np.zeros(np.shape(p), dtype=complex),
                               DecayClass.GAUSSIAN, prefactor, lambda p: np.full(np.shape(p), -np.inf))

    if element in (Element.L11, Element.L22, Element.L11P):
        d = d2 if element is Element.L22 else d1
        sw = d.switching
        excite = element is not Element.L11P
        sp = _pair(d, d, 1, 1, True, False, n)
        sign = 1.0 if excite else -1.0
        if fermion:
            J0, J, S = fermion_bilinears(d.spinor, d.spinor)

        def f(p):
            w = _omega(p, m)
            t = _chi_abs2(sw, w + sign * d.gap)
            ang = sp.scalar(p)
            if fermion:
                # excitation: w J0 + p.J + m S; de-excitation: w J0 - p.J - m S
                ang = (w * J0 + sign * m * S) * ang + sign * sp.vector_dot(p, J)
            return measure(p) * t * ang

        def env(p):
            w = _omega(p, m)
            return log_measure(p) + sp.log_bound(p) + _log_chi_abs2(sw, w + sign * d.gap)

        return RadialIntegrand(f, DecayClass.GAUSSIAN, prefactor, env)

    if element is Element.L12:
        sp = _pair(d1, d2, 1, 1, False, True, n)
        phase = np.exp(1j * (ph1 - ph2))
        if fermion:
            J0, J, S = fermion_bilinears(d2.spinor, d1.spinor)

        def f(p):
            w = _omega(p, m)
            t = chi_tilde(sw1, w + O1) * np.conj(chi_tilde(sw2, w + O2))
            ang = sp.scalar(p)
            if fermion:
                ang = (w * J0 + m * S) * ang + sp.vector_dot(p, J)
            return phase * measure(p) * t * ang

        def env(p):
            w = _omega(p, m)
            return (log_measure(p) + sp.log_bound(p)
                    + 0.5 * (_log_chi_abs2(sw1, w + O1) + _log_chi_abs2(sw2, w + O2)))

        return RadialIntegrand(f, DecayClass.GAUSSIAN, prefactor, env)

    if element is Element.L12P:
        # conj(Ft1(p) Ft2(-p)) for the real field
        sp = _pair(d1, d2, 1, -1, False, False, n)
        phase = np.exp(-1j * (ph1 + ph2))

        def f(p):
            w = _omega(p, m)
            t = chi_tilde(sw1, w - O1) * chi_tilde(sw2, -w - O2)
            return phase * measure(p) * t * np.conj(sp.scalar(p))

        def env(p):
            w = _omega(p, m)
            return (log_measure(p) + sp.log_bound(p)
                    + 0.5 * (_log_chi_abs2(sw1, w - O1) + _log_chi_abs2(sw2, w + O2)))

        return RadialIntegrand(f, DecayClass.GAUSSIAN, prefactor, env)

    # coherences: time-ordered kernels, only Gaussian if the smearing is
    L = float(np.linalg.norm(d2.x - d1.x))
    if element is Element.MP:
        sp = _pair(d1, d2, 1, 1, True, False, n)
        phase = np.exp(1j * (ph2 - ph1))
        if fermion:
            J0, J, S = fermion_bilinears(d1.spinor, d2.spinor)

        def f(p):
            w = _omega(p, m)
            # detector 1 emits before detector 2 absorbs, and the reverse ordering
            ka = _kernel(sw1, sw2, -O1 - w, -O2 - w, normalization)
            kb = _kernel(sw2, sw1, O2 - w, O1 - w, normalization)
            ang = sp.scalar(p)
            if fermion:
                vec = sp.vector_dot(p, J)
                out = ((w * J0 + m * S) * ang + vec) * ka + ((w * J0 - m * S) * ang - vec) * kb
            else:
                out = ang * (ka + kb)
            return phase * measure(p) * out
    else:
        sp = _pair(d1, d2, 1, -1, False, False, n)
        phase = np.exp(1j * (ph1 + ph2))

        def f(p):
            w = _omega(p, m)
            ka = _kernel(sw1, sw2, O1 - w, -O2 - w, normalization)
            kb = _kernel(sw2, sw1, O2 - w, -O1 - w, normalization)
            return -phase * measure(p) * sp.scalar(p) * (ka + kb)

    def env(p):
        return log_measure(p) + sp.log_bound(p) + math.log(2.0 * max(sw1.T, sw2.T) ** 2)

    if sp.A > 0:
        return RadialIntegrand(f, DecayClass.GAUSSIAN, prefactor, env)
    if L == 0:
        raise ValueError("pointlike detectors at zero separation give a divergent coherence")
    # past this momentum the Gaussian parts of the kernels are negligible
    t_min = min(sw1.T, sw2.T)
    w_tail = max(abs(O1), abs(O2)) + 9.0 / t_min
    p_tail = math.sqrt(max(w_tail**2 - m * m, 0.0))
    return RadialIntegrand(f, DecayClass.OSCILLATORY, prefactor, env,
                           wavelength=math.pi / L, tail_start=p_tail)
