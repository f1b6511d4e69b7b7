"""Gaussian switching and its time-ordered kernels.

The switching profile is chi(t) = exp(-(t - t0)^2 / 2T^2) / sqrt(2 pi), so
that chi_tilde(w) = int chi(t) exp(i w t) dt = T exp(-w^2 T^2 / 2) exp(i w t0).

The time-ordered kernel of two switchings is

    D(wa, wb) = int dt int dt' theta(t - t') exp(i wa t - i wb t') chi1(t) chi2(t')

and Q(w) is the special case chi1 = chi2 centred at the origin, wa = wb = w.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .specfun import dawson

NORMALIZATIONS = ("defining", "printed")


class QuadratureError(RuntimeError):
    """Raised when a numerical integral fails to meet its tolerance."""


@dataclass(frozen=True)
class GaussianSwitching:
    T: float = 1.0
    center: float = 0.0

    def __post_init__(self):
        if not (self.T > 0 and math.isfinite(self.T)):
            raise ValueError(f"switching time scale must be positive, got {self.T}")
        if not math.isfinite(self.center):
            raise ValueError("switching center must be finite")

    def chi(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(-0.5 * ((t - self.center) / self.T) ** 2) / math.sqrt(2 * math.pi)


@dataclass(frozen=True)
class TimeKernelResult:
    value: complex
    abs_error_estimate: float = 0.0


def normalization_factor(normalization: str) -> float:
    """Overall factor applied to time-ordered kernels.

    "defining" evaluates the double integral as written; "printed" doubles it,
    reproducing the closed form T^2 exp(-w^2 T^2)(1 - erf(-i w T)).
    """
    if normalization == "defining":
        return 1.0
    if normalization == "printed":
        return 2.0
    raise ValueError(f"unknown normalization {normalization!r}; use one of {NORMALIZATIONS}")


def chi_tilde(sw: GaussianSwitching, omega):
    omega = np.asarray(omega, dtype=float)
    out = sw.T * np.exp(-0.5 * (omega * sw.T) ** 2)
    if sw.center != 0.0:
        out = out * np.exp(1j * omega * sw.center)
    return out


def q_values(omega, T: float = 1.0, normalization: str = "defining"):
    """Vectorised Q(w) = (T^2/2) exp(-w^2 T^2) + i (T^2/sqrt(pi)) F(w T)."""
    x = np.asarray(omega, dtype=float) * T
    k = normalization_factor(normalization) * T * T
    return k * (0.5 * np.exp(-x * x) + 1j * dawson(x) / math.sqrt(math.pi))


def q_kernel_analytic(sw: GaussianSwitching, omega: float, sw2: GaussianSwitching | None = None,
                      normalization: str = "defining") -> TimeKernelResult:
    """Closed-form Q for two identical switchings sharing a center."""
    if sw2 is not None and sw2 != sw:
        raise ValueError("closed-form Q needs identical switchings with a shared center")
    # the kernel only depends on the time difference, so a common center drops out
    return TimeKernelResult(complex(q_values(omega, sw.T, normalization)), 0.0)


def _faddeeva_halfline(A, B, C):
    """int_0^inf exp(-A u^2 + B u + C) du for real A > 0, complex B, C."""
    B, C = np.broadcast_arrays(np.asarray(B, dtype=complex), np.asarray(C, dtype=complex))
    z = -B / (2.0 * np.sqrt(A))
    out = np.empty(z.shape, dtype=complex)
    # exp(z^2) erfc(z) = w(i z); use the reflection where w(i z) would grow
    up = z.real >= 0
    out[up] = np.exp(C[up]) * special.wofz(1j * z[up])
    dn = ~up
    zd, cd = z[dn], C[dn]
    out[dn] = 2.0 * np.exp(cd + zd * zd) - np.exp(cd) * special.wofz(-1j * zd)
    out = 0.5 * np.sqrt(np.pi / A) * out
    return out if out.ndim else complex(out)


def time_kernel(sw1: GaussianSwitching, sw2: GaussianSwitching, omega_a, omega_b,
                normalization: str = "defining"):
    """Closed form of D(wa, wb) for arbitrary widths and centers (vectorised).

    The inner time integral is Gaussian; the remaining half-line integral is a
    Faddeeva function, evaluated on its bounded branch.
    """
    wa = np.asarray(omega_a, dtype=float)
    wb = np.asarray(omega_b, dtype=float)
    t1, t2 = sw1.center, sw2.center
    s1, s2 = 1.0 / sw1.T**2, 1.0 / sw2.T**2
    alpha = 0.5 * (s1 + s2)
    beta0 = t1 * s1 + t2 * s2 + 1j * (wa - wb)
    A = 0.5 * s1 - s1 * s1 / (4.0 * alpha)
    B = t1 * s1 + 1j * wa - beta0 * s1 / (2.0 * alpha)
    C = -0.5 * t1 * t1 * s1 - 0.5 * t2 * t2 * s2 + beta0 * beta0 / (4.0 * alpha)
    val = _faddeeva_halfline(A, B, C) * math.sqrt(math.pi / alpha) / (2.0 * math.pi)
    return normalization_factor(normalization) * val


def _gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _tensor_triangle(sw1, sw2, wa, wb, n):
    """Product Gauss-Legendre rule over {t > t'} inside the +-8T boxes."""
    a1, b1 = sw1.center - 8 * sw1.T, sw1.center + 8 * sw1.T
    a2, b2 = sw2.center - 8 * sw2.T, sw2.center + 8 * sw2.T
    x, w = _gauss_legendre(n)

    def f(t, tp):
        return np.exp(1j * wa * t - 1j * wb * tp) * sw1.chi(t) * sw2.chi(tp)

    total = 0.0 + 0.0j
    # outer t splits at the inner box edges so each piece has a smooth inner range
    cuts = sorted({a1, b1, *[c for c in (a2, b2) if a1 < c < b1]})
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi <= a2:
            continue
        t = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        wt = 0.5 * (hi - lo) * w
        upper = np.minimum(t, b2)
        lower = np.full_like(t, a2)
        ok = upper > lower
        half = 0.5 * (upper - lower)
        mid = 0.5 * (upper + lower)
        tp = half[:, None] * x[None, :] + mid[:, None]
        inner = (f(t[:, None], tp) * w[None, :]).sum(axis=1) * half
        total += np.sum(np.where(ok, inner, 0.0) * wt)
    return total


def q_kernel_numeric(sw1: GaussianSwitching, sw2: GaussianSwitching, omega_a: float, omega_b: float,
                     tol: float = 1e-11, max_order: int = 1600,
                     normalization: str = "defining") -> TimeKernelResult:
    """D(wa, wb) by direct 2D quadrature (independent of the closed form)."""
    n = 100
    prev = _tensor_triangle(sw1, sw2, omega_a, omega_b, n)
    while True:
        n2 = int(n * 1.5)
        cur = _tensor_triangle(sw1, sw2, omega_a, omega_b, n2)
        err = abs(cur - prev)
        if err <= tol * max(1.0, abs(cur)):
            k = normalization_factor(normalization)
            return TimeKernelResult(k * complex(cur), k * float(err))
        if n2 >= max_order:
            raise QuadratureError(
                f"time kernel did not converge: error {err:.3e} at order {n2}")
        n, prev = n2, cur
