"""Special functions used by the momentum integrands.

All functions accept scalars or numpy arrays and broadcast.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

_INV_SQRT_PI = 1.0 / math.sqrt(math.pi)
_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)

# Dawson branch points
_SERIES_MAX = 1.0
_ASYMPTOTIC_MIN = 6.0

# Sampling-theorem sum for the middle range (Rybicki); aliasing error ~exp(-(pi/2h)^2)
_RYB_H = 0.2
_RYB_ODD = np.arange(-41, 42, 2, dtype=float)
_RYB_WEIGHTS = np.exp(-((_RYB_ODD * _RYB_H) ** 2))


def _dawson_series(x: np.ndarray) -> np.ndarray:
    # F(x) = sum_k (-1)^k 2^k x^(2k+1) / (2k+1)!!
    x2 = x * x
    term = x.copy()
    total = x.copy()
    for k in range(1, 40):
        term = term * (-2.0 * x2) / (2 * k + 1)
        total = total + term
        if np.all(np.abs(term) <= 1e-18 * np.abs(total)):
            break
    return total


def _dawson_sampling(x: np.ndarray) -> np.ndarray:
    n0 = 2.0 * np.round(x / (2.0 * _RYB_H))
    xp = x - n0 * _RYB_H
    # sum over odd n of exp(-(xp - n h)^2) / (n0 + n)
    e = np.exp(-xp[:, None] ** 2 + 2.0 * xp[:, None] * _RYB_ODD[None, :] * _RYB_H)
    terms = _RYB_WEIGHTS[None, :] * e / (n0[:, None] + _RYB_ODD[None, :])
    return _INV_SQRT_PI * terms.sum(axis=1)


def _dawson_asymptotic(x: np.ndarray) -> np.ndarray:
    # F(x) ~ 1/(2x) sum_k (2k-1)!! / (2x^2)^k, truncated at the smallest term
    inv = 1.0 / (2.0 * x * x)
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 60):
        nxt = term * (2 * k - 1) * inv
        if np.all(np.abs(nxt) <= 1e-18 * np.abs(total)):
            total = total + nxt
            break
        shrinking = np.abs(nxt) < np.abs(term)
        term = np.where(shrinking, nxt, 0.0)
        total = total + term
    return total / (2.0 * x)


def dawson(x):
    """Dawson integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt.

    Computed on |x| and re-signed, so the function is odd bit for bit.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    ax = np.abs(np.atleast_1d(x))
    out = np.empty_like(ax)

    small = ax < _SERIES_MAX
    large = ax >= _ASYMPTOTIC_MIN
    mid = ~(small | large)
    if small.any():
        out[small] = _dawson_series(ax[small])
    if mid.any():
        out[mid] = _dawson_sampling(ax[mid])
    if large.any():
        out[large] = _dawson_asymptotic(ax[large])

    out = np.copysign(out, np.atleast_1d(x))
    return float(out[0]) if scalar else out


def erf_imaginary_axis(x):
    """Overflow-free product exp(-x^2) * (1 - erf(-i x)).

    Equals exp(-x^2) + i (2/sqrt(pi)) F(x) with F the Dawson integral.
    """
    x = np.asarray(x, dtype=float)
    out = np.exp(-x * x) + 1j * _TWO_OVER_SQRT_PI * dawson(x)
    return complex(out) if out.ndim == 0 else out


def _canonical(z: np.ndarray) -> np.ndarray:
    # pick the representative of {z, -z} with Re > 0 (or Re == 0, Im >= 0)
    flip = (z.real < 0) | ((z.real == 0) & (z.imag < 0))
    return np.where(flip, -z, z)


def sinhc(z):
    """sinh(z)/z, continued to 1 at the origin. Even in z."""
    z = _canonical(np.asarray(z, dtype=complex))
    return _sinhc_scaled(z, np.zeros(z.shape))


def sinhc_grad(z):
    """g(z) = (z cosh z - sinh z)/z^3, so that d/dz sinhc(z) = z g(z)."""
    z = _canonical(np.asarray(z, dtype=complex))
    return _sinhc_grad_scaled(z, np.zeros(z.shape))


_SINHC_SERIES_RADIUS = 1.0
_GRAD_SERIES_RADIUS = 2.0


def _sinhc_scaled(z: np.ndarray, log_weight) -> np.ndarray:
    """exp(log_weight) * sinhc(z), stable when Re z and -log_weight are both large.

    z must already be canonical (Re z >= 0).
    """
    z = np.asarray(z, dtype=complex)
    lw = np.broadcast_to(np.asarray(log_weight, dtype=float), z.shape)
    out = np.empty(z.shape, dtype=complex)
    small = np.abs(z) < _SINHC_SERIES_RADIUS
    if small.any():
        zs = z[small]
        w = zs * zs
        term = np.ones_like(zs)
        total = np.ones_like(zs)
        for k in range(1, 14):
            term = term * w / ((2 * k) * (2 * k + 1))
            total = total + term
        out[small] = total * np.exp(lw[small])
    big = ~small
    if big.any():
        zb = z[big]
        lb = lw[big]
        out[big] = (np.exp(zb + lb) - np.exp(-zb + lb)) / (2.0 * zb)
    return out.reshape(z.shape) if z.ndim else complex(out)


def _sinhc_grad_scaled(z: np.ndarray, log_weight) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    lw = np.broadcast_to(np.asarray(log_weight, dtype=float), z.shape)
    out = np.empty(z.shape, dtype=complex)
    small = np.abs(z) < _GRAD_SERIES_RADIUS
    if small.any():
        zs = z[small]
        w = zs * zs
        # g(z) = sum_{k>=1} 2k z^(2k-2) / (2k+1)!
        coef = 1.0 / 3.0
        term = np.full_like(zs, coef)
        total = term.copy()
        for k in range(2, 22):
            term = term * w * (2 * k) / ((2 * k - 2) * (2 * k) * (2 * k + 1))
            total = total + term
        out[small] = total * np.exp(lw[small])
    big = ~small
    if big.any():
        zb = z[big]
        lb = lw[big]
        num = (zb - 1.0) * np.exp(zb + lb) + (zb + 1.0) * np.exp(-zb + lb)
        out[big] = num / (2.0 * zb**3)
    return out.reshape(z.shape) if z.ndim else complex(out)


_HYP_SERIES_MAX = 25.0


def hyper0f1_half(n: int, x):
    """0F1(n/2; x) for x <= 0.

    Ascending series for |x| <= 25, Bessel relation beyond.
    """
    if int(n) != n or n < 2:
        raise ValueError(f"hyper0f1_half needs an integer n >= 2, got {n}")
    b = 0.5 * n
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    xa = np.atleast_1d(x)
    out = np.empty_like(xa)

    near = np.abs(xa) <= _HYP_SERIES_MAX
    if near.any():
        xs = xa[near]
        term = np.ones_like(xs)
        total = np.ones_like(xs)
        done = np.zeros(xs.shape, dtype=bool)
        for k in range(1, 501):
            term = term * xs / ((b + k - 1) * k)
            total = total + np.where(done, 0.0, term)
            done |= np.abs(term) < 1e-16 * np.abs(total)
            if done.all():
                break
        out[near] = total
    far = ~near
    if far.any():
        nu = b - 1.0
        t = 2.0 * np.sqrt(-xa[far])
        out[far] = special.gamma(nu + 1.0) * (t / 2.0) ** (-nu) * special.jv(nu, t)
    return float(out[0]) if scalar else out
