import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from harvest.specfun import dawson, erf_imaginary_axis, hyper0f1_half, sinhc, sinhc_grad

# frozen with mpmath at 30 digits: sqrt(pi)/2 exp(-x^2) erfi(x)
DAWSON_REF = {
    0.5: 0.42443638350202229593,
    1.0: 0.53807950691276841914,
    2.0: 0.30134038892379196603,
    3.0: 0.17827103061055828734,
    5.0: 0.10213407442427683544,
    7.0: 0.072180974658236292028,
    10.0: 0.050253847187598528033,
    50.0: 0.010002001201201683031,
}

# frozen with mpmath.hyp0f1(n/2, x) at 30 digits
HYP_REF = [
    (2, -4.0, -0.39714980986384737229),
    (3, -4.0, -0.18920062382698206284),
    (4, -4.0, -0.033021664011774568072),
    (5, -30.0, -0.0012524591906584575835),
    (3, -100.0, 0.045647262536381382719),
    (4, -400.0, 0.0063019159018792499603),
    (6, -2.5, 0.3878949134541686076),
]


@pytest.mark.parametrize("x,ref", sorted(DAWSON_REF.items()))
def test_dawson_frozen_values(x, ref):
    assert dawson(x) == pytest.approx(ref, rel=1e-14)
    assert dawson(-x) == -dawson(x)


def test_dawson_small_and_zero():
    assert dawson(0.0) == 0.0
    assert abs(dawson(1e-8) - 1e-8) < 1e-20


def test_dawson_matches_mpmath_across_branches():
    mp.mp.dps = 30
    xs = np.concatenate([np.linspace(0.01, 20, 300), np.logspace(-6, 3, 60)])
    ref = np.array([float(mp.sqrt(mp.pi) / 2 * mp.exp(-mp.mpf(x) ** 2) * mp.erfi(x)) for x in xs])
    np.testing.assert_allclose(dawson(xs), ref, rtol=5e-15, atol=0)


def test_dawson_is_odd_bit_for_bit():
    x = np.linspace(-20, 20, 1000)
    assert np.array_equal(dawson(-x), -dawson(x))


def test_dawson_ode():
    x = np.linspace(-5, 5, 201)
    h = 1e-5
    deriv = (dawson(x + h) - dawson(x - h)) / (2 * h)
    np.testing.assert_allclose(deriv + 2 * x * dawson(x), 1.0, atol=1e-10)


def test_dawson_bound():
    x = np.linspace(-40, 40, 20001)
    assert np.abs(dawson(x)).max() <= 0.5410442246 + 1e-12
    assert dawson(0.9241388730) == pytest.approx(0.5410442246, rel=1e-9)


def test_erf_imaginary_axis_is_faddeeva_on_real_axis():
    # exp(-x^2)(1 - erf(-ix)) = w(x), scipy's Faddeeva function
    x = np.linspace(-60, 60, 1201)
    np.testing.assert_allclose(erf_imaginary_axis(x), special.wofz(x), rtol=1e-13, atol=1e-300)
    assert erf_imaginary_axis(0.0) == 1 + 0j
    z = erf_imaginary_axis(1.0)
    assert z.real == pytest.approx(math.exp(-1), rel=1e-15)
    assert z.imag == pytest.approx(0.607157705841393, rel=1e-13)
    assert erf_imaginary_axis(50.0).imag == pytest.approx(2 / math.sqrt(math.pi) / 100, rel=1e-3)


def test_sinhc_special_points():
    assert sinhc(0) == 1
    assert abs(sinhc(1j * math.pi)) < 1e-16
    z = 2 + 3j
    assert sinhc(z) == sinhc(-z)


def test_sinhc_matches_mpmath():
    mp.mp.dps = 30
    rng = np.random.default_rng(7)
    z = rng.uniform(-30, 30, 300) + 1j * rng.uniform(-30, 30, 300)
    z = z[np.abs(z) <= 30]
    ref = np.array([complex(mp.sinh(mp.mpc(w)) / mp.mpc(w)) for w in z])
    np.testing.assert_allclose(sinhc(z), ref, rtol=1e-13)
    g = np.array([complex((mp.mpc(w) * mp.cosh(mp.mpc(w)) - mp.sinh(mp.mpc(w))) / mp.mpc(w) ** 3)
                  for w in z])
    np.testing.assert_allclose(sinhc_grad(z), g, rtol=1e-13)


def test_sinhc_parity_exact():
    rng = np.random.default_rng(3)
    r = rng.uniform(0, 20, 100)
    th = rng.uniform(0, 2 * math.pi, 100)
    z = r * np.exp(1j * th)
    assert np.array_equal(sinhc(z), sinhc(-z))
    assert np.array_equal(sinhc_grad(z), sinhc_grad(-z))


def test_sinhc_grad_values():
    assert sinhc_grad(0) == pytest.approx(1 / 3, rel=1e-15)
    assert sinhc_grad(1.0).real == pytest.approx(math.exp(-1), rel=1e-14)
    h = 1e-6
    fd = (sinhc(1 + h) - sinhc(1 - h)) / (2 * h)
    assert fd == pytest.approx(1.0 * sinhc_grad(1.0), rel=1e-6)


@pytest.mark.parametrize("n,x,ref", HYP_REF)
def test_hyper0f1_frozen(n, x, ref):
    assert hyper0f1_half(n, x) == pytest.approx(ref, rel=1e-12, abs=1e-15)


def test_hyper0f1_trivial_points():
    assert hyper0f1_half(2, 0.0) == 1.0
    assert abs(hyper0f1_half(3, -math.pi ** 2 / 4)) < 1e-15


def test_hyper0f1_n3_is_sinc():
    t = np.linspace(1e-3, 50, 2000)
    np.testing.assert_allclose(hyper0f1_half(3, -t * t / 4), np.sin(t) / t, atol=1e-12, rtol=0)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 9])
def test_hyper0f1_branches_agree(n):
    # series and Bessel relation evaluated on the same window
    x = -np.linspace(16, 25, 40)
    nu = n / 2 - 1
    t = np.sqrt(-4 * x)
    bessel = special.gamma(nu + 1) * (t / 2) ** (-nu) * special.jv(nu, t)
    np.testing.assert_allclose(hyper0f1_half(n, x), bessel, rtol=1e-9, atol=1e-13)
    # and the Bessel branch beyond the window against mpmath
    far = -np.array([30.0, 100.0, 900.0])
    ref = [float(mp.hyp0f1(mp.mpf(n) / 2, v)) for v in far]
    np.testing.assert_allclose(hyper0f1_half(n, far), ref, rtol=1e-10, atol=1e-14)


def test_hyper0f1_rejects_small_n():
    with pytest.raises(ValueError):
        hyper0f1_half(1, -1.0)
    with pytest.raises(ValueError):
        hyper0f1_half(2.5, -1.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1e6, 1e6, allow_nan=False))
def test_dawson_finite_odd_bounded(x):
    v = dawson(x)
    assert math.isfinite(v)
    assert dawson(-x) == -v
    assert abs(v) <= 0.5410442246 + 1e-12


@settings(max_examples=200, deadline=None)
@given(st.complex_numbers(max_magnitude=300, allow_nan=False, allow_infinity=False))
def test_sinhc_finite_and_even(z):
    v = sinhc(z)
    assert np.isfinite(v)
    assert sinhc(-z) == v
