import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from gentrig import oracle
from gentrig._numerics import DomainError
from gentrig.expansions import (CertifiedValue, EvalRequest, PreconditionError, Sign, Truncation, evaluate,
                                f_expand, fresnel, g_expand, m2_expand, optimal_order, phi_expand,
                                term_magnitude, ti_expand, x_expand)

mp.dps = 30
# mpmath's own Fresnel integrals at 30 digits
FRESNEL_S3 = mp.mpf("0.496312998967375036097612265299")
FRESNEL_C3 = mp.mpf("0.605720789297685629556161074287")
mp.dps = 15


def test_phase_worked_value():
    # a = 0, z = 10, one term: 10 + pi/2 - 1/10, bound t_1(1)/(3 * 10^3) = 13/3000
    cv = phi_expand(0, 10, 1)
    assert abs(cv.value - (10 + mp.pi / 2 - mp.mpf("0.1"))) < 1e-25
    assert cv.error_bound == pytest.approx(13 / 3000, rel=1e-15)
    assert cv.sign_certificate is Sign.remainder_positive


def test_inverse_phase_worked_value():
    # c_0(1) = 1, c_1(1) = 16: 10 + 1/10 - 16/3000
    cv = x_expand(0, 10, 2)
    assert abs(cv.value - (10 + mp.mpf(1) / 10 - mp.mpf(16) / 3000)) < 1e-25
    assert cv.basis == "inverse-phase"


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_f_partial_sums_at_a0(N):
    # f(0, z) ~ sum (-1)^n (2n)! / z^(2n+1)
    z = 10
    expected = sum(Fraction((-1) ** n * math.factorial(2 * n), z ** (2 * n + 1)) for n in range(N))
    cv = f_expand(0, z, N)
    assert abs(cv.value - mp.mpf(expected.numerator) / expected.denominator) < 1e-25
    # on the positive axis the terminant factor is at most 1
    assert cv.error_bound <= math.factorial(2 * N) / z ** (2 * N + 1) * (1 + 1e-15)


def test_g_partial_sum_at_a0():
    cv = g_expand(0, 10, 2)
    assert abs(cv.value - (mp.mpf(1) / 100 - mp.mpf(6) / 10 ** 4)) < 1e-25


def test_a_equal_one_closed_forms():
    assert f_expand(1, 4.2).value == 1
    assert g_expand(1, 4.2).value == 0
    assert m2_expand(1, 4.2).value == 1
    assert m2_expand(1, 4.2, 3).error_bound == 0


def test_optimal_orders():
    assert [optimal_order(0, math.pi * k, "x") for k in (5, 10, 15)] == [7, 15, 23]
    assert optimal_order(1, 5.0, "f") == 1
    assert f_expand(0.5, 12).truncation is Truncation.optimal


@settings(max_examples=20, deadline=None)
@given(a=st.floats(-3, 0.95), z=st.floats(2, 40), series=st.sampled_from(["f", "g", "m2", "phi", "x"]))
def test_optimal_order_is_local_minimum(a, z, series):
    N = optimal_order(a, z, series)
    if 0 < N < 60:
        here = term_magnitude(a, z, series, N)
        assert here <= term_magnitude(a, z, series, N + 1)
        assert here < term_magnitude(a, z, series, N - 1) or N == 1


@settings(max_examples=20, deadline=None)
@given(a=st.floats(-3, 0.95), z=st.floats(4, 40), N=st.integers(1, 5),
       series=st.sampled_from(["f", "g", "m2"]))
def test_enveloping_real_axis(a, z, N, series):
    fn = {"f": f_expand, "g": g_expand, "m2": m2_expand}[series]
    f, g = oracle.f_g_quadrature(a, z)
    ref = {"f": f, "g": g, "m2": f * f + g * g}[series]
    cv = fn(a, z, N)
    rem = ref - cv.value
    assert (rem > 0) == (cv.sign_certificate is Sign.remainder_positive)
    assert abs(rem) <= cv.error_bound


@settings(max_examples=15, deadline=None)
@given(a=st.floats(-2, 0.9), r=st.floats(6, 30), th=st.floats(-1.2, 1.2), N=st.integers(1, 4))
def test_complex_enclosure(a, r, th, N):
    z = mp.mpc(r * math.cos(th), r * math.sin(th))
    f, g = oracle.f_g_quadrature(a, z)
    for cv, ref in ((f_expand(a, z, N), f), (g_expand(a, z, N), g), (phi_expand(a, z, N), oracle.phase(a, z))):
        assert abs(cv.value - ref) <= cv.error_bound
        # certificates are only issued on the positive axis
        assert (cv.sign_certificate is None) == (th != 0)


def test_bound_widens_past_quarter_plane():
    inside = phi_expand(0, cmath.rect(10, math.pi / 8), 2).error_bound
    outside = phi_expand(0, cmath.rect(10, 3 * math.pi / 8), 2).error_bound
    assert outside == pytest.approx(inside / math.sin(3 * math.pi / 4))


def test_precondition_handling():
    cv = f_expand(7.5, 10, 1)
    assert cv.error_bound is None
    with pytest.raises(PreconditionError):
        f_expand(7.5, 10, 1, strict=True)
    assert f_expand(7.5, 10, 4).error_bound is not None


def test_domain_errors():
    with pytest.raises(DomainError):
        phi_expand(1.0, 10)
    with pytest.raises(DomainError):
        x_expand(0.5, -3)
    with pytest.raises(DomainError):
        f_expand(0.5, 0)
    with pytest.raises(ValueError):
        f_expand(0.5, 10, -1)


def test_ti_bound_contains_oracle():
    for alpha in (0.0, 0.3, 0.5):
        cv = ti_expand(-0.5, 15, alpha)
        assert abs(cv.value - oracle.ti(-0.5, 15, alpha)) <= cv.error_bound


def test_fresnel_frozen():
    F, S, C = fresnel(3)
    assert abs(S - FRESNEL_S3) < 1e-13 and abs(C - FRESNEL_C3) < 1e-13
    assert F == (mp.mpf(1) / 2 - C) + 1j * (mp.mpf(1) / 2 - S)


def test_fresnel_paths_and_symmetry():
    assert fresnel(30, with_path=True)[3] == "expansion"
    assert fresnel(0.5, with_path=True)[3] == "oracle"
    _, S, C = fresnel(1.7)
    _, Sm, Cm = fresnel(-1.7)
    assert abs(Sm + S) < 1e-25 and abs(Cm + C) < 1e-25
    Fi, Si, Ci = fresnel(1.7j)
    assert Fi is None
    assert abs(Si + 1j * S) < 1e-25 and abs(Ci - 1j * C) < 1e-25
    with mp.workdps(30):
        assert abs(fresnel(1.7)[1] - mp.fresnels(1.7)) < 1e-13


def test_evaluate_dispatch_and_record():
    cv = evaluate("phi", EvalRequest(0.5, 10.0, 3))
    assert isinstance(cv, CertifiedValue) and cv.terms_used == 3
    d = cv.to_dict()
    assert d["truncation"] == "requested" and d["basis"] == "phase"
    assert evaluate("fresnelS", EvalRequest(0, 2.0)).basis.startswith("fresnel:")
    with pytest.raises(ValueError):
        evaluate("nope", EvalRequest(0, 1.0))
