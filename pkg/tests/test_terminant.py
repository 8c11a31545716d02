import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from gentrig._numerics import ConvergenceError, DomainError, chi, chi_watson
from gentrig.terminant import (Proposition, TerminantBound, TerminantQuery, all_bounds, b3_bracket,
                               b3_objective, b3_residual, best_bound, bound_b1, bound_b2, bound_b3,
                               bound_b4, bound_b5, terminant_eval)

# Pi_1(z) = z f(0, z), frozen from the classical Ci/Si auxiliary functions
PI1_5 = 0.940713872857091118517482060184
PI1_10_QUARTER = complex(0.997846970150329343488574105525, 0.0194460557128322117604639150698)


def test_frozen_values():
    assert terminant_eval(1.0, 5.0) == pytest.approx(PI1_5, rel=1e-13)
    z = 10 * cmath.exp(1j * math.pi / 4)
    assert terminant_eval(1.0, z) == pytest.approx(PI1_10_QUARTER, rel=1e-13)


def _reference(p, z):
    # the defining integral along the real axis, at 30 digits
    with mp.workdps(30):
        p, z = mp.mpc(p), mp.mpc(z)
        val = mp.quad(lambda s: s ** (p - 1) * mp.exp(-s) / (1 + (s / z) ** 2), [0, abs(z), mp.inf])
        return complex(val * mp.rgamma(p))


@pytest.mark.parametrize("p,z", [(0.5, 3.0), (2.0, 1.0), (5.0, 20.0),
                                 (1.5, 4 * cmath.exp(0.3j)), (3.0, 6 * cmath.exp(-1.2j))])
def test_matches_direct_quadrature(p, z):
    assert terminant_eval(p, z) == pytest.approx(_reference(p, z), rel=1e-12)


def test_complex_order():
    p, z = 0.7 + 0.4j, 5 * cmath.exp(0.5j)
    assert terminant_eval(p, z) == pytest.approx(_reference(p, z), rel=1e-12)


def test_real_axis_in_unit_interval():
    for p in (0.1, 1.0, 3.0, 10.0):
        for r in (0.1, 1.0, 50.0):
            v = terminant_eval(p, r)
            assert v.imag == 0 and 0 < v.real < 1


def test_tends_to_one():
    assert terminant_eval(1.0, 1e4).real == pytest.approx(1.0, abs=1e-7)


@settings(max_examples=40, deadline=None)
@given(p=st.floats(0.2, 6.0), r=st.floats(0.5, 30.0), th=st.floats(-3 * math.pi / 4, 3 * math.pi / 4))
def test_modulus_below_best_bound(p, r, th):
    z = cmath.rect(r, th)
    assert abs(terminant_eval(p, z)) <= best_bound(p, z).bound


@settings(max_examples=40, deadline=None)
@given(p=st.floats(0.2, 8.0), r=st.floats(0.5, 30.0), th=st.floats(0.0, 1.5))
def test_conjugate_symmetry(p, r, th):
    z = cmath.rect(r, th)
    assert terminant_eval(p, z.conjugate()) == pytest.approx(terminant_eval(p, z).conjugate(), rel=1e-12)


def test_sectors():
    q_small = TerminantQuery(1.0, cmath.rect(1, 0.2))
    q_mid = TerminantQuery(1.0, cmath.rect(1, 1.2))
    q_far = TerminantQuery(1.0, cmath.rect(1, 2.0))
    assert bound_b1(q_small).sector_ok and not bound_b1(q_far).sector_ok
    assert bound_b2(q_mid).sector_ok and not bound_b2(q_far).sector_ok
    assert not bound_b3(q_small).sector_ok and bound_b3(q_far).sector_ok
    assert bound_b4(q_mid).sector_ok and not bound_b4(q_small).sector_ok
    assert bound_b5(q_far).sector_ok and not bound_b5(q_mid).sector_ok
    assert len(all_bounds(q_mid)) == 5


def test_b1_inside_quarter_plane_is_gamma_ratio():
    assert bound_b1(2.0, cmath.rect(1, 0.5)).bound == pytest.approx(1.0)
    # complex p: Gamma(Re p) / |Gamma(p)|
    p = 1.0 + 1.0j
    expected = math.gamma(1.0) / abs(complex(mp.gamma(p)))
    assert bound_b1(p, 1.0).bound == pytest.approx(expected, rel=1e-14)


def test_b1_csc_growth():
    b = bound_b1(1.0, cmath.rect(1, math.pi / 3)).bound
    assert b == pytest.approx(1 / math.sin(2 * math.pi / 3))


def test_b3_root_and_minimality():
    for p in (0.5, 3.0):
        for th in (1.0, 2.0, 2.5, -2.0):
            tb = bound_b3(p, cmath.rect(1, th))
            lo, hi = b3_bracket(th)
            assert lo <= tb.theta <= hi
            assert abs(b3_residual(p, th, tb.theta)) < 1e-12
            grid = [lo + (hi - lo) * j / 100 for j in range(1, 100)]
            assert all(tb.bound <= b3_objective(p, th, s) * (1 + 1e-12) for s in grid)


def test_b3_bracket_domain():
    with pytest.raises(DomainError):
        b3_bracket(0.5)


def test_b5_variants():
    z = cmath.rect(1, 2.2)
    best = bound_b5(2.0, z).bound
    assert best == min(bound_b5(2.0, z, "sqrt").bound, bound_b5(2.0, z, "chi").bound)


def test_best_bound_is_minimum():
    z = cmath.rect(1, 1.3)
    best = best_bound(2.0, z)
    others = [b.bound for b in all_bounds(2.0, z) if b.sector_ok]
    assert best.bound == min(others)
    assert best.proposition in Proposition


def test_chi_watson_brackets_chi():
    for p in (0.5, 1.0, 4.0, 30.0):
        lo, hi = chi_watson(p)
        assert lo <= chi(p) <= hi


def test_bound_record_validation():
    with pytest.raises(ValueError):
        TerminantBound(Proposition.B1_csc, False, 1.0)
    assert TerminantBound(Proposition.B3_theta, True, 2.0, 0.1).to_dict()["proposition"] == "B3_theta"


def test_domain_errors():
    with pytest.raises(DomainError):
        TerminantQuery(-1.0, 1.0)
    with pytest.raises(DomainError):
        TerminantQuery(1.0, 0)
    with pytest.raises(DomainError):
        best_bound(1.0, -1.0)


def test_nonconvergence_reported():
    with pytest.raises(ConvergenceError) as err:
        terminant_eval(1.0, 10.0, tol=1e-30, max_level=2)
    assert err.value.diagnostics
