import cmath
import math

import pytest
from hypothesis import given, strategies as st

from gentrig._numerics import DomainError, chi, parse_complex, set_working_dps, working_dps


def test_parse_complex_forms():
    assert parse_complex("2.5") == 2.5
    assert parse_complex("1,-2") == complex(1, -2)
    assert parse_complex("2:0") == 2
    assert parse_complex("2:90deg") == pytest.approx(2j)
    assert parse_complex("3:0.5pi") == pytest.approx(3j)
    with pytest.raises(ValueError):
        parse_complex("abc")


@given(mod=st.floats(0.01, 1e3), ang=st.floats(-3.1, 3.1))
def test_parse_complex_polar_round_trip(mod, ang):
    z = parse_complex(f"{mod!r}:{ang!r}")
    assert abs(z) == pytest.approx(mod, rel=1e-14)
    assert cmath.phase(z) == pytest.approx(ang, abs=1e-14)


def test_precision_resolution(monkeypatch):
    monkeypatch.setenv("GENTRIG_PRECISION", "45")
    assert working_dps() == 45
    set_working_dps(60)
    try:
        assert working_dps() == 60
    finally:
        set_working_dps(None)
    monkeypatch.delenv("GENTRIG_PRECISION")
    assert working_dps() == 30
    with pytest.raises(ValueError):
        set_working_dps(10)


def test_chi():
    assert chi(1.0) == pytest.approx(math.pi / 2)
    with pytest.raises(DomainError):
        chi(0.0)
