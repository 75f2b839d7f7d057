import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from conftest import GOLDEN
from lifshitz_audit import specfun


@pytest.mark.parametrize("z", ["0", "0.25", "0.5", "0.9", "1"])
def test_polylog3_golden(z):
    assert specfun.polylog(3, float(z)) == pytest.approx(GOLDEN[f"polylog3_{z}"], abs=1e-14)


@given(st.floats(-1.0, 1.0), st.integers(2, 6))
def test_polylog_against_mpmath(z, n):
    assert specfun.polylog(n, z) == pytest.approx(float(mpmath.polylog(n, z)), abs=2e-15)


@pytest.mark.parametrize("s", [2, 3, 4, 5, 7, 10])
def test_zeta_int(s):
    assert specfun.zeta_int(s) == pytest.approx(float(mpmath.zeta(s)), rel=1e-15)


def test_polylog_domain():
    with pytest.raises(ValueError):
        specfun.polylog(3, 1.5)
    with pytest.raises(ValueError):
        specfun.polylog(1, 0.5)


def test_metal_limit_golden_and_bounds():
    a = 1e-6
    lim = specfun.entropy_metal_limit(a, 9.0 * 1.602176634e-19 / 1.054571817e-34)
    assert lim.value == pytest.approx(GOLDEN["entropy_metal_1um_9eV"], rel=1e-9)
    unit = 1.380649e-23 / (16 * math.pi * a * a)
    assert -specfun.zeta3() * unit < lim.value < 0


def test_dielectric_limit_golden_and_edges():
    assert specfun.entropy_dielectric_limit(1e-6, 3.0).value == pytest.approx(
        GOLDEN["entropy_dielectric_1um_eps3"], rel=1e-13
    )
    assert specfun.entropy_dielectric_limit(1e-6, math.inf).value == 0.0
    unit = 1.380649e-23 / (16 * math.pi * 1e-12)
    assert specfun.entropy_dielectric_limit(1e-6, 1.0).value == pytest.approx(specfun.zeta3() * unit)


def test_limits_scale_as_inverse_area():
    d1 = specfun.entropy_dielectric_limit(1e-6, 3.0).value
    d2 = specfun.entropy_dielectric_limit(2e-6, 3.0).value
    assert d1 / d2 == pytest.approx(4.0, rel=1e-14)
