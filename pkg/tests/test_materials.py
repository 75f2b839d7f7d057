import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import GOLDEN, GOLD_MU, GOLD_N, gold_like
from lifshitz_audit import constants as const
from lifshitz_audit import materials as M


def test_constants_are_codata_2018():
    assert const.CONSTANTS_SET == "CODATA-2018"
    assert const.hbar == pytest.approx(1.054571817e-34, rel=1e-10)
    assert const.EV_TO_RAD_S == pytest.approx(const.e / const.hbar)


def test_drude_permittivity_golden():
    drude = M.DrudeParams(const.ev_to_rad_s(9.0), const.ev_to_rad_s(0.035))
    eps = M.eps_drude(const.ev_to_rad_s(1.0), M.OscillatorSet(), drude)
    assert eps == pytest.approx(GOLDEN["eps_drude_gold_1eV"], rel=1e-13)


def test_gold_carriers_reproduce_drude_parameters():
    params = gold_like().drude_params(300.0)
    assert params.omega_p / const.EV_TO_RAD_S == pytest.approx(9.0, rel=1e-12)
    assert params.gamma / const.EV_TO_RAD_S == pytest.approx(0.035, rel=1e-12)


def test_oscillator_static_limit():
    osc = M.oscillator_set([(200.0, 10.0), (5.0, 1.0, 0.1)])
    assert osc.static == pytest.approx(1 + 2.0 + 5.0)
    assert M.eps_core(0.0, osc) == pytest.approx(osc.static)


@given(st.floats(1e10, 1e18), st.floats(1e10, 1e18))
def test_core_permittivity_decreases_along_the_imaginary_axis(x1, x2):
    osc = M.oscillator_set([(200.0, 10.0, 0.5), (30.0, 2.0)])
    lo, hi = sorted((x1, x2))
    assert M.eps_core(lo, osc) >= M.eps_core(hi, osc) >= 1.0


def test_oscillator_validation():
    with pytest.raises(M.MaterialError):
        M.Oscillator(1.0, 0.0)
    with pytest.raises(M.MaterialError):
        M.Oscillator(-1.0, 1.0)
    with pytest.raises(M.MaterialError):
        M.CarrierModel(-1.0)


def test_activated_density_and_mobility():
    car = M.CarrierModel(1e24, mobility=0.1, density_activation=0.5 * const.e, mobility_activation=0.2 * const.e)
    assert car.density_at(300.0) == pytest.approx(1e24)
    ratio = car.density_at(150.0) / car.density_at(300.0)
    assert ratio == pytest.approx(math.exp(-0.5 * const.e / const.k_B * (1 / 150 - 1 / 300)))
    assert car.density_at(1.0) < 1e-200
    assert car.density_vanishes_at_zero()
    assert car.mobility_at(1.0) < car.mobility_at(300.0)


def test_power_law_mobility():
    car = M.CarrierModel(GOLD_N, mobility=GOLD_MU, mobility_exponent=5.0)
    assert car.mobility_at(30.0) / car.mobility_at(300.0) == pytest.approx(1e5)
    assert not car.density_vanishes_at_zero()


def test_density_table_interpolates_log_against_inverse_temperature():
    car = M.CarrierModel(1e20, density_table=((100.0, 1e18), (200.0, 1e20)))
    inv = 0.5 * (1 / 100 + 1 / 200)
    assert car.density_at(1 / inv) == pytest.approx(1e19, rel=1e-12)


def test_debye_huckel_kappa_golden():
    spec = M.ScreeningSpec(M.ScreeningKind.DEBYE_HUCKEL, M.CarrierModel(5e25), 11.66)
    assert M.screening_kappa(spec, 300.0) == pytest.approx(GOLDEN["kappa_dh_si"], rel=1e-12)


def test_debye_huckel_diverges_at_zero_temperature():
    spec = M.ScreeningSpec(M.ScreeningKind.DEBYE_HUCKEL, M.CarrierModel(5e25), 11.66)
    with pytest.raises(M.ScreeningError):
        M.screening_kappa(spec, 0.0)


def test_einstein_screening_matches_debye_huckel_for_nondegenerate_carriers():
    car = M.CarrierModel(5e25, mobility=0.135)
    dh = M.screening_kappa(M.ScreeningSpec(M.ScreeningKind.DEBYE_HUCKEL, car, 11.66), 300.0)
    ein = M.screening_kappa(M.ScreeningSpec(M.ScreeningKind.GENERAL_EINSTEIN, car, 11.66), 300.0)
    assert ein == pytest.approx(dh, rel=1e-12)


def test_einstein_screening_matches_thomas_fermi_for_degenerate_carriers():
    car = M.CarrierModel(GOLD_N, mobility=GOLD_MU, statistics=M.Statistics.FERMI_DIRAC)
    tf = M.screening_kappa(M.ScreeningSpec(M.ScreeningKind.THOMAS_FERMI, car), 300.0)
    ein = M.screening_kappa(M.ScreeningSpec(M.ScreeningKind.GENERAL_EINSTEIN, car), 300.0)
    assert ein == pytest.approx(tf, rel=1e-12)


def test_no_carriers_no_screening():
    spec = M.ScreeningSpec(M.ScreeningKind.DEBYE_HUCKEL, M.CarrierModel(0.0), 3.0)
    assert M.screening_kappa(spec, 300.0) == 0.0


def test_counterparts():
    gold = gold_like()
    plasma = M.plasma_counterpart(gold)
    assert plasma.omega_p == pytest.approx(gold.drude_params().omega_p)
    core = M.core_counterpart(gold)
    assert not core.conducting
    xi = np.array([1e13, 1e15])
    assert np.all(core.permittivity(xi) == 1.0)
