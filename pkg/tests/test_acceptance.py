"""Acceptance criteria, one test per criterion.

A pass/fail line per criterion is printed in the terminal summary.
"""
import itertools
import math
import time

import numpy as np
import pytest

from conftest import EXAMPLES, GOLDEN, eps3_dielectric, gold_like, si_like
from lifshitz_audit import constants as const
from lifshitz_audit import materials as M
from lifshitz_audit import reflection as R
from lifshitz_audit.cli import main
from lifshitz_audit.lifshitz import EvaluationPoint, entropy_zero_extrapolation, free_energy, log_grid, pressure
from lifshitz_audit.schemes import ModifiedScreened, StandardFresnel
from lifshitz_audit.specfun import entropy_dielectric_limit, entropy_metal_limit, polylog, zeta3


def criterion(number, title):
    return pytest.mark.criterion(number, title)


@criterion(1, "ideal-metal limit of the generalized plasma model")
def test_ideal_metal_limit():
    a = 1e-6
    scheme = StandardFresnel(M.GeneralizedPlasma(omega_p=const.ev_to_rad_s(1e4)))
    point = EvaluationPoint(a, 1.0, scheme)
    start = time.perf_counter()
    F = free_energy(point).free_energy
    P = pressure(point).pressure
    elapsed = time.perf_counter() - start
    F_ideal = -math.pi**2 * const.hbar * const.c / (720 * a**3)
    P_ideal = -math.pi**2 * const.hbar * const.c / (240 * a**4)
    assert F_ideal == pytest.approx(GOLDEN["ideal_energy_1um"], rel=1e-12)
    assert P_ideal == pytest.approx(GOLDEN["ideal_pressure_1um"], rel=1e-12)
    assert abs(F / F_ideal - 1) < 5e-3
    assert abs(P / P_ideal - 1) < 5e-3
    assert elapsed < 10.0


@criterion(2, "negative zero-temperature entropy of screened metals")
def test_nernst_violation_metal():
    a = 1e-6
    material = gold_like()
    start = time.perf_counter()
    fit = entropy_zero_extrapolation(a, ModifiedScreened(material), log_grid(0.05, 5.0, 8))
    elapsed = time.perf_counter() - start
    limit = entropy_metal_limit(a, material.carriers.plasma_frequency()).value
    assert limit == pytest.approx(GOLDEN["entropy_metal_1um_9eV"], rel=1e-9)
    assert fit.S0 < 0
    assert abs(fit.S0 / limit - 1) < 1e-2
    assert elapsed < 300.0


@pytest.fixture(scope="module")
def dielectric_fits():
    scheme = ModifiedScreened(eps3_dielectric())
    grid = log_grid(0.5, 10.0, 8)
    return {a: entropy_zero_extrapolation(a, scheme, grid) for a in (0.5e-6, 1e-6, 2e-6)}


@criterion(3, "positive zero-temperature entropy of dielectrics with fixed carrier density")
def test_nernst_violation_dielectric(dielectric_fits):
    limit = entropy_dielectric_limit(1e-6, 3.0).value
    assert limit == pytest.approx(GOLDEN["entropy_dielectric_1um_eps3"], rel=1e-12)
    for a, fit in dielectric_fits.items():
        assert fit.S0 > 0
        assert abs(fit.S0 / entropy_dielectric_limit(a, 3.0).value - 1) < 1e-2
    scaled = [fit.S0 * a * a for a, fit in dielectric_fits.items()]
    assert max(scaled) / min(scaled) - 1 < 1e-2


@criterion(4, "Nernst theorem holds when the carrier density vanishes")
def test_nernst_satisfied_intrinsic():
    a = 1e-6
    fit = entropy_zero_extrapolation(a, ModifiedScreened(eps3_dielectric(0.5)), log_grid(0.5, 10.0, 8))
    limit = entropy_dielectric_limit(a, 3.0).value
    assert abs(fit.S0) <= 1e-3 * abs(limit)
    assert abs(fit.exponent - 2.0) <= 0.3


@criterion(5, "zero-frequency screened coefficients and their kappa limits")
def test_zero_frequency_suite():
    material = si_like()
    y = np.array([0.01, 0.3, 1.0, 5.0, 30.0])
    point = R.WavePoint(np.zeros_like(y), y)
    assert np.all(R.modified_te(point, material, 300.0) == 0.0)
    ladder = np.geomspace(1e-6, 1e6, 10)
    for eps0 in (1.5, 3.0, 11.66):
        r0 = (eps0 - 1) / (eps0 + 1)
        r = np.array([R.zero_freq_modified_tm(y, eps0, k) for k in ladder])
        assert np.all(np.diff(r, axis=0) > 0)
        # distance to r0 shrinks along the descending ladder, distance to 1 along the ascending
        assert np.all(np.diff(np.abs(r[::-1] - r0), axis=0) < 0)
        assert np.all(np.diff(1 - r, axis=0) < 0)
        assert np.allclose(r[0], r0, atol=1e-6)
        assert np.all(1 - r[-1, y <= 1.0] < 1e-5)
        assert np.allclose(R.zero_freq_modified_tm(y, eps0, 0.0), r0, rtol=0, atol=1e-15)
        assert np.all(R.zero_freq_modified_tm(y, eps0, math.inf) == 1.0)


def _slope(x, res):
    return np.polyfit(np.log(x), np.log(res), 1)[0]


@criterion(6, "first-order expansions leave quadratic residuals")
def test_expansion_orders():
    zeta = np.array([0.5, 2.0, 10.0])
    y = zeta * np.array([1.5, 3.0, 2.0])
    point = R.WavePoint(zeta, y, 1e-6)

    # metal: beta_a = 1/kappa_a at fixed eps~ of a gold-like metal at 300 K
    gold = gold_like()
    eps = M.eps_core(point.xi, gold.oscillators)
    delta = gold.excess(point.xi, 300.0)
    betas = np.geomspace(1e-3, 1e-6, 7)
    res_tm, res_te = [], []
    for b in betas:
        tm, te = R.modified_pair(eps, delta, 1.0, 1.0 / b, zeta, y)
        tm0, te0 = R.fresnel_pair(eps + delta, zeta, y)
        res_tm.append(np.abs(tm - (tm0 - 2 * b * R.metal_z(eps, delta, 1.0, zeta, y))))
        res_te.append(np.abs(te - te0))
    res_tm = np.array(res_tm)
    for j in range(len(zeta)):
        assert abs(_slope(betas, res_tm[:, j]) - 2.0) <= 0.1
    # the TE coefficient carries no screening term: its expansion is exact
    assert np.all(np.array(res_te) == 0.0)

    # dielectric: beta_l = sigma0/(eps_vac xi) swept through the mobility at kappa_a ~ 1e4
    res, beta = [], []
    for mu in np.geomspace(1e-6, 1e-9, 7):
        material = M.ScreenedConductor(M.oscillator_set([(200.0, 10.0)]), M.CarrierModel(1e26, mobility=mu))
        e_tm, e_te = R.expansion_dielectric(point, material, 300.0)
        res.append([
            np.abs(R.modified_tm(point, material, 300.0) - e_tm.value()),
            np.abs(R.modified_te(point, material, 300.0) - e_te.value()),
        ])
        beta.append(e_tm.small)
    res, beta = np.array(res), np.array(beta)
    assert np.ptp(np.log10(beta[:, 0])) == pytest.approx(3.0)
    for j in range(len(zeta)):
        assert abs(_slope(beta[:, j], res[:, 0, j]) - 2.0) <= 0.1
        assert abs(_slope(beta[:, j], res[:, 1, j]) - 2.0) <= 0.1


@criterion(7, "random-phase normal permittivity reduces to the core permittivity")
def test_rpa_reduction():
    zeta = np.array([0.1, 0.5, 2.0, 10.0, 50.0])
    Z, F = np.meshgrid(zeta, [1.01, 1.1, 1.5, 3.0, 10.0])
    point = R.WavePoint(Z.ravel(), (Z * F).ravel(), 1e-6)
    core = M.eps_core(point.xi, si_like().oscillators)
    devs = []
    for scale in (1.0, 1e-2, 1e-4, 1e-6, 1e-8, 1e-10):
        ez = R.eps_z_rpa(point, si_like(5e25 * scale), 300.0)
        devs.append(np.max(np.abs(ez / core - 1)))
    assert np.all(np.diff(devs) < 0)
    assert devs[-1] <= 1e-8


@criterion(8, "no uniaxial trial permittivity reproduces the screened zero-frequency TM coefficient")
def test_impossibility_property():
    a, zeta = 1e-6, 1e-6
    y = np.array([100.0, 200.0, 500.0, 1000.0])
    material = gold_like()
    point = R.WavePoint(np.full_like(y, zeta), y, a)
    eps_x = material.permittivity(point.xi, 300.0)
    kappas = (0.0, 1.0, 10.0, 100.0, 1000.0, 2 * a * material.kappa(300.0))
    lowest = min(
        np.min(R.uniaxial_coeffs(point, eps_x, eps_x * (1 + (k / point.K) ** p))[0])
        for k, p in itertools.product(kappas, (0.5, 1.0, 2.0, 3.0, 4.0))
    )
    highest = max(
        np.max(R.zero_freq_modified_tm(y, e0, k))
        for e0, k in itertools.product((1.0, 2.0, 3.0, 5.0, 8.0, 12.0), (0.0, 1.0, 10.0, 100.0, 1000.0))
    )
    assert lowest > 0.999
    assert highest <= 0.99
    assert lowest - highest >= 0.009


@criterion(9, "screened and Drude pressures coincide for gold at room temperature")
def test_scheme_coincidence():
    material = gold_like()
    for a_nm in np.linspace(300.0, 750.0, 6):
        a = a_nm * 1e-9
        p_mod = pressure(EvaluationPoint(a, 300.0, ModifiedScreened(material)), 1e-8).pressure
        p_drude = pressure(EvaluationPoint(a, 300.0, StandardFresnel(material)), 1e-8).pressure
        assert abs(p_mod / p_drude - 1) < 5e-3


@criterion(10, "trilogarithm and zeta(3) against golden values")
def test_special_functions():
    for z in ("0", "0.25", "0.5", "0.9", "1"):
        assert abs(polylog(3, float(z)) - GOLDEN[f"polylog3_{z}"]) <= 1e-12
    assert abs(zeta3() - polylog(3, 1.0)) <= 1e-14
    assert abs(zeta3() - GOLDEN["zeta3"]) <= 1e-14


@criterion(11, "repeated sweeps produce byte-identical tables")
def test_determinism(tmp_path):
    cfg = EXAMPLES / "gold_pressure.cfg"
    outs = [tmp_path / "one.csv", tmp_path / "two.csv"]
    for out in outs:
        assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
    assert outs[0].read_bytes() == outs[1].read_bytes()
