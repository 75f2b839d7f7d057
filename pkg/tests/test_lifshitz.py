import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import GOLDEN, gold_like, si_like
from lifshitz_audit import _quad, kernel
from lifshitz_audit import constants as const
from lifshitz_audit import materials as M
from lifshitz_audit import lifshitz as L
from lifshitz_audit.schemes import ModifiedScreened, StandardFresnel, build_scheme


def fresnel_si():
    return StandardFresnel(si_like())


def test_matsubara_frequency_golden():
    assert L.matsubara_frequency(300.0, 1) == pytest.approx(GOLDEN["xi1_300K"], rel=1e-14)
    assert np.array_equal(L.matsubara_frequency(300.0, [0, 2]), [0.0, 2 * L.matsubara_frequency(300.0, 1)])


def test_grid_weights():
    grid = L.MatsubaraGrid(300.0, 3, 1e-8)
    assert list(grid.weights) == [0.5, 1.0, 1.0, 1.0]
    assert grid.frequencies[1] == pytest.approx(GOLDEN["xi1_300K"], rel=1e-14)


def test_point_validation():
    with pytest.raises(ValueError):
        L.EvaluationPoint(1e-9, 300.0, fresnel_si())
    with pytest.raises(ValueError):
        L.EvaluationPoint(1e-6, 0.0, fresnel_si())
    with pytest.raises(ValueError):
        L.EvaluationPoint(1e-6, 2e4, fresnel_si())


def test_vacuum_plates_have_no_interaction():
    point = L.EvaluationPoint(1e-6, 300.0, StandardFresnel(M.Dielectric()))
    assert L.free_energy(point).free_energy == 0.0
    assert L.pressure(point).pressure == 0.0


def test_dimensionless_sum_matches_physical_variables():
    point = L.EvaluationPoint(1e-6, 300.0, fresnel_si())
    l_max = 4
    scheme, a, T = point.scheme, point.a, point.T
    code0, p0 = scheme.zero_term(a, T)
    v0, *_ = kernel.integrate_terms(code0, np.zeros(1), p0[None, :], rtol=1e-14, atol=1e-300)
    xi = L.matsubara_frequency(T, np.arange(1, l_max + 1))
    code, rows = scheme.terms(xi, a, T)
    v, *_ = kernel.integrate_terms(code, 2 * a * xi / const.c, rows, rtol=1e-14, atol=1e-300)
    F = const.k_B * T / (8 * math.pi * a * a) * math.fsum([0.5 * v0[0], *v])
    assert L.free_energy_physical(point, l_max) == pytest.approx(F, rel=1e-10)


@pytest.mark.parametrize("a_nm", [100.0, 300.0, 1000.0, 3000.0, 8000.0])
def test_pressure_matches_free_energy_derivative(a_nm):
    point = L.EvaluationPoint(a_nm * 1e-9, 300.0, ModifiedScreened(si_like()))
    result = L.pressure(point, check=True)
    assert result.pressure < 0
    assert result.diagnostics.fd_pressure_mismatch < 1e-4


def test_attraction_weakens_with_separation():
    scheme = StandardFresnel(gold_like())
    F = [L.free_energy(L.EvaluationPoint(a, 300.0, scheme)).free_energy for a in np.geomspace(1e-7, 5e-6, 6)]
    assert all(f < 0 for f in F)
    assert np.all(np.diff(np.abs(F)) < 0)


def test_pure_python_backend_agrees(monkeypatch):
    point = L.EvaluationPoint(500e-9, 300.0, ModifiedScreened(gold_like()))
    ref = L.free_energy(point, 1e-10).free_energy
    monkeypatch.setattr(kernel, "integrate_terms", _quad.integrate_terms)
    assert L.free_energy(point, 1e-10).free_energy == pytest.approx(ref, rel=1e-12)


def test_tolerance_controls_truncation():
    point = L.EvaluationPoint(1e-6, 300.0, StandardFresnel(gold_like()))
    loose = L.free_energy(point, 1e-5)
    tight = L.free_energy(point, 1e-12)
    assert tight.diagnostics.l_max >= loose.diagnostics.l_max
    assert loose.free_energy == pytest.approx(tight.free_energy, rel=1e-5)
    assert tight.diagnostics.converged


def test_drude_and_plasma_differ_by_the_zero_frequency_te_term():
    a, T = 5e-6, 300.0
    gold = gold_like()
    plasma = L.EvaluationPoint(a, T, build_scheme("fresnel_plasma", gold))
    drude = L.EvaluationPoint(a, T, StandardFresnel(gold))
    split = L.free_energy(plasma, 1e-12).free_energy - L.free_energy(drude, 1e-12).free_energy
    te0 = L.zero_frequency_term(plasma, kernel.TE)
    assert te0 < 0
    # the plasma-like model binds more strongly, by about its own l = 0 TE term
    assert split == pytest.approx(te0, rel=1e-3)


def test_low_temperature_entropy_depends_on_the_scheme():
    gold = gold_like()
    plasma = L.entropy(L.EvaluationPoint(1e-6, 1.0, build_scheme("fresnel_plasma", gold))).entropy
    screened = L.entropy(L.EvaluationPoint(1e-6, 1.0, ModifiedScreened(gold))).entropy
    unit = const.k_B / (16 * math.pi * 1e-12)
    assert abs(plasma) < 1e-2 * unit
    assert screened < -0.5 * unit


def test_entropy_step_rule():
    assert L.entropy_step(300.0) == pytest.approx(0.3)
    assert L.entropy_step(0.1) == pytest.approx(1e-3)
    assert L.entropy_step(1e-3) == pytest.approx(5e-4)
    with pytest.raises(ValueError):
        L.entropy(L.EvaluationPoint(1e-6, 1.0, fresnel_si()), dT=2.0)


@settings(max_examples=25, deadline=None)
@given(st.floats(-1.0, 1.0), st.floats(0.1, 10.0), st.floats(0.5, 3.5))
def test_power_law_fit_recovers_parameters(S0, c, p):
    T = np.array(L.log_grid(0.5, 10.0, 8))
    S0_fit, p_fit, c_fit, rms = L.fit_power_law(T, S0 + c * T**p)
    scale = max(abs(S0), c * 10.0**p)
    assert abs(S0_fit - S0) < 1e-5 * scale
    assert p_fit == pytest.approx(p, abs=1e-4)
    assert rms < 1e-6


def test_extrapolation_rejects_short_grids_and_poor_fits(monkeypatch):
    with pytest.raises(ValueError):
        L.entropy_zero_extrapolation(1e-6, fresnel_si(), [1, 2, 3])
    rng = np.random.default_rng(7)
    noisy = iter(rng.normal(size=8))
    monkeypatch.setattr(L, "entropy", lambda point, tol: L.CasimirResult(point, entropy=next(noisy)))
    with pytest.raises(L.FitError):
        L.entropy_zero_extrapolation(1e-6, fresnel_si(), L.log_grid(1, 10, 8))


def test_log_grid():
    g = L.log_grid(0.05, 5.0, 7)
    assert len(g) == 7
    assert g[0] == pytest.approx(0.05) and g[-1] == pytest.approx(5.0)
    assert np.allclose(np.diff(np.log(g)), np.log(100) / 6)
    assert L.log_grid(3.0, 9.0, 1) == [3.0]


def test_proximity_force():
    F_pp = lambda a: -1e-9 * (1e-6 / a) ** 3  # noqa: E731
    assert L.pfa_sphere_force(1e-6, 1e-4, F_pp) == pytest.approx(2 * math.pi * 1e-4 * -1e-9)
    with pytest.warns(L.ProximityWarning):
        L.pfa_sphere_force(1e-6, 5e-5, F_pp)
    with pytest.raises(ValueError):
        L.pfa_sphere_force(1e-6, 0.0, F_pp)
    point = L.EvaluationPoint(1e-6, 300.0, fresnel_si())
    assert L.pfa_equivalent_pressure(point) == L.pressure(point).pressure
