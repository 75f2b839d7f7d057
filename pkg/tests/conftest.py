"""Shared materials, golden fixtures and the acceptance report."""
from pathlib import Path

import pytest

from lifshitz_audit import constants as const
from lifshitz_audit import materials as M

FIXTURES = Path(__file__).parent / "fixtures"
EXAMPLES = Path(__file__).parent.parent / "examples_configs"

GOLD_N = 5.874493427470349e28  # 1/m^3, omega_p = 9 eV
GOLD_MU = 33.07646746327886e-4  # m^2/(V s), gamma = 0.035 eV at 300 K


def load_golden():
    values = {}
    for line in (FIXTURES / "golden_values.txt").read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            key, value = (part.strip() for part in line.split("="))
            values[key] = float(value)
    return values


GOLDEN = load_golden()


def gold_like(mobility_exponent=5.0):
    carriers = M.CarrierModel(
        GOLD_N,
        mobility=GOLD_MU,
        statistics=M.Statistics.FERMI_DIRAC,
        mobility_exponent=mobility_exponent,
    )
    return M.ScreenedConductor(M.OscillatorSet(), carriers, M.ScreeningKind.THOMAS_FERMI)


def eps3_dielectric(n_activation_ev=0.0):
    """eps0 = 3 core, n = 1e18 cm^-3 at 300 K, mobility freezing out with 0.2 eV activation."""
    carriers = M.CarrierModel(
        1e24,
        mobility=0.1,
        density_activation=n_activation_ev * const.e,
        mobility_activation=0.2 * const.e,
    )
    return M.ScreenedConductor(M.oscillator_set([(200.0, 10.0)]), carriers)


def si_like(density=5e25):
    carriers = M.CarrierModel(density, mobility=0.135)
    return M.ScreenedConductor(M.oscillator_set([(200.787496, 4.34)]), carriers)


@pytest.fixture(scope="session")
def golden():
    return GOLDEN


# ---------------------------------------------------------------------------
# acceptance report: one line per criterion after the run

_OUTCOMES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    failed = report.failed or (report.when == "call" and report.skipped)
    if report.when == "call" or failed:
        prev = _OUTCOMES.get(number, (title, True))[1]
        _OUTCOMES[number] = (title, prev and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        title, ok = _OUTCOMES[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}")
