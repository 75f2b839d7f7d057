"""Dielectric response along the imaginary frequency axis and screening lengths.

All formulas are rational SI transcriptions of the Gaussian-unit
expressions common in the Casimir literature:

* ``4 pi e^2 n / m``        ->  ``e^2 n / (eps_vac m)``          (plasma frequency squared)
* ``4 pi sigma / xi``       ->  ``sigma / (eps_vac xi)``         (conductivity term of the permittivity)
* ``4 pi e^2 n / (eps0 k_B T)`` -> ``e^2 n / (eps_vac eps0 k_B T)`` (Debye-Hueckel kappa^2)

Conductivities returned by :func:`sigma_imag_axis` are in S/m; dividing by
``eps_vac`` gives the s^-1 quantity that plays the role of the Gaussian
``4 pi sigma``.  Only dimensionless ratios reach the Lifshitz sum, so the
choice of unit system is internal.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from . import constants as const


class MaterialError(ValueError):
    """Invalid material parameters."""


class ScreeningError(ArithmeticError):
    """The screening length is divergent or undefined for the given inputs."""


# ---------------------------------------------------------------------------
# core electrons


@dataclass(frozen=True)
class Oscillator:
    """Lorentz oscillator of the core-electron response.

    Parameters
    ----------
    strength : float
        oscillator strength f_j, rad^2/s^2
    omega : float
        resonance frequency, rad/s (must be nonzero)
    gamma : float
        damping, rad/s
    """

    strength: float
    omega: float
    gamma: float = 0.0

    def __post_init__(self):
        if not self.omega > 0:
            raise MaterialError(f"oscillator resonance must be positive, got {self.omega}")
        if self.strength < 0 or self.gamma < 0:
            raise MaterialError("oscillator strength and damping must be non-negative")

    @classmethod
    def from_ev(cls, strength_ev2, omega_ev, gamma_ev=0.0):
        w = const.EV_TO_RAD_S
        return cls(strength_ev2 * w * w, omega_ev * w, gamma_ev * w)


@dataclass(frozen=True)
class OscillatorSet:
    oscillators: Tuple[Oscillator, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "oscillators", tuple(self.oscillators))

    def __len__(self):
        return len(self.oscillators)

    @property
    def static(self):
        """eps(0) of the core electrons."""
        return float(eps_core(0.0, self))


def eps_core(xi, osc: OscillatorSet):
    r"""Core-electron permittivity

    .. math:: \varepsilon(i\xi) = 1 + \sum_j f_j / (\omega_j^2 + \xi^2 + \gamma_j \xi)

    Accepts scalars or arrays of non-negative ``xi`` (rad/s).
    """
    xi = np.asarray(xi, dtype=float)
    out = np.ones_like(xi)
    for o in osc.oscillators:
        out = out + o.strength / (o.omega * o.omega + xi * xi + o.gamma * xi)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# free carriers


@dataclass(frozen=True)
class DrudeParams:
    """Plasma frequency and relaxation (rad/s); gamma = 0 is the plasma-like model."""

    omega_p: float
    gamma: float = 0.0

    def __post_init__(self):
        if self.omega_p < 0 or not self.gamma >= 0:
            raise MaterialError("need omega_p >= 0 and gamma >= 0")


def drude_excess(xi, drude: DrudeParams):
    """The carrier term ``omega_p^2 / (xi (xi + gamma))`` of the Drude permittivity."""
    xi = np.asarray(xi, dtype=float)
    if np.any(xi <= 0):
        raise ValueError("the Drude term diverges at xi = 0; use a zero-frequency formula")
    wp2 = drude.omega_p * drude.omega_p
    if math.isinf(drude.gamma):
        out = np.zeros_like(xi)
    else:
        out = wp2 / (xi * (xi + drude.gamma))
    return out if out.ndim else float(out)


def eps_drude(xi, osc: OscillatorSet, drude: DrudeParams):
    r"""Drude permittivity :math:`\varepsilon(i\xi) + \omega_p^2/(\xi(\xi+\gamma))` for xi > 0."""
    return eps_core(xi, osc) + drude_excess(xi, drude)


class Statistics(enum.Enum):
    MAXWELL_BOLTZMANN = "maxwell_boltzmann"
    FERMI_DIRAC = "fermi_dirac"


@dataclass(frozen=True)
class CarrierModel:
    """Free charge carriers and their temperature laws.

    The density and mobility given are the values at ``T_ref``.  Away from it

    * ``n(T) = n_ref exp(-C_n/k_B (1/T - 1/T_ref))``, or log-linear
      interpolation in ``log n`` against ``1/T`` over ``density_table``;
    * ``mu(T) = mu_ref (T_ref/T)**p exp(-C_mu/k_B (1/T - 1/T_ref))``.

    ``p > 0`` models a perfect lattice whose scattering freezes out,
    ``C_mu > 0`` an activated (ionic, hopping) mobility.

    Parameters
    ----------
    density : float
        carrier density at ``T_ref``, 1/m^3
    effective_mass : float
        kg
    mobility : float
        m^2/(V s) at ``T_ref``
    statistics : Statistics
    T_ref : float
        reference temperature, K
    density_activation, mobility_activation : float
        activation energies C_n and C_mu, J
    mobility_exponent : float
        power-law exponent p
    density_table : sequence of (T_K, n_per_m3)
        overrides the closed-form density law when given
    """

    density: float
    effective_mass: float = const.m_e
    mobility: float = 0.0
    statistics: Statistics = Statistics.MAXWELL_BOLTZMANN
    T_ref: float = 300.0
    density_activation: float = 0.0
    mobility_activation: float = 0.0
    mobility_exponent: float = 0.0
    density_table: Tuple[Tuple[float, float], ...] = field(default=())

    def __post_init__(self):
        if self.density < 0:
            raise MaterialError("carrier density must be non-negative")
        if not self.effective_mass > 0:
            raise MaterialError("effective mass must be positive")
        if self.mobility < 0:
            raise MaterialError("mobility must be non-negative")
        if not self.T_ref > 0:
            raise MaterialError("T_ref must be positive")
        table = tuple(sorted((float(t), float(n)) for t, n in self.density_table))
        for t, n in table:
            if t <= 0 or n <= 0:
                raise MaterialError("density table needs positive temperatures and densities")
        object.__setattr__(self, "density_table", table)

    # -- temperature laws --------------------------------------------------

    def density_at(self, T=None):
        if T is None:
            T = self.T_ref
        if self.density_table:
            return _log_inverse_t_interp(self.density_table, T)
        if self.density_activation > 0:
            if T <= 0:
                return 0.0
            x = -self.density_activation / const.k_B * (1.0 / T - 1.0 / self.T_ref)
            return self.density * math.exp(x)
        return self.density

    def mobility_at(self, T=None):
        if T is None:
            T = self.T_ref
        mu = self.mobility
        if mu == 0:
            return 0.0
        if T <= 0:
            if self.mobility_activation > 0:
                return 0.0
            return math.inf if self.mobility_exponent > 0 else mu
        if self.mobility_exponent:
            mu *= (self.T_ref / T) ** self.mobility_exponent
        if self.mobility_activation > 0:
            mu *= math.exp(-self.mobility_activation / const.k_B * (1.0 / T - 1.0 / self.T_ref))
        return mu

    def density_vanishes_at_zero(self):
        """True when n(T) -> 0 as T -> 0 (activated or table-extrapolated density)."""
        if self.density_table:
            if len(self.density_table) < 2:
                return False
            (t0, n0), (t1, n1) = self.density_table[0], self.density_table[1]
            # log n decreasing with 1/T on the low-T segment
            return (math.log(n1) - math.log(n0)) / (1 / t1 - 1 / t0) < 0
        return self.density_activation > 0

    def sigma0(self, T=None):
        """dc conductivity mu |e| n, S/m."""
        return self.mobility_at(T) * const.e * self.density_at(T)

    def plasma_frequency(self, T=None):
        n = self.density_at(T)
        return math.sqrt(n * const.e**2 / (const.eps_vac * self.effective_mass))

    def relaxation(self, T=None):
        """gamma = |e| / (mu m), rad/s; infinite for immobile carriers."""
        mu = self.mobility_at(T)
        if mu == 0:
            return math.inf
        return const.e / (mu * self.effective_mass)

    def fermi_energy(self, T=None):
        """E_F = hbar omega_p, J."""
        return const.hbar * self.plasma_frequency(T)

    def drude(self, T=None):
        return DrudeParams(self.plasma_frequency(T), self.relaxation(T))


def _log_inverse_t_interp(table, T):
    if len(table) == 1 or T <= 0:
        if T <= 0 and len(table) > 1:
            # extrapolate the low-T segment to 1/T -> inf
            (t0, n0), (t1, n1) = table[0], table[1]
            slope = (math.log(n1) - math.log(n0)) / (1 / t1 - 1 / t0)
            return 0.0 if slope < 0 else (math.inf if slope > 0 else n0)
        return table[0][1]
    x = 1.0 / T
    xs = [1.0 / t for t, _ in table][::-1]
    ys = [math.log(n) for _, n in table][::-1]
    if x <= xs[0]:
        i = 0
    elif x >= xs[-1]:
        i = len(xs) - 2
    else:
        i = int(np.searchsorted(xs, x)) - 1
    slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
    return math.exp(ys[i] + slope * (x - xs[i]))


def sigma_imag_axis(xi, carriers: CarrierModel, T=None):
    r"""Conductivity along the imaginary axis, :math:`\sigma(0)/(1+\xi/\gamma)`, in S/m.

    ``sigma / eps_vac`` (units s^-1) corresponds to the Gaussian ``4 pi sigma``.
    Zero mobility gives zero conductivity.
    """
    xi = np.asarray(xi, dtype=float)
    s0 = carriers.sigma0(T)
    gamma = carriers.relaxation(T)
    if s0 == 0 or math.isinf(gamma):
        out = np.full_like(xi, s0)
    elif math.isinf(s0):
        # gamma = 0: sigma0 * gamma = eps_vac omega_p^2 stays finite
        wp = carriers.plasma_frequency(T)
        with np.errstate(divide="ignore"):
            out = np.where(xi == 0, np.inf, const.eps_vac * wp * wp / np.where(xi == 0, 1.0, xi))
    else:
        out = s0 / (1.0 + xi / gamma)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# screening


class ScreeningKind(enum.Enum):
    DEBYE_HUCKEL = "debye_huckel"
    THOMAS_FERMI = "thomas_fermi"
    GENERAL_EINSTEIN = "general_einstein"


@dataclass(frozen=True)
class ScreeningSpec:
    kind: ScreeningKind
    carriers: CarrierModel
    eps0: float = 1.0

    def __post_init__(self):
        if not self.eps0 >= 1:
            raise MaterialError("static core permittivity must be >= 1")


def screening_kappa(spec: ScreeningSpec, T):
    """Inverse screening length kappa (1/m) at temperature T (K).

    Raises
    ------
    ScreeningError
        Debye-Hueckel at T = 0 with carriers present (kappa diverges), or a
        vanishing diffusion coefficient in the Einstein-relation form.
    """
    car = spec.carriers
    n = car.density_at(T)
    if n == 0:
        return 0.0
    e2 = const.e * const.e
    if spec.kind is ScreeningKind.DEBYE_HUCKEL:
        if not T > 0:
            raise ScreeningError("Debye-Hueckel screening diverges at T = 0")
        k2 = e2 * n / (const.eps_vac * spec.eps0 * const.k_B * T)
    elif spec.kind is ScreeningKind.THOMAS_FERMI:
        k2 = 3.0 * e2 * n / (2.0 * const.eps_vac * spec.eps0 * car.fermi_energy(T))
    else:
        mu = car.mobility_at(T)
        if car.statistics is Statistics.MAXWELL_BOLTZMANN:
            D = mu * const.k_B * T / const.e
        else:
            D = mu * 2.0 * car.fermi_energy(T) / (3.0 * const.e)
        if D == 0 or math.isinf(D):
            raise ScreeningError("diffusion coefficient is zero or infinite; kappa undefined")
        sigma0 = mu * const.e * n
        k2 = sigma0 / (const.eps_vac * spec.eps0 * D)
    return math.sqrt(k2)


# ---------------------------------------------------------------------------
# response variants


@dataclass(frozen=True)
class Dielectric:
    """Core electrons only; dc conductivity neglected."""

    oscillators: OscillatorSet = OscillatorSet()

    @property
    def eps0(self):
        return self.oscillators.static

    def excess(self, xi, T=None):
        xi = np.asarray(xi, dtype=float)
        out = np.zeros_like(xi)
        return out if out.ndim else 0.0

    def permittivity(self, xi, T=None):
        return eps_core(xi, self.oscillators)

    @property
    def conducting(self):
        return False


@dataclass(frozen=True)
class DrudeMetal:
    """Core oscillators plus a Drude term.

    Relaxation and plasma frequency come from ``carriers`` at the evaluation
    temperature when given, else from the fixed ``drude`` parameters.
    """

    oscillators: OscillatorSet = OscillatorSet()
    drude: Optional[DrudeParams] = None
    carriers: Optional[CarrierModel] = None

    def __post_init__(self):
        if self.drude is None and self.carriers is None:
            raise MaterialError("DrudeMetal needs Drude parameters or a carrier model")

    @property
    def eps0(self):
        return self.oscillators.static

    def drude_params(self, T=None):
        if self.carriers is not None:
            return self.carriers.drude(T)
        return self.drude

    def excess(self, xi, T=None):
        return drude_excess(xi, self.drude_params(T))

    def permittivity(self, xi, T=None):
        return eps_core(xi, self.oscillators) + self.excess(xi, T)

    @property
    def conducting(self):
        return self.drude_params().omega_p > 0


@dataclass(frozen=True)
class GeneralizedPlasma:
    """Core oscillators plus a dissipationless plasma term."""

    oscillators: OscillatorSet = OscillatorSet()
    omega_p: float = 0.0

    def __post_init__(self):
        if self.omega_p < 0:
            raise MaterialError("omega_p must be non-negative")

    @property
    def eps0(self):
        return self.oscillators.static

    def drude_params(self, T=None):
        return DrudeParams(self.omega_p, 0.0)

    def excess(self, xi, T=None):
        return drude_excess(xi, self.drude_params())

    def permittivity(self, xi, T=None):
        return eps_core(xi, self.oscillators) + self.excess(xi)

    @property
    def conducting(self):
        return self.omega_p > 0


@dataclass(frozen=True)
class ScreenedConductor:
    """Drude-type carriers whose static field is screened over 1/kappa."""

    oscillators: OscillatorSet
    carriers: CarrierModel
    kind: ScreeningKind = ScreeningKind.DEBYE_HUCKEL

    @property
    def eps0(self):
        return self.oscillators.static

    @property
    def screening(self):
        return ScreeningSpec(self.kind, self.carriers, self.eps0)

    def kappa(self, T):
        return screening_kappa(self.screening, T)

    def drude_params(self, T=None):
        return self.carriers.drude(T)

    def excess(self, xi, T=None):
        return drude_excess(xi, self.drude_params(T))

    def permittivity(self, xi, T=None):
        return eps_core(xi, self.oscillators) + self.excess(xi, T)

    @property
    def conducting(self):
        return self.carriers.density > 0 or bool(self.carriers.density_table)


MaterialResponse = Union[Dielectric, DrudeMetal, GeneralizedPlasma, ScreenedConductor]


def oscillator_set(rows: Sequence[Sequence[float]] = ()):
    """Build an :class:`OscillatorSet` from ``(f_eV2, omega_eV, gamma_eV)`` rows."""
    return OscillatorSet(tuple(Oscillator.from_ev(*row) for row in rows))


def plasma_counterpart(material: MaterialResponse) -> GeneralizedPlasma:
    """The dissipationless twin of a conducting material (same core, same omega_p at T_ref)."""
    if isinstance(material, GeneralizedPlasma):
        return material
    if isinstance(material, Dielectric):
        return GeneralizedPlasma(material.oscillators, 0.0)
    return GeneralizedPlasma(material.oscillators, material.drude_params().omega_p)


def core_counterpart(material: MaterialResponse) -> Dielectric:
    """The material with its free carriers removed."""
    return Dielectric(material.oscillators)
