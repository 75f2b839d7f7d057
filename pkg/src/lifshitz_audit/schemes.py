"""Reflection schemes: which coefficient formulas enter the Lifshitz sum.

A scheme turns ``(a, T)`` and a block of Matsubara frequencies into the
per-term parameter rows consumed by the quadrature kernel.  Every scheme
owns an explicit zero-frequency branch; the finite-frequency formulas are
never asked for ``xi = 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import constants as const
from . import kernel as K
from .materials import (
    Dielectric,
    GeneralizedPlasma,
    MaterialError,
    MaterialResponse,
    ScreenedConductor,
    core_counterpart,
    eps_core,
    plasma_counterpart,
)


def _zeta(xi, a):
    return 2.0 * a * np.asarray(xi, float) / const.c


def _rows(*cols, n):
    out = np.zeros((n, 4))
    for i, col in enumerate(cols):
        out[:, i] = col
    return out


def _static_tm(eps0):
    return 1.0 if math.isinf(eps0) else (eps0 - 1.0) / (eps0 + 1.0)


@dataclass(frozen=True)
class StandardFresnel:
    """Fresnel coefficients with the material's local permittivity.

    For carriers described by a Drude term (``DrudeMetal`` or
    ``ScreenedConductor``) this is the Drude-model treatment; with
    ``neglect_conductivity`` the carriers are dropped entirely.
    """

    material: MaterialResponse
    neglect_conductivity: bool = False

    @property
    def name(self):
        if self.neglect_conductivity:
            return "fresnel_core"
        if isinstance(self.material, GeneralizedPlasma):
            return "fresnel_plasma"
        return "fresnel"

    def _carriers_on(self):
        return not self.neglect_conductivity and not isinstance(self.material, Dielectric)

    def zero_term(self, a, T):
        eps0 = self.material.eps0
        if not self._carriers_on():
            return K.ZERO_CONST, np.array([_static_tm(eps0), 0.0, 0.0, 0.0])
        dp = self.material.drude_params(T)
        if dp.omega_p == 0 or math.isinf(dp.gamma):
            return K.ZERO_CONST, np.array([_static_tm(eps0), 0.0, 0.0, 0.0])
        if dp.gamma == 0:
            return K.ZERO_PLASMA, np.array([1.0, 2.0 * a * dp.omega_p / const.c, 0.0, 0.0])
        # Drude: eps diverges as 1/xi, so TM -> 1 and TE -> 0
        return K.ZERO_CONST, np.array([1.0, 0.0, 0.0, 0.0])

    def terms(self, xi, a, T):
        eps = np.asarray(eps_core(xi, self.material.oscillators), float)
        if self._carriers_on():
            eps = eps + self.material.excess(xi, T)
        return K.FRESNEL, _rows(eps, n=len(eps))


def _require_screened(material, scheme):
    if not isinstance(material, ScreenedConductor):
        raise MaterialError(f"scheme {scheme!r} needs a screened_conductor material")


@dataclass(frozen=True)
class ModifiedScreened:
    """Coefficients with screening and diffusion currents of the carriers."""

    material: ScreenedConductor
    name = "modified"

    def __post_init__(self):
        _require_screened(self.material, self.name)

    def kappa_a(self, a, T):
        return 2.0 * a * self.material.kappa(T)

    def zero_term(self, a, T):
        return K.ZERO_SCREENED, np.array([self.material.eps0, self.kappa_a(a, T), 0.0, 0.0])

    def _state(self, xi, a, T):
        eps = np.asarray(eps_core(xi, self.material.oscillators), float)
        delta = np.asarray(self.material.excess(xi, T), float) * np.ones_like(eps)
        return eps, delta

    def terms(self, xi, a, T):
        eps, delta = self._state(xi, a, T)
        n = len(eps)
        return K.MODIFIED, _rows(eps, delta, self.material.eps0, self.kappa_a(a, T), n=n)


@dataclass(frozen=True)
class RPA(ModifiedScreened):
    """Nonlocal construction with in-plane eps~ and the matching normal permittivity."""

    name = "rpa"

    def terms(self, xi, a, T):
        code, rows = super().terms(xi, a, T)
        return K.RPA, rows


@dataclass(frozen=True)
class Uniaxial:
    """Uniaxial coefficients with eps_x = eps~ and eps_z = eps_x (1 + (kappa/k_perp)^p).

    At zero frequency eps_x = eps_z/(1 + (kappa/k_perp)^p) = eps0, which for
    ``power = 2`` is the wave-vector dependent permittivity that reproduces
    the screened zero-frequency TM coefficient.
    """

    material: ScreenedConductor
    power: float = 2.0
    name = "uniaxial"

    def __post_init__(self):
        _require_screened(self.material, self.name)
        if not self.power > 0:
            raise MaterialError("uniaxial trial exponent must be positive")

    def _kappa_a(self, a, T):
        return 2.0 * a * self.material.kappa(T)

    def zero_term(self, a, T):
        e0 = self.material.eps0
        return K.ZERO_UNIAXIAL, np.array([e0, e0, self._kappa_a(a, T), self.power])

    def terms(self, xi, a, T):
        et = np.asarray(self.material.permittivity(xi, T), float)
        n = len(et)
        return K.UNIAXIAL, _rows(et, et, self._kappa_a(a, T), self.power, n=n)


ReflectionScheme = StandardFresnel | ModifiedScreened | RPA | Uniaxial

SCHEME_NAMES = ("fresnel", "fresnel_plasma", "fresnel_core", "modified", "uniaxial", "rpa")


def build_scheme(name, material: MaterialResponse):
    """Scheme ``name`` (one of :data:`SCHEME_NAMES`) applied to ``material``."""
    if name == "fresnel":
        return StandardFresnel(material)
    if name == "fresnel_plasma":
        return StandardFresnel(plasma_counterpart(material))
    if name == "fresnel_core":
        return StandardFresnel(core_counterpart(material), neglect_conductivity=True)
    if name == "modified":
        return ModifiedScreened(material)
    if name == "uniaxial":
        return Uniaxial(material)
    if name == "rpa":
        return RPA(material)
    raise ValueError(f"unknown scheme {name!r}; choose from {', '.join(SCHEME_NAMES)}")
