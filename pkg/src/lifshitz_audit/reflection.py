"""Reflection coefficients on the imaginary frequency axis.

Everything is written in the dimensionless variables ``zeta = 2 a xi / c`` and
``y = 2 a q`` with ``q^2 = k_perp^2 + xi^2/c^2``; then ``K = 2 a k_perp =
sqrt(y^2 - zeta^2)`` and, for a medium of permittivity eps,
``2 a k = sqrt(y^2 + (eps - 1) zeta^2)``.

Sign convention: TM coefficients are non-negative, TE coefficients
non-positive.  Every scheme has an explicit zero-frequency branch; the
finite-frequency formulas are never evaluated at ``zeta = 0``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import constants as const
from .materials import ScreenedConductor, eps_core

#: relative size of eps~ - eps below which the carrier-free reduction is used
DELTA_FLOOR = 1e-30


class IllConditionedWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class WavePoint:
    """A point (zeta, y) of the dimensionless Lifshitz integrand at separation ``a`` (m).

    ``zeta`` and ``y`` may be numpy arrays of a common shape.
    """

    zeta: object
    y: object
    a: float = 1e-6

    def __post_init__(self):
        z = np.asarray(self.zeta, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if np.any(z < 0) or np.any(y < z * (1 - 1e-14)):
            raise ValueError("a wave point needs y >= zeta >= 0")
        if not self.a > 0:
            raise ValueError("separation must be positive")

    @classmethod
    def from_physical(cls, xi, kperp, a):
        """Build from the frequency xi (rad/s) and in-plane wave number (rad/m)."""
        q = np.sqrt(np.asarray(kperp, float) ** 2 + (np.asarray(xi, float) / const.c) ** 2)
        return cls(2 * a * np.asarray(xi, float) / const.c, 2 * a * q, a)

    @property
    def xi(self):
        return np.asarray(self.zeta, float) * const.c / (2 * self.a)

    @property
    def kperp(self):
        return self.K / (2 * self.a)

    @property
    def K(self):
        z = np.asarray(self.zeta, float)
        y = np.asarray(self.y, float)
        return np.sqrt(np.maximum(y * y - z * z, 0.0))


@dataclass(frozen=True)
class ExpansionTerm:
    """``order0 + small * order1``: a first-order expansion in a small parameter."""

    order0: object
    order1: object
    parameter: str
    small: float

    def value(self, small=None):
        s = self.small if small is None else small
        return self.order0 + s * self.order1


# ---------------------------------------------------------------------------
# vectorized kernels on (zeta, y); shared with the pure-Python quadrature path


def _depth(eps, zeta, y):
    """2 a k = sqrt(y^2 + (eps - 1) zeta^2); eps may be +inf."""
    with np.errstate(invalid="ignore"):
        z2 = (eps - 1.0) * zeta * zeta
    z2 = np.where(zeta == 0, 0.0, z2)
    return np.sqrt(y * y + z2)


def fresnel_pair(eps, zeta, y):
    """(TM, TE) Fresnel coefficients; ``eps = inf`` gives the ideal-metal values."""
    eps = np.asarray(eps, float)
    zeta = np.asarray(zeta, float)
    y = np.asarray(y, float)
    s = _depth(eps, zeta, y)
    with np.errstate(invalid="ignore", divide="ignore"):
        tm = (eps * y - s) / (eps * y + s)
        te = (y - s) / (y + s)
    tm = np.where(np.isinf(eps), 1.0, tm)
    te = np.where(np.isinf(s), -1.0, te)
    return tm, te


def modified_pair(eps, delta, eps0, kappa_a, zeta, y):
    """(TM, TE) modified coefficients at zeta > 0.

    ``delta = eps~ - eps`` is passed separately so the carrier term is never
    formed by cancellation.
    """
    eps, delta, eps0, kappa_a, zeta, y = np.broadcast_arrays(
        *(np.asarray(v, float) for v in (eps, delta, eps0, kappa_a, zeta, y))
    )
    et = eps + delta
    s = np.sqrt(y * y + (et - 1.0) * zeta * zeta)
    K2 = np.maximum(y * y - zeta * zeta, 0.0)
    live = delta > DELTA_FLOOR * eps
    dsafe = np.where(live, delta, 1.0)
    bracket = K2 + kappa_a * kappa_a * eps0 * et / (eps * dsafe)
    if np.any(bracket < 0):
        raise ValueError("negative screening bracket; parameters outside the physical domain")
    eta = np.sqrt(bracket)
    with np.errstate(invalid="ignore", divide="ignore"):
        t3 = np.where((K2 > 0) & live, K2 * dsafe / (eta * eps), 0.0)
    tm = (et * y - s - t3) / (et * y + s + t3)
    te = (y - s) / (y + s)
    tm0, te0 = fresnel_pair(eps, zeta, y)
    return np.where(live, tm, tm0), np.where(live, te, te0)


def zero_freq_modified_tm(y, eps0, kappa_a):
    """Screened TM coefficient at zero frequency,
    ``(eps0 sqrt(y^2+kappa_a^2) - y) / (eps0 sqrt(y^2+kappa_a^2) + y)``.

    Monotone in ``kappa_a`` from ``r0 = (eps0-1)/(eps0+1)`` (``kappa_a = 0``)
    to 1 (``kappa_a -> inf``).
    """
    y = np.asarray(y, float)
    kappa_a = np.asarray(kappa_a, float)
    with np.errstate(invalid="ignore", over="ignore"):
        big = eps0 * np.sqrt(y * y + kappa_a * kappa_a)
        r = (big - y) / (big + y)
    r = np.where(np.isinf(kappa_a), 1.0, r)
    return r if r.ndim else float(r)


def plasma_zero_te(y, wp_a):
    """TE coefficient of the plasma-like model at zero frequency.

    ``wp_a = 2 a omega_p / c``; the value is ``(y - sqrt(wp_a^2 + y^2)) / (y + sqrt(wp_a^2 + y^2))``.
    """
    y = np.asarray(y, float)
    s = np.sqrt(wp_a * wp_a + y * y)
    r = (y - s) / (y + s)
    return r if r.ndim else float(r)


def uniaxial_pair(eps_x, eps_z, zeta, y):
    """(TM, TE) for a uniaxial medium with in-plane eps_x and normal eps_z."""
    eps_x = np.asarray(eps_x, float)
    eps_z = np.asarray(eps_z, float)
    zeta = np.asarray(zeta, float)
    y = np.asarray(y, float)
    kz = _depth(eps_z, zeta, y)
    kx = _depth(eps_x, zeta, y)
    with np.errstate(invalid="ignore", over="ignore"):
        g = np.sqrt(eps_x * eps_z) * y
        tm = (g - kz) / (g + kz)
        te = (y - kx) / (y + kx)
    # eps_x -> inf at finite eps_z: g dominates kz
    tm = np.where(np.isinf(g) & np.isfinite(kz), 1.0, tm)
    te = np.where(np.isinf(kx), -1.0, te)
    return tm, te


def rpa_eps_z(eps, delta, eps0, kappa_a, zeta, y):
    """Normal permittivity of the corrected random-phase form, evaluated term by term.

    In-plane permittivity is ``eps~ = eps + delta`` (wave-vector independent).
    At ``zeta = 0`` the closed form ``eps0 sqrt(K^2 + kappa_a^2) / K`` is used.
    """
    eps, delta, eps0, kappa_a, zeta, y = np.broadcast_arrays(
        *(np.asarray(v, float) for v in (eps, delta, eps0, kappa_a, zeta, y))
    )
    K = np.sqrt(np.maximum(y * y - zeta * zeta, 0.0))
    et = eps + delta
    kk = np.sqrt(y * y + (et - 1.0) * zeta * zeta)
    live = delta > DELTA_FLOOR * eps
    dsafe = np.where(live, delta, 1.0)
    eta = np.sqrt(K * K + kappa_a * kappa_a * eps0 * et / (eps * dsafe))
    z2 = zeta * zeta
    with np.errstate(invalid="ignore", divide="ignore"):
        screen = np.where(live, K * K / eta * dsafe, 0.0)
        bracket = (
            (kk * eps + screen) / (eps * et)
            + K
            - y
            - z2 * (1.0 / kk - 1.0 / y)
            + K * z2 * (1.0 / (K * kk + kk * kk) - 1.0 / (K * y + y * y))
        )
        out = K / bracket
        static = eps0 * np.sqrt(K * K + kappa_a * kappa_a) / K
    if np.any((bracket == 0) & (zeta > 0)):
        raise ZeroDivisionError("singular bracket in the normal permittivity")
    return np.where(zeta == 0, static, out)


def nonlocal_tm(eps_x, eps_z, zeta, y):
    """TM coefficient of the random-phase construction,
    ``(y - A) / (y + A)`` with ``A = K/eps_z + (2ak - K)/eps_x``.

    With ``eps_z = eps_x = eps`` this is the Fresnel TM coefficient.
    """
    eps_x = np.asarray(eps_x, float)
    eps_z = np.asarray(eps_z, float)
    zeta = np.asarray(zeta, float)
    y = np.asarray(y, float)
    K = np.sqrt(np.maximum(y * y - zeta * zeta, 0.0))
    kk = _depth(eps_x, zeta, y)
    with np.errstate(invalid="ignore", divide="ignore"):
        inplane = np.where(np.isinf(eps_x), 0.0, (kk - K) / eps_x)
        A = np.where(K > 0, K / eps_z, 0.0) + inplane
    return (y - A) / (y + A)


# ---------------------------------------------------------------------------
# public API on wave points


def _core_and_excess(point: WavePoint, material, T):
    """Core permittivity and carrier excess (inf at zeta = 0) at the point's frequency."""
    xi = point.xi
    eps = eps_core(xi, material.oscillators)
    pos = np.where(xi > 0, xi, 1.0)
    delta = np.where(xi > 0, material.excess(pos, T), np.inf)
    return np.asarray(eps, float), np.asarray(delta, float)


def _material_state(point: WavePoint, material, T):
    """(eps, delta, eps0, kappa_a) of a screened conductor at the point's frequency."""
    eps, delta = _core_and_excess(point, material, T)
    return eps, delta, material.eps0, 2 * point.a * material.kappa(T)


def _scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def fresnel_tm(point: WavePoint, eps_l):
    """Fresnel TM coefficient ``(eps q - k)/(eps q + k)``, in [0, 1)."""
    return _scalar(fresnel_pair(eps_l, point.zeta, point.y)[0])


def fresnel_te(point: WavePoint, eps_l):
    """Fresnel TE coefficient ``(q - k)/(q + k)``, in (-1, 0]."""
    return _scalar(fresnel_pair(eps_l, point.zeta, point.y)[1])


def _warn_if_underflow(material, delta, eps, T):
    if material.carriers.density_at(T) > 0 and np.any((delta <= DELTA_FLOOR * eps) & (delta >= 0)):
        warnings.warn(
            "carrier term underflows the core permittivity; using the carrier-free reduction",
            IllConditionedWarning,
            stacklevel=3,
        )


def modified_tm(point: WavePoint, material: ScreenedConductor, T):
    """Screened TM coefficient; dispatches to :func:`zero_freq_modified_tm` at zeta = 0."""
    eps, delta, eps0, kappa_a = _material_state(point, material, T)
    zeta = np.asarray(point.zeta, float)
    y = np.asarray(point.y, float)
    if np.all(zeta == 0):
        return _scalar(zero_freq_modified_tm(y, eps0, kappa_a))
    _warn_if_underflow(material, delta, eps, T)
    fin = np.where(zeta > 0, delta, 1.0)
    tm, _ = modified_pair(eps, fin, eps0, kappa_a, zeta, y)
    return _scalar(np.where(zeta > 0, tm, zero_freq_modified_tm(y, eps0, kappa_a)))


def modified_te(point: WavePoint, material: ScreenedConductor, T):
    """Screened TE coefficient: Fresnel TE with eps~; zero at zeta = 0."""
    eps, delta = _core_and_excess(point, material, T)
    zeta = np.asarray(point.zeta, float)
    fin = np.where(zeta > 0, delta, 0.0)
    te = fresnel_pair(eps + fin, zeta, point.y)[1]
    return _scalar(np.where(zeta > 0, te, 0.0))


def uniaxial_coeffs(point: WavePoint, eps_x, eps_z):
    """(TM, TE) of a uniaxial crystal; eps_z may depend on the point (array)."""
    tm, te = uniaxial_pair(eps_x, eps_z, point.zeta, point.y)
    return _scalar(tm), _scalar(te)


def eps_z_rpa(point: WavePoint, material: ScreenedConductor, T):
    """Normal permittivity that reproduces the screened TM coefficient
    in the random-phase construction (in-plane permittivity eps~)."""
    eps, delta, eps0, kappa_a = _material_state(point, material, T)
    return _scalar(rpa_eps_z(eps, np.where(np.isinf(delta), 1.0, delta), eps0, kappa_a, point.zeta, point.y))


def rpa_tm(point: WavePoint, material: ScreenedConductor, T):
    """TM coefficient built from eps_x = eps~ and :func:`eps_z_rpa`."""
    zeta = np.asarray(point.zeta, float)
    eps, delta, eps0, kappa_a = _material_state(point, material, T)
    ez = rpa_eps_z(eps, np.where(np.isinf(delta), 1.0, delta), eps0, kappa_a, zeta, point.y)
    ex = np.where(zeta > 0, eps + np.where(np.isinf(delta), 0.0, delta), np.inf)
    return _scalar(nonlocal_tm(ex, ez, zeta, point.y))


def metal_z(eps, delta, eps0, zeta, y):
    """First-order screening coefficient Z of the large-kappa_a expansion."""
    et = eps + delta
    s = np.sqrt(y * y + (et - 1.0) * zeta * zeta)
    return np.sqrt(et * delta**3 / (eps0 * eps)) * y * (y * y - zeta * zeta) / (et * y + s) ** 2


def expansion_metal(point: WavePoint, material: ScreenedConductor, T=None):
    """Expansion of the screened TM coefficient in beta_a = 1/kappa_a.

    Returns ``ExpansionTerm(r~_TM, -2 Z, "beta_a", beta_a)`` so that
    ``modified_tm = order0 + beta_a * order1 + O(beta_a^2)``; ``r~_TM`` is the
    Fresnel TM coefficient with eps~.
    """
    if np.any(np.asarray(point.zeta) == 0):
        raise ValueError("the expansion is defined for zeta > 0")
    eps, delta, eps0, kappa_a = _material_state(point, material, T)
    r0 = fresnel_pair(eps + delta, point.zeta, point.y)[0]
    Z = metal_z(eps, delta, eps0, np.asarray(point.zeta, float), np.asarray(point.y, float))
    return ExpansionTerm(_scalar(r0), _scalar(-2.0 * Z), "beta_a", 1.0 / kappa_a)


def metal_log_expansion(point: WavePoint, material: ScreenedConductor, T=None):
    """Expansion of ``ln(1 - r_TM^2 e^-y)`` to first order in beta_a.

    Returns ``ExpansionTerm(ln(1 - r~^2 e^-y), 4 r~ Z / (e^y - r~^2), "beta_a", beta_a)``.
    """
    t = expansion_metal(point, material, T)
    y = np.asarray(point.y, float)
    r = np.asarray(t.order0)
    Z = -0.5 * np.asarray(t.order1)
    base = np.log1p(-r * r * np.exp(-y))
    first = 4.0 * r * Z / (np.exp(y) - r * r)
    return ExpansionTerm(_scalar(base), _scalar(first), "beta_a", t.small)


def expansion_dielectric(point: WavePoint, material: ScreenedConductor, T):
    """Expansion of the screened coefficients in beta_l = sigma(0)/(eps_vac xi_l).

    Zeroth order: Fresnel coefficients with the core permittivity.  First
    order: the derivatives with respect to the permittivity,

    * TM: ``y (2 y^2 + (eps - 2) zeta^2) / (S (eps y + S)^2)``
    * TE: ``-y zeta^2 / (S (y + S)^2)``

    with ``S = sqrt(y^2 + (eps - 1) zeta^2)``.  The screening term of the TM
    coefficient enters at order ``beta_l^(3/2) / kappa_a``.

    Returns
    -------
    (ExpansionTerm, ExpansionTerm)
        TM and TE terms.
    """
    zeta = np.asarray(point.zeta, float)
    y = np.asarray(point.y, float)
    if np.any(zeta == 0):
        raise ValueError("beta_l is defined only for nonzero Matsubara frequencies")
    xi = point.xi
    eps = np.asarray(eps_core(xi, material.oscillators), float)
    beta = material.carriers.sigma0(T) / (const.eps_vac * xi)
    s = np.sqrt(y * y + (eps - 1.0) * zeta * zeta)
    tm0, te0 = fresnel_pair(eps, zeta, y)
    c_tm = y * (2 * y * y + (eps - 2.0) * zeta * zeta) / (s * (eps * y + s) ** 2)
    c_te = -y * zeta * zeta / (s * (y + s) ** 2)
    beta = _scalar(beta)
    return (
        ExpansionTerm(_scalar(tm0), _scalar(c_tm), "beta_l", beta),
        ExpansionTerm(_scalar(te0), _scalar(c_te), "beta_l", beta),
    )
