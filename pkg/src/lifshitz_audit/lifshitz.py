"""Free energy, pressure and entropy of two identical plates from the Lifshitz sum.

In the variables ``zeta_l = 2 a xi_l / c`` and ``y = 2 a q_l`` the free
energy per unit area is

    F = k_B T / (8 pi a^2) sum'_l int_{zeta_l}^inf y dy sum_pol ln(1 - r^2 e^-y)

and differentiating under the integral (the coefficients do not depend on a
at fixed xi and k_perp) gives the pressure

    P = -k_B T / (8 pi a^3) sum'_l int_{zeta_l}^inf y^2 dy sum_pol r^2 / (e^y - r^2).

The primed sum halves the l = 0 term.  Terms are summed in ascending l with
compensated (Kahan) accumulation, so the result does not depend on how the
y-integrals are batched.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, optimize

from . import constants as const
from . import kernel
from ._quad import coefficients
from .schemes import ReflectionScheme

A_RANGE = (10e-9, 10e-6)
T_MAX = 1e4
L_CAP = 1_000_000
#: consecutive small terms required before the sum is truncated
TAIL_RUN = 3


class ConvergenceError(RuntimeError):
    """The Matsubara sum, the quadrature or the entropy extrapolation did not converge."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class FitError(RuntimeError):
    """The zero-temperature fit of S(T) left a residual above threshold."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class EvaluationPoint:
    """Separation ``a`` (m), temperature ``T`` (K) and the reflection scheme."""

    a: float
    T: float
    scheme: ReflectionScheme

    def __post_init__(self):
        lo, hi = A_RANGE
        if not lo * (1 - 1e-12) <= self.a <= hi * (1 + 1e-12):
            raise ValueError(f"separation {self.a} m outside the validated range [{lo}, {hi}] m")
        if not 0 < self.T <= T_MAX:
            raise ValueError(f"temperature {self.T} K outside (0, {T_MAX}] K")

    @property
    def zeta1(self):
        return 2.0 * self.a * matsubara_frequency(self.T, 1) / const.c


@dataclass(frozen=True)
class MatsubaraGrid:
    """Matsubara frequencies ``xi_l = 2 pi k_B T l / hbar`` for l = 0..l_max."""

    T: float
    l_max: int
    tol: float

    @property
    def frequencies(self):
        return matsubara_frequency(self.T, np.arange(self.l_max + 1))

    @property
    def weights(self):
        w = np.ones(self.l_max + 1)
        w[0] = 0.5
        return w


@dataclass(frozen=True)
class Diagnostics:
    l_max: int = 0
    quad_error: float = 0.0
    term_ratio: float = 0.0
    max_panels: int = 0
    converged: bool = True
    backend: str = kernel.BACKEND
    entropy_error: Optional[float] = None
    fd_pressure_mismatch: Optional[float] = None
    message: str = ""

    @property
    def grid_size(self):
        return self.l_max + 1


@dataclass(frozen=True)
class CasimirResult:
    """Per-area free energy (J/m^2), pressure (Pa) and entropy (J/(K m^2))."""

    point: EvaluationPoint
    free_energy: Optional[float] = None
    pressure: Optional[float] = None
    entropy: Optional[float] = None
    diagnostics: Diagnostics = field(default_factory=Diagnostics)


def matsubara_frequency(T, l):
    """xi_l = 2 pi k_B T l / hbar in rad/s (scalar or array ``l``)."""
    xi = 2.0 * math.pi * const.k_B * T * np.asarray(l, float) / const.hbar
    return xi if xi.ndim else float(xi)


# ---------------------------------------------------------------------------
# Matsubara summation


@dataclass
class _Kahan:
    total: float = 0.0
    comp: float = 0.0

    def add(self, x):
        y = x - self.comp
        t = self.total + y
        self.comp = (t - self.total) - y
        self.total = t


def _quad_rtol(tol):
    return max(0.01 * tol, 1e-14)


def _sum(point: EvaluationPoint, quantity, tol, pol=kernel.BOTH, l_cap=L_CAP):
    """Dimensionless primed sum of the y-integrals and its diagnostics."""
    scheme, a, T = point.scheme, point.a, point.T
    qrt = _quad_rtol(tol)
    code0, p0 = scheme.zero_term(a, T)
    v0, e0, n0, s0 = kernel.integrate_terms(
        code0, np.zeros(1), p0.reshape(1, -1), quantity, pol, qrt, 1e-300
    )
    acc = _Kahan()
    acc.add(0.5 * v0[0])
    err = 0.5 * e0[0]
    max_panels = int(n0[0])
    failed = bool(s0[0])

    zeta1 = point.zeta1
    # the neglected tail is about term / (2 zeta_1) when zeta_1 is small
    thresh_scale = tol * min(1.0, zeta1)
    chunk = int(min(l_cap, max(32, math.ceil(20.0 / zeta1))))
    l_next = 1
    run = 0
    last = 0.0
    ref = None
    while True:
        if l_next > l_cap:
            diag = Diagnostics(l_cap, err, 0.0, max_panels, False, message="Matsubara cap reached")
            raise ConvergenceError(f"Matsubara sum not converged within l_max = {l_cap}", diag)
        ls = np.arange(l_next, min(l_next + chunk, l_cap + 1))
        xi = matsubara_frequency(T, ls)
        zeta = 2.0 * a * xi / const.c
        code, rows = scheme.terms(xi, a, T)
        if ref is None:
            atol = 1e-300
        else:
            atol = 1e-3 * thresh_scale * abs(ref)
        vals, errs, pans, stat = kernel.integrate_terms(code, zeta, rows, quantity, pol, qrt, atol)
        for i in range(len(ls)):
            v = float(vals[i])
            acc.add(v)
            err += float(errs[i])
            max_panels = max(max_panels, int(pans[i]))
            failed |= bool(stat[i])
            last = v
            if abs(v) <= thresh_scale * abs(acc.total):
                run += 1
            else:
                run = 0
            if run >= TAIL_RUN:
                l_max = int(ls[i])
                total = acc.total
                rel_err = float(err / abs(total) if total else err)
                ratio = abs(last / total) if total else 0.0
                diag = Diagnostics(l_max, rel_err, ratio, max_panels, not failed)
                return total, diag
        ref = acc.total
        l_next = int(ls[-1]) + 1
        chunk = min(2 * chunk, l_cap)


def _checked(result: CasimirResult):
    if not result.diagnostics.converged:
        raise ConvergenceError("quadrature panel cap reached", result.diagnostics)
    return result


def free_energy(point: EvaluationPoint, tol=1e-8, pol=kernel.BOTH):
    """Free energy per unit area, J/m^2.

    Parameters
    ----------
    point : EvaluationPoint
    tol : float
        relative tolerance of the Matsubara truncation; the y-integrals are
        converged to ``tol / 100`` (floored at 1e-14)
    pol : int
        polarization mask (``kernel.TM``, ``kernel.TE`` or ``kernel.BOTH``)

    Raises
    ------
    ConvergenceError
        the sum hit the l_max cap or a y-integral the panel cap
    """
    total, diag = _sum(point, kernel.ENERGY, tol, pol)
    F = const.k_B * point.T / (8.0 * math.pi * point.a**2) * total
    return _checked(CasimirResult(point, free_energy=F, diagnostics=diag))


def pressure(point: EvaluationPoint, tol=1e-8, check=False, pol=kernel.BOTH):
    """Pressure ``-dF/da`` in Pa (negative means attraction).

    With ``check=True`` the result is compared with a central difference of
    the free energy (step ``1e-4 a``); the relative mismatch is stored in
    ``diagnostics.fd_pressure_mismatch``.
    """
    total, diag = _sum(point, kernel.PRESSURE, tol, pol)
    P = -const.k_B * point.T / (8.0 * math.pi * point.a**3) * total
    if check:
        h = 1e-4 * point.a
        inner = min(tol, 1e-12)
        fp = free_energy(replace(point, a=point.a + h), inner, pol).free_energy
        fm = free_energy(replace(point, a=point.a - h), inner, pol).free_energy
        fd = -(fp - fm) / (2 * h)
        diag = replace(diag, fd_pressure_mismatch=abs(fd - P) / abs(P) if P else abs(fd))
    return _checked(CasimirResult(point, pressure=P, diagnostics=diag))


def entropy_step(T):
    """Base temperature step max(1e-3 T, 1e-3 K), shrunk to keep T - dT > 0."""
    return min(max(1e-3 * T, 1e-3), 0.5 * T)


def entropy(point: EvaluationPoint, tol=1e-4, dT=None):
    """Entropy per unit area ``-dF/dT``, J/(K m^2).

    Central differences with steps h and h/2 combined by Richardson
    extrapolation.  The free energies are computed with the tighter tolerance
    ``min(tol / 100, 1e-12)``.

    Raises
    ------
    ConvergenceError
        when the two step sizes disagree by more than ``10 tol`` relative to
        ``max(|S|, k_B / (16 pi a^2))``
    """
    h = entropy_step(point.T) if dT is None else dT
    if not 0 < h < point.T:
        raise ValueError("temperature step must satisfy 0 < dT < T")
    inner = min(tol / 100.0, 1e-12)

    def F(T):
        return free_energy(replace(point, T=T), inner)

    def central(step):
        hi, lo = F(point.T + step), F(point.T - step)
        return -(hi.free_energy - lo.free_energy) / (2 * step), hi, lo

    d1, r1, _ = central(h)
    d2, r2, _ = central(0.5 * h)
    S = (4.0 * d2 - d1) / 3.0
    spread = abs(d2 - d1)
    base = r2.diagnostics
    diag = replace(base, entropy_error=spread / 3.0, l_max=max(r1.diagnostics.l_max, base.l_max))
    # entropies near zero are judged against the natural unit k_B / (16 pi a^2)
    scale = max(abs(S), const.k_B / (16.0 * math.pi * point.a**2))
    if spread > 10.0 * tol * scale:
        diag = replace(diag, converged=False, message="step halving disagreement")
        raise ConvergenceError(
            f"entropy estimates with dT={h:g} and {h / 2:g} K differ by {spread:.3e}", diag
        )
    return CasimirResult(point, entropy=S, diagnostics=diag)


# ---------------------------------------------------------------------------
# zero-temperature extrapolation


@dataclass(frozen=True)
class Extrapolation:
    """Fit ``S(T) = S0 + c T^p`` to entropies on a temperature grid."""

    S0: float
    exponent: float
    coefficient: float
    residual: float
    temperatures: tuple
    entropies: tuple


def fit_power_law(T, S, p_bounds=(0.2, 4.0)):
    """Least-squares ``S0 + c T^p``; linear in (S0, c), bounded scalar search in p."""
    T = np.asarray(T, float)
    S = np.asarray(S, float)
    # fit in units of the data scale for conditioning
    scale = np.max(np.abs(S)) or 1.0
    t = T / np.max(T)
    s = S / scale

    def solve(p):
        A = np.column_stack([np.ones_like(t), t**p])
        coef, *_ = np.linalg.lstsq(A, s, rcond=None)
        return coef, float(np.sum((A @ coef - s) ** 2))

    res = optimize.minimize_scalar(
        lambda p: solve(p)[1], bounds=p_bounds, method="bounded", options={"xatol": 1e-6}
    )
    p = float(res.x)
    coef, ss = solve(p)
    rms = math.sqrt(ss / len(t))
    S0 = coef[0] * scale
    c = coef[1] * scale / np.max(T) ** p
    return S0, p, c, rms


def entropy_zero_extrapolation(a, scheme, T_grid: Sequence[float], tol=1e-4, max_residual=1e-3):
    """Extrapolate S(a, T) to T = 0.

    Parameters
    ----------
    a : float
        separation, m
    scheme : ReflectionScheme
    T_grid : sequence of float
        at least 6 temperatures, K
    max_residual : float
        largest admissible rms residual of the fit relative to max |S|

    Returns
    -------
    Extrapolation

    Raises
    ------
    FitError
        residual above ``max_residual``
    """
    T_grid = sorted((float(t) for t in T_grid), reverse=True)
    if len(T_grid) < 6:
        raise ValueError("the extrapolation needs at least 6 temperatures")
    S = [entropy(EvaluationPoint(a, T, scheme), tol).entropy for T in T_grid]
    S0, p, c, rms = fit_power_law(T_grid, S)
    out = Extrapolation(S0, p, c, rms, tuple(T_grid), tuple(S))
    if not rms <= max_residual:
        raise FitError(f"power-law fit residual {rms:.3e} exceeds {max_residual:.1e}", out)
    return out


def log_grid(lo, hi, count):
    """``count`` log-spaced values between lo and hi inclusive, in the given order."""
    if count == 1:
        return [float(lo)]
    return [float(v) for v in np.geomspace(lo, hi, count)]


# ---------------------------------------------------------------------------
# auxiliary routes


def zero_frequency_term(point: EvaluationPoint, pol=kernel.TE, tol=1e-10):
    """Contribution of the l = 0 term (with its weight 1/2) to F, J/m^2."""
    code, p = point.scheme.zero_term(point.a, point.T)
    v, *_ = kernel.integrate_terms(
        code, np.zeros(1), p.reshape(1, -1), kernel.ENERGY, pol, _quad_rtol(tol), 1e-300
    )
    return const.k_B * point.T / (16.0 * math.pi * point.a**2) * float(v[0])


def free_energy_physical(point: EvaluationPoint, l_max, tol=1e-12):
    """Free energy from the physical-variable form of the sum.

    ``(k_B T / 2 pi) sum'_l int_0^inf k dk sum_pol ln(1 - r^2 exp(-2 a q_l))``
    with ``q_l^2 = k^2 + xi_l^2 / c^2``, integrated in k by scipy's QUADPACK
    up to the point where ``2 a q_l = 2 a xi_l / c + 60``.  Used to check the
    change of variables; truncated at ``l_max``.
    """
    scheme, a, T = point.scheme, point.a, point.T
    acc = _Kahan()
    for l in range(l_max + 1):
        xi = matsubara_frequency(T, l)
        if l == 0:
            code, p = scheme.zero_term(a, T)
        else:
            code, rows = scheme.terms(np.array([xi]), a, T)
            p = rows[0]
        z = 2.0 * a * xi / const.c
        kmax = math.sqrt(((z + 60.0) / (2 * a)) ** 2 - (xi / const.c) ** 2)

        def f(k):
            q = math.sqrt(k * k + (xi / const.c) ** 2)
            y = np.array([2.0 * a * q])
            tm, te = coefficients(code, p[None, :], np.array([z]), y)
            damp = math.exp(-2.0 * a * q)
            return k * (math.log1p(-float(tm[0]) ** 2 * damp) + math.log1p(-float(te[0]) ** 2 * damp))

        knee = 1.0 / (2 * a)
        total = 0.0
        for lo, hi in ((0.0, knee), (knee, 10 * knee), (10 * knee, kmax)):
            if hi > lo:
                val, _ = integrate.quad(f, lo, hi, epsabs=0.0, epsrel=tol, limit=400)
                total += val
        acc.add((0.5 if l == 0 else 1.0) * total)
    return const.k_B * T / (2.0 * math.pi) * acc.total


class ProximityWarning(UserWarning):
    pass


def pfa_sphere_force(a, R, plate_free_energy: Callable[[float], float]):
    """Sphere-plate force ``2 pi R F_pp(a)`` in N (negative: attraction).

    Warns when ``R / a < 100``, outside the regime where the approximation holds.
    """
    if not R > 0:
        raise ValueError("sphere radius must be positive")
    if R / a < 100:
        warnings.warn(f"R/a = {R / a:.3g} < 100; proximity force approximation is poor", ProximityWarning,
                      stacklevel=2)
    return 2.0 * math.pi * R * plate_free_energy(a)


def pfa_equivalent_pressure(point: EvaluationPoint, tol=1e-8):
    """Equivalent plate pressure of a dynamic sphere-plate measurement.

    ``-(1/2 pi R) dF_sp/da = -dF_pp/da``, i.e. the plate pressure itself.
    """
    return pressure(point, tol).pressure
