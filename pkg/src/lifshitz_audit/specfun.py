"""Polylogarithm, zeta values and the zero-temperature entropy limits.

Li_n(z) for integer n >= 2 and real z in [-1, 1]:

* ``|z| <= 1/2``: direct series; the remainder after N terms is bounded by
  ``|z|^(N+1) / ((N+1)^n (1 - |z|))``.
* ``1/2 < z <= 1``: series in ``mu = ln z`` (|mu| < ln 2),

  ``Li_n(e^mu) = mu^(n-1)/(n-1)! [H_(n-1) - ln(-mu)] + sum_{k != n-1} zeta(n-k) mu^k / k!``

  where ``zeta`` at non-positive integers comes from Bernoulli numbers.  With
  ``|zeta(-m)| <= 4 m! / (2 pi)^(m+1)`` the tail beyond index k is bounded by
  a geometric series of ratio ``|mu| / (2 pi) < 0.111``.
* ``-1 <= z < -1/2``: ``Li_n(z) = 2^(1-n) Li_n(z^2) - Li_n(-z)``.

At ``z = 1`` only the ``k = 0`` term survives and the result is ``zeta(n)``,
computed by Euler-Maclaurin summation with the first omitted term as bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from scipy import integrate

from . import constants as const
from .reflection import plasma_zero_te

_TARGET = 1e-17


@lru_cache(maxsize=None)
def _bernoulli(m):
    """Bernoulli number B_m (B_1 = -1/2) as a Fraction."""
    B = [Fraction(1)]
    for k in range(1, m + 1):
        B.append(-sum(math.comb(k + 1, j) * B[j] for j in range(k)) / (k + 1))
    return B[m]


@lru_cache(maxsize=None)
def zeta_int(s):
    """Riemann zeta at an integer s != 1.

    For s >= 2 uses Euler-Maclaurin with N = 12 and up to 12 correction terms;
    the magnitude of the first omitted correction is below 1e-17.
    """
    if s == 1:
        raise ValueError("zeta has a pole at s = 1")
    if s <= 0:
        m = -s
        return float(Fraction((-1) ** m) * _bernoulli(m + 1) / (m + 1))
    N = 12
    terms = [k ** (-s) for k in range(1, N)]
    terms.append(N ** (1 - s) / (s - 1))
    terms.append(0.5 * N ** (-s))
    rising = s  # s (s+1) ... (s + 2j - 2)
    for j in range(1, 13):
        t = float(_bernoulli(2 * j)) / math.factorial(2 * j) * rising * N ** (-s - 2 * j + 1)
        if abs(t) < _TARGET:
            break
        terms.append(t)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return math.fsum(terms)


def zeta3():
    """Apery's constant zeta(3)."""
    return zeta_int(3)


def polylog(n, z):
    """Li_n(z) = sum_k z^k / k^n for integer n >= 2 and real |z| <= 1.

    Absolute accuracy about 1e-15 (see the module docstring for the bounds).
    """
    if int(n) != n or n < 2:
        raise ValueError("polylog needs an integer order n >= 2")
    n = int(n)
    z = float(z)
    if not -1.0 <= z <= 1.0:
        raise ValueError("polylog is implemented for real z in [-1, 1]")
    if z == 0.0:
        return 0.0
    if abs(z) <= 0.5:
        return _direct(n, z)
    if z < 0:
        return 2.0 ** (1 - n) * polylog(n, z * z) - polylog(n, -z)
    return _log_series(n, z)


def _direct(n, z):
    terms = []
    a = abs(z)
    k = 1
    zk = z
    while True:
        terms.append(zk / k**n)
        # remainder bound for positive z; alternating series is tighter
        if a ** (k + 1) / ((k + 1) ** n * (1 - a)) < _TARGET:
            break
        k += 1
        zk *= z
    return math.fsum(terms)


def _log_series(n, z):
    if z == 1.0:
        return zeta_int(n)
    mu = math.log(z)
    harmonic = math.fsum(1.0 / j for j in range(1, n))
    terms = [mu ** (n - 1) / math.factorial(n - 1) * (harmonic - math.log(-mu))]
    ratio = abs(mu) / (2 * math.pi)
    k = 0
    while True:
        if k != n - 1:
            terms.append(zeta_int(n - k) * mu**k / math.factorial(k))
        k += 1
        if k > n + 1:
            m = k - n
            # |zeta(-m) mu^k / k!| <= 4 m!/(2pi)^(m+1) |mu|^k/k!, geometric beyond
            bound = 4 * math.factorial(m) / (2 * math.pi) ** (m + 1) * abs(mu) ** k / math.factorial(k)
            if bound / (1 - ratio) < _TARGET:
                break
    return math.fsum(terms)


# ---------------------------------------------------------------------------
# zero-temperature entropy limits


@dataclass(frozen=True)
class EntropyLimit:
    """Zero-temperature Casimir entropy per unit area, J/(K m^2)."""

    value: float
    scheme: str
    inputs: dict


def _entropy_unit(a):
    return const.k_B / (16 * math.pi * a * a)


def plasma_te_log_integral(wp_a):
    """``int_0^inf y ln(1 - r_TE(0,y)^2 e^-y) dy`` for the plasma-like TE coefficient."""

    def f(y):
        r = plasma_zero_te(y, wp_a)
        return y * math.log1p(-r * r * math.exp(-y))

    pieces = [(0.0, 1.0), (1.0, 10.0), (10.0, 80.0)]
    total = 0.0
    for lo, hi in pieces:
        val, _ = integrate.quad(f, lo, hi, epsabs=1e-14, epsrel=1e-12, limit=200)
        total += val
    return total


def entropy_metal_limit(a, omega_p):
    """Zero-temperature entropy of metals with screened coefficients.

    ``(k_B / 16 pi a^2) int_0^inf y ln(1 - r_TE,gp(0,y)^2 e^-y) dy``, negative
    for any omega_p > 0 and bounded below by ``-k_B zeta(3) / (16 pi a^2)``.
    """
    if not omega_p > 0:
        raise ValueError("omega_p must be positive")
    wp_a = 2 * a * omega_p / const.c
    val = _entropy_unit(a) * plasma_te_log_integral(wp_a)
    return EntropyLimit(val, "metal", {"a": a, "omega_p": omega_p})


def entropy_dielectric_limit(a, eps0):
    """Zero-temperature entropy of dielectrics whose carrier density stays finite.

    ``(k_B / 16 pi a^2) [zeta(3) - Li_3(r0^2)]`` with ``r0 = (eps0 - 1)/(eps0 + 1)``.
    """
    if not eps0 >= 1:
        raise ValueError("eps0 must be >= 1")
    if math.isinf(eps0):
        return EntropyLimit(0.0, "dielectric", {"a": a, "eps0": eps0})
    r0 = (eps0 - 1) / (eps0 + 1)
    val = _entropy_unit(a) * (zeta3() - polylog(3, r0 * r0))
    return EntropyLimit(val, "dielectric", {"a": a, "eps0": eps0})
