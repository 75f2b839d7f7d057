"""Pure-Python backend of the Matsubara-term integrator.

Integrates, for each term l, the y-integrand of the Lifshitz free energy
(or pressure) over ``y in [zeta_l, zeta_l + 60]`` with a global adaptive
Gauss-Kronrod (7, 15) rule.  The algorithm is the same as the compiled
backend's: identical initial panels, identical error estimate ``|K15 - G7|``,
and always bisect the panel with the largest error estimate.  The only
difference is that here many terms advance in lock-step through numpy.
"""
from __future__ import annotations

import numpy as np

from .reflection import (
    fresnel_pair,
    modified_pair,
    nonlocal_tm,
    plasma_zero_te,
    rpa_eps_z,
    uniaxial_pair,
    zero_freq_modified_tm,
)

# scheme codes shared with the compiled kernel
FRESNEL = 0
MODIFIED = 1
RPA = 2
UNIAXIAL = 3
ZERO_CONST = 10
ZERO_PLASMA = 11
ZERO_SCREENED = 12
ZERO_UNIAXIAL = 13

ENERGY = 0
PRESSURE = 1

TM = 1
TE = 2
BOTH = 3

Y_SPAN = 60.0
BREAKS = np.array([0.0, 1.0, 3.0, 8.0, 18.0, 35.0, 60.0])

# Gauss-Kronrod 15-point abscissae (descending, last is the centre) and weights
XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-node layout on [-1, 1]
_NODES = np.concatenate([-XGK[:-1], [0.0], XGK[:-1][::-1]])
_WK = np.concatenate([WGK[:-1], [WGK[-1]], WGK[:-1][::-1]])
_WG = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod abscissae (XGK[1], XGK[3], XGK[5], centre)
for j, idx in enumerate((1, 3, 5)):
    _WG[idx] = WG[j]
    _WG[14 - idx] = WG[j]
_WG[7] = WG[3]


def coefficients(code, params, zeta, y):
    """(TM, TE) for scheme ``code``; ``params`` columns broadcast against y."""
    p = [params[..., i] for i in range(params.shape[-1])]
    if code == FRESNEL:
        return fresnel_pair(p[0], zeta, y)
    if code == MODIFIED:
        return modified_pair(p[0], p[1], p[2], p[3], zeta, y)
    if code == RPA:
        ez = rpa_eps_z(p[0], p[1], p[2], p[3], zeta, y)
        tm = nonlocal_tm(p[0] + p[1], ez, zeta, y)
        te = fresnel_pair(p[0] + p[1], zeta, y)[1]
        return tm, te
    if code == UNIAXIAL:
        K = np.sqrt(np.maximum(y * y - zeta * zeta, 0.0))
        ez = _trial_eps_z(p[1], p[2], p[3], K)
        return uniaxial_pair(p[0], ez, zeta, y)
    if code == ZERO_CONST:
        return np.broadcast_to(p[0], y.shape), np.broadcast_to(p[1], y.shape)
    if code == ZERO_PLASMA:
        return np.broadcast_to(p[0], y.shape), plasma_zero_te(y, p[1])
    if code == ZERO_SCREENED:
        return zero_freq_modified_tm(y, p[0], p[1]), np.zeros_like(y)
    if code == ZERO_UNIAXIAL:
        ez = _trial_eps_z(p[1], p[2], p[3], y)
        with np.errstate(invalid="ignore", over="ignore"):
            g = np.sqrt(p[0] * ez)
            tm = np.where(np.isinf(g), 1.0, (g - 1.0) / (g + 1.0))
        return tm, np.zeros_like(y)
    raise ValueError(f"unknown scheme code {code}")


def _trial_eps_z(base, kappa_a, power, K):
    with np.errstate(divide="ignore", over="ignore"):
        ratio = np.where(kappa_a > 0, (kappa_a / K) ** power, 0.0)
    return base * (1.0 + ratio)


def integrand(code, params, zeta, y, quantity=ENERGY, pol=BOTH):
    tm, te = coefficients(code, params, zeta, y)
    out = np.zeros(np.broadcast(y, tm).shape)
    ey = np.exp(-y)
    for flag, r in ((TM, tm), (TE, te)):
        if not pol & flag:
            continue
        r2 = r * r
        if quantity == ENERGY:
            out = out + y * _log_loss(r2, y, ey)
        else:
            out = out + y * y * r2 / (np.expm1(y) + (1.0 - r2))
    return out


def _log_loss(r2, y, ey):
    """ln(1 - r^2 e^-y) without cancellation in either regime."""
    x = r2 * ey
    with np.errstate(divide="ignore"):
        near = np.log(-np.expm1(-y) + (1.0 - r2) * ey)
    return np.where(x < 0.5, np.log1p(-x), near)


def _panel_rule(code, params, zeta, lo, hi, quantity, pol):
    """K15 value and |K15 - G7| for panels lo..hi (arrays of shape (L, m))."""
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    y = centre[..., None] + half[..., None] * _NODES
    f = integrand(code, params[:, None, None, :], zeta[:, None, None], y, quantity, pol)
    k = half * (f @ _WK)
    g = half * (f @ _WG)
    return k, np.abs(k - g)


def integrate_terms(code, zeta, params, quantity=ENERGY, pol=BOTH, rtol=1e-10,
                    atol=1e-13, max_panels=400, batch=2048):
    """Integrate the y-integrand for every term.

    Parameters
    ----------
    code : int
        scheme code (see module constants)
    zeta : ndarray, shape (L,)
        dimensionless Matsubara frequencies; integration runs from zeta
    params : ndarray, shape (L, 4)
        per-term scheme parameters

    Returns
    -------
    values, errors : ndarray
    panels, status : ndarray of int
        panels used and 0 on success, 1 if the panel cap was hit
    """
    zeta = np.ascontiguousarray(zeta, dtype=float)
    params = np.ascontiguousarray(params, dtype=float).reshape(len(zeta), -1)
    L = len(zeta)
    values = np.empty(L)
    errors = np.empty(L)
    panels = np.empty(L, dtype=np.int64)
    status = np.empty(L, dtype=np.int64)
    for start in range(0, L, batch):
        sl = slice(start, min(start + batch, L))
        v, e, n, s = _integrate_batch(code, zeta[sl], params[sl], quantity, pol, rtol, atol, max_panels)
        values[sl], errors[sl], panels[sl], status[sl] = v, e, n, s
    return values, errors, panels, status


def _integrate_batch(code, zeta, params, quantity, pol, rtol, atol, max_panels):
    L = len(zeta)
    P = max_panels
    m0 = len(BREAKS) - 1
    lo = np.zeros((L, P))
    hi = np.zeros((L, P))
    val = np.zeros((L, P))
    err = np.zeros((L, P))
    lo[:, :m0] = zeta[:, None] + BREAKS[:-1]
    hi[:, :m0] = zeta[:, None] + BREAKS[1:]
    k, e = _panel_rule(code, params, zeta, lo[:, :m0], hi[:, :m0], quantity, pol)
    val[:, :m0] = k
    err[:, :m0] = e
    count = np.full(L, m0, dtype=np.int64)
    status = np.zeros(L, dtype=np.int64)
    rows = np.arange(L)
    while True:
        total = val.sum(axis=1)
        total_err = err.sum(axis=1)
        todo = (total_err > np.maximum(atol, rtol * np.abs(total))) & (status == 0)
        capped = todo & (count >= P)
        status[capped] = 1
        todo &= ~capped
        if not todo.any():
            break
        idx = rows[todo]
        worst = np.argmax(err[idx], axis=1)
        a = lo[idx, worst]
        b = hi[idx, worst]
        mid = 0.5 * (a + b)
        seg_lo = np.stack([a, mid], axis=1)
        seg_hi = np.stack([mid, b], axis=1)
        k, e = _panel_rule(code, params[idx], zeta[idx], seg_lo, seg_hi, quantity, pol)
        new = count[idx]
        hi[idx, worst] = mid
        val[idx, worst] = k[:, 0]
        err[idx, worst] = e[:, 0]
        lo[idx, new] = mid
        hi[idx, new] = b
        val[idx, new] = k[:, 1]
        err[idx, new] = e[:, 1]
        count[idx] += 1
    return val.sum(axis=1), err.sum(axis=1), count, status
