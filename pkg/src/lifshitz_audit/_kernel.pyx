# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled backend of the Matsubara-term integrator.

Same algorithm and scheme codes as :mod:`lifshitz_audit._quad`; each term is
integrated independently with a global adaptive Gauss-Kronrod (7, 15) rule.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, log1p, exp, expm1, fabs, pow, isinf, INFINITY
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef enum:
    MAX_PARAM = 8

cdef double DELTA_FLOOR = 1e-30

cdef double[8] XGK = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
]
cdef double[8] WGK = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
]
cdef double[4] WG = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
]
cdef double[7] BREAKS = [0.0, 1.0, 3.0, 8.0, 18.0, 35.0, 60.0]


cdef inline double depth(double eps, double zeta, double y) noexcept nogil:
    if zeta == 0.0:
        return fabs(y)
    if isinf(eps):
        return INFINITY
    return sqrt(y * y + (eps - 1.0) * zeta * zeta)


cdef inline void fresnel(double eps, double zeta, double y, double* tm, double* te) noexcept nogil:
    cdef double s = depth(eps, zeta, y)
    if isinf(eps):
        tm[0] = 1.0
    else:
        tm[0] = (eps * y - s) / (eps * y + s)
    if isinf(s):
        te[0] = -1.0
    else:
        te[0] = (y - s) / (y + s)


cdef inline void modified(double eps, double delta, double eps0, double kappa_a,
                          double zeta, double y, double* tm, double* te) noexcept nogil:
    cdef double et, s, K2, eta, t3
    if not (delta > DELTA_FLOOR * eps):
        fresnel(eps, zeta, y, tm, te)
        return
    et = eps + delta
    s = sqrt(y * y + (et - 1.0) * zeta * zeta)
    K2 = y * y - zeta * zeta
    if K2 < 0.0:
        K2 = 0.0
    eta = sqrt(K2 + kappa_a * kappa_a * eps0 * et / (eps * delta))
    t3 = K2 * delta / (eta * eps) if K2 > 0.0 else 0.0
    tm[0] = (et * y - s - t3) / (et * y + s + t3)
    te[0] = (y - s) / (y + s)


cdef inline double rpa_ez(double eps, double delta, double eps0, double kappa_a,
                          double zeta, double y) noexcept nogil:
    cdef double K, et, kk, eta, z2, screen, bracket
    K = y * y - zeta * zeta
    K = sqrt(K) if K > 0.0 else 0.0
    if zeta == 0.0:
        return eps0 * sqrt(K * K + kappa_a * kappa_a) / K
    et = eps + delta
    kk = sqrt(y * y + (et - 1.0) * zeta * zeta)
    z2 = zeta * zeta
    if delta > DELTA_FLOOR * eps:
        eta = sqrt(K * K + kappa_a * kappa_a * eps0 * et / (eps * delta))
        screen = K * K / eta * delta
    else:
        screen = 0.0
    bracket = ((kk * eps + screen) / (eps * et) + K - y - z2 * (1.0 / kk - 1.0 / y)
               + K * z2 * (1.0 / (K * kk + kk * kk) - 1.0 / (K * y + y * y)))
    return K / bracket


cdef inline double nonlocal_tm(double eps_x, double eps_z, double zeta, double y) noexcept nogil:
    cdef double K, kk, A
    K = y * y - zeta * zeta
    K = sqrt(K) if K > 0.0 else 0.0
    kk = depth(eps_x, zeta, y)
    A = K / eps_z if K > 0.0 else 0.0
    if not isinf(eps_x):
        A += (kk - K) / eps_x
    return (y - A) / (y + A)


cdef inline double trial_ez(double base, double kappa_a, double power, double K) noexcept nogil:
    if kappa_a > 0.0:
        return base * (1.0 + pow(kappa_a / K, power))
    return base


cdef inline void uniaxial(double eps_x, double eps_z, double zeta, double y,
                          double* tm, double* te) noexcept nogil:
    cdef double kz = depth(eps_z, zeta, y)
    cdef double kx = depth(eps_x, zeta, y)
    cdef double g = sqrt(eps_x * eps_z) * y
    if isinf(g) and not isinf(kz):
        tm[0] = 1.0
    else:
        tm[0] = (g - kz) / (g + kz)
    if isinf(kx):
        te[0] = -1.0
    else:
        te[0] = (y - kx) / (y + kx)


cdef inline void coefficients(int code, const double* p, double zeta, double y,
                              double* tm, double* te) noexcept nogil:
    cdef double K, s, g
    if code == 0:
        fresnel(p[0], zeta, y, tm, te)
    elif code == 1:
        modified(p[0], p[1], p[2], p[3], zeta, y, tm, te)
    elif code == 2:
        tm[0] = nonlocal_tm(p[0] + p[1], rpa_ez(p[0], p[1], p[2], p[3], zeta, y), zeta, y)
        s = sqrt(y * y + (p[0] + p[1] - 1.0) * zeta * zeta)
        te[0] = (y - s) / (y + s)
    elif code == 3:
        K = y * y - zeta * zeta
        K = sqrt(K) if K > 0.0 else 0.0
        uniaxial(p[0], trial_ez(p[1], p[2], p[3], K), zeta, y, tm, te)
    elif code == 10:
        tm[0] = p[0]
        te[0] = p[1]
    elif code == 11:
        tm[0] = p[0]
        s = sqrt(p[1] * p[1] + y * y)
        te[0] = (y - s) / (y + s)
    elif code == 12:
        if isinf(p[1]):
            tm[0] = 1.0
        else:
            g = p[0] * sqrt(y * y + p[1] * p[1])
            tm[0] = (g - y) / (g + y)
        te[0] = 0.0
    elif code == 13:
        g = sqrt(p[0] * trial_ez(p[1], p[2], p[3], y))
        tm[0] = 1.0 if isinf(g) else (g - 1.0) / (g + 1.0)
        te[0] = 0.0


cdef inline double log_loss(double r2, double y, double ey) noexcept nogil:
    cdef double x = r2 * ey
    if x < 0.5:
        return log1p(-x)
    return log(-expm1(-y) + (1.0 - r2) * ey)


cdef inline double integrand(int code, const double* p, double zeta, double y,
                             int quantity, int pol) noexcept nogil:
    cdef double tm = 0.0, te = 0.0, out = 0.0, ey, r2
    coefficients(code, p, zeta, y, &tm, &te)
    if quantity == 0:
        ey = exp(-y)
        if pol & 1:
            out += y * log_loss(tm * tm, y, ey)
        if pol & 2:
            out += y * log_loss(te * te, y, ey)
    else:
        if pol & 1:
            r2 = tm * tm
            out += y * y * r2 / (expm1(y) + (1.0 - r2))
        if pol & 2:
            r2 = te * te
            out += y * y * r2 / (expm1(y) + (1.0 - r2))
    return out


cdef inline void gk15(int code, const double* p, double zeta, double lo, double hi,
                      int quantity, int pol, double* val, double* err) noexcept nogil:
    cdef double centre = 0.5 * (lo + hi)
    cdef double half = 0.5 * (hi - lo)
    cdef double fc = integrand(code, p, zeta, centre, quantity, pol)
    cdef double resk = fc * WGK[7]
    cdef double resg = fc * WG[3]
    cdef double f1, f2, dx
    cdef int j
    for j in range(7):
        dx = half * XGK[j]
        f1 = integrand(code, p, zeta, centre - dx, quantity, pol)
        f2 = integrand(code, p, zeta, centre + dx, quantity, pol)
        resk += WGK[j] * (f1 + f2)
        if j == 1:
            resg += WG[0] * (f1 + f2)
        elif j == 3:
            resg += WG[1] * (f1 + f2)
        elif j == 5:
            resg += WG[2] * (f1 + f2)
    val[0] = half * resk
    err[0] = fabs(half * resk - half * resg)


cdef int integrate_one(int code, const double* p, double zeta, int quantity, int pol,
                       double rtol, double atol, int max_panels,
                       double* lo, double* hi, double* val, double* err,
                       double* out_val, double* out_err, cnp.int64_t* out_n) noexcept nogil:
    cdef int m = 6, i, worst
    cdef double total, total_err, a, b, mid, emax
    for i in range(m):
        lo[i] = zeta + BREAKS[i]
        hi[i] = zeta + BREAKS[i + 1]
        gk15(code, p, zeta, lo[i], hi[i], quantity, pol, &val[i], &err[i])
    while True:
        total = 0.0
        total_err = 0.0
        worst = 0
        emax = -1.0
        for i in range(m):
            total += val[i]
            total_err += err[i]
            if err[i] > emax:
                emax = err[i]
                worst = i
        if not (total_err > atol and total_err > rtol * fabs(total)):
            out_val[0] = total
            out_err[0] = total_err
            out_n[0] = m
            return 0
        if m >= max_panels:
            out_val[0] = total
            out_err[0] = total_err
            out_n[0] = m
            return 1
        a = lo[worst]
        b = hi[worst]
        mid = 0.5 * (a + b)
        hi[worst] = mid
        gk15(code, p, zeta, a, mid, quantity, pol, &val[worst], &err[worst])
        lo[m] = mid
        hi[m] = b
        gk15(code, p, zeta, mid, b, quantity, pol, &val[m], &err[m])
        m += 1


def integrate_terms(int code, zeta, params, int quantity=0, int pol=3, double rtol=1e-10,
                    double atol=1e-13, int max_panels=400, batch=None):
    """Integrate the y-integrand for every term (see the pure-Python twin)."""
    cdef double[::1] z = np.ascontiguousarray(zeta, dtype=np.float64)
    cdef Py_ssize_t L = z.shape[0]
    cdef double[:, ::1] P = np.ascontiguousarray(params, dtype=np.float64).reshape(L, -1)
    if P.shape[1] > MAX_PARAM:
        raise ValueError("too many scheme parameters")
    values = np.empty(L)
    errors = np.empty(L)
    panels = np.empty(L, dtype=np.int64)
    status = np.empty(L, dtype=np.int64)
    cdef double[::1] v = values
    cdef double[::1] e = errors
    cdef cnp.int64_t[::1] n = panels
    cdef cnp.int64_t[::1] st = status
    cdef double pbuf[MAX_PARAM]
    cdef Py_ssize_t l
    cdef int j, np_ = P.shape[1]
    if max_panels < 6:
        max_panels = 6
    cdef double* work = <double*> malloc(4 * max_panels * sizeof(double))
    if work == NULL:
        raise MemoryError()
    try:
        with nogil:
            for l in range(L):
                for j in range(MAX_PARAM):
                    pbuf[j] = P[l, j] if j < np_ else 0.0
                st[l] = integrate_one(code, pbuf, z[l], quantity, pol, rtol, atol, max_panels,
                                      work, work + max_panels, work + 2 * max_panels,
                                      work + 3 * max_panels, &v[l], &e[l], &n[l])
    finally:
        free(work)
    return values, errors, panels, status
