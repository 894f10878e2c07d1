# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Dormand-Prince 5(4) transport of ``Y' = A(x) Y`` for rational ``A``.

Mirrors the pure fallback step for step: same controller, same error norm.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, pow, isfinite, INFINITY
from libc.stdlib cimport malloc, free

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)

cnp.import_array()

cdef double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9
cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double A71 = 35.0 / 384, A73 = 500.0 / 1113, A74 = 125.0 / 192, A75 = -2187.0 / 6784, A76 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40


cdef struct Rat:
    int n
    int deg
    int npole
    double complex* poly
    double complex* loc
    long* order
    double complex* coef


cdef int eval_rhs(Rat* r, double complex x, double complex u, double complex* y,
                  double complex* out, double complex* work) nogil:
    """out = u * A(x) y; returns nonzero on a pole hit or non-finite value."""
    cdef int n = r.n, nn = n * n
    cdef int i, j, k, p
    cdef double complex d, s
    for i in range(nn):
        work[i] = r.poly[(r.deg - 1) * nn + i]
    for k in range(r.deg - 2, -1, -1):
        for i in range(nn):
            work[i] = work[i] * x + r.poly[k * nn + i]
    for p in range(r.npole):
        d = x - r.loc[p]
        if d == 0:
            return 1
        s = 1.0
        for k in range(r.order[p]):
            s = s * d
        s = 1.0 / s
        for i in range(nn):
            work[i] = work[i] + r.coef[p * nn + i] * s
    for i in range(n):
        for j in range(n):
            s = 0
            for k in range(n):
                s = s + work[i * n + k] * y[k * n + j]
            if not (isfinite(creal(s)) and isfinite(cimag(s))):
                return 1
            out[i * n + j] = u * s
    return 0


def transport_rational(cnp.ndarray vertices, cnp.ndarray poly, cnp.ndarray loc,
                       cnp.ndarray order, cnp.ndarray coef, cnp.ndarray frame,
                       double rtol, double atol, double max_step, double pole_guard,
                       long max_steps):
    """Return ``(frame_out, accepted, rejected, status)``.

    Status codes: 0 success, 1 pole guard, 2 step limit, 3 non-finite.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] verts = np.ascontiguousarray(vertices, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] polyf = np.ascontiguousarray(poly, dtype=np.complex128).ravel()
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] locf = np.ascontiguousarray(loc, dtype=np.complex128)
    cdef cnp.ndarray[long, ndim=1] ordf = np.ascontiguousarray(order, dtype=np.int_)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] coeff = np.ascontiguousarray(coef, dtype=np.complex128).ravel()
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] yarr = np.ascontiguousarray(frame, dtype=np.complex128).ravel().copy()
    cdef int n = frame.shape[0]
    cdef int nn = n * n
    cdef Rat r
    r.n = n
    r.deg = poly.shape[0]
    r.npole = locf.shape[0]
    r.poly = <double complex*> &polyf[0]
    r.loc = <double complex*> (&locf[0] if r.npole > 0 else NULL)
    r.order = <long*> (&ordf[0] if r.npole > 0 else NULL)
    r.coef = <double complex*> (&coeff[0] if r.npole > 0 else NULL)

    cdef double complex* y = <double complex*> &yarr[0]
    cdef double complex* buf = <double complex*> malloc(11 * nn * sizeof(double complex))
    cdef double complex* k1 = buf
    cdef double complex* k2 = buf + nn
    cdef double complex* k3 = buf + 2 * nn
    cdef double complex* k4 = buf + 3 * nn
    cdef double complex* k5 = buf + 4 * nn
    cdef double complex* k6 = buf + 5 * nn
    cdef double complex* k7 = buf + 6 * nn
    cdef double complex* yt = buf + 7 * nn
    cdef double complex* yn = buf + 8 * nn
    cdef double complex* work = buf + 9 * nn
    cdef double complex* k1f = buf + 10 * nn
    cdef long accepted = 0, rejected = 0
    cdef int status = 0, nv = verts.shape[0], seg, i, last, bad
    cdef double h = -1.0, L, s, err, errold = 1e-4, fac, sc, d0, d1, d2, dm, h0, h1, mx, e
    cdef double complex a, b, u, x, tmp
    with nogil:
        for seg in range(nv - 1):
            a = verts[seg]
            b = verts[seg + 1]
            L = cabs(b - a)
            u = (b - a) / L
            if eval_rhs(&r, a, u, y, k1, work):
                status = 3
                break
            if h < 0:
                d0 = 0; d1 = 0
                for i in range(nn):
                    sc = atol + rtol * cabs(y[i])
                    d0 += (cabs(y[i]) / sc) ** 2
                    d1 += (cabs(k1[i]) / sc) ** 2
                d0 = sqrt(d0 / nn); d1 = sqrt(d1 / nn)
                if d0 < 1e-5 or d1 < 1e-5:
                    h0 = 1e-6
                else:
                    h0 = 0.01 * d0 / d1
                if h0 > L: h0 = L
                if h0 > max_step: h0 = max_step
                for i in range(nn):
                    yt[i] = y[i] + h0 * k1[i]
                if eval_rhs(&r, a + h0 * u, u, yt, k2, work):
                    h = 0.1 * h0
                else:
                    d2 = 0
                    for i in range(nn):
                        sc = atol + rtol * cabs(y[i])
                        d2 += (cabs(k2[i] - k1[i]) / sc) ** 2
                    d2 = sqrt(d2 / nn) / h0
                    dm = d1 if d1 > d2 else d2
                    if dm <= 1e-15:
                        h1 = h0 * 1e-3
                        if h1 < 1e-6: h1 = 1e-6
                    else:
                        h1 = pow(0.01 / dm, 0.2)
                    h = 100 * h0
                    if h1 < h: h = h1
            s = 0.0
            while s < L:
                if accepted + rejected >= max_steps:
                    status = 2
                    break
                if h > max_step: h = max_step
                last = 0
                if s + h >= L * (1 - 1e-14):
                    h = L - s
                    last = 1
                x = a + s * u
                bad = 0
                for i in range(nn):
                    yt[i] = y[i] + h * A21 * k1[i]
                bad = eval_rhs(&r, x + C2 * h * u, u, yt, k2, work)
                if not bad:
                    for i in range(nn):
                        yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i])
                    bad = eval_rhs(&r, x + C3 * h * u, u, yt, k3, work)
                if not bad:
                    for i in range(nn):
                        yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
                    bad = eval_rhs(&r, x + C4 * h * u, u, yt, k4, work)
                if not bad:
                    for i in range(nn):
                        yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
                    bad = eval_rhs(&r, x + C5 * h * u, u, yt, k5, work)
                if not bad:
                    for i in range(nn):
                        yt[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i])
                    bad = eval_rhs(&r, x + h * u, u, yt, k6, work)
                if not bad:
                    for i in range(nn):
                        yn[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i])
                    bad = eval_rhs(&r, x + h * u, u, yn, k7, work)
                if bad:
                    rejected += 1
                    h *= 0.2
                    if h < 1e-15 * (L if L > 1 else 1.0):
                        status = 3
                        break
                    continue
                err = 0
                for i in range(nn):
                    tmp = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
                    mx = cabs(y[i])
                    e = cabs(yn[i])
                    if e > mx: mx = e
                    sc = atol + rtol * mx
                    err += (cabs(tmp) / sc) ** 2
                err = sqrt(err / nn)
                if not isfinite(err):
                    rejected += 1
                    h *= 0.2
                    continue
                if err <= 1.0:
                    accepted += 1
                    if last:
                        s = L
                    else:
                        s = s + h
                    mx = 0
                    for i in range(nn):
                        y[i] = yn[i]
                        k1[i] = k7[i]
                        e = cabs(y[i])
                        if e > mx: mx = e
                    if mx > pole_guard:
                        status = 1
                        break
                    if err < 1e-10: err = 1e-10
                    fac = 0.9 * pow(err, -0.7 / 5) * pow(errold, 0.4 / 5)
                    if fac < 0.2: fac = 0.2
                    if fac > 5.0: fac = 5.0
                    errold = err
                    if not last:
                        h *= fac
                else:
                    rejected += 1
                    fac = 0.9 * pow(err, -0.2)
                    if fac < 0.2: fac = 0.2
                    h *= fac
                    if h < 1e-15 * (L if L > 1 else 1.0):
                        status = 2
                        break
            if status:
                break
    free(buf)
    return yarr.reshape(n, n), accepted, rejected, status
