# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for the simultaneous (Aberth-Ehrlich) root iteration.

Mirrors the iteration of ``_aberth_py``: same initial circle, same coupled
Newton update, same residual-vs-magnitude-scale stopping rule.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()

cdef double _PHASE = 0.4
cdef double _SPIRAL = 0.09
cdef double _TINY = 1e-300


def aberth_batch(coeffs, int maxiter=200, double tol=1e-13):
    """Roots of many same-degree polynomials at once.

    coeffs: (m, d+1) complex128, ascending order, leading column nonzero.
    Returns (roots (m, d) complex128, converged (m,) bool).
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] c = np.ascontiguousarray(
        coeffs, dtype=np.complex128)
    cdef Py_ssize_t m = c.shape[0]
    cdef Py_ssize_t dp1 = c.shape[1]
    cdef Py_ssize_t d = dp1 - 1
    if d < 1:
        raise ValueError("degree must be >= 1")

    cdef cnp.ndarray[cnp.complex128_t, ndim=2] roots = np.empty(
        (m, d), dtype=np.complex128)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] ok = np.zeros(m, dtype=np.uint8)

    cdef Py_ssize_t row, k, j, it
    cdef double complex z[64]
    cdef double complex p[64]
    cdef double complex dp[64]
    cdef double sc[64]
    cdef double complex b, db, zz, s, newton, denom, diff
    cdef double radius, maxc, ac, ang, az, scale
    cdef bint all_ok, res_ok

    if d > 64:
        raise ValueError("degree cap of the compiled kernel is 64")

    for row in range(m):
        if d == 1:
            roots[row, 0] = -c[row, 0] / c[row, 1]
            ok[row] = 1
            continue
        # Cauchy bound initial circle with fixed perturbation
        maxc = 0.0
        for j in range(d):
            ac = abs(c[row, j])
            if ac > maxc:
                maxc = ac
        radius = 1.0 + maxc / abs(c[row, d])
        for k in range(d):
            ang = 2.0 * 3.141592653589793 * (k + 0.35) / d + _PHASE + _SPIRAL * k
            z[k] = radius * (cos(ang) + 1j * sin(ang))

        all_ok = False
        for it in range(maxiter):
            all_ok = True
            for k in range(d):
                zz = z[k]
                b = c[row, d]
                db = 0
                scale = abs(c[row, d])
                az = abs(zz)
                for j in range(dp1 - 2, -1, -1):
                    db = db * zz + b
                    b = b * zz + c[row, j]
                    scale = scale * az + abs(c[row, j])
                p[k] = b
                dp[k] = db
                sc[k] = scale
                if abs(b) > tol * scale + _TINY:
                    all_ok = False
            if all_ok:
                break
            for k in range(d):
                if abs(dp[k]) < _TINY:
                    dp[k] = _TINY
                newton = p[k] / dp[k]
                s = 0
                for j in range(d):
                    if j != k:
                        diff = z[k] - z[j]
                        if diff != 0:
                            s = s + 1.0 / diff
                denom = 1.0 - newton * s
                if abs(denom) < _TINY:
                    denom = 1.0
                z[k] = z[k] - newton / denom

        for k in range(d):
            roots[row, k] = z[k]
        ok[row] = 1 if all_ok else 0

    return roots, ok.astype(bool)
