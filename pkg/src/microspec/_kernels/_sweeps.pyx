# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled sweep kernels; see _fallback.py for the reference semantics."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def pv_excision_sweep(values, poles, half_widths, lo, hi):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] v = np.ascontiguousarray(
        values, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] p = np.ascontiguousarray(
        poles, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] hw = np.ascontiguousarray(
        half_widths, dtype=np.int64)
    cdef Py_ssize_t npoles = p.shape[0]
    cdef Py_ssize_t nlev = hw.shape[0]
    cdef Py_ssize_t ilo = lo, ihi = hi
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.zeros(
        (npoles, nlev), dtype=np.complex128)

    cdef Py_ssize_t i, j, k, pi, kplus_lo, kplus_hi, kminus_lo, kminus_hi, m
    cdef double complex acc, gm, vp, vm
    for i in range(npoles):
        pi = p[i]
        for j in range(nlev):
            m = hw[j]
            acc = 0
            # + branch: indices pi + k inside [ilo, ihi]
            kplus_lo = m
            if ilo - pi > kplus_lo:
                kplus_lo = ilo - pi
            kplus_hi = ihi - pi
            for k in range(kplus_lo, kplus_hi + 1):
                acc = acc + v[pi + k] / k
            # - branch: indices pi - k inside [ilo, ihi]
            kminus_lo = m
            if pi - ihi > kminus_lo:
                kminus_lo = pi - ihi
            kminus_hi = pi - ilo
            for k in range(kminus_lo, kminus_hi + 1):
                acc = acc - v[pi - k] / k
            # trapezoid boundary: half weight at k == m
            vp = 0
            vm = 0
            if ilo <= pi + m <= ihi:
                vp = v[pi + m]
            if ilo <= pi - m <= ihi:
                vm = v[pi - m]
            gm = (vp - vm) / m
            out[i, j] = acc - 0.5 * gm
    return out


def bv_epsilon_sweep(values, spacing, t0, poles_pos, eps, power, lo, hi):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] v = np.ascontiguousarray(
        values, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] c = np.ascontiguousarray(
        poles_pos, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] e = np.ascontiguousarray(
        eps, dtype=np.float64)
    cdef Py_ssize_t npoles = c.shape[0]
    cdef Py_ssize_t neps = e.shape[0]
    cdef Py_ssize_t ilo = lo, ihi = hi
    cdef int pw = power
    cdef double h = spacing, t_origin = t0
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.zeros(
        (npoles, neps), dtype=np.complex128)

    cdef Py_ssize_t i, l, k, q
    cdef double complex acc, denom, dpow
    cdef double tk
    for i in range(npoles):
        for l in range(neps):
            acc = 0
            for k in range(ilo, ihi + 1):
                tk = t_origin + h * k
                denom = (tk - c[i]) - 1j * e[l]
                if pw == 1:
                    acc = acc + v[k] / denom
                else:
                    dpow = denom
                    for q in range(pw - 1):
                        dpow = dpow * denom
                    acc = acc + v[k] / dpow
            out[i, l] = h * acc
    return out
