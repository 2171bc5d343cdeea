# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the staggered walk; same contract as ``_kernels_py``."""

import numpy as np

NAME = "cython"


cdef inline void _pairs_1d(double complex[::1] psi, const Py_ssize_t[::1] anchors,
                           const Py_ssize_t[::1] partners, double c, double s) noexcept nogil:
    cdef Py_ssize_t j, ia, ip
    cdef double ar, ai, br, bi
    for j in range(anchors.shape[0]):
        ia = anchors[j]
        ip = partners[j]
        ar = psi[ia].real
        ai = psi[ia].imag
        br = psi[ip].real
        bi = psi[ip].imag
        # (a, b) -> (c a + i s b, i s a + c b)
        psi[ia] = (c * ar - s * bi) + 1j * (c * ai + s * br)
        psi[ip] = (c * br - s * ai) + 1j * (c * bi + s * ar)


cdef inline void _pairs_2d(double complex[:, ::1] psi, const Py_ssize_t[::1] anchors,
                           const Py_ssize_t[::1] partners, double c, double s) noexcept nogil:
    cdef Py_ssize_t j, col, ia, ip
    cdef double ar, ai, br, bi
    for j in range(anchors.shape[0]):
        ia = anchors[j]
        ip = partners[j]
        for col in range(psi.shape[1]):
            ar = psi[ia, col].real
            ai = psi[ia, col].imag
            br = psi[ip, col].real
            bi = psi[ip, col].imag
            psi[ia, col] = (c * ar - s * bi) + 1j * (c * ai + s * br)
            psi[ip, col] = (c * br - s * ai) + 1j * (c * bi + s * ar)


cdef inline void _step_1d(double complex[::1] psi, const Py_ssize_t[:, ::1] anchors,
                          const Py_ssize_t[:, ::1] partners, double c, double s,
                          double sign, Py_ssize_t marked) noexcept nogil:
    cdef Py_ssize_t t, i
    if marked >= 0:
        psi[marked] = -psi[marked]
    for t in range(anchors.shape[0]):
        _pairs_1d(psi, anchors[t], partners[t], c, s)
    if sign != 1.0:
        for i in range(psi.shape[0]):
            psi[i] = sign * psi[i]


cdef inline void _step_2d(double complex[:, ::1] psi, const Py_ssize_t[:, ::1] anchors,
                          const Py_ssize_t[:, ::1] partners, double c, double s,
                          double sign, Py_ssize_t marked) noexcept nogil:
    cdef Py_ssize_t t, i, col
    if marked >= 0:
        for col in range(psi.shape[1]):
            psi[marked, col] = -psi[marked, col]
    for t in range(anchors.shape[0]):
        _pairs_2d(psi, anchors[t], partners[t], c, s)
    if sign != 1.0:
        for i in range(psi.shape[0]):
            for col in range(psi.shape[1]):
                psi[i, col] = sign * psi[i, col]


def apply_pairs(psi, anchors, partners, double c, double s):
    if psi.ndim == 1:
        _pairs_1d(psi, anchors, partners, c, s)
    else:
        _pairs_2d(psi, anchors, partners, c, s)


def walk_step(psi, anchors, partners, double c, double s, double sign, Py_ssize_t marked):
    if psi.ndim == 1:
        _step_1d(psi, anchors, partners, c, s, sign, marked)
    else:
        _step_2d(psi, anchors, partners, c, s, sign, marked)


def evolve_marked(double complex[::1] psi, const Py_ssize_t[:, ::1] anchors,
                  const Py_ssize_t[:, ::1] partners, double c, double s, double sign,
                  Py_ssize_t marked, Py_ssize_t watch, Py_ssize_t steps):
    probs = np.empty(steps, dtype=np.float64)
    cdef double[::1] out = probs
    cdef Py_ssize_t t
    cdef double complex amp
    with nogil:
        for t in range(steps):
            _step_1d(psi, anchors, partners, c, s, sign, marked)
            amp = psi[watch]
            out[t] = amp.real * amp.real + amp.imag * amp.imag
    return probs
