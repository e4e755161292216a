# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled network kernels: per-sample dense forward/backward and the
Nesterov parameter update. Same contracts as _kernels_py; the win over numpy
comes from skipping per-call array machinery in the tight per-sample loop."""

from libc.math cimport exp, fmax

import numpy as np
cimport numpy as cnp

cnp.import_array()


def forward_kernel(double[::1] x, double[:, ::1] w1, double[::1] b1,
                   double[:, ::1] w2, double[::1] b2,
                   double[:, ::1] w3, double[::1] b3,
                   double[::1] mask1, double[::1] mask2, double scale,
                   double[::1] z1, double[::1] a1,
                   double[::1] z2, double[::1] a2, double[::1] probs):
    cdef Py_ssize_t nin = x.shape[0]
    cdef Py_ssize_t n1 = b1.shape[0]
    cdef Py_ssize_t n2 = b2.shape[0]
    cdef Py_ssize_t nout = b3.shape[0]
    cdef Py_ssize_t i, j
    cdef double v, m, total

    # accumulate row-wise (contiguous weight access) and skip zero
    # activations: bag-of-words inputs and dropped-out units are mostly zero
    with nogil:
        for j in range(n1):
            z1[j] = b1[j]
        for i in range(nin):
            v = x[i]
            if v != 0.0:
                for j in range(n1):
                    z1[j] += v * w1[i, j]
        for j in range(n1):
            a1[j] = fmax(z1[j], 0.0) * mask1[j] * scale
        for j in range(n2):
            z2[j] = b2[j]
        for i in range(n1):
            v = a1[i]
            if v != 0.0:
                for j in range(n2):
                    z2[j] += v * w2[i, j]
        for j in range(n2):
            a2[j] = fmax(z2[j], 0.0) * mask2[j] * scale
        for j in range(nout):
            probs[j] = b3[j]
        for i in range(n2):
            v = a2[i]
            if v != 0.0:
                for j in range(nout):
                    probs[j] += v * w3[i, j]
        m = -1e300
        for j in range(nout):
            if probs[j] > m:
                m = probs[j]
        total = 0.0
        for j in range(nout):
            probs[j] = exp(probs[j] - m)
            total += probs[j]
        for j in range(nout):
            probs[j] /= total


def backward_kernel(double[::1] x, double[:, ::1] w2, double[:, ::1] w3,
                    double[::1] mask1, double[::1] mask2, double scale,
                    double[::1] z1, double[::1] a1,
                    double[::1] z2, double[::1] a2,
                    double[::1] probs, Py_ssize_t target,
                    double[:, ::1] gw1, double[::1] gb1,
                    double[:, ::1] gw2, double[::1] gb2,
                    double[:, ::1] gw3, double[::1] gb3):
    cdef Py_ssize_t nin = x.shape[0]
    cdef Py_ssize_t n1 = gb1.shape[0]
    cdef Py_ssize_t n2 = gb2.shape[0]
    cdef Py_ssize_t nout = gb3.shape[0]
    cdef Py_ssize_t i, j
    cdef double d, s

    dz3_arr = np.empty(nout, dtype=np.float64)
    dz2_arr = np.empty(n2, dtype=np.float64)
    dz1_arr = np.empty(n1, dtype=np.float64)
    cdef double[::1] dz3 = dz3_arr
    cdef double[::1] dz2 = dz2_arr
    cdef double[::1] dz1 = dz1_arr

    with nogil:
        for j in range(nout):
            d = probs[j]
            if j == target:
                d -= 1.0
            dz3[j] = d
            gb3[j] += d
        for i in range(n2):
            s = 0.0
            for j in range(nout):
                gw3[i, j] += a2[i] * dz3[j]
                s += w3[i, j] * dz3[j]
            if z2[i] <= 0.0:
                s = 0.0
            else:
                s = s * mask2[i] * scale
            dz2[i] = s
            gb2[i] += s
        for i in range(n1):
            s = 0.0
            for j in range(n2):
                gw2[i, j] += a1[i] * dz2[j]
                s += w2[i, j] * dz2[j]
            if z1[i] <= 0.0:
                s = 0.0
            else:
                s = s * mask1[i] * scale
            dz1[i] = s
            gb1[i] += s
        for i in range(nin):
            if x[i] != 0.0:
                for j in range(n1):
                    gw1[i, j] += x[i] * dz1[j]


def nesterov_update(double[::1] p, double[::1] v, double[::1] g,
                    double lr, double momentum):
    # Caller passes flat views (ravel of C-contiguous tensors).
    cdef Py_ssize_t i, n = p.shape[0]
    with nogil:
        for i in range(n):
            v[i] = momentum * v[i] - lr * g[i]
            p[i] += momentum * v[i] - lr * g[i]
