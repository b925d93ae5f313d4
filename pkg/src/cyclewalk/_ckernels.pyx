# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled stepping kernels.

Complex amplitudes are handled through a float64 view of the complex128
state (re, im interleaved), so every update is two real fused expressions.
Must stay numerically interchangeable with ``_pykernels``.
"""

import numpy as np


cdef void _step(const double[::1] src, double[::1] dst, Py_ssize_t n,
                double a, double b) noexcept nogil:
    # new L[x] = b L[x-1] - a R[x-1];  new R[x] = a L[x+1] + b R[x+1]
    cdef Py_ssize_t x, xm, xp, r = 2 * n
    for x in range(n):
        xm = x - 1 if x > 0 else n - 1
        xp = x + 1 if x < n - 1 else 0
        dst[2 * x] = b * src[2 * xm] - a * src[r + 2 * xm]
        dst[2 * x + 1] = b * src[2 * xm + 1] - a * src[r + 2 * xm + 1]
        dst[r + 2 * x] = a * src[2 * xp] + b * src[r + 2 * xp]
        dst[r + 2 * x + 1] = a * src[2 * xp + 1] + b * src[r + 2 * xp + 1]


cdef void _probs(const double[::1] s, double[::1] out, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t x, r = 2 * n
    for x in range(n):
        out[x] = (s[2 * x] * s[2 * x] + s[2 * x + 1] * s[2 * x + 1]) + (
            s[r + 2 * x] * s[r + 2 * x] + s[r + 2 * x + 1] * s[r + 2 * x + 1])


def _buffers(psi):
    cur = np.array(psi, dtype=np.complex128, copy=True)
    nxt = np.empty_like(cur)
    return cur, nxt


def evolve(psi, double a, double b, Py_ssize_t steps):
    """Apply ``steps`` walk steps and return the new state."""
    cur, nxt = _buffers(psi)
    cdef Py_ssize_t n = cur.size // 2, t
    cdef double[::1] s = cur.view(np.float64)
    cdef double[::1] d = nxt.view(np.float64)
    cdef double[::1] tmp
    with nogil:
        for t in range(steps):
            _step(s, d, n, a, b)
            tmp = s
            s = d
            d = tmp
    return np.asarray(s).view(np.complex128).copy()


def probabilities(psi):
    cur = np.ascontiguousarray(psi, dtype=np.complex128)
    cdef Py_ssize_t n = cur.size // 2
    out = np.empty(n)
    cdef double[::1] o = out
    cdef const double[::1] s = cur.view(np.float64)
    with nogil:
        _probs(s, o, n)
    return out


def record(psi, double a, double b, Py_ssize_t t_max, Py_ssize_t stride):
    """Position probabilities at t = 0, stride, 2*stride, ... <= t_max."""
    cur, nxt = _buffers(psi)
    cdef Py_ssize_t n = cur.size // 2, t, k = 0
    out = np.empty((t_max // stride + 1, n))
    cdef double[:, ::1] o = out
    cdef double[::1] s = cur.view(np.float64)
    cdef double[::1] d = nxt.view(np.float64)
    cdef double[::1] tmp
    with nogil:
        _probs(s, o[0], n)
        for t in range(1, t_max + 1):
            _step(s, d, n, a, b)
            tmp = s
            s = d
            d = tmp
            if t % stride == 0:
                k = t // stride
                _probs(s, o[k], n)
    return np.asarray(s).view(np.complex128).copy(), out


def variation(psi, double a, double b, Py_ssize_t x0, Py_ssize_t t_max):
    """V(t) = sum_d (P(x0+d) - P(x0-d))^2 for t = 1..t_max."""
    cur, nxt = _buffers(psi)
    cdef Py_ssize_t n = cur.size // 2, t, dd, xp, xm
    out = np.empty(t_max)
    p = np.empty(n)
    cdef double[::1] o = out
    cdef double[::1] pv = p
    cdef double[::1] s = cur.view(np.float64)
    cdef double[::1] d = nxt.view(np.float64)
    cdef double[::1] tmp
    cdef double acc, diff
    with nogil:
        for t in range(t_max):
            _step(s, d, n, a, b)
            tmp = s
            s = d
            d = tmp
            _probs(s, pv, n)
            acc = 0.0
            for dd in range(n):
                xp = (x0 + dd) % n
                xm = (x0 - dd + n) % n
                diff = pv[xp] - pv[xm]
                acc = acc + diff * diff
            o[t] = acc
    return np.asarray(s).view(np.complex128).copy(), out


def cesaro(psi, double a, double b, Py_ssize_t horizon):
    """Sum of position probabilities over t = 0..horizon inclusive."""
    cur, nxt = _buffers(psi)
    cdef Py_ssize_t n = cur.size // 2, t, x
    total = np.zeros(n)
    p = np.empty(n)
    cdef double[::1] tot = total
    cdef double[::1] pv = p
    cdef double[::1] s = cur.view(np.float64)
    cdef double[::1] d = nxt.view(np.float64)
    cdef double[::1] tmp
    with nogil:
        _probs(s, pv, n)
        for x in range(n):
            tot[x] = tot[x] + pv[x]
        for t in range(horizon):
            _step(s, d, n, a, b)
            tmp = s
            s = d
            d = tmp
            _probs(s, pv, n)
            for x in range(n):
                tot[x] = tot[x] + pv[x]
    return np.asarray(s).view(np.complex128).copy(), total
