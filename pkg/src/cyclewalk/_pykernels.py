"""Pure numpy stepping kernels; same API and semantics as ``_ckernels``."""

import numpy as np


def _step(psi, n, a, b):
    left, right = psi[:n], psi[n:]
    lm, rm = np.roll(left, 1), np.roll(right, 1)
    lp, rp = np.roll(left, -1), np.roll(right, -1)
    return np.concatenate((b * lm - a * rm, a * lp + b * rp))


def probabilities(psi):
    psi = np.asarray(psi, dtype=np.complex128)
    n = psi.size // 2
    sq = psi.real * psi.real + psi.imag * psi.imag
    return sq[:n] + sq[n:]


def evolve(psi, a, b, steps):
    psi = np.array(psi, dtype=np.complex128, copy=True)
    n = psi.size // 2
    for _ in range(steps):
        psi = _step(psi, n, a, b)
    return psi


def record(psi, a, b, t_max, stride):
    psi = np.array(psi, dtype=np.complex128, copy=True)
    n = psi.size // 2
    out = np.empty((t_max // stride + 1, n))
    out[0] = probabilities(psi)
    for t in range(1, t_max + 1):
        psi = _step(psi, n, a, b)
        if t % stride == 0:
            out[t // stride] = probabilities(psi)
    return psi, out


def variation(psi, a, b, x0, t_max):
    psi = np.array(psi, dtype=np.complex128, copy=True)
    n = psi.size // 2
    d = np.arange(n)
    plus, minus = (x0 + d) % n, (x0 - d) % n
    out = np.empty(t_max)
    for t in range(t_max):
        psi = _step(psi, n, a, b)
        p = probabilities(psi)
        diff = p[plus] - p[minus]
        out[t] = np.dot(diff, diff)
    return psi, out


def cesaro(psi, a, b, horizon):
    psi = np.array(psi, dtype=np.complex128, copy=True)
    n = psi.size // 2
    total = probabilities(psi).copy()
    for _ in range(horizon):
        psi = _step(psi, n, a, b)
        total += probabilities(psi)
    return psi, total
