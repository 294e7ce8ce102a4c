"""
Numba-compiled implementations of the hot kernels.

Same contracts as numpy_backend; the loop bodies are written scalar-wise so
nopython mode compiles them. Importing this module requires numba.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

OFF_DIAG_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
PIVOT_FLOOR = 1e-150


@njit(cache=True)
def pb_weights(probs):
    m = probs.shape[0]
    w = np.zeros(m + 1)
    w[0] = 1.0
    for k in range(m):
        p = probs[k]
        q = 1.0 - p
        for s in range(k + 1, 0, -1):
            w[s] = w[s] * q + w[s - 1] * p
        w[0] *= q
    return w


@njit(cache=True)
def _logaddexp(a, b):
    if a == -np.inf:
        return b
    if b == -np.inf:
        return a
    if a < b:
        a, b = b, a
    return a + math.log1p(math.exp(b - a))


@njit(cache=True)
def pb_log_weights(probs):
    m = probs.shape[0]
    lw = np.full(m + 1, -np.inf)
    lw[0] = 0.0
    for k in range(m):
        p = probs[k]
        lp = math.log(p) if p > 0.0 else -np.inf
        lq = math.log1p(-p) if p < 1.0 else -np.inf
        for s in range(k + 1, 0, -1):
            lw[s] = _logaddexp(lw[s] + lq, lw[s - 1] + lp)
        lw[0] += lq
    return lw


@njit(cache=True)
def moment_dp(a_plus, a_minus, probs, order):
    binom = np.zeros((order + 1, order + 1))
    binom[:, 0] = 1.0
    for j in range(1, order + 1):
        for i in range(1, order + 1):
            binom[j, i] = binom[j - 1, i] + binom[j - 1, i - 1]
    mom = np.zeros(order + 1)
    mom[0] = 1.0
    site = np.empty(order + 1)
    new = np.empty(order + 1)
    for k in range(probs.shape[0]):
        p = probs[k]
        ap = 1.0
        am = 1.0
        for j in range(order + 1):
            site[j] = p * ap + (1.0 - p) * am
            ap *= a_plus[k]
            am *= a_minus[k]
        for j in range(order + 1):
            acc = 0.0
            for i in range(j + 1):
                acc += binom[j, i] * mom[i] * site[j - i]
            new[j] = acc
        for j in range(order + 1):
            mom[j] = new[j]
    return mom


@njit(cache=True)
def word_dp(c0, cvec, blochs, masks):
    full = c0.shape[0] - 1
    state = np.zeros(full + 1, dtype=np.complex128)
    state[0] = 1.0 + 0.0j
    new = np.empty(full + 1, dtype=np.complex128)
    for k in range(blochs.shape[0]):
        site_mask = masks[k]
        r0 = blochs[k, 0]
        r1 = blochs[k, 1]
        r2 = blochs[k, 2]
        for i in range(full + 1):
            new[i] = state[i]
        for prev in range(full + 1):
            sp = state[prev]
            if sp == 0:
                continue
            allowed = site_mask & ~prev & full
            sub = allowed
            while sub != 0:
                f = c0[sub] + cvec[sub, 0] * r0 + cvec[sub, 1] * r1 + cvec[sub, 2] * r2
                new[prev | sub] += sp * f
                sub = (sub - 1) & allowed
        tmp = state
        state = new
        new = tmp
    return state[full]


@njit(cache=True)
def _off_mass_one(a):
    mass = 0.0
    for i in range(4):
        for j in range(4):
            if i != j:
                v = a[i, j]
                mass += v.real * v.real + v.imag * v.imag
    return math.sqrt(mass)


@njit(cache=True)
def jacobi_eigvals4_raw(mats):
    m = mats.shape[0]
    evals = np.empty((m, 4))
    converged = np.empty(m, dtype=np.bool_)
    for idx in range(m):
        a = mats[idx].copy().astype(np.complex128)
        done = False
        for _ in range(JACOBI_MAX_SWEEPS):
            if _off_mass_one(a) <= OFF_DIAG_TOL:
                done = True
                break
            for p in range(3):
                for q in range(p + 1, 4):
                    h = a[p, q]
                    absh = abs(h)
                    if absh <= PIVOT_FLOOR:
                        continue
                    app = a[p, p].real
                    aqq = a[q, q].real
                    tau = (aqq - app) / (2.0 * absh)
                    sgn = 1.0 if tau >= 0.0 else -1.0
                    t = sgn / (abs(tau) + math.sqrt(1.0 + tau * tau))
                    c = 1.0 / math.sqrt(1.0 + t * t)
                    s = t * c
                    w = h / absh
                    cw = np.conj(w)
                    for i in range(4):
                        cp = a[i, p]
                        cq = a[i, q]
                        a[i, p] = c * cp - s * cw * cq
                        a[i, q] = s * cp + c * cw * cq
                    for j in range(4):
                        rp = a[p, j]
                        rq = a[q, j]
                        a[p, j] = c * rp - s * w * rq
                        a[q, j] = s * rp + c * w * rq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
        if not done:
            done = _off_mass_one(a) <= OFF_DIAG_TOL
        converged[idx] = done
        d = np.empty(4)
        for i in range(4):
            d[i] = a[i, i].real
        d = np.sort(d)
        for i in range(4):
            evals[idx, i] = d[3 - i]
    return evals, converged
