"""
Pure-numpy implementations of the hot kernels.

These are the fallback used when numba is unavailable or disabled via
PAULIWALK_NO_NUMBA. Where it pays off the loops are vectorized: the weight
DPs over the lattice index, the Jacobi eigensolver over the whole batch of
matrices (every matrix rotates through the same fixed pair schedule, so the
batch moves in lockstep).
"""

from __future__ import annotations

import numpy as np

OFF_DIAG_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
# Pivots below this are skipped: complex/real division squares the modulus
# internally and a denormal pivot turns into 0/0, while its off-diagonal
# mass (~1e-300) is far below OFF_DIAG_TOL anyway.
PIVOT_FLOOR = 1e-150

_JACOBI_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def pb_weights(probs: np.ndarray) -> np.ndarray:
    """
    Exact law of the number of successes among independent Bernoulli(p_k).

    :param probs: success probabilities, shape (m,).
    :return: weights, shape (m+1,); weights[s] = P(exactly s successes).
    """
    probs = np.asarray(probs, dtype=np.float64)
    m = probs.shape[0]
    w = np.zeros(m + 1)
    w[0] = 1.0
    buf = np.empty(m + 1)
    for k in range(m):
        p = probs[k]
        q = 1.0 - p
        buf[0] = w[0] * q
        buf[1 : k + 2] = w[1 : k + 2] * q + w[0 : k + 1] * p
        w[: k + 2] = buf[: k + 2]
    return w


def pb_log_weights(probs: np.ndarray) -> np.ndarray:
    """Same DP as :func:`pb_weights`, carried entirely in log space."""
    probs = np.asarray(probs, dtype=np.float64)
    m = probs.shape[0]
    with np.errstate(divide="ignore"):
        log_p = np.log(probs)
        log_q = np.log1p(-probs)
    lw = np.full(m + 1, -np.inf)
    lw[0] = 0.0
    for k in range(m):
        stay = lw[: k + 2] + log_q[k]
        step = np.full(k + 2, -np.inf)
        step[1:] = lw[: k + 1] + log_p[k]
        lw[: k + 2] = np.logaddexp(stay, step)
    return lw


def moment_dp(
    a_plus: np.ndarray,
    a_minus: np.ndarray,
    probs: np.ndarray,
    order: int,
) -> np.ndarray:
    """
    Raw moments 0..order of a sum of independent two-point variables.

    Site k takes value a_plus[k] with probability probs[k], else a_minus[k].
    Combines sites through E[(S+X)^j] = sum_i C(j,i) E[S^i] E[X^(j-i)].
    """
    a_plus = np.asarray(a_plus, dtype=np.float64)
    a_minus = np.asarray(a_minus, dtype=np.float64)
    probs = np.asarray(probs, dtype=np.float64)
    binom = _pascal(order)
    mom = np.zeros(order + 1)
    mom[0] = 1.0
    site = np.empty(order + 1)
    for k in range(probs.shape[0]):
        p = probs[k]
        ap = 1.0
        am = 1.0
        for j in range(order + 1):
            site[j] = p * ap + (1.0 - p) * am
            ap *= a_plus[k]
            am *= a_minus[k]
        new = np.empty(order + 1)
        for j in range(order + 1):
            new[j] = np.dot(binom[j, : j + 1] * mom[: j + 1], site[j::-1])
        mom = new
    return mom


def _pascal(order: int) -> np.ndarray:
    binom = np.zeros((order + 1, order + 1))
    binom[:, 0] = 1.0
    for j in range(1, order + 1):
        binom[j, 1:] = binom[j - 1, 1:] + binom[j - 1, :-1]
    return binom


def word_dp(
    c0: np.ndarray,
    cvec: np.ndarray,
    blochs: np.ndarray,
    masks: np.ndarray,
) -> complex:
    """
    Subset dynamic program for an ordered product of collective observables.

    State index is the bitmask of letter positions already absorbed by the
    sites processed so far. Site k may absorb any subset of the positions
    whose windows contain it; the per-site factor of subset U is
    c0[U] + <cvec[U], blochs[k]>.

    :param c0: complex, shape (2^d,).
    :param cvec: complex, shape (2^d, 3).
    :param blochs: Bloch vectors of the processed sites, shape (m, 3).
    :param masks: allowed-position bitmask per site, shape (m,), int64.
    :return: amplitude of the fully-absorbed state.
    """
    full = c0.shape[0] - 1
    state = np.zeros(full + 1, dtype=np.complex128)
    state[0] = 1.0
    new = np.empty_like(state)
    for k in range(blochs.shape[0]):
        site_mask = int(masks[k])
        r0 = blochs[k, 0]
        r1 = blochs[k, 1]
        r2 = blochs[k, 2]
        new[:] = state
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
        state, new = new, state
    return complex(state[full])


def jacobi_eigvals4_raw(mats: np.ndarray):
    """
    Batched cyclic Jacobi eigenvalues for Hermitian 4x4 matrices.

    :param mats: shape (m, 4, 4), complex.
    :return: (evals, converged): evals shape (m, 4) sorted descending,
        converged boolean per matrix (off-diagonal Frobenius mass below
        OFF_DIAG_TOL within JACOBI_MAX_SWEEPS sweeps).
    """
    a = np.array(mats, dtype=np.complex128)
    for _ in range(JACOBI_MAX_SWEEPS):
        if np.all(_off_mass(a) <= OFF_DIAG_TOL):
            break
        for p, q in _JACOBI_PAIRS:
            h = a[:, p, q].copy()
            absh = np.abs(h)
            do = absh > PIVOT_FLOOR
            if not np.any(do):
                continue
            app = a[do, p, p].real
            aqq = a[do, q, q].real
            hd = absh[do]
            tau = (aqq - app) / (2.0 * hd)
            t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            w = h[do] / hd
            # Columns: col_p' = c col_p - s conj(w) col_q;
            #          col_q' = s col_p + c conj(w) col_q.
            col_p = a[do, :, p].copy()
            col_q = a[do, :, q].copy()
            cw = np.conj(w)
            a[do, :, p] = c[:, None] * col_p - (s * cw)[:, None] * col_q
            a[do, :, q] = s[:, None] * col_p + (c * cw)[:, None] * col_q
            # Rows: row_p' = c row_p - s w row_q; row_q' = s row_p + c w row_q.
            row_p = a[do, p, :].copy()
            row_q = a[do, q, :].copy()
            a[do, p, :] = c[:, None] * row_p - (s * w)[:, None] * row_q
            a[do, q, :] = s[:, None] * row_p + (c * w)[:, None] * row_q
            # The (p, q) entry is annihilated by construction.
            a[do, p, q] = 0.0
            a[do, q, p] = 0.0
    converged = _off_mass(a) <= OFF_DIAG_TOL
    diag = np.real(np.diagonal(a, axis1=1, axis2=2))
    evals = -np.sort(-diag, axis=1)
    return evals, converged


_OFF_DIAG_MASK = ~np.eye(4, dtype=bool)


def _off_mass(a: np.ndarray) -> np.ndarray:
    # Sum the off-diagonal entries directly; subtracting the diagonal mass
    # from the total cancels catastrophically near convergence.
    return np.sqrt(np.sum(np.abs(a[:, _OFF_DIAG_MASK]) ** 2, axis=1))
