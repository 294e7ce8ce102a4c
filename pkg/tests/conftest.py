"""
Shared fixtures and brute-force oracles.

The oracles recompute walk statistics by exhaustive enumeration at small n
so the package's dynamic programs can be checked against something with no
shared code path.
"""

from __future__ import annotations

import itertools
import math
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pytest

from pauliwalk import _kernels, walks
from pauliwalk.qubit import PAULI_AXES


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the jitted kernels once so runtime budgets exclude that."""
    probs = np.array([0.3, 0.7])
    _kernels.pb_weights(probs)
    _kernels.pb_log_weights(probs)
    _kernels.moment_dp(np.ones(2), -np.ones(2), probs, 4)
    _kernels.word_dp(
        np.zeros(2, dtype=np.complex128),
        np.zeros((2, 3), dtype=np.complex128),
        np.zeros((2, 3)),
        np.full(2, 1, dtype=np.int64),
    )
    eye = np.eye(4, dtype=np.complex128)[np.newaxis]
    _kernels.jacobi_eigvals4(eye)


def site_values_and_probs(
    spec: walks.WalkSpec, direction: walks.Direction, window: walks.Window
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-site (value_plus, value_minus, prob_plus) over the window."""
    law = walks.site_laws(spec, direction, window)
    m = law.site_count
    return (
        np.full(m, law.a_plus),
        np.full(m, law.a_minus),
        np.array(law.probs),
    )


def brute_distribution(
    spec: walks.WalkSpec, direction: walks.Direction, window: walks.Window
) -> Dict[float, float]:
    """Exact law of the windowed sum by enumerating all sign patterns."""
    plus, minus, probs = site_values_and_probs(spec, direction, window)
    m = probs.shape[0]
    out: Dict[float, float] = {}
    for signs in itertools.product((0, 1), repeat=m):
        # fsum is order-independent, so equal multisets merge exactly.
        value = math.fsum(plus[k] if s else minus[k] for k, s in enumerate(signs))
        weight = 1.0
        for k, s in enumerate(signs):
            weight *= probs[k] if s else 1.0 - probs[k]
        out[value] = out.get(value, 0.0) + weight
    return out


def brute_upper_tail(spec: walks.WalkSpec, direction: walks.Direction, x: float) -> float:
    """-(1/n) log P(sum >= n x) from the enumerated law."""
    dist = brute_distribution(spec, direction, walks.Window(0.0, 1.0))
    mass = sum(p for value, p in dist.items() if value >= x * spec.n - 1e-9)
    return -math.log(mass) / spec.n


def brute_ks(
    spec: walks.WalkSpec, direction: walks.Direction, t: float, variance: float
) -> float:
    """KS distance of the scaled enumerated law against N(0, variance)."""
    dist = brute_distribution(spec, direction, walks.Window(0.0, t))
    values = np.array(sorted(dist))
    weights = np.array([dist[v] for v in values])
    cum = np.cumsum(weights)
    cum_prev = np.concatenate(([0.0], cum[:-1]))
    scaled = values / math.sqrt(spec.n)
    gauss = 0.5 * np.array(
        [math.erfc(-s / math.sqrt(2.0 * variance)) for s in scaled]
    )
    return float(max(np.max(np.abs(cum - gauss)), np.max(np.abs(gauss - cum_prev))))


def brute_word_expectation(spec: walks.WalkSpec, word: walks.WordSpec) -> complex:
    """
    Ordered-word expectation by exhaustive letter-to-site assignment.

    The product state factorizes every assignment into per-site traces of
    the ordered product of the letters landing on that site.
    """
    traj = walks.bloch_trajectory(spec)
    letter_mats = []
    site_lists = []
    for direction, window in word.letters:
        nu = direction.nu
        mat = sum(nu[a] * PAULI_AXES[a] for a in range(3)) - direction.center * np.eye(2)
        letter_mats.append(mat)
        lo, hi = window.sites(spec.n)
        site_lists.append(range(lo, hi + 1))
    total = 0.0 + 0.0j
    for assignment in itertools.product(*site_lists):
        factor = 1.0 + 0.0j
        for site in sorted(set(assignment)):
            mat = np.eye(2, dtype=complex)
            for j, kj in enumerate(assignment):
                if kj == site:
                    mat = mat @ letter_mats[j]
            r = traj[site - 1]
            rho = 0.5 * (
                np.eye(2, dtype=complex)
                + r[0] * PAULI_AXES[0]
                + r[1] * PAULI_AXES[1]
                + r[2] * PAULI_AXES[2]
            )
            factor *= np.trace(mat @ rho)
        total += factor
    return complex(total / spec.n ** (word.degree / 2.0))


def brute_wick(cov: np.ndarray, letters: Sequence[Tuple[int, float]]) -> float:
    """Gaussian moment by recursion over perfect matchings."""
    items: List[Tuple[int, float]] = list(letters)
    if len(items) % 2:
        return 0.0

    def rec(rest: List[int]) -> float:
        if not rest:
            return 1.0
        first, tail = rest[0], rest[1:]
        total = 0.0
        for i, other in enumerate(tail):
            a, ta = items[first]
            b, tb = items[other]
            total += cov[a - 1, b - 1] * min(ta, tb) * rec(tail[:i] + tail[i + 1 :])
        return total

    return rec(list(range(len(items))))
