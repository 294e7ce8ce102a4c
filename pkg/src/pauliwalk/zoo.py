"""
The five named channel families, each bundled with its closed-form analysis.

Every constructor returns a ZooEntry: the Kraus channel plus the expected
affine form, stationary Bloch vector, limit covariance, and stationary
state, all serving as independent oracles for the generic machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channels import (
    AffineChannel,
    Convention,
    KrausChannel,
    SINGULAR_DET_TOL,
)
from .qubit import (
    BlochVector,
    DensityMatrix,
    IDENTITY2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    bloch_to_density,
)

# Denominator floor for the trigonometric family's stationary coordinate.
TRIG_DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class ZooEntry:
    """
    A named channel with its expected analysis.

    expected_rho_inf is None when the stationary state is not unique (the
    channel preserves a whole eigenspace); expected_v and expected_C then
    describe the orbit of the maximally mixed state, which is the orbit the
    printed claims refer to.
    """

    channel: KrausChannel
    expected_affine: AffineChannel
    expected_v: BlochVector
    expected_C: np.ndarray
    expected_rho_inf: Optional[DensityMatrix]

    def __post_init__(self):
        C = np.array(self.expected_C, dtype=float)
        C.setflags(write=False)
        object.__setattr__(self, "expected_C", C)


def _cov(v: BlochVector) -> np.ndarray:
    va = v.as_array()
    return np.eye(3) - np.outer(va, va)


def _check_unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} = {value!r} outside [0, 1]")
    return value


def depolarizing(p: float) -> ZooEntry:
    """
    Uniform Pauli noise: keep the state w.p. 1-p, else apply a random
    Pauli axis. Bloch action is the isotropic contraction by 1 - 4p/3.
    """
    p = _check_unit_interval("p", p)
    ops = (
        math.sqrt(1.0 - p) * IDENTITY2,
        math.sqrt(p / 3.0) * PAULI_X,
        math.sqrt(p / 3.0) * PAULI_Y,
        math.sqrt(p / 3.0) * PAULI_Z,
    )
    channel = KrausChannel(ops, Convention.LEFT_ADJOINT)
    lam = 1.0 - 4.0 * p / 3.0
    affine = AffineChannel(np.diag([lam, lam, lam]), np.zeros(3))
    v = BlochVector(0.0, 0.0, 0.0)
    unique = abs(1.0 - lam) ** 3 >= SINGULAR_DET_TOL
    rho_inf = DensityMatrix.maximally_mixed() if unique else None
    return ZooEntry(channel, affine, v, _cov(v), rho_inf)


def phase_damping(p: float) -> ZooEntry:
    """
    Dephasing in the computational basis: coherences shrink by 1 - p, the
    populations never move, so every z is stationary (no unique fixed
    point; the printed v = 0 is the z = 0 orbit).
    """
    p = _check_unit_interval("p", p)
    root = math.sqrt(p)
    ops = (
        math.sqrt(1.0 - p) * IDENTITY2,
        root * np.array([[1.0, 0.0], [0.0, 0.0]]),
        root * np.array([[0.0, 0.0], [0.0, 1.0]]),
    )
    channel = KrausChannel(ops, Convention.LEFT_ADJOINT)
    affine = AffineChannel(np.diag([1.0 - p, 1.0 - p, 1.0]), np.zeros(3))
    v = BlochVector(0.0, 0.0, 0.0)
    return ZooEntry(channel, affine, v, _cov(v), None)


def amplitude_damping(p: float) -> ZooEntry:
    """
    Decay toward |0><0|: the excited population relaxes with rate p. The
    stationary state is pure for every p > 0.
    """
    p = _check_unit_interval("p", p)
    ops = (
        np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - p)]]),
        np.array([[0.0, math.sqrt(p)], [0.0, 0.0]]),
    )
    channel = KrausChannel(ops, Convention.RIGHT_ADJOINT)
    root = math.sqrt(1.0 - p)
    affine = AffineChannel(np.diag([root, root, 1.0 - p]), np.array([0.0, 0.0, p]))
    if p > 0.0:
        v = BlochVector(0.0, 0.0, 1.0)
    else:
        v = BlochVector(0.0, 0.0, 0.0)
    unique = (1.0 - root) ** 2 * p >= SINGULAR_DET_TOL
    rho_inf = DensityMatrix(1.0, 0.0) if unique else None
    return ZooEntry(channel, affine, v, _cov(v), rho_inf)


def trigonometric(u: float, v_angle: float) -> ZooEntry:
    """
    Two-parameter diagonal family with Bloch action
    diag(cos u, cos v, cos u cos v) and translation (0, 0, sin u sin v).

    :raises ValueError: when 1 - cos u cos v degenerates (no stationary
        z-coordinate).
    """
    u = float(u)
    v_angle = float(v_angle)
    cu, cv = math.cos(u), math.cos(v_angle)
    su, sv = math.sin(u), math.sin(v_angle)
    denom = 1.0 - cu * cv
    if abs(denom) < TRIG_DEGENERACY_TOL:
        raise ValueError(f"degenerate angles: 1 - cos(u) cos(v) = {denom!r}")
    cv2, sv2 = math.cos(v_angle / 2.0), math.sin(v_angle / 2.0)
    cu2, su2 = math.cos(u / 2.0), math.sin(u / 2.0)
    ops = (
        cv2 * cu2 * IDENTITY2 + sv2 * su2 * PAULI_Z,
        np.array([[0.0, sv2 * cu2 - cv2 * su2], [sv2 * cu2 + cv2 * su2, 0.0]]),
    )
    channel = KrausChannel(ops, Convention.LEFT_ADJOINT)
    affine = AffineChannel(np.diag([cu, cv, cu * cv]), np.array([0.0, 0.0, su * sv]))
    v3 = su * sv / denom
    v = BlochVector(0.0, 0.0, v3)
    unique = abs((1.0 - cu) * (1.0 - cv) * denom) >= SINGULAR_DET_TOL
    rho_inf = bloch_to_density(v) if unique else None
    return ZooEntry(channel, affine, v, _cov(v), rho_inf)


def markov_chain(p: float, q: float) -> ZooEntry:
    """
    The channel whose diagonal dynamics follow the two-state Markov kernel
    [[p, 1-p], [q, 1-q]]; off-diagonal structure couples x to z.
    """
    p = float(p)
    q = float(q)
    if not (0.0 < p < 1.0 and 0.0 < q < 1.0):
        raise ValueError(f"p = {p!r}, q = {q!r} must lie strictly inside (0, 1)")
    a = math.sqrt(p * (1.0 - p))
    b = math.sqrt(q * (1.0 - q))
    ops = (
        np.array([[math.sqrt(p), math.sqrt(1.0 - p)], [0.0, 0.0]]),
        np.array([[0.0, 0.0], [math.sqrt(q), math.sqrt(1.0 - q)]]),
    )
    channel = KrausChannel(ops, Convention.LEFT_ADJOINT)
    T = np.array(
        [
            [0.0, 0.0, a - b],
            [0.0, 0.0, 0.0],
            [0.0, 0.0, p - q],
        ]
    )
    t = np.array([a + b, 0.0, p + q - 1.0])
    affine = AffineChannel(T, t)
    denom = 1.0 + q - p
    beta = q * a + (1.0 - p) * b
    v = BlochVector(2.0 * beta / denom, 0.0, (p + q - 1.0) / denom)
    rho_inf = DensityMatrix(q / denom, beta / denom)
    return ZooEntry(channel, affine, v, _cov(v), rho_inf)
