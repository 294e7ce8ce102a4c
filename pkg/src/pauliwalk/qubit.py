"""
Exact arithmetic for single-qubit states and observables.

Provides the Pauli basis, elementary 2x2 complex matrix operations, the
density-matrix <-> Bloch-vector correspondence, a closed-form Hermitian 2x2
eigendecomposition, and a cyclic-Jacobi 4x4 Hermitian eigensolver. Everything
here is a pure function over immutable values; tolerances are the named
module constants below so every numeric claim in the test suite can point at
a fixed number.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import NonHermitianError

__all__ = [
    "HERMITIAN_TOL",
    "PSD_TOL",
    "ROUNDTRIP_TOL",
    "STATE_NORM_TOL",
    "OFF_DIAG_TOL",
    "JACOBI_MAX_SWEEPS",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "IDENTITY2",
    "pauli",
    "mat_add",
    "mat_sub",
    "mat_mul",
    "mat_scale",
    "adjoint",
    "trace",
    "commutator",
    "DensityMatrix",
    "BlochVector",
    "density_to_bloch",
    "bloch_to_density",
    "herm_eigen2",
    "herm_eigen4",
]

# Hermiticity gate for eigensolver inputs.
HERMITIAN_TOL = 1e-12
# Slack accepted when asserting positive semidefiniteness.
PSD_TOL = 1e-10
# Bound on density <-> Bloch round-trip error.
ROUNDTRIP_TOL = 1e-14
# Bloch vectors are accepted as states up to this excess over unit norm.
STATE_NORM_TOL = 1e-9
# Off-diagonal Frobenius mass at which the Jacobi iteration is converged.
OFF_DIAG_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def _frozen(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    m.setflags(write=False)
    return m


PAULI_X = _frozen([[0, 1], [1, 0]])
PAULI_Y = _frozen([[0, -1j], [1j, 0]])
PAULI_Z = _frozen([[1, 0], [0, -1]])
IDENTITY2 = _frozen([[1, 0], [0, 1]])

_PAULI_BY_TAG = {
    "x": PAULI_X,
    "y": PAULI_Y,
    "z": PAULI_Z,
    "identity": IDENTITY2,
}

# (sigma_1, sigma_2, sigma_3) used whenever an axis is indexed 0..2.
PAULI_AXES = (PAULI_X, PAULI_Y, PAULI_Z)


def pauli(which: str) -> np.ndarray:
    """Return the Pauli matrix for tag 'x' | 'y' | 'z' | 'identity'."""
    try:
        return _PAULI_BY_TAG[which]
    except KeyError:
        raise ValueError(f"unknown Pauli tag {which!r}") from None


def _as_mat2(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    return m


def mat_add(a, b) -> np.ndarray:
    return _as_mat2(a) + _as_mat2(b)


def mat_sub(a, b) -> np.ndarray:
    return _as_mat2(a) - _as_mat2(b)


def mat_mul(a, b) -> np.ndarray:
    return _as_mat2(a) @ _as_mat2(b)


def mat_scale(c: complex, a) -> np.ndarray:
    return complex(c) * _as_mat2(a)


def adjoint(a) -> np.ndarray:
    return _as_mat2(a).conj().T


def trace(a) -> complex:
    return complex(np.trace(_as_mat2(a)))


def commutator(a, b) -> np.ndarray:
    """a @ b - b @ a."""
    a = _as_mat2(a)
    b = _as_mat2(b)
    return a @ b - b @ a


@dataclass(frozen=True)
class BlochVector:
    """Real 3-vector coordinates of a qubit state inside the unit ball."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        n2 = self.x * self.x + self.y * self.y + self.z * self.z
        if not np.isfinite(n2):
            raise ValueError("Bloch components must be finite")
        if n2 > (1.0 + STATE_NORM_TOL) ** 2:
            raise ValueError(f"Bloch vector norm {np.sqrt(n2):.12g} exceeds 1")

    @classmethod
    def from_array(cls, r) -> "BlochVector":
        r = np.asarray(r, dtype=float)
        return cls(float(r[0]), float(r[1]), float(r[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def norm(self) -> float:
        return float(np.sqrt(self.x**2 + self.y**2 + self.z**2))


@dataclass(frozen=True)
class DensityMatrix:
    """
    Qubit state [[alpha, beta], [conj(beta), 1 - alpha]].

    alpha is the top-left population in [0, 1]; beta the top-right coherence
    with |beta|^2 <= alpha (1 - alpha) (positive semidefinite, unit trace).
    """

    alpha: float
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta.real) and np.isfinite(self.beta.imag)):
            raise ValueError("density matrix entries must be finite")
        if not (-STATE_NORM_TOL <= self.alpha <= 1.0 + STATE_NORM_TOL):
            raise ValueError(f"alpha = {self.alpha!r} outside [0, 1]")
        # Same gate as the Bloch-ball norm check: the excess of |beta|^2 over
        # alpha(1-alpha) is (norm^2 - 1)/4.
        excess = abs(self.beta) ** 2 - self.alpha * (1.0 - self.alpha)
        if excess > ((1.0 + STATE_NORM_TOL) ** 2 - 1.0) / 4.0:
            raise ValueError("|beta|^2 exceeds alpha(1-alpha): not positive semidefinite")

    @classmethod
    def from_matrix(cls, m) -> "DensityMatrix":
        m = _as_mat2(m)
        tr = m[0, 0] + m[1, 1]
        if abs(tr - 1.0) > 1e-9:
            raise ValueError(f"trace {tr} != 1")
        if abs(m[0, 1] - np.conj(m[1, 0])) > 1e-9:
            raise NonHermitianError("density matrix must be Hermitian")
        return cls(float(m[0, 0].real), complex(m[0, 1]))

    def to_matrix(self) -> np.ndarray:
        return np.array(
            [[self.alpha, self.beta], [np.conj(self.beta), 1.0 - self.alpha]],
            dtype=np.complex128,
        )

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix":
        return cls(0.5, 0.0)


def density_to_bloch(rho: DensityMatrix) -> BlochVector:
    """Bloch coordinates x = 2 Re(beta), y = -2 Im(beta), z = 2 alpha - 1."""
    return BlochVector(
        2.0 * rho.beta.real,
        -2.0 * rho.beta.imag,
        2.0 * rho.alpha - 1.0,
    )


def bloch_to_density(r: BlochVector) -> DensityMatrix:
    """
    Inverse of :func:`density_to_bloch`.

    :raises ValueError: if the vector norm exceeds 1 + STATE_NORM_TOL
        (enforced by the BlochVector constructor).
    """
    if not isinstance(r, BlochVector):
        r = BlochVector.from_array(r)
    return DensityMatrix(
        alpha=(1.0 + r.z) / 2.0,
        beta=(r.x - 1j * r.y) / 2.0,
    )


def _assert_hermitian(m: np.ndarray, tol: float) -> None:
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise NonHermitianError(f"matrix is not Hermitian within {tol}")


def herm_eigen2(m) -> Tuple[Tuple[float, np.ndarray], Tuple[float, np.ndarray]]:
    """
    Closed-form spectral decomposition of a Hermitian 2x2 matrix.

    :param m: Hermitian 2x2 array (checked within HERMITIAN_TOL).
    :return: ((e1, P1), (e2, P2)) with e1 >= e2, P_i the orthogonal
        eigenprojectors summing to the identity.

    A degenerate spectrum (m proportional to the identity) reports the
    eigenvalue twice with the fixed projectors diag(1,0), diag(0,1), so
    downstream two-point laws see a deterministic fair split.
    """
    m = _as_mat2(m)
    _assert_hermitian(m, HERMITIAN_TOL)
    a = m[0, 0].real
    d = m[1, 1].real
    b = m[0, 1]
    mean = 0.5 * (a + d)
    radius = np.sqrt((0.5 * (a - d)) ** 2 + abs(b) ** 2)
    if radius == 0.0:
        p_hi = np.array([[1, 0], [0, 0]], dtype=np.complex128)
        p_lo = np.array([[0, 0], [0, 1]], dtype=np.complex128)
        return (mean, p_hi), (mean, p_lo)
    e_hi = mean + radius
    e_lo = mean - radius
    # P_hi = (m - e_lo I)/(e_hi - e_lo); P_lo = I - P_hi.
    p_hi = (m - e_lo * np.eye(2)) / (e_hi - e_lo)
    p_lo = np.eye(2, dtype=np.complex128) - p_hi
    return (float(e_hi), p_hi), (float(e_lo), p_lo)


def herm_eigen4(m) -> np.ndarray:
    """
    Eigenvalues of a Hermitian 4x4 matrix by cyclic Jacobi rotations.

    :param m: Hermitian 4x4 array (checked within HERMITIAN_TOL).
    :return: the four real eigenvalues sorted descending.
    :raises JacobiConvergenceError: if the off-diagonal Frobenius mass has
        not dropped below OFF_DIAG_TOL after JACOBI_MAX_SWEEPS sweeps.
    """
    from . import _kernels

    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    _assert_hermitian(m, HERMITIAN_TOL)
    evals = _kernels.jacobi_eigvals4(m[np.newaxis, :, :])
    return evals[0]
