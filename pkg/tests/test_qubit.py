"""States, Pauli algebra, and the small Hermitian eigensolvers."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pauliwalk.errors import NonHermitianError
from pauliwalk.qubit import (
    PAULI_AXES,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    BlochVector,
    DensityMatrix,
    adjoint,
    bloch_to_density,
    commutator,
    density_to_bloch,
    herm_eigen2,
    herm_eigen4,
    mat_add,
    mat_mul,
    mat_scale,
    mat_sub,
    pauli,
    trace,
)

EPS = [[0, 0, 0], [0, 0, 1], [0, -1, 0]], [[0, 0, -1], [0, 0, 0], [1, 0, 0]], [
    [0, 1, 0],
    [-1, 0, 0],
    [0, 0, 0],
]


def bloch_vectors(max_norm=1.0):
    return (
        st.tuples(
            st.floats(-1, 1, allow_nan=False),
            st.floats(-1, 1, allow_nan=False),
            st.floats(-1, 1, allow_nan=False),
        )
        .map(np.array)
        .filter(lambda r: np.linalg.norm(r) <= max_norm)
    )


class TestPauliAlgebra:
    def test_multiplication_table(self):
        # sigma_a sigma_b = delta_ab I + i sum_c eps_abc sigma_c
        for a in range(3):
            for b in range(3):
                want = (1 if a == b else 0) * np.eye(2) + 1j * sum(
                    EPS[a][b][c] * PAULI_AXES[c] for c in range(3)
                )
                assert np.allclose(PAULI_AXES[a] @ PAULI_AXES[b], want, atol=0)

    def test_hermitian_traceless_involutive(self):
        for s in PAULI_AXES:
            assert np.array_equal(s, s.conj().T)
            assert np.trace(s) == 0
            assert np.array_equal(s @ s, np.eye(2))

    def test_matrices_frozen(self):
        with pytest.raises(ValueError):
            PAULI_X[0, 0] = 5.0

    def test_accessor(self):
        assert np.array_equal(pauli("x"), PAULI_X)
        assert np.array_equal(pauli("y"), PAULI_Y)
        assert np.array_equal(pauli("z"), PAULI_Z)
        assert np.array_equal(pauli("identity"), np.eye(2))
        with pytest.raises(ValueError):
            pauli("w")

    def test_commutators_cyclic(self):
        assert np.allclose(commutator(PAULI_X, PAULI_Y), 2j * PAULI_Z, atol=0)
        assert np.allclose(commutator(PAULI_Y, PAULI_Z), 2j * PAULI_X, atol=0)
        assert np.allclose(commutator(PAULI_Z, PAULI_X), 2j * PAULI_Y, atol=0)

    def test_mat_helpers(self):
        a = np.array([[1, 2j], [0, 1]])
        b = np.array([[0, 1], [1, 0]])
        assert np.array_equal(mat_add(a, b), a + b)
        assert np.array_equal(mat_sub(a, b), a - b)
        assert np.array_equal(mat_mul(a, b), a @ b)
        assert np.array_equal(mat_scale(2j, b), 2j * b)
        assert np.array_equal(adjoint(a), a.conj().T)
        assert trace(a) == 2.0
        with pytest.raises(ValueError):
            mat_mul(np.eye(3), np.eye(3))


class TestBlochVector:
    def test_round_trip(self):
        r = BlochVector(0.1, -0.2, 0.3)
        assert np.array_equal(BlochVector.from_array(r.as_array()).as_array(), r.as_array())
        assert r.norm() == pytest.approx(np.sqrt(0.14))

    def test_rejects_outside_ball(self):
        with pytest.raises(ValueError):
            BlochVector(1.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            BlochVector(np.inf, 0.0, 0.0)
        BlochVector(1.0, 0.0, 0.0)  # boundary is a state


class TestDensityMatrix:
    def test_validation(self):
        with pytest.raises(ValueError):
            DensityMatrix(1.5, 0.0)
        with pytest.raises(ValueError):
            DensityMatrix(0.5, 0.6)  # |beta|^2 > alpha(1-alpha)
        with pytest.raises(ValueError):
            DensityMatrix(np.nan, 0.0)

    def test_from_matrix_guards(self):
        with pytest.raises(ValueError):
            DensityMatrix.from_matrix(np.eye(2))  # trace 2
        with pytest.raises(NonHermitianError):
            DensityMatrix.from_matrix(np.array([[0.5, 0.3], [0.0, 0.5]]))

    def test_to_matrix_round_trip(self):
        rho = DensityMatrix(0.7, 0.1 + 0.2j)
        again = DensityMatrix.from_matrix(rho.to_matrix())
        assert again.alpha == rho.alpha and again.beta == rho.beta

    def test_maximally_mixed(self):
        assert np.array_equal(DensityMatrix.maximally_mixed().to_matrix(), np.eye(2) / 2)

    @given(bloch_vectors())
    @settings(max_examples=100, deadline=None)
    def test_bloch_round_trip(self, r):
        rho = bloch_to_density(BlochVector.from_array(r))
        back = density_to_bloch(rho).as_array()
        assert np.max(np.abs(back - r)) <= 1e-14
        # the state really is (I + r.sigma)/2
        want = 0.5 * (np.eye(2) + sum(r[a] * PAULI_AXES[a] for a in range(3)))
        assert np.max(np.abs(rho.to_matrix() - want)) <= 1e-15


class TestHermEigen2:
    def test_against_numpy(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            m = (g + g.conj().T) / 2
            (e1, p1), (e2, p2) = herm_eigen2(m)
            ref = np.linalg.eigvalsh(m)
            assert e1 >= e2
            assert abs(e1 - ref[1]) <= 1e-12 and abs(e2 - ref[0]) <= 1e-12
            # orthogonal projectors resolving the identity and m
            assert np.max(np.abs(p1 + p2 - np.eye(2))) <= 1e-12
            assert np.max(np.abs(p1 @ p1 - p1)) <= 1e-12
            assert np.max(np.abs(p1 @ p2)) <= 1e-12
            assert np.max(np.abs(e1 * p1 + e2 * p2 - m)) <= 1e-12

    def test_degenerate_spectrum(self):
        (e1, p1), (e2, p2) = herm_eigen2(3.0 * np.eye(2))
        assert e1 == e2 == 3.0
        assert np.array_equal(p1, np.diag([1.0 + 0j, 0.0]))
        assert np.array_equal(p2, np.diag([0.0, 1.0 + 0j]))

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitianError):
            herm_eigen2(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestHermEigen4:
    def test_against_numpy(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            m = (g + g.conj().T) / 2
            got = herm_eigen4(m)
            ref = np.linalg.eigvalsh(m)[::-1]
            assert np.max(np.abs(got - ref)) <= 1e-10
            assert np.all(np.diff(got) <= 0)

    def test_guards(self):
        with pytest.raises(ValueError):
            herm_eigen4(np.eye(3))
        bad = np.eye(4, dtype=complex)
        bad = bad.copy()
        bad[0, 1] = 1.0
        with pytest.raises(NonHermitianError):
            herm_eigen4(bad)
