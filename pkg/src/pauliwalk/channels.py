"""
Qubit channel representations and stationary analysis.

A channel lives in one of three forms: a Kraus operator family (with an
explicit convention tag for which side carries the adjoint), the affine
Bloch-ball action r -> T_lin r + t_vec, and the diagonal form
(lambda, t) whose linear part is diag(lambda). Conversions, the Choi
positivity oracle, the closed-form inequality test for the diagonal form,
fixed points, spectral radius, and the limit covariance C = I - v v^T all
live here.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import (
    ChannelFormatError,
    ContractionError,
    NonUniqueFixedPointError,
    NormalizationError,
    PauliwalkError,
)
from .qubit import (
    IDENTITY2,
    PAULI_AXES,
    BlochVector,
    DensityMatrix,
    PSD_TOL,
    adjoint,
    bloch_to_density,
    density_to_bloch,
    herm_eigen2,
    herm_eigen4,
)

# Kraus normalization and the Bloch-ball image check.
KRAUS_NORM_TOL = 1e-10
BALL_TOL = 1e-9
# Below this |det(I - T_lin)| the fixed point is treated as non-unique.
SINGULAR_DET_TOL = 1e-12
FIXED_POINT_RESIDUAL_TOL = 1e-11
# The cubic solver can return a true unit eigenvalue a few ulp off, so the
# geometric-convergence verdict snaps radii within this margin to 1.
RADIUS_ONE_TOL = 1e-12

# All nonzero sign patterns in {-1,0,1}^3, normalized: 6 axis points,
# 12 edge midpoints, 8 corners.
_SPHERE_26 = np.array(
    [p for p in itertools.product((-1.0, 0.0, 1.0), repeat=3) if any(p)]
)
_SPHERE_26 /= np.sqrt(np.sum(_SPHERE_26**2, axis=1))[:, None]
_SPHERE_26.setflags(write=False)

# Matrix units E_ij in the computational basis.
_MATRIX_UNITS = tuple(
    tuple(np.eye(1, 4, 2 * i + j).reshape(2, 2).astype(np.complex128) for j in range(2))
    for i in range(2)
)


class Convention(enum.Enum):
    """Which side of the sandwich carries the adjoint in Kraus application."""

    LEFT_ADJOINT = "left_adjoint"
    RIGHT_ADJOINT = "right_adjoint"


@dataclass(frozen=True)
class KrausChannel:
    """
    Kraus family of 1..4 operators on a qubit.

    LEFT_ADJOINT applies rho -> sum L_i* rho L_i and requires
    sum L_i L_i* = I; RIGHT_ADJOINT applies rho -> sum L_i rho L_i* and
    requires sum L_i* L_i = I. The declared normalization is checked at
    construction within KRAUS_NORM_TOL.
    """

    ops: tuple
    convention: Convention

    def __post_init__(self):
        ops = tuple(np.array(op, dtype=np.complex128) for op in self.ops)
        if not 1 <= len(ops) <= 4:
            raise NormalizationError(f"expected 1..4 Kraus operators, got {len(ops)}")
        for op in ops:
            if op.shape != (2, 2):
                raise NormalizationError(f"Kraus operator has shape {op.shape}, not (2, 2)")
            if not np.all(np.isfinite(op.view(np.float64))):
                raise NormalizationError("Kraus operator entries must be finite")
            op.setflags(write=False)
        object.__setattr__(self, "ops", ops)
        if self.convention is Convention.LEFT_ADJOINT:
            total = sum(op @ adjoint(op) for op in ops)
        else:
            total = sum(adjoint(op) @ op for op in ops)
        defect = np.max(np.abs(total - IDENTITY2))
        if defect > KRAUS_NORM_TOL:
            raise NormalizationError(
                f"{self.convention.value} normalization defect {defect:.3e} "
                f"exceeds {KRAUS_NORM_TOL}"
            )


@dataclass(frozen=True)
class AffineChannel:
    """
    Affine Bloch action r -> T_lin r + t_vec.

    Construction verifies the image of the unit ball stays inside the
    closed unit ball, sampled on a 26-point sphere grid with tolerance
    BALL_TOL.
    """

    T_lin: np.ndarray
    t_vec: np.ndarray

    def __post_init__(self):
        T = np.array(self.T_lin, dtype=float)
        t = np.array(self.t_vec, dtype=float)
        if T.shape != (3, 3):
            raise ContractionError(f"T_lin has shape {T.shape}, not (3, 3)")
        if t.shape != (3,):
            raise ContractionError(f"t_vec has shape {t.shape}, not (3,)")
        if not (np.all(np.isfinite(T)) and np.all(np.isfinite(t))):
            raise ContractionError("affine channel entries must be finite")
        images = _SPHERE_26 @ T.T + t
        worst = float(np.max(np.sqrt(np.sum(images**2, axis=1))))
        if worst > 1.0 + BALL_TOL:
            raise ContractionError(
                f"unit ball image reaches norm {worst:.12g} > 1: not a channel"
            )
        T.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "T_lin", T)
        object.__setattr__(self, "t_vec", t)


@dataclass(frozen=True)
class KRSWChannel:
    """
    Diagonal reduced form: linear part diag(lam), translation tvec.

    Nothing is validated beyond shape and finiteness; complete positivity
    is a queried property (krsw_cp_conditions / is_cp_choi).
    """

    lam: np.ndarray
    tvec: np.ndarray

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float)
        tvec = np.array(self.tvec, dtype=float)
        if lam.shape != (3,) or tvec.shape != (3,):
            raise ChannelFormatError("lambda and t must be real 3-vectors")
        if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(tvec))):
            raise ChannelFormatError("lambda and t must be finite")
        lam.setflags(write=False)
        tvec.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "tvec", tvec)


Channel = Union[KrausChannel, AffineChannel, KRSWChannel]


class AssumptionA(enum.Enum):
    """Verdict on the stationary-convergence hypothesis."""

    HOLDS_GEOMETRIC = "HoldsGeometric"
    FAILS_SPECTRAL_RADIUS_ONE = "FailsSpectralRadiusOne"
    NON_UNIQUE_FIXED_POINT = "NonUniqueFixedPoint"


@dataclass(frozen=True)
class ChannelAnalysis:
    """Stationary state, its Bloch vector, limit covariance, and verdict."""

    rho_inf: DensityMatrix
    v: BlochVector
    covariance: np.ndarray
    spectral_radius: float
    assumption_a: AssumptionA

    def __post_init__(self):
        cov = np.array(self.covariance, dtype=float)
        cov.setflags(write=False)
        object.__setattr__(self, "covariance", cov)


def _kraus_apply_mat(ch: KrausChannel, m: np.ndarray) -> np.ndarray:
    if ch.convention is Convention.LEFT_ADJOINT:
        return sum(adjoint(op) @ m @ op for op in ch.ops)
    return sum(op @ m @ adjoint(op) for op in ch.ops)


def _affine_apply_mat(T: np.ndarray, t: np.ndarray, m: np.ndarray) -> np.ndarray:
    # Complex-linear extension off the state space: decompose in the Pauli
    # basis, map I -> I + t.sigma and sigma_b -> sum_a T[a,b] sigma_a.
    c0 = (m[0, 0] + m[1, 1]) / 2.0
    out = c0 * IDENTITY2.astype(np.complex128)
    for a in range(3):
        coeff = c0 * t[a]
        for b in range(3):
            cb = np.trace(PAULI_AXES[b] @ m) / 2.0
            coeff = coeff + cb * T[a, b]
        out = out + coeff * PAULI_AXES[a]
    return out


def _linear_params(ch: Channel) -> tuple:
    """Raw (T, t) arrays of the Bloch action, skipping validation."""
    if isinstance(ch, AffineChannel):
        return ch.T_lin, ch.t_vec
    if isinstance(ch, KRSWChannel):
        return np.diag(ch.lam), ch.tvec
    raise TypeError(f"not an affine-form channel: {type(ch).__name__}")


def apply(ch: Channel, rho: DensityMatrix) -> DensityMatrix:
    """One application of the channel to a state, in the channel's own form."""
    if isinstance(ch, KrausChannel):
        return DensityMatrix.from_matrix(_kraus_apply_mat(ch, rho.to_matrix()))
    if isinstance(ch, AffineChannel):
        r = density_to_bloch(rho).as_array()
        return bloch_to_density(ch.T_lin @ r + ch.t_vec)
    if isinstance(ch, KRSWChannel):
        r = density_to_bloch(rho).as_array()
        return bloch_to_density(ch.lam * r + ch.tvec)
    raise TypeError(f"not a channel: {type(ch).__name__}")


def kraus_to_affine(ch: KrausChannel) -> AffineChannel:
    """
    Affine Bloch form of a Kraus channel.

    T_lin[a][b] = Tr(sigma_a Phi(sigma_b))/2 and
    t_vec[a] = Tr(sigma_a Phi(I))/2.
    """
    phi_id = _kraus_apply_mat(ch, IDENTITY2.astype(np.complex128))
    phi_pauli = [_kraus_apply_mat(ch, s) for s in PAULI_AXES]
    T = np.empty((3, 3))
    t = np.empty(3)
    for a in range(3):
        t[a] = np.real(np.trace(PAULI_AXES[a] @ phi_id)) / 2.0
        for b in range(3):
            T[a, b] = np.real(np.trace(PAULI_AXES[a] @ phi_pauli[b])) / 2.0
    return AffineChannel(T, t)


def krsw_to_affine(ch: KRSWChannel) -> AffineChannel:
    """Embed the diagonal form as T_lin = diag(lam), t_vec = tvec."""
    return AffineChannel(np.diag(ch.lam), ch.tvec)


def as_affine(ch: Channel) -> AffineChannel:
    """The affine Bloch form of any channel representation."""
    if isinstance(ch, AffineChannel):
        return ch
    if isinstance(ch, KrausChannel):
        return kraus_to_affine(ch)
    if isinstance(ch, KRSWChannel):
        return krsw_to_affine(ch)
    raise TypeError(f"not a channel: {type(ch).__name__}")


def choi(ch: Channel) -> np.ndarray:
    """
    Choi matrix: the 4x4 block matrix with (i, j) block Phi(E_ij).

    Hermitian with trace 2; positive semidefinite exactly when the map is
    completely positive. For the affine and diagonal forms the blocks come
    from the complex-linear extension of the Bloch action, reading the
    parameters directly (no contraction validation).
    """
    out = np.empty((4, 4), dtype=np.complex128)
    if isinstance(ch, KrausChannel):
        phi = lambda m: _kraus_apply_mat(ch, m)
    else:
        T, t = _linear_params(ch)
        phi = lambda m: _affine_apply_mat(T, t, m)
    for i in range(2):
        for j in range(2):
            out[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = phi(_MATRIX_UNITS[i][j])
    return out


def is_cp_choi(ch: Channel, tol: float = PSD_TOL) -> bool:
    """True iff the minimum Choi eigenvalue is >= -tol."""
    evals = herm_eigen4(choi(ch))
    return bool(evals[3] >= -tol)


@dataclass(frozen=True)
class KRSWConditionReport:
    """
    Outcome of the closed-form CP inequalities for the diagonal form.

    applicable is False when |t3| + |lam3| > 1, in which case the three
    condition fields and the verdict are None.
    """

    applicable: bool
    cond1: Optional[bool]
    cond2: Optional[bool]
    cond3: Optional[bool]
    verdict: Optional[bool]


def _krsw_conditions_arrays(lam: np.ndarray, tvec: np.ndarray) -> tuple:
    """
    Vectorized CP inequalities over parameter rows.

    Returns boolean arrays (applicable, cond1, cond2, cond3). The +- signs
    in the first two conditions are evaluated for both choices with the
    numerator and denominator signs linked, and every choice must hold.
    """
    l1, l2, l3 = lam[:, 0], lam[:, 1], lam[:, 2]
    t1, t2, t3 = tvec[:, 0], tvec[:, 1], tvec[:, 2]
    applicable = np.abs(t3) + np.abs(l3) <= 1.0
    t12 = t1 * t1 + t2 * t2
    cond1 = np.ones(lam.shape[0], dtype=bool)
    cond2 = np.ones(lam.shape[0], dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        for s in (1.0, -1.0):
            hi1 = (1.0 + l3) ** 2 - t3 * t3
            term1 = np.where(t12 == 0.0, 0.0, t12 * (1.0 + l3 + s * t3) / (1.0 - l3 + s * t3))
            mid1 = hi1 - term1
            cond1 &= ((l1 + l2) ** 2 <= mid1) & (mid1 <= hi1)
            hi2 = (1.0 - l3) ** 2 - t3 * t3
            term2 = np.where(t12 == 0.0, 0.0, t12 * (1.0 - l3 + s * t3) / (1.0 + l3 + s * t3))
            mid2 = hi2 - term2
            cond2 &= ((l1 - l2) ** 2 <= mid2) & (mid2 <= hi2)
    lhs = (1.0 - (l1**2 + l2**2 + l3**2) - (t1**2 + t2**2 + t3**2)) ** 2
    rhs = 4.0 * (
        l1**2 * (t1**2 + l2**2)
        + l2**2 * (t2**2 + l3**2)
        + l3**2 * (t3**2 + l1**2)
        - 2.0 * l1 * l2 * l3
    )
    cond3 = lhs >= rhs
    return applicable, cond1, cond2, cond3


def krsw_cp_conditions(ch: KRSWChannel) -> KRSWConditionReport:
    """
    Closed-form complete-positivity test for the diagonal form.

    Only applicable when |t3| + |lam3| <= 1; outside that region the report
    carries applicable=False and no verdict.
    """
    lam = ch.lam[np.newaxis, :]
    tvec = ch.tvec[np.newaxis, :]
    applicable, c1, c2, c3 = _krsw_conditions_arrays(lam, tvec)
    if not applicable[0]:
        return KRSWConditionReport(False, None, None, None, None)
    c1, c2, c3 = bool(c1[0]), bool(c2[0]), bool(c3[0])
    return KRSWConditionReport(True, c1, c2, c3, c1 and c2 and c3)


def _krsw_choi_batch(lam: np.ndarray, tvec: np.ndarray) -> np.ndarray:
    """Choi matrices of diagonal-form parameter rows, shape (m, 4, 4)."""
    m = lam.shape[0]
    l1, l2, l3 = lam[:, 0], lam[:, 1], lam[:, 2]
    t1, t2, t3 = tvec[:, 0], tvec[:, 1], tvec[:, 2]
    out = np.zeros((m, 4, 4), dtype=np.complex128)
    coh = (t1 - 1j * t2) / 2.0
    out[:, 0, 0] = (1.0 + t3 + l3) / 2.0
    out[:, 0, 1] = coh
    out[:, 1, 0] = np.conj(coh)
    out[:, 1, 1] = (1.0 - t3 - l3) / 2.0
    out[:, 2, 2] = (1.0 + t3 - l3) / 2.0
    out[:, 2, 3] = coh
    out[:, 3, 2] = np.conj(coh)
    out[:, 3, 3] = (1.0 - t3 + l3) / 2.0
    out[:, 0, 3] = (l1 + l2) / 2.0
    out[:, 1, 2] = (l1 - l2) / 2.0
    out[:, 2, 1] = (l1 - l2) / 2.0
    out[:, 3, 0] = (l1 + l2) / 2.0
    return out


def _det3(a: np.ndarray) -> float:
    return float(
        a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
        - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
        + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
    )


def fixed_point(ch: AffineChannel) -> BlochVector:
    """
    The unique solution of (I - T_lin) r = t_vec.

    :raises NonUniqueFixedPointError: when |det(I - T_lin)| is below
        SINGULAR_DET_TOL (a whole eigenspace of stationary directions), or
        when the solve is too ill-conditioned to meet the residual bound.
    """
    A = np.eye(3) - ch.T_lin
    det = _det3(A)
    if abs(det) < SINGULAR_DET_TOL:
        raise NonUniqueFixedPointError(
            f"|det(I - T_lin)| = {abs(det):.3e} < {SINGULAR_DET_TOL}: "
            "fixed point is not unique"
        )
    r = np.linalg.solve(A, ch.t_vec)
    residual = float(np.sqrt(np.sum((A @ r - ch.t_vec) ** 2)))
    if residual >= FIXED_POINT_RESIDUAL_TOL:
        raise NonUniqueFixedPointError(
            f"fixed-point residual {residual:.3e} exceeds {FIXED_POINT_RESIDUAL_TOL}"
        )
    return BlochVector.from_array(r)


def _cubic_roots(a2: float, a1: float, a0: float) -> np.ndarray:
    """Complex roots of x^3 + a2 x^2 + a1 x + a0 (Cardano)."""
    p = a1 - a2 * a2 / 3.0
    q = 2.0 * a2**3 / 27.0 - a2 * a1 / 3.0 + a0
    shift = -a2 / 3.0
    disc = complex((q / 2.0) ** 2 + (p / 3.0) ** 3)
    root = np.sqrt(disc)
    cand = (-q / 2.0 + root, -q / 2.0 - root)
    u3 = max(cand, key=abs)
    if abs(u3) == 0.0:
        # p = q = 0: triple root at the shift.
        return np.full(3, shift, dtype=np.complex128)
    u = u3 ** (1.0 / 3.0)
    v = -p / (3.0 * u)
    omega = np.exp(2j * np.pi / 3.0)
    ks = np.array([1.0, omega, omega.conjugate()])
    return u * ks + v * ks.conjugate() + shift


def spectral_radius(T_lin: np.ndarray) -> float:
    """
    Largest eigenvalue modulus of the 3x3 linear part.

    Eigenvalues are the roots of the characteristic cubic, solved in closed
    form with complex arithmetic.
    """
    T = np.asarray(T_lin, dtype=float)
    tr = T[0, 0] + T[1, 1] + T[2, 2]
    minors = (
        T[1, 1] * T[2, 2] - T[1, 2] * T[2, 1]
        + T[0, 0] * T[2, 2] - T[0, 2] * T[2, 0]
        + T[0, 0] * T[1, 1] - T[0, 1] * T[1, 0]
    )
    roots = _cubic_roots(-tr, minors, -_det3(T))
    return float(np.max(np.abs(roots)))


def _trajectory_limit(aff: AffineChannel, rho0: DensityMatrix) -> BlochVector:
    """
    Limit of the orbit T^n r0 + ... when (I - T) is singular.

    Squares the affine map, (A, b) -> (A^2, A b + b), until it stops moving,
    then re-checks a single original step to reject period-2 oscillation.
    """
    A = np.array(aff.T_lin)
    b = np.array(aff.t_vec)
    for _ in range(100):
        A2 = A @ A
        b2 = A @ b + b
        # A unit eigenvalue often rounds one ulp high; squaring doubles that
        # error each pass, so the reachable floor is ~100 ulp, not eps.
        scale = max(1.0, float(np.max(np.abs(A2))), float(np.max(np.abs(b2))))
        delta = max(np.max(np.abs(A2 - A)), np.max(np.abs(b2 - b)))
        A, b = A2, b2
        if delta <= 1e-13 * scale:
            break
    else:
        raise NonUniqueFixedPointError(
            "orbit of the initial state does not converge (no stationary limit)"
        )
    r = A @ density_to_bloch(rho0).as_array() + b
    step = aff.T_lin @ r + aff.t_vec
    if np.max(np.abs(step - r)) > 1e-9:
        raise NonUniqueFixedPointError(
            "orbit of the initial state oscillates (no stationary limit)"
        )
    return BlochVector.from_array(r)


def analyze(ch: Channel, rho0: Optional[DensityMatrix] = None) -> ChannelAnalysis:
    """
    Stationary state, Bloch vector v, covariance C = I - v v^T, spectral
    radius, and the convergence verdict.

    When (I - T_lin) is singular the stationary state depends on the
    initial one; rho0 then selects the orbit whose limit is reported.

    :raises NonUniqueFixedPointError: singular (I - T_lin) without rho0, or
        an orbit with no limit.
    """
    aff = as_affine(ch)
    radius = spectral_radius(aff.T_lin)
    det = _det3(np.eye(3) - aff.T_lin)
    if abs(det) >= SINGULAR_DET_TOL:
        v = fixed_point(aff)
    elif rho0 is not None:
        v = _trajectory_limit(aff, rho0)
    else:
        raise NonUniqueFixedPointError(
            "fixed point is not unique; supply an initial state to select an orbit"
        )
    va = v.as_array()
    covariance = np.eye(3) - np.outer(va, va)
    verdict = (
        AssumptionA.HOLDS_GEOMETRIC
        if radius < 1.0 - RADIUS_ONE_TOL
        else AssumptionA.FAILS_SPECTRAL_RADIUS_ONE
    )
    return ChannelAnalysis(
        rho_inf=bloch_to_density(v),
        v=v,
        covariance=covariance,
        spectral_radius=radius,
        assumption_a=verdict,
    )


def iterate(ch: Channel, rho0: DensityMatrix, n: int) -> list:
    """The trajectory [rho0, Phi(rho0), ..., Phi^n(rho0)]."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    out = [rho0]
    for _ in range(n):
        out.append(apply(ch, out[-1]))
    return out


def random_kraus_channel(seed: int, count: int, convention: Convention) -> KrausChannel:
    """
    A deterministic random channel with `count` Kraus operators.

    Draws complex Gaussian matrices G_i, forms S as the convention's
    normalization sum of the G_i, and whitens with S^(-1/2) on the side
    that makes the normalization exact.
    """
    if not 1 <= count <= 4:
        raise ValueError(f"count must be in 1..4, got {count}")
    rng = np.random.default_rng(seed)
    for _ in range(8):
        G = rng.normal(size=(count, 2, 2)) + 1j * rng.normal(size=(count, 2, 2))
        if convention is Convention.LEFT_ADJOINT:
            S = sum(g @ adjoint(g) for g in G)
        else:
            S = sum(adjoint(g) @ g for g in G)
        (e_hi, p_hi), (e_lo, p_lo) = herm_eigen2(S)
        if e_lo < 1e-12:
            continue
        inv_sqrt = p_hi / np.sqrt(e_hi) + p_lo / np.sqrt(e_lo)
        if convention is Convention.LEFT_ADJOINT:
            ops = [inv_sqrt @ g for g in G]
        else:
            ops = [g @ inv_sqrt for g in G]
        return KrausChannel(tuple(ops), convention)
    raise NormalizationError("normalization sum S stayed singular after 8 draws")


def parse_channel_spec(record) -> Channel:
    """
    Build a channel from a specification record (dict or JSON text).

    Record types: kraus (convention + ops as [[re, im] x 2] x 2 lists),
    affine (T, t), krsw (lambda, t), named (name + params).

    :raises ChannelFormatError: malformed record of any kind.
    """
    if isinstance(record, (str, bytes)):
        try:
            record = json.loads(record)
        except json.JSONDecodeError as exc:
            raise ChannelFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(record, dict):
        raise ChannelFormatError(f"channel spec must be an object, got {type(record).__name__}")
    kind = record.get("type")
    try:
        if kind == "kraus":
            return _parse_kraus(record)
        if kind == "affine":
            T = _real_array(record, "T", (3, 3))
            t = _real_array(record, "t", (3,))
            return AffineChannel(T, t)
        if kind == "krsw":
            lam = _real_array(record, "lambda", (3,))
            t = _real_array(record, "t", (3,))
            return KRSWChannel(lam, t)
        if kind == "named":
            return _parse_named(record)
    except PauliwalkError:
        raise
    except (TypeError, KeyError, ValueError) as exc:
        raise ChannelFormatError(f"malformed {kind} channel spec: {exc}") from exc
    raise ChannelFormatError(f"unknown channel spec type: {kind!r}")


def _real_array(record: dict, key: str, shape: tuple) -> np.ndarray:
    if key not in record:
        raise ChannelFormatError(f"channel spec is missing field {key!r}")
    try:
        arr = np.array(record[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ChannelFormatError(f"field {key!r} is not numeric: {exc}") from exc
    if arr.shape != shape:
        raise ChannelFormatError(f"field {key!r} has shape {arr.shape}, expected {shape}")
    return arr


def _parse_kraus(record: dict) -> KrausChannel:
    tag = record.get("convention")
    try:
        convention = Convention(tag)
    except ValueError:
        raise ChannelFormatError(f"unknown convention: {tag!r}") from None
    raw_ops = record.get("ops")
    if not isinstance(raw_ops, (list, tuple)) or not raw_ops:
        raise ChannelFormatError("kraus spec needs a nonempty 'ops' list")
    ops = []
    for raw in raw_ops:
        arr = np.array(raw, dtype=float)
        if arr.shape != (2, 2, 2):
            raise ChannelFormatError(
                f"each op must be a 2x2 grid of [re, im] pairs, got shape {arr.shape}"
            )
        ops.append(arr[..., 0] + 1j * arr[..., 1])
    return KrausChannel(tuple(ops), convention)


def _parse_named(record: dict) -> KrausChannel:
    from . import zoo

    constructors = {
        "depolarizing": (zoo.depolarizing, ("p",)),
        "phase_damping": (zoo.phase_damping, ("p",)),
        "amplitude_damping": (zoo.amplitude_damping, ("p",)),
        "trigonometric": (zoo.trigonometric, ("u", "v")),
        "markov": (zoo.markov_chain, ("p", "q")),
    }
    name = record.get("name")
    if name not in constructors:
        raise ChannelFormatError(f"unknown named channel: {name!r}")
    build, keys = constructors[name]
    params = record.get("params")
    if not isinstance(params, dict):
        raise ChannelFormatError("named channel spec needs a 'params' object")
    missing = [k for k in keys if k not in params]
    if missing:
        raise ChannelFormatError(f"named channel {name} is missing params {missing}")
    extra = [k for k in params if k not in keys]
    if extra:
        raise ChannelFormatError(f"named channel {name} got unknown params {extra}")
    try:
        args = [float(params[k]) for k in keys]
    except (TypeError, ValueError) as exc:
        raise ChannelFormatError(f"named channel params must be numbers: {exc}") from exc
    try:
        return build(*args).channel
    except ValueError as exc:
        raise ChannelFormatError(f"named channel {name}: {exc}") from exc


def channel_to_record(ch: Channel) -> dict:
    """The specification record of a channel (inverse of parse_channel_spec)."""
    if isinstance(ch, KrausChannel):
        ops = [
            [[[float(e.real), float(e.imag)] for e in row] for row in op]
            for op in ch.ops
        ]
        return {"type": "kraus", "convention": ch.convention.value, "ops": ops}
    if isinstance(ch, AffineChannel):
        return {
            "type": "affine",
            "T": [[float(e) for e in row] for row in ch.T_lin],
            "t": [float(e) for e in ch.t_vec],
        }
    if isinstance(ch, KRSWChannel):
        return {
            "type": "krsw",
            "lambda": [float(e) for e in ch.lam],
            "t": [float(e) for e in ch.tvec],
        }
    raise TypeError(f"not a channel: {type(ch).__name__}")
