"""
Exact finite-n statistics of the collective walk observables.

A walk ships a qubit through the channel n times; site k carries the state
Phi^k(rho0). Any fixed direction nu gives each site a two-valued observable
nu.sigma - center*I, so every collective sum is a Poisson-binomial variable
computed exactly by dynamic programming, with no sampling anywhere:

  * site_laws / exact_distribution / exact_moments: the per-site Bernoulli
    parameters and the exact lattice law and raw moments of the sum;
  * clt_diagnostic: Kolmogorov-Smirnov distance between the exact law of the
    n^(-1/2)-scaled sum and its Gaussian limit;
  * lambda_n / lambda_limit / rate_function / legendre_numeric /
    ldp_diagnostic: the scaled cumulant generating function, its limit, the
    large-deviation rate function and the exact upper-tail comparison;
  * word_expectation / symmetrized_expectation / wick_moment: ordered and
    symmetrized expectations of products of collective observables, and the
    Gaussian (Wick) limits they converge to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import erfc

from . import _kernels
from .channels import Channel, analyze, as_affine
from .errors import (
    DegenerateDirectionError,
    DegreeOverflowError,
    SaturationError,
    WindowError,
)
from .qubit import (
    IDENTITY2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    BlochVector,
    DensityMatrix,
    density_to_bloch,
)

# Window endpoints within this of an integer lattice point snap onto it, so
# t-grids built by repeated addition of 0.05 etc. still land on exact sites.
GRID_SNAP_TOL = 1e-9
# Per-site probabilities may stray this far outside [0, 1] before SiteLaw
# rejects them; smaller excursions are rounding of <nu, r>/|nu| and are
# clipped.
PROB_EXCURSION_TOL = 1e-9
MAX_WORD_DEGREE = 8
MAX_SYMMETRIZED_DEGREE = 6
MAX_MOMENT_ORDER = 12
# Tilt magnitude cap for the Legendre bracket search: beyond this the
# maximizer is escaping to infinity, which happens exactly when |x| >= |nu|.
BRACKET_CAP = 2.0**60
# A direction is degenerate when |<nu, v>| reaches |nu| up to this relative
# margin. Stationary vectors come out of a linear solve, so an exactly
# degenerate channel can report |<nu,v>| = |nu|(1 - eps); within the margin
# the rate function exceeds ~25 everywhere off the mean, which is
# indistinguishable from +inf at any usable n.
DIRECTION_DEGENERACY_TOL = 1e-12

_PAULI = (PAULI_X, PAULI_Y, PAULI_Z)


def _floor_snapped(x: float) -> int:
    """Integer part with snap: values within GRID_SNAP_TOL of an integer
    round to it instead of flooring one site short."""
    k = round(x)
    if abs(x - k) <= GRID_SNAP_TOL:
        return int(k)
    return int(math.floor(x))


@dataclass(frozen=True)
class Direction:
    """
    A site observable nu.sigma - center*I.

    The eigenvalues are a_plus = |nu| - center and a_minus = -|nu| - center;
    center 0 gives the raw collective sums, center <nu, v> the ones centered
    at the stationary mean.
    """

    nu: np.ndarray
    center: float = 0.0

    def __post_init__(self) -> None:
        nu = np.asarray(self.nu, dtype=float).reshape(3).copy()
        if not np.all(np.isfinite(nu)):
            raise ValueError("direction must be finite")
        if float(np.linalg.norm(nu)) == 0.0:
            raise ValueError("direction must be a nonzero 3-vector")
        nu.setflags(write=False)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "center", float(self.center))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.nu))

    @property
    def a_plus(self) -> float:
        return self.norm - self.center

    @property
    def a_minus(self) -> float:
        return -self.norm - self.center

    def matrix(self) -> np.ndarray:
        """The observable as a 2x2 Hermitian matrix."""
        m = (
            self.nu[0] * PAULI_X
            + self.nu[1] * PAULI_Y
            + self.nu[2] * PAULI_Z
            - self.center * IDENTITY2
        )
        m.setflags(write=False)
        return m


@dataclass(frozen=True)
class Window:
    """
    Half-open time window (t0, t1], discretized to sites
    floor(n*t0)+1 .. floor(n*t1).
    """

    t0: float
    t1: float

    def __post_init__(self) -> None:
        t0 = float(self.t0)
        t1 = float(self.t1)
        if not (math.isfinite(t0) and math.isfinite(t1)):
            raise WindowError("window endpoints must be finite")
        if t0 < 0.0:
            raise WindowError(f"window start must be >= 0, got {t0}")
        if not t1 > t0:
            raise WindowError(f"window needs t1 > t0, got ({t0}, {t1}]")
        object.__setattr__(self, "t0", t0)
        object.__setattr__(self, "t1", t1)

    def sites(self, n: int) -> Tuple[int, int]:
        """First and last site index (1-based, inclusive) at size n."""
        return _floor_snapped(n * self.t0) + 1, _floor_snapped(n * self.t1)

    def on_grid(self, n: int) -> bool:
        """Whether both endpoints land on exact multiples of 1/n."""
        return (
            abs(n * self.t0 - round(n * self.t0)) <= GRID_SNAP_TOL
            and abs(n * self.t1 - round(n * self.t1)) <= GRID_SNAP_TOL
        )


@dataclass(frozen=True)
class WalkSpec:
    """A channel, an initial state, and the number of sites."""

    channel: Channel
    rho0: DensityMatrix
    n: int

    def __post_init__(self) -> None:
        n = int(self.n)
        if n < 1:
            raise ValueError(f"site count must be >= 1, got {n}")
        object.__setattr__(self, "n", n)


@dataclass(frozen=True)
class SiteLaw:
    """
    Heterogeneous two-point site laws over a window.

    Site k takes the value a_plus with probability probs[k] and a_minus
    otherwise; a_plus > a_minus always.
    """

    a_plus: float
    a_minus: float
    probs: np.ndarray

    def __post_init__(self) -> None:
        a_plus = float(self.a_plus)
        a_minus = float(self.a_minus)
        if not a_plus > a_minus:
            raise ValueError(f"need a_plus > a_minus, got {a_plus} <= {a_minus}")
        probs = np.asarray(self.probs, dtype=float).reshape(-1).copy()
        if probs.shape[0] < 1:
            raise ValueError("site law needs at least one site")
        if np.any(probs < -PROB_EXCURSION_TOL) or np.any(
            probs > 1.0 + PROB_EXCURSION_TOL
        ):
            raise ValueError("site probabilities stray outside [0, 1]")
        np.clip(probs, 0.0, 1.0, out=probs)
        probs.setflags(write=False)
        object.__setattr__(self, "a_plus", a_plus)
        object.__setattr__(self, "a_minus", a_minus)
        object.__setattr__(self, "probs", probs)

    @property
    def site_count(self) -> int:
        return int(self.probs.shape[0])

    def mean(self) -> float:
        """Exact mean of the sum of the site outcomes."""
        return float(
            np.sum(self.probs * self.a_plus + (1.0 - self.probs) * self.a_minus)
        )


@dataclass(frozen=True)
class LatticeDistribution:
    """Exact law on the lattice offset + s*step, s = 0..len(weights)-1."""

    offset: float
    step: float
    weights: np.ndarray

    def __post_init__(self) -> None:
        step = float(self.step)
        if not step > 0.0:
            raise ValueError(f"lattice step must be positive, got {step}")
        weights = np.asarray(self.weights, dtype=float).reshape(-1).copy()
        if np.any(weights < 0.0):
            raise ValueError("distribution weights must be nonnegative")
        total = float(np.sum(weights))
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {total}, not 1")
        weights.setflags(write=False)
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "step", step)
        object.__setattr__(self, "weights", weights)

    def values(self) -> np.ndarray:
        return self.offset + self.step * np.arange(self.weights.shape[0])

    def mean(self) -> float:
        return float(np.dot(self.values(), self.weights))


@dataclass(frozen=True)
class WordSpec:
    """An ordered product of collective observables, one (direction, window)
    per letter, carrying the n^(-d/2) scaling of degree d."""

    letters: Tuple[Tuple[Direction, Window], ...]

    def __post_init__(self) -> None:
        letters = tuple((d, w) for d, w in self.letters)
        if len(letters) < 1:
            raise ValueError("word needs at least one letter")
        if len(letters) > MAX_WORD_DEGREE:
            raise DegreeOverflowError(
                f"word degree {len(letters)} exceeds the cap {MAX_WORD_DEGREE}"
            )
        object.__setattr__(self, "letters", letters)

    @property
    def degree(self) -> int:
        return len(self.letters)


@dataclass(frozen=True)
class RateFunction:
    """
    The large-deviation rate data for direction nu at stationary vector v.

    Houses |nu| and the limiting mean <nu, v>; the rate is finite on
    [-|nu|, |nu|] and +inf outside.
    """

    nu: np.ndarray
    v: BlochVector

    def __post_init__(self) -> None:
        nu = np.asarray(self.nu, dtype=float).reshape(3).copy()
        if float(np.linalg.norm(nu)) == 0.0:
            raise ValueError("direction must be a nonzero 3-vector")
        nu.setflags(write=False)
        object.__setattr__(self, "nu", nu)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.nu))

    @property
    def mean(self) -> float:
        return float(np.dot(self.nu, self.v.as_array()))


@dataclass(frozen=True)
class CLTReport:
    """Kolmogorov-Smirnov distance of the exact scaled law against its
    Gaussian target; degenerate flags a collapsed (zero-variance) limit,
    where ks_distance is NaN."""

    ks_distance: float
    target_variance: float
    degenerate: bool


@dataclass(frozen=True)
class LDPReport:
    """Exact upper-tail decay rate versus the limiting rate function."""

    empirical_rate: float
    limit_rate: float


@dataclass(frozen=True)
class CommutatorReport:
    """
    Per-site and collective commutation relations at stationary vector v.

    The per-site identities [nu_a.sigma - v_a, nu_b.sigma - v_b] = 2i sigma_c
    hold exactly (cyclic a, b, c); the collective identity carries the scalar
    term 2i * (floor(nt)/n) * v_c, which the idealized form writes as
    2i*t*v_c. Truth value is the per-site check.
    """

    per_site_ok: bool
    per_site_error: float
    floor_ratio: float
    exact_coefficients: np.ndarray
    nominal_coefficients: np.ndarray

    def __bool__(self) -> bool:
        return self.per_site_ok


def bloch_trajectory(spec: WalkSpec) -> np.ndarray:
    """
    Bloch vectors of the site states Phi^k(rho0), k = 1..n.

    :return: array of shape (n, 3); row k-1 belongs to site k.
    """
    aff = as_affine(spec.channel)
    T = aff.T_lin
    t = aff.t_vec
    r = density_to_bloch(spec.rho0).as_array()
    out = np.empty((spec.n, 3))
    for k in range(spec.n):
        r = T @ r + t
        out[k] = r
    return out


def _window_slice(spec: WalkSpec, window: Window) -> Tuple[int, int]:
    lo, hi = window.sites(spec.n)
    if hi < lo:
        raise WindowError(
            f"window ({window.t0}, {window.t1}] holds no sites at n={spec.n}"
        )
    if hi > spec.n:
        raise WindowError(
            f"window ({window.t0}, {window.t1}] extends past site {spec.n}"
        )
    return lo, hi


def site_laws(spec: WalkSpec, direction: Direction, window: Window) -> SiteLaw:
    """
    Two-point laws of the direction observable on the window's sites.

    p_k = (1 + <nu, r_k>/|nu|) / 2 with r_k the Bloch vector of Phi^k(rho0);
    the observable's eigenvalues are +-|nu| - center.

    :raises WindowError: the window holds no sites, or reaches past site n.
    """
    lo, hi = _window_slice(spec, window)
    traj = bloch_trajectory(spec)[lo - 1 : hi]
    norm = direction.norm
    probs = 0.5 * (1.0 + traj @ direction.nu / norm)
    return SiteLaw(direction.a_plus, direction.a_minus, probs)


def exact_distribution(law: SiteLaw) -> LatticeDistribution:
    """
    Exact law of the sum of the site outcomes.

    Poisson-binomial dynamic program, O(m^2) in the site count m; the sum
    lives on the lattice m*a_minus + s*(a_plus - a_minus), s = 0..m.
    """
    weights = _kernels.pb_weights(law.probs)
    return LatticeDistribution(
        offset=law.site_count * law.a_minus,
        step=law.a_plus - law.a_minus,
        weights=weights,
    )


def exact_moments(law: SiteLaw, max_order: int) -> np.ndarray:
    """
    Raw moments 0..max_order of the sum of the site outcomes.

    Site-by-site binomial convolution, O(m * max_order^2); exact up to
    rounding, with no distribution materialized.

    :raises DegreeOverflowError: max_order above the supported cap.
    """
    order = int(max_order)
    if order < 1:
        raise ValueError(f"moment order must be >= 1, got {order}")
    if order > MAX_MOMENT_ORDER:
        raise DegreeOverflowError(
            f"moment order {order} exceeds the cap {MAX_MOMENT_ORDER}"
        )
    m = law.site_count
    return _kernels.moment_dp(
        np.full(m, law.a_plus),
        np.full(m, law.a_minus),
        law.probs,
        order,
    )


def clt_diagnostic(spec: WalkSpec, direction: Direction, t: float) -> CLTReport:
    """
    Exact Kolmogorov-Smirnov distance to the Gaussian limit at time t.

    The direction is re-centered at the stationary mean <nu, v>; the exact
    law of n^(-1/2) * sum over sites 1..floor(nt), scaled by 1/|nu|, is
    compared to N(0, target_variance) with target_variance =
    t * nu.C.nu / |nu|^2. A target variance below 1e-14 is reported as
    degenerate with NaN distance (the limit law collapses to a point).

    :raises NonUniqueFixedPointError: propagated from the channel analysis
        when rho0 does not resolve a non-unique fixed point.
    """
    ana = analyze(spec.channel, spec.rho0)
    nu = direction.nu
    norm = direction.norm
    centered = Direction(nu, center=float(nu @ ana.v.as_array()))
    law = site_laws(spec, centered, Window(0.0, float(t)))
    target = float(t) * float(nu @ ana.covariance @ nu) / norm**2
    if target < 1e-14:
        return CLTReport(ks_distance=math.nan, target_variance=target, degenerate=True)
    dist = exact_distribution(law)
    vals = dist.values() / (math.sqrt(spec.n) * norm)
    gaussian = 0.5 * erfc(-vals / math.sqrt(2.0 * target))
    cum = np.cumsum(dist.weights)
    cum_prev = np.concatenate(([0.0], cum[:-1]))
    ks = float(np.max(np.maximum(np.abs(cum - gaussian), np.abs(gaussian - cum_prev))))
    return CLTReport(ks_distance=ks, target_variance=target, degenerate=False)


def _require_uncentered(direction: Direction, what: str) -> None:
    if direction.center != 0.0:
        raise ValueError(
            f"{what} is defined for the raw collective sum; use center 0"
        )


def _is_degenerate(rf: RateFunction) -> bool:
    return rf.norm - abs(rf.mean) <= DIRECTION_DEGENERACY_TOL * rf.norm


def lambda_n(spec: WalkSpec, direction: Direction, t: float) -> float:
    """
    Finite-n scaled cumulant generating function at tilt t.

    (1/n) * sum over all n sites of log(e^(|nu| t) p_k + e^(-|nu| t)(1-p_k)),
    evaluated with log-sum-exp so large tilts and one-sided p_k are exact.
    """
    _require_uncentered(direction, "the cumulant generating function")
    law = site_laws(spec, direction, Window(0.0, 1.0))
    a = direction.norm * float(t)
    with np.errstate(divide="ignore"):
        log_p = np.log(law.probs)
        log_q = np.log1p(-law.probs)
    terms = np.logaddexp(a + log_p, -a + log_q)
    return float(np.mean(terms))


def rate_function_for(
    channel: Channel, nu: np.ndarray, rho0: Optional[DensityMatrix] = None
) -> RateFunction:
    """Rate data for a channel and direction, via the stationary analysis."""
    return RateFunction(np.asarray(nu, dtype=float), analyze(channel, rho0).v)


def lambda_limit(rf: RateFunction, t: float) -> float:
    """
    Limiting scaled cumulant generating function.

    log(cosh(|nu| t)) + log(1 + (<nu,v>/|nu|) tanh(|nu| t)), evaluated as a
    log-sum-exp so it stays finite and exact for all tilts; the degenerate
    case <nu,v> = +-|nu| collapses it to the line <nu,v>*t.
    """
    a = rf.norm * float(t)
    c = min(1.0, max(-1.0, rf.mean / rf.norm))
    with np.errstate(divide="ignore"):
        left = np.log1p(c) + a
        right = np.log1p(-c) - a
    return float(np.logaddexp(left, right) - math.log(2.0))


def rate_function(rf: RateFunction, x: float) -> float:
    """
    The rate function I(x), an extended real.

    I(x) = [(1 + x/|nu|) log((|nu|+x)/(|nu|+<nu,v>))
            + (1 - x/|nu|) log((|nu|-x)/(|nu|-<nu,v>))] / 2
    for |x| < |nu|, with the 0*log 0 = 0 convention; at |x| = |nu| exactly,
    the finite Legendre limit log(2|nu|/(|nu| +- <nu,v>)); +inf for
    |x| > |nu|. Degenerate directions (|<nu,v>| at |nu| within
    DIRECTION_DEGENERACY_TOL relative) rate 0 at the mean and +inf elsewhere.
    """
    r = rf.norm
    m = rf.mean
    x = float(x)
    if abs(x) > r:
        return math.inf
    if _is_degenerate(rf):
        return 0.0 if abs(x - m) <= 1e-12 * r else math.inf
    total = 0.0
    s_plus = r + x
    if s_plus > 0.0:
        total += s_plus * math.log(s_plus / (r + m))
    s_minus = r - x
    if s_minus > 0.0:
        total += s_minus * math.log(s_minus / (r - m))
    return max(0.0, total / (2.0 * r))


def legendre_numeric(rf: RateFunction, x: float) -> float:
    """
    I(x) as the numeric supremum of t*x - Lambda(t).

    Golden-section maximization on an adaptive bracket found by step
    doubling; tolerance 1e-10 in t. At |x| = |nu| exactly the gain
    saturates flat and the flat value, the finite boundary limit, is
    returned; this matches rate_function at the boundary.

    :raises SaturationError: the bracket escapes to infinity, which happens
        when |x| lies strictly beyond |nu| (the gain grows without bound).
    """
    x = float(x)

    def gain(t: float) -> float:
        return t * x - lambda_limit(rf, t)

    sign = x - rf.mean
    if sign == 0.0:
        return 0.0
    step = 1.0 if sign > 0.0 else -1.0
    # Shrink until the gain is positive: g(0) = 0 and g'(0) = x - mean != 0,
    # so some step in this direction gains.
    while gain(step) <= 0.0:
        step *= 0.5
        if abs(step) < 1e-300:
            return 0.0
    # Double until the gain turns over; failure to turn over means the
    # maximizer is at infinity, i.e. |x| >= |nu|.
    while gain(2.0 * step) > gain(step):
        step *= 2.0
        if abs(step) > BRACKET_CAP:
            raise SaturationError(
                f"no finite maximizer for x={x}: |x| is at or beyond "
                f"the support radius {rf.norm}"
            )
    outer = 2.0 * step
    # Golden section needs a strictly dominating interior point; a flat tie
    # at the outer point means the gain is already at its supremum.
    for _ in range(8):
        if gain(outer) != gain(step):
            break
        outer *= 2.0
    else:
        flat = gain(step)
        if not math.isfinite(flat):
            raise SaturationError(
                f"gain at x={x} is unbounded: |x| is beyond the support "
                f"radius {rf.norm}"
            )
        return max(0.0, flat)
    bracket = (0.0, step, outer) if step > 0.0 else (outer, step, 0.0)
    res = minimize_scalar(
        lambda t: -gain(t), bracket=bracket, method="golden", options={"xtol": 1e-10}
    )
    return max(0.0, float(-res.fun))


def ldp_diagnostic(spec: WalkSpec, direction: Direction, x: float) -> LDPReport:
    """
    Exact upper-tail decay against the rate function.

    empirical_rate = -(1/n) log P(S_n / n >= x) from the exact lattice law
    of the raw collective sum over all n sites, accumulated in log space so
    tails far below the double range are still exact; limit_rate = I(x).

    :raises DegenerateDirectionError: <nu,v> = +-|nu| (one-point limit law).
    :raises SaturationError: |x| at or beyond |nu| (no lattice tail).
    :raises ValueError: x not above the finite-n mean (upper tail only).
    """
    _require_uncentered(direction, "the tail diagnostic")
    ana = analyze(spec.channel, spec.rho0)
    rf = RateFunction(direction.nu, ana.v)
    x = float(x)
    if _is_degenerate(rf):
        raise DegenerateDirectionError(
            "the direction is degenerate at this stationary state: "
            "<nu, v> = +-|nu| collapses the law to one point"
        )
    if abs(x) >= rf.norm:
        raise SaturationError(
            f"x={x} is at or beyond the support radius {rf.norm}"
        )
    law = site_laws(spec, direction, Window(0.0, 1.0))
    n = spec.n
    if not x * n > law.mean():
        raise ValueError(
            f"upper-tail form needs x above the mean {law.mean() / n}, got {x}"
        )
    log_weights = _kernels.pb_log_weights(law.probs)
    offset = n * law.a_minus
    step = law.a_plus - law.a_minus
    s_min = max(0, math.ceil((n * x - offset) / step - GRID_SNAP_TOL))
    log_tail = float(np.logaddexp.reduce(log_weights[s_min:]))
    return LDPReport(
        empirical_rate=-log_tail / n,
        limit_rate=rate_function(rf, x),
    )


def _word_masks(
    spec: WalkSpec, word: WordSpec, require_grid: bool
) -> Tuple[np.ndarray, np.ndarray]:
    """Active sites (1-based indices) and their letter bitmasks.

    :raises WindowError: a window out of range, or off the 1/n grid when
        the grid is required.
    """
    n = spec.n
    bounds = []
    for _, window in word.letters:
        if require_grid and not window.on_grid(n):
            raise WindowError(
                f"window ({window.t0}, {window.t1}] is off the 1/{n} grid"
            )
        bounds.append(_window_slice(spec, window))
    masks = np.zeros(n + 1, dtype=np.int64)
    for j, (lo, hi) in enumerate(bounds):
        masks[lo : hi + 1] |= 1 << j
    active = np.nonzero(masks)[0]
    return active, masks[active]


def _letter_tables(word: WordSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Pauli coefficients of the ordered products of every letter subset.

    For subset U, M_U multiplies the letters of U in word order;
    c0[U] = tr(M_U)/2 and cvec[U][a] = tr(M_U sigma_a)/2 give
    tr(M_U rho) = c0[U] + <cvec[U], bloch(rho)>.
    """
    d = word.degree
    mats = np.empty((1 << d, 2, 2), dtype=np.complex128)
    mats[0] = IDENTITY2
    for u in range(1, 1 << d):
        high = u.bit_length() - 1
        mats[u] = mats[u & ~(1 << high)] @ word.letters[high][0].matrix()
    c0 = 0.5 * np.trace(mats, axis1=1, axis2=2)
    cvec = np.empty((1 << d, 3), dtype=np.complex128)
    for a, sigma in enumerate(_PAULI):
        cvec[:, a] = 0.5 * np.trace(mats @ sigma, axis1=1, axis2=2)
    return c0, cvec


def word_expectation(spec: WalkSpec, word: WordSpec) -> complex:
    """
    Exact expectation of the ordered product of collective observables.

    Each letter contributes the sum over its window's sites of its direction
    observable; the product state makes the expectation a sum over
    assignments of letters to sites, folded by a subset dynamic program over
    sites whose state is the set of letters already absorbed. Scaled by
    n^(-d/2) for degree d. Cost O(n * 3^d).

    :raises WindowError: a window endpoint off the 1/n grid.
    :raises DegreeOverflowError: degree above 8 (enforced by WordSpec).
    """
    active, masks = _word_masks(spec, word, require_grid=True)
    c0, cvec = _letter_tables(word)
    traj = bloch_trajectory(spec)
    blochs = traj[active - 1]
    value = _kernels.word_dp(c0, cvec, blochs, masks)
    return complex(value / spec.n ** (word.degree / 2.0))


def symmetrized_expectation(spec: WalkSpec, word: WordSpec) -> float:
    """
    Exact expectation of the totally symmetrized product.

    Polarization: the symmetrization of O_1..O_d equals
    (1/(2^d d!)) * sum over signs e of (prod e_j) (sum_j e_j O_j)^d, and each
    power of a Hermitian combination is a commuting classical sum whose d-th
    moment the site-law dynamic program yields exactly. The imaginary part
    vanishes identically, so the value is returned real. Degree cap 6.
    Windows need not sit on the 1/n grid; they select sites by the floor
    convention.

    :raises DegreeOverflowError: degree above the symmetrized cap.
    """
    d = word.degree
    if d > MAX_SYMMETRIZED_DEGREE:
        raise DegreeOverflowError(
            f"symmetrized degree {d} exceeds the cap {MAX_SYMMETRIZED_DEGREE}"
        )
    active, masks = _word_masks(spec, word, require_grid=False)
    traj = bloch_trajectory(spec)
    blochs = traj[active - 1]
    m = active.shape[0]
    member = (masks[:, None] >> np.arange(d)[None, :]) & 1
    nus = np.array([dir_.nu for dir_, _ in word.letters])
    centers = np.array([dir_.center for dir_, _ in word.letters])
    total = 0.0
    for bits in range(1 << d):
        eps = 1.0 - 2.0 * ((bits >> np.arange(d)) & 1)
        weighted = member * eps[None, :]
        h = weighted @ nus
        h0 = -(weighted @ centers)
        norms = np.linalg.norm(h, axis=1)
        a_plus = h0 + norms
        a_minus = h0 - norms
        probs = np.full(m, 0.5)
        live = norms > 0.0
        probs[live] = 0.5 * (
            1.0 + np.sum(h[live] * blochs[live], axis=1) / norms[live]
        )
        np.clip(probs, 0.0, 1.0, out=probs)
        moments = _kernels.moment_dp(a_plus, a_minus, probs, d)
        total += float(np.prod(eps)) * moments[d]
    scale = (2.0**d) * math.factorial(d) * spec.n ** (d / 2.0)
    return total / scale


def wick_window_moment(
    cov: np.ndarray, letters: Sequence[Tuple[int, float, float]]
) -> float:
    """
    Gaussian moment of Brownian increments: sum over perfect matchings of
    the pairwise covariances C[a,b] * overlap of the two windows.

    :param cov: 3x3 covariance matrix of the limiting Brownian motion.
    :param letters: (component 1..3, t0, t1) per factor; the factor is the
        increment of that component over (t0, t1].
    :return: the moment; 0 for odd degree.
    """
    cov = np.asarray(cov, dtype=float)
    items = [(int(c) - 1, float(t0), float(t1)) for c, t0, t1 in letters]
    for c, t0, t1 in items:
        if not 0 <= c <= 2:
            raise ValueError(f"component must be 1..3, got {c + 1}")
        if not t1 > t0:
            raise ValueError(f"window needs t1 > t0, got ({t0}, {t1}]")
    if len(items) % 2 == 1:
        return 0.0

    def pair_sum(rest: Tuple[Tuple[int, float, float], ...]) -> float:
        if not rest:
            return 1.0
        a, a0, a1 = rest[0]
        total = 0.0
        for i in range(1, len(rest)):
            b, b0, b1 = rest[i]
            overlap = max(0.0, min(a1, b1) - max(a0, b0))
            if overlap > 0.0:
                total += (
                    cov[a, b] * overlap * pair_sum(rest[1:i] + rest[i + 1 :])
                )
        return total

    return pair_sum(tuple(items))


def wick_moment(cov: np.ndarray, letters: Sequence[Tuple[int, float]]) -> float:
    """
    Gaussian moment of the limiting Brownian motion at fixed times:
    E[prod B^(c_j)_(t_j)] = sum over perfect matchings of
    prod C[c,c'] * min(t, t'); 0 for odd degree.

    :param letters: (component 1..3, time > 0) per factor.
    """
    return wick_window_moment(
        cov, [(c, 0.0, float(t)) for c, t in letters]
    )


def commutator_identity_check(v: BlochVector, n: int, t: float) -> CommutatorReport:
    """
    Verify the per-site commutation relations at stationary vector v and
    report the exact collective scalar coefficients.

    Per site, [sigma_a - v_a I, sigma_b - v_b I] = 2i sigma_c for the cyclic
    pairs (x,y,z), (y,z,x), (z,x,y); the check passes when the worst entry
    error is at most 1e-15. Collectively the scalar term is
    2i * (floor(nt)/n) * v_c exactly, against the idealized 2i*t*v_c.
    """
    va = v.as_array()
    shifted = [_PAULI[a] - va[a] * IDENTITY2 for a in range(3)]
    worst = 0.0
    for a in range(3):
        b = (a + 1) % 3
        c = (a + 2) % 3
        comm = shifted[a] @ shifted[b] - shifted[b] @ shifted[a]
        worst = max(worst, float(np.max(np.abs(comm - 2j * _PAULI[c]))))
    ratio = _floor_snapped(n * t) / n
    exact = np.array([2j * ratio * va[(a + 2) % 3] for a in range(3)])
    nominal = np.array([2j * t * va[(a + 2) % 3] for a in range(3)])
    exact.setflags(write=False)
    nominal.setflags(write=False)
    return CommutatorReport(
        per_site_ok=worst <= 1e-15,
        per_site_error=worst,
        floor_ratio=ratio,
        exact_coefficients=exact,
        nominal_coefficients=nominal,
    )
