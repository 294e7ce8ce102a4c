"""
Exact statistics of a qubit repeatedly sent through a noisy channel.

The package models n passes of a qubit through one completely positive
trace-preserving map, computes the stationary state and limit covariance
in closed form, and evaluates the exact finite-n laws of the collective
spin observables: their full lattice distributions, Gaussian-limit
diagnostics, scaled cumulant generating functions with tail-decay rates,
and moments of ordered or symmetrized observable words.

Layout: :mod:`pauliwalk.qubit` (states, Pauli algebra, small Hermitian
eigensolvers), :mod:`pauliwalk.channels` (channel representations,
complete positivity, stationary analysis), :mod:`pauliwalk.zoo` (named
channel families with closed-form expectations), :mod:`pauliwalk.walks`
(exact finite-n laws and their limits), :mod:`pauliwalk.cli` (command
line).  Hot kernels run under numba when available; set the environment
variable PAULIWALK_NO_NUMBA to force the pure-numpy fallback.
"""

from .errors import (
    ChannelFormatError,
    ContractionError,
    DegenerateDirectionError,
    DegreeOverflowError,
    JacobiConvergenceError,
    NonHermitianError,
    NonUniqueFixedPointError,
    NormalizationError,
    PauliwalkError,
    SaturationError,
    WindowError,
)
from .qubit import (
    PAULI_AXES,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    BlochVector,
    DensityMatrix,
    bloch_to_density,
    commutator,
    density_to_bloch,
    herm_eigen2,
    herm_eigen4,
    pauli,
)
from .channels import (
    AffineChannel,
    AssumptionA,
    Channel,
    ChannelAnalysis,
    Convention,
    KRSWChannel,
    KRSWConditionReport,
    KrausChannel,
    analyze,
    apply,
    as_affine,
    channel_to_record,
    choi,
    fixed_point,
    is_cp_choi,
    iterate,
    kraus_to_affine,
    krsw_cp_conditions,
    krsw_to_affine,
    parse_channel_spec,
    random_kraus_channel,
    spectral_radius,
)
from .zoo import (
    ZooEntry,
    amplitude_damping,
    depolarizing,
    markov_chain,
    phase_damping,
    trigonometric,
)
from .walks import (
    CLTReport,
    CommutatorReport,
    Direction,
    LDPReport,
    LatticeDistribution,
    RateFunction,
    SiteLaw,
    WalkSpec,
    Window,
    WordSpec,
    bloch_trajectory,
    clt_diagnostic,
    commutator_identity_check,
    exact_distribution,
    exact_moments,
    lambda_limit,
    lambda_n,
    ldp_diagnostic,
    legendre_numeric,
    rate_function,
    rate_function_for,
    site_laws,
    symmetrized_expectation,
    wick_moment,
    wick_window_moment,
    word_expectation,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "PauliwalkError",
    "NonHermitianError",
    "JacobiConvergenceError",
    "NormalizationError",
    "ContractionError",
    "NonUniqueFixedPointError",
    "DegenerateDirectionError",
    "DegreeOverflowError",
    "WindowError",
    "SaturationError",
    "ChannelFormatError",
    # qubit
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "PAULI_AXES",
    "pauli",
    "commutator",
    "BlochVector",
    "DensityMatrix",
    "density_to_bloch",
    "bloch_to_density",
    "herm_eigen2",
    "herm_eigen4",
    # channels
    "Convention",
    "KrausChannel",
    "AffineChannel",
    "KRSWChannel",
    "Channel",
    "AssumptionA",
    "ChannelAnalysis",
    "KRSWConditionReport",
    "apply",
    "kraus_to_affine",
    "krsw_to_affine",
    "as_affine",
    "choi",
    "is_cp_choi",
    "krsw_cp_conditions",
    "fixed_point",
    "spectral_radius",
    "analyze",
    "iterate",
    "random_kraus_channel",
    "parse_channel_spec",
    "channel_to_record",
    # zoo
    "ZooEntry",
    "depolarizing",
    "phase_damping",
    "amplitude_damping",
    "trigonometric",
    "markov_chain",
    # walks
    "Direction",
    "Window",
    "WalkSpec",
    "SiteLaw",
    "LatticeDistribution",
    "WordSpec",
    "RateFunction",
    "CLTReport",
    "LDPReport",
    "CommutatorReport",
    "bloch_trajectory",
    "site_laws",
    "exact_distribution",
    "exact_moments",
    "clt_diagnostic",
    "lambda_n",
    "rate_function_for",
    "lambda_limit",
    "rate_function",
    "legendre_numeric",
    "ldp_diagnostic",
    "word_expectation",
    "symmetrized_expectation",
    "wick_window_moment",
    "wick_moment",
    "commutator_identity_check",
]
