"""Bell correlations of three-qubit biseparable states.

Composite operators ``D^(i)``, state and settings models, a seesaw
optimizer over state classes, exact classical and spectral oracles,
feasibility geometry and claim-level verification suites.
"""
from .bellops import (
    BellOperator,
    CorrelationVector,
    chsh_operator,
    correlation_vector,
    d_matrix,
    d_operator,
    d_squared_identity_residual,
    wwzb_rep_operator,
)
from .geometry import GENERAL_BOUNDS, LOO_BOUNDS, RegionBounds, RegionReport, classify, plane_boundaries, scan_plane
from .linalg import hermitian_eig, kron
from .observables import PartySettings, Scenario, loo_partner, parse_settings, spin_observable
from .optimize import (
    ALL,
    BISEPARABLE,
    FULLY_SEPARABLE,
    Objective,
    OptimizationResult,
    OptimizerConfig,
    StateClass,
    constrained_tradeoff,
    maximize,
    tradeoff_search,
)
from .oracles import lhv_max, spectral_max, theorem1_construction
from .states import QuantumState, basis_state, ghz, load_state, product_state, save_state, w_state
from .verify import VerificationReport, VerifyConfig, run_suite, tv_monogamy_check

__version__ = "0.1.0"
