"""
Backend constants for stabilizer nonlocality certification.
Centralizes tolerances and capacity caps so the library, the simulators
and the command line agree on the same numbers.
"""

# =============================================================================
# Numerical Tolerances
# =============================================================================

#: Minimum accepted fidelity gap: certified states need F >= 1 - FIDELITY_TOL
FIDELITY_TOL: float = 1e-9

#: Hermiticity and trace tolerance for dense states
HERMITIAN_TOL: float = 1e-12

#: Pass/fail threshold for behavior normalization and non-signaling residuals
VALIDATION_TOL: float = 1e-9

#: Probability below which a dense branch counts as impossible
ZERO_PROBABILITY_TOL: float = 1e-12

#: Expectation-value tolerance for cross-engine stabilizer checks
EXPECTATION_TOL: float = 1e-10

#: Angle tolerance of the coordinate-wise chained optimizer
ANGLE_TOL: float = 1e-10

#: Allowed distance between the optimized chained value and 2n sin^2(pi/4n)
CHAINED_ORACLE_TOL: float = 1e-6

# =============================================================================
# Capacity Caps
# =============================================================================

#: Largest generator count for which the whole group is enumerated (2^k elements)
ENUMERATION_MAX_K: int = 20

#: Largest qubit count for dense density matrices
DENSE_MATRIX_MAX_QUBITS: int = 10

#: Largest qubit count for dense pure-state vectors
DENSE_VECTOR_MAX_QUBITS: int = 16

#: Largest Hilbert-space dimension d^N for dense qudit graph states
QUDIT_DENSE_MAX_DIM: int = 4096

#: Largest qudit group order d^k accepted by the exhaustive pattern scan
QUDIT_SCAN_MAX_ELEMENTS: int = 2**20

#: Largest number of chained-inequality settings tried by threshold searches
CHAINED_N_CAP: int = 200

#: Per-pair branch count above which the tableau engine samples outcome vectors
TABLEAU_BRANCH_CAP: int = 256

#: Seed used when tableau branches are sampled
DEFAULT_SAMPLE_SEED: int = 20240101

# =============================================================================
# Chained Optimizer
# =============================================================================

#: Half-width of the search window around each angle during refinement
OPTIMIZER_WINDOW: float = 0.25

#: Maximum coordinate sweeps before the optimizer stops
OPTIMIZER_MAX_SWEEPS: int = 6

#: Sweep-to-sweep improvement below which refinement stops
OPTIMIZER_MIN_IMPROVEMENT: float = 1e-14

#: Grid points per angle used by the exhaustive grid oracle
GRID_POINTS: int = 720

# =============================================================================
# Figure Defaults
# =============================================================================

#: Party counts covered by the settings-per-party table
FIG1_N_RANGE: tuple[int, int] = (4, 40)

#: Party count of the nonlocality-content table
FIG2_PARTIES: int = 5

#: Chained input counts covered by the nonlocality-content table
FIG2_INPUT_RANGE: tuple[int, int] = (4, 60)

# =============================================================================
# Artifacts
# =============================================================================

#: Version tag embedded in every JSON artifact
SCHEMA_VERSION: str = "1.0"

#: Environment variable that sets the package log level
LOG_LEVEL_ENV: str = "STABILIZER_NONLOCALITY_LOG_LEVEL"

#: Exit status for a passing run
EXIT_OK: int = 0

#: Exit status for a certified failure (not GME, failed certificate, vacuous bound)
EXIT_FAILURE: int = 1

#: Exit status for malformed or out-of-range input
EXIT_INPUT_ERROR: int = 2
