"""Single source for magic values scattered across the codebase: lattice
limits, noise-model constants, matching weight caps, Monte Carlo defaults and
the process exit codes."""

# -- Lattice -----------------------------------------------------------------
MIN_DISTANCE = 2
MAX_DISTANCE = 25

# Stabilizer kinds. Plaquettes (r odd, c even) are Z-type and flag X/Y errors;
# vertices (r even, c odd) are X-type and flag Z/Y errors.
PLAQUETTE = "plaquette"
VERTEX = "vertex"

# Boundary sinks of the two matching graphs.
SINK_TOP, SINK_BOTTOM = "top", "bottom"
SINK_LEFT, SINK_RIGHT = "left", "right"

# -- Noise -------------------------------------------------------------------
# Physical bound T2 <= 2*T1; rows violating it are clamped at ingestion.
RAMSEY_FACTOR = 2.0

NOISE_IID = "iid"
NOISE_INID = "inid"
NOISE_MODELS = (NOISE_IID, NOISE_INID)

# Tolerances for solve_time_for_p.
SOLVE_XTOL = 1e-12
SOLVE_RTOL = 1e-13

# -- Matching ----------------------------------------------------------------
DECODER_MWPM = "mwpm"
DECODER_RMWPM = "rmwpm"
DECODER_MODES = (DECODER_MWPM, DECODER_RMWPM)

# -ln(1 - e^{-t/T}) diverges at t = 0.
WEIGHT_CAP = 1e9
# Edge weights are resolved to 2**-32 before matching; the power of two keeps
# the float <-> integer round trip exact.
WEIGHT_SCALE = 2**32

# -- Layout ------------------------------------------------------------------
RANK_T2 = "t2"
RANK_T1 = "t1"
RANK_MIN_T = "min_t"
RANK_P_FAIL = "p_fail"
RANK_KEYS = (RANK_T2, RANK_T1, RANK_MIN_T, RANK_P_FAIL)

ARRANGE_AS_INDEXED = "as_indexed"
ARRANGE_RANDOM = "random"
ARRANGE_OPTIMIZED = "optimized"
ARRANGE_IMPORTED = "imported"
ARRANGEMENTS = (
    ARRANGE_AS_INDEXED,
    ARRANGE_RANDOM,
    ARRANGE_OPTIMIZED,
    ARRANGE_IMPORTED,
)

SELECT_BEST = "best"
SELECT_RANDOM = "random"

# -- Monte Carlo -------------------------------------------------------------
DEFAULT_TRIALS = 10_000
# Trials per work unit; fixed so results never depend on the worker count.
TRIAL_CHUNK = 250
# A point is well resolved once it has seen this many failures (N >= 100/P).
MIN_FAILURES = 100
CI_LOW_FACTOR = 0.8
CI_HIGH_FACTOR = 1.25
# Upper bound of the rule-of-three interval for zero observed failures.
RULE_OF_THREE = 3.0
WILSON_ALPHA = 0.05

DEFAULT_P_MIN = 0.01
DEFAULT_P_MAX = 0.3
POINTS_PER_DECADE = 12

# Uniform symmetric specs used when no calibration table is given.
DEFAULT_SYMMETRIC_T_US = 100.0

# -- Exit codes ----------------------------------------------------------------
EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_DATA_ERROR = 2
EXIT_RUNTIME_ERROR = 3
