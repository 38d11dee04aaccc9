"""Constants for the superprolong workbench."""

# Package name used in reports and diagnostics
DOMAIN = "superprolong"
REPORT_FORMAT_VERSION = 1

# Parameter names
PARAM_A = "a"
PARAM_S1 = "s1"
PARAM_S2 = "s2"
PARAM_EPSILON = "eps"  # parabolic p1 realization
PARAM_KAPPA = "kappa"  # flag realization of p123 I

# Dynkin diagrams and nodes
DIAGRAMS = ("I", "II", "III", "IV")
NODES = (1, 2, 3)

# Prolongation modes
MODE_M = "m"
MODE_M_G0 = "m-g0"
MODE_G_LE_K = "gk"
MODES = (MODE_M, MODE_M_G0, MODE_G_LE_K)
DEFAULT_CUTOFF = 6

# Exact-vs-sampled checks
DEFAULT_SEED = 20240601
DEFAULT_SAMPLE_POINTS = 3
SAMPLE_HEIGHT = 97  # numerators/denominators of random points are below this

# Bilinear-form and cohomology limits
SPENCER_MAX_J = 2

# Command-line verbs
VERB_CONSTRUCT = "construct"
VERB_GRADING = "grading"
VERB_CLASSIFY = "classify"
VERB_PROLONG = "prolong"
VERB_SPENCER = "spencer"
VERB_REALIZE = "realize"
VERB_REDUCTIONS = "reductions"
VERB_VERIFY = "verify"
VERBS = (
    VERB_CONSTRUCT,
    VERB_GRADING,
    VERB_CLASSIFY,
    VERB_PROLONG,
    VERB_SPENCER,
    VERB_REALIZE,
    VERB_REDUCTIONS,
    VERB_VERIFY,
)

# Realization models and reduction cases exposed on the command line
REALIZE_MODELS = ("p1I", "p12I", "p123I", "p123IV", "m33")
REDUCTION_CASES = ("p2I", "p23I")

# Exit codes
EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2

# Caching
DEFAULT_CACHE_ENTRIES = 128

# Rational points used by ``realize`` unless --eval is given
REALIZE_POINTS = {
    "p1I": {PARAM_EPSILON: "1/3"},
    "p12I": {PARAM_A: "2"},
    "p123I": {PARAM_A: "2", PARAM_KAPPA: "3"},
    "p123IV": {PARAM_S1: "1", PARAM_S2: "2"},
    "m33": {},
}
RANDOM_PAIRS = 20  # sampled pairs for homomorphism and pair-formula checks
