""" Package constants """

# Domain file schema
KIND_KEY = "kind"
CANONICAL_KEY = "canonical"
RING_KEY = "ring"
PARAMS_KEY = "params"
BOUNDED_KEY = "bounded"
UNBOUNDED_KEY = "unbounded"
POLYGON_KEY = "polygon"
RAYS_KEY = "rays"
RAY_FROM_KEY = "from"
RAY_DIR_KEY = "dir"
INFINITY_KEY = "infinity"
KIND_POLYGONAL = "polygonal"
KIND_CANONICAL = "canonical"
DOMAIN_KINDS = [KIND_POLYGONAL, KIND_CANONICAL]
DOMAIN_CONSTANTS = [
    "KIND_KEY",
    "CANONICAL_KEY",
    "RING_KEY",
    "PARAMS_KEY",
    "BOUNDED_KEY",
    "UNBOUNDED_KEY",
    "POLYGON_KEY",
    "RAYS_KEY",
    "RAY_FROM_KEY",
    "RAY_DIR_KEY",
    "INFINITY_KEY",
    "KIND_POLYGONAL",
    "KIND_CANONICAL",
    "DOMAIN_KINDS",
]

# Canonical rings
RING_ANNULUS = "annulus"
RING_GROTZSCH = "grotzsch"
RING_TEICHMULLER = "teichmuller"
RING_DOUBLE_TEICHMULLER = "double_teichmuller"
RING_DOUBLE_TEICHMULLER_UNIT = "double_teichmuller_unit"
RING_KINDS = [
    RING_ANNULUS,
    RING_GROTZSCH,
    RING_TEICHMULLER,
    RING_DOUBLE_TEICHMULLER,
    RING_DOUBLE_TEICHMULLER_UNIT,
]
DEFAULT_CIRCLE_VERTICES = 512
RING_CONSTANTS = [
    "RING_ANNULUS",
    "RING_GROTZSCH",
    "RING_TEICHMULLER",
    "RING_DOUBLE_TEICHMULLER",
    "RING_DOUBLE_TEICHMULLER_UNIT",
    "RING_KINDS",
    "DEFAULT_CIRCLE_VERTICES",
]

# Affine invariance classes
CLASS_DEGENERATE = "degenerate"
CLASS_TEICHMULLER = "teichmuller-affine"
CLASS_DOUBLE_TEICHMULLER = "double-teichmuller-affine"
CLASS_NOT_INVARIANT = "not-invariant"
ATTAINED = "attained"
BOUNDARY_LIMIT = "boundary-limit"
INCONCLUSIVE = "inconclusive"
EXISTS = "exists"
NONEXISTENT = "nonexistent"
UNDECIDED = "undecided"
AFFINE_CONSTANTS = [
    "CLASS_DEGENERATE",
    "CLASS_TEICHMULLER",
    "CLASS_DOUBLE_TEICHMULLER",
    "CLASS_NOT_INVARIANT",
    "ATTAINED",
    "BOUNDARY_LIMIT",
    "INCONCLUSIVE",
    "EXISTS",
    "NONEXISTENT",
    "UNDECIDED",
]

# Map descriptors
MAP_TYPE_KEY = "type"
MAP_ANNULUS_DIRICHLET = "annulus_dirichlet"
MAP_RADIAL_NITSCHE = "radial_nitsche"
MAP_POWER_SHEAR = "power_shear"
MAP_SC_SHEAR = "sc_shear"
MAP_AFFINE = "affine"
MAP_TYPES = [
    MAP_ANNULUS_DIRICHLET,
    MAP_RADIAL_NITSCHE,
    MAP_POWER_SHEAR,
    MAP_SC_SHEAR,
    MAP_AFFINE,
]
STATUS_EXISTS = "exists"
STATUS_BOUNDARY = "boundary-degenerate"
STATUS_NONEXISTENT = "nonexistent"
STATUS_ANSATZ_FAILED = "existence-guaranteed-but-radial-ansatz-failed"
MAP_CONSTANTS = [
    "MAP_TYPE_KEY",
    "MAP_ANNULUS_DIRICHLET",
    "MAP_RADIAL_NITSCHE",
    "MAP_POWER_SHEAR",
    "MAP_SC_SHEAR",
    "MAP_AFFINE",
    "MAP_TYPES",
    "STATUS_EXISTS",
    "STATUS_BOUNDARY",
    "STATUS_NONEXISTENT",
    "STATUS_ANSATZ_FAILED",
]

# Numerical defaults
DEFAULT_RESOLUTION = 512
DEFAULT_LEVELS = 3
DEFAULT_CLIP_FACTOR = 4.0
SOLVER_RESIDUAL = 1e-10
DEFAULT_THETA_SAMPLES = 720
DEFAULT_THETA_GRID = 36
DEFAULT_ALPHA_GRID = 24
DEFAULT_ALPHA_FLOOR = 1e-3
DEFAULT_REFINE_ITERS = 200
NELDER_MEAD_TOL = 1e-6
DEFAULT_TRUNCATION = 64
DEFAULT_BOUNDARY_SAMPLES = 512
JACOBIAN_RADII = 64
JACOBIAN_ANGLES = 256
SLIT_CLEARANCE = 1e-3
EPSILON_MAX = 1.0
EPSILON_MIN = 1e-6
QUADRATURE_NODES = 64
BISECTION_TOL = 1e-10
MODULUS_TOL = 1e-6
WIDTH_TOL = 1e-12
COLLINEAR_TOL = 1e-12
BOUNDARY_TOL = 1e-4
NUMERIC_CONSTANTS = [
    "DEFAULT_RESOLUTION",
    "DEFAULT_LEVELS",
    "DEFAULT_CLIP_FACTOR",
    "SOLVER_RESIDUAL",
    "DEFAULT_THETA_SAMPLES",
    "DEFAULT_THETA_GRID",
    "DEFAULT_ALPHA_GRID",
    "DEFAULT_ALPHA_FLOOR",
    "DEFAULT_REFINE_ITERS",
    "NELDER_MEAD_TOL",
    "DEFAULT_TRUNCATION",
    "DEFAULT_BOUNDARY_SAMPLES",
    "JACOBIAN_RADII",
    "JACOBIAN_ANGLES",
    "SLIT_CLEARANCE",
    "EPSILON_MAX",
    "EPSILON_MIN",
    "QUADRATURE_NODES",
    "BISECTION_TOL",
    "MODULUS_TOL",
    "WIDTH_TOL",
    "COLLINEAR_TOL",
    "BOUNDARY_TOL",
]

# Other
PKG_NAME = "ringmod"
THREADS_ENV_VAR = "RINGMOD_THREADS"
MANIFEST_FILE = "manifest.json"
CSV_SCHEMA_PREFIX = "#schema="
EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_NUMERICAL_FAILURE = 3
EXIT_HYPOTHESIS_VIOLATED = 4
OTHER_CONSTANTS = [
    "PKG_NAME",
    "THREADS_ENV_VAR",
    "MANIFEST_FILE",
    "CSV_SCHEMA_PREFIX",
    "EXIT_OK",
    "EXIT_INVALID_INPUT",
    "EXIT_NUMERICAL_FAILURE",
    "EXIT_HYPOTHESIS_VIOLATED",
]

__all__ = (
    DOMAIN_CONSTANTS
    + RING_CONSTANTS
    + AFFINE_CONSTANTS
    + MAP_CONSTANTS
    + NUMERIC_CONSTANTS
    + OTHER_CONSTANTS
)
