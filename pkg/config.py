"""
Description: Global configuration: budgets, strategy profiles and I/O defaults.
Date: 2026-10-19
Version: 0.3.0
"""

from dataclasses import dataclass, replace

# =====================================================
# STRATEGY PROFILES
# =====================================================

STRATEGIES = {
    "tensor": {
        "untangle": True,
        "semiring": "bitvector",
        "description": "NAE conjunction as a low-rank Boolean tensor (BitVector(r) InsideOut)",
    },
    "colors-join": {
        "untangle": True,
        "semiring": "bitvector",
        "description": "color variables joined in with FD factors and virtual NAE predicates",
    },
    "direct": {
        "untangle": False,
        "semiring": "boolean",
        "description": "negation and NAE evaluated as predicates inside InsideOut",
    },
    "naive": {
        "untangle": False,
        "semiring": "boolean",
        "description": "nested-loop oracle, negation and NAE tested directly",
    },
    "auto": {
        "untangle": True,
        "semiring": "bitvector",
        "description": "tensor, switching to direct when untangling or color coding exceeds a budget",
    },
}

DEFAULT_STRATEGY = "tensor"

FAMILY_MODES = ("auto", "random", "greedy", "explicit", "disjunct")
DEFAULT_FAMILY_MODE = "auto"

UNTANGLE_MODES = ("branch", "padded")
DEFAULT_UNTANGLE_MODE = "branch"

# =====================================================
# PLANNING
# =====================================================

# Subset DP over eliminated vertices is exact up to this many vertices;
# beyond it the min-fill heuristic takes over.
ORDERING_DP_CAP = 16

# =====================================================
# COLOR CODING
# =====================================================

QUOTIENT_CAP = 10              # Bell-number enumeration of partitions of U
CHROMATIC_MAX_VERTICES = 10
CHROMATIC_MAX_COLORS = 8

VERIFY_BUDGET = 10**6          # N^|U| colorings checked exhaustively
MONTE_CARLO_SAMPLES = 10**5    # sampled proper colorings above the budget
INNER_VERIFY_BUDGET = 10**6    # q^|U| for the inner family of explicit_family

FAMILY_RETRY_CAP = 64
GREEDY_POOL_FACTOR = 4         # candidate pool = factor × random-family size
EXHAUSTIVE_POOL_LIMIT = 4096   # use all of [c]^[N] as the pool below this
FAMILY_CELL_BUDGET = 2 * 10**7  # |F|·N entries a sampled family or pool may hold

# Rational grid for the optional coordinate-descent refinement of p.
THETA_REFINE_GRID = 12

# =====================================================
# EVALUATION
# =====================================================

BIT_BUDGET = 2**16             # max BitVector width before chunking the family
NAIVE_BUDGET = 5 * 10**7       # bindings explored by the nested-loop oracle
DISJUNCT_CAP = 4096            # untangled disjuncts before auto falls back

SYMMETRY_PRUNING = True

# =====================================================
# I/O
# =====================================================

CSV_DELIMITER = ","
LOG_DIR = "logs"
REPORT_SCHEMA = 1
DEFAULT_SEED = 0


@dataclass(frozen=True)
class EngineConfig:
    """
    Run-time knobs. Defaults mirror the module constants above; the CLI
    builds overrides with `with_overrides`.
    """

    strategy: str = DEFAULT_STRATEGY
    family_mode: str = DEFAULT_FAMILY_MODE
    untangle_mode: str = DEFAULT_UNTANGLE_MODE
    seed: int = DEFAULT_SEED

    ordering_dp_cap: int = ORDERING_DP_CAP
    quotient_cap: int = QUOTIENT_CAP
    chromatic_max_vertices: int = CHROMATIC_MAX_VERTICES
    chromatic_max_colors: int = CHROMATIC_MAX_COLORS
    verify_budget: int = VERIFY_BUDGET
    monte_carlo_samples: int = MONTE_CARLO_SAMPLES
    inner_verify_budget: int = INNER_VERIFY_BUDGET
    family_retry_cap: int = FAMILY_RETRY_CAP
    greedy_pool_factor: int = GREEDY_POOL_FACTOR
    exhaustive_pool_limit: int = EXHAUSTIVE_POOL_LIMIT
    family_cell_budget: int = FAMILY_CELL_BUDGET
    bit_budget: int = BIT_BUDGET
    naive_budget: int = NAIVE_BUDGET
    disjunct_cap: int = DISJUNCT_CAP
    symmetry_pruning: bool = SYMMETRY_PRUNING
    refine_theta: bool = False

    def with_overrides(self, **overrides) -> "EngineConfig":
        known = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **known)

    @property
    def profile(self) -> dict:
        return STRATEGIES[self.strategy]
