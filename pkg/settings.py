# settings.py
# Defaults shared by the library modules and the command line.

# Hilbert-Samuel oracle budget
DEFAULT_K_MAX = 12
DEFAULT_POINT_CEILING = 5_000_000

# closure_is_power refuses when C(q+n-1, n-1) exceeds this
CLOSURE_POINT_CEILING = 1_000_000

# enumeration defaults for `verify` / `enumerate`
DEFAULT_N_MAX = 3
DEFAULT_MAX_RATIO = 3

# factors a used by the |G_{D^a}| = a^(n-1)|G_D| check
SCALING_FACTORS = (2, 3)

# ceiling lemma grid: a in [2, 12], b in [a, 20] in steps of 1/4
CEILING_LEMMA_A_MAX = 12
CEILING_LEMMA_B_MAX = 20
CEILING_LEMMA_B_STEP_DENOMINATOR = 4

# concavity lemma grid: entries drawn from these values, tuples of length 2 and 3
CONCAVITY_GRID_VALUES = ("1/2", "1", "3/2", "2", "3")
CONCAVITY_GRID_LENGTHS = (2, 3)

LOG_FORMAT = "[%(name)s] %(levelname)s %(message)s"
