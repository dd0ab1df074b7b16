"""
Configuration settings for mpf-lab
"""

TOOL_NAME = "mpf-lab"
VERSION = "0.1.0"

# Seeding
DEFAULT_SEED = 1234
SEED_ENV_VAR = "MPF_LAB_SEED"

# Numerical tolerances
HERMITIAN_TOLERANCE = 1e-12
UNITARY_TOLERANCE = 1e-10
NORM_TOLERANCE = 1e-10
IMAGINARY_TOLERANCE = 1e-10
COMMUTATOR_TOLERANCE = 1e-12

# Capacity limits
MAX_DIMENSION = 4096  # 12 qubits, or the largest spin-boson truncation
MAX_OPERATOR_DIMENSION = 256  # propagators are materialized only up to here
MAX_ENUMERATION = 10**6  # candidate sequences per search
MAX_TROTTER_STEPS = 10**6

# Condition-number thresholds for well-conditioned MPFs
S1_CONDITION_THRESHOLD = 3.0
S2_CONDITION_THRESHOLD = 1.7

# Trotter exponents used for the five-spin Ising study (S_1 base)
WELL_CONDITIONED_SEQUENCES = (
    (1, 2), (1, 3), (2, 4), (2, 5), (1, 2, 6), (1, 2, 7),
)
ILL_CONDITIONED_SEQUENCES = (
    (6, 7), (3, 4, 5, 6, 7), (1, 2, 3, 4, 5, 6, 7),
)

# CNOT cost per gate kind, as transpiled to a CNOT + single-qubit basis
DEFAULT_GATE_COSTS = {
    "rzz": 1,
    "c1_rzz": 8,
    "c1_u": 2,
    "c2_rzz": 20,
    "c2_rx": 7,
}

# Pauli pairs commuting with R_ZZ(theta)
TWIRL_SET_ZZ = ("II", "XX", "YY", "ZZ", "XY", "YX", "ZI", "IZ")

# ZNE fitting
ZNE_MIN_POINTS = 4
ZNE_B_GRID_SIZE = 50
ZNE_B_GRID_MIN = 1e-3
ZNE_B_GRID_MAX = 10.0

# File paths
OUTPUT_DIR = "data/output"

# Per-experiment defaults; a config file or flag may only set keys listed here
EXPERIMENT_DEFAULTS = {
    "weights": {
        "k": "1,2",
        "base": "s1",
        "symmetric": "auto",
    },
    "ising-demo": {
        "n_spins": 5,
        "J": 0.5,
        "h": 1.0,
        "t": 0.5,
        "observable": "z0",
        "initial_state": 0,
        "tilt": 0.0,
        "max_k": 10,
        "eps_prime": 1e-3,
        "alpha": 1.0,
        "well_conditioned": ";".join(",".join(map(str, k)) for k in WELL_CONDITIONED_SEQUENCES),
        "ill_conditioned": ";".join(",".join(map(str, k)) for k in ILL_CONDITIONED_SEQUENCES),
    },
    "bernoulli-demo": {
        "p": 0.3,
        "samples": "100,1000,10000,100000",
        "l_max": 6,
        "base": "s2",
        "repeats": 100,
    },
    "zne-demo": {
        "e_ideal": 0.8,
        "b": 0.5,
        "d": 0.0,
        "shots": 100000,
        "points": 20,
        "c_min": 0.1,
        "c_max": 1.5,
        "repeats": 10,
    },
    "lcu-cost": {
        "k": "1,2,7",
        "n_spins": 5,
    },
    "scaling": {
        "nq": 11,
        "eps": 1e-4,
        "t": 10.0,
        "alpha": 0.0,
    },
    "search": {
        "l": 2,
        "base": "s1",
        "symmetric": "auto",
        "range": "1:10",
        "threshold": 0.0,
        "objective": "min-norm1",
        "workers": 4,
        "limit": 20,
    },
    "repetitions": {
        "models": "1,1;1,2;2,1",
        "eps": "1e-2,1e-3",
        "orders": "1,2,4",
        "t": 10.0,
        "metric": "operator-norm",
        "omega": 1.0,
        "omega_s": -1.0,
        "delta": 0.0,
        "g": 0.5,
    },
}

# CSV columns per artifact
ISING_CSV_HEADERS = [
    "kind", "sequence", "k_max", "norm1", "epsilon_prime", "value", "abs_error", "rel_error",
]
BERNOULLI_CSV_HEADERS = [
    "l", "base", "norm1", "samples", "repeats", "median_error", "mean_error", "predicted_median", "bound",
]
ZNE_CSV_HEADERS = ["repeat", "kind", "stretch", "value", "a", "b", "d"]
SEARCH_CSV_HEADERS = ["rank", "sequence", "k_max", "norm1", "norm1_exact", "weights"]
GATE_CSV_HEADERS = ["gate", "cnots", "lcu", "classical"]
REPETITION_CSV_HEADERS = [
    "n_qubits", "modes", "n_max", "eps_t", "order", "metric", "k", "repetitions", "error",
]
