"""
Constants used throughout the geosched package.

This module contains default values and constant strings shared by the
simulator, the controllers and the CLI. Import from here rather than
hardcoding values elsewhere.
"""

from datetime import datetime, timedelta
from pathlib import Path

# Default paths
DEFAULT_CONFIG_DIR = Path.home() / ".geosched"
DEFAULT_CONFIG_FILE = DEFAULT_CONFIG_DIR / "config.json"
DEFAULT_OUTPUT_DIR = Path("reports")

# Worker pools
DEFAULT_THREADS = 4
THREADS_ENV_VAR = "GEOSCHED_THREADS"

# Resource dimensions of VM demands and PM capacities, in this order
RESOURCE_TYPES = ("cpu", "ram")

# Time
DEFAULT_STEP = timedelta(hours=1)
DEFAULT_START = datetime(2015, 1, 1)
DEFAULT_HORIZON_HOURS = 672

# Forecast window
DEFAULT_WINDOW_LENGTH = 12
DEFAULT_SMA_K = 3
DEFAULT_HOLT_ALPHA = 0.5
DEFAULT_HOLT_BETA = 0.5

# Forecast modes
FORECAST_MODE_ORACLE = "oracle"
FORECAST_MODE_METHOD = "method"
SUPPORTED_FORECAST_MODES = [FORECAST_MODE_ORACLE, FORECAST_MODE_METHOD]
FORECAST_METHODS = ["persistence", "sma", "double_exponential"]

# Forecast error presets: (relative price sigma, additive temperature sigma in °C)
ERROR_LEVELS: dict[str, tuple[float, float]] = {
    "none": (0.0, 0.0),
    "small": (0.01, 1.41),
    "medium": (0.03, 3.0),
    "large": (0.05, 5.0),
}

# Cooling overhead anchors: (outside temperature °C, pPUE)
FREE_COOLING_ANCHOR = (-3.9, 1.05)
MIXED_COOLING_ANCHOR = (15.6, 1.17)
MECHANICAL_THRESHOLD_C = 25.0
MECHANICAL_PPUE = 1.30

# Controllers
CONTROLLER_GA = "ga"
CONTROLLER_BFD = "bfd"
CONTROLLER_BRUTE = "brute"
SUPPORTED_CONTROLLERS = [CONTROLLER_GA, CONTROLLER_BFD, CONTROLLER_BRUTE]

# Genetic algorithm defaults
GA_POPULATION_SIZE = 100
GA_GENERATIONS = 200
GA_CROSSOVER_RATE = 0.7
GA_MUTATION_RATE = 0.3
GA_ELITE_COUNT = 1
GA_PROPAGATE_FRACTION = 0.5
GA_ACTION_PROBABILITY = 0.1
GA_TOURNAMENT_SIZE = 2

# Exhaustive search
ORACLE_MAX_COMBINATIONS = 10**6

# Fitness weight defaults
DEFAULT_W_ENERGY = 1.0
DEFAULT_W_CONSOLID = 0.3
DEFAULT_W_MIGRATION = 0.1
DEFAULT_W_CONSTRAINT = 5.0

# Watts to kilowatts
WATTS_PER_KILOWATT = 1000.0

# Floating point slack for capacity comparisons
CAPACITY_EPSILON = 1e-9

# Report formats
REPORT_JSON_NAME = "report.json"
REPORT_CSV_NAME = "steps.csv"
COMPARISON_CSV_NAME = "comparison.csv"
SWEEP_CSV_NAME = "sweep.csv"
STEP_CSV_HEADER = [
    "step",
    "timestamp",
    "energy_cost_usd",
    "migrations",
    "consolid",
    "pending",
]
TRACE_CSV_HEADER = [
    "timestamp",
    "location",
    "price_usd_per_kwh",
    "temperature_c",
]
COMPARISON_CSV_HEADER = [
    "controller",
    "seed",
    "energy_cost_usd",
    "migrations",
    "mean_consolid",
    "pending_vm_steps",
    "fitness_total",
]

# Exit codes
EXIT_FAILURE = 1
EXIT_USAGE = 2
