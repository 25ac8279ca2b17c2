"""
Toolkit Constants
"""
from enum import Enum


class OutageMethod(str, Enum):
    """How an outage probability was obtained"""
    EXACT_NUMERIC = "exact_numeric"
    GAMMA_CLOSED = "gamma_closed"
    GAMMA_NUMERIC = "gamma_numeric"
    ASYMPTOTIC = "asymptotic"
    MONTE_CARLO = "monte_carlo"
    SURROGATE = "surrogate"


class PdfMethod(str, Enum):
    """How a density grid was produced"""
    CF_FFT = "cf_fft"
    HANKEL = "hankel"
    SERIES = "series"
    GAMMA_FIT = "gamma_fit"
    HISTOGRAM = "histogram"


class ChannelVariable(str, Enum):
    """X is the desired cascade amplitude, Y the interference envelope"""
    X = "X"
    Y = "Y"


class MomentExpression(str, Enum):
    """Sample moments the Monte Carlo oracle can estimate"""
    EX = "EX"
    VAR_X = "VarX"
    EY2 = "EY2"
    EY4 = "EY4"


class LabelMethod(str, Enum):
    """Labelling method for surrogate datasets"""
    EXACT_NUMERIC = "exact_numeric"
    GAMMA_NUMERIC = "gamma_numeric"
    MONTE_CARLO = "monte_carlo"


class SweepAxis(str, Enum):
    """Scenario parameter a sweep varies"""
    SNR_DB = "snr_db"
    INR_DB = "inr_db"
    N_ELEMENTS = "n_elements"
    GAMMA_TH_DB = "gamma_th_db"


# CLI spelling of the outage methods
OUTAGE_METHOD_ALIASES = {
    "exact": OutageMethod.EXACT_NUMERIC,
    "gamma-closed": OutageMethod.GAMMA_CLOSED,
    "gamma-numeric": OutageMethod.GAMMA_NUMERIC,
    "asymptotic": OutageMethod.ASYMPTOTIC,
    "mc": OutageMethod.MONTE_CARLO,
    "surrogate": OutageMethod.SURROGATE,
}

# CLI spelling of the pdf methods
PDF_METHOD_ALIASES = {
    "exact": "exact",
    "gamma_fit": "gamma_fit",
    "gamma-fit": "gamma_fit",
    "mc": "mc",
}

# Exit codes
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

# CSV schemas
DATASET_COLUMNS = [
    "gamma_th_db", "gamma_bar_db", "sigma_sr", "sigma_rd",
    "sigma_ir", "sigma_id", "n_elements", "p_out",
]
FEATURE_COLUMNS = DATASET_COLUMNS[:-1]
TARGET_COLUMN = "p_out"
PDF_COLUMNS = ["value", "density", "method"]
SWEEP_COLUMNS = ["axis_value", "method", "p_out", "err"]
OUTAGE_COLUMNS = ["method", "p_out", "err", "flags"]
TRAINING_COLUMNS = ["epoch", "train_mse", "validation_mse", "damping"]
REGRESSION_COLUMNS = ["p_out_true", "p_out_pred"]
TIMING_COLUMNS = ["approach", "mse", "seconds", "n_samples"]
CSV_FLOAT_FORMAT = "%.17g"

# Exact-pdf grids
X_GRID_POINTS = 2 ** 16
X_GRID_EXTENT_SD = 12.0
Y_GRID_POINTS = 512
Y_GRID_EXTENT_SD = 16.0
TAIL_MASS_GUARD = 1e-6
NORMALIZATION_TOLERANCE = 1e-3

# Outage accuracy contract
OP_ABS_TOLERANCE = 1e-8
OP_REL_TOLERANCE = 1e-3
OP_DEGRADED_BELOW = 1e-6

# Gamma-pole regularization of the explicit Y series
SERIES_POLE_EPSILON = 1e-4
SERIES_POLE_MISMATCH = 1e-2

# Surrogate
LAYER_SIZES = (7, 20, 30, 20, 1)
SPLIT_FRACTIONS = (0.7, 0.1, 0.2)
LM_LAMBDA0 = 1e-3
LM_LAMBDA_UP = 10.0
LM_LAMBDA_DOWN = 0.1
LM_LAMBDA_MAX = 1e12
LM_MAX_EPOCHS = 1000
LM_PATIENCE = 6
LM_MAX_RETRIES = 12
LOG_TARGET_FLOOR = 1e-12
EXTRAPOLATION_MARGIN = 0.10
MODEL_FORMAT_VERSION = 1

# Dataset sampling ranges (inclusive bounds)
DATASET_RANGES = {
    "gamma_th_db": (-10.0, 10.0),
    "snr_db": (0.0, 30.0),
    "inr_db": (-10.0, 15.0),
    "sigma": (0.5, 2.0),
    "n_elements": (2, 64),
}

# Asymptotic slope window (dB of average SIR)
SLOPE_WINDOW_DB = (50.0, 60.0)
