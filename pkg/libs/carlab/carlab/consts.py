import math

import numpy as np

DEFAULT_DOMAIN_LENGTH = math.pi
DEFAULT_FINAL_TIME = 1.0

# model
SYMMETRY_TOLERANCE = 1e-12
ELLIPTICITY_TOLERANCE = 1e-12
DEFAULT_VALIDATION_SAMPLES = 64
LIPSCHITZ_SLACK = 1e-9
DEFAULT_LIPSCHITZ_PAIRS = 100
DEFAULT_AMPLITUDE_CAP = 10.0
RANDOM_FIELD_MODES = 6

# discretize
BOUNDARY_ZERO_TOLERANCE = 1e-14
BC_DEFECT_TOLERANCE = 1e-2
TRACE_CALIBRATION_NX = 400
TRACE_CALIBRATION_MARGIN = 0.1

# forward
PICARD_STEP_LIMIT = 0.5
DEFAULT_PICARD_MAX = 50
DEFAULT_PICARD_TOL = 1e-12
MAX_TIME_DERIVATIVE_ORDER = 2

# carleman
MAX_EXPONENT = float(np.log(np.finfo(float).max))
DEFAULT_S_LIST = (2.0, 4.0, 8.0, 16.0, 32.0)
DEFAULT_LAMBDA_LIST = (2.0, 4.0, 8.0)

# stability
SLOPE_TOLERANCE = 0.02
HOLDER_RESIDUAL_SLACK = 1e-9
LINEAR_CALIBRATION_MARGIN = 10.0
LOG_RATE_SLACK = 0.1
DEFAULT_HIGH_MODE = 7
APRIORI_SLICE_COUNT = 20

# reconstruct
RATE_SLOPE_SLACK = 0.1
NOISELESS_AMPLIFICATION_CAP = float(1.0 / np.sqrt(np.finfo(float).eps))
# noiseless projections below this share of the largest one are round-off
NOISELESS_COEFFICIENT_FLOOR = float(np.sqrt(np.finfo(float).eps))
DEFAULT_DELTA_LIST = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)

DEFAULT_MAX_CONCURRENCY = 4
