"""Optimal Parseval frames for independent Bernoulli erasure channels."""

from .comparison import ComparisonReport, compare_models, expected_one_erasure_error
from .errors import ConsistencyError, ConvergenceError, InvalidInputError, StatisticalError
from .frames import (
    Frame,
    canonical_parseval,
    certify_parseval,
    construct_parseval_with_norms,
    frame_operator,
    harmonic_frame,
)
from .metrics import (
    ErasurePattern,
    ErasureReport,
    conditional_expected_error,
    d_p_r,
    monte_carlo_error,
    prob_N_equals_r,
)
from .probability import (
    ErasureDistribution,
    RpmDesign,
    TildeWeights,
    distribution_index,
    rpm_design,
    tilde_weights,
)

__version__ = "0.1.0"
