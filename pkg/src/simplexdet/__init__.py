"""Undetected-error analysis of punctured simplex codes."""

from .construction import (
    BinaryMatrix,
    CodeParams,
    build_dkst,
    build_generalized,
    build_hk_prefix,
    check_equivalence,
    decompose,
)
from .errors import BudgetExceeded, InvariantViolation, ParameterError
from .weights import (
    WeightDistribution,
    a_d,
    brute_force_distribution,
    min_distance,
    row_weights,
    weight_distribution,
)

from .uepoly import DualUePolynomial, UePolynomial, dual_pue_of, evaluate, evaluate_dual, pue_of
from .classifier import (
    Verdict,
    classify,
    decide_proper,
    is_good,
    is_proper,
    is_satisfactory,
    ugly_by_min_weight,
)
from .asymptotics import (
    proper_length_count,
    properness_threshold,
    scan_proper,
    ugliness_onset,
    ugly_ranges,
)
from .tables import emit_fig1, run_table

__version__ = "0.1.0"
