"""Barrier survival probabilities for AR(p) processes.

Compute, simulate, classify and empirically verify p_N(x), the probability
that an AR(p) process stays at or below a constant barrier through time N.
"""

from .coeffs import (ARParams, Branch, CoeffLimit, CoeffOverflowError,
                     CoeffSolution, LimitKind, RootSolveError, ar2_closed_form,
                     ar2_coeff_at, ar_params, charpoly_roots, coeff_limit_class,
                     coeff_recursion)
from .regions import (Major, RegionLabel, Sub, ar3_integrated_region,
                      classify_ar2, in_delta_p)
from .innovations import (HypothesisReport, InnovationSpec, Kind, TheoremId,
                          exponential_centered, gaussian, hypothesis_check,
                          rademacher, sample, spec_from_json, two_point, uniform)
from .rng import RNGStream
from .mc import (ConstraintError, NonFiniteSampleError, ReductionKind,
                 ReductionReport, SurvivalCurve, crossing_time_from_innovations,
                 estimate_survival, pair_survival_frequency,
                 pathwise_reduction_check, simulate_crossing_time)
from .oracle import (BudgetExceededError, enumerate_survival,
                     gaussian_pair_probability, pair_orthant_probability)
from .asymptotics import DecayClass, DecayFit, Prediction, fit_decay, predict
from .bounds import (BoundMethod, DegenerateBoundError, LowerBoundResult,
                     PreconditionError, e1_rate_bound, e3_sign_change_index,
                     exp_lower_bound, integrate_params)

__version__ = "0.1.0"
