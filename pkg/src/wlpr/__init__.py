"""Binary subdivision schemes built from weighted local polynomial regression.

Choose a weight kernel, a non-integer bandwidth and a polynomial degree,
build the mask, refine data with it and analyse convergence, approximation
order and noise reduction.
"""
from .convergence import (AsymptoticProfile, ConvergenceReport, DifferenceMask, SchemeFamily,
                          Verdict, c1_criterion_d01, certify_family, difference_mask,
                          estimate_r_numeric, general_profile, positive_mask_verdict,
                          r_l1_norm)
from .engine import (Boundary, RefinableData, basic_limit_samples, check_monotone_preserved,
                     check_no_overshoot, refine_k, refine_once, variance_ratio)
from .errors import (BandwidthTooSmall, ConfigError, DataTooShort, DegreeTooHigh, DomainError,
                     IntegerBandwidth, LevelBudgetExceeded, MaskNotPositive, NotPi0Reproducing,
                     NumericalError, OutOfScope, QuadratureFailure, SingularNormalEquations,
                     ValidationError, WLPRError)
from .kernels import WeightKernel, eval_phi, moment_integral, parse_kernel
from .masks import (Mask, SchemeSpec, Situation, build_mask, build_mask_closed_form,
                    deslauriers_dubuc_mask, verify_reproduction)
from .metrics import (approx_denoise_scores, capability_scores, denoise_factor, eta_constant,
                      moment_scores, pareto_front)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
