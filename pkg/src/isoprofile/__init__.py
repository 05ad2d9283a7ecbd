"""Sharp isoperimetric profiles for log-concave measures on convex bodies.

    profile_g(x)          log-concave profile point (x, gamma, G(1/x))
    profile_g_n(x, n)     uniform-distribution profile in dimension n
    bound_gap_report      closed-form bounds against the sharp profile
    needle                one-dimensional brute-force oracles
    montecarlo            Monte Carlo checks on cubes, balls and simplices
"""

from .bodies import (
    BodySpec, CornerSubcube, ExponentialTilt, Halfspace, KDimSubcube, Norm, Shape, Uniform,
    body_diameter, sample_point,
)
from .bounds import (
    BoundReport, GridSpec, bl_hypercube_min, bobkov_entropy, bound_gap_report, gaussian_I,
    gaussian_lb, klm_residual, lb_klm, lb_simple, ub_klm_form, ub_log2,
)
from .errors import (
    ConfigurationError, ConvergenceError, DomainError, InfeasibleCut, IsoprofileError,
    OracleDisagreement, UnsupportedCombinationError, UsageError,
)
from .logconcave import ProfilePoint, gamma_of_x, profile_g, x_of_gamma, xg_of_gamma, xg_of_x, xg_slope
from .montecarlo import (
    CheckResult, McEstimate, estimate_measure, estimate_minkowski, fold_x, run_theorem_check,
)
from .needle import (
    Family, NeedleInstance, NeedleWeight, lemma_min_lhs, minimize_exp_family,
    minimize_linear_family, needle_sweep, three_set_functional,
)
from .uniform import UniformProfilePoint, gamma_of_x_n, profile_g_n, x_of_gamma_n, xg_of_gamma_n, xg_of_x_n

__version__ = "0.1.0"
