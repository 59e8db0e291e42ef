"""Relative Renyi entropy between shifted copies of non-regular densities."""

from .asymptotics import (
    LimitConstant,
    ScalingRegime,
    endpoint_limit_constant,
    finsler_metric,
    g_of,
    limit_constant,
    scaling_regime,
)
from .divergence import (
    DivergenceResult,
    RenyiOrder,
    affinity_deficiency,
    endpoint_contribution,
    hellinger_sq,
    kl_divergence,
    renyi_divergence,
)
from .errors import ConvergenceError, DomainError
from .families import (
    Beta,
    EndpointBehavior,
    Family,
    Gamma,
    LocationShift,
    Support,
    Weibull,
    builtin_examples,
    density,
    density_prime,
    endpoint_behavior,
    exponential,
    family_from_json,
    family_to_json,
    fisher_integral,
    fisher_integral_tail,
    log_density,
    parse_family,
    uniform,
)
from .harness import (
    ConvergenceReport,
    UniformityReport,
    convergence_study,
    emit_report,
    lemma_study,
    uniformity_study,
)
from .ldp_bounds import BoundResult, alpha1_bar, alpha2_bar, optimize_over_s
from .quadrature import QuadratureConfig, integrate_singular
from .specfun import beta_fn, ln_gamma, log_beta

__version__ = "0.1.0"
