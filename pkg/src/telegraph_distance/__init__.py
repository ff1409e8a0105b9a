"""Telegraph-process distributions.

``telegraph`` covers one process X(t); ``distance`` gives the law of
``|X1(t) - X2(t)|`` for two independent ones; ``montecarlo`` simulates
paths exactly and is used to cross-check both.
"""

from .distance import (
    ClippedWindow,
    ConditionalProbs,
    DistancePairParams,
    PhiBreakdown,
    atom_masses,
    clipped_window,
    conditional_probs,
    g_function,
    h_function,
    integral_term,
    integral_terms,
    phi,
    phi_values,
    q_function,
)
from .errors import (
    BranchError,
    ConvergenceError,
    DomainError,
    EmptyIntersectionError,
    EmptySampleError,
    NearlyEqualSpeedsError,
    QuadratureConvergenceError,
    RegimeError,
    SeriesConvergenceError,
    TelegraphError,
)
from .montecarlo import EmpiricalCdf, SimConfig, ks_distance, simulate_distance, simulate_position
from .quadrature import QuadratureControl
from .specfun import SeriesControl, SeriesValue
from .telegraph import (
    IntervalProb,
    TelegraphParams,
    cdf,
    cdf_gegenbauer,
    centered_interval_prob,
    density_ac,
    interval_prob,
    singular_mass,
)

__version__ = "0.1.0"
