"""Scalable information-divergence bounds for quantities of interest.

The package computes classical information divergences and QoI bounds on
finite supports, the goal-oriented (CGF-optimized) bounds that remain tight
for high-dimensional product and Markov structures, their Markov-chain rate
analogues, exact finite-volume Gibbs-measure bounds, and closed-form
Ising/mean-field phase-diagram sweeps.
"""

from .divergences import (
    ClassicalBounds,
    DiscreteDistribution,
    DivergenceReport,
    Observable,
    chi_squared,
    classical_qoi_bounds,
    dashti_stuart_half_width,
    divergence_report,
    hellinger,
    iid_scaled_divergences,
    relative_entropy,
    renyi_divergence,
    total_variation,
)
from .errors import (
    AbsoluteContinuityError,
    CgfDomainError,
    DimensionError,
    EnumerationLimitError,
    InfoscaleError,
    NormalizationError,
    NumericsError,
    ParameterError,
    StructureError,
    UnboundedObservableError,
    UnsupportedModelError,
)
from .exact_models import (
    Ising1DParams,
    Ising2DParams,
    MeanFieldParams,
    PhasePoint,
    cross_model_re_rate,
    ising1d_quantities,
    ising2d_critical_beta,
    ising2d_quantities,
    meanfield_solve,
    model_cgf,
    phase_bound,
)
from .gibbs import (
    GibbsMeasure,
    Interaction,
    LatticeVolume,
    SpinCluster,
    finite_volume_xi,
    gibbs_relative_entropy,
    hamiltonian,
    ising_interaction,
    linearized_gibbs_bound,
    log_partition,
    spin_product_cluster,
    triple_norm,
    triple_norm_xi,
)
from .goal_oriented import (
    AnalyticCgf,
    CgfSource,
    EmpiricalCgf,
    ExponentialFamily,
    GoalBound,
    centered_cgf,
    expfam_relative_entropy,
    expfam_xi_bounds,
    linearized_half_width,
    xi_bounds,
    xi_tensorized,
)
from .markov import (
    CheapRateBounds,
    RateBound,
    TransitionMatrix,
    cheap_rate_bounds,
    chi2_rate,
    integrated_autocorrelation,
    lambda_pg,
    path_divergence_report,
    relative_entropy_rate,
    renyi_rate,
    stationary_distribution,
    xi_rate_bounds,
)
from .sweep import SweepConfig, figure_preset, run_sweep

__version__ = "0.1.0"
