"""Toolkit for Markovian jump diffusions driven by compound Poisson noise
with Erlang jump sizes: exact samplers, closed-form densities and traveling
waves, master-equation residual certificates, and a Monte Carlo engine for
the barycenter-coupled mean-field swarm."""

from .closedform import (
    DivergenceError,
    NormalizationError,
    TanhTransientLaw,
    TiltedOuLaw,
    TransientLaw,
    WaveSolution,
    cumulant,
    gaussian_pair_mixture,
    gumbel_wave,
    laplace_transform_linear,
    mellin_moment,
    ou_tanh_stationary,
    stationary_m1,
    stationary_ou_m2,
    tanh_transient,
    transient_m1_linear,
    whittaker_wave,
)
from .master import (
    BoundaryMassError,
    ConstantDiffusion,
    ConstantDrift,
    ConstantRate,
    ExpDecayCentered,
    GridFunction,
    GridSpec,
    LinearRestoring,
    ModelSpec,
    TanhRepulsive,
    ZeroDiffusion,
    ZeroDrift,
    differential_generator,
    fit_convergence_order,
    generator_gap,
    integral_generator,
    stationary_residual,
    wave_residual,
)
from .noise import (
    ErlangJumpLaw,
    RngStream,
    SymmetricLaplaceLaw,
    TiltedJumpLaw,
    compound_poisson_increment,
    erlang_pdf,
    erlang_sample,
    laplace_sample,
    tilted_sample,
)
from .simulate import (
    EmpiricalDensity,
    SimConfig,
    SwarmSeries,
    ThinningError,
    TrajectoryBatch,
    empirical_density,
    estimate_speed,
    ks_distance,
    sample_linear_shot_noise_exact,
    simulate_ou_tanh,
    simulate_paths,
    simulate_swarm,
    simulate_tanh,
)
from .specfun import (
    Accuracy,
    bessel_i,
    bessel_k,
    digamma,
    erlang_survival,
    kummer_1f1,
    kummer_u,
    log_gamma,
    whittaker_w0,
)

__version__ = "0.1.0"
