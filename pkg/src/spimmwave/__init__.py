"""Spectral-efficiency toolkit for spatial path index modulation over mmWave beams."""

from .beamforming import (
    BeamformerConfig,
    PatternAlphabet,
    build_abf,
    effective_channel,
    pattern_alphabet,
    transmit,
)
from .capacity import (
    CovarianceSet,
    SpectralEfficiencyReport,
    asymptotic_covariances,
    conditional_symbol_rate,
    covariances,
    dirichlet_gain,
    mmwave_rate,
    pair_covariance_det,
    pattern_rate_bound,
    se_comparison,
    spim_rate,
    spim_rate_two_path,
    total_rate_approx,
)
from .channel import (
    ChannelRealization,
    build_channel,
    min_angle_separation,
    normalized_from_physical,
    sample_channel,
    steering_vector_rx,
    steering_vector_tx,
)
from .conditions import (
    MarginQuery,
    ThresholdResult,
    decay_condition_value,
    gamma_crossover,
    geometric_mean_threshold,
    high_snr_superiority,
    spim_margin,
    two_path_margin,
)
from .errors import (
    DimensionError,
    NoRootError,
    NotPositiveDefiniteError,
    ParameterError,
    SpecValidationError,
    SpimmwaveError,
)
from .montecarlo import McEstimate, MonteCarloSpec, mc_mutual_information, mc_spatial_information
from .numerics import hermitian_det, hermitian_logdet, make_rng, sample_complex_gaussian

__version__ = "0.1.0"

__all__ = [
    "BeamformerConfig",
    "ChannelRealization",
    "CovarianceSet",
    "DimensionError",
    "MarginQuery",
    "McEstimate",
    "MonteCarloSpec",
    "NoRootError",
    "NotPositiveDefiniteError",
    "ParameterError",
    "PatternAlphabet",
    "SpecValidationError",
    "SpectralEfficiencyReport",
    "SpimmwaveError",
    "ThresholdResult",
    "asymptotic_covariances",
    "build_abf",
    "build_channel",
    "conditional_symbol_rate",
    "covariances",
    "decay_condition_value",
    "dirichlet_gain",
    "effective_channel",
    "gamma_crossover",
    "geometric_mean_threshold",
    "hermitian_det",
    "hermitian_logdet",
    "high_snr_superiority",
    "make_rng",
    "mc_mutual_information",
    "mc_spatial_information",
    "min_angle_separation",
    "mmwave_rate",
    "normalized_from_physical",
    "pair_covariance_det",
    "pattern_alphabet",
    "pattern_rate_bound",
    "sample_channel",
    "sample_complex_gaussian",
    "se_comparison",
    "spim_margin",
    "spim_rate",
    "spim_rate_two_path",
    "steering_vector_rx",
    "steering_vector_tx",
    "total_rate_approx",
    "transmit",
    "two_path_margin",
]
