"""Multiscale sample and fuzzy entropy with mean, variance and SD coarse-graining."""

__version__ = "0.1.0"

from .coarse import CoarseGrainSpec, Moment, all_shifted_grains, coarse_grain
from .entropy import (
    AbsoluteTolerance,
    EntropyParams,
    EntropyValue,
    MatchCounts,
    PhiPair,
    RelativeTolerance,
    UndefinedCause,
    fuzzy_entropy,
    fuzzy_phi,
    fuzzy_width,
    resolve_tolerance,
    sample_entropy,
    sample_match_counts,
)
from .multiscale import (
    Estimator,
    MultiscaleConfig,
    MultiscaleProfile,
    WindowedProfiles,
    multiscale_profile,
    sliding_window_profiles,
)
from .stats import bh_fdr_adjust, levene_test, summarize, welch_t_test
