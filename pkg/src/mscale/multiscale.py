"""Multiscale sample/fuzzy entropy, with and without refined-composite averaging.

The twelve classic variants are the product of two estimators (sample, fuzzy),
three coarse-graining moments (mean, variance, standard deviation) and the
refined-composite switch. The tolerance is resolved once on the signal handed
in and reused unchanged at every scale.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from .coarse import Moment, _grain, grain_length
from .entropy import (
    EntropyParams,
    EntropyValue,
    UndefinedCause,
    _counts,
    _log_ratio,
    _phi,
    as_signal,
    fuzzy_width,
    resolve_tolerance,
)
from .errors import BadParamError, BadWindowError, DegenerateScaleError, TooShortError

__all__ = [
    "Estimator",
    "MultiscaleConfig",
    "MultiscaleProfile",
    "ShortGrainWarning",
    "WindowedProfiles",
    "multiscale_profile",
    "sliding_window_profiles",
]


class ShortGrainWarning(UserWarning):
    """Coarse grains at the largest scale hold fewer than 10**m samples."""


class Estimator(str, enum.Enum):
    SAMPLE = "sample"
    FUZZY = "fuzzy"


@dataclass(frozen=True)
class MultiscaleConfig:
    estimator: Estimator = Estimator.FUZZY
    moment: Moment = Moment.MEAN
    refined_composite: bool = False
    scales: tuple[int, int] = (1, 20)
    params: EntropyParams = field(default_factory=EntropyParams)

    def __post_init__(self):
        object.__setattr__(self, "estimator", Estimator(self.estimator))
        object.__setattr__(self, "moment", Moment(self.moment))
        lo, hi = (int(s) for s in self.scales)
        object.__setattr__(self, "scales", (lo, hi))
        first = 2 if self.moment.is_spread else 1
        if lo < 1:
            raise BadParamError(f"scales must be positive, got {lo}")
        if lo < first:
            raise DegenerateScaleError(
                f"{self.moment.value} coarse-graining needs scales starting at {first} or more, got {lo}"
            )
        if hi < lo:
            raise BadParamError(f"empty scale range {lo}:{hi}")

    @property
    def taus(self) -> range:
        return range(self.scales[0], self.scales[1] + 1)

    @property
    def name(self) -> str:
        base = {"sample": "MSE", "fuzzy": "MFE"}[self.estimator.value]
        return ("RC" if self.refined_composite else "") + base + "_" + self.moment.value


@dataclass(frozen=True)
class MultiscaleProfile:
    """Entropy per scale; ``tolerance_used`` is the match radius resolved on the original signal."""

    entries: dict[int, EntropyValue]
    config: MultiscaleConfig
    tolerance_used: float

    @property
    def taus(self) -> list[int]:
        return list(self.entries)

    def values(self) -> np.ndarray:
        """Entropy per scale as floats, NaN where undefined."""
        return np.array([float(v) for v in self.entries.values()])

    def __getitem__(self, tau: int) -> EntropyValue:
        return self.entries[tau]


@dataclass(frozen=True)
class WindowedProfiles:
    window_len: int
    hop: int
    profiles: list[tuple[int, MultiscaleProfile]]

    @property
    def starts(self) -> list[int]:
        return [s for s, _ in self.profiles]

    def matrix(self) -> np.ndarray:
        """Array of shape (n_windows, n_scales), NaN where undefined."""
        return np.array([p.values() for _, p in self.profiles])


def _entropy_at_scale(x: np.ndarray, tau: int, config: MultiscaleConfig, r: float) -> EntropyValue:
    # r is the match radius for sample entropy and the kernel width for fuzzy entropy
    m, n = config.params.m, config.params.n
    offsets = range(1, tau + 1) if config.refined_composite else range(1, 2)
    # every grain must hold two (m+1)-templates
    if any(grain_length(x.shape[0], tau, u) < m + 2 for u in offsets):
        return EntropyValue.undefined(UndefinedCause.TOO_SHORT)
    grains = [_grain(x, tau, u, config.moment) for u in offsets]
    k = len(grains)
    if config.estimator is Estimator.SAMPLE:
        b_m = b_m1 = 0
        for g in grains:
            c = _counts(g, m, r)
            b_m += c.b_m
            b_m1 += c.b_m1
        return _log_ratio(b_m1 / k, b_m / k)
    phi_m = phi_m1 = 0.0
    for g in grains:
        p = _phi(g, m, n, r)
        phi_m += p.phi_m
        phi_m1 += p.phi_m1
    return _log_ratio(phi_m1 / k, phi_m / k)


def multiscale_profile(signal, config: MultiscaleConfig) -> MultiscaleProfile:
    """Entropy of the coarse-grained signal at every scale in ``config.scales``.

    Without refined composite each scale uses the single grain that starts at
    the first sample. With it, the estimator's internal quantities (match
    counts or fuzzy phi values) are averaged over all ``tau`` offset grains
    before the single log ratio is taken. Scales whose grains are too short
    for two (m+1)-templates come back as ``Undefined(TOO_SHORT)``.
    """
    x = as_signal(signal)
    if x.shape[0] < config.scales[1]:
        raise TooShortError(
            f"{x.shape[0]} samples cannot form one block at scale {config.scales[1]}"
        )
    r = resolve_tolerance(x, config.params)
    width = fuzzy_width(x, config.params) if config.estimator is Estimator.FUZZY else r
    entries = {tau: _entropy_at_scale(x, tau, config, width) for tau in config.taus}
    return MultiscaleProfile(entries, config, r)


def window_hop(window_len: int, overlap_fraction: float) -> int:
    if not 0.0 <= overlap_fraction < 1.0:
        raise BadWindowError(f"overlap must lie in [0, 1), got {overlap_fraction!r}")
    hop = int(round(window_len * (1.0 - overlap_fraction)))
    if hop < 1:
        raise BadWindowError(
            f"window of {window_len} with overlap {overlap_fraction} gives a zero hop"
        )
    return hop


def sliding_window_profiles(
    signal, window_len: int, overlap_fraction: float, config: MultiscaleConfig
) -> WindowedProfiles:
    """Independent multiscale profiles on windows sliding along ``signal``.

    Windows start at sample 0 and advance by
    ``round(window_len * (1 - overlap_fraction))``; a trailing partial window is
    dropped. Each window resolves its own tolerance.
    """
    x = as_signal(signal)
    if int(window_len) != window_len or window_len < 1:
        raise BadWindowError(f"window length must be a positive integer, got {window_len!r}")
    window_len = int(window_len)
    if window_len > x.shape[0]:
        raise BadWindowError(f"window of {window_len} exceeds signal length {x.shape[0]}")
    hop = window_hop(window_len, overlap_fraction)
    m = config.params.m
    if window_len // config.scales[1] < 10 ** m:
        warnings.warn(
            f"grains at scale {config.scales[1]} hold {window_len // config.scales[1]} samples,"
            f" fewer than 10**m = {10 ** m}",
            ShortGrainWarning,
            stacklevel=2,
        )
    profiles = [
        (s, multiscale_profile(x[s:s + window_len], config))
        for s in range(0, x.shape[0] - window_len + 1, hop)
    ]
    return WindowedProfiles(window_len, hop, profiles)
