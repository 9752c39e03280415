"""Coarse-graining by block mean, variance or standard deviation."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .entropy import as_signal
from .errors import BadParamError, DegenerateScaleError, TooShortError

__all__ = ["CoarseGrainSpec", "Moment", "all_shifted_grains", "coarse_grain", "grain_length"]


class Moment(str, enum.Enum):
    MEAN = "mean"
    VARIANCE = "var"
    STD = "std"

    @property
    def is_spread(self) -> bool:
        return self is not Moment.MEAN


@dataclass(frozen=True)
class CoarseGrainSpec:
    """Scale ``tau``, 1-based starting ``offset`` in ``[1, tau]`` and block statistic."""

    tau: int
    offset: int = 1
    moment: Moment = Moment.MEAN

    def __post_init__(self):
        object.__setattr__(self, "moment", Moment(self.moment))
        if int(self.tau) != self.tau or self.tau < 1:
            raise BadParamError(f"scale factor must be a positive integer, got {self.tau!r}")
        if int(self.offset) != self.offset or not 1 <= self.offset <= self.tau:
            raise BadParamError(f"offset must lie in [1, {self.tau}], got {self.offset!r}")
        if self.moment.is_spread and self.tau == 1:
            raise DegenerateScaleError(
                f"{self.moment.value} coarse-graining is degenerate at scale 1"
            )


def grain_length(n_samples: int, tau: int, offset: int = 1) -> int:
    return max(0, (n_samples - offset + 1) // tau)


def _blocks(x: np.ndarray, tau: int, offset: int) -> np.ndarray:
    n_blocks = grain_length(x.shape[0], tau, offset)
    if n_blocks == 0:
        raise TooShortError(
            f"{x.shape[0]} samples hold no complete block of {tau} from offset {offset}"
        )
    start = offset - 1
    return x[start:start + n_blocks * tau].reshape(n_blocks, tau)


def _grain(x: np.ndarray, tau: int, offset: int, moment: Moment) -> np.ndarray:
    if tau == 1 and moment is Moment.MEAN:
        return x[offset - 1:].copy()
    b = _blocks(x, tau, offset)
    if moment is Moment.MEAN:
        return b.mean(axis=1)
    # shift by each block's first sample so constant blocks give exactly 0
    dev = b - b[:, :1]
    dev -= dev.mean(axis=1, keepdims=True)
    var = np.mean(dev * dev, axis=1)
    if moment is Moment.VARIANCE:
        return var
    return np.sqrt(var)


def coarse_grain(signal, spec: CoarseGrainSpec) -> np.ndarray:
    """Summarize consecutive non-overlapping blocks of ``spec.tau`` samples.

    Block ``j`` (1-based) covers samples ``offset + tau*(j-1)`` through
    ``offset + tau*j - 1``; a trailing partial block is dropped. Variance and
    standard deviation use the population divisor ``tau``.
    """
    x = as_signal(signal)
    return _grain(x, spec.tau, spec.offset, spec.moment)


def all_shifted_grains(signal, tau: int, moment: Moment = Moment.MEAN) -> list[np.ndarray]:
    """Coarse grains for every offset ``u = 1..tau``, in offset order."""
    x = as_signal(signal)
    moment = Moment(moment)
    CoarseGrainSpec(tau, 1, moment)
    return [_grain(x, tau, u, moment) for u in range(1, tau + 1)]
