"""Single-scale sample entropy and fuzzy entropy.

Both estimators compare every ordered pair of distinct templates that start
at positions ``0 .. N-m-1``, for template lengths ``m`` and ``m+1``, under the
Chebyshev (max-abs) distance. Sample entropy counts pairs closer than ``r``;
fuzzy entropy removes each template's own mean first and weights every pair
by ``exp(-d**n / w)``.

With an absolute tolerance the kernel width ``w`` is ``r`` itself. With a
relative tolerance distances are measured in units of the signal SD, so
``w = factor * sd**n``. Both estimators are then unchanged when the signal is
rescaled, and on unit-SD signals ``w`` reduces to ``r``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Union

import numba
import numpy as np

from . import _kernels
from .errors import BadParamError, TooShortError, ZeroVarianceError

__all__ = [
    "AbsoluteTolerance",
    "EntropyParams",
    "EntropyValue",
    "MatchCounts",
    "PhiPair",
    "RelativeTolerance",
    "UndefinedCause",
    "as_signal",
    "fuzzy_entropy",
    "fuzzy_phi",
    "fuzzy_width",
    "resolve_tolerance",
    "sample_entropy",
    "sample_match_counts",
]


class UndefinedCause(str, enum.Enum):
    NO_MATCHES = "no_matches"
    TOO_SHORT = "too_short"
    DEGENERATE_SCALE = "degenerate_scale"


@dataclass(frozen=True)
class EntropyValue:
    """An entropy estimate that is either a finite real or explicitly undefined.

    Use :meth:`finite` / :meth:`undefined` to build one. ``float(value)`` gives
    NaN for undefined entries, which is convenient for array work.
    """

    value: float = math.nan
    cause: UndefinedCause | None = None

    @classmethod
    def finite(cls, value: float) -> EntropyValue:
        return cls(float(value) + 0.0, None)

    @classmethod
    def undefined(cls, cause: UndefinedCause) -> EntropyValue:
        return cls(math.nan, UndefinedCause(cause))

    @property
    def defined(self) -> bool:
        return self.cause is None

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        if self.defined:
            return format(self.value, ".17g")
        return f"undefined:{self.cause.value}"


@dataclass(frozen=True)
class AbsoluteTolerance:
    r: float

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r > 0):
            raise BadParamError(f"tolerance r must be a positive finite real, got {self.r!r}")


@dataclass(frozen=True)
class RelativeTolerance:
    """Tolerance equal to ``factor`` times the population SD of the signal."""

    factor: float = 0.15

    def __post_init__(self):
        if not (math.isfinite(self.factor) and self.factor > 0):
            raise BadParamError(f"tolerance factor must be a positive finite real, got {self.factor!r}")


Tolerance = Union[AbsoluteTolerance, RelativeTolerance]


@dataclass(frozen=True)
class EntropyParams:
    """Embedding dimension ``m``, fuzzy power ``n`` and tolerance rule."""

    m: int = 2
    n: float = 2.0
    tolerance: Tolerance = field(default_factory=RelativeTolerance)

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise BadParamError(f"embedding dimension m must be a positive integer, got {self.m!r}")
        if not (math.isfinite(self.n) and self.n > 0):
            raise BadParamError(f"fuzzy power n must be a positive real, got {self.n!r}")
        if not isinstance(self.tolerance, (AbsoluteTolerance, RelativeTolerance)):
            raise BadParamError(f"unsupported tolerance {self.tolerance!r}")


@dataclass(frozen=True)
class MatchCounts:
    """Ordered-pair match counts for template lengths m and m+1."""

    b_m: int
    b_m1: int
    template_count: int


@dataclass(frozen=True)
class PhiPair:
    phi_m: float
    phi_m1: float


def as_signal(samples) -> np.ndarray:
    """Validate ``samples`` and return them as a contiguous float64 vector."""
    x = np.ascontiguousarray(samples, dtype=np.float64)
    if x.ndim != 1:
        raise BadParamError(f"signal must be one-dimensional, got shape {x.shape}")
    if x.size == 0:
        raise BadParamError("signal is empty")
    if not np.all(np.isfinite(x)):
        raise BadParamError("signal contains NaN or infinite samples")
    return x


def _chunks() -> int:
    return 4 * numba.get_num_threads()


def _check_length(x: np.ndarray, m: int) -> None:
    if x.shape[0] < m + 2:
        raise TooShortError(f"need at least m + 2 = {m + 2} samples, got {x.shape[0]}")


def _reference_sd(signal) -> float:
    x = as_signal(signal)
    if x.shape[0] < 2:
        raise TooShortError("a relative tolerance needs at least two samples")
    sd = float(np.std(x))
    if not sd > 0:
        raise ZeroVarianceError("signal is constant; a relative tolerance would be zero")
    return sd


def resolve_tolerance(signal, params: EntropyParams) -> float:
    """Turn the tolerance rule into an absolute radius for this signal.

    Relative tolerances use the population standard deviation (divisor N).
    Multiscale callers resolve this once on the original signal and reuse the
    radius at every scale.
    """
    tol = params.tolerance
    if isinstance(tol, AbsoluteTolerance):
        return float(tol.r)
    return tol.factor * _reference_sd(signal)


def fuzzy_width(signal, params: EntropyParams) -> float:
    """Kernel width ``w`` of ``exp(-d**n / w)`` for this signal.

    ``r`` for an absolute tolerance, ``factor * sd**n`` for a relative one.
    """
    tol = params.tolerance
    if isinstance(tol, AbsoluteTolerance):
        return float(tol.r)
    return tol.factor * _reference_sd(signal) ** params.n


def _counts(x: np.ndarray, m: int, r: float) -> MatchCounts:
    cm, cm1 = _kernels.sample_counts(x, m, r, _chunks())
    return MatchCounts(2 * int(cm), 2 * int(cm1), x.shape[0] - m)


def _phi(x: np.ndarray, m: int, n: float, r: float) -> PhiPair:
    s_m, s_m1 = _kernels.fuzzy_sums(x, m, float(n), r, _chunks())
    t = x.shape[0] - m
    pairs = t * (t - 1)
    return PhiPair(2.0 * s_m / pairs, 2.0 * s_m1 / pairs)


def _log_ratio(num: float, den: float) -> EntropyValue:
    if num <= 0 or den <= 0:
        return EntropyValue.undefined(UndefinedCause.NO_MATCHES)
    return EntropyValue.finite(-math.log(num / den))


def sample_match_counts(signal, m: int, r: float) -> MatchCounts:
    """Count ordered template pairs within Chebyshev distance ``< r``.

    Parameters
    ----------
    signal : array_like
        At least ``m + 2`` finite samples.
    m : int
        Embedding dimension.
    r : float
        Absolute tolerance.

    Returns
    -------
    MatchCounts
        ``b_m`` and ``b_m1`` count ordered pairs ``(t1, t2)``, ``t1 != t2``,
        over the ``N - m`` shared template start positions.
    """
    x = as_signal(signal)
    _check_length(x, m)
    if not r > 0:
        raise BadParamError(f"tolerance must be positive, got {r!r}")
    return _counts(x, m, r)


def sample_entropy(signal, params: EntropyParams = EntropyParams()) -> EntropyValue:
    """Sample entropy ``-ln(b_m1 / b_m)``; undefined when either count is zero."""
    x = as_signal(signal)
    _check_length(x, params.m)
    r = resolve_tolerance(x, params)
    c = _counts(x, params.m, r)
    return _log_ratio(c.b_m1, c.b_m)


def fuzzy_phi(signal, params: EntropyParams, r: float) -> PhiPair:
    """Average fuzzy similarity of baseline-removed templates of length m and m+1.

    Each template has its own mean subtracted before the Chebyshev distance
    ``d`` is taken, and each ordered pair of distinct templates contributes
    ``exp(-d**n / r)``. Here ``r`` is the kernel width as given; the tolerance
    rule in ``params`` is ignored.
    """
    x = as_signal(signal)
    _check_length(x, params.m)
    if not r > 0:
        raise BadParamError(f"tolerance must be positive, got {r!r}")
    return _phi(x, params.m, params.n, r)


def fuzzy_entropy(signal, params: EntropyParams = EntropyParams()) -> EntropyValue:
    """Fuzzy entropy ``-ln(phi_m1 / phi_m)``.

    Always finite in exact arithmetic. It is reported as undefined only if every
    similarity weight underflows to zero, which needs distances hundreds of
    times larger than ``r``.
    """
    x = as_signal(signal)
    _check_length(x, params.m)
    phi = _phi(x, params.m, params.n, fuzzy_width(x, params))
    return _log_ratio(phi.phi_m1, phi.phi_m)
