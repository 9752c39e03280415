"""Ensemble summaries and the group tests used to compare entropy profiles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import betainc

from .errors import BadPError, DegenerateError, MixedConfigsError
from .multiscale import MultiscaleProfile

__all__ = [
    "EnsembleSummary",
    "GroupComparison",
    "ScaleComparison",
    "ScaleSummary",
    "bh_fdr_adjust",
    "compare_profiles",
    "levene_test",
    "summarize",
    "welch_t_test",
]


@dataclass(frozen=True)
class ScaleSummary:
    tau: int
    mean: float
    sd: float
    cv: float  # NaN when unavailable
    n_defined: int
    n_total: int


@dataclass(frozen=True)
class EnsembleSummary:
    records: tuple[ScaleSummary, ...]

    def __getitem__(self, tau: int) -> ScaleSummary:
        for rec in self.records:
            if rec.tau == tau:
                return rec
        raise KeyError(tau)

    @property
    def taus(self) -> list[int]:
        return [r.tau for r in self.records]

    @property
    def means(self) -> np.ndarray:
        return np.array([r.mean for r in self.records])

    @property
    def sds(self) -> np.ndarray:
        return np.array([r.sd for r in self.records])

    @property
    def cvs(self) -> np.ndarray:
        return np.array([r.cv for r in self.records])


def summarize(profiles: Sequence[MultiscaleProfile]) -> EnsembleSummary:
    """Per-scale mean, sample SD and CV over the defined entries of many profiles.

    Undefined entries count towards ``n_total`` only. With a single defined
    value the SD is reported as 0 and the CV as unavailable (NaN).
    """
    profiles = list(profiles)
    if not profiles:
        raise MixedConfigsError("need at least one profile")
    ref = profiles[0]
    for p in profiles[1:]:
        if p.config != ref.config or p.taus != ref.taus:
            raise MixedConfigsError("profiles disagree on method or scale range")
    records = []
    for tau in ref.taus:
        # sorted so the result does not depend on profile order
        vals = np.sort([float(p.entries[tau]) for p in profiles])
        vals = vals[np.isfinite(vals)]
        k = vals.size
        mean = float(np.mean(vals)) if k else math.nan
        sd = float(np.std(vals, ddof=1)) if k >= 2 else (0.0 if k == 1 else math.nan)
        cv = sd / mean if k >= 2 and mean != 0 else math.nan
        records.append(ScaleSummary(tau, mean, sd, cv, k, len(profiles)))
    return EnsembleSummary(tuple(records))


def _finite(values, label: str) -> np.ndarray:
    x = np.asarray(values, dtype=float).ravel()
    x = x[np.isfinite(x)]
    if x.size < 2:
        raise DegenerateError(f"{label} needs at least two finite values")
    return x


def _t_two_sided(t: float, df: float) -> float:
    return float(betainc(df / 2.0, 0.5, df / (df + t * t)))


def _f_upper(f: float, d1: float, d2: float) -> float:
    if math.isinf(f):
        return 0.0
    return float(betainc(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f)))


def welch_t_test(group_a, group_b) -> float:
    """Two-sided p value of the unequal-variance t test.

    Degrees of freedom follow Welch-Satterthwaite. Non-finite inputs are
    dropped; each group must keep two values and a nonzero variance.
    """
    a = _finite(group_a, "group a")
    b = _finite(group_b, "group b")
    va = np.var(a, ddof=1) / a.size
    vb = np.var(b, ddof=1) / b.size
    if va == 0 or vb == 0:
        raise DegenerateError("Welch test needs nonzero variance in both groups")
    se2 = va + vb
    t = (np.mean(a) - np.mean(b)) / math.sqrt(se2)
    df = se2 * se2 / (va * va / (a.size - 1) + vb * vb / (b.size - 1))
    return _t_two_sided(float(t), float(df))


def levene_test(group_a, group_b) -> float:
    """Mean-centred Levene test for equal variances; returns the p value."""
    groups = [_finite(group_a, "group a"), _finite(group_b, "group b")]
    z = [np.abs(g - g.mean()) for g in groups]
    n_total = sum(g.size for g in z)
    k = len(z)
    z_all = np.concatenate(z).mean()
    between = sum(g.size * (g.mean() - z_all) ** 2 for g in z)
    within = sum(((g - g.mean()) ** 2).sum() for g in z)
    if within == 0:
        if between == 0:
            raise DegenerateError("all absolute deviations are equal")
        return 0.0
    f = (n_total - k) / (k - 1) * between / within
    return _f_upper(float(f), k - 1, n_total - k)


def bh_fdr_adjust(p_values) -> np.ndarray:
    """Benjamini-Hochberg step-up adjusted p values, in input order."""
    p = np.asarray(p_values, dtype=float).ravel()
    if np.any(~(p >= 0) | ~(p <= 1)):
        raise BadPError("p values must lie in [0, 1]")
    m = p.size
    if m == 0:
        return p.copy()
    order = np.argsort(p, kind="stable")
    scaled = p[order] * m / np.arange(1, m + 1)
    q = np.minimum.accumulate(scaled[::-1])[::-1]
    # p * m / m can round one ulp below p
    q = np.maximum(q, p[order])
    out = np.empty(m)
    out[order] = np.minimum(q, 1.0)
    return out


@dataclass(frozen=True)
class ScaleComparison:
    tau: int
    p_raw: float  # NaN when the scale could not be tested
    p_fdr: float
    reason: str = ""


@dataclass(frozen=True)
class GroupComparison:
    records: tuple[ScaleComparison, ...]

    @property
    def tested(self) -> list[ScaleComparison]:
        return [r for r in self.records if math.isfinite(r.p_raw)]


def compare_profiles(
    group_a: Sequence[MultiscaleProfile],
    group_b: Sequence[MultiscaleProfile],
    adjust: bool = True,
) -> GroupComparison:
    """Welch test at every scale, then BH-FDR across all testable scales.

    A scale where either group lacks two defined values (or has zero spread)
    is kept with NaN p values and a reason string instead of aborting.
    """
    sa = summarize(group_a)
    sb = summarize(group_b)
    if sa.taus != sb.taus or group_a[0].config != group_b[0].config:
        raise MixedConfigsError("groups were profiled with different settings")
    raw = []
    for tau in sa.taus:
        try:
            p = welch_t_test([float(x.entries[tau]) for x in group_a],
                             [float(x.entries[tau]) for x in group_b])
            raw.append((tau, p, ""))
        except DegenerateError as exc:
            raw.append((tau, math.nan, str(exc)))
    ok = [i for i, (_, p, _) in enumerate(raw) if math.isfinite(p)]
    adj = bh_fdr_adjust([raw[i][1] for i in ok]) if adjust else [raw[i][1] for i in ok]
    fdr = dict(zip(ok, adj))
    return GroupComparison(tuple(
        ScaleComparison(tau, p, float(fdr.get(i, math.nan)), reason)
        for i, (tau, p, reason) in enumerate(raw)
    ))
