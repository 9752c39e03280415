import math
import warnings

import numpy as np
import pytest

from mscale import (
    EntropyParams,
    Estimator,
    Moment,
    MultiscaleConfig,
    UndefinedCause,
    fuzzy_entropy,
    multiscale_profile,
    sample_entropy,
    sliding_window_profiles,
)
from mscale.errors import BadParamError, BadWindowError, DegenerateScaleError, TooShortError
from mscale.multiscale import ShortGrainWarning, window_hop
from oracles import naive_profile_value

METHODS = [(e, rc) for e in ("sample", "fuzzy") for rc in (False, True)]


@pytest.fixture(scope="module")
def wgn_1000():
    return np.random.default_rng(7).standard_normal(1000)


@pytest.mark.parametrize("estimator", ["sample", "fuzzy"])
def test_rc_identity_at_scale_one(wgn_1000, estimator):
    a = multiscale_profile(wgn_1000, MultiscaleConfig(estimator, "mean", True, (1, 1)))
    b = multiscale_profile(wgn_1000, MultiscaleConfig(estimator, "mean", False, (1, 1)))
    assert a.entries == b.entries
    single = fuzzy_entropy if estimator == "fuzzy" else sample_entropy
    assert a[1] == single(wgn_1000)


@pytest.mark.parametrize("estimator,rc", METHODS)
@pytest.mark.parametrize("moment", ["mean", "std", "var"])
def test_matches_oracle(estimator, rc, moment):
    x = np.random.default_rng(3).standard_normal(120)
    lo = 1 if moment == "mean" else 2
    prof = multiscale_profile(x, MultiscaleConfig(estimator, moment, rc, (lo, 6)))
    for tau in prof.taus:
        ref = naive_profile_value(x, tau, moment, estimator, rc)
        got = prof[tau]
        if ref is None:
            assert not got.defined
        else:
            assert got.value == pytest.approx(ref, rel=1e-12, abs=1e-12)


def test_tolerance_constant_across_scales(wgn_1000):
    prof = multiscale_profile(wgn_1000, MultiscaleConfig(scales=(1, 5)))
    assert prof.tolerance_used == pytest.approx(0.15 * np.std(wgn_1000), rel=1e-15)


def test_short_noise_definedness():
    x = np.random.default_rng(11).standard_normal(100)
    sampen = multiscale_profile(x, MultiscaleConfig("sample", scales=(1, 10)))
    fuzzy = multiscale_profile(x, MultiscaleConfig("fuzzy", scales=(1, 10)))
    assert any(not v.defined for v in sampen.entries.values())
    assert all(v.defined for v in fuzzy.entries.values())


def test_grain_too_short_is_undefined():
    x = np.random.default_rng(0).standard_normal(40)
    prof = multiscale_profile(x, MultiscaleConfig("fuzzy", scales=(1, 20)))
    assert prof[10].defined  # 4 samples = m + 2
    assert prof[11].cause is UndefinedCause.TOO_SHORT
    assert math.isnan(prof.values()[-1])


def test_signal_shorter_than_max_scale():
    with pytest.raises(TooShortError):
        multiscale_profile(np.arange(10.0), MultiscaleConfig(scales=(1, 20)))


def test_spread_moments_differ(wgn_1000):
    std = multiscale_profile(wgn_1000, MultiscaleConfig("fuzzy", "std", scales=(5, 5)))
    var = multiscale_profile(wgn_1000, MultiscaleConfig("fuzzy", "var", scales=(5, 5)))
    assert std[5].value != var[5].value


@pytest.mark.parametrize("moment", ["std", "var"])
def test_spread_config_rejects_scale_one(moment):
    with pytest.raises(DegenerateScaleError):
        MultiscaleConfig(moment=moment, scales=(1, 5))


@pytest.mark.parametrize("scales", [(0, 3), (5, 4)])
def test_bad_scale_range(scales):
    with pytest.raises(BadParamError):
        MultiscaleConfig(scales=scales)


def test_config_names():
    assert MultiscaleConfig("sample", "mean").name == "MSE_mean"
    assert MultiscaleConfig(Estimator.FUZZY, Moment.STD, True, (2, 3)).name == "RCMFE_std"


def test_rc_reduces_spread_on_noise():
    cfg = dict(moment="mean", scales=(10, 10), params=EntropyParams())
    basic, refined = [], []
    for seed in range(20):
        x = np.random.default_rng(seed).standard_normal(1000)
        basic.append(float(multiscale_profile(x, MultiscaleConfig("fuzzy", refined_composite=False, **cfg))[10]))
        refined.append(float(multiscale_profile(x, MultiscaleConfig("fuzzy", refined_composite=True, **cfg))[10]))
    assert np.std(refined) <= np.std(basic)


class TestWindows:
    def test_full_window_equals_profile(self, wgn_1000):
        cfg = MultiscaleConfig(scales=(1, 3))
        w = sliding_window_profiles(wgn_1000, 1000, 0.0, cfg)
        assert w.starts == [0]
        assert w.profiles[0][1] == multiscale_profile(wgn_1000, cfg)

    def test_layout(self, wgn_1000):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ShortGrainWarning)
            w = sliding_window_profiles(wgn_1000, 200, 0.5, MultiscaleConfig(scales=(1, 2)))
        assert w.hop == 100
        assert w.starts == list(range(0, 801, 100))
        assert w.matrix().shape == (9, 2)
        # each window uses its own tolerance
        assert w.profiles[0][1].tolerance_used == pytest.approx(0.15 * np.std(wgn_1000[:200]))

    def test_short_grain_warning(self, wgn_1000):
        with pytest.warns(ShortGrainWarning):
            sliding_window_profiles(wgn_1000, 500, 0.0, MultiscaleConfig(scales=(1, 10)))

    @pytest.mark.parametrize("overlap", [1.0, -0.1, 1.5])
    def test_bad_overlap(self, wgn_1000, overlap):
        with pytest.raises(BadWindowError):
            sliding_window_profiles(wgn_1000, 200, overlap, MultiscaleConfig(scales=(1, 2)))

    def test_zero_hop(self):
        with pytest.raises(BadWindowError):
            window_hop(10, 0.99)

    @pytest.mark.parametrize("length", [0, 1001, 2.5])
    def test_bad_length(self, wgn_1000, length):
        with pytest.raises(BadWindowError):
            sliding_window_profiles(wgn_1000, length, 0.5, MultiscaleConfig(scales=(1, 2)))
