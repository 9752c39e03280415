"""Seeded generators for the synthetic evaluation signals.

Random generators draw from numpy's ``Generator(PCG64(seed))``. Normal
deviates come from its ziggurat sampler, so a given seed reproduces the same
samples on any platform running the same numpy release.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadFrequencyError, BadParamError, NumericBlowupError

__all__ = [
    "LorenzParams",
    "gen_ar1_sweep",
    "gen_chirp",
    "gen_logistic_sweep",
    "gen_lorenz_two_regime",
    "gen_mix",
    "gen_one_over_f",
    "gen_wgn",
    "integrate_lorenz",
    "make_rng",
]

_MAX_SEED = 2**64


def make_rng(seed: int) -> np.random.Generator:
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed < _MAX_SEED:
        raise BadParamError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return np.random.Generator(np.random.PCG64(int(seed)))


def _check_n(n: int, minimum: int = 1) -> int:
    if isinstance(n, bool) or int(n) != n or n < minimum:
        raise BadParamError(f"n must be an integer >= {minimum}, got {n!r}")
    return int(n)


def gen_wgn(n: int, seed: int = 0) -> np.ndarray:
    """``n`` independent standard-normal samples."""
    n = _check_n(n)
    return make_rng(seed).standard_normal(n)


def gen_one_over_f(n: int, seed: int = 0) -> np.ndarray:
    """1/f noise by spectral shaping of white Gaussian noise.

    The real FFT of a white sequence has every positive-frequency bin scaled
    by ``1/sqrt(f)`` and the DC bin zeroed; the inverse transform is then
    rescaled to population SD 1.
    """
    n = _check_n(n, 2)
    spectrum = np.fft.rfft(gen_wgn(n, seed))
    f = np.fft.rfftfreq(n)
    spectrum[0] = 0.0
    spectrum[1:] /= np.sqrt(f[1:])
    x = np.fft.irfft(spectrum, n)
    return x / np.std(x)


def gen_chirp(
    fs: float = 150.0, duration_s: float = 100.0, f_start: float = 0.1, f_end: float = 30.0
) -> np.ndarray:
    """Unit-amplitude cosine whose frequency sweeps logarithmically.

    The instantaneous frequency is ``f_start * (f_end/f_start)**(t/duration_s)``;
    the phase is its closed-form integral, starting at zero.
    """
    if not (fs > 0 and duration_s > 0):
        raise BadParamError("fs and duration must be positive")
    if not 0 < f_start < f_end < fs / 2:
        raise BadFrequencyError(
            f"need 0 < f_start < f_end < fs/2, got {f_start}, {f_end} at fs={fs}"
        )
    n = int(round(fs * duration_s))
    t = np.arange(n) / fs
    k = math.log(f_end / f_start)
    phase = 2 * np.pi * f_start * duration_s / k * np.expm1(k * t / duration_s)
    return np.cos(phase)


def gen_ar1_sweep(
    n: int, rho_start: float = 0.9, rho_end: float = -0.9, seed: int = 0
) -> np.ndarray:
    """AR(1) ``x_k = rho_k x_{k-1} + e_k`` with ``rho_k`` linear in k and ``x_0 = 0``."""
    n = _check_n(n)
    rho = np.linspace(rho_start, rho_end, n)
    if np.any(np.abs(rho) >= 1):
        raise BadParamError("AR(1) coefficient must stay inside (-1, 1)")
    e = gen_wgn(n, seed)
    x = np.empty(n)
    prev = 0.0
    for k in range(n):
        prev = rho[k] * prev + e[k]
        x[k] = prev
    return x


def gen_mix(n: int, p_start: float = 0.99, p_end: float = 0.01, seed: int = 0) -> np.ndarray:
    """Sinusoid/uniform-noise MIX process with a linear sweep of the noise probability.

    Sample k is ``sqrt(2) sin(2 pi k / 12)`` unless a Bernoulli(p_k) draw
    replaces it by a Uniform[-sqrt(3), sqrt(3)] value. Both components have unit
    variance. The default sweep runs from noise towards the pure sinusoid.
    """
    n = _check_n(n)
    if not (0 <= p_start <= 1 and 0 <= p_end <= 1):
        raise BadParamError("mixing probabilities must lie in [0, 1]")
    rng = make_rng(seed)
    p = np.linspace(p_start, p_end, n)
    z = rng.random(n) < p
    noise = rng.uniform(-math.sqrt(3), math.sqrt(3), n)
    k = np.arange(1, n + 1)
    periodic = math.sqrt(2) * np.sin(2 * np.pi * k / 12)
    return np.where(z, noise, periodic)


def gen_logistic_sweep(
    n: int,
    alpha_start: float = 3.5,
    alpha_end: float = 3.99,
    x0: float = 0.5,
    burn_in: int = 1000,
) -> np.ndarray:
    """Logistic map ``x_k = a_k x_{k-1} (1 - x_{k-1})`` with ``a_k`` linear in k.

    ``burn_in`` iterations at ``alpha_start`` are discarded first so the
    recorded orbit starts on the attractor.
    """
    n = _check_n(n)
    if not 0 < x0 < 1:
        raise BadParamError(f"x0 must lie in (0, 1), got {x0}")
    if not (0 < alpha_start <= 4 and 0 < alpha_end <= 4):
        raise BadParamError("alpha must lie in (0, 4]")
    if burn_in < 0:
        raise BadParamError("burn_in must be non-negative")
    x = float(x0)
    for _ in range(int(burn_in)):
        x = alpha_start * x * (1.0 - x)
    alpha = np.linspace(alpha_start, alpha_end, n)
    out = np.empty(n)
    for k in range(n):
        x = alpha[k] * x * (1.0 - x)
        out[k] = x
    return out


@dataclass(frozen=True)
class LorenzParams:
    lam: float = 10.0
    beta: float = 8.0 / 3.0
    rho: float = 28.0
    step: float = 1.0 / 150.0
    length: int = 7500
    initial_state: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        if not self.step > 0:
            raise BadParamError("integration step must be positive")
        _check_n(self.length)


_BLOWUP = 1e12


def integrate_lorenz(params: LorenzParams, initial_state=None) -> tuple[np.ndarray, tuple]:
    """Forward-Euler Lorenz trajectory; returns (x coordinate, final state)."""
    x, y, z = params.initial_state if initial_state is None else initial_state
    lam, beta, rho, h = params.lam, params.beta, params.rho, params.step
    out = np.empty(params.length)
    for k in range(params.length):
        dx = lam * (y - x)
        dy = x * (rho - z) - y
        dz = x * y - beta * z
        x, y, z = x + h * dx, y + h * dy, z + h * dz
        if not (abs(x) < _BLOWUP and abs(y) < _BLOWUP and abs(z) < _BLOWUP):
            raise NumericBlowupError(f"Lorenz integration diverged at step {k}")
        out[k] = x
    return out, (x, y, z)


def gen_lorenz_two_regime(
    fs: float = 150.0,
    seg_len: int = 7500,
    params_a: LorenzParams | None = None,
    params_b: LorenzParams | None = None,
    seed: int = 0,
    chain: bool = True,
) -> np.ndarray:
    """Two Lorenz segments (chaotic rho=28, then rho=99.96), each scaled to SD 1.

    By default segment B continues from segment A's final state; pass
    ``chain=False`` to start it from ``params_b.initial_state`` instead. The
    seed is accepted for interface symmetry with the noise generators and has
    no effect.
    """
    make_rng(seed)
    if params_a is None:
        params_a = LorenzParams(rho=28.0, step=1.0 / fs, length=seg_len)
    if params_b is None:
        params_b = LorenzParams(rho=99.96, step=1.0 / fs, length=seg_len)
    a, state = integrate_lorenz(params_a)
    b, _ = integrate_lorenz(params_b, state if chain else None)
    return np.concatenate([a / np.std(a), b / np.std(b)])
