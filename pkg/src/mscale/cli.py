"""``mscale`` command-line front end.

Exit codes: 0 success, 2 usage or validation error, 3 input/output error,
4 numeric failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import shlex
import sys
import time
from contextlib import contextmanager

import numba
import numpy as np

from . import __version__
from .coarse import Moment
from .entropy import (
    AbsoluteTolerance,
    EntropyParams,
    EntropyValue,
    RelativeTolerance,
    UndefinedCause,
    fuzzy_entropy,
    sample_entropy,
)
from .errors import (
    BadParamError,
    BadWindowError,
    DegenerateError,
    DegenerateScaleError,
    InputError,
    MixedConfigsError,
    MscaleError,
    TooShortError,
    ZeroVarianceError,
)
from .io import RunManifest, expand_glob, read_signal_csv, write_csv, write_signal_csv
from .multiscale import Estimator, MultiscaleConfig, MultiscaleProfile, multiscale_profile
from .multiscale import sliding_window_profiles, window_hop
from . import signals
from .stats import compare_profiles, summarize

log = logging.getLogger("mscale")

EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4

GENERATORS = ("wgn", "1f", "chirp", "ar1", "mix", "logistic", "lorenz")


class UsageError(Exception):
    """Flag validation failure; exits with code 2."""


def configure_threads() -> None:
    """Cap numba's worker pool from ``MSCALE_THREADS`` (0 or unset means all)."""
    raw = os.environ.get("MSCALE_THREADS", "").strip()
    if not raw:
        return
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"MSCALE_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise UsageError("MSCALE_THREADS must be >= 0")
    if n > 0:
        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


# ---------------------------------------------------------------- arguments


def _scales(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}") from None
    if a < 1 or b < a:
        raise argparse.ArgumentTypeError(f"invalid scale range {text!r}")
    return a, b


def _add_entropy_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--estimator", choices=[e.value for e in Estimator], default="fuzzy")
    p.add_argument("--m", type=int, default=2, help="embedding dimension (default 2)")
    p.add_argument("--n", dest="power", type=float, default=2.0, help="fuzzy power (default 2)")
    tol = p.add_mutually_exclusive_group()
    tol.add_argument("--r-factor", type=float, default=None,
                     help="tolerance as a multiple of the signal SD (default 0.15)")
    tol.add_argument("--r-abs", type=float, default=None, help="absolute tolerance")


def _add_profile_flags(p: argparse.ArgumentParser) -> None:
    _add_entropy_flags(p)
    p.add_argument("--moment", choices=[m.value for m in Moment], default="mean")
    p.add_argument("--rc", action="store_true", help="refined-composite averaging")
    p.add_argument("--scales", type=_scales, default=(1, 20), metavar="A:B")
    p.add_argument("--allow-degenerate", action="store_true",
                   help="report scale 1 as undefined for var/std instead of failing")


def _add_generator_flags(p: argparse.ArgumentParser, length_flag: str) -> None:
    g = p.add_argument_group("generator")
    g.add_argument(length_flag, dest="length", type=int, default=None,
                   help="number of samples (noise 40000, swept signals fs*duration)")
    g.add_argument("--fs", type=float, default=150.0)
    g.add_argument("--duration", type=float, default=100.0)
    g.add_argument("--f-start", type=float, default=0.1)
    g.add_argument("--f-end", type=float, default=30.0)
    g.add_argument("--rho-start", type=float, default=0.9)
    g.add_argument("--rho-end", type=float, default=-0.9)
    g.add_argument("--p-start", type=float, default=0.99)
    g.add_argument("--p-end", type=float, default=0.01)
    g.add_argument("--alpha-start", type=float, default=3.5)
    g.add_argument("--alpha-end", type=float, default=3.99)
    g.add_argument("--x0", type=float, default=0.5)
    g.add_argument("--burn-in", type=int, default=1000)
    g.add_argument("--seg-len", type=int, default=7500)
    g.add_argument("--no-chain", action="store_true",
                   help="start the second Lorenz segment from (1, 1, 1) instead of chaining")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mscale", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"mscale {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log stage timings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic signal")
    p.add_argument("kind", choices=GENERATORS)
    _add_generator_flags(p, "--n")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("entropy", help="single-scale entropy of a signal file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--column", default=None)
    _add_entropy_flags(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("profile", help="multiscale entropy profile of a signal file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--column", default=None)
    _add_profile_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("batch", help="ensemble summary over many realizations")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--gen", choices=GENERATORS)
    src.add_argument("--in-glob")
    p.add_argument("--realizations", type=int, default=None)
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--column", default=None)
    _add_profile_flags(p)
    # --n is the fuzzy power here, so the realization length gets its own flag
    _add_generator_flags(p, "--length")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("window", help="profiles on sliding windows")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--column", default=None)
    p.add_argument("--window", type=int, default=2000)
    p.add_argument("--overlap", type=float, default=0.9)
    _add_profile_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_window)

    p = sub.add_parser("compare", help="Welch t test per scale between two file groups")
    p.add_argument("--group-a", required=True)
    p.add_argument("--group-b", required=True)
    p.add_argument("--column", default=None)
    p.add_argument("--fdr-scope", choices=["all", "none"], default="all",
                   help="adjust across all tested scales jointly, or not at all")
    _add_profile_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)
    return parser


# ------------------------------------------------------------------ helpers


def _params(args) -> EntropyParams:
    if args.m < 1:
        raise UsageError("--m must be >= 1")
    if not args.power > 0:
        raise UsageError("--n must be positive")
    if args.r_abs is not None:
        if not args.r_abs > 0:
            raise UsageError("--r-abs must be positive")
        tol = AbsoluteTolerance(args.r_abs)
    else:
        factor = 0.15 if args.r_factor is None else args.r_factor
        if not factor > 0:
            raise UsageError("--r-factor must be positive")
        tol = RelativeTolerance(factor)
    return EntropyParams(args.m, args.power, tol)


def _config(args) -> tuple[MultiscaleConfig | None, bool]:
    """Profile config plus whether scale 1 must be emitted as degenerate."""
    moment = Moment(args.moment)
    lo, hi = args.scales
    degenerate = moment.is_spread and lo == 1
    if degenerate and not args.allow_degenerate:
        raise UsageError(
            f"--moment {moment.value} is undefined at scale 1; start --scales at 2"
            " or pass --allow-degenerate"
        )
    params = _params(args)
    if degenerate:
        lo = 2
    if lo > hi:
        return None, degenerate
    return MultiscaleConfig(Estimator(args.estimator), moment, args.rc, (lo, hi), params), degenerate


def _config_dict(args, keys) -> dict:
    out = {}
    for k in keys:
        v = getattr(args, k, None)
        out[k] = list(v) if isinstance(v, tuple) else v
    return out


_PROFILE_KEYS = ("estimator", "m", "power", "r_factor", "r_abs", "moment", "rc", "scales",
                 "allow_degenerate")


def _profile(x: np.ndarray, config: MultiscaleConfig | None, degenerate: bool) -> dict[int, EntropyValue]:
    entries: dict[int, EntropyValue] = {}
    if degenerate:
        entries[1] = EntropyValue.undefined(UndefinedCause.DEGENERATE_SCALE)
    if config is not None:
        entries.update(multiscale_profile(x, config).entries)
    return entries


def _profile_object(x, config, degenerate) -> MultiscaleProfile:
    return MultiscaleProfile(_profile(x, config, degenerate), config, math.nan)


def _manifest(args, seeds=()) -> RunManifest:
    argv = getattr(args, "_argv", [])
    keys = [k for k in vars(args) if not k.startswith("_") and k not in ("func", "verbose")]
    return RunManifest(
        command="mscale " + shlex.join(argv),
        version=__version__,
        config=_config_dict(args, keys),
        seeds=list(seeds),
    )


def _generate(kind: str, args, seed: int, length: int | None) -> np.ndarray:
    if length is not None and length < 1:
        raise UsageError("--n must be >= 1")
    swept = int(round(args.fs * args.duration))
    if kind == "wgn":
        return signals.gen_wgn(length or 40000, seed)
    if kind == "1f":
        if length is not None and length < 2:
            raise UsageError("--n must be >= 2 for 1/f noise")
        return signals.gen_one_over_f(length or 40000, seed)
    if kind == "chirp":
        return signals.gen_chirp(args.fs, args.duration, args.f_start, args.f_end)
    if kind == "ar1":
        return signals.gen_ar1_sweep(length or swept, args.rho_start, args.rho_end, seed)
    if kind == "mix":
        return signals.gen_mix(length or swept, args.p_start, args.p_end, seed)
    if kind == "logistic":
        return signals.gen_logistic_sweep(
            length or swept, args.alpha_start, args.alpha_end, args.x0, args.burn_in
        )
    if kind == "lorenz":
        return signals.gen_lorenz_two_regime(args.fs, args.seg_len, seed=seed, chain=not args.no_chain)
    raise UsageError(f"unknown generator {kind!r}")


def _entropy_rows(entries: dict[int, EntropyValue]):
    for tau, v in entries.items():
        yield tau, (v.value if v.defined else None), int(v.defined)


@contextmanager
def _stage(manifest: RunManifest, name: str):
    t0 = time.perf_counter()
    yield
    manifest.timings[name] = time.perf_counter() - t0
    log.info("%s: %.3f s", name, manifest.timings[name])


# ----------------------------------------------------------------- commands


def cmd_generate(args) -> int:
    if not 0 <= args.seed < 2**64:
        raise UsageError("--seed must be an unsigned 64-bit integer")
    manifest = _manifest(args, [args.seed])
    with _stage(manifest, "generate"):
        try:
            x = _generate(args.kind, args, args.seed, args.length)
        except BadParamError as exc:
            raise UsageError(str(exc)) from exc
    if args.kind in ("chirp", "ar1", "mix", "logistic", "lorenz"):
        manifest.config["sample_rate_hz"] = args.fs
    with _stage(manifest, "write"):
        write_signal_csv(args.out, x, manifest)
    return 0


def cmd_entropy(args) -> int:
    params = _params(args)
    x, _ = read_signal_csv(args.input, args.column)
    fn = sample_entropy if args.estimator == "sample" else fuzzy_entropy
    try:
        value = fn(x, params)
    except TooShortError:
        value = EntropyValue.undefined(UndefinedCause.TOO_SHORT)
    except ZeroVarianceError:
        # every template pair of a constant signal is at distance 0, so any
        # positive radius gives the same answer
        value = fn(x, EntropyParams(params.m, params.n, AbsoluteTolerance(1.0)))
    print(value)
    return 0


def cmd_profile(args) -> int:
    config, degenerate = _config(args)
    manifest = _manifest(args)
    with _stage(manifest, "read"):
        x, _ = read_signal_csv(args.input, args.column)
    with _stage(manifest, "profile"):
        entries = _profile(x, config, degenerate)
    with _stage(manifest, "write"):
        write_csv(args.out, ["tau", "entropy", "defined"], _entropy_rows(entries), manifest)
    return 0


def cmd_batch(args) -> int:
    config, degenerate = _config(args)
    if args.realizations is not None and args.realizations < 1:
        raise UsageError("--realizations must be >= 1")
    if args.gen:
        n_real = args.realizations or 1
        seeds = [args.seed_base + i for i in range(n_real)]
        if args.seed_base < 0 or seeds[-1] >= 2**64:
            raise UsageError("--seed-base gives seeds outside the unsigned 64-bit range")
        sources = [(s, None) for s in seeds]
    else:
        files = expand_glob(args.in_glob)
        if not files:
            raise InputError(f"no files match {args.in_glob!r}")
        if args.realizations is not None:
            files = files[: args.realizations]
        seeds = []
        sources = [(None, f) for f in files]
    manifest = _manifest(args, seeds)
    if not args.gen:
        manifest.config["files"] = [str(f) for _, f in sources]
    profiles = []
    with _stage(manifest, "profiles"):
        for seed, path in sources:
            if path is None:
                try:
                    x = _generate(args.gen, args, seed, args.length)
                except BadParamError as exc:
                    raise UsageError(str(exc)) from exc
            else:
                x, _ = read_signal_csv(path, args.column)
            profiles.append(_profile_object(x, config, degenerate))
    summary = summarize(profiles)
    rows = ((r.tau, r.mean, r.sd, r.cv, r.n_defined, r.n_total) for r in summary.records)
    with _stage(manifest, "write"):
        write_csv(args.out, ["tau", "mean", "sd", "cv", "n_defined", "n_total"], rows, manifest)
    return 0


def cmd_window(args) -> int:
    config, degenerate = _config(args)
    try:
        window_hop(args.window, args.overlap)
    except BadWindowError as exc:
        raise UsageError(str(exc)) from exc
    manifest = _manifest(args)
    with _stage(manifest, "read"):
        x, _ = read_signal_csv(args.input, args.column)
    if args.window < 1 or args.window > x.size:
        raise UsageError(f"--window {args.window} does not fit a signal of {x.size} samples")
    with _stage(manifest, "profiles"):
        if config is not None:
            windows = sliding_window_profiles(x, args.window, args.overlap, config)
            starts = [(s, p.entries) for s, p in windows.profiles]
        else:
            hop = window_hop(args.window, args.overlap)
            starts = [(s, {}) for s in range(0, x.size - args.window + 1, hop)]
    rows = []
    for s, entries in starts:
        if degenerate:
            entries = {1: EntropyValue.undefined(UndefinedCause.DEGENERATE_SCALE), **entries}
        rows.extend((s, *row) for row in _entropy_rows(entries))
    with _stage(manifest, "write"):
        write_csv(args.out, ["window_start", "tau", "entropy", "defined"], rows, manifest)
    return 0


def cmd_compare(args) -> int:
    config, degenerate = _config(args)
    groups = []
    for label, pattern in (("--group-a", args.group_a), ("--group-b", args.group_b)):
        files = expand_glob(pattern)
        if len(files) < 2:
            raise UsageError(f"{label} matches {len(files)} file(s); need at least 2")
        groups.append(files)
    manifest = _manifest(args)
    manifest.config["files_a"] = [str(f) for f in groups[0]]
    manifest.config["files_b"] = [str(f) for f in groups[1]]
    with _stage(manifest, "profiles"):
        profiled = [
            [_profile_object(read_signal_csv(f, args.column)[0], config, degenerate) for f in files]
            for files in groups
        ]
    result = compare_profiles(profiled[0], profiled[1], adjust=args.fdr_scope == "all")
    if not result.tested:
        for rec in result.records:
            print(f"mscale: tau={rec.tau}: {rec.reason or 'untestable'}", file=sys.stderr)
        raise UsageError("no scale has two usable profiles per group")
    for rec in result.records:
        if not math.isfinite(rec.p_raw):
            log.warning("tau=%d not tested: %s", rec.tau, rec.reason)
    rows = (
        (r.tau, r.p_raw, r.p_fdr, math.log10(r.p_fdr) if r.p_fdr > 0 else -math.inf)
        if math.isfinite(r.p_raw) else (r.tau, None, None, None)
        for r in result.records
    )
    with _stage(manifest, "write"):
        write_csv(args.out, ["tau", "p_raw", "p_fdr", "log10_p_fdr"], rows, manifest)
    return 0


# --------------------------------------------------------------------- main


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = argv
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="mscale: %(message)s",
    )
    try:
        configure_threads()
        return args.func(args)
    except UsageError as exc:
        parser.exit(EXIT_USAGE, f"mscale {args.command}: error: {exc}\n")
    except InputError as exc:
        print(f"mscale {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (TooShortError, BadParamError, BadWindowError, DegenerateScaleError,
            MixedConfigsError, DegenerateError) as exc:
        print(f"mscale {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MscaleError, ArithmeticError) as exc:
        print(f"mscale {args.command}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
