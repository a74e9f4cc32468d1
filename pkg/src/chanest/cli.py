"""Command line front end.

``chanest run`` executes a Monte-Carlo sweep from a YAML config plus
overrides and writes the results CSV.  ``chanest selftest`` runs a quick
built-in consistency check and reports one line per check.
"""

from __future__ import annotations

import argparse
import sys
import tempfile
from dataclasses import fields
from pathlib import Path

import numpy as np
import yaml

from . import harness
from .estimators import DoaGrid
from .harness import ExperimentConfig, ExperimentResult, run_experiment, write_csv

_CONFIG_KEYS = {f.name for f in fields(ExperimentConfig)}


def _load_config_file(path: str) -> dict:
    raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise SystemExit(f"config {path} must be a flat mapping")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        names = ", ".join(sorted(unknown))
        raise SystemExit(f"config {path} has unknown keys: {names}")
    return raw


def _parse_complex_pair(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected 're,im'")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _parse_name_list(text: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in text.split(",") if p.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chanest",
        description="Channel estimation sweeps for one-bit receivers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a Monte-Carlo sweep and write CSV")
    run.add_argument("--config", help="YAML file of config keys")
    run.add_argument("--m", type=int, help="antennas")
    run.add_argument("--n", type=int, help="pilot length")
    run.add_argument("--l", type=int, help="scattered path count")
    run.add_argument("--k-db", type=float, dest="k_db", help="Rician factor, dB")
    run.add_argument(
        "--snr", type=_parse_float_list, dest="snr_db",
        help="comma separated SNR points, dB",
    )
    run.add_argument("--trials", type=int, help="trials per SNR point")
    run.add_argument("--seed", type=int, help="master seed")
    run.add_argument("--grid-bits", type=int, dest="grid_bits", help="DOA grid bits")
    run.add_argument(
        "--estimators", type=_parse_name_list,
        help="comma separated subset of mips,pml,lmmse",
    )
    run.add_argument(
        "--fixed-theta0", type=float, dest="fixed_theta0",
        help="pin the LOS direction (radians)",
    )
    run.add_argument(
        "--fixed-g0", type=_parse_complex_pair, dest="fixed_g0",
        help="pin the LOS fading gain as 're,im'",
    )
    run.add_argument(
        "--lmmse-samples", type=int, dest="lmmse_samples",
        help="training sample count for the linear baseline",
    )
    run.add_argument("--workers", type=int, help="process count for trials")
    run.add_argument("--out", help="output CSV path")

    sub.add_parser("selftest", help="run built-in consistency checks")
    return parser


_OVERRIDE_KEYS = (
    "m", "n", "l", "k_db", "snr_db", "trials", "seed", "grid_bits",
    "estimators", "fixed_theta0", "fixed_g0", "lmmse_samples", "workers",
    "out",
)


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    merged: dict = {}
    if args.config:
        merged.update(_load_config_file(args.config))
    for key in _OVERRIDE_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    if "snr_db" in merged:
        merged["snr_db"] = tuple(float(v) for v in merged["snr_db"])
    if "estimators" in merged:
        merged["estimators"] = tuple(merged["estimators"])
    if "fixed_g0" in merged and isinstance(merged["fixed_g0"], str):
        merged["fixed_g0"] = _parse_complex_pair(merged["fixed_g0"])
    try:
        config = ExperimentConfig(**merged)
        # Surface bounds enforced by the derived objects (antenna count,
        # pilot length, sector, grid size) now rather than mid-sweep.
        for snr_db in config.snr_db:
            config.params_at(snr_db)
        DoaGrid.midpoints(
            config.grid_bits, config.theta_min, config.theta_max
        )
        config.gdm_config()
        return config
    except (TypeError, ValueError) as exc:
        raise SystemExit(f"bad configuration: {exc}") from exc


def _print_summary(result: ExperimentResult) -> None:
    print("estimator  snr_db  trials  mse_channel    avg_real_mults")
    for row in result.rows:
        flag = "  [flagged]" if row.flagged else ""
        print(
            f"{row.estimator:<9}  {row.snr_db:>6.1f}  {row.trials:>6d}  "
            f"{row.mse_channel:<12.6g}  {row.avg_real_mults:<14.6g}{flag}"
        )


def cmd_run(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    result = run_experiment(config)
    out = config.out or "results.csv"
    write_csv(result, out)
    _print_summary(result)
    print(f"wrote {out}")
    if result.flagged:
        print(
            "warning: some rows lost more than 1% of trials to numerical "
            "failures",
            file=sys.stderr,
        )
        return 2
    return 0


def _selftest_checks():
    from .estimators import DoaGrid, mips_estimate
    from .likelihood import GdmConfig, build_context, log_likelihood, \
        log_likelihood_gradient, log_norm_cdf
    from .signal_model import (
        SystemParams,
        dft_pilot,
        draw_channel,
        quantize,
        steering_vector,
        synthesize_observation,
    )

    def check_quantizer():
        rng = np.random.default_rng(11)
        y = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        q = quantize(y)
        assert np.array_equal(q, quantize(q))
        assert np.allclose(np.abs(q), 1.0)

    def check_steering():
        a = steering_vector(0.31, 16)
        assert np.allclose(np.abs(a), 1.0)
        assert a[0] == 1.0 + 0.0j

    def check_log_norm_cdf():
        assert abs(log_norm_cdf(0.0) + np.log(2.0)) < 1e-15
        assert abs(log_norm_cdf(-10.0) - (-53.23128515051247)) < 1e-10

    def check_gradient():
        params = SystemParams(M=4, N=4, L=2, K=3.0, snr=2.0)
        rng = np.random.default_rng(5)
        pilot = dft_pilot(params.N)
        channel = draw_channel(params, rng)
        obs = synthesize_observation(params, channel, pilot, rng)
        ctx = build_context(obs, pilot, params, 0.1)
        g = np.array([0.4, -0.2])
        grad = log_likelihood_gradient(ctx, g)
        step = 1e-6
        for i in range(2):
            e = np.zeros(2)
            e[i] = step
            fd = (log_likelihood(ctx, g + e) - log_likelihood(ctx, g - e)) / (2 * step)
            assert abs(fd - grad[i]) <= 1e-6 * max(1.0, abs(grad[i]))

    def check_pipeline():
        params = SystemParams(M=8, N=8, L=1, K=10.0, snr=4.0)
        rng = np.random.default_rng(9)
        pilot = dft_pilot(params.N)
        channel = draw_channel(params, rng)
        obs = synthesize_observation(params, channel, pilot, rng)
        grid = DoaGrid.midpoints(6, params.theta_min, params.theta_max)
        est = mips_estimate(obs, pilot, params, grid, GdmConfig())
        assert est.h0_hat.shape == (params.M,)
        assert np.all(np.isfinite(est.h0_hat))

    def check_csv_round_trip():
        config = ExperimentConfig(
            m=4, n=4, l=1, snr_db=(0.0,), trials=3, grid_bits=4,
            estimators=("mips",), seed=3,
        )
        result = run_experiment(config)
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "selftest.csv"
            write_csv(result, path)
            rows = harness.read_csv(path)
        assert len(rows) == 1
        assert rows[0]["estimator"] == "mips"
        assert rows[0]["trials"] == 3

    return (
        ("quantizer idempotent on the QPSK set", check_quantizer),
        ("steering vector has unit modulus entries", check_steering),
        ("log normal-cdf matches reference values", check_log_norm_cdf),
        ("likelihood gradient matches finite differences", check_gradient),
        ("two-stage estimator runs end to end", check_pipeline),
        ("CSV writer round-trips a small sweep", check_csv_round_trip),
    )


def cmd_selftest() -> int:
    failed = 0
    for label, check in _selftest_checks():
        try:
            check()
        except Exception as exc:  # report and keep going
            failed += 1
            print(f"✗ {label}: {exc}")
        else:
            print(f"✓ {label}")
    if failed:
        print(f"{failed} check(s) failed")
        return 1
    print("all checks passed")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    return cmd_selftest()


if __name__ == "__main__":
    sys.exit(main())
