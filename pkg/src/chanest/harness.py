"""Monte-Carlo sweep across SNR: paired estimators, MSE metrics, CSV output.

Every trial derives its own random substream from (seed, trial index), so
results are identical no matter how trials are scheduled or how many
workers run them.  All selected estimators see the same quantized
observation per trial.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .counting import CountingRules, MultCounter
from .estimators import (
    ChannelEstimate,
    DoaGrid,
    LmmseStatistics,
    lmmse_estimate,
    mips_estimate,
    pml_estimate,
    train_lmmse,
)
from .likelihood import GdmConfig, NumericalError
from .signal_model import (
    SystemParams,
    dft_pilot,
    draw_channel,
    synthesize_observation,
)

CSV_HEADER = (
    "estimator",
    "snr_db",
    "L",
    "M",
    "N",
    "trials",
    "mse_channel",
    "mse_doa",
    "mse_fading",
    "avg_real_mults",
    "seed",
)

KNOWN_ESTIMATORS = ("mips", "pml", "lmmse")

# Substream derivation: master seed as entropy, spawn key (domain, index).
# Domain 0 is per-trial draws, domain 1 is per-SNR LMMSE training.
_DOMAIN_TRIAL = 0
_DOMAIN_LMMSE = 1


def _substream(seed: int, domain: int, index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(domain, index))
    return np.random.default_rng(ss)


def db_to_linear(db: float) -> float:
    return float(10.0 ** (db / 10.0))


@dataclass(frozen=True)
class ExperimentConfig:
    """Sweep definition.  Angles in radians, K and SNR in dB (converted to
    linear exactly once, here)."""

    m: int = 24
    n: int = 15
    l: int = 5
    k_db: float = 13.5
    snr_db: tuple[float, ...] = (-10.0, -5.0, 0.0, 5.0, 10.0)
    trials: int = 300
    estimators: tuple[str, ...] = ("mips", "pml")
    grid_bits: int = 8
    theta_min: float = -np.pi / 3
    theta_max: float = np.pi / 3
    d_over_lambda: float = 0.5
    seed: int = 0
    fixed_theta0: float | None = None
    fixed_g0: complex | None = None
    lmmse_samples: int = 100_000
    lmmse_ridge: float = 1e-6
    eta: float = 0.01
    alpha: float = 0.1
    beta: float = 0.5
    max_iters: int = 500
    g_norm_cap: float = 100.0
    transcendental_cost: int = 10
    workers: int = 1
    out: str | None = None

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if len(self.snr_db) == 0:
            raise ValueError("snr_db must be nonempty")
        if len(self.estimators) == 0:
            raise ValueError("select at least one estimator")
        for name in self.estimators:
            if name not in KNOWN_ESTIMATORS:
                raise ValueError(f"unknown estimator {name!r}")
        if len(set(self.estimators)) != len(self.estimators):
            raise ValueError("duplicate estimator selection")
        if (self.fixed_theta0 is None) != (self.fixed_g0 is None):
            raise ValueError("fixed_theta0 and fixed_g0 must be set together")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    @property
    def k_linear(self) -> float:
        return db_to_linear(self.k_db)

    def params_at(self, snr_db: float) -> SystemParams:
        return SystemParams(
            M=self.m,
            N=self.n,
            L=self.l,
            K=self.k_linear,
            snr=db_to_linear(snr_db),
            theta_min=self.theta_min,
            theta_max=self.theta_max,
            d_over_lambda=self.d_over_lambda,
        )

    def gdm_config(self) -> GdmConfig:
        return GdmConfig(
            eta=self.eta,
            alpha=self.alpha,
            beta=self.beta,
            max_iters=self.max_iters,
            g_norm_cap=self.g_norm_cap,
        )

    @property
    def fixed_los(self) -> tuple[float, complex] | None:
        if self.fixed_theta0 is None:
            return None
        return (self.fixed_theta0, self.fixed_g0)


@dataclass
class ResultRow:
    estimator: str
    snr_db: float
    l: int
    m: int
    n: int
    trials: int
    mse_channel: float
    mse_doa: float
    mse_fading: float
    avg_real_mults: float
    seed: int
    failures: int = 0
    gdm_runs: int = 0

    @property
    def flagged(self) -> bool:
        attempted = self.trials + self.failures
        return attempted > 0 and self.failures > 0.01 * attempted


@dataclass
class ExperimentResult:
    rows: list[ResultRow]

    @property
    def flagged(self) -> bool:
        return any(row.flagged for row in self.rows)


def _h0_of(estimate) -> np.ndarray:
    return estimate.h0_hat if isinstance(estimate, ChannelEstimate) else np.asarray(estimate)


def mse_channel(estimates, truths) -> float:
    """Per-antenna channel MSE: mean of ||h0_hat - h0||^2 / M.

    ``estimates`` may hold ChannelEstimate objects or bare M-vectors (the
    LMMSE path); truths are the unweighted LOS vectors g0 * a(theta0).
    """
    if len(estimates) != len(truths) or len(estimates) == 0:
        raise ValueError("need equally many estimates and truths, at least one")
    errs = np.stack([_h0_of(e) - np.asarray(t) for e, t in zip(estimates, truths)])
    m = errs.shape[1]
    return float(np.mean(np.sum(np.abs(errs) ** 2, axis=1)) / m)


def mse_doa(estimates, truths) -> float:
    """Mean squared DOA error, plain differences (domain spans under pi)."""
    if len(estimates) != len(truths) or len(estimates) == 0:
        raise ValueError("need equally many estimates and truths, at least one")
    th = np.array(
        [e.theta_hat if isinstance(e, ChannelEstimate) else e for e in estimates]
    )
    return float(np.mean((th - np.asarray(truths)) ** 2))


def mse_fading(estimates, truths) -> float:
    """Mean squared complex fading error |g0_hat - g0|^2."""
    if len(estimates) != len(truths) or len(estimates) == 0:
        raise ValueError("need equally many estimates and truths, at least one")
    gh = np.array(
        [e.g0_hat if isinstance(e, ChannelEstimate) else e for e in estimates]
    )
    return float(np.mean(np.abs(gh - np.asarray(truths)) ** 2))


@dataclass
class _TrialRecord:
    """What one trial contributes: per-estimator outcome plus the truth."""

    theta0: float
    g0: complex
    h0: np.ndarray
    outcomes: dict


def _run_trial(
    params: SystemParams,
    pilot,
    grid: DoaGrid,
    gdm: GdmConfig,
    rules: CountingRules,
    estimators: tuple[str, ...],
    stats: LmmseStatistics | None,
    seed: int,
    trial: int,
    fixed_los,
) -> _TrialRecord:
    rng = _substream(seed, _DOMAIN_TRIAL, trial)
    channel = draw_channel(params, rng, fixed_los)
    obs = synthesize_observation(params, channel, pilot, rng)
    outcomes = {}
    for name in estimators:
        counter = MultCounter(rules)
        try:
            if name == "mips":
                est = mips_estimate(obs, pilot, params, grid, gdm, counter)
            elif name == "pml":
                est = pml_estimate(obs, pilot, params, grid, gdm, counter)
            else:
                est = lmmse_estimate(obs, stats, counter)
        except NumericalError as exc:
            outcomes[name] = ("failed", str(exc), counter.total)
        else:
            outcomes[name] = ("ok", est, counter.total)
    return _TrialRecord(
        theta0=channel.theta0, g0=channel.g0, h0=channel.h0, outcomes=outcomes
    )


def _trial_args(config, params, pilot, grid, gdm, rules, stats):
    for trial in range(config.trials):
        yield (
            params,
            pilot,
            grid,
            gdm,
            rules,
            config.estimators,
            stats,
            config.seed,
            trial,
            config.fixed_los,
        )


def _star_run_trial(args):
    return _run_trial(*args)


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run the sweep and aggregate one row per (SNR, estimator).

    Trials are independent; with ``workers > 1`` they run in a process pool
    and are merged in trial order, so the output is identical to the
    sequential run.
    """
    pilot = dft_pilot(config.n)
    grid = DoaGrid.midpoints(config.grid_bits, config.theta_min, config.theta_max)
    gdm = config.gdm_config()
    rules = CountingRules(transcendental=config.transcendental_cost)
    rows: list[ResultRow] = []

    for snr_index, snr_db in enumerate(config.snr_db):
        params = config.params_at(snr_db)
        stats = None
        if "lmmse" in config.estimators:
            stats = train_lmmse(
                params,
                pilot,
                config.lmmse_samples,
                _substream(config.seed, _DOMAIN_LMMSE, snr_index),
                ridge=config.lmmse_ridge,
            )
        args = _trial_args(config, params, pilot, grid, gdm, rules, stats)
        if config.workers > 1:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                records = list(pool.map(_star_run_trial, args, chunksize=8))
        else:
            records = [_run_trial(*a) for a in args]

        for name in config.estimators:
            estimates = []
            h0s = []
            thetas = []
            g0s = []
            mults = []
            failures = 0
            gdm_runs = 0
            for rec in records:
                status, payload, mult_total = rec.outcomes[name]
                if status != "ok":
                    failures += 1
                    continue
                estimates.append(payload)
                h0s.append(rec.h0)
                thetas.append(rec.theta0)
                g0s.append(rec.g0)
                mults.append(mult_total)
                if isinstance(payload, ChannelEstimate):
                    gdm_runs += payload.diagnostics.gdm_runs
            if estimates:
                chan = mse_channel(estimates, h0s)
                if name == "lmmse":
                    doa = fading = float("nan")
                else:
                    doa = mse_doa(estimates, thetas)
                    fading = mse_fading(estimates, g0s)
                avg_mults = float(np.mean(mults))
            else:
                chan = doa = fading = avg_mults = float("nan")
            rows.append(
                ResultRow(
                    estimator=name,
                    snr_db=float(snr_db),
                    l=config.l,
                    m=config.m,
                    n=config.n,
                    trials=len(estimates),
                    mse_channel=chan,
                    mse_doa=doa,
                    mse_fading=fading,
                    avg_real_mults=avg_mults,
                    seed=config.seed,
                    failures=failures,
                    gdm_runs=gdm_runs,
                )
            )
    return ExperimentResult(rows=rows)


def write_csv(result: ExperimentResult, path) -> None:
    """Write the result rows under the fixed schema: UTF-8, LF endings,
    shortest round-trip decimals."""
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for row in result.rows:
                writer.writerow(
                    [
                        row.estimator,
                        float(row.snr_db),
                        row.l,
                        row.m,
                        row.n,
                        row.trials,
                        float(row.mse_channel),
                        float(row.mse_doa),
                        float(row.mse_fading),
                        float(row.avg_real_mults),
                        row.seed,
                    ]
                )
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def read_csv(path) -> list[dict]:
    """Read back a result file; numeric fields are parsed to float/int."""
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header in {path}")
        for rec in reader:
            out.append(
                {
                    "estimator": rec["estimator"],
                    "snr_db": float(rec["snr_db"]),
                    "L": int(rec["L"]),
                    "M": int(rec["M"]),
                    "N": int(rec["N"]),
                    "trials": int(rec["trials"]),
                    "mse_channel": float(rec["mse_channel"]),
                    "mse_doa": float(rec["mse_doa"]),
                    "mse_fading": float(rec["mse_fading"]),
                    "avg_real_mults": float(rec["avg_real_mults"]),
                    "seed": int(rec["seed"]),
                }
            )
    return out
