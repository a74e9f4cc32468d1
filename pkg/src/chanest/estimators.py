"""The three channel estimators for the one-bit receiver.

MIPS: pick the DOA whose pilot-steering image has the largest inner product
magnitude with the quantized observation, then solve the concave fading
problem once at that angle.  The pseudo-ML reference solves the fading
problem at every grid angle and keeps the best objective.  LMMSE applies a
covariance-trained linear filter.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .counting import MultCounter
from .likelihood import (
    GdmConfig,
    NumericalError,
    build_context,
    maximize_g,
    zf_init,
)
from .signal_model import (
    PilotSequence,
    QuantizedObservation,
    SystemParams,
    complex_normal,
    quantize,
    rician_weights,
    steering_vector,
)

# Products of exact-modulus quantized samples land up to ~2 ulp outside the
# unit box; tolerate that, reject genuine violations.
UNIT_BOX_TOL = 1e-9


@dataclass(frozen=True)
class DoaGrid:
    """2^bits candidate DOAs at the midpoints of equal cells over the domain."""

    bits: int
    theta_min: float
    theta_max: float
    points: np.ndarray

    def __post_init__(self) -> None:
        if self.points.size == 0:
            raise ValueError("DOA grid must be nonempty")
        if np.any(np.diff(self.points) <= 0):
            raise ValueError("DOA grid points must be strictly increasing")

    @classmethod
    def midpoints(cls, bits: int, theta_min: float, theta_max: float) -> "DoaGrid":
        if bits < 0:
            raise ValueError("bits must be non-negative")
        if not theta_min < theta_max:
            raise ValueError("need theta_min < theta_max")
        count = 2**bits
        cell = (theta_max - theta_min) / count
        points = theta_min + (np.arange(count) + 0.5) * cell
        return cls(bits=bits, theta_min=theta_min, theta_max=theta_max, points=points)

    def __len__(self) -> int:
        return self.points.size


@dataclass
class EstimateDiagnostics:
    """Optimizer accounting for one estimator call."""

    gdm_runs: int = 0
    gdm_iterations: int = 0
    cap_exits: int = 0
    failed_points: int = 0
    objective: float = np.nan
    real_mults: int = 0


@dataclass
class ChannelEstimate:
    """Estimate of the dominant path: fading 2-vector, DOA, reconstruction."""

    g_hat: np.ndarray
    theta_hat: float
    h0_hat: np.ndarray
    estimator_tag: str
    diagnostics: EstimateDiagnostics

    @property
    def g0_hat(self) -> complex:
        return complex(self.g_hat[0], self.g_hat[1])


@dataclass
class LmmseStatistics:
    """Sample covariances for the linear estimator.

    ``cross_cov`` couples the weighted LOS channel c0*h0 with y_hat, so the
    filter output is in c0*h0 units; ``c0`` records the weight used so the
    estimate can be returned in h0 units.  The solved filter is cached on
    first use.
    """

    cross_cov: np.ndarray
    obs_cov: np.ndarray
    sample_count: int
    ridge: float
    c0: float = 1.0
    _filter: np.ndarray | None = field(default=None, repr=False, compare=False)


def _steering_matrix(thetas: np.ndarray, m: int, d_over_lambda: float) -> np.ndarray:
    phase = -2j * np.pi * d_over_lambda * np.sin(thetas)
    return np.exp(phase[:, None] * np.arange(m))


def mips_doa(
    obs: QuantizedObservation,
    pilot: PilotSequence,
    params: SystemParams,
    grid: DoaGrid,
    counter: MultCounter | None = None,
) -> float:
    """Exhaustive inner-product search for the dominant DOA.

    The objective |(x kron a(theta))^H y_hat| factors through the pilot
    combine z = sum_n conj(x_n) * block_n(y_hat), so the scan is one
    M-vector inner product per grid point.  Ties keep the lowest index.
    """
    if grid.points.size == 0:
        raise ValueError("DOA grid must be nonempty")
    yh = obs.y_hat
    mn = params.M * params.N
    if yh.size != mn or len(pilot) != params.N:
        raise ValueError("observation/pilot dimensions do not match params")
    z = yh.reshape(params.N, params.M).T @ np.conj(pilot.x)
    steer = _steering_matrix(grid.points, params.M, params.d_over_lambda)
    s = np.conj(steer) @ z
    objective = s.real**2 + s.imag**2
    if counter is not None:
        counter.charge_doa_scan(params.M, mn, grid.points.size)
    return float(grid.points[int(np.argmax(objective))])


def _check_unit_box(re: np.ndarray, im: np.ndarray) -> None:
    if np.any(np.abs(re) > 1.0 + UNIT_BOX_TOL) or np.any(np.abs(im) > 1.0 + UNIT_BOX_TOL):
        raise ValueError("matrix entries must have real and imaginary parts in [-1, 1]")


def sine_map(c) -> np.ndarray:
    """Elementwise sin(pi/2 * .) on real and imaginary parts separately."""
    c = np.asarray(c, dtype=complex)
    _check_unit_box(c.real, c.imag)
    re = np.clip(c.real, -1.0, 1.0)
    im = np.clip(c.imag, -1.0, 1.0)
    return np.sin(np.pi / 2 * re) + 1j * np.sin(np.pi / 2 * im)


def arcsine_map(c) -> np.ndarray:
    """Elementwise (2/pi) * arcsin(.) on real and imaginary parts; inverse of
    `sine_map` on the unit box."""
    c = np.asarray(c, dtype=complex)
    _check_unit_box(c.real, c.imag)
    re = np.clip(c.real, -1.0, 1.0)
    im = np.clip(c.imag, -1.0, 1.0)
    return (2 / np.pi) * (np.arcsin(re) + 1j * np.arcsin(im))


def _solve_fading(obs, pilot, params, theta, gdm, counter, track_path=False):
    ctx = build_context(obs, pilot, params, theta, counter)
    g_start = zf_init(obs, pilot, params, theta, counter)
    return maximize_g(ctx, gdm, g_start, counter, track_path)


def mips_fading(
    obs: QuantizedObservation,
    pilot: PilotSequence,
    params: SystemParams,
    theta_hat: float,
    gdm: GdmConfig,
    counter: MultCounter | None = None,
) -> np.ndarray:
    """Concave fading solve at a fixed DOA: context, ZF start, gradient ascent."""
    g, _, _ = _solve_fading(obs, pilot, params, theta_hat, gdm, counter)
    return g


def _reconstruct(g: np.ndarray, theta: float, params: SystemParams) -> np.ndarray:
    return (g[0] + 1j * g[1]) * steering_vector(theta, params.M, params.d_over_lambda)


def mips_estimate(
    obs: QuantizedObservation,
    pilot: PilotSequence,
    params: SystemParams,
    grid: DoaGrid,
    gdm: GdmConfig,
    counter: MultCounter | None = None,
) -> ChannelEstimate:
    """Two-stage estimate: grid DOA search, then exactly one fading solve."""
    start = counter.total if counter is not None else 0
    theta = mips_doa(obs, pilot, params, grid, counter)
    g, value, gdiag = _solve_fading(obs, pilot, params, theta, gdm, counter)
    diag = EstimateDiagnostics(
        gdm_runs=1,
        gdm_iterations=gdiag.iterations,
        cap_exits=int(gdiag.cap_exit),
        objective=value,
        real_mults=(counter.total - start) if counter is not None else 0,
    )
    return ChannelEstimate(
        g_hat=g,
        theta_hat=theta,
        h0_hat=_reconstruct(g, theta, params),
        estimator_tag="mips",
        diagnostics=diag,
    )


def pml_estimate(
    obs: QuantizedObservation,
    pilot: PilotSequence,
    params: SystemParams,
    grid: DoaGrid,
    gdm: GdmConfig,
    counter: MultCounter | None = None,
) -> ChannelEstimate:
    """Grid-exhaustive reference: one fading solve per DOA hypothesis.

    Keeps the hypothesis with the best inner objective, lowest grid index
    on ties.  A numerical failure at one grid point is skipped and flagged;
    the call fails only if every point does.
    """
    start = counter.total if counter is not None else 0
    best_value = -np.inf
    best_g = None
    best_theta = np.nan
    diag = EstimateDiagnostics()
    for theta in grid.points:
        diag.gdm_runs += 1
        try:
            g, value, gdiag = _solve_fading(obs, pilot, params, theta, gdm, counter)
        except NumericalError:
            diag.failed_points += 1
            continue
        diag.gdm_iterations += gdiag.iterations
        diag.cap_exits += int(gdiag.cap_exit)
        if value > best_value:
            best_value = value
            best_g = g
            best_theta = float(theta)
    if best_g is None:
        raise NumericalError("fading solve failed at every grid hypothesis")
    diag.objective = best_value
    diag.real_mults = (counter.total - start) if counter is not None else 0
    return ChannelEstimate(
        g_hat=best_g,
        theta_hat=best_theta,
        h0_hat=_reconstruct(best_g, best_theta, params),
        estimator_tag="pml",
        diagnostics=diag,
    )


def train_lmmse(
    params: SystemParams,
    pilot: PilotSequence,
    sample_count: int,
    rng: np.random.Generator,
    ridge: float = 1e-6,
) -> LmmseStatistics:
    """Estimate the (c0*h0, y_hat) cross- and y_hat auto-covariances.

    Fresh channel, noise, and quantization draws; means are taken as zero
    by circular symmetry.  Samples are generated in batches; the batched
    draws consume the stream in (gains, DOAs, noise) order per batch.
    """
    if sample_count < 1000:
        raise ValueError("need at least 1000 samples for usable covariances")
    m, n, mn = params.M, params.N, params.M * params.N
    weights = rician_weights(params.K, params.L)
    amp = np.sqrt(params.snr)
    cross = np.zeros((m, mn), dtype=complex)
    obs = np.zeros((mn, mn), dtype=complex)
    batch = 4096
    done = 0
    while done < sample_count:
        size = min(batch, sample_count - done)
        gains = complex_normal(rng, (size, params.L + 1))
        doas = rng.uniform(params.theta_min, params.theta_max, (size, params.L + 1))
        steer = np.exp(
            -2j
            * np.pi
            * params.d_over_lambda
            * np.sin(doas)[:, :, None]
            * np.arange(m)
        )
        h = np.einsum("pl,l,plm->pm", gains, weights, steer)
        y = amp * np.einsum("n,pm->pnm", pilot.x, h).reshape(size, mn)
        y += complex_normal(rng, (size, mn))
        yq = quantize(y)
        target = params.c0 * gains[:, :1] * steer[:, 0, :]
        cross += target.T @ np.conj(yq)
        obs += yq.T @ np.conj(yq)
        done += size
    cross /= sample_count
    obs /= sample_count
    obs = (obs + obs.conj().T) / 2
    return LmmseStatistics(
        cross_cov=cross,
        obs_cov=obs,
        sample_count=sample_count,
        ridge=ridge,
        c0=params.c0,
    )


def lmmse_estimate(
    obs: QuantizedObservation,
    stats: LmmseStatistics,
    counter: MultCounter | None = None,
) -> np.ndarray:
    """Linear estimate cross_cov (obs_cov + ridge I)^-1 y_hat, in h0 units."""
    yh = obs.y_hat
    mn = stats.obs_cov.shape[0]
    if yh.size != mn or stats.cross_cov.shape[1] != mn:
        raise ValueError("observation does not match trained statistics")
    if stats._filter is None:
        regularized = stats.obs_cov + stats.ridge * np.eye(mn)
        try:
            solved = np.linalg.solve(regularized, stats.cross_cov.conj().T)
        except np.linalg.LinAlgError as exc:
            raise NumericalError("observation covariance singular after ridge") from exc
        stats._filter = solved.conj().T
    if counter is not None:
        counter.charge_lmmse_apply(stats.cross_cov.shape[0], mn)
    return (stats._filter @ yh) / stats.c0
