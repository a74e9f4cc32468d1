"""One-bit log-likelihood in the fading coefficient, and its maximizer.

For a fixed DOA hypothesis the stacked pilot response is x kron a(theta)
scaled by the LOS weight; writing each entry X_k in real coordinates gives
per-sample direction vectors f_R/f_I, and the log-likelihood of the real
2-vector g = [Re g0, Im g0] is a sum of log Phi terms with arguments linear
in g.  Phi is log-concave, so the sum is concave in g and a gradient ascent
with backtracking line search finds the maximizer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .counting import MultCounter
from .signal_model import (
    PilotSequence,
    QuantizedObservation,
    SystemParams,
    steering_vector,
)

HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)

# Line-search steps below this are pure rounding noise; treated as a stall.
MIN_STEP = 1e-20


class NumericalError(RuntimeError):
    """An optimizer step produced a non-finite objective."""


def log_norm_cdf(z):
    """log Phi(z), elementwise, stable across both tails.

    Delegates to the scaled-erfc evaluation in scipy (log_ndtr): the left
    tail stays finite far past the point where log(Phi(z)) would underflow
    (z ~ -38), and the right tail returns the tiny negative value instead
    of collapsing to -0.
    """
    z = np.asarray(z, dtype=float)
    if np.any(np.isnan(z)):
        raise ValueError("log_norm_cdf: NaN input")
    return special.log_ndtr(z)


def norm_pdf_over_cdf(u):
    """The ratio phi(u)/Phi(u), stable for u far below zero.

    Evaluated as exp(log phi - log Phi); for u << 0 both logs are large and
    negative but their difference is ~ -u, so the exp never overflows.
    """
    u = np.asarray(u, dtype=float)
    return np.exp(-0.5 * u * u - HALF_LOG_2PI - special.log_ndtr(u))


@dataclass(frozen=True)
class LikelihoodContext:
    """Precomputed terms of the likelihood at one DOA hypothesis.

    ``y_hat_r``/``y_hat_i`` hold sqrt(2) times the real/imaginary parts of
    the quantized samples, i.e. the bare signs.  ``f_r``/``f_i`` stack the
    per-sample direction 2-vectors; each row has norm c0.  ``design`` caches
    the (2*MN, 2) matrix of rows sign * sqrt(2*rho_tilde) * f so that the
    Phi arguments are a single matrix-vector product; it carries no
    information beyond the other fields.
    """

    y_hat_r: np.ndarray
    y_hat_i: np.ndarray
    f_r: np.ndarray
    f_i: np.ndarray
    rho_tilde: float
    theta_hypothesis: float
    design: np.ndarray

    @property
    def n_samples(self) -> int:
        return self.f_r.shape[0]


@dataclass(frozen=True)
class GdmConfig:
    """Gradient-ascent settings: stop at gradient norm eta, Armijo slope
    fraction alpha, step shrink beta, and two guards (iteration cap and a
    radius cap for sign-consistent data whose supremum sits at infinity)."""

    eta: float = 0.01
    alpha: float = 0.1
    beta: float = 0.5
    max_iters: int = 500
    g_norm_cap: float = 100.0

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 0.5:
            raise ValueError("alpha must be in (0, 0.5)")
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must be in (0, 1)")
        if self.eta <= 0.0:
            raise ValueError("eta must be positive")
        if self.max_iters < 1 or self.g_norm_cap <= 0.0:
            raise ValueError("caps must be positive")


@dataclass
class GdmDiagnostics:
    iterations: int = 0
    obj_evals: int = 0
    grad_evals: int = 0
    final_grad_norm: float = np.nan
    converged: bool = False
    cap_exit: bool = False
    stalled: bool = False
    objective_path: list | None = None


def build_context(
    obs: QuantizedObservation,
    pilot: PilotSequence,
    params: SystemParams,
    theta: float,
    counter: MultCounter | None = None,
) -> LikelihoodContext:
    """Assemble the likelihood context at DOA hypothesis ``theta``.

    Sample k = n*M + m pairs pilot symbol n with antenna m, matching the
    column-stacked observation; X_k = c0 * x_n * a_m(theta).
    """
    if not params.theta_min <= theta <= params.theta_max:
        raise ValueError("DOA hypothesis outside the domain")
    yh = obs.y_hat
    mn = params.M * params.N
    if yh.size != mn or len(pilot) != params.N:
        raise ValueError("observation/pilot dimensions do not match params")

    a = steering_vector(theta, params.M, params.d_over_lambda)
    big_x = params.c0 * np.kron(pilot.x, a)
    f_r = np.column_stack((big_x.real, -big_x.imag))
    f_i = np.column_stack((big_x.imag, big_x.real))
    # The quantized parts are +-1/sqrt(2) exactly, so the sign alone is the
    # sqrt(2)-scaled half.
    y_hat_r = np.where(yh.real > 0, 1.0, -1.0)
    y_hat_i = np.where(yh.imag > 0, 1.0, -1.0)

    coef = np.sqrt(2.0 * params.rho_tilde)
    design = np.concatenate(
        ((coef * y_hat_r)[:, None] * f_r, (coef * y_hat_i)[:, None] * f_i)
    )
    if counter is not None:
        counter.charge_context(params.M, mn)
    return LikelihoodContext(
        y_hat_r=y_hat_r,
        y_hat_i=y_hat_i,
        f_r=f_r,
        f_i=f_i,
        rho_tilde=params.rho_tilde,
        theta_hypothesis=theta,
        design=design,
    )


def log_likelihood(
    ctx: LikelihoodContext, g, counter: MultCounter | None = None
) -> float:
    """Sum of log Phi over the 2*MN sign constraints at fading vector g.

    NaN in g propagates to the result rather than raising, so the optimizer
    can detect and report it.
    """
    if counter is not None:
        counter.charge_objective(ctx.n_samples)
    u = ctx.design @ np.asarray(g, dtype=float)
    return float(np.sum(special.log_ndtr(u)))


def log_likelihood_gradient(
    ctx: LikelihoodContext, g, counter: MultCounter | None = None
) -> np.ndarray:
    """Analytic gradient: each row contributes r(u) times its design row,
    with r the density-to-CDF ratio."""
    if counter is not None:
        counter.charge_gradient(ctx.n_samples)
    u = ctx.design @ np.asarray(g, dtype=float)
    return ctx.design.T @ norm_pdf_over_cdf(u)


def zf_init(
    obs: QuantizedObservation,
    pilot: PilotSequence,
    params: SystemParams,
    theta: float,
    counter: MultCounter | None = None,
) -> np.ndarray:
    """Zero-forcing starting point for the fading search.

    The pilot map has orthogonal columns, so its pseudo-inverse applied to
    y_hat is the per-antenna pilot combine divided by N; rescaling by
    1/sqrt(rho_tilde) and projecting onto the steering direction gives a
    finite real 2-vector estimate of g0.
    """
    yh = obs.y_hat
    if yh.size != params.M * params.N or len(pilot) != params.N:
        raise ValueError("observation/pilot dimensions do not match params")
    if counter is not None:
        counter.charge_zf_init(params.M, params.M * params.N)
    if params.rho_tilde == 0.0:
        # Diagnostic pure-noise runs carry no scale information; start at 0.
        return np.zeros(2)
    blocks = yh.reshape(params.N, params.M)
    h_zf = (blocks.T @ np.conj(pilot.x)) / (params.N * np.sqrt(params.rho_tilde))
    a = steering_vector(theta, params.M, params.d_over_lambda)
    g0 = np.vdot(a, h_zf) / (params.c0 * params.M)
    return np.array([g0.real, g0.imag])


def maximize_g(
    ctx: LikelihoodContext,
    cfg: GdmConfig,
    g_init,
    counter: MultCounter | None = None,
    track_path: bool = False,
):
    """Gradient ascent with backtracking line search on the concave objective.

    Parameters
    ----------
    ctx : LikelihoodContext
    cfg : GdmConfig
    g_init : array_like, shape (2,)
        Starting point, typically from `zf_init`.
    counter : MultCounter, optional
        Charged per objective/gradient evaluation and per accepted step.
    track_path : bool
        Record the objective value after every accepted step (testing aid).

    Returns
    -------
    g : ndarray, shape (2,)
    value : float
        Objective at ``g``.
    diag : GdmDiagnostics
        ``converged`` means the gradient-norm test fired; ``cap_exit`` marks
        the first iterate outside the radius cap (returned as-is);
        ``stalled`` marks a line search that hit the minimum step.

    Raises
    ------
    NumericalError
        If the objective turns non-finite at the start or during the search.

    Notes
    -----
    Ascent direction is the gradient itself; a step t is accepted when
    L(g + t*grad) >= L(g) + alpha * t * ||grad||^2, shrinking t by beta
    otherwise.  Acceptance makes the objective sequence nondecreasing.
    """
    diag = GdmDiagnostics()

    def objective(v):
        diag.obj_evals += 1
        if counter is not None:
            counter.charge_objective(ctx.n_samples)
        return float(np.sum(special.log_ndtr(ctx.design @ v)))

    g = np.array(g_init, dtype=float)
    if g.shape != (2,):
        raise ValueError("g_init must be a real 2-vector")
    value = objective(g)
    if not np.isfinite(value):
        raise NumericalError("objective not finite at the starting point")
    if track_path:
        diag.objective_path = [value]

    for _ in range(cfg.max_iters):
        grad = log_likelihood_gradient(ctx, g, counter)
        diag.grad_evals += 1
        grad_norm = float(np.linalg.norm(grad))
        diag.final_grad_norm = grad_norm
        if not np.isfinite(grad_norm):
            raise NumericalError("gradient not finite")
        if grad_norm <= cfg.eta:
            diag.converged = True
            return g, value, diag

        slope = grad_norm * grad_norm
        t = 1.0
        while True:
            candidate = g + t * grad
            cand_value = objective(candidate)
            if not np.isfinite(cand_value):
                raise NumericalError(
                    f"non-finite objective in line search at t={t:.3g}"
                )
            if cand_value >= value + cfg.alpha * t * slope:
                break
            t *= cfg.beta
            if t < MIN_STEP:
                diag.stalled = True
                return g, value, diag

        g, value = candidate, cand_value
        diag.iterations += 1
        if counter is not None:
            counter.charge_gdm_step()
        if track_path:
            diag.objective_path.append(value)
        if float(np.linalg.norm(g)) > cfg.g_norm_cap:
            diag.cap_exit = True
            return g, value, diag

    return g, value, diag
