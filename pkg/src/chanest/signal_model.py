"""Rician multipath synthesis and one-bit quantization for a ULA receiver.

The receiver observes N pilot repetitions on M antennas.  With pilot x and
channel h the stacked (length MN) observation is

    y = sqrt(rho) * (x kron h) + n,      n ~ CN(0, I)

and the one-bit front end keeps only the signs of the real and imaginary
parts of each sample.  The Kronecker form is used throughout; the MN x M
pilot matrix x kron I_M is never materialized.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class SystemParams:
    """Scalar model parameters shared by every stage.

    Attributes
    ----------
    M, N : int
        Antenna count and pilot length.
    L : int
        Number of NLOS paths (0 means pure LOS).
    K : float
        Rician factor, linear scale.
    snr : float
        Transmit SNR rho, linear scale.  Zero is permitted as a diagnostic
        value (pure-noise runs); negative is rejected.
    theta_min, theta_max : float
        DOA domain bounds in radians, inside (-pi/2, pi/2).
    d_over_lambda : float
        Element spacing over wavelength.
    """

    M: int
    N: int
    L: int
    K: float
    snr: float
    theta_min: float = -np.pi / 3
    theta_max: float = np.pi / 3
    d_over_lambda: float = 0.5

    def __post_init__(self) -> None:
        if self.M < 1:
            raise ValueError("antenna count M must be at least 1")
        if self.N < 1:
            raise ValueError("pilot length N must be at least 1")
        if self.L < 0:
            raise ValueError("path count L must be non-negative")
        if self.K <= 0:
            raise ValueError("Rician factor K must be positive")
        if self.snr < 0:
            raise ValueError("snr must be non-negative")
        half_pi = np.pi / 2
        if not (-half_pi < self.theta_min < self.theta_max < half_pi):
            raise ValueError("need -pi/2 < theta_min < theta_max < pi/2")

    @property
    def sigma_sq(self) -> float:
        """Variance of the NLOS-plus-noise disturbance seen by the LOS term."""
        if self.L == 0:
            return 1.0
        return self.snr / (self.K + 1.0) + 1.0

    @property
    def rho_tilde(self) -> float:
        """Effective SNR after folding the NLOS power into the noise."""
        return self.snr / self.sigma_sq

    @property
    def c0(self) -> float:
        """LOS path weight."""
        return float(rician_weights(self.K, self.L)[0])


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the multipath channel.

    ``h`` is the weighted sum over paths; ``h0`` is the bare LOS component
    g0 * a(theta0), without the LOS weight c0, which is the estimation
    target throughout.
    """

    gains: np.ndarray
    doas: np.ndarray
    weights: np.ndarray
    h: np.ndarray
    h0: np.ndarray

    @property
    def g0(self) -> complex:
        return complex(self.gains[0])

    @property
    def theta0(self) -> float:
        return float(self.doas[0])


@dataclass(frozen=True)
class PilotSequence:
    """Unit-modulus pilot of length N."""

    x: np.ndarray

    def __post_init__(self) -> None:
        if self.x.ndim != 1 or self.x.size < 1:
            raise ValueError("pilot must be a nonempty vector")
        if np.any(np.abs(np.abs(self.x) - 1.0) > 1e-12):
            raise ValueError("pilot entries must have unit modulus")

    def __len__(self) -> int:
        return self.x.size


@dataclass(frozen=True)
class QuantizedObservation:
    """One-bit observation: every entry of y_hat is in {(+-1 +-1j)/sqrt(2)}.

    The unquantized y is retained for debugging and oracle tests only;
    estimators must not touch it.
    """

    y_hat: np.ndarray
    y: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        half = 1.0 / SQRT2
        re_ok = np.isin(self.y_hat.real, (half, -half))
        im_ok = np.isin(self.y_hat.imag, (half, -half))
        if not (np.all(re_ok) and np.all(im_ok)):
            raise ValueError("y_hat entries must lie on the QPSK circle exactly")

    def __len__(self) -> int:
        return self.y_hat.size


def steering_vector(theta: float, m: int, d_over_lambda: float = 0.5) -> np.ndarray:
    """Array response of an M-element ULA for a plane wave from angle theta.

    Element i carries the phase shift exp(-2j*pi*d/lambda*i*sin(theta)), so
    every entry has unit modulus.
    """
    if m < 1:
        raise ValueError("steering vector needs at least one element")
    phase = -2j * np.pi * d_over_lambda * np.sin(theta)
    return np.exp(phase * np.arange(m))


def rician_weights(k: float, num_paths: int) -> np.ndarray:
    """Path amplitude weights [c0, c1, ..., cL] for Rician factor k.

    The LOS weight is sqrt(k/(k+1)) and the L NLOS paths split the rest
    evenly, so the squared weights sum to one.  With no NLOS paths the
    single weight is 1 (the k/(k+1) split degenerates).
    """
    if k <= 0:
        raise ValueError("Rician factor must be positive")
    if num_paths < 0:
        raise ValueError("path count must be non-negative")
    if num_paths == 0:
        return np.array([1.0])
    c0 = np.sqrt(k / (k + 1.0))
    c_nlos = np.sqrt(1.0 / (num_paths * (k + 1.0)))
    return np.concatenate(([c0], np.full(num_paths, c_nlos)))


def complex_normal(rng: np.random.Generator, size) -> np.ndarray:
    """CN(0, 1) samples: two independent N(0, 1/2) reals per entry.

    Real parts are drawn before imaginary parts; callers relying on
    reproducibility get that fixed order.
    """
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / SQRT2


def draw_channel(
    params: SystemParams,
    rng: np.random.Generator,
    fixed_los: tuple[float, complex] | None = None,
) -> ChannelRealization:
    """Draw path gains ~ CN(0,1) and DOAs ~ Unif(theta_min, theta_max).

    ``fixed_los`` pins (theta0, g0) for conditional-MSE runs; the NLOS paths
    and the stream consumption are unchanged, so fixing the LOS pair does
    not shift any other draw.
    """
    n_paths = params.L + 1
    gains = complex_normal(rng, n_paths)
    doas = rng.uniform(params.theta_min, params.theta_max, n_paths)
    if fixed_los is not None:
        theta0, g0 = fixed_los
        gains[0] = g0
        doas[0] = theta0
    weights = rician_weights(params.K, params.L)
    steer = np.stack(
        [steering_vector(t, params.M, params.d_over_lambda) for t in doas]
    )
    h = (weights * gains) @ steer
    h0 = gains[0] * steer[0]
    return ChannelRealization(gains=gains, doas=doas, weights=weights, h=h, h0=h0)


def dft_pilot(n: int) -> PilotSequence:
    """Last column of the size-n DFT matrix: x_i = exp(-2j*pi*i*(n-1)/n)."""
    if n < 1:
        raise ValueError("pilot length must be at least 1")
    idx = np.arange(n)
    return PilotSequence(x=np.exp(-2j * np.pi * idx * (n - 1) / n))


def quantize(y: np.ndarray) -> np.ndarray:
    """One-bit quantizer: signs of real and imaginary parts, scaled to unit power.

    sgn(0) is +1 so the map is total.  Idempotent: quantizing a quantized
    vector reproduces it bit for bit.
    """
    y = np.asarray(y)
    if np.any(np.isnan(y.real)) or np.any(np.isnan(y.imag)):
        raise ValueError("cannot quantize NaN samples")
    re = np.where(y.real >= 0, 1.0, -1.0)
    im = np.where(y.imag >= 0, 1.0, -1.0)
    return (re + 1j * im) / SQRT2


def synthesize_observation(
    params: SystemParams,
    channel: ChannelRealization,
    pilot: PilotSequence,
    rng: np.random.Generator,
) -> QuantizedObservation:
    """Form y = sqrt(rho) * (x kron h) + CN(0, I) noise and quantize it."""
    if channel.h.size != params.M:
        raise ValueError("channel length does not match antenna count")
    if len(pilot) != params.N:
        raise ValueError("pilot length does not match params")
    noise = complex_normal(rng, params.M * params.N)
    y = np.sqrt(params.snr) * np.kron(pilot.x, channel.h) + noise
    return QuantizedObservation(y_hat=quantize(y), y=y)
