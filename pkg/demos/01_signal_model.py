"""Walk through the received-signal model one stage at a time.

Draws a Rician channel for a 16-element array, transmits an 8-symbol
unit-modulus pilot, and shows what the one-bit front end does to the
received block: every complex sample collapses onto the four points
(+-1 +- j)/sqrt(2), keeping only the sign pair.
"""

import numpy as np

from chanest import (
    SystemParams,
    dft_pilot,
    draw_channel,
    quantize,
    synthesize_observation,
)


def main():
    params = SystemParams(M=16, N=8, L=4, K=10**1.35, snr=10 ** (5 / 10))
    pilot = dft_pilot(params.N)
    rng = np.random.default_rng(12345)

    print("system:")
    print("  antennas M          =", params.M)
    print("  pilot length N      =", params.N)
    print("  scattered paths L   =", params.L)
    print("  power ratio K       = %.3f" % params.K)
    print("  input power         = %.3f (5 dB)" % params.snr)
    print("  noise-equiv power   = %.4f" % params.sigma_sq)
    print("  effective power     = %.4f" % params.rho_tilde)

    channel = draw_channel(params, rng)
    print("\nchannel draw:")
    print("  direct-path angle   = %+.4f rad" % channel.theta0)
    print("  direct-path gain    = %.4f %+.4fj"
          % (channel.g0.real, channel.g0.imag))
    print("  per-antenna power   = %.4f"
          % (np.linalg.norm(channel.h) ** 2 / params.M))

    obs = synthesize_observation(params, channel, pilot, rng)
    print("\nreceived block (M*N = %d samples):" % obs.y.size)
    print("  first three raw     :", np.round(obs.y[:3], 3))
    print("  first three 1-bit   :", np.round(obs.y_hat[:3], 3))
    print("  distinct 1-bit vals :", np.unique(np.round(obs.y_hat, 6)).size)

    # The quantizer keeps signs only, so amplitude information is gone:
    # scaling the input changes nothing.
    again = quantize(3.7 * obs.y)
    print("  scale-invariant     :", bool(np.array_equal(again, obs.y_hat)))


if __name__ == "__main__":
    main()
