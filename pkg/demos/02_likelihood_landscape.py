"""Look at the shape of the fading log-likelihood and watch the
optimizer climb it.

At a fixed scan angle the objective is concave in the two real fading
coordinates, so gradient ascent with a backtracking line search finds
the unique maximizer. The script prints a coarse slice of the surface,
then the accepted-step objective path from the least-squares start.
"""

import numpy as np

from chanest import (
    GdmConfig,
    SystemParams,
    build_context,
    dft_pilot,
    draw_channel,
    log_likelihood,
    maximize_g,
    synthesize_observation,
    zf_init,
)


def main():
    params = SystemParams(M=8, N=8, L=2, K=10**1.35, snr=1.0)
    pilot = dft_pilot(params.N)
    rng = np.random.default_rng(7)
    channel = draw_channel(params, rng)
    obs = synthesize_observation(params, channel, pilot, rng)

    theta = channel.theta0
    ctx = build_context(obs, pilot, params, theta)

    print("objective on a coarse grid (rows: Re g, cols: Im g):")
    axis = np.linspace(-1.5, 1.5, 7)
    header = "        " + "".join("%9.2f" % b for b in axis)
    print(header)
    for a in axis:
        row = ["%8.2f" % a]
        for b in axis:
            row.append("%9.2f" % log_likelihood(ctx, np.array([a, b])))
        print("".join(row))

    start = zf_init(obs, pilot, params, theta)
    g, value, diag = maximize_g(
        ctx, GdmConfig(), start, track_path=True
    )
    print("\nleast-squares start  : [%+.4f, %+.4f]" % (start[0], start[1]))
    print("maximizer            : [%+.4f, %+.4f]" % (g[0], g[1]))
    print("true direct-path gain: %+.4f %+.4fj"
          % (channel.g0.real, channel.g0.imag))
    print("iterations           :", diag.iterations)
    print("converged            :", diag.converged)
    print("\nobjective after each accepted step:")
    path = diag.objective_path or [value]
    for i, v in enumerate(path):
        print("  step %2d: %.6f" % (i, v))


if __name__ == "__main__":
    main()
