import numpy as np
import pytest

from chanest.signal_model import (
    ChannelRealization,
    PilotSequence,
    QuantizedObservation,
    SystemParams,
    complex_normal,
    dft_pilot,
    draw_channel,
    quantize,
    rician_weights,
    steering_vector,
    synthesize_observation,
)

HALF = 1.0 / np.sqrt(2.0)

# 10**1.35 and the matching path weights, evaluated at 40 digits.
K_1350 = 22.387211385683396
C0_1350_L5 = 0.9783872387012537
CL_1350_L5 = 0.09247530605143847


def test_quantizer_outputs_live_on_the_qpsk_lattice():
    rng = np.random.default_rng(0)
    y = rng.standard_normal(200) + 1j * rng.standard_normal(200)
    q = quantize(y)
    assert np.isin(q.real, (HALF, -HALF)).all()
    assert np.isin(q.imag, (HALF, -HALF)).all()


def test_quantizer_is_idempotent_bit_for_bit():
    rng = np.random.default_rng(1)
    for _ in range(20):
        y = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        once = quantize(y)
        twice = quantize(once)
        assert np.array_equal(once, twice)


def test_quantizer_maps_zero_parts_to_plus():
    q = quantize(np.array([0.0 + 0.0j, -0.0 + 0.0j, 0.0 - 1.0j]))
    assert q[0] == HALF + 1j * HALF
    assert q[1] == HALF + 1j * HALF
    assert q[2] == HALF - 1j * HALF


def test_quantizer_known_values():
    y = np.array([1.0 - 2.0j, -0.3 + 0.4j, 5.0 + 5.0j])
    expected = np.array(
        [HALF - 1j * HALF, -HALF + 1j * HALF, HALF + 1j * HALF]
    )
    assert np.array_equal(quantize(y), expected)


def test_quantizer_rejects_nan():
    with pytest.raises(ValueError):
        quantize(np.array([np.nan + 0.0j]))


def test_steering_entries_have_unit_modulus_and_reference_element_one():
    a = steering_vector(0.47, 12)
    assert a.shape == (12,)
    assert a[0] == 1.0 + 0.0j
    np.testing.assert_allclose(np.abs(a), 1.0, rtol=0, atol=1e-15)


def test_steering_phase_at_quarter_pi():
    # sin(pi/4) evaluated at 40 digits; element m advances the phase by
    # -2*pi*(d/lambda)*sin(theta) per step.
    sin_q = 0.7071067811865475
    a = steering_vector(np.pi / 4, 4, d_over_lambda=0.5)
    import cmath

    for m in range(4):
        expected = cmath.exp(-1j * np.pi * m * sin_q)
        assert abs(a[m] - expected) < 1e-14


def test_steering_spacing_scales_the_phase():
    theta = -0.2
    full = steering_vector(theta, 6, d_over_lambda=0.5)
    halfspace = steering_vector(theta, 6, d_over_lambda=0.25)
    np.testing.assert_allclose(halfspace * halfspace, full, rtol=0, atol=1e-14)


def test_steering_rejects_empty_array():
    with pytest.raises(ValueError):
        steering_vector(0.1, 0)


def test_rician_weights_without_scatterers():
    w = rician_weights(5.0, 0)
    assert w.shape == (1,)
    assert w[0] == 1.0


def test_rician_weights_reference_values():
    w = rician_weights(K_1350, 5)
    assert w.shape == (6,)
    np.testing.assert_allclose(w[0], C0_1350_L5, rtol=1e-12)
    np.testing.assert_allclose(w[1:], CL_1350_L5, rtol=1e-12)


def test_rician_weights_have_unit_energy():
    for k, l in [(0.5, 1), (22.4, 5), (1000.0, 12)]:
        w = rician_weights(k, l)
        assert abs(np.sum(w**2) - 1.0) < 1e-12


def test_complex_normal_draws_real_block_then_imaginary_block():
    z = complex_normal(np.random.default_rng(7), 5)
    rng = np.random.default_rng(7)
    re = rng.standard_normal(5)
    im = rng.standard_normal(5)
    assert np.array_equal(z, (re + 1j * im) / np.sqrt(2.0))


def test_complex_normal_is_unit_variance():
    z = complex_normal(np.random.default_rng(8), 200_000)
    assert abs(np.mean(z)) < 0.01
    assert abs(np.mean(np.abs(z) ** 2) - 1.0) < 0.01


def test_noise_level_depends_on_scatterer_presence():
    los_only = SystemParams(M=4, N=4, L=0, K=22.4, snr=10.0)
    assert los_only.sigma_sq == 1.0
    assert los_only.rho_tilde == 10.0

    scattered = SystemParams(M=4, N=4, L=5, K=22.4, snr=10.0)
    assert scattered.sigma_sq == 10.0 / 23.4 + 1.0
    assert scattered.rho_tilde == 10.0 / scattered.sigma_sq


def test_params_validation():
    with pytest.raises(ValueError):
        SystemParams(M=0, N=4, L=1, K=1.0, snr=1.0)
    with pytest.raises(ValueError):
        SystemParams(M=4, N=0, L=1, K=1.0, snr=1.0)
    with pytest.raises(ValueError):
        SystemParams(M=4, N=4, L=-1, K=1.0, snr=1.0)
    with pytest.raises(ValueError):
        SystemParams(M=4, N=4, L=1, K=0.0, snr=1.0)
    with pytest.raises(ValueError):
        SystemParams(M=4, N=4, L=1, K=1.0, snr=-0.5)
    with pytest.raises(ValueError):
        SystemParams(M=4, N=4, L=1, K=1.0, snr=1.0, theta_min=0.3, theta_max=0.2)
    with pytest.raises(ValueError):
        SystemParams(M=4, N=4, L=1, K=1.0, snr=1.0, theta_max=2.0)


def test_channel_is_the_weighted_sum_of_path_responses():
    params = SystemParams(M=6, N=4, L=3, K=8.0, snr=2.0)
    channel = draw_channel(params, np.random.default_rng(21))
    rebuilt = np.zeros(params.M, dtype=complex)
    for w, g, th in zip(channel.weights, channel.gains, channel.doas):
        rebuilt += w * g * steering_vector(th, params.M, params.d_over_lambda)
    np.testing.assert_allclose(channel.h, rebuilt, rtol=0, atol=1e-12)


def test_target_channel_carries_no_path_weight():
    params = SystemParams(M=6, N=4, L=3, K=8.0, snr=2.0)
    channel = draw_channel(params, np.random.default_rng(22))
    expected = channel.gains[0] * steering_vector(
        channel.doas[0], params.M, params.d_over_lambda
    )
    assert np.array_equal(channel.h0, expected)
    # with scatterers present the full channel differs from the target
    assert not np.allclose(channel.h, channel.h0)


def test_doas_stay_inside_the_sector():
    params = SystemParams(M=4, N=4, L=8, K=3.0, snr=1.0)
    rng = np.random.default_rng(23)
    for _ in range(50):
        channel = draw_channel(params, rng)
        assert np.all(channel.doas >= params.theta_min)
        assert np.all(channel.doas <= params.theta_max)


def test_fixed_los_pins_only_the_first_path():
    params = SystemParams(M=4, N=4, L=2, K=3.0, snr=1.0)
    pinned = draw_channel(
        params, np.random.default_rng(24), fixed_los=(0.11, 0.5 - 0.25j)
    )
    assert pinned.theta0 == 0.11
    assert pinned.g0 == 0.5 - 0.25j
    free = draw_channel(params, np.random.default_rng(24))
    assert np.array_equal(pinned.gains[1:], free.gains[1:])
    assert np.array_equal(pinned.doas[1:], free.doas[1:])


def test_pure_los_channel_equals_the_target():
    params = SystemParams(M=5, N=4, L=0, K=4.0, snr=1.0)
    channel = draw_channel(params, np.random.default_rng(25))
    assert channel.gains.shape == (1,)
    np.testing.assert_allclose(channel.h, channel.h0, rtol=0, atol=1e-15)


def test_draws_reproduce_under_the_same_seed():
    params = SystemParams(M=4, N=4, L=2, K=3.0, snr=1.0)
    a = draw_channel(params, np.random.default_rng(26))
    b = draw_channel(params, np.random.default_rng(26))
    assert np.array_equal(a.h, b.h)
    assert np.array_equal(a.doas, b.doas)


def test_dft_pilot_values():
    x = dft_pilot(4).x
    np.testing.assert_allclose(np.abs(x), 1.0, rtol=0, atol=1e-15)
    assert x[0] == 1.0 + 0.0j
    # exp(-2j*pi*n*3/4) for n=1 lands on +j
    np.testing.assert_allclose(x[1], 1j, rtol=0, atol=1e-14)


def test_pilot_sequence_rejects_non_unit_symbols():
    with pytest.raises(ValueError):
        PilotSequence(np.array([1.0 + 0.0j, 0.5 + 0.0j]))


def test_quantized_observation_rejects_off_lattice_entries():
    with pytest.raises(ValueError):
        QuantizedObservation(np.array([0.5 + 0.5j]))


def test_observation_reproduces_the_model_equation():
    params = SystemParams(M=3, N=4, L=2, K=6.0, snr=2.5)
    pilot = dft_pilot(params.N)

    rng = np.random.default_rng(30)
    channel = draw_channel(params, rng)
    obs = synthesize_observation(params, channel, pilot, rng)

    # replay the same stream: channel draws first, then one noise block
    replay = np.random.default_rng(30)
    _ = draw_channel(params, replay)
    noise = complex_normal(replay, params.M * params.N)
    clean = np.sqrt(params.snr) * np.kron(pilot.x, channel.h)
    expected = quantize(clean + noise)

    assert np.array_equal(obs.y_hat, expected)
    assert np.array_equal(obs.y, clean + noise)


def test_observation_sample_order_is_block_per_symbol():
    # sample k = n*M + m pairs pilot symbol n with antenna m
    params = SystemParams(M=2, N=3, L=0, K=5.0, snr=4.0)
    pilot = dft_pilot(params.N)
    rng = np.random.default_rng(31)
    channel = draw_channel(params, rng)
    obs = synthesize_observation(params, channel, pilot, rng)

    replay = np.random.default_rng(31)
    _ = draw_channel(params, replay)
    noise = complex_normal(replay, params.M * params.N)
    for n in range(params.N):
        for m in range(params.M):
            k = n * params.M + m
            clean = np.sqrt(params.snr) * pilot.x[n] * channel.h[m]
            assert abs(obs.y[k] - (clean + noise[k])) < 1e-12


def test_channel_realization_exposes_los_accessors():
    c = ChannelRealization(
        gains=np.array([1.0 + 2.0j, 0.5j]),
        doas=np.array([0.1, -0.2]),
        weights=np.array([0.9, 0.4]),
        h=np.zeros(3, dtype=complex),
        h0=np.zeros(3, dtype=complex),
    )
    assert c.g0 == 1.0 + 2.0j
    assert c.theta0 == 0.1
