import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from desaf.signal_model import (
    Ar4Params,
    ChannelScenario,
    add_noise_snr,
    generate_ar4,
    random_channel,
    simulate_channel,
)


def ar4_loop(xi, a):
    """Plain recursion, zero state."""
    u = np.zeros(len(xi))
    for n in range(len(xi)):
        acc = xi[n]
        for j in range(4):
            if n - 1 - j >= 0:
                acc += a[j] * u[n - 1 - j]
        u[n] = acc
    return u


def test_default_coefficients():
    p = Ar4Params()
    assert p.coefficients == (0.6617, 0.3402, 0.5235, -0.8703)
    assert p.innovation_variance == 1.0


def test_zero_innovation_variance_gives_zeros():
    u = generate_ar4(500, Ar4Params(innovation_variance=0.0), seed=3)
    assert np.all(u == 0)


def test_impulse_response():
    xi = np.zeros(6)
    xi[0] = 1.0
    u = generate_ar4(6, innovations=xi)
    assert u[0] == 1.0
    assert u[1] == pytest.approx(0.6617, abs=1e-15)
    assert u[2] == pytest.approx(0.6617**2 + 0.3402, abs=1e-15)
    np.testing.assert_allclose(u, ar4_loop(xi, Ar4Params().coefficients), atol=1e-14)


def test_matches_loop_on_random_innovations():
    xi = np.random.default_rng(1).standard_normal(300)
    u = generate_ar4(300, innovations=xi)
    np.testing.assert_allclose(u, ar4_loop(xi, Ar4Params().coefficients), rtol=1e-10, atol=1e-10)


def test_ar4_is_colored():
    u = generate_ar4(100_000, seed=0)
    r1 = np.dot(u[1:], u[:-1]) / np.dot(u, u)
    assert abs(r1) > 0.4


@pytest.mark.parametrize("bad", [0, -5])
def test_ar4_rejects_non_positive_length(bad):
    with pytest.raises(ValueError):
        generate_ar4(bad, seed=0)


def test_generators_are_reproducible():
    assert np.array_equal(generate_ar4(64, seed=9), generate_ar4(64, seed=9))
    assert np.array_equal(random_channel(32, 9), random_channel(32, 9))
    d = np.sin(np.arange(50.0))
    assert np.array_equal(add_noise_snr(d, 10, 4)[0], add_noise_snr(d, 10, 4)[0])


def test_random_channel_unit_norm():
    w = random_channel(32, seed=5)
    assert w.shape == (32,)
    assert abs(np.linalg.norm(w) - 1.0) < 1e-12
    assert abs(random_channel(1, 0)[0]) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        random_channel(0)


def test_simulate_identity_and_zero_channel():
    u = np.random.default_rng(0).standard_normal(20)
    np.testing.assert_array_equal(simulate_channel(u, [1.0, 0.0, 0.0]), u)
    np.testing.assert_array_equal(simulate_channel(u, np.zeros(4)), np.zeros(20))
    with pytest.raises(ValueError):
        simulate_channel([], [1.0])


def test_simulate_matches_dot_product_oracle():
    rng = np.random.default_rng(2)
    u = rng.standard_normal(10)
    w = rng.standard_normal(3)
    expected = []
    for n in range(10):
        reg = [u[n - m] if n - m >= 0 else 0.0 for m in range(3)]
        expected.append(np.dot(reg, w))
    np.testing.assert_allclose(simulate_channel(u, w), expected, atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.floats(-100, 100, allow_nan=False), st.integers(0, 2**32 - 1))
def test_simulate_is_linear(alpha, seed):
    rng = np.random.default_rng(seed)
    u = rng.standard_normal(40)
    w = rng.standard_normal(5)
    np.testing.assert_allclose(
        simulate_channel(alpha * u, w), alpha * simulate_channel(u, w), rtol=1e-12, atol=1e-9
    )


def test_noise_variance_from_snr():
    d = np.ones(1000)
    _, var = add_noise_snr(d, 20.0, seed=0)
    assert var == pytest.approx(0.01, rel=1e-12)


def test_infinite_snr_is_noiseless():
    d = np.arange(1.0, 11.0)
    noisy, var = add_noise_snr(d, np.inf, seed=0)
    assert var == 0.0
    np.testing.assert_array_equal(noisy, d)


def test_zero_power_rejected():
    with pytest.raises(ValueError):
        add_noise_snr(np.zeros(10), 20.0)


def test_empirical_noise_variance():
    d = np.random.default_rng(0).standard_normal(100_000)
    noisy, var = add_noise_snr(d, 10.0, seed=1)
    assert np.var(noisy - d) == pytest.approx(var, rel=0.05)


def test_noise_is_zero_mean_across_seeds():
    d = np.linspace(-1, 1, 200)
    acc = np.zeros_like(d)
    for s in range(400):
        acc += add_noise_snr(d, 0.0, seed=s)[0] - d
    # per-sample sd of the mean is sqrt(var / 400)
    _, var = add_noise_snr(d, 0.0, seed=0)
    assert np.max(np.abs(acc / 400)) < 5 * np.sqrt(var / 400)


def test_scenario_length_check():
    with pytest.raises(ValueError):
        ChannelScenario(np.ones(2), np.ones(5), np.ones(5), np.ones(4), 0.1)
