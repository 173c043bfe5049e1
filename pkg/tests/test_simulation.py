"""
Synthetic multi-cell OFDM model.

Proves:
  1. channel_model grammar: iid-frequency, taps:<int>, taps:N/<int>, preset:EVA/ETU, errors
  2. scenario validation rejects unsorted, negative or mismatched powers and bad tau_d
  3. channels, symbols and blocks are bit-exact functions of (master seed, trial seed)
  4. a one-tap channel is flat across carriers
  5. channel gains have unit mean
  6. Y = sqrt(P) diag(h) S exactly when sigma2 = 0
  7. QPSK symbols have unit modulus
  8. true H P H^H moments are the carrier averages of (sum_k P_k |h_k|^2)^p; flat unit channels give (sum P)^p
  9. block energy: zero when silent and noiseless, sigma2 for noise alone, sum P + sigma2 on average
 10. scaling every power and sigma2 by a scales Y by sqrt(a)
 11. white channels are uncorrelated across adjacent carriers
"""

import numpy as np
import pytest

from CellSense.errors import InvalidConfigError
from CellSense.simulation import (ChannelModel, ChannelRealization, NetworkScenario, gen_channels, gen_symbols,
                                  synthesize, true_hph_moments)


def _scenario(**overrides) -> NetworkScenario:
    values = dict(M=3, N=64, L=128, powers=(4.0, 2.0, 1.0), sigma2=0.01, master_seed=11)
    values.update(overrides)
    return NetworkScenario(**values).validate()


# ── channel model grammar ─────────────────────────────────────────────────────

def test_channel_model_parse_forms():
    assert ChannelModel.parse("iid-frequency").tau_d(256) == 256
    assert ChannelModel.parse("taps:32").tau_d(256) == 32
    assert ChannelModel.parse("taps:N/8") == ChannelModel(kind="taps", divisor=8)
    assert ChannelModel.parse("taps:N/8").tau_d(256) == 32
    assert ChannelModel.parse("preset:EVA").tau_d(270) == 10
    assert ChannelModel.parse("preset:etu").tau_d(260) == 20


def test_channel_model_str_is_parseable():
    for text in ("iid-frequency", "taps:16", "taps:N/8", "preset:EVA"):
        assert str(ChannelModel.parse(text)) == text


@pytest.mark.parametrize("text", ["rayleigh", "taps:", "taps:many", "preset:XYZ"])
def test_channel_model_rejects_unknown(text):
    with pytest.raises(InvalidConfigError):
        ChannelModel.parse(text)


def test_scenario_accepts_channel_model_text():
    scenario = NetworkScenario(M=1, N=64, L=64, powers=(1.0,), channel_model="taps:N/8")
    assert scenario.tau_d == 8


# ── validation ───────────────────────────────────────────────────────────────

@pytest.mark.parametrize("overrides", [
    dict(powers=(1.0, 2.0, 4.0)),
    dict(powers=(4.0, 2.0, -1.0)),
    dict(powers=(4.0, 2.0)),
    dict(sigma2=-0.1),
    dict(L=0),
    dict(alphabet="bpsk"),
    dict(channel_model=ChannelModel(kind="taps", taps=65)),
])
def test_scenario_validation_errors(overrides):
    with pytest.raises(InvalidConfigError):
        _scenario(**overrides)


def test_with_powers_sorts_and_resizes():
    scenario = _scenario().with_powers([1.0, 3.0])
    assert scenario.powers == (3.0, 1.0)
    assert scenario.M == 2


# ── determinism ──────────────────────────────────────────────────────────────

def test_channels_are_reproducible():
    scenario = _scenario()
    first = gen_channels(scenario, 5)
    second = gen_channels(scenario, 5)
    other = gen_channels(scenario, 6)
    assert first.h.shape == (3, 64)
    np.testing.assert_array_equal(first.h, second.h)
    assert not np.allclose(first.h, other.h)


def test_block_is_reproducible():
    scenario = _scenario()
    np.testing.assert_array_equal(synthesize(scenario, 3).Y, synthesize(scenario, 3).Y)


def test_master_seed_changes_block():
    assert not np.allclose(synthesize(_scenario(master_seed=1), 0).Y, synthesize(_scenario(master_seed=2), 0).Y)


# ── channel statistics ───────────────────────────────────────────────────────

def test_single_tap_channel_is_flat():
    channels = gen_channels(_scenario(channel_model=ChannelModel(kind="taps", taps=1)), 0)
    np.testing.assert_allclose(channels.h, np.repeat(channels.h[:, :1], 64, axis=1))


def test_channel_gains_have_unit_mean():
    channels = gen_channels(_scenario(N=4096), 0)
    assert abs(channels.gains().mean() - 1.0) < 0.05


# ── received block ───────────────────────────────────────────────────────────

def test_noiseless_single_station_block():
    scenario = _scenario(M=1, powers=(2.0,), sigma2=0.0)
    block = synthesize(scenario, 4)
    symbols = gen_symbols(scenario, 4)
    expected = np.sqrt(2.0) * block.channels.h[0][:, None] * symbols
    np.testing.assert_allclose(block.Y, expected, rtol=1e-12, atol=1e-12)


def test_qpsk_symbols_unit_modulus():
    symbols = gen_symbols(_scenario(alphabet="qpsk"), 0)
    assert symbols.shape == (3 * 64, 128)
    np.testing.assert_allclose(np.abs(symbols), 1.0)


def test_true_hph_moments():
    scenario = _scenario()
    channels = gen_channels(scenario, 0)
    nu = true_hph_moments(channels, scenario.powers, 3)
    diagonal = np.asarray(scenario.powers) @ channels.gains()
    np.testing.assert_allclose(nu.as_array(), [np.mean(diagonal ** p) for p in (1, 2, 3)], rtol=1e-12)
    assert nu.c == 0.0
    assert nu.n_eff == 64


def test_silent_noiseless_block_is_zero():
    block = synthesize(_scenario(M=1, powers=(0.0,), sigma2=0.0), 0)
    assert not np.any(block.Y)


def test_noise_only_block_energy():
    block = synthesize(_scenario(M=1, N=256, L=256, powers=(0.0,), sigma2=1.0), 0)
    assert np.sum(np.abs(block.Y) ** 2) / (256 * 256) == pytest.approx(1.0, rel=0.02)


def test_mean_block_energy():
    scenario = _scenario(N=64, L=64, sigma2=0.1)
    energies = [np.sum(np.abs(synthesize(scenario, trial).Y) ** 2) / (64 * 64) for trial in range(50)]
    assert np.mean(energies) == pytest.approx(7.1, rel=0.05)


def test_scaling_powers_and_noise_scales_block():
    scenario = _scenario()
    scaled = _scenario(powers=(12.0, 6.0, 3.0), sigma2=0.03)
    np.testing.assert_allclose(synthesize(scaled, 2).Y, np.sqrt(3.0) * synthesize(scenario, 2).Y,
                               rtol=1e-12, atol=1e-12)


def test_white_channel_is_uncorrelated_across_carriers():
    scenario = _scenario(M=1, powers=(1.0,))
    products = [
        np.mean(channels.h[0, 1:] * channels.h[0, :-1].conj())
        for channels in (gen_channels(scenario, trial) for trial in range(200))
    ]
    assert abs(np.mean(products)) < 3e-2


def test_flat_unit_channels_give_power_sum_moments():
    channels = ChannelRealization(h=np.ones((3, 16), dtype=complex))
    np.testing.assert_allclose(true_hph_moments(channels, (4.0, 2.0, 1.0), 3).as_array(), [7.0, 49.0, 343.0])
