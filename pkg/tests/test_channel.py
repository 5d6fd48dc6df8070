"""Channel draws, frequency responses, and tap serialization."""
import numpy as np
import pytest

from onebitdl.channel import (ChannelRealization, draw_channel, dump_taps,
                              freq_response, freq_response_many, load_taps)
from onebitdl.config import SystemConfig, full_band
from onebitdl.numerics import RngStream

import statutil


def _cfg(taps=4, ues=3, antennas=8):
    return SystemConfig(num_antennas=antennas, num_ues=ues, fft_size=32,
                        cp_len=max(8, taps + taps % 2), num_taps=taps,
                        used_subcarriers=full_band(32))


def test_draw_shapes_and_dims():
    ch = draw_channel(_cfg(), RngStream(1, ()))
    assert ch.taps.shape == (4, 3, 8)
    assert (ch.num_taps, ch.num_ues, ch.num_antennas) == (4, 3, 8)


def test_uniform_power_delay_profile():
    # Per-tap variance 1/L so the per-coefficient channel energy sums to one.
    cfg = _cfg(taps=5, ues=2, antennas=40)
    draws = [draw_channel(cfg, RngStream(s, ("c",))).taps for s in range(50)]
    taps = np.stack(draws)                      # (50, L, U, B)
    count = taps[:, 0].size
    z = statutil.family_z(num_tests=2 * cfg.num_taps)
    for ell in range(cfg.num_taps):
        power = np.mean(np.abs(taps[:, ell]) ** 2)
        # |h|^2 is exponential with mean 1/L -> std 1/L per sample
        assert statutil.mean_within(power, 1 / 5, 1 / 5, count, z), \
            f"tap {ell} power {power}"
        mean = np.mean(taps[:, ell])
        assert abs(mean) < 5 * np.sqrt(1 / 5 / count)


def test_total_energy_sums_to_one():
    cfg = _cfg(taps=10, ues=4, antennas=32)
    ch = draw_channel(cfg, RngStream(3, ()))
    energy = np.sum(np.abs(ch.taps) ** 2) / (cfg.num_ues * cfg.num_antennas)
    assert 0.8 < energy < 1.2


def test_freq_response_matches_direct_dft():
    ch = draw_channel(_cfg(), RngStream(5, ()))
    n = 32
    for k in (0, 1, 7, 31):
        got = freq_response(ch, k, n)
        ells = np.arange(ch.num_taps)
        direct = np.tensordot(np.exp(-2j * np.pi * k * ells / n), ch.taps, axes=(0, 0))
        np.testing.assert_allclose(got, direct, atol=1e-12)
        assert got.shape == (3, 8)


def test_freq_response_many_stacks():
    ch = draw_channel(_cfg(), RngStream(6, ()))
    ks = np.array([0, 3, 9])
    many = freq_response_many(ch, ks, 32)
    assert many.shape == (3, 3, 8)
    for i, k in enumerate(ks):
        np.testing.assert_allclose(many[i], freq_response(ch, int(k), 32), atol=1e-12)


def test_flat_channel_response_is_tap():
    ch = draw_channel(_cfg(taps=1), RngStream(7, ()))
    np.testing.assert_allclose(freq_response(ch, 11, 32), ch.taps[0], atol=1e-13)


def test_dump_load_roundtrip(tmp_path):
    ch = draw_channel(_cfg(), RngStream(8, ()))
    path = tmp_path / "taps.bin"
    dump_taps(ch, path)
    back = load_taps(path, num_taps=4, num_ues=3, num_antennas=8)
    np.testing.assert_array_equal(back.taps, ch.taps)


def test_load_rejects_wrong_size(tmp_path):
    ch = draw_channel(_cfg(), RngStream(9, ()))
    path = tmp_path / "taps.bin"
    dump_taps(ch, path)
    with pytest.raises(ValueError):
        load_taps(path, num_taps=5, num_ues=3, num_antennas=8)
