"""Demodulation windows, gain estimation, equalization, and bit decisions."""
import numpy as np
import pytest

from onebitdl.config import SystemConfig, centered_band, full_band
from onebitdl.errors import ConfigError
from onebitdl.frame import SampleStream
from onebitdl.numerics import RngStream, idft, sample_cn
from onebitdl.receiver import (BerStats, EffectiveGain, SymbolGrid, demap_and_count,
                               equalize, estimate_gain, extract_windows, measure_sindr)


def _cfg(**kw):
    base = dict(num_antennas=4, num_ues=2, fft_size=16, cp_len=4, num_taps=1,
                used_subcarriers=full_band(16))
    base.update(kw)
    return SystemConfig(**base)


def _grid_stream(cfg, grids, rng):
    """Synthesize an aligned stream whose window DFTs should equal `grids`."""
    n, g = cfg.fft_size, cfg.cp_len
    m = grids.shape[0]
    body = idft(grids, axis=-1)
    with_cp = np.concatenate([body[:, n - g:], body], axis=-1)
    return SampleStream(with_cp.reshape(1, m * (n + g)), -g)


def test_window_placement_and_tilt():
    # An aligned cyclic-prefixed stream demodulates back to its frequency grid:
    # the half-prefix window shift and the per-bin tilt cancel exactly.
    cfg = _cfg()
    rng = RngStream(1, ())
    grids = sample_cn(rng, 1.0, (3, cfg.fft_size))
    r = _grid_stream(cfg, grids, rng)
    out = extract_windows(r, cfg, range(3))
    np.testing.assert_array_equal(out.symbol_indices, [0, 1, 2])
    np.testing.assert_array_equal(out.subcarriers, np.asarray(cfg.used_subcarriers))
    np.testing.assert_allclose(out.values, grids, atol=1e-12)


def test_windows_keep_only_used_subcarriers():
    cfg = _cfg(used_subcarriers=centered_band(16, 8))
    grids = sample_cn(RngStream(2, ()), 1.0, (2, cfg.fft_size))
    r = _grid_stream(cfg, grids, RngStream(3, ()))
    out = extract_windows(r, cfg, [0, 1])
    ks = np.asarray(cfg.used_subcarriers)
    assert out.values.shape == (2, ks.size)
    np.testing.assert_allclose(out.values, grids[:, ks], atol=1e-12)


def test_window_shift_tolerates_half_prefix():
    # A stream early by G/2 still demodulates to a pure per-bin phase slope
    # (no inter-symbol leakage), which is what the slack is for.
    cfg = _cfg()
    grids = sample_cn(RngStream(4, ()), 1.0, (3, cfg.fft_size))
    r = _grid_stream(cfg, grids, RngStream(5, ()))
    shifted = SampleStream(r.samples, r.origin - cfg.cp_len // 2)
    out = extract_windows(shifted, cfg, [1])
    k = np.arange(cfg.fft_size)
    slope = np.exp(2j * np.pi * k * (cfg.cp_len // 2) / cfg.fft_size)
    np.testing.assert_allclose(out.values[0], grids[1] * slope, atol=1e-12)


def test_grid_select_orders_rows():
    grid = SymbolGrid(np.array([2, 5, 7]), np.arange(4),
                      np.arange(12, dtype=complex).reshape(3, 4))
    picked = grid.select([7, 2])
    np.testing.assert_array_equal(picked.symbol_indices, [7, 2])
    np.testing.assert_array_equal(picked.values, grid.values[[2, 0]])


def test_gain_estimate_is_exact_for_noiseless_grid():
    rng = RngStream(6, ())
    alpha = sample_cn(rng, 1.0, (8,))
    refs = np.exp(1j * 0.5 * np.arange(24).reshape(3, 8))   # unit modulus
    grid = SymbolGrid(np.arange(3), np.arange(8), alpha[None, :] * refs)
    est = estimate_gain(grid, refs)
    np.testing.assert_allclose(est.alpha, alpha, atol=1e-12)
    assert not est.erased.any()


def test_gain_estimate_averages_noise():
    rng = RngStream(7, ())
    refs = np.ones((400, 4), dtype=complex)
    noise = sample_cn(rng, 0.25, (400, 4))
    grid = SymbolGrid(np.arange(400), np.arange(4), 2.0 * refs + noise)
    est = estimate_gain(grid, refs)
    np.testing.assert_allclose(est.alpha, 2.0, atol=0.2)


def test_gain_estimate_rejects_zero_reference():
    refs = np.ones((2, 4), dtype=complex)
    refs[1, 2] = 0
    grid = SymbolGrid(np.arange(2), np.arange(4), np.ones((2, 4), dtype=complex))
    with pytest.raises(ConfigError, match="training symbols leave used subcarriers empty"):
        estimate_gain(grid, refs)
    with pytest.raises(ConfigError, match="do not match"):
        estimate_gain(grid, np.ones((3, 4), dtype=complex))


def test_equalizer_inverts_live_bins_and_zeroes_erased():
    alpha = np.array([2.0, 1j, 0.0, -0.5 + 0.5j])
    gain = EffectiveGain(np.arange(4), alpha)
    np.testing.assert_array_equal(gain.erased, [False, False, True, False])
    vals = sample_cn(RngStream(8, ()), 1.0, (5, 4))
    grid = SymbolGrid(np.arange(5), np.arange(4), vals.copy())
    out = equalize(grid, gain)
    np.testing.assert_allclose(out.values[:, [0, 1, 3]],
                               vals[:, [0, 1, 3]] / alpha[None, [0, 1, 3]], atol=1e-12)
    assert np.all(out.values[:, 2] == 0)


def test_demap_counts_rail_flips():
    truth = np.array([[1 + 1j, -1 + 1j, 1 - 1j]]) / np.sqrt(2)
    est = np.array([[1 + 1j, 1 + 1j, -1 + 1j]]) / np.sqrt(2)
    # bin 0 clean, bin 1 one real-rail flip, bin 2 both rails flipped
    stats = demap_and_count(SymbolGrid(np.arange(1), np.arange(3), est), truth)
    assert stats.total_bits == 6
    assert stats.bit_errors == 3.0
    np.testing.assert_allclose(stats.ber, 0.5)


def test_demap_charges_half_bit_per_erased_bit():
    truth = np.ones((4, 3), dtype=complex)
    est = truth.copy()
    erased = np.array([False, True, False])
    stats = demap_and_count(SymbolGrid(np.arange(4), np.arange(3), est), truth, erased)
    # erased column: 2 bits x 4 symbols at half an error each
    assert stats.bit_errors == 4.0
    assert stats.total_bits == 24
    with pytest.raises(ConfigError, match="does not match"):
        demap_and_count(SymbolGrid(np.arange(4), np.arange(3), est), truth[:2])


def test_ber_stats_accumulate():
    total = BerStats(1.0, 8) + BerStats(2.5, 16)
    assert total.bit_errors == 3.5 and total.total_bits == 24
    assert BerStats(0.0, 0).ber == 0.0


def test_sindr_measurement_algebra():
    rng = RngStream(9, ())
    refs = sample_cn(rng, 1.0, (6, 5))
    coeff = 1.5 - 0.5j
    resid = sample_cn(rng, 0.09, (6, 5))
    grid = SymbolGrid(np.arange(6), np.arange(5), coeff * refs + resid)
    sig, err = measure_sindr(grid, refs, coeff)
    np.testing.assert_allclose(sig, np.mean(np.abs(coeff * refs) ** 2), atol=1e-12)
    np.testing.assert_allclose(err, np.mean(np.abs(resid) ** 2), atol=1e-12)
    # per-entry coefficient array follows the same contract
    carr = np.full((6, 5), coeff)
    sig2, err2 = measure_sindr(grid, refs, carr)
    np.testing.assert_allclose((sig2, err2), (sig, err), atol=1e-12)
