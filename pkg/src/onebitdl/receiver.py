"""Per-UE demodulation: DFT windows, gain estimation, equalization, bit decisions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .frame import SampleStream
from .numerics import dft

__all__ = ["SymbolGrid", "EffectiveGain", "BerStats", "extract_windows",
           "estimate_gain", "equalize", "demap_and_count", "measure_sindr"]


@dataclass
class SymbolGrid:
    """Demodulated (or reference) values on the used subcarriers.

    `values[m, i]` belongs to frame symbol `symbol_indices[m]`, subcarrier
    `subcarriers[i]`.
    """

    symbol_indices: np.ndarray   # (M,)
    subcarriers: np.ndarray      # (K,)
    values: np.ndarray           # (M, K) complex

    def select(self, indices) -> "SymbolGrid":
        """Rows for the given frame symbol indices, in the given order."""
        pos = {int(s): i for i, s in enumerate(self.symbol_indices)}
        rows = [pos[int(i)] for i in indices]
        return SymbolGrid(np.asarray(list(indices), dtype=int), self.subcarriers,
                          self.values[rows])


@dataclass
class EffectiveGain:
    """Estimated per-subcarrier complex gain of the end-to-end link for one UE."""

    subcarriers: np.ndarray
    alpha: np.ndarray            # (K,) complex

    @property
    def erased(self) -> np.ndarray:
        """Bins with exactly zero gain; they cannot be equalized."""
        return self.alpha == 0


def extract_windows(r: SampleStream, cfg, symbol_indices) -> SymbolGrid:
    """DFT windows with the half-prefix start shift and its matching phase tilt.

    Window i spans absolute times [i (N+G) - G/2, i (N+G) - G/2 + N); after the
    transform, bin k is rotated by e^{+j pi G k / N}, so an aligned stream
    demodulates with no per-bin phase slope. Centering the window in the prefix
    leaves G/2 samples of timing slack on either side. Only used subcarriers are
    kept.
    """
    n, g = cfg.fft_size, cfg.cp_len
    ks = np.asarray(cfg.used_subcarriers, dtype=int)
    idx = np.asarray(list(symbol_indices), dtype=int)
    span = n + g
    wins = np.stack([r.take(int(i) * span - g // 2, n)[0] for i in idx])
    bins = dft(wins, axis=-1) * np.exp(1j * np.pi * g * np.arange(n) / n)
    return SymbolGrid(idx, ks, bins[:, ks])


def estimate_gain(grid: SymbolGrid, refs: np.ndarray) -> EffectiveGain:
    """Training-averaged gain: alpha[k] = (1/P) sum_i r_i[k] conj(s_i[k]).

    `refs` holds the transmitted training values aligned with `grid` rows; for
    unit-modulus training this is the least-squares estimate. A zero reference on
    a used bin means that bin was never trained, which is a configuration error.
    """
    refs = np.asarray(refs)
    if refs.shape != grid.values.shape:
        raise ConfigError(f"training references {refs.shape} do not match grid {grid.values.shape}")
    if np.any(refs == 0):
        raise ConfigError("training symbols leave used subcarriers empty")
    alpha = np.mean(grid.values * np.conj(refs), axis=0)
    return EffectiveGain(grid.subcarriers, alpha)


def equalize(grid: SymbolGrid, gain: EffectiveGain) -> SymbolGrid:
    """Single-tap equalizer s_hat = conj(alpha) r / |alpha|^2; erased bins output 0."""
    a = gain.alpha
    mag2 = np.abs(a) ** 2
    live = mag2 > 0
    vals = np.zeros_like(grid.values)
    vals[:, live] = grid.values[:, live] * np.conj(a[live]) / mag2[live]
    return SymbolGrid(grid.symbol_indices, grid.subcarriers, vals)


@dataclass
class BerStats:
    """Bit error tally; erased bins contribute fractional (expected) errors."""

    bit_errors: float
    total_bits: int

    @property
    def ber(self) -> float:
        return self.bit_errors / self.total_bits if self.total_bits else 0.0

    def __add__(self, other: "BerStats") -> "BerStats":
        return BerStats(self.bit_errors + other.bit_errors,
                        self.total_bits + other.total_bits)


def demap_and_count(est: SymbolGrid, truth: np.ndarray, erased=None) -> BerStats:
    """Hard QPSK decisions against the transmitted values, Gray mapping per rail.

    Each rail carries one bit (negative rail = bit 1). Bins flagged in `erased`
    count half a bit error per bit, the expected loss of guessing.
    """
    truth = np.asarray(truth)
    if truth.shape != est.values.shape:
        raise ConfigError(f"truth {truth.shape} does not match grid {est.values.shape}")
    m, k = est.values.shape
    live = np.ones(k, dtype=bool) if erased is None else ~np.asarray(erased)
    ev, tv = est.values[:, live], truth[:, live]
    errors = float(np.count_nonzero((ev.real < 0) != (tv.real < 0))
                   + np.count_nonzero((ev.imag < 0) != (tv.imag < 0)))
    errors += 0.5 * 2 * m * int(np.count_nonzero(~live))
    return BerStats(bit_errors=errors, total_bits=2 * m * k)


def measure_sindr(grid: SymbolGrid, refs: np.ndarray, coeff) -> tuple:
    """Genie-aided link quality: desired power and residual power of a grid.

    `coeff` is the known complex gain per entry (scalar or (M, K) array); the
    return is (|coeff|^2 E|s|^2, E|r - coeff s|^2) averaged over the grid, whose
    ratio is the measured SINDR.
    """
    refs = np.asarray(refs)
    err = grid.values - coeff * refs
    sig = float(np.mean((np.abs(coeff) ** 2) * np.abs(refs) ** 2))
    return sig, float(np.mean(np.abs(err) ** 2))
