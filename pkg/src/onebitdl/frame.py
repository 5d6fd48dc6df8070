"""Transmit-side frame construction.

A frame is one preamble symbol, P training symbols and D data symbols, each an
N-point OFDM symbol with a cyclic prefix of G samples. Symbol i occupies absolute
sample times [i (N+G) - G, i (N+G) + N - 1]; the stream emitted by
`modulate_frame` therefore starts at origin -G, and time n = 0 is the first
useful (non-prefix) sample of the preamble.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError, StreamRangeError
from .numerics import idft
from .quantization import quantize

__all__ = ["SampleStream", "FramePlan", "random_qpsk", "build_preamble",
           "build_frame_plan", "modulate_frame", "modulate_symbols", "pad_stream",
           "add_default_guard"]

_QPSK = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / np.sqrt(2)


@dataclass
class SampleStream:
    """A matrix of samples with an absolute time origin.

    Column c holds the samples at discrete time `origin + c`. Rows are transmit
    antennas, or a single row for one UE's receive signal.
    """

    samples: np.ndarray
    origin: int

    def __post_init__(self):
        self.samples = np.atleast_2d(np.asarray(self.samples))

    @property
    def end(self) -> int:
        """One past the last valid absolute time index."""
        return self.origin + self.samples.shape[1]

    def take(self, start: int, length: int) -> np.ndarray:
        """Samples for absolute times [start, start + length); view, not a copy."""
        i = int(start) - self.origin
        if length < 0:
            raise ValueError("length must be non-negative")
        if i < 0 or i + length > self.samples.shape[1]:
            raise StreamRangeError(
                f"requested times [{start}, {start + length}) outside stream "
                f"[{self.origin}, {self.end}); extend the guard padding")
        return self.samples[:, i:i + length]


def random_qpsk(rng, shape) -> np.ndarray:
    """Gray-mapped unit-modulus QPSK: bits (b0, b1) -> ((1-2 b0) + j (1-2 b1)) / sqrt(2)."""
    gen = rng.generator if hasattr(rng, "generator") else rng
    bits = gen.integers(0, 2, size=tuple(shape) + (2,))
    return ((1 - 2 * bits[..., 0]) + 1j * (1 - 2 * bits[..., 1])) / np.sqrt(2)


@dataclass
class FramePlan:
    """Frequency-domain payload of one frame, indexed (symbol, ue, subcarrier).

    Entries are zero outside the used subcarrier set. `preamble` may be None for
    measurement frames that bypass synchronization entirely.
    """

    preamble: Optional[np.ndarray]   # (U, N) or None
    training: np.ndarray             # (P, U, N)
    data: np.ndarray                 # (D, U, N)

    @property
    def num_training(self) -> int:
        return self.training.shape[0]

    @property
    def num_data(self) -> int:
        return self.data.shape[0]

    @property
    def num_symbols(self) -> int:
        return (0 if self.preamble is None else 1) + self.num_training + self.num_data

    def all_symbols(self) -> np.ndarray:
        """(num_symbols, U, N) in transmit order: preamble, training, data."""
        parts = []
        if self.preamble is not None:
            parts.append(self.preamble[None])
        parts.extend([self.training, self.data])
        return np.concatenate(parts, axis=0)

    @property
    def training_indices(self) -> range:
        base = 0 if self.preamble is None else 1
        return range(base, base + self.num_training)

    @property
    def data_indices(self) -> range:
        base = (0 if self.preamble is None else 1) + self.num_training
        return range(base, base + self.num_data)


def build_preamble(cfg, rng) -> np.ndarray:
    """Half-repeating pilot symbol: QPSK on the even-indexed used subcarriers.

    Loading only even bins makes the time-domain symbol repeat after N/2 samples,
    a structure the sign quantizer preserves exactly. The occupied bins are
    boosted by sqrt(|S| / |S_even|) so the symbol radiates the same average power
    as a fully loaded data symbol.
    """
    ks = np.asarray(cfg.used_subcarriers, dtype=int)
    even = ks[ks % 2 == 0]
    if even.size == 0:
        raise ConfigError("the used subcarrier set contains no even-indexed bins")
    boost = np.sqrt(len(ks) / even.size)
    grid = np.zeros((cfg.num_ues, cfg.fft_size), dtype=complex)
    grid[:, even] = boost * random_qpsk(rng, (cfg.num_ues, even.size))
    return grid


def build_frame_plan(cfg, rng, include_preamble: bool = True) -> FramePlan:
    """Random frame: preamble (optional) plus unit-power QPSK training and data."""
    ks = np.asarray(cfg.used_subcarriers, dtype=int)
    u, n = cfg.num_ues, cfg.fft_size

    def filled(count):
        grid = np.zeros((count, u, n), dtype=complex)
        grid[:, :, ks] = random_qpsk(rng, (count, u, ks.size))
        return grid

    pre = build_preamble(cfg, rng) if include_preamble else None
    return FramePlan(preamble=pre,
                     training=filled(cfg.training_symbols),
                     data=filled(cfg.data_symbols))


def modulate_symbols(symbols: np.ndarray, ps, cfg, dac_mode: str) -> SampleStream:
    """Precode, transform and prefix a block of frequency-domain symbols.

    `symbols` is (M, U, N); the result is a (B, M (N+G)) stream starting at
    origin -G, quantized column-wise when dac_mode is "one_bit".
    """
    if dac_mode not in ("one_bit", "infinite"):
        raise ConfigError(f"unknown dac_mode {dac_mode!r}")
    n, g = cfg.fft_size, cfg.cp_len
    ks = ps.subcarriers
    m = symbols.shape[0]
    ant = np.einsum("kbu,muk->mbk", ps.matrices, symbols[:, :, ks])
    grid = np.zeros((m, cfg.num_antennas, n), dtype=complex)
    grid[:, :, ks] = ant
    body = idft(grid, axis=-1)
    with_cp = np.concatenate([body[:, :, n - g:], body], axis=-1)
    flat = with_cp.transpose(1, 0, 2).reshape(cfg.num_antennas, m * (n + g))
    if dac_mode == "one_bit":
        flat = quantize(flat)
    return SampleStream(flat, origin=-g)


def modulate_frame(plan: FramePlan, ps, cfg, dac_mode: str) -> SampleStream:
    """Transmit stream of a whole frame; symbol i sits at [i(N+G) - G, i(N+G) + N - 1]."""
    return modulate_symbols(plan.all_symbols(), ps, cfg, dac_mode)


def _filler(count, rows, kind, ps, cfg, rng, dac_mode):
    if kind == "zeros":
        return np.zeros((rows, count), dtype=complex)
    if kind != "random_data":
        raise ConfigError(f"unknown filler {kind!r}")
    span = cfg.fft_size + cfg.cp_len
    if count % span:
        raise ConfigError("random_data padding must be a whole number of OFDM symbols")
    ks = np.asarray(cfg.used_subcarriers, dtype=int)
    syms = np.zeros((count // span, cfg.num_ues, cfg.fft_size), dtype=complex)
    syms[:, :, ks] = random_qpsk(rng, (count // span, cfg.num_ues, ks.size))
    return modulate_symbols(syms, ps, cfg, dac_mode).samples


def pad_stream(stream: SampleStream, left: int, right: int, filler: str = "zeros", *,
               ps=None, cfg=None, rng=None, dac_mode=None) -> SampleStream:
    """Extend a stream on both sides, keeping origin arithmetic consistent.

    filler "zeros" appends silence. filler "random_data" appends whole OFDM
    symbols of precoded random QPSK (quantized when dac_mode is "one_bit"), so
    guard regions look statistically identical to payload symbols; it requires
    left/right to be multiples of N+G and needs ps/cfg/rng/dac_mode.
    """
    if left < 0 or right < 0:
        raise ValueError("padding lengths must be non-negative")
    rows = stream.samples.shape[0]
    blocks = []
    if left:
        blocks.append(_filler(left, rows, filler, ps, cfg, rng, dac_mode))
    blocks.append(stream.samples)
    if right:
        blocks.append(_filler(right, rows, filler, ps, cfg, rng, dac_mode))
    return SampleStream(np.concatenate(blocks, axis=1), stream.origin - left)


def add_default_guard(stream: SampleStream, ps, cfg, rng, dac_mode: str,
                      data_symbols: int = 1, extra_zeros: int = 0) -> SampleStream:
    """Default guard: whole random symbols adjacent on each side, silence beyond.

    Sized so timing draws up to +/- (N + G/2), plus the correlator's own reach,
    never index outside the stream; `extra_zeros` adds margin for long channels.
    """
    span = cfg.fft_size + cfg.cp_len
    z = cfg.fft_size + cfg.cp_len // 2 + extra_zeros
    padded = pad_stream(stream, data_symbols * span, data_symbols * span, "random_data",
                        ps=ps, cfg=cfg, rng=rng, dac_mode=dac_mode)
    return pad_stream(padded, z, z, "zeros")
