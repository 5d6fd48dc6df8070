"""Time-domain MIMO channel: i.i.d. Rayleigh taps with a uniform power profile.

Every (UE, antenna) link carries `num_taps` independent CN(0, 1/num_taps) taps, so
each link has unit average energy no matter how long the delay spread is.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import sample_cn

__all__ = ["ChannelRealization", "draw_channel", "freq_response", "freq_response_many",
           "dump_taps", "load_taps"]


@dataclass
class ChannelRealization:
    """One drawn channel; `taps[l, u, b]` is tap l from BS antenna b to UE u."""

    taps: np.ndarray  # (L, U, B) complex

    @property
    def num_taps(self) -> int:
        return self.taps.shape[0]

    @property
    def num_ues(self) -> int:
        return self.taps.shape[1]

    @property
    def num_antennas(self) -> int:
        return self.taps.shape[2]


def draw_channel(cfg, rng) -> ChannelRealization:
    l = cfg.num_taps
    taps = sample_cn(rng, 1.0 / l, (l, cfg.num_ues, cfg.num_antennas))
    return ChannelRealization(taps)


def freq_response(ch: ChannelRealization, k: int, fft_size: int) -> np.ndarray:
    """Frequency response on subcarrier k, shape (U, B)."""
    phase = np.exp(-2j * np.pi * k * np.arange(ch.num_taps) / fft_size)
    return np.tensordot(phase, ch.taps, axes=1)


def freq_response_many(ch: ChannelRealization, subcarriers, fft_size: int) -> np.ndarray:
    """Frequency response stacked over `subcarriers`, shape (K, U, B)."""
    ks = np.asarray(subcarriers)
    phase = np.exp(-2j * np.pi * np.outer(ks, np.arange(ch.num_taps)) / fft_size)
    return np.tensordot(phase, ch.taps, axes=([1], [0]))


def dump_taps(ch: ChannelRealization, path) -> None:
    """Write taps as one record per (ue, tap): B complex pairs, little-endian float64."""
    recs = ch.taps.transpose(1, 0, 2)  # (U, L, B)
    flat = np.empty(recs.shape + (2,), dtype="<f8")
    flat[..., 0] = recs.real
    flat[..., 1] = recs.imag
    with open(path, "wb") as f:
        f.write(flat.tobytes())


def load_taps(path, num_taps: int, num_ues: int, num_antennas: int) -> ChannelRealization:
    """Inverse of dump_taps; shape must be supplied, the file stores raw samples only."""
    raw = np.fromfile(path, dtype="<f8")
    expect = num_ues * num_taps * num_antennas * 2
    if raw.size != expect:
        raise ValueError(f"tap dump holds {raw.size} floats, expected {expect}")
    recs = raw.reshape(num_ues, num_taps, num_antennas, 2)
    taps = (recs[..., 0] + 1j * recs[..., 1]).transpose(1, 0, 2)
    return ChannelRealization(np.ascontiguousarray(taps))
