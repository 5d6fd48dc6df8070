"""Shared numerical primitives: the unitary DFT pair, seeded stream RNG, CN sampling.

Both transforms use the symmetric 1/sqrt(N) normalization, so round trips preserve
power exactly (Parseval). The inverse transform uses the positive-exponent kernel
e^{+j 2 pi k n / N}; the forward transform uses its conjugate.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

__all__ = ["dft", "idft", "RngStream", "sample_cn"]


def dft(x, axis: int = -1) -> np.ndarray:
    """Unitary forward DFT along `axis` (negative-exponent kernel, 1/sqrt(N) scale)."""
    x = np.asarray(x)
    n = x.shape[axis]
    if n == 0:
        raise ValueError("cannot transform a length-0 axis")
    return np.fft.fft(x, axis=axis) / np.sqrt(n)


def idft(x, axis: int = -1) -> np.ndarray:
    """Unitary inverse DFT along `axis` (positive-exponent kernel, 1/sqrt(N) scale)."""
    x = np.asarray(x)
    n = x.shape[axis]
    if n == 0:
        raise ValueError("cannot transform a length-0 axis")
    return np.fft.ifft(x, axis=axis) * np.sqrt(n)


def _as_key(part) -> int:
    # SeedSequence spawn keys must be integers; string tags hash through crc32 so
    # the mapping is stable across runs, platforms and processes.
    if isinstance(part, (int, np.integer)):
        k = int(part)
        if k < 0:
            raise ValueError("stream ids must be non-negative integers")
        return k
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    raise TypeError(f"stream id must be int or str, got {type(part).__name__}")


@dataclass
class RngStream:
    """Deterministic hierarchical random stream.

    A stream is addressed by (master_seed, path). Equal addresses always yield the
    identical sample sequence, regardless of the order streams are created in or
    which process they run in, so Monte-Carlo trials can be farmed out to workers
    without changing a single draw.
    """

    master_seed: int
    path: tuple = ()

    def __post_init__(self):
        self.path = tuple(_as_key(p) for p in self.path)
        self._gen = None

    def substream(self, *ids) -> "RngStream":
        """Child stream addressed by this stream's path extended with `ids`."""
        return RngStream(self.master_seed, self.path + ids)

    @property
    def generator(self) -> np.random.Generator:
        """The stream's generator; created lazily, stateful across calls."""
        if self._gen is None:
            seq = np.random.SeedSequence(entropy=self.master_seed, spawn_key=self.path)
            self._gen = np.random.Generator(np.random.PCG64(seq))
        return self._gen


def _resolve(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError("rng must be an RngStream or numpy Generator")


def sample_cn(rng, variance: float, count) -> np.ndarray:
    """i.i.d. circularly symmetric complex Gaussians CN(0, variance).

    `count` may be an int or a shape tuple. variance == 0 returns exact zeros.
    """
    if variance < 0:
        raise ValueError("variance must be non-negative")
    shape = (count,) if isinstance(count, (int, np.integer)) else tuple(count)
    if variance == 0:
        return np.zeros(shape, dtype=complex)
    z = _resolve(rng).standard_normal(shape + (2,))
    return np.sqrt(variance / 2.0) * (z[..., 0] + 1j * z[..., 1])
