"""The air interface: per-UE delay, carrier offset, multipath and noise.

The receive signal is evaluated sample-exactly,

    y_u[n] = e^{-j 2 pi eps_u n / N} sum_l h_u[l]^T x[n - l - tau_u] + w_u[n],

with n the absolute stream time, tau_u an integer sample offset, eps_u the
carrier offset normalized to the subcarrier spacing, and w_u ~ CN(0, noise_power).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .frame import SampleStream
from .numerics import RngStream, sample_cn

__all__ = ["OffsetState", "draw_offsets", "propagate"]


@dataclass
class OffsetState:
    """True timing/frequency offsets for one UE, plus estimates once available.

    Residuals are expressed as seen by the compensated stream: a late timing
    estimate (tau_est > tau) advances the demodulation windows into the next
    symbol, and the leftover rotation turns at (eps_est - eps) cycles per N
    samples.
    """

    tau: int
    eps: float
    tau_est: Optional[int] = None
    eps_est: Optional[float] = None

    @property
    def residual_tau(self) -> int:
        return self.tau_est - self.tau

    @property
    def residual_eps(self) -> float:
        return self.eps_est - self.eps


def draw_offsets(cfg, rng) -> list:
    """One offset draw per UE: integer tau uniform on [-(N + G/2), N + G/2],
    eps uniform on the open interval (-1, 1)."""
    gen = rng.generator if isinstance(rng, RngStream) else rng
    lim = cfg.fft_size + cfg.cp_len // 2
    taus = gen.integers(-lim, lim + 1, size=cfg.num_ues)
    eps = gen.uniform(-1.0, 1.0, size=cfg.num_ues)
    while np.any(np.abs(eps) >= 1.0):  # the endpoint has measure zero; be exact anyway
        redo = np.abs(eps) >= 1.0
        eps[redo] = gen.uniform(-1.0, 1.0, size=int(redo.sum()))
    return [OffsetState(int(t), float(e)) for t, e in zip(taus, eps)]


def propagate(tx: SampleStream, ch, offsets, noise_power: float, cfg, rng,
              out_start: int, out_len: int) -> list:
    """Evaluate each UE's receive signal on absolute times [out_start, out_start + out_len).

    Returns one single-row SampleStream per UE. Noise is drawn per UE from
    `rng.substream("awgn", u)`, so passing streams with equal addresses pairs the
    noise across runs (e.g. across DAC modes). Any tap lookup outside the transmit
    stream raises StreamRangeError: the guard padding is too small.
    """
    times = np.arange(out_start, out_start + out_len)
    outs = []
    for u, off in enumerate(offsets):
        acc = np.zeros(out_len, dtype=complex)
        for l in range(ch.num_taps):
            seg = tx.take(out_start - l - off.tau, out_len)
            acc += ch.taps[l, u] @ seg
        acc *= np.exp(-2j * np.pi * off.eps * times / cfg.fft_size)
        if noise_power > 0:
            acc += sample_cn(rng.substream("awgn", u), noise_power, out_len)
        outs.append(SampleStream(acc, out_start))
    return outs
