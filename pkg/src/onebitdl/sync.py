"""Preamble synchronization: half-symbol autocorrelation with prefix averaging.

For a candidate lag t the correlator forms

    P(t) = sum_{m=0}^{N/2-1} y[t+m] conj(y[t+m+N/2])        (half-symbol product)
    R(t) = 0.5 * sum_{m=0}^{N-1} |y[t+m]|^2                  (window energy)
    M(t) = |P(t)|^2 / R(t)^2                                 (normalized metric)
    Gamma(t) = (1/(G+1)) * sum_{m=-G}^{0} M(t+m)             (prefix-averaged)

Because the preamble repeats after N/2 samples even across its cyclic prefix,
M(t) sits on a plateau of G+1 lags; averaging over the prefix collapses that
plateau into a unique peak. All windows are evaluated with O(T) sliding-sum
recurrences. The timing estimate is the Gamma argmax (ties resolve to the
smallest lag) and the carrier offset follows from the phase of P at that lag,
unambiguous for |eps| < 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError
from .frame import SampleStream

__all__ = ["SyncMetrics", "correlate", "estimate_sto", "estimate_cfo", "compensate"]


@dataclass
class SyncMetrics:
    """Correlator output over a lag search window.

    `gamma[i]` is the averaged metric at lag `first_lag + i`; `corr` and `energy`
    hold P and R over the wider range [first_lag - G, last searched lag] needed by
    the averaging and by the CFO readout.
    """

    first_lag: int
    gamma: np.ndarray
    corr_first_lag: int
    corr: np.ndarray
    energy: np.ndarray

    def gamma_at(self, lag: int) -> float:
        return float(self.gamma[int(lag) - self.first_lag])

    def corr_at(self, lag: int) -> complex:
        return complex(self.corr[int(lag) - self.corr_first_lag])


def _sliding_sum(values: np.ndarray, width: int) -> np.ndarray:
    """Sliding window sums: out[i] = sum(values[i : i + width])."""
    cs = np.concatenate([np.zeros(1, dtype=values.dtype), np.cumsum(values)])
    return cs[width:] - cs[:-width]


def correlate(y: SampleStream, search, cfg) -> SyncMetrics:
    """Evaluate P, R and Gamma for every lag in `search` = (lo, hi), inclusive.

    Needs y on [lo - G, hi + N - 1]; a shorter stream raises StreamRangeError.
    """
    lo, hi = int(search[0]), int(search[1])
    if hi < lo:
        raise ValueError("empty search window")
    n, g = cfg.fft_size, cfg.cp_len
    half = n // 2
    lag0 = lo - g                       # first lag that feeds the averaging window
    nlag = hi - lag0 + 1
    y_ = y.take(lag0, nlag - 1 + n).ravel()

    prod = y_[: nlag - 1 + half] * np.conj(y_[half: nlag - 1 + n])
    corr = _sliding_sum(prod, half)                       # P over [lag0, hi]
    energy = 0.5 * _sliding_sum(np.abs(y_) ** 2, n)       # R over [lag0, hi]

    metric = np.zeros(nlag)
    live = energy > 0
    metric[live] = np.abs(corr[live]) ** 2 / energy[live] ** 2
    gamma = _sliding_sum(metric, g + 1) / (g + 1)         # over [lo, hi]
    return SyncMetrics(first_lag=lo, gamma=gamma,
                       corr_first_lag=lag0, corr=corr, energy=energy)


def estimate_sto(metrics: SyncMetrics) -> int:
    """Lag maximizing the averaged metric; ties resolve to the smallest lag."""
    return metrics.first_lag + int(np.argmax(metrics.gamma))


def estimate_cfo(metrics: SyncMetrics, tau_est: int) -> float:
    """Carrier offset in subcarrier spacings from the correlation phase at tau_est."""
    p = metrics.corr_at(tau_est)
    if p == 0:
        raise DegenerateInputError("correlation is identically zero at the chosen lag")
    return float(np.angle(p) / np.pi)


def compensate(y: SampleStream, tau_est: int, eps_est: float, cfg) -> SampleStream:
    """Undo the estimated offsets: r[n] = e^{+j 2 pi eps_est n / N} y[n + tau_est].

    The rotation index n is the output stream's absolute time, which keeps the
    compensation phase-consistent with the channel's own rotation reference.
    """
    origin = y.origin - int(tau_est)
    times = np.arange(origin, y.end - int(tau_est))
    rot = np.exp(2j * np.pi * eps_est * times / cfg.fft_size)
    return SampleStream(y.samples * rot[None, :], origin)
