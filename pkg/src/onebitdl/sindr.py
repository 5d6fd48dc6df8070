"""Closed-form link quality under residual offsets, flat-channel case.

With a single-tap channel, full subcarrier load, residual timing offset dtau
(|dtau| <= N + G/2) and residual carrier offset deps (|deps| < 1), the
demodulated bin k of window i is

    r[k,i] = beta e^{j phi(k,i)} h^T A p_u s_u[k,i] + isi + ici + mui + dist + noise

where A, C_e come from the Gaussian linearization of the 1-bit front end
(identity / zero for an unquantized chain). Of the effective channel power
|h^T A p_u|^2, the desired term keeps |beta|^2, timing leakage moves psi/N into
inter-symbol interference, and the remainder 1 - |beta|^2 - psi/N appears as
inter-carrier interference; multi-user interference, quantization distortion
h^T C_e h^* and noise N0 add independently.

  psi(dtau): samples of the DFT window taken from a neighboring symbol,
             0 inside [-G/2, G/2], growing linearly outside.
  beta:      sin(pi deps (N - psi) / N) / (N sin(pi deps / N)), -> (N - psi)/N
             as deps -> 0.
  phi(k,i):  2 pi (dtau k + deps (N+G) i) / N
             - pi deps psi sign(dtau - G/2) / N + pi deps (N - G - 1) / N,
             with sign(0) := +1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AnalysisDomainError
from .precoding import PrecoderSet

__all__ = ["window_leak", "coherent_gain", "bin_phase", "SindrReport", "sindr"]


def window_leak(dtau: int, cp_len: int) -> int:
    """Number of window samples that fall in a neighboring symbol (psi)."""
    half = cp_len // 2
    d = int(dtau)
    if d < -half:
        return -d - half
    if d > half:
        return d - half
    return 0


def coherent_gain(dtau: int, deps: float, fft_size: int, cp_len: int) -> float:
    """Amplitude factor of the desired term (beta); 1 only at dtau = deps = 0."""
    n = fft_size
    leak = window_leak(dtau, cp_len)
    if deps == 0:
        return (n - leak) / n
    return float(np.sin(np.pi * deps * (n - leak) / n) / (n * np.sin(np.pi * deps / n)))


def bin_phase(dtau: int, deps: float, k: int, sym: int, fft_size: int, cp_len: int) -> float:
    """Deterministic phase of the desired term on bin k of window `sym` (phi)."""
    n, g = fft_size, cp_len
    leak = window_leak(dtau, g)
    side = 1.0 if dtau - g // 2 >= 0 else -1.0
    return (2 * np.pi * (dtau * k + deps * (n + g) * sym) / n
            - np.pi * deps * leak * side / n
            + np.pi * deps * (n - g - 1) / n)


@dataclass
class SindrReport:
    """Power budget of one UE's demodulated bin under residual offsets.

    signal_power + isi_power + ici_power always equals the effective channel
    power |h^T A p_u|^2; the ratio of signal to everything else is the SINDR.
    """

    window_leak: int
    coherent_gain: float
    signal_power: float
    isi_power: float
    ici_power: float
    mui_power: float
    distortion_power: float
    noise_power: float
    _dtau: int = 0
    _deps: float = 0.0
    _fft_size: int = 0
    _cp_len: int = 0

    @property
    def sindr(self) -> float:
        denom = (self.isi_power + self.ici_power + self.mui_power
                 + self.distortion_power + self.noise_power)
        return self.signal_power / denom

    @property
    def sindr_db(self) -> float:
        return 10.0 * np.log10(self.sindr)

    def phase(self, k: int, sym: int) -> float:
        """Desired-term phase phi on bin k of window `sym` for these residuals."""
        return bin_phase(self._dtau, self._deps, k, sym, self._fft_size, self._cp_len)


def sindr(h, bm, ps: PrecoderSet, u: int, dtau: int, deps: float,
          noise_power: float, cfg) -> SindrReport:
    """Closed-form SINDR for UE u; `bm` is the front-end linearization, or None
    for an unquantized (infinite-resolution) chain.

    Validity: flat precoder (single-tap channel), fully loaded subcarriers,
    |dtau| <= N + G/2, |deps| < 1. Outside that, AnalysisDomainError.
    """
    n, g = cfg.fft_size, cfg.cp_len
    if len(cfg.used_subcarriers) != n:
        raise AnalysisDomainError("closed form requires a fully loaded subcarrier set")
    if abs(int(dtau)) > n + g // 2:
        raise AnalysisDomainError(f"|dtau| must be <= N + G/2 = {n + g // 2}")
    if abs(deps) >= 1:
        raise AnalysisDomainError("|deps| must be < 1")
    if not ps.is_flat:
        raise AnalysisDomainError("closed form requires a frequency-flat precoder")

    h = np.asarray(h)
    p = ps.matrices[0]
    if bm is None:
        eff = h @ p                                   # (U,) entries h^T p_v
        dist = 0.0
    else:
        eff = (h * np.diag(bm.a)) @ p                 # h^T A p_v, A diagonal
        dist = float(np.real(h @ bm.c_e @ np.conj(h)))

    own = float(np.abs(eff[u]) ** 2)
    leak = window_leak(dtau, g)
    gain = coherent_gain(dtau, deps, n, g)
    mui = float(np.sum(np.abs(eff) ** 2) - own)
    return SindrReport(
        window_leak=leak,
        coherent_gain=gain,
        signal_power=gain * gain * own,
        isi_power=leak / n * own,
        ici_power=max((1.0 - gain * gain - leak / n) * own, 0.0),
        mui_power=mui,
        distortion_power=dist,
        noise_power=float(noise_power),
        _dtau=int(dtau), _deps=float(deps), _fft_size=n, _cp_len=g,
    )
