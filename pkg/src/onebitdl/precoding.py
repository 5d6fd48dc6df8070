"""Per-subcarrier zero-forcing precoding with one global power normalization."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, freq_response_many
from .errors import SingularChannelError

__all__ = ["PrecoderSet", "zf_precode", "flat_covariance"]


@dataclass
class PrecoderSet:
    """Precoding matrices per used subcarrier.

    `matrices[i]` is the (B, U) precoder for subcarrier `subcarriers[i]`; column u
    maps UE u's symbol onto the array. `norm_constant` is the single positive scale
    applied to every subcarrier so the set radiates unit average power:
    (1/N) * sum_{k in S} ||matrix_k||_F^2 == 1.
    """

    subcarriers: np.ndarray   # (K,) int, ascending
    matrices: np.ndarray      # (K, B, U) complex
    norm_constant: float

    def matrix_for(self, k: int) -> np.ndarray:
        idx = np.searchsorted(self.subcarriers, k)
        if idx >= len(self.subcarriers) or self.subcarriers[idx] != k:
            raise KeyError(f"subcarrier {k} is not in the precoded set")
        return self.matrices[idx]

    @property
    def is_flat(self) -> bool:
        """True when every subcarrier shares one matrix (single-tap channels)."""
        m = self.matrices
        scale = float(np.max(np.abs(m[0]))) or 1.0
        return bool(np.max(np.abs(m - m[0])) <= 1e-12 * scale)


def zf_precode(ch: ChannelRealization, cfg) -> PrecoderSet:
    """Zero-forcing precoder H^H (H H^H)^{-1} per used subcarrier, globally scaled.

    Raises SingularChannelError naming the first offending subcarrier when the
    channel is rank-deficient there.
    """
    ks = np.asarray(cfg.used_subcarriers, dtype=int)
    h = freq_response_many(ch, ks, cfg.fft_size)          # (K, U, B)
    gram = h @ h.conj().transpose(0, 2, 1)                # (K, U, U)
    # LAPACK only trips on an exactly-zero pivot, which rounding can mask, so
    # rank deficiency is detected by eigenvalue spread instead.
    lam = np.linalg.eigvalsh(gram)                        # (K, U), ascending
    bad = lam[:, 0] <= lam[:, -1] * 1e-10
    if np.any(bad):
        raise SingularChannelError(ks[int(np.argmax(bad))])
    sol = np.linalg.solve(gram.transpose(0, 2, 1), h.conj())   # (K, U, B)
    raw = sol.transpose(0, 2, 1)                          # (K, B, U) = H^H (H H^H)^{-1}
    energy = float(np.sum(np.abs(raw) ** 2))
    if not np.isfinite(energy) or energy == 0:
        raise SingularChannelError(ks[0])
    norm = float(np.sqrt(cfg.fft_size / energy))
    return PrecoderSet(ks, norm * raw, norm)


def flat_covariance(ps: PrecoderSet) -> np.ndarray:
    """Per-sample transmit covariance sum_u p_u p_u^H of a frequency-flat set.

    With the global normalization its trace is exactly 1 (unit average transmit
    power before quantization). Rejects non-flat sets.
    """
    if not ps.is_flat:
        raise ValueError("transmit covariance is only defined for a frequency-flat precoder")
    p = ps.matrices[0]
    return p @ p.conj().T
