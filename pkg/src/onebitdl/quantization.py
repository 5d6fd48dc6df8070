"""1-bit DAC front end and its Gaussian linearization.

The per-antenna converter keeps only the sign of each rail and rescales so the
transmitted vector always has unit norm:

    Q(x) = sqrt(1 / (2 B)) * (sign(Re x) + j sign(Im x)),   sign(0) := +1.

For zero-mean circularly symmetric Gaussian input with covariance C_x the output
decomposes as Q(x) = A x + e with a diagonal gain A = sqrt(2 / (pi B)) D^{-1/2}
(D = diag of C_x) and an error e that is uncorrelated with x. The error
covariance follows the arcsine law applied element-wise to the normalized real
and imaginary correlation parts.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError

__all__ = ["quantize", "bussgang_gain", "error_covariance", "BussgangModel"]

_CLAMP_SLACK = 1e-9


def _sign(v: np.ndarray) -> np.ndarray:
    # sign(0) maps to +1 so the output never leaves the DAC alphabet
    return np.where(v >= 0, 1.0, -1.0)


def quantize(x) -> np.ndarray:
    """Apply the sign quantizer column-wise; rows are antennas.

    Accepts a (B,) vector or a (B, T) sample block. Every output column has unit
    norm by construction, independent of the input scale.
    """
    x = np.asarray(x)
    b = x.shape[0]
    if b == 0:
        raise ValueError("need at least one antenna row")
    return np.sqrt(1.0 / (2 * b)) * (_sign(x.real) + 1j * _sign(x.imag))


def _checked_diag(c_x: np.ndarray) -> np.ndarray:
    c_x = np.asarray(c_x)
    if c_x.ndim != 2 or c_x.shape[0] != c_x.shape[1]:
        raise ValueError("covariance must be a square matrix")
    d = np.diag(c_x).real
    if np.any(d <= 0):
        raise DegenerateInputError("covariance has a non-positive diagonal entry")
    return d


def bussgang_gain(c_x) -> np.ndarray:
    """Diagonal linear gain of the quantizer for CN(0, C_x) input."""
    d = _checked_diag(c_x)
    b = len(d)
    return np.diag(np.sqrt(2.0 / (np.pi * b)) / np.sqrt(d))


def _unit_correlation(part: np.ndarray, scale: np.ndarray, label: str) -> np.ndarray:
    rho = part * np.outer(scale, scale)
    worst = float(np.max(np.abs(rho)))
    if worst > 1.0 + _CLAMP_SLACK:
        raise DegenerateInputError(
            f"normalized {label} correlation magnitude {worst} exceeds 1 beyond numerical slack")
    return np.clip(rho, -1.0, 1.0)


def error_covariance(c_x) -> np.ndarray:
    """Covariance of the quantization error e = Q(x) - A x (arcsine law)."""
    c_x = np.asarray(c_x, dtype=complex)
    d = _checked_diag(c_x)
    b = len(d)
    scale = 1.0 / np.sqrt(d)
    rho_re = _unit_correlation(c_x.real, scale, "real")
    rho_im = _unit_correlation(c_x.imag, scale, "imaginary")
    # The self-correlation is (1, 0) by definition; normalization round-off there
    # would be amplified by the arcsine's unbounded slope at the interval ends.
    np.fill_diagonal(rho_re, 1.0)
    np.fill_diagonal(rho_im, 0.0)
    a = bussgang_gain(c_x)
    lin = a @ c_x @ a
    return (2.0 / (np.pi * b)) * (np.arcsin(rho_re) + 1j * np.arcsin(rho_im)) - lin


@dataclass
class BussgangModel:
    """Frozen linearization Q(x) = A x + e of the 1-bit front end for one C_x.

    diag(A C_x A + C_e) equals 1/B exactly: each antenna radiates 1/B on average
    whatever the input covariance, because the quantizer renormalizes.
    """

    c_x: np.ndarray   # input covariance (B, B)
    d_x: np.ndarray   # its diagonal, real (B,)
    a: np.ndarray     # diagonal linear gain (B, B)
    c_e: np.ndarray   # error covariance (B, B)

    @classmethod
    def from_covariance(cls, c_x) -> "BussgangModel":
        c_x = np.asarray(c_x, dtype=complex)
        return cls(c_x=c_x, d_x=_checked_diag(c_x),
                   a=bussgang_gain(c_x), c_e=error_covariance(c_x))
