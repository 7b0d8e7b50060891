"""Link-level quantities for a coefficient vector on one channel draw.

All formulas exploit the diagonal structure of the link (the IRS applies
one complex coefficient per element), so everything is O(N) elementwise;
no dense N x N matrix is ever formed.

Each function accepts either a designed ``Beamformer`` or a raw complex
coefficient vector p (in which case the scale is taken as ||p||).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .system import ChannelRealization, SystemParams

__all__ = [
    "LinkMetrics",
    "reflected_power",
    "receive_power",
    "snr",
    "rate",
    "asnr_value",
    "link_metrics",
]


def _coefficients(bf_or_p) -> np.ndarray:
    p = getattr(bf_or_p, "p", None)
    if p is None:
        p = bf_or_p
    return np.asarray(p, dtype=np.complex128)


@dataclass(frozen=True)
class LinkMetrics:
    """Bundle of the per-realization link quantities (linear units)."""

    snr: float
    rate_bits: float
    reflected_power: float
    receive_power: float


def reflected_power(bf_or_p, ch: ChannelRealization, params: SystemParams) -> float:
    """Total power re-radiated by the IRS (watts):
    P_S sum|p(n) g(n)|^2 + sigma_I^2 sum|p(n)|^2."""
    p = _coefficients(bf_or_p)
    return float(
        params.p_s * np.sum(np.abs(p * ch.g) ** 2)
        + params.sigma_i_sq * np.sum(np.abs(p) ** 2)
    )


def _reflected_sum(p: np.ndarray, ch: ChannelRealization) -> complex:
    # f^H G p = sum f(n)* g(n) p(n)
    return complex(np.sum(np.conj(ch.f) * ch.g * p))


def _noise_power(p: np.ndarray, ch: ChannelRealization, params: SystemParams) -> float:
    # sigma_I^2 p^H F F^H p + sigma_u^2
    return float(
        params.sigma_i_sq * np.sum(np.abs(ch.f * p) ** 2) + params.sigma_u_sq
    )


def receive_power(bf_or_p, ch: ChannelRealization, params: SystemParams) -> float:
    """Total power at the user (watts): signal through both paths plus
    forwarded amplification noise plus receiver noise."""
    p = _coefficients(bf_or_p)
    signal = abs(ch.h.conjugate() + _reflected_sum(p, ch)) ** 2
    return params.p_s * signal + _noise_power(p, ch, params)


def snr(bf_or_p, ch: ChannelRealization, params: SystemParams) -> float:
    """P_S |h* + f^H G p|^2 / (sigma_I^2 p^H F F^H p + sigma_u^2)."""
    p = _coefficients(bf_or_p)
    den = _noise_power(p, ch, params)
    if den == 0.0:
        raise ZeroDivisionError("total noise power is zero")
    num = params.p_s * abs(ch.h.conjugate() + _reflected_sum(p, ch)) ** 2
    return num / den


def rate(snr_value: float) -> float:
    """Achievable rate log2(1 + snr) in bits/s/Hz."""
    if snr_value < 0.0:
        raise ValueError("snr must be nonnegative")
    return math.log2(1.0 + snr_value)


def asnr_value(bf_or_p, ch: ChannelRealization, params: SystemParams) -> float:
    """SNR with the direct-path power term |h|^2 dropped from the numerator.

    Evaluated as P_S (|f^H G p|^2 + 2 Re(h f^H G p)) / (p^H D p) with the
    whitener D(n) = sigma_I^2 |f(n)|^2 + sigma_u^2 / lam^2; for a vector
    with ||p|| = lam the denominator equals the SNR denominator, so
    snr - asnr_value = P_S |h|^2 / denominator.
    """
    p = _coefficients(bf_or_p)
    lam = getattr(bf_or_p, "lam", None)
    if lam is None:
        lam = float(np.linalg.norm(p))
    if not lam > 0.0:
        raise ValueError("scale lam must be positive")
    r = _reflected_sum(p, ch)
    num = params.p_s * (abs(r) ** 2 + 2.0 * (ch.h * r).real)
    den = float(
        params.sigma_i_sq * np.sum(np.abs(ch.f * p) ** 2)
        + params.sigma_u_sq / lam**2 * np.sum(np.abs(p) ** 2)
    )
    return num / den


def link_metrics(bf_or_p, ch: ChannelRealization, params: SystemParams) -> LinkMetrics:
    """Evaluate all link quantities for one beamformer on one draw."""
    snr_value = snr(bf_or_p, ch, params)
    return LinkMetrics(
        snr=snr_value,
        rate_bits=rate(snr_value),
        reflected_power=reflected_power(bf_or_p, ch, params),
        receive_power=receive_power(bf_or_p, ch, params),
    )
