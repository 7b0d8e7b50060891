"""IRS coefficient design.

Every method factors the coefficient vector as p = lam * p_tilde with
unit-norm direction p_tilde and scale lam chosen so the power reflected
by the IRS (signal plus amplification noise) exactly meets the budget
P_I. Methods:

* ``egr``   - equal gain on all elements, phases align the reflected paths.
* ``mrr``   - amplitude-and-phase matched to the product channel g* o f,
              rotated onto the direct path.
* ``srr``   - MRR restricted to the K strongest product channels.
* ``max_asnr`` - alternating iteration between the noise-whitened matched
              direction (for the current scale) and the budget-feasible
              scale (for the current direction).
* ``random_phase`` / ``passive_aligned`` - sanity baselines.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .system import ChannelRealization, SystemParams
from . import metrics

__all__ = [
    "Method",
    "SignMode",
    "SolverOptions",
    "Beamformer",
    "TraceRecord",
    "ConvergenceTrace",
    "lambda_from_normalized",
    "egr",
    "mrr",
    "srr",
    "asnr_direction",
    "max_asnr",
    "random_phase",
    "passive_aligned",
]


class Method(str, enum.Enum):
    """Beamforming method tags (also the CSV wire values)."""

    EGR = "egr"
    MRR = "mrr"
    SRR = "srr"
    MAX_ASNR = "max-asnr"
    RANDOM_PHASE = "random-phase"
    PASSIVE_ALIGNED = "passive-aligned"


class SignMode(str, enum.Enum):
    """Global sign of the iterative method's direction.

    ALIGNED adds the reflected path in phase with the direct path and is
    the maximizer of the objective; LITERAL keeps the minus sign that the
    stationarity equation produces verbatim (anti-aligned), retained for
    comparison runs.
    """

    ALIGNED = "aligned"
    LITERAL = "paper-literal"


@dataclass(frozen=True)
class SolverOptions:
    """Options for the alternating scale/direction iteration."""

    tolerance: float = 1e-4        # relative change of lam at which to stop
    max_iterations: int = 50
    sign_mode: SignMode = SignMode.ALIGNED

    def __post_init__(self) -> None:
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True)
class Beamformer:
    """A designed coefficient vector p = lam * p_normalized.

    ``active_mask`` marks elements that reflect; masked-off entries of
    ``p_normalized`` are exactly zero.
    """

    p_normalized: np.ndarray
    lam: float
    method: Method
    active_mask: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.p_normalized, dtype=np.complex128)
        mask = np.asarray(self.active_mask, dtype=bool)
        object.__setattr__(self, "p_normalized", p)
        object.__setattr__(self, "active_mask", mask)
        if p.ndim != 1 or mask.shape != p.shape:
            raise ValueError("p_normalized and active_mask must be 1-D and equal length")
        if abs(np.linalg.norm(p) - 1.0) > 1e-12:
            raise ValueError("p_normalized must have unit 2-norm")
        if not self.lam > 0.0:
            raise ValueError("lam must be positive")
        if np.any(p[~mask] != 0.0):
            raise ValueError("inactive entries must be exactly zero")

    @property
    def p(self) -> np.ndarray:
        """Full coefficient vector lam * p_normalized."""
        return self.lam * self.p_normalized

    @property
    def n_elements(self) -> int:
        return self.p_normalized.shape[0]


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    lam: float
    asnr_value: float
    rate_bits: float


@dataclass(frozen=True)
class ConvergenceTrace:
    """Per-iteration record of the alternating iteration.

    Record 0 is the initialization (the MRR scale and beamformer); the
    ``converged`` flag is False when the loop hit max_iterations without
    meeting the stopping rule.
    """

    records: tuple[TraceRecord, ...]
    converged: bool
    tolerance: float

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([r.lam for r in self.records])

    @property
    def rates(self) -> np.ndarray:
        return np.array([r.rate_bits for r in self.records])

    @property
    def iterations(self) -> int:
        """Number of direction/scale updates performed."""
        return len(self.records) - 1


def _direct_phase_factor(h: complex) -> complex:
    """exp(-j * arg(h)), defined as 1 for h == 0 (absent direct path)."""
    if h == 0:
        return 1.0 + 0.0j
    return h.conjugate() / abs(h)


def lambda_from_normalized(p_norm: np.ndarray, g: np.ndarray, params: SystemParams) -> float:
    """Budget-feasible scale for a unit direction:

    lam = sqrt(P_I / (P_S * sum|p~(n) g(n)|^2 + sigma_I^2 * sum|p~(n)|^2)).

    With this scale the power reflected by the IRS equals P_I exactly.
    """
    p_norm = np.asarray(p_norm, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    if p_norm.shape != g.shape:
        raise ValueError("p_norm and g must have equal length")
    nrm = np.linalg.norm(p_norm)
    if nrm == 0.0:
        raise ValueError("p_norm must be nonzero")
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError("p_norm must have unit 2-norm")
    signal = np.sum(np.abs(p_norm * g) ** 2)
    noise = np.sum(np.abs(p_norm) ** 2)
    return math.sqrt(params.p_i / (params.p_s * signal + params.sigma_i_sq * noise))


def egr(ch: ChannelRealization, params: SystemParams) -> Beamformer:
    """Equal-gain reflecting: p~(n) = exp(j arg(f(n) g(n)*)) / sqrt(N)."""
    n = ch.n_elements
    theta = np.angle(ch.f * np.conj(ch.g))
    p_norm = np.exp(1j * theta) / math.sqrt(n)
    lam = math.sqrt(
        params.p_i * n
        / (params.p_s * float(np.sum(np.abs(ch.g) ** 2)) + n * params.sigma_i_sq)
    )
    return Beamformer(p_norm, lam, Method.EGR, np.ones(n, dtype=bool))


def mrr(ch: ChannelRealization, params: SystemParams) -> Beamformer:
    """Ratio-matched reflecting: p~ proportional to g* o f, rotated by
    exp(-j arg(h)) so the reflected sum adds in phase with the direct path."""
    w = np.conj(ch.g) * ch.f
    nrm = np.linalg.norm(w)
    if nrm == 0.0:
        raise ValueError("product channel g* o f is identically zero")
    p_norm = (w / nrm) * _direct_phase_factor(ch.h)
    lam = _lambda_matched(ch.g, ch.f, params, np.ones(ch.n_elements, dtype=bool))
    return Beamformer(p_norm, lam, Method.MRR, np.ones(ch.n_elements, dtype=bool))


def _lambda_matched(g: np.ndarray, f: np.ndarray, params: SystemParams,
                    mask: np.ndarray) -> float:
    # Closed-form scale for a direction proportional to g* o f on the
    # masked subset: lam = sqrt(P_I S2 / (P_S S4 + sigma_I^2 S2)) with
    # S2 = sum |g f|^2 and S4 = sum |f|^2 |g|^4 over active elements.
    gf_sq = np.abs(g[mask] * f[mask]) ** 2
    s2 = float(np.sum(gf_sq))
    s4 = float(np.sum(np.abs(f[mask]) ** 2 * np.abs(g[mask]) ** 4))
    return math.sqrt(params.p_i * s2 / (params.p_s * s4 + params.sigma_i_sq * s2))


def srr(ch: ChannelRealization, params: SystemParams, k: int) -> Beamformer:
    """Selective ratio reflecting: MRR restricted to the k elements with
    largest product-channel magnitude |g(n)* f(n)| (ties: lower index)."""
    n = ch.n_elements
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    magnitudes = np.abs(np.conj(ch.g) * ch.f)
    order = np.argsort(-magnitudes, kind="stable")
    mask = np.zeros(n, dtype=bool)
    mask[order[:k]] = True
    w = np.zeros(n, dtype=np.complex128)
    w[mask] = np.conj(ch.g[mask]) * ch.f[mask]
    nrm = np.linalg.norm(w)
    if nrm == 0.0:
        raise ValueError("selected product channels are identically zero")
    p_norm = (w / nrm) * _direct_phase_factor(ch.h)
    lam = _lambda_matched(ch.g, ch.f, params, mask)
    return Beamformer(p_norm, lam, Method.SRR, mask)


def asnr_direction(ch: ChannelRealization, params: SystemParams, lam: float,
                   sign_mode: SignMode = SignMode.ALIGNED) -> np.ndarray:
    """Optimal unit direction for a fixed scale.

    With the diagonal whitener D(n) = sigma_I^2 |f(n)|^2 + sigma_u^2 / lam^2,
    the n-th entry is proportional to s * g(n)* f(n) / D(n), where the
    global factor s is exp(-j arg(h)) (ALIGNED) or its negative (LITERAL).
    """
    if not lam > 0.0:
        raise ValueError("lam must be positive")
    d = params.sigma_i_sq * np.abs(ch.f) ** 2 + params.sigma_u_sq / lam**2
    w = np.conj(ch.g) * ch.f / d
    nrm = np.linalg.norm(w)
    if nrm == 0.0:
        raise ValueError("product channel g* o f is identically zero")
    s = _direct_phase_factor(ch.h)
    if sign_mode is SignMode.LITERAL:
        s = -s
    return (w / nrm) * s


def max_asnr(ch: ChannelRealization, params: SystemParams,
             opts: SolverOptions = SolverOptions()) -> tuple[Beamformer, ConvergenceTrace]:
    """Alternating scale/direction iteration, initialized at the MRR scale.

    Each pass recomputes the whitened matched direction for the current
    scale, then the budget-feasible scale for that direction, stopping
    when the relative scale change drops below ``opts.tolerance``. A run
    that exhausts ``max_iterations`` is returned with the trace flagged
    unconverged rather than raised.
    """
    bf = mrr(ch, params)
    lam = bf.lam
    records = [_trace_record(0, bf, ch, params)]
    converged = False
    for it in range(1, opts.max_iterations + 1):
        p_norm = asnr_direction(ch, params, lam, opts.sign_mode)
        new_lam = lambda_from_normalized(p_norm, ch.g, params)
        bf = Beamformer(p_norm, new_lam, Method.MAX_ASNR,
                        np.ones(ch.n_elements, dtype=bool))
        records.append(_trace_record(it, bf, ch, params))
        if abs(new_lam - lam) / lam <= opts.tolerance:
            converged = True
            lam = new_lam
            break
        lam = new_lam
    trace = ConvergenceTrace(tuple(records), converged, opts.tolerance)
    return bf, trace


def _trace_record(iteration: int, bf: Beamformer, ch: ChannelRealization,
                  params: SystemParams) -> TraceRecord:
    return TraceRecord(
        iteration=iteration,
        lam=bf.lam,
        asnr_value=metrics.asnr_value(bf, ch, params),
        rate_bits=metrics.rate(metrics.snr(bf, ch, params)),
    )


def random_phase(ch: ChannelRealization, params: SystemParams, seed: int) -> Beamformer:
    """Equal-gain direction with i.i.d. uniform random phases (baseline)."""
    n = ch.n_elements
    rng = np.random.default_rng(seed)
    u = rng.uniform(0.0, 2.0 * math.pi, n)
    p_norm = np.exp(1j * u) / math.sqrt(n)
    lam = lambda_from_normalized(p_norm, ch.g, params)
    return Beamformer(p_norm, lam, Method.RANDOM_PHASE, np.ones(n, dtype=bool))


def passive_aligned(ch: ChannelRealization, params: SystemParams) -> Beamformer:
    """Phase-aligned passive reflection: every coefficient has unit modulus
    (no amplification), so lam = sqrt(N) instead of the power budget. The
    amplification-noise term still applies when this vector is evaluated."""
    n = ch.n_elements
    theta = np.angle(ch.f * np.conj(ch.g))
    phi = cmath.phase(ch.h) if ch.h != 0 else 0.0
    p_norm = np.exp(1j * (theta - phi)) / math.sqrt(n)
    return Beamformer(p_norm, math.sqrt(n), Method.PASSIVE_ALIGNED,
                      np.ones(n, dtype=bool))
