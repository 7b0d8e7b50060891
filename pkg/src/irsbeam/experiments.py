"""Seeded Monte-Carlo experiment runner.

Each experiment cell draws ``trials`` independent channel realizations,
one per child seed mixed from (master_seed, trial index), designs the
requested beamformer, and aggregates achievable rates. Trials are pure
functions of their seed, so results are byte-identical whether cells run
serially or on a thread pool.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import metrics
from .beamforming import Beamformer, Method, SolverOptions, egr, max_asnr, mrr, \
    passive_aligned, random_phase, srr
from .config import ExperimentConfig
from .oracle import grid_search_best, sign_adjudicate
from .system import ChannelRealization, SystemParams, sample_channels, trial_seed

__all__ = [
    "RateSummary",
    "ExperimentResult",
    "build_beamformer",
    "monte_carlo_rates",
    "monte_carlo_rate",
    "run_convergence",
    "run_srr_sweep",
    "run_rate_vs_n",
    "run_single",
    "run_oracle_check",
    "format_csv",
]

RATE_VS_N_METHODS = (
    Method.MAX_ASNR,
    Method.MRR,
    Method.SRR,
    Method.EGR,
    Method.RANDOM_PHASE,
    Method.PASSIVE_ALIGNED,
)

CONVERGENCE_HEADER = ("seed", "iteration", "lambda", "rate_bits")
SRR_SWEEP_HEADER = ("k", "p_s_dbm", "method", "mean_rate_bits", "std_rate_bits", "trials")
RATE_VS_N_HEADER = ("n", "method", "mean_rate_bits", "std_rate_bits", "trials")
ORACLE_CHECK_HEADER = ("seed", "n", "method", "rate_bits", "best_rate_bits", "gap_bits")


@dataclass(frozen=True)
class RateSummary:
    """Aggregated rate for one (method, cell) pair."""

    method: str
    n: int
    k: int | None
    p_s_dbm: float | None
    mean_rate_bits: float
    std_rate_bits: float
    trials: int


@dataclass(frozen=True)
class ExperimentResult:
    """CSV-ready experiment output plus optional per-trial log."""

    header: tuple[str, ...]
    rows: list[tuple]
    trial_header: tuple[str, ...] | None = None
    trial_rows: list[tuple] | None = None
    notes: tuple[str, ...] = ()


def build_beamformer(method: Method, ch: ChannelRealization, params: SystemParams,
                     k: int | None = None,
                     solver: SolverOptions | None = None,
                     phase_seed: int | None = None) -> Beamformer:
    """Dispatch one beamformer design by method tag."""
    if method is Method.EGR:
        return egr(ch, params)
    if method is Method.MRR:
        return mrr(ch, params)
    if method is Method.SRR:
        if k is None:
            raise ValueError("SRR requires a selection size k")
        return srr(ch, params, k)
    if method is Method.MAX_ASNR:
        bf, _ = max_asnr(ch, params, solver or SolverOptions())
        return bf
    if method is Method.RANDOM_PHASE:
        if phase_seed is None:
            raise ValueError("random-phase requires a seed")
        return random_phase(ch, params, phase_seed)
    if method is Method.PASSIVE_ALIGNED:
        return passive_aligned(ch, params)
    raise ValueError(f"unsupported method {method!r}")


def _trial_rate(method: Method, params: SystemParams, master_seed: int, trial: int,
                k: int | None, solver: SolverOptions | None) -> float:
    ch = sample_channels(params, trial_seed(master_seed, trial))
    bf = build_beamformer(method, ch, params, k=k, solver=solver,
                          phase_seed=trial_seed(master_seed, trial, stream=1))
    return metrics.rate(metrics.snr(bf, ch, params))


def _map_trials(fn, trials: int, jobs: int) -> list:
    if jobs <= 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, range(trials)))


def monte_carlo_rates(method: Method, params: SystemParams, trials: int,
                      master_seed: int, k: int | None = None,
                      solver: SolverOptions | None = None,
                      jobs: int = 1) -> np.ndarray:
    """Per-trial achievable rates, in trial order (independent of jobs)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")

    def one(t: int) -> float:
        try:
            return _trial_rate(method, params, master_seed, t, k, solver)
        except Exception as err:
            raise RuntimeError(f"trial {t} failed for method {method.value}: {err}") from err

    return np.array(_map_trials(one, trials, jobs))


def monte_carlo_rate(method: Method, params: SystemParams, trials: int,
                     master_seed: int, k: int | None = None,
                     solver: SolverOptions | None = None,
                     jobs: int = 1,
                     p_s_dbm: float | None = None) -> RateSummary:
    """Mean and sample standard deviation of the rate over ``trials`` draws."""
    rates = monte_carlo_rates(method, params, trials, master_seed,
                              k=k, solver=solver, jobs=jobs)
    std = float(np.std(rates, ddof=1)) if trials > 1 else 0.0
    return RateSummary(
        method=method.value,
        n=params.n_elements,
        k=k,
        p_s_dbm=p_s_dbm,
        mean_rate_bits=float(np.mean(rates)),
        std_rate_bits=std,
        trials=trials,
    )


def run_convergence(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentResult:
    """Per-iteration scale and rate traces of the iterative method, one
    block of rows per element count, one trace per seed."""
    rows: list[tuple] = []
    for n in cfg.n_values:
        params = cfg.params_for(n)

        def one(t: int) -> tuple[int, list[tuple]]:
            seed = trial_seed(cfg.master_seed, t)
            ch = sample_channels(params, seed)
            _, trace = max_asnr(ch, params, cfg.solver)
            return seed, [(seed, rec.iteration, rec.lam, rec.rate_bits)
                          for rec in trace.records]

        for _, trace_rows in _map_trials(one, cfg.trials, jobs):
            rows.extend(trace_rows)
    return ExperimentResult(CONVERGENCE_HEADER, rows)


def run_srr_sweep(cfg: ExperimentConfig, jobs: int = 1,
                  verbose_trials: bool = False) -> ExperimentResult:
    """Selection-size sweep at each BS power level, with a full-selection
    reference row per power level."""
    n = cfg.n_values[0]
    rows: list[tuple] = []
    trial_rows: list[tuple] = []
    for p_s_dbm in cfg.p_s_dbm_values:
        params = cfg.params_for(n, p_s_dbm=p_s_dbm)
        cells = [(Method.SRR, k) for k in cfg.k_values] + [(Method.MRR, n)]
        for method, k in cells:
            rates = monte_carlo_rates(method, params, cfg.trials, cfg.master_seed,
                                      k=k if method is Method.SRR else None,
                                      solver=cfg.solver, jobs=jobs)
            rows.append((k, p_s_dbm, method.value, float(np.mean(rates)),
                         _sample_std(rates), cfg.trials))
            if verbose_trials:
                trial_rows.extend(
                    (k, p_s_dbm, method.value, t, trial_seed(cfg.master_seed, t), r)
                    for t, r in enumerate(rates)
                )
    return ExperimentResult(
        SRR_SWEEP_HEADER, rows,
        trial_header=("k", "p_s_dbm", "method", "trial", "seed", "rate_bits")
        if verbose_trials else None,
        trial_rows=trial_rows if verbose_trials else None,
    )


def _sample_std(rates: np.ndarray) -> float:
    return float(np.std(rates, ddof=1)) if rates.size > 1 else 0.0


def _method_cells(cfg: ExperimentConfig, n: int) -> list[tuple[Method, int | None]]:
    k_default = cfg.k_values[0] if cfg.k_values else max(1, n // 2)
    return [(m, k_default if m is Method.SRR else None) for m in RATE_VS_N_METHODS]


def run_rate_vs_n(cfg: ExperimentConfig, jobs: int = 1,
                  verbose_trials: bool = False) -> ExperimentResult:
    """Mean rate of every method across the element-count grid; the
    selective method runs at half the elements."""
    rows: list[tuple] = []
    trial_rows: list[tuple] = []
    for n in cfg.n_values:
        params = cfg.params_for(n)
        for method in RATE_VS_N_METHODS:
            k = max(1, n // 2) if method is Method.SRR else None
            rates = monte_carlo_rates(method, params, cfg.trials, cfg.master_seed,
                                      k=k, solver=cfg.solver, jobs=jobs)
            rows.append((n, method.value, float(np.mean(rates)),
                         _sample_std(rates), cfg.trials))
            if verbose_trials:
                trial_rows.extend(
                    (n, method.value, t, trial_seed(cfg.master_seed, t), r)
                    for t, r in enumerate(rates)
                )
    return ExperimentResult(
        RATE_VS_N_HEADER, rows,
        trial_header=("n", "method", "trial", "seed", "rate_bits")
        if verbose_trials else None,
        trial_rows=trial_rows if verbose_trials else None,
    )


def run_single(cfg: ExperimentConfig, jobs: int = 1,
               verbose_trials: bool = False) -> ExperimentResult:
    """All methods on one cell (the first element count)."""
    n = cfg.n_values[0]
    params = cfg.params_for(n)
    rows: list[tuple] = []
    trial_rows: list[tuple] = []
    for method, k in _method_cells(cfg, n):
        rates = monte_carlo_rates(method, params, cfg.trials, cfg.master_seed,
                                  k=k, solver=cfg.solver, jobs=jobs)
        rows.append((n, method.value, float(np.mean(rates)),
                     _sample_std(rates), cfg.trials))
        if verbose_trials:
            trial_rows.extend(
                (n, method.value, t, trial_seed(cfg.master_seed, t), r)
                for t, r in enumerate(rates)
            )
    return ExperimentResult(
        RATE_VS_N_HEADER, rows,
        trial_header=("n", "method", "trial", "seed", "rate_bits")
        if verbose_trials else None,
        trial_rows=trial_rows if verbose_trials else None,
    )


ORACLE_PHASE_STEPS = 256
ORACLE_AMPLITUDE_STEPS = 64


def run_oracle_check(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentResult:
    """Compare every method against the brute-force grid optimum at small
    element counts, and tally the sign adjudication per seed."""
    rows: list[tuple] = []
    tallies: dict[str, int] = {}
    for n in cfg.n_values:
        params = cfg.params_for(n)

        def one(t: int) -> tuple[list[tuple], str]:
            seed = trial_seed(cfg.master_seed, t)
            ch = sample_channels(params, seed)
            best = grid_search_best(ch, params, ORACLE_PHASE_STEPS,
                                    ORACLE_AMPLITUDE_STEPS)
            out = []
            for method, k in _method_cells(cfg, n):
                bf = build_beamformer(method, ch, params, k=k, solver=cfg.solver,
                                      phase_seed=trial_seed(cfg.master_seed, t, stream=1))
                r = metrics.rate(metrics.snr(bf, ch, params))
                out.append((seed, n, method.value, r, best.best_rate_bits,
                            best.best_rate_bits - r))
            verdict = sign_adjudicate(ch, params, cfg.solver).value
            return out, verdict

        for method_rows, verdict in _map_trials(one, cfg.trials, jobs):
            rows.extend(method_rows)
            tallies[verdict] = tallies.get(verdict, 0) + 1
    notes = tuple(
        f"sign adjudication: {name} x {count}" for name, count in sorted(tallies.items())
    )
    return ExperimentResult(ORACLE_CHECK_HEADER, rows, notes=notes)


def _format_value(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    raise TypeError(f"cannot serialize {value!r} into CSV")


def format_csv(header: tuple[str, ...], rows: list[tuple]) -> str:
    """Render rows with fixed column order, 12-significant-digit floats,
    and LF line endings, so identical results yield identical bytes."""
    lines = [",".join(header)]
    lines.extend(",".join(_format_value(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"
