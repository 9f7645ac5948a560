"""Monte Carlo identification experiments and their CSV reports.

Every trial draws its channel, input, noise and algorithm randomness from
independent streams ``SeedSequence(seed, spawn_key=(trial, tag))``. The
scenario of a trial therefore depends only on the master seed and trial
index, so different algorithms (or DE settings) see identical data.
"""
from __future__ import annotations

import csv
import hashlib
import io
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .de_core import init_population
from .de_nsaf import DeNsafConfig, run_de_nsaf
from .filterbank import design_cosine_modulated_bank, make_blocks
from .nsaf import DEFAULT_DELTA, FilterState, run_filter
from .signal_model import (
    Ar4Params,
    ChannelScenario,
    add_noise_snr,
    generate_ar4,
    random_channel,
    simulate_channel,
)

__all__ = [
    "ALGORITHMS",
    "ExperimentConfig",
    "AggregateResult",
    "Comparison",
    "Entry",
    "build_scenario",
    "scenario_checksum",
    "run_trial",
    "run_experiment",
    "aggregate",
    "compare",
    "sweep",
    "blocks_to_level",
    "to_db",
    "benchmark_configs",
    "CURVES_HEADER",
    "SUMMARY_HEADER",
]

ALGORITHMS = ("nsaf", "sm_nsaf", "de_nsaf")
DEFAULT_MU = {"nsaf": 0.1, "sm_nsaf": 1.0}
DB_FLOOR = -80.0

CURVES_HEADER = ["algo", "block", "mse_linear", "mse_db"]
SUMMARY_HEADER = ["algo", "steady_mean", "steady_std", "window_start"]

# spawn-key tags of the per-trial random streams
_CHANNEL, _INPUT, _NOISE, _ALGO = range(4)


@dataclass(frozen=True)
class ExperimentConfig:
    """One algorithm run over ``trials`` independent scenarios.

    ``mu=None`` picks 0.1 for NSAF and 1.0 for SM-NSAF. The SM-NSAF error
    bound is ``gamma_scale * sigma_v`` with the trial's true noise level.
    ``steady_state_start=None`` averages over the second half of the run.
    """

    algo: str = "nsaf"
    M: int = 32
    N: int = 4
    snr_db: float = 20.0
    trials: int = 20
    seed: int = 0
    blocks: int = 2000
    mu: float | None = None
    delta: float = DEFAULT_DELTA
    gamma_scale: float = math.sqrt(5.0)
    de: DeNsafConfig = field(default_factory=DeNsafConfig)
    steady_state_start: int | None = None
    prototype_len: int | None = None

    def __post_init__(self):
        if self.algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algo!r}")
        if self.trials < 1 or self.blocks < 1:
            raise ValueError("trials and blocks must be at least 1")
        if self.M < 1 or self.N < 2:
            raise ValueError("need M >= 1 and N >= 2")
        if self.steady_state_start is not None and not 0 <= self.steady_state_start < self.blocks:
            raise ValueError("steady_state_start must lie inside the run")

    @property
    def step_size(self) -> float:
        return DEFAULT_MU.get(self.algo, 1.0) if self.mu is None else self.mu

    @property
    def window_start(self) -> int:
        if self.steady_state_start is None:
            return self.blocks // 2
        return self.steady_state_start

    @property
    def key(self) -> str:
        """Short CSV-safe identifier."""
        if self.algo == "nsaf":
            return f"nsaf_mu{self.step_size:g}"
        if self.algo == "sm_nsaf":
            return "sm_nsaf"
        return "de_nsaf"

    @property
    def label(self) -> str:
        if self.algo == "nsaf":
            return f"NSAF(mu={self.step_size:g}, N={self.N})"
        if self.algo == "sm_nsaf":
            return f"SM-NSAF(N={self.N})"
        return f"DE-NSAF(N={self.N})"

    def with_de(self, **changes):
        """Copy with DE engine parameters (PS, Cr, K, Gmax, ...) replaced."""
        return replace(self, de=replace(self.de, de=replace(self.de.de, **changes)))

    def scenario_key(self):
        return (self.M, self.N, self.snr_db, self.trials, self.seed, self.blocks)


@dataclass
class AggregateResult:
    mse_curve: np.ndarray
    mse_db: np.ndarray
    steady_mean: float
    steady_std: float
    window_start: int

    def summary(self, label) -> str:
        return f"{label}\t{self.steady_mean:.6g} ± {self.steady_std:.6g} ({self.window_start}~end)"


def _stream(cfg, trial, tag):
    return np.random.SeedSequence(cfg.seed, spawn_key=(trial, tag))


def build_scenario(cfg, trial):
    """Channel, AR(4) input and noisy desired signal for one trial.

    The input is rescaled so the noiseless desired signal has unit power,
    which puts the noise variance at ``10**(-snr_db/10)``.
    """
    L = cfg.blocks * cfg.N
    w_o = random_channel(cfg.M, _stream(cfg, trial, _CHANNEL))
    u = generate_ar4(L, Ar4Params(), _stream(cfg, trial, _INPUT))
    u = u / math.sqrt(np.mean(simulate_channel(u, w_o) ** 2))
    d_clean = simulate_channel(u, w_o)
    d, noise_variance = add_noise_snr(d_clean, cfg.snr_db, _stream(cfg, trial, _NOISE))
    return ChannelScenario(w_o=w_o, u=u, d_clean=d_clean, d=d, noise_variance=noise_variance)


def scenario_checksum(scenario) -> str:
    h = hashlib.sha256()
    for a in (scenario.w_o, scenario.u, scenario.d):
        h.update(np.ascontiguousarray(a, dtype=float).tobytes())
    return h.hexdigest()


def run_trial(cfg, trial, w_init=None, scenario=None, bank=None):
    """Per-block MSE, the sum of squared subband errors, for one trial.

    ``w_init`` overrides the initial weights (NSAF/SM-NSAF) or is injected
    as population member 0 (DE-NSAF).
    """
    if scenario is None:
        scenario = build_scenario(cfg, trial)
    if bank is None:
        bank = design_cosine_modulated_bank(cfg.N, cfg.prototype_len)
    blocks = make_blocks(bank, scenario.u, scenario.d, cfg.M)[: cfg.blocks]

    if cfg.algo == "de_nsaf":
        population = None
        if w_init is not None:
            population = init_population(cfg.de.de, cfg.M, _stream(cfg, trial, _ALGO).spawn(1)[0])
            members = population.members.copy()
            members[0] = w_init
            population = replace(population, members=members)
        curve, _ = run_de_nsaf(
            scenario, bank, cfg.de, seed=_stream(cfg, trial, _ALGO), blocks=blocks,
            population=population,
        )
        return curve.mse

    w0 = np.zeros(cfg.M) if w_init is None else np.array(w_init, dtype=float)
    gamma = cfg.gamma_scale * math.sqrt(scenario.noise_variance) if cfg.algo == "sm_nsaf" else 0.0
    state = FilterState(w0, mu=cfg.step_size, delta=cfg.delta, gamma=gamma)
    _, errors = run_filter(state, blocks, cfg.algo)
    return np.sum(errors**2, axis=1)


def to_db(x, floor_db=DB_FLOOR):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.maximum(10.0 * np.log10(x), floor_db)


def aggregate(curves, steady_state_start, floor_db=DB_FLOOR):
    """Ensemble-average trial curves and summarize the steady-state window.

    ``steady_std`` is the standard deviation of the averaged curve over the
    window blocks.
    """
    curves = np.asarray(curves, dtype=float)
    if curves.ndim == 1:
        curves = curves[None]
    if curves.size == 0 or curves.ndim != 2:
        raise ValueError("need at least one curve")
    if not 0 <= steady_state_start < curves.shape[1]:
        raise ValueError("steady_state_start outside the curves")
    mean = np.zeros(curves.shape[1])
    for c in curves:  # fixed reduction order
        mean += c
    mean /= curves.shape[0]
    window = mean[steady_state_start:]
    return AggregateResult(
        mse_curve=mean,
        mse_db=to_db(mean, floor_db),
        steady_mean=float(window.mean()),
        steady_std=float(window.std()),
        window_start=int(steady_state_start),
    )


def run_experiment(cfg, trial_order=None, progress=None):
    """Run every trial of ``cfg``; returns ``(curves, AggregateResult)``.

    Curves are stored by trial index whatever ``trial_order`` is used.
    """
    bank = design_cosine_modulated_bank(cfg.N, cfg.prototype_len)
    order = range(cfg.trials) if trial_order is None else trial_order
    curves = np.empty((cfg.trials, cfg.blocks))
    for t in order:
        curves[t] = run_trial(cfg, t, bank=bank)
        if progress is not None:
            progress(cfg, t)
    return curves, aggregate(curves, cfg.window_start)


@dataclass(frozen=True)
class Entry:
    key: str
    label: str
    result: AggregateResult


@dataclass
class Comparison:
    """Aggregated results in report order plus per-trial scenario checksums."""

    entries: list
    checksums: dict = field(default_factory=dict)

    @property
    def results(self) -> dict:
        return {e.key: e.result for e in self.entries}

    def curves_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CURVES_HEADER)
        for e in self.entries:
            for k, (lin, db) in enumerate(zip(e.result.mse_curve, e.result.mse_db)):
                writer.writerow([e.key, k, repr(float(lin)), repr(float(db))])
        return buf.getvalue()

    def summary_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(SUMMARY_HEADER)
        for e in self.entries:
            r = e.result
            writer.writerow([e.key, repr(r.steady_mean), repr(r.steady_std), r.window_start])
        return buf.getvalue()

    def table(self) -> str:
        return "\n".join(["Algorithms\tAverage MSE"] + [e.result.summary(e.label) for e in self.entries])

    def write(self, out_dir):
        """Write ``curves.csv`` and ``summary.csv`` into ``out_dir``."""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        curves = out_dir / "curves.csv"
        summary = out_dir / "summary.csv"
        curves.write_text(self.curves_csv())
        summary.write_text(self.summary_csv())
        return curves, summary


def compare(configs, progress=None):
    """Run several algorithms on the same per-trial scenarios."""
    configs = list(configs)
    if not configs:
        raise ValueError("nothing to compare")
    if len({c.scenario_key() for c in configs}) != 1:
        raise ValueError("configs must share M, N, snr_db, trials, seed and blocks")
    if len({c.key for c in configs}) != len(configs):
        raise ValueError("configs must have distinct algorithm keys")
    base = configs[0]
    checksums = {t: scenario_checksum(build_scenario(base, t)) for t in range(base.trials)}
    entries = []
    for cfg in configs:
        _, result = run_experiment(cfg, progress=progress)
        entries.append(Entry(cfg.key, cfg.label, result))
    return Comparison(entries, checksums)


SWEEPABLE = ("PS", "Cr")


def sweep(param, values, base, progress=None):
    """DE-NSAF results for each value of ``param`` (``"PS"`` or ``"Cr"``).

    Returns a dict ``value -> AggregateResult``; scenarios are shared.
    """
    if param not in SWEEPABLE:
        raise ValueError(f"cannot sweep {param!r}; choose from {SWEEPABLE}")
    if base.algo != "de_nsaf":
        raise ValueError("sweeps apply to de_nsaf only")
    out = {}
    for v in values:
        v = int(v) if param == "PS" else float(v)
        _, out[v] = run_experiment(base.with_de(**{param: v}), progress=progress)
    return out


def blocks_to_level(mse_db, level_db, smooth=50):
    """First block from which the ``smooth``-block trailing average of the
    dB curve stays at or below ``level_db``; ``None`` if it never settles.
    """
    mse_db = np.asarray(mse_db, dtype=float)
    smooth = max(1, min(int(smooth), mse_db.size))
    kernel = np.ones(smooth) / smooth
    avg = np.convolve(mse_db, kernel, mode="valid")
    above = np.nonzero(avg > level_db)[0]
    if above.size == 0:
        return smooth - 1
    if above[-1] == avg.size - 1:
        return None
    return int(above[-1] + 1 + smooth - 1)


def benchmark_configs(**common):
    """NSAF(mu=0.1), NSAF(mu=1), SM-NSAF and DE-NSAF sharing ``common`` settings."""
    de_keys = {"de"}
    shared = {k: v for k, v in common.items() if k not in de_keys and k != "mu"}
    de = common.get("de", DeNsafConfig())
    return [
        ExperimentConfig(algo="nsaf", mu=0.1, **shared),
        ExperimentConfig(algo="nsaf", mu=1.0, **shared),
        ExperimentConfig(algo="sm_nsaf", **shared),
        ExperimentConfig(algo="de_nsaf", de=de, **shared),
    ]
