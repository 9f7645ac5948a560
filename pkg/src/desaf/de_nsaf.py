"""Subband adaptive filter whose weights are trained by differential evolution.

At each decimated block the population is re-scored on the new block's
subband squared-error cost, evolved for ``generations_per_block``
generations, and the lowest-cost member becomes the fullband weight vector
w(k). The population carries over from block to block.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .de_core import (
    DeConfig,
    DePopulation,
    evaluate,
    generation_rng,
    init_population,
    step_generation,
)
from .filterbank import BlockSequence, SubbandBlock, make_blocks
from .nsaf import BlockErrors, subband_output

__all__ = [
    "DeNsafConfig",
    "LearningCurve",
    "subband_cost",
    "block_cost_fn",
    "de_nsaf_step",
    "run_de_nsaf",
]


@dataclass(frozen=True)
class DeNsafConfig:
    """Loop structure of DE-NSAF around a :class:`DeConfig`.

    Attributes
    ----------
    de : DeConfig
        Engine settings; ``de.Gmax`` bounds the generations run per block.
    generations_per_block : int
        DE generations run at every block, at most ``de.Gmax``.
    cost_window : int
        Number of most recent blocks summed into the cost. Windows shorter
        than ``M / N`` blocks leave directions of weight space unconstrained.
    generation_budget : int or None
        Total generations over the whole run; ``None`` is unlimited. When
        exhausted the weights freeze.
    full_window : bool
        Hold the population until ``cost_window`` blocks are available.
    """

    de: DeConfig = field(default_factory=DeConfig)
    generations_per_block: int = 10
    cost_window: int = 16
    generation_budget: int | None = None
    full_window: bool = True

    def __post_init__(self):
        if not 1 <= self.generations_per_block <= self.de.Gmax:
            raise ValueError("generations_per_block must lie in [1, de.Gmax]")
        if self.cost_window < 1:
            raise ValueError("cost_window must be at least 1")
        if self.generation_budget is not None and self.generation_budget < 0:
            raise ValueError("generation_budget must be non-negative")

    @property
    def total_generations(self) -> float:
        return np.inf if self.generation_budget is None else self.generation_budget


@dataclass
class LearningCurve:
    """Per-block record of the best cost and the subband errors of w(k)."""

    k: list = field(default_factory=list)
    cost: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    def append(self, k, cost, errors):
        self.k.append(k)
        self.cost.append(cost)
        self.errors.append(np.asarray(errors))

    def __len__(self):
        return len(self.k)

    @property
    def mse(self):
        """Sum of squared subband errors per block."""
        return np.array([np.dot(e, e) for e in self.errors])


def _as_arrays(blocks):
    if isinstance(blocks, SubbandBlock):
        return blocks.regressors[None], blocks.desired[None]
    if isinstance(blocks, BlockSequence):
        return blocks.regressors, blocks.desired
    blocks = list(blocks)
    return (
        np.stack([b.regressors for b in blocks]),
        np.stack([b.desired for b in blocks]),
    )


def subband_cost(w, blocks):
    """Sum over blocks and bands of (d_i(k) - u_i(k)^T w)^2.

    ``w`` may be a single ``(M,)`` vector or a ``(P, M)`` stack of candidates,
    giving a scalar or ``(P,)`` costs respectively. ``blocks`` is one
    :class:`SubbandBlock` or a sequence of them.
    """
    U, D = _as_arrays(blocks)
    w = np.asarray(w, dtype=float)
    if w.shape[-1] != U.shape[-1]:
        raise ValueError(f"weight length {w.shape[-1]} != regressor length {U.shape[-1]}")
    # U: (K, N, M), w: (..., M) -> residual (..., K, N)
    r = D - np.einsum("knm,...m->...kn", U, w)
    return np.sum(r * r, axis=(-2, -1))


def block_cost_fn(blocks):
    """Vectorized cost function bound to fixed blocks, for the DE engine."""
    U, D = _as_arrays(blocks)
    flat_U = U.reshape(-1, U.shape[-1])
    flat_D = D.reshape(-1)

    def cost(W):
        r = flat_D - W @ flat_U.T
        return np.einsum("pj,pj->p", r, r)

    return cost


def de_nsaf_step(pop, blocks, cfg, rng):
    """Adapt on the newest block of ``blocks``.

    Parameters
    ----------
    pop : DePopulation
        Population carried from the previous block.
    blocks : SubbandBlock or sequence of SubbandBlock
        Recent blocks, oldest first; the last one is the current block and
        the cost sums over the last ``cfg.cost_window`` of them.
    cfg : DeNsafConfig
    rng : numpy.random.Generator, seed, or callable
        Either one stream shared by all generations of this step, or a
        callable ``G -> Generator`` giving a stream per generation.

    Returns
    -------
    pop : DePopulation
    w_best : ndarray
        Lowest-cost member after the last generation.
    errors : BlockErrors
        Subband output and error of ``w_best`` on the current block.
    """
    if isinstance(blocks, SubbandBlock):
        blocks = [blocks]
    blocks = list(blocks)
    current = blocks[-1]
    cost_fn = block_cost_fn(blocks[-cfg.cost_window:])

    # landscape changed with the new block: refresh cached costs
    pop = evaluate(pop, cost_fn)
    per_generation = callable(rng) and not isinstance(rng, np.random.Generator)
    if not per_generation:
        rng = np.random.default_rng(rng)
    for _ in range(cfg.generations_per_block):
        g_rng = rng(pop.G) if per_generation else rng
        pop = step_generation(pop, cfg.de, cost_fn, g_rng)
    w_best = pop.best.copy()
    y = subband_output(w_best, current)
    return pop, w_best, BlockErrors(e=current.desired - y, y=y)


def run_de_nsaf(scenario, bank, cfg, seed=None, max_blocks=None, blocks=None, population=None):
    """Identify ``scenario``'s channel with DE-NSAF.

    Parameters
    ----------
    scenario : ChannelScenario
    bank : AnalysisBank
    cfg : DeNsafConfig
    seed : int or SeedSequence
        Seeds the initial population (spawn key 0) and the generation
        streams (spawn key 1).
    max_blocks : int, optional
        Block budget; all blocks by default.
    blocks : BlockSequence, optional
        Pre-computed blocks for ``scenario``.
    population : DePopulation, optional
        Initial population instead of a random one.

    Once ``cfg.total_generations`` generations have run the population is
    frozen; remaining blocks are filtered with the last w(k).
    """
    if blocks is None:
        blocks = make_blocks(bank, scenario.u, scenario.d, scenario.M)
    K = len(blocks) if max_blocks is None else min(len(blocks), int(max_blocks))
    if K < 1:
        raise ValueError("scenario too short for a single block")
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    init_ss, gen_ss = ss.spawn(2)
    pop = population if population is not None else init_population(cfg.de, scenario.M, init_ss)

    def gen_rng(G):
        return generation_rng(gen_ss, G)

    curve = LearningCurve()
    w = None
    for k in range(K):
        warm = k + 1 >= cfg.cost_window or not cfg.full_window
        if warm and pop.G + cfg.generations_per_block <= cfg.total_generations:
            window = blocks[max(0, k - cfg.cost_window + 1): k + 1]
            pop, w, err = de_nsaf_step(pop, window, cfg, gen_rng)
            cost = pop.best_cost
        else:
            block = blocks[k]
            if w is None or not warm:
                w = evaluate(pop, block_cost_fn(block)).best.copy()
            y = subband_output(w, block)
            err = BlockErrors(e=block.desired - y, y=y)
            cost = float(err.e @ err.e)
        curve.append(k, cost, err.e)
    return curve, w
