"""Real-parameter differential evolution, DE/rand/1/bin.

Generations are synchronous: every donor of generation G+1 is built from the
frozen members of generation G. All random draws of a generation are made in
one batch before any cost is evaluated, with row ``i`` of each draw belonging
to member ``i``, so the trajectory does not depend on evaluation order.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "DeConfig",
    "DePopulation",
    "init_population",
    "mutate",
    "crossover",
    "select",
    "evaluate",
    "step_generation",
    "generation_rng",
    "sphere",
]


@dataclass(frozen=True)
class DeConfig:
    PS: int = 20
    Cr: float = 0.8
    K: float = 0.5
    Gmax: int = 3000
    init_low: float = -1.0
    init_high: float = 1.0

    def __post_init__(self):
        if self.PS < 4:
            raise ValueError("PS must be at least 4")
        if not 0.0 <= self.Cr <= 1.0:
            raise ValueError("Cr must lie in [0, 1]")
        if self.K < 0:
            raise ValueError("K must be non-negative")
        if self.Gmax < 1:
            raise ValueError("Gmax must be at least 1")
        if not self.init_low < self.init_high:
            raise ValueError("init_low must be below init_high")


@dataclass(frozen=True)
class DePopulation:
    """Population members (one per row), their cached costs and generation.

    ``costs`` is all-NaN until the population is first evaluated.
    """

    members: np.ndarray
    costs: np.ndarray
    G: int = 0

    @property
    def PS(self) -> int:
        return self.members.shape[0]

    @property
    def M(self) -> int:
        return self.members.shape[1]

    @property
    def evaluated(self) -> bool:
        return not np.isnan(self.costs).any()

    @property
    def best_index(self) -> int:
        if not self.evaluated:
            raise RuntimeError("population has not been evaluated")
        return int(np.argmin(self.costs))

    @property
    def best(self) -> np.ndarray:
        return self.members[self.best_index]

    @property
    def best_cost(self) -> float:
        return float(self.costs[self.best_index])


def sphere(x):
    """Sum of squares along the last axis."""
    x = np.asarray(x, dtype=float)
    return np.sum(x * x, axis=-1)


def generation_rng(seed, G):
    """Random stream for generation ``G`` of a run seeded with ``seed``."""
    if isinstance(seed, np.random.SeedSequence):
        ss = np.random.SeedSequence(seed.entropy, spawn_key=(*seed.spawn_key, G))
    else:
        ss = np.random.SeedSequence(seed, spawn_key=(G,))
    return np.random.default_rng(ss)


def init_population(cfg, M, seed=None):
    """Uniform random members in ``[cfg.init_low, cfg.init_high]``."""
    M = int(M)
    if M <= 0:
        raise ValueError("M must be positive")
    rng = np.random.default_rng(seed)
    members = rng.uniform(cfg.init_low, cfg.init_high, size=(cfg.PS, M))
    return DePopulation(members=members, costs=np.full(cfg.PS, np.nan), G=0)


def evaluate(pop, cost_fn, vectorized=True):
    """Recompute every cached cost with ``cost_fn``.

    With ``vectorized=True`` the cost function maps a ``(PS, M)`` array to
    ``(PS,)`` costs; otherwise it is called once per member.
    """
    costs = _costs(cost_fn, pop.members, vectorized)
    return replace(pop, costs=costs)


def _costs(cost_fn, X, vectorized):
    if vectorized:
        c = np.asarray(cost_fn(X), dtype=float)
    else:
        c = np.array([cost_fn(x) for x in X], dtype=float)
    if c.shape != (X.shape[0],):
        raise ValueError("cost function returned the wrong shape")
    if np.isnan(c).any():
        raise ValueError("cost function returned NaN")
    return c


def _donor_indices(rng, PS):
    # three distinct indices per member, none equal to the member itself
    picks = np.argsort(rng.random((PS, PS - 1)), axis=1)[:, :3]
    return picks + (picks >= np.arange(PS)[:, None])


def mutate(pop, i, K, rng=None, indices=None):
    """Donor V = X[r1] + K (X[r2] - X[r3]) for member ``i``.

    ``r1, r2, r3`` are distinct and differ from ``i``. They are drawn from
    ``rng`` unless given explicitly through ``indices``.
    """
    if pop.PS < 4:
        raise RuntimeError("mutation needs at least 4 members")
    if indices is None:
        rng = np.random.default_rng(rng)
        others = np.delete(np.arange(pop.PS), i)
        indices = rng.choice(others, size=3, replace=False)
    r1, r2, r3 = indices
    if len({i, r1, r2, r3}) != 4:
        raise ValueError("donor indices must be distinct and differ from i")
    X = pop.members
    return X[r1] + K * (X[r2] - X[r3])


def _binomial_mask(u, j_rand, Cr):
    mask = u <= Cr
    mask[..., :] |= np.arange(u.shape[-1]) == np.asarray(j_rand)[..., None]
    return mask


def crossover(target, donor, Cr, rng=None):
    """Binomial crossover: take donor coordinate j when rand_j <= Cr or j = j_rand."""
    target = np.asarray(target, dtype=float)
    donor = np.asarray(donor, dtype=float)
    if target.shape != donor.shape or target.ndim != 1:
        raise ValueError("target and donor must be 1-D and of equal length")
    rng = np.random.default_rng(rng)
    u = rng.random(target.size)
    j_rand = rng.integers(target.size)
    return np.where(_binomial_mask(u, j_rand, Cr), donor, target)


def select(target, trial, f_target, f_trial):
    """Greedy one-to-one selection; the trial must be strictly better to win."""
    if np.isnan(f_target) or np.isnan(f_trial):
        raise ValueError("cost is NaN")
    if f_trial < f_target:
        return trial, f_trial
    return target, f_target


def step_generation(pop, cfg, cost_fn, rng, vectorized=True):
    """Advance one synchronous DE/rand/1/bin generation.

    Parameters
    ----------
    pop : DePopulation
        Current generation; evaluated first if its costs are missing.
    cfg : DeConfig
    cost_fn : callable
        Cost of candidate vectors (see :func:`evaluate` for ``vectorized``).
    rng : numpy.random.Generator or seed
        Source of all mutation and crossover draws of this generation.
    """
    if pop.PS < 4:
        raise RuntimeError("mutation needs at least 4 members")
    if not pop.evaluated:
        pop = evaluate(pop, cost_fn, vectorized)
    rng = np.random.default_rng(rng)
    PS, M = pop.members.shape
    X = pop.members

    r = _donor_indices(rng, PS)
    V = X[r[:, 0]] + cfg.K * (X[r[:, 1]] - X[r[:, 2]])
    mask = _binomial_mask(rng.random((PS, M)), rng.integers(M, size=PS), cfg.Cr)
    U = np.where(mask, V, X)

    f_trial = _costs(cost_fn, U, vectorized)
    win = f_trial < pop.costs
    members = np.where(win[:, None], U, X)
    costs = np.where(win, f_trial, pop.costs)
    return DePopulation(members=members, costs=costs, G=pop.G + 1)
