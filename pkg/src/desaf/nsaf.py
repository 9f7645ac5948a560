"""Normalized subband adaptive filter and its set-membership variant.

Both algorithms adapt one fullband weight vector from the ``N`` decimated
subband errors of each block. Errors are a-priori: they use the weights from
before the update.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "FilterState",
    "BlockErrors",
    "subband_output",
    "nsaf_update",
    "sm_nsaf_update",
    "sm_gate",
    "run_filter",
    "DEFAULT_DELTA",
]

DEFAULT_DELTA = 1e-2


@dataclass(frozen=True)
class FilterState:
    """Fullband weights plus step size, regularization and error bound."""

    w: np.ndarray
    mu: float = 1.0
    delta: float = DEFAULT_DELTA
    gamma: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.mu < 2.0:
            raise ValueError(f"mu must lie in (0, 2), got {self.mu}")
        if self.delta < 0 or self.gamma < 0:
            raise ValueError("delta and gamma must be non-negative")

    @classmethod
    def zeros(cls, M, **params):
        return cls(np.zeros(int(M)), **params)


@dataclass(frozen=True)
class BlockErrors:
    """Subband outputs ``y`` and errors ``e = d - y`` for one block."""

    e: np.ndarray
    y: np.ndarray


def subband_output(w, block):
    """Decimated subband outputs y_i = u_i(k)^T w, one per band."""
    w = np.asarray(w, dtype=float)
    if w.shape != (block.M,):
        raise ValueError(f"w has shape {w.shape}, block expects ({block.M},)")
    return block.regressors @ w


def _errors(w, block):
    y = subband_output(w, block)
    return BlockErrors(e=block.desired - y, y=y)


def _normalized_step(regressors, scaled_e, denom):
    # subbands whose denominator vanishes contribute nothing
    safe = denom > 0
    coef = np.zeros_like(scaled_e)
    coef[safe] = scaled_e[safe] / denom[safe]
    return coef @ regressors


def nsaf_update(state, block):
    """One NSAF step.

    w(k+1) = w(k) + mu * sum_i u_i(k) e_i(k) / (delta + ||u_i(k)||^2)

    Returns the new state and the a-priori block errors.
    """
    err = _errors(state.w, block)
    energy = np.einsum("ij,ij->i", block.regressors, block.regressors)
    dw = _normalized_step(block.regressors, err.e, state.delta + energy)
    return replace(state, w=state.w + state.mu * dw), err


def sm_gate(e, gamma):
    """Set-membership step scaling: 1 - gamma/|e| where |e| > gamma, else 0."""
    mag = np.abs(np.asarray(e, dtype=float))
    alpha = np.zeros_like(mag)
    active = mag > gamma
    alpha[active] = 1.0 - gamma / mag[active]
    return alpha


def sm_nsaf_update(state, block):
    """One SM-NSAF step; bands with |e_i| <= gamma are left out of the update.

    No regularization is used in the normalization.
    """
    err = _errors(state.w, block)
    alpha = sm_gate(err.e, state.gamma)
    if not alpha.any():
        return state, err
    energy = np.einsum("ij,ij->i", block.regressors, block.regressors)
    dw = _normalized_step(block.regressors, alpha * err.e, energy)
    return replace(state, w=state.w + state.mu * dw), err


_UPDATES = {"nsaf": nsaf_update, "sm_nsaf": sm_nsaf_update}


def run_filter(state, blocks, algo="nsaf"):
    """Run an update rule over every block.

    Returns
    -------
    state : FilterState
        Final state.
    errors : ndarray
        ``(len(blocks), N)`` a-priori subband errors.
    """
    update = _UPDATES[algo]
    errors = np.empty((len(blocks), blocks.N))
    for k, block in enumerate(blocks):
        state, err = update(state, block)
        errors[k] = err.e
    return state, errors
