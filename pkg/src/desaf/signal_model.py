"""Colored excitation, random channels and noisy desired responses.

All generators take a seed (anything accepted by ``numpy.random.default_rng``)
and draw Gaussian samples with numpy's PCG64 bit generator and its ziggurat
``standard_normal`` method, so a given seed reproduces bit-identical output.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

__all__ = [
    "Ar4Params",
    "ChannelScenario",
    "generate_ar4",
    "random_channel",
    "simulate_channel",
    "add_noise_snr",
    "AR4_WARMUP",
]

# samples run through the recursion and discarded before the returned sequence
AR4_WARMUP = 1000


@dataclass(frozen=True)
class Ar4Params:
    """Coefficients of u(n) = a1 u(n-1) + a2 u(n-2) + a3 u(n-3) + a4 u(n-4) + xi(n)."""

    a1: float = 0.6617
    a2: float = 0.3402
    a3: float = 0.5235
    a4: float = -0.8703
    innovation_variance: float = 1.0

    def __post_init__(self):
        if not self.innovation_variance >= 0:
            raise ValueError("innovation_variance must be non-negative")

    @property
    def coefficients(self) -> tuple[float, float, float, float]:
        return (self.a1, self.a2, self.a3, self.a4)

    @property
    def denominator(self) -> np.ndarray:
        """AR polynomial in ``lfilter`` convention, ``[1, -a1, -a2, -a3, -a4]``."""
        return np.concatenate(([1.0], -np.asarray(self.coefficients)))


@dataclass(frozen=True)
class ChannelScenario:
    """One identification problem: d(n) = u(n)^T w_o + v(n)."""

    w_o: np.ndarray
    u: np.ndarray
    d_clean: np.ndarray
    d: np.ndarray
    noise_variance: float

    def __post_init__(self):
        L = len(self.u)
        if len(self.d_clean) != L or len(self.d) != L:
            raise ValueError("u, d_clean and d must have equal length")

    @property
    def M(self) -> int:
        return len(self.w_o)

    @property
    def noise(self) -> np.ndarray:
        return self.d - self.d_clean


def generate_ar4(n_samples, params=None, seed=None, innovations=None):
    """Generate an AR(4) sequence from a zero initial state.

    Parameters
    ----------
    n_samples : int
        Length of the returned sequence.
    params : Ar4Params, optional
        Recursion coefficients and innovation variance. Defaults to
        ``Ar4Params()``.
    seed : int or SeedSequence, optional
        Seed for the white Gaussian innovations.
    innovations : array_like, optional
        Explicit innovation sequence xi(n) of length ``n_samples``. When given,
        no random draw and no warm-up happen; the recursion starts at n = 0.

    Returns
    -------
    ndarray
        ``n_samples`` real values. Without explicit innovations the first
        ``AR4_WARMUP`` samples of the recursion are discarded.
    """
    n_samples = int(n_samples)
    if n_samples <= 0:
        raise ValueError("n_samples must be positive")
    params = Ar4Params() if params is None else params

    if innovations is not None:
        xi = np.asarray(innovations, dtype=float)
        if xi.shape != (n_samples,):
            raise ValueError("innovations must have length n_samples")
        return lfilter([1.0], params.denominator, xi)

    rng = np.random.default_rng(seed)
    xi = rng.standard_normal(n_samples + AR4_WARMUP)
    xi *= np.sqrt(params.innovation_variance)
    return lfilter([1.0], params.denominator, xi)[AR4_WARMUP:]


def random_channel(M, seed=None):
    """Return ``M`` i.i.d. standard-normal taps scaled to unit Euclidean norm."""
    M = int(M)
    if M <= 0:
        raise ValueError("M must be positive")
    rng = np.random.default_rng(seed)
    w = rng.standard_normal(M)
    return w / np.linalg.norm(w)


def simulate_channel(u, w_o):
    """Noiseless channel output d_clean(n) = u(n)^T w_o with zero history."""
    u = np.asarray(u, dtype=float)
    w_o = np.asarray(w_o, dtype=float)
    if u.ndim != 1 or w_o.ndim != 1 or u.size == 0 or w_o.size == 0:
        raise ValueError("u and w_o must be non-empty 1-D arrays")
    return np.convolve(u, w_o)[: u.size]


def add_noise_snr(d_clean, snr_db, seed=None):
    """Add white Gaussian noise at a given SNR relative to ``d_clean``'s power.

    ``snr_db = inf`` adds nothing and reports zero noise variance.

    Returns
    -------
    d : ndarray
        ``d_clean + v`` with ``v ~ N(0, noise_variance)``.
    noise_variance : float
        ``mean(d_clean**2) / 10**(snr_db / 10)``.
    """
    d_clean = np.asarray(d_clean, dtype=float)
    if d_clean.size == 0:
        raise ValueError("d_clean is empty")
    power = float(np.mean(d_clean**2))
    if power == 0.0:
        raise ValueError("d_clean has zero power; SNR is undefined")
    if np.isposinf(snr_db):
        return d_clean.copy(), 0.0
    noise_variance = power / 10.0 ** (snr_db / 10.0)
    rng = np.random.default_rng(seed)
    v = np.sqrt(noise_variance) * rng.standard_normal(d_clean.size)
    return d_clean + v, noise_variance
