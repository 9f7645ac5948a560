"""Cosine-modulated analysis filter bank and subband block construction.

The bank is a pseudo-QMF design: a single Hamming-windowed lowpass prototype
``p`` is modulated into ``N`` bandpass filters

    h_i(n) = 2 p(n) cos((2i + 1) pi / (2N) (n - (Lp - 1) / 2) + (-1)^i pi / 4)

Each fullband signal is filtered by every h_i. Decimation keeps the samples
at n = kN, k = 0, 1, ...
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import brentq
from scipy.signal import firwin, freqz

__all__ = [
    "AnalysisBank",
    "SubbandBlock",
    "BlockSequence",
    "design_prototype",
    "modulate",
    "design_cosine_modulated_bank",
    "analyze",
    "analyze_decimate",
    "make_blocks",
    "dump_bank_csv",
]


def _prototype(num_taps, cutoff):
    p = firwin(num_taps, cutoff, window="hamming", scale=False)
    return p / p.sum()


def design_prototype(N, prototype_len):
    """Hamming-windowed lowpass prototype for an ``N``-band pseudo-QMF bank.

    The cutoff is tuned so that the prototype's magnitude at pi/(2N) is
    1/sqrt(2) of its DC gain, which makes adjacent bands cross at -3 dB and
    the bank approximately power complementary. DC gain is 1.
    """
    target = np.pi / (2 * N)

    def crossing_gap(cutoff):
        p = _prototype(prototype_len, cutoff)
        _, H = freqz(p, worN=[target])
        return abs(H[0]) - np.sqrt(0.5)

    # firwin cutoff is normalized to Nyquist
    cutoff = brentq(crossing_gap, 0.5 / (2 * N), min(0.99, 2.0 / (2 * N)), xtol=1e-12)
    return _prototype(prototype_len, cutoff)


def modulate(prototype, N):
    """Cosine-modulate ``prototype`` into an ``(N, len(prototype))`` filter array."""
    prototype = np.asarray(prototype, dtype=float)
    Lp = prototype.size
    n = np.arange(Lp) - (Lp - 1) / 2
    i = np.arange(N)[:, None]
    phase = (2 * i + 1) * np.pi / (2 * N) * n + (-1.0) ** i * np.pi / 4
    return 2.0 * prototype * np.cos(phase)


@dataclass(frozen=True)
class AnalysisBank:
    """``N`` analysis filters derived from one lowpass prototype."""

    N: int
    prototype: np.ndarray
    filters: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.filters.shape != (self.N, self.prototype.size):
            raise ValueError("filters must have shape (N, len(prototype))")

    @property
    def length(self) -> int:
        return self.prototype.size

    def frequency_response(self, worN=512):
        """Return ``(w, H)`` with ``H`` of shape ``(N, len(w))`` over [0, pi)."""
        H = []
        for h in self.filters:
            w, Hi = freqz(h, worN=worN)
            H.append(Hi)
        return w, np.array(H)


def design_cosine_modulated_bank(N, prototype_len=None):
    """Design an ``N``-band pseudo-QMF analysis bank.

    Parameters
    ----------
    N : int
        Number of subbands, at least 2.
    prototype_len : int, optional
        Prototype (and filter) length; must be a multiple of ``2N``.
        Defaults to ``8N``.
    """
    N = int(N)
    if N < 2:
        raise ValueError("N must be at least 2")
    if prototype_len is None:
        prototype_len = 8 * N
    prototype_len = int(prototype_len)
    if prototype_len <= 0 or prototype_len % (2 * N):
        raise ValueError("prototype_len must be a positive multiple of 2N")
    p = design_prototype(N, prototype_len)
    return AnalysisBank(N=N, prototype=p, filters=modulate(p, N))


def analyze(bank, x):
    """Full-rate subband signals, shape ``(N, len(x))``, zero initial history."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("x must be a non-empty 1-D array")
    return np.stack([np.convolve(x, h)[: x.size] for h in bank.filters])


def analyze_decimate(bank, x):
    """Filter ``x`` with every analysis filter and keep samples n = 0, N, 2N, ...

    Returns an ``(N, ceil(len(x) / N))`` array.
    """
    return analyze(bank, x)[:, :: bank.N]


@dataclass(frozen=True)
class SubbandBlock:
    """Everything one adaptation step at decimated index ``k`` needs.

    ``regressors[i]`` is u_i(k) = [u_i(kN), u_i(kN-1), ..., u_i(kN-M+1)] and
    ``desired[i]`` is d_i(kN).
    """

    k: int
    regressors: np.ndarray
    desired: np.ndarray

    @property
    def N(self) -> int:
        return self.regressors.shape[0]

    @property
    def M(self) -> int:
        return self.regressors.shape[1]


class BlockSequence:
    """Indexable sequence of :class:`SubbandBlock` backed by stacked arrays.

    ``regressors`` has shape ``(K, N, M)`` and ``desired`` shape ``(K, N)``.
    """

    def __init__(self, regressors, desired):
        regressors = np.asarray(regressors, dtype=float)
        desired = np.asarray(desired, dtype=float)
        if regressors.ndim != 3 or desired.shape != regressors.shape[:2]:
            raise ValueError("inconsistent block array shapes")
        self.regressors = regressors
        self.desired = desired

    def __len__(self):
        return self.regressors.shape[0]

    def __getitem__(self, k):
        if isinstance(k, slice):
            return BlockSequence(self.regressors[k], self.desired[k])
        k = range(len(self))[k]
        return SubbandBlock(k, self.regressors[k], self.desired[k])

    def __iter__(self):
        for k in range(len(self)):
            yield self[k]

    @property
    def N(self) -> int:
        return self.regressors.shape[1]

    @property
    def M(self) -> int:
        return self.regressors.shape[2]


def make_blocks(bank, u, d, M):
    """Split ``u`` and ``d`` into subbands and assemble per-block regressors.

    Regressors are taken from the undecimated subband input, so consecutive
    blocks shift by ``N`` fullband samples. Samples before n = 0 are zero.
    """
    u = np.asarray(u, dtype=float)
    d = np.asarray(d, dtype=float)
    if u.shape != d.shape:
        raise ValueError("u and d must have the same length")
    M = int(M)
    if M <= 0:
        raise ValueError("M must be positive")
    N = bank.N
    u_sub = analyze(bank, u)
    d_sub = analyze(bank, d)
    padded = np.concatenate([np.zeros((N, M - 1)), u_sub], axis=1)
    K = (u.size - 1) // N + 1
    # padded column c holds u_i(c - M + 1); regressor lag m sits at kN - m + M - 1
    cols = (np.arange(K) * N)[:, None] + (M - 1) - np.arange(M)[None, :]
    regressors = padded[:, cols].transpose(1, 0, 2)
    return BlockSequence(regressors, d_sub[:, ::N].T)


def dump_bank_csv(bank, path, worN=512):
    """Write taps and magnitude responses as two CSV files.

    ``path`` receives ``tap_index,h0..h{N-1}``; a sibling file with suffix
    ``_response.csv`` receives ``omega,h0..h{N-1}`` magnitudes.
    """
    path = Path(path)
    header = [f"h{i}" for i in range(bank.N)]
    with path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["tap_index", *header])
        for n, row in enumerate(bank.filters.T):
            writer.writerow([n, *(repr(float(v)) for v in row)])
    w, H = bank.frequency_response(worN)
    resp = path.with_name(path.stem + "_response.csv")
    with resp.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["omega", *header])
        for j in range(w.size):
            writer.writerow([repr(float(w[j])), *(repr(float(v)) for v in np.abs(H[:, j]))])
    return path, resp
