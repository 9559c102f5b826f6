"""Measurement statistics and energy levels of the retrieval circuit, evaluated directly.

Every power cos^{2b}(pi j / 2n) goes through its logarithm, so b in the
10^5 range neither underflows prematurely nor loses relative precision.
The level j = n has cos = 0 exactly; its weight is 0 for b > 0 and 1 for
b = 0 (the 0^0 = 1 convention), so b = 0 is the uniform distribution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .patterns import BinaryPattern, DistanceSpectrum, MemoryInstance, distances as _distances


class NeverRecognizedError(ValueError):
    """Every stored pattern sits at distance n, so the all-zeros outcome has probability 0."""


def log_cos(j, n):
    """ln cos(pi j / 2n) for 0 <= j <= n, with -inf at j = n.

    Evaluated as ln sin(pi (n - j) / 2n) so levels close to n keep full
    relative precision.
    """
    j = np.asarray(j, dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(np.sin(np.pi * (n - j) / (2 * n)))


def log_weight(j, n, b):
    """ln cos^{2b}(pi j / 2n) with 0^0 = 1 at b = 0."""
    lc = log_cos(j, n)
    if b == 0:
        return np.zeros_like(lc)
    return 2.0 * b * lc


def energy_level(dh, n):
    """E = -2 ln cos(pi dh / 2n); +inf at dh = n."""
    e = -2.0 * log_cos(dh, n)
    return float(e) if np.ndim(e) == 0 else e


def ising_energy(pattern: BinaryPattern) -> float:
    """Energy of a normalized pattern written as an infinite-range Ising model.

    Spins are -1/2 for a 0 bit and +1/2 for a 1 bit. The three terms
    pi^2/16 + pi^2/(4n^2) (sum s)^2 + pi^2/(4n) sum s are factored as
    pi^2/16 (1 + 4m^2 + 4m) with m = sum(s)/n, which keeps the ferromagnetic
    (m = -1/2) and balanced (m = 0) configurations exact in floating point.
    """
    n = pattern.n
    m = (2 * pattern.popcount() - n) / (2 * n)
    return math.pi**2 / 16 * (1.0 + 4.0 * m * m + 4.0 * m)


def _spectrum_arrays(spectrum: DistanceSpectrum):
    levels = spectrum.levels()
    j = np.array([lv for lv, _ in levels], dtype=float)
    c = np.array([cnt for _, cnt in levels], dtype=float)
    return j, c


def recognition_probability(spectrum: DistanceSpectrum, b: int) -> float:
    """Probability that all b control qubits read 0."""
    if b < 0:
        raise ValueError(f"b must be non-negative, got {b}")
    j, c = _spectrum_arrays(spectrum)
    z = float(np.sum(c * np.exp(log_weight(j, spectrum.n, b))))
    return min(z / spectrum.p, 1.0)


@dataclass(frozen=True)
class RetrievalStats:
    p_rec: float
    z: float
    log_z: float
    per_pattern: np.ndarray


def retrieval_distribution(distances: Sequence[int], n: int, b: int) -> RetrievalStats:
    """Output distribution over stored patterns once the input is recognized.

    `distances` holds d_H(input, p^k) for each stored pattern k; the returned
    `per_pattern` is aligned with it.
    """
    if b < 0:
        raise ValueError(f"b must be non-negative, got {b}")
    d = np.asarray(distances, dtype=float)
    if d.size == 0:
        raise ValueError("no stored patterns")
    if np.any((d < 0) | (d > n)):
        raise ValueError(f"distances must lie in [0, {n}]")
    lw = log_weight(d, n, b)
    log_z = float(logsumexp(lw))
    if log_z == -np.inf:
        raise NeverRecognizedError(
            "all stored patterns are at distance n; recognition probability is 0"
        )
    per_pattern = np.exp(lw - log_z)
    z = float(np.sum(np.exp(lw)))
    return RetrievalStats(p_rec=z / d.size, z=z, log_z=log_z, per_pattern=per_pattern)


def retrieval_stats(mem: MemoryInstance, input: BinaryPattern, b: int) -> RetrievalStats:
    return retrieval_distribution(_distances(mem, input), mem.n, b)


def boltzmann_weights(energies, b):
    """exp(-b E_k) / sum_k exp(-b E_k), with infinite energies carrying weight 0."""
    e = np.asarray(energies, dtype=float)
    with np.errstate(invalid="ignore"):
        a = np.where(np.isinf(e), -np.inf, -b * e)
    return np.exp(a - logsumexp(a))


def asymptotic_distribution(distances: Sequence[int]) -> np.ndarray:
    """Large-b limit of the output distribution: uniform over the closest patterns."""
    d = np.asarray(distances)
    hit = d == d.min()
    return hit / hit.sum()
