"""Monte Carlo of the repeat-until-success retrieval protocol.

Each attempt reruns the circuit on a fresh copy of the memory and succeeds
(all control qubits read 0) with the recognition probability. After at most
T attempts without success the input is rejected as non-recognized. Outcomes
are drawn from the closed-form distributions; the gate-level simulator is
only needed to check those.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .closedform import NeverRecognizedError, retrieval_stats
from .patterns import BinaryPattern, MemoryInstance


@dataclass(frozen=True)
class ProtocolResult:
    recognized: bool
    attempts_used: int
    output: BinaryPattern | None = None


@dataclass
class ProtocolStats:
    trials: int
    recognized: int
    recognition_rate: float
    mean_attempts: float
    mean_attempts_recognized: float | None
    output_histogram: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "recognized": self.recognized,
            "recognition_rate": self.recognition_rate,
            "mean_attempts": self.mean_attempts,
            "mean_attempts_recognized": self.mean_attempts_recognized,
            "output_histogram": dict(sorted(self.output_histogram.items())),
        }


class _Sampler:
    def __init__(self, mem: MemoryInstance, input: BinaryPattern, b: int):
        try:
            stats = retrieval_stats(mem, input, b)
        except NeverRecognizedError:
            self.q, self.cdf = 0.0, None
        else:
            self.q, self.cdf = stats.p_rec, np.cumsum(stats.per_pattern)
        self.mem = mem

    def run(self, T: int, rng: np.random.Generator) -> ProtocolResult:
        for attempt in range(1, T + 1):
            if rng.random() < self.q:
                k = int(np.searchsorted(self.cdf, rng.random() * self.cdf[-1], side="right"))
                return ProtocolResult(True, attempt, self.mem.patterns[min(k, len(self.cdf) - 1)])
        return ProtocolResult(False, T, None)


def _check(b: int, T: int):
    if T < 1:
        raise ValueError(f"threshold T must be >= 1, got {T}")
    if b < 1:
        raise ValueError(f"need at least one control qubit, got b={b}")


def run_protocol(mem: MemoryInstance, input: BinaryPattern, b: int, T: int,
                 rng: np.random.Generator) -> ProtocolResult:
    _check(b, T)
    return _Sampler(mem, input, b).run(T, rng)


def run_trials(mem: MemoryInstance, input: BinaryPattern, b: int, T: int,
               trials: int, seed: int) -> ProtocolStats:
    """Run the protocol `trials` times from one seeded generator."""
    _check(b, T)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    sampler = _Sampler(mem, input, b)
    rng = np.random.default_rng(seed)
    hist: Counter[str] = Counter()
    attempts_all = 0
    attempts_rec = 0
    for _ in range(trials):
        res = sampler.run(T, rng)
        attempts_all += res.attempts_used
        if res.recognized:
            attempts_rec += res.attempts_used
            hist[str(res.output)] += 1
    n_rec = sum(hist.values())
    return ProtocolStats(
        trials=trials,
        recognized=n_rec,
        recognition_rate=n_rec / trials,
        mean_attempts=attempts_all / trials,
        mean_attempts_recognized=attempts_rec / n_rec if n_rec else None,
        output_histogram=dict(hist),
    )


def recognition_within(q: float, T: int) -> float:
    """P(success within T i.i.d. attempts of success probability q)."""
    return -np.expm1(T * np.log1p(-q)) if q < 1 else 1.0


def expected_attempts(q: float, T: int) -> tuple[float, float | None]:
    """Mean attempts over all runs, and over recognized runs only.

    Attempts follow a geometric law truncated at T; a rejected run counts T.
    """
    if q <= 0:
        return float(T), None
    miss = (1 - q) ** T
    overall = (1 - miss) / q
    given = (1 / q - T * miss / (1 - miss))
    return overall, given
