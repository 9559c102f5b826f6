"""Pick the number of control qubits b and the repetition threshold T.

To recognize and identify inputs with up to eps*n corrupted bits with
efficiency nu, b must satisfy D(b, d) - eps <= 1 - nu with d = round(eps*n),
and T must satisfy T >= 1 / cos^{2b}(pi D / 2).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .thermo import AverageModel, effective_distance

MAX_T = 2**63 - 1


class InfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class TunePlan:
    epsilon: float
    nu: float
    n: int
    d: int
    b: int
    achieved_d: float
    log10_t_bound: float
    T: int | None  # None when the bound exceeds MAX_T

    @property
    def practical(self) -> bool:
        return self.T is not None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["practical"] = self.practical
        return out


def threshold_for(b: int, achieved_d: float) -> tuple[int | None, float]:
    """Smallest integer T with T cos^{2b}(pi D / 2) >= 1, plus log10 of the bound."""
    log_bound = -2.0 * b * math.log(math.cos(math.pi * achieved_d / 2.0))
    log10 = log_bound / math.log(10.0)
    if log_bound >= math.log(MAX_T):
        return None, log10
    T = max(1, math.ceil(math.exp(log_bound)))
    while math.log(T) < log_bound:
        T += 1
    return T, log10


def tune(n: int, epsilon: float, nu: float, mode: str = "sum",
         max_b: int = 2**40) -> TunePlan:
    if not 0 <= epsilon < 1:
        raise ValueError(f"epsilon must lie in [0, 1), got {epsilon}")
    if not 0 <= nu <= 1:
        raise ValueError(f"nu must lie in [0, 1], got {nu}")
    model = AverageModel.from_fraction(n, epsilon, mode)
    slack = 1.0 - nu

    def ok(b: int) -> bool:
        return effective_distance(model, b) - epsilon <= slack

    # D decreases towards d/n but never reaches it at finite b
    if model.delta - epsilon >= slack:
        raise InfeasibleError(
            f"D(b) stays above d/n = {model.delta:.6g}; "
            f"D - epsilon <= {slack:.6g} cannot be met at any finite b"
        )

    hi = 1
    while not ok(hi):
        hi *= 2
        if hi > max_b:
            raise InfeasibleError(f"no b <= {max_b} meets the identification criterion")
    lo = hi // 2  # fails (or is 0)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    achieved = effective_distance(model, hi)
    T, log10 = threshold_for(hi, achieved)
    return TunePlan(epsilon=epsilon, nu=nu, n=n, d=model.d, b=hi,
                    achieved_d=achieved, log10_t_bound=log10, T=T)
