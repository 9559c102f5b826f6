"""Thermodynamics of the averaged associative memory.

After averaging over how the stored patterns are spread across the distance
levels d..n (uniform over the probability simplex, whose mean weight is 1/M
per level), the relative partition function is

    z(b) = Z_av / p = (1/M) sum_{j=d}^{n} cos^{2b}(pi j / 2n),   M = n - d + 1,

and everything else follows from it at inverse temperature b = 1/t:

    F = -ln(z) / b,   U = <E>_b,   S = b (U - F),   D = (2/pi) arccos exp(-F/2).

Two evaluation modes are provided. ``"sum"`` evaluates the sum over levels
exactly in the log domain. ``"integral"`` replaces it by the continuum
average (1/(1 - d/n)) int_{d/n}^1 cos^{2b}(pi x / 2) dx, by adaptive
quadrature.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, TextIO

import numpy as np
from scipy import integrate, optimize

from .closedform import log_cos

MODES = ("sum", "integral")
CSV_COLUMNS = ("b", "F", "U", "S", "S_rescaled", "D")

_QUAD_EPSABS = 1e-13
_QUAD_EPSREL = 1e-12
_LOG_UNDERFLOW = -745.0


@dataclass(frozen=True)
class AverageModel:
    n: int
    d: int
    mode: str = "sum"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not 0 <= self.d <= self.n:
            raise ValueError(f"minimal distance d must lie in [0, n], got {self.d}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")

    @classmethod
    def from_fraction(cls, n: int, d_over_n: float, mode: str = "sum") -> AverageModel:
        return cls(n, int(math.floor(d_over_n * n + 0.5)), mode)

    @property
    def M(self) -> int:
        return self.n - self.d + 1

    @property
    def delta(self) -> float:
        return self.d / self.n

    @cached_property
    def _log_cos(self) -> np.ndarray:
        # levels d..n-1; the j = n level has weight 0 for every b > 0
        return log_cos(np.arange(self.d, self.n), self.n)

    def with_mode(self, mode: str) -> AverageModel:
        return AverageModel(self.n, self.d, mode)


def _check_b(b: float, strict: bool):
    if not math.isfinite(b) or b < 0 or (strict and b == 0):
        raise ValueError(f"inverse temperature must be {'> 0' if strict else '>= 0'}, got {b}")


# --- exact sum over levels -------------------------------------------------

def _sum_log_z_and_u(model: AverageModel, b: float) -> tuple[float, float]:
    lc = model._log_cos
    if lc.size == 0:
        return -math.inf, math.inf
    a = (2.0 * b) * lc
    top = a[0]  # cos is decreasing in j, so the first level dominates
    a -= top
    w = np.exp(a)
    s = w.sum()
    u = -2.0 * float(np.dot(w, lc)) / s
    return float(top + math.log(s) - math.log(model.M)), float(u)


# --- continuum integral ----------------------------------------------------

def _log_cos_x(x):
    return np.log(np.sin(np.pi * (1.0 - x) / 2.0))


def _segments(delta: float, b: float) -> list[float]:
    """Breakpoints on [delta, 1] growing geometrically from the peak at delta."""
    span = 1.0 - delta
    scales = [span, 1.0 / math.sqrt(b * math.pi**2 / 2.0)]
    slope = math.pi * math.tan(math.pi * delta / 2.0)  # dE/dx at delta
    if slope > 0:
        scales.append(1.0 / (b * slope))
    w = min(scales)
    edges = [delta]
    step = w
    while delta + step < 1.0:
        edges.append(delta + step)
        step *= 4.0
    edges.append(1.0)
    return edges


def _integral_log_z_and_u(model: AverageModel, b: float) -> tuple[float, float]:
    delta = model.delta
    if delta >= 1.0:
        return -math.inf, math.inf
    top = 2.0 * b * float(_log_cos_x(delta))

    def g(x):
        return math.exp(2.0 * b * _log_cos_x(x) - top)

    def eg(x):
        lc = _log_cos_x(x)
        return -2.0 * lc * math.exp(2.0 * b * lc - top)

    mass = 0.0
    energy = 0.0
    edges = _segments(delta, b)
    for lo, hi in zip(edges[:-1], edges[1:]):
        if 2.0 * b * _log_cos_x(lo) - top < _LOG_UNDERFLOW:
            break
        mass += integrate.quad(g, lo, hi, epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL, limit=200)[0]
        energy += integrate.quad(eg, lo, hi, epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL, limit=200)[0]
    return top + math.log(mass) - math.log1p(-delta), energy / mass


def _log_z_and_u(model: AverageModel, b: float) -> tuple[float, float]:
    if model.mode == "sum":
        return _sum_log_z_and_u(model, b)
    return _integral_log_z_and_u(model, b)


# --- public quantities -----------------------------------------------------

def log_z_relative(model: AverageModel, b: float) -> float:
    _check_b(b, strict=False)
    if b == 0:
        return 0.0
    return _log_z_and_u(model, b)[0]


def z_relative(model: AverageModel, b: float) -> float:
    """Z_av / p; exactly 1 at b = 0."""
    return math.exp(log_z_relative(model, b))


def free_energy(model: AverageModel, b: float) -> float:
    _check_b(b, strict=True)
    return -_log_z_and_u(model, b)[0] / b


def internal_energy(model: AverageModel, b: float) -> float:
    _check_b(b, strict=True)
    return _log_z_and_u(model, b)[1]


def entropy(model: AverageModel, b: float) -> float:
    """S = b (U - F), which equals -dF/dt with t = 1/b. Never positive."""
    return thermo_point(model, b).S


def distance_from_free_energy(F):
    """(2/pi) arccos exp(-F/2), via 2 arcsin sqrt((1 - e^{-F/2}) / 2) to keep small F accurate."""
    one_minus = -np.expm1(-np.asarray(F, dtype=float) / 2.0)
    d = (4.0 / np.pi) * np.arcsin(np.sqrt(np.clip(one_minus / 2.0, 0.0, 0.5)))
    return float(d) if np.ndim(d) == 0 else d


def effective_distance(model: AverageModel, b: float) -> float:
    return distance_from_free_energy(free_energy(model, b))


@dataclass(frozen=True)
class ThermoPoint:
    b: float
    z_rel: float
    F: float
    U: float
    S: float
    D: float


def thermo_point(model: AverageModel, b: float) -> ThermoPoint:
    _check_b(b, strict=True)
    log_z, u = _log_z_and_u(model, b)
    f = -log_z / b
    s = b * (u - f)
    return ThermoPoint(b=b, z_rel=math.exp(log_z), F=f, U=u, S=s, D=distance_from_free_energy(f))


# --- infinite temperature --------------------------------------------------

@dataclass(frozen=True)
class HighTempLimits:
    F: float
    D: float
    F_linear: float
    D_linear: float


def _int_log_sin(L: float) -> float:
    """int_0^L ln sin(pi u / 2) du, with the ln u singularity integrated analytically."""
    smooth = integrate.quad(lambda u: math.log(math.pi / 2 * np.sinc(u / 2)), 0.0, L,
                            epsabs=1e-14, epsrel=1e-13, limit=200)[0]
    return L * math.log(L) - L + smooth


def high_temperature_limits(model: AverageModel) -> HighTempLimits:
    """F and D as t -> infinity, where every level is equally occupied.

    F = U = -(2 / (1 - d/n)) int_{d/n}^1 ln cos(pi x / 2) dx. The linear
    forms are the first-order expansions in d/n:
    F ~ (1 + d/n) 2 ln 2 and D ~ 2/3 + (2 ln 2 / (pi sqrt 3)) d/n.
    """
    delta = model.delta
    if delta >= 1.0:
        raise ValueError("high-temperature limit needs d < n")
    span = 1.0 - delta
    f_inf = -2.0 * _int_log_sin(span) / span
    f_lin = (1.0 + delta) * 2.0 * math.log(2.0)
    d_lin = 2.0 / 3.0 + 2.0 * math.log(2.0) / (math.pi * math.sqrt(3.0)) * delta
    return HighTempLimits(F=f_inf, D=distance_from_free_energy(f_inf), F_linear=f_lin, D_linear=d_lin)


# --- sweeps ----------------------------------------------------------------

@dataclass
class SweepResult:
    model: AverageModel
    points: list[ThermoPoint]
    b_cr: float | None
    d_high_temp: float
    s_rescaled: np.ndarray = field(repr=False)

    def column(self, name: str) -> np.ndarray:
        if name == "S_rescaled":
            return self.s_rescaled
        return np.array([getattr(p, name) for p in self.points])

    def summary(self) -> dict:
        d = self.column("D")
        return {
            "n": self.model.n,
            "d": self.model.d,
            "mode": self.model.mode,
            "b_cr": self.b_cr,
            "D_low_b": float(d[0]),
            "D_high_b": float(d[-1]),
            "D_high_temp_limit": self.d_high_temp,
            "D_ordered_limit": self.model.delta,
        }


def log_grid(b_min: float, b_max: float, points_per_decade: int) -> np.ndarray:
    if not 0 < b_min < b_max:
        raise ValueError("need 0 < b_min < b_max")
    if points_per_decade < 1:
        raise ValueError("points_per_decade must be >= 1")
    decades = math.log10(b_max / b_min)
    count = int(round(decades * points_per_decade)) + 1
    return np.logspace(math.log10(b_min), math.log10(b_max), count)


def linear_grid(b_min: float, b_max: float, points: int) -> np.ndarray:
    if not 0 < b_min < b_max or points < 2:
        raise ValueError("need 0 < b_min < b_max and at least 2 points")
    return np.linspace(b_min, b_max, points)


def crossover(b: Sequence[float], D: Sequence[float], level: float) -> float | None:
    """First b where the (log b)-linear interpolant of D drops through `level`."""
    lb = np.log(np.asarray(b, dtype=float))
    D = np.asarray(D, dtype=float)
    below = np.nonzero(D < level)[0]
    if below.size == 0 or below[0] == 0:
        return None
    i = below[0]
    f = lambda x: np.interp(x, lb[i - 1:i + 1], D[i - 1:i + 1]) - level
    return float(math.exp(optimize.bisect(f, lb[i - 1], lb[i], xtol=1e-12)))


def sweep(model: AverageModel, b_grid: Iterable[float]) -> SweepResult:
    grid = np.asarray(list(b_grid), dtype=float)
    if grid.size == 0 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("b grid must be non-empty, positive and strictly increasing")
    points = [thermo_point(model, float(b)) for b in grid]
    S = np.array([p.S for p in points])
    s_min = S.min()
    s_rescaled = 1.0 - S / s_min if s_min < 0 else np.ones_like(S)
    d_inf = high_temperature_limits(model).D if model.d < model.n else 1.0
    b_cr = crossover(grid, [p.D for p in points], 0.5 * (d_inf + model.delta))
    return SweepResult(model, points, b_cr, d_inf, s_rescaled)


def write_csv(result: SweepResult, out: TextIO):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    cols = [result.column(c) for c in CSV_COLUMNS]
    for row in zip(*cols):
        writer.writerow([f"{v:.12g}" for v in row])


def read_csv(src: TextIO) -> dict[str, np.ndarray]:
    rows = list(csv.DictReader(src))
    return {c: np.array([float(r[c]) for r in rows]) for c in CSV_COLUMNS}
