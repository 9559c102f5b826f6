"""Exact state-vector simulation of the retrieval circuit.

The state is kept sparse in the memory register: only labels reachable from
the stored patterns are tracked, each with a dense block of 2^b control
amplitudes. The input register is never acted on, so it is held as classical
metadata. Control qubit c_l is bit l-1 of the control index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .patterns import BinaryPattern, MemoryInstance, _check_width

DEFAULT_CAP = 2**24


class ResourceCapError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuantumState:
    n: int
    b: int
    labels: tuple[int, ...]
    amplitudes: np.ndarray  # shape (len(labels), 2**b)
    input: BinaryPattern
    transformed: bool = False
    collapsed_on: int | None = None
    _zeros: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.amplitudes.shape != (len(self.labels), 1 << self.b):
            raise ValueError("amplitude table does not match labels and b")
        if self._zeros is None:
            zeros = np.array([self.n - lab.bit_count() for lab in self.labels], dtype=float)
            object.__setattr__(self, "_zeros", zeros)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def amplitude(self, memory: BinaryPattern | int, control: int) -> complex:
        label = memory.value if isinstance(memory, BinaryPattern) else memory
        try:
            row = self.labels.index(label)
        except ValueError:
            return 0j
        return complex(self.amplitudes[row, control])

    def items(self):
        """Yield ((memory label, control index), amplitude) for every nonzero entry."""
        rows, cols = np.nonzero(self.amplitudes)
        for r, c in zip(rows, cols):
            yield (self.labels[r], int(c)), complex(self.amplitudes[r, c])

    def control_marginal(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=0)


def _check_round(state: QuantumState, l: int):
    if not 1 <= l <= state.b:
        raise ValueError(f"round index must be in [1, {state.b}], got {l}")


def control_string(c: int, b: int) -> str:
    """Control index as 'c_1 c_2 ... c_b'."""
    return "".join(str((c >> k) & 1) for k in range(b))


def prepare_initial(mem: MemoryInstance, input: BinaryPattern, b: int,
                    cap: int = DEFAULT_CAP) -> QuantumState:
    """Uniform superposition of the stored patterns with every control qubit in |0>.

    Duplicate patterns add their amplitudes coherently; the result is then
    renormalized, so a label stored m times carries weight proportional to m^2.
    """
    if b < 1:
        raise ValueError(f"need at least one control qubit, got b={b}")
    _check_width(mem.n, input.n)
    labels: dict[int, int] = {}
    for pattern in mem:
        labels[pattern.value] = labels.get(pattern.value, 0) + 1
    if len(labels) * (1 << b) > cap:
        raise ResourceCapError(
            f"{len(labels)} labels x 2^{b} control states exceeds the cap of {cap} amplitudes"
        )
    amps = np.zeros((len(labels), 1 << b), dtype=complex)
    mult = np.array(list(labels.values()), dtype=float)
    amps[:, 0] = mult / math.sqrt(mem.p)
    amps /= math.sqrt(np.sum(np.abs(amps) ** 2))
    return QuantumState(mem.n, b, tuple(labels), amps, input)


def apply_hadamard_control(state: QuantumState, l: int) -> QuantumState:
    _check_round(state, l)
    k = l - 1
    a = state.amplitudes.reshape(len(state.labels), 1 << (state.b - k - 1), 2, 1 << k)
    out = np.empty_like(a)
    out[:, :, 0, :] = (a[:, :, 0, :] + a[:, :, 1, :]) / math.sqrt(2)
    out[:, :, 1, :] = (a[:, :, 0, :] - a[:, :, 1, :]) / math.sqrt(2)
    return replace(state, amplitudes=out.reshape(state.amplitudes.shape))


def _relabel(state: QuantumState, labels: tuple[int, ...], transformed: bool) -> QuantumState:
    return replace(state, labels=labels, transformed=transformed, _zeros=None)


def apply_distance_transform(state: QuantumState) -> QuantumState:
    """XOR each memory qubit with the matching input qubit, then NOT it.

    Afterwards memory bit j is 1 exactly when the stored bit agrees with the input.
    """
    mask = (1 << state.n) - 1
    x = state.input.value
    labels = tuple(~(lab ^ x) & mask for lab in state.labels)
    return _relabel(state, labels, True)


def apply_inverse_distance_transform(state: QuantumState) -> QuantumState:
    """NOT each memory qubit, then XOR it with the input qubit (qubits n..1)."""
    mask = (1 << state.n) - 1
    x = state.input.value
    labels = tuple((~lab & mask) ^ x for lab in state.labels)
    return _relabel(state, labels, False)


def apply_phase(state: QuantumState, l: int) -> QuantumState:
    """exp(i pi H / 2n) with H = (number of zeros in memory) x sigma_z on c_l."""
    _check_round(state, l)
    if not state.transformed:
        raise ValueError("phase gate expects the distance-transformed memory register")
    theta = np.pi * state._zeros / (2 * state.n)
    sign = np.where((np.arange(1 << state.b) >> (l - 1)) & 1, -1.0, 1.0)
    phase = np.exp(1j * np.outer(theta, sign))
    return replace(state, amplitudes=state.amplitudes * phase)


def run_round(state: QuantumState, l: int) -> QuantumState:
    state = apply_hadamard_control(state, l)
    state = apply_distance_transform(state)
    state = apply_phase(state, l)
    state = apply_inverse_distance_transform(state)
    return apply_hadamard_control(state, l)


def run_all_rounds(mem: MemoryInstance, input: BinaryPattern, b: int,
                   cap: int = DEFAULT_CAP) -> QuantumState:
    state = prepare_initial(mem, input, b, cap=cap)
    for l in range(1, b + 1):
        state = run_round(state, l)
    return state


def probability_all_zeros(state: QuantumState) -> float:
    return float(np.sum(np.abs(state.amplitudes[:, 0]) ** 2))


def measure_control(state: QuantumState, rng: np.random.Generator):
    """Measure the whole control register.

    Returns (outcome as a c_1..c_b bitstring, collapsed state, P(all zeros)).
    """
    probs = state.control_marginal()
    outcome = int(rng.choice(probs.size, p=probs / probs.sum()))
    return control_string(outcome, state.b), collapse(state, outcome), probability_all_zeros(state)


def collapse(state: QuantumState, outcome: int) -> QuantumState:
    """Project onto control index `outcome` and renormalize."""
    column = state.amplitudes[:, outcome]
    weight = float(np.sum(np.abs(column) ** 2))
    if weight == 0.0:
        raise ValueError(f"control outcome {control_string(outcome, state.b)} has probability 0")
    amps = np.zeros_like(state.amplitudes)
    amps[:, outcome] = column / math.sqrt(weight)
    return replace(state, amplitudes=amps, collapsed_on=outcome)


def memory_distribution(collapsed: QuantumState) -> dict[BinaryPattern, float]:
    """Readout probabilities of the memory register after an all-zeros control outcome."""
    if collapsed.collapsed_on != 0:
        raise ValueError("memory readout is only defined after the all-zeros control outcome")
    if collapsed.transformed:
        raise ValueError("memory register is still distance-transformed")
    probs = np.abs(collapsed.amplitudes[:, 0]) ** 2
    return {BinaryPattern(lab, collapsed.n): float(pr) for lab, pr in zip(collapsed.labels, probs)}
