"""Binary patterns, Hamming distances and pattern-file ingestion.

Patterns are packed into a single Python integer so that the Hamming
distance is one XOR plus a popcount, independent of how wide the pattern
is. Character 0 of the textual form is the most significant bit.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, TextIO


class DimensionError(ValueError):
    """Patterns of different widths were combined."""


class PatternParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class BinaryPattern:
    value: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"pattern width must be positive, got {self.n}")
        if self.value < 0 or self.value >> self.n:
            raise ValueError(f"value does not fit in {self.n} bits")

    @classmethod
    def from_string(cls, text: str) -> BinaryPattern:
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a bitstring: {text!r}")
        return cls(int(text, 2), len(text))

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> BinaryPattern:
        value = 0
        for bit in bits:
            if bit not in (0, 1):
                raise ValueError(f"bits must be 0 or 1, got {bit!r}")
            value = (value << 1) | int(bit)
        return cls(value, len(bits))

    @classmethod
    def zeros(cls, n: int) -> BinaryPattern:
        return cls(0, n)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> (self.n - 1 - j)) & 1 for j in range(self.n))

    def popcount(self) -> int:
        return self.value.bit_count()

    def __xor__(self, other: BinaryPattern) -> BinaryPattern:
        _check_width(self.n, other.n)
        return BinaryPattern(self.value ^ other.value, self.n)

    def __str__(self) -> str:
        return format(self.value, f"0{self.n}b")

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class MemoryInstance:
    patterns: tuple[BinaryPattern, ...]

    def __post_init__(self):
        patterns = tuple(self.patterns)
        object.__setattr__(self, "patterns", patterns)
        if not patterns:
            raise ValueError("a memory needs at least one pattern")
        n = patterns[0].n
        for pattern in patterns[1:]:
            _check_width(n, pattern.n)

    @classmethod
    def from_strings(cls, lines: Iterable[str]) -> MemoryInstance:
        return cls(tuple(BinaryPattern.from_string(s) for s in lines))

    @property
    def n(self) -> int:
        return self.patterns[0].n

    @property
    def p(self) -> int:
        return len(self.patterns)

    def __iter__(self) -> Iterator[BinaryPattern]:
        return iter(self.patterns)

    def __len__(self) -> int:
        return len(self.patterns)


@dataclass(frozen=True)
class DistanceSpectrum:
    """Number of stored patterns at each Hamming distance from one input."""

    counts: dict[int, int]
    n: int

    def __post_init__(self):
        for j, c in self.counts.items():
            if not 0 <= j <= self.n:
                raise ValueError(f"distance {j} outside [0, {self.n}]")
            if c < 0:
                raise ValueError(f"negative count at distance {j}")

    @property
    def p(self) -> int:
        return sum(self.counts.values())

    def levels(self) -> list[tuple[int, int]]:
        return sorted((j, c) for j, c in self.counts.items() if c)

    def min_distance(self) -> int:
        return min(j for j, c in self.counts.items() if c)


def _check_width(n_a: int, n_b: int):
    if n_a != n_b:
        raise DimensionError(f"pattern widths differ: {n_a} != {n_b}")


def hamming_distance(a: BinaryPattern, b: BinaryPattern) -> int:
    _check_width(a.n, b.n)
    return (a.value ^ b.value).bit_count()


def distances(mem: MemoryInstance, input: BinaryPattern) -> list[int]:
    """Hamming distance from `input` to every stored pattern, in memory order."""
    _check_width(mem.n, input.n)
    x = input.value
    return [(pattern.value ^ x).bit_count() for pattern in mem]


def normalize_to_input(mem: MemoryInstance, input: BinaryPattern) -> MemoryInstance:
    """XOR every pattern with `input`, which moves the input to all-zeros."""
    _check_width(mem.n, input.n)
    return MemoryInstance(tuple(pattern ^ input for pattern in mem))


def distance_spectrum(mem: MemoryInstance, input: BinaryPattern) -> DistanceSpectrum:
    return DistanceSpectrum(dict(Counter(distances(mem, input))), mem.n)


def load_patterns(source: TextIO | Iterable[str]) -> MemoryInstance:
    """Read one bitstring per line. Blank lines and lines starting with '#' are skipped."""
    patterns: list[BinaryPattern] = []
    width = None
    lineno = 0
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\r\n").strip()
        if not line or line.startswith("#"):
            continue
        bad = set(line) - {"0", "1"}
        if bad:
            raise PatternParseError(lineno, f"illegal character(s) {''.join(sorted(bad))!r}")
        if width is None:
            width = len(line)
        elif len(line) != width:
            raise PatternParseError(lineno, f"expected {width} bits, found {len(line)}")
        patterns.append(BinaryPattern(int(line, 2), width))
    if not patterns:
        raise PatternParseError(max(lineno, 1), "no patterns found")
    return MemoryInstance(tuple(patterns))
