"""Probabilistic quantum associative memory: exact simulation, closed-form
retrieval statistics and the thermodynamics of the averaged memory."""

from .patterns import (
    BinaryPattern,
    DimensionError,
    DistanceSpectrum,
    MemoryInstance,
    PatternParseError,
    distance_spectrum,
    hamming_distance,
    load_patterns,
    normalize_to_input,
)

__all__ = [
    "BinaryPattern",
    "DimensionError",
    "DistanceSpectrum",
    "MemoryInstance",
    "PatternParseError",
    "distance_spectrum",
    "hamming_distance",
    "load_patterns",
    "normalize_to_input",
]
__version__ = "0.1.0"
