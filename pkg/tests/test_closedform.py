import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qassoc import closedform as cf
from qassoc.patterns import BinaryPattern, DistanceSpectrum


def spec(counts, n):
    return DistanceSpectrum(counts, n)


def mp_weight(j, n, b):
    return mpmath.cos(mpmath.pi * j / (2 * n)) ** (2 * b) if j < n or b == 0 else mpmath.mpf(0)


@pytest.mark.parametrize("b", [0, 1, 5, 100_000])
def test_recognition_all_at_zero(b):
    assert cf.recognition_probability(spec({0: 7}, 10), b) == 1.0


def test_recognition_all_at_n():
    assert cf.recognition_probability(spec({10: 3}, 10), 1) == 0.0
    assert cf.recognition_probability(spec({10: 3}, 10), 0) == 1.0


def test_recognition_n2_example():
    assert cf.recognition_probability(spec({0: 1, 1: 1}, 2), 2) == pytest.approx(0.625, abs=1e-15)


def test_recognition_large_b_against_mpmath():
    mpmath.mp.dps = 40
    counts = {3: 2, 50: 1, 400: 4, 999: 1}
    n, b = 1000, 30_000
    expected = sum(c * mp_weight(j, n, b) for j, c in counts.items()) / 8
    assert cf.recognition_probability(spec(counts, n), b) == pytest.approx(float(expected), rel=1e-10)


def test_retrieval_uniform_at_b0():
    stats = cf.retrieval_distribution([0, 3, 5, 5], 5, 0)
    assert np.allclose(stats.per_pattern, 0.25)
    assert stats.z == 4.0


def test_retrieval_n4_example():
    stats = cf.retrieval_distribution([1, 2], 4, 1)
    assert stats.per_pattern == pytest.approx([0.630601937481870, 0.369398062518129], abs=1e-4)
    assert stats.per_pattern[0] / stats.per_pattern[1] == pytest.approx(1.7071067811865475, rel=1e-13)


def test_retrieval_concentrates_with_b():
    p = cf.retrieval_distribution([1, 2, 2], 10, 100_000).per_pattern
    assert p == pytest.approx([1.0, 0.0, 0.0], abs=1e-12)


def test_retrieval_never_recognized():
    with pytest.raises(cf.NeverRecognizedError):
        cf.retrieval_distribution([4, 4], 4, 1)


def test_z_equals_p_times_prec(rng):
    for _ in range(50):
        n = int(rng.integers(1, 60))
        d = rng.integers(0, n + 1, size=int(rng.integers(1, 20)))
        b = int(rng.integers(0, 50))
        counts = {}
        for j in d:
            counts[int(j)] = counts.get(int(j), 0) + 1
        p_rec = cf.recognition_probability(spec(counts, n), b)
        if np.all(d == n) and b > 0:
            assert p_rec == 0.0
            continue
        stats = cf.retrieval_distribution(d, n, b)
        assert stats.z == pytest.approx(d.size * p_rec, rel=1e-13, abs=1e-300)
        assert stats.p_rec == pytest.approx(p_rec, rel=1e-13, abs=1e-300)
        assert stats.per_pattern.sum() == pytest.approx(1.0, abs=1e-13)


@given(st.integers(2, 200), st.integers(1, 2000), st.data())
def test_monotone_in_distance(n, b, data):
    d = data.draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=8))
    p = cf.retrieval_distribution(d, n, b).per_pattern
    for i in range(len(d)):
        for k in range(len(d)):
            if d[i] < d[k] and p[k] > 0:
                assert p[i] > p[k]


def test_asymptotic_examples():
    assert list(cf.asymptotic_distribution([3, 1, 4])) == [0, 1, 0]
    assert list(cf.asymptotic_distribution([2, 2])) == [0.5, 0.5]


def test_asymptotic_is_limit():
    mpmath.mp.dps = 30
    limit = cf.asymptotic_distribution([1, 2])
    for b in (10_000, 50_000):
        r = mp_weight(2, 100, b) / mp_weight(1, 100, b)
        gap = float(r / (1 + r))  # mass left on the farther pattern
        p = cf.retrieval_distribution([1, 2], 100, b).per_pattern
        assert np.max(np.abs(p - limit)) == pytest.approx(gap, rel=1e-9)
    assert gap < 1e-6


def test_energy_levels():
    assert cf.energy_level(0, 17) == 0.0
    assert cf.energy_level(17, 17) == math.inf
    assert cf.energy_level(1, 10) == pytest.approx(math.pi**2 / 4 * 0.01, rel=0.02)
    levels = cf.energy_level(np.arange(11), 10)
    assert np.all(np.diff(levels) > 0)
    assert np.all(levels[1:] > 0)


def test_energy_small_distance_expansion():
    for x in (0.001, 0.01, 0.05):
        n = 100_000
        e = cf.energy_level(int(x * n), n)
        approx = math.pi**2 / 4 * x**2
        assert abs(e / approx - 1) <= x**2
        assert e / approx - 1 == pytest.approx(math.pi**2 / 24 * x**2, rel=0.01)


def test_ising_examples():
    n = 12
    assert cf.ising_energy(BinaryPattern(0, n)) == 0.0
    assert cf.ising_energy(BinaryPattern.from_string("000000111111")) == math.pi**2 / 16


def test_ising_matches_squared_distance(rng):
    for _ in range(200):
        n = int(rng.integers(1, 300))
        v = int(rng.integers(0, 2, size=n) @ (1 << np.arange(n, dtype=object)))
        p = BinaryPattern(v, n)
        assert cf.ising_energy(p) == pytest.approx(math.pi**2 / 4 * (p.popcount() / n) ** 2,
                                                   abs=1e-12)


def test_gibbs_form():
    d = [0, 1, 3, 3, 7, 10]
    n, b = 10, 4
    p = cf.retrieval_distribution(d, n, b).per_pattern
    e = cf.energy_level(np.array(d), n)
    assert np.max(np.abs(p - cf.boltzmann_weights(e, b))) < 1e-14
