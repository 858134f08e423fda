import math
import random

import pytest

from earac.bloch import (BlochVector, PairExhaustedError, ScriptedSource,
                         SingletSource, correlate, dot, steer_and_measure)

S2 = 1 / math.sqrt(2)
S3 = 1 / math.sqrt(3)
X = BlochVector(1, 0, 0)
Z = BlochVector(0, 0, 1)
DIAG = BlochVector(S2, S2, 0)

TRIALS = 100_000


def sigma(p, t=TRIALS):
    return math.sqrt(p * (1 - p) / t)


def test_normalization():
    v = BlochVector(3, 4, 0)
    assert math.isclose(v.x, 0.6) and math.isclose(v.y, 0.8)
    with pytest.raises(ValueError):
        BlochVector(0, 0, 0)


def test_dot_examples():
    assert dot(X, X) == 1.0
    assert math.isclose(dot(DIAG, X), S2)
    assert math.isclose(dot(BlochVector(S3, S3, -S3), Z), -S3)


def test_correlate_aligned():
    rng = random.Random(7)
    for _ in range(200):
        out = correlate(X, X, rng)
        assert out.a_outcome == out.b_outcome


def run_correlate(a, b, seed=11, trials=TRIALS):
    rng = random.Random(seed)
    agree = 0
    a_ones = 0
    b_ones = 0
    for _ in range(trials):
        out = correlate(a, b, rng)
        agree += out.a_outcome == out.b_outcome
        a_ones += out.a_outcome
        b_ones += out.b_outcome
    return agree / trials, a_ones / trials, b_ones / trials


def test_correlate_diagonal_statistics():
    p = 0.5 * (1 + S2)
    agree, _, _ = run_correlate(DIAG, X)
    assert abs(agree - p) < 4 * sigma(p)


def test_correlate_anti_diagonal_statistics():
    a = BlochVector(S3, S3, -S3)
    p_disagree = 0.5 * (1 + S3)  # dot is -1/sqrt3
    agree, _, _ = run_correlate(a, Z)
    assert abs((1 - agree) - p_disagree) < 4 * sigma(p_disagree)


def test_correlate_marginals_uniform():
    _, a_freq, b_freq = run_correlate(DIAG, Z, seed=3)
    assert abs(a_freq - 0.5) < 4 * sigma(0.5)
    assert abs(b_freq - 0.5) < 4 * sigma(0.5)


def test_correlate_symmetry():
    p1, _, _ = run_correlate(DIAG, X, seed=5)
    p2, _, _ = run_correlate(X, DIAG, seed=6)
    p = 0.5 * (1 + S2)
    assert abs(p1 - p2) < 8 * sigma(p)


def test_no_signaling_surrogate():
    # Alice's marginal cannot move when Bob's setting changes
    _, a1, _ = run_correlate(DIAG, X, seed=9)
    _, a2, _ = run_correlate(DIAG, Z, seed=10)
    assert abs(a1 - 0.5) < 4 * sigma(0.5)
    assert abs(a2 - 0.5) < 4 * sigma(0.5)


def test_steer_aligned():
    rng = random.Random(1)
    for _ in range(200):
        flip, outcome = steer_and_measure(X, X, rng)
        assert outcome ^ flip == 1


def test_steer_orthogonal():
    rng = random.Random(2)
    ones = sum((lambda fo: fo[1] ^ fo[0])(steer_and_measure(X, Z, rng))
               for _ in range(TRIALS))
    assert abs(ones / TRIALS - 0.5) < 4 * sigma(0.5)


def test_steer_matches_direct_measurement():
    p = 0.5 * (1 + S2)
    rng = random.Random(4)
    corrected = sum((lambda fo: fo[1] ^ fo[0])(steer_and_measure(DIAG, X, rng))
                    for _ in range(TRIALS))
    direct = sum(rng.random() < p for _ in range(TRIALS))
    assert abs(corrected / TRIALS - p) < 4 * sigma(p)
    assert abs(direct / TRIALS - p) < 4 * sigma(p)


def test_singlet_source_two_measurements_only():
    src = SingletSource(0)
    src.measure("p", X)
    src.measure("p", Z)
    with pytest.raises(PairExhaustedError):
        src.measure("p", X)


def test_singlet_source_aligned_pair_agrees():
    src = SingletSource(123)
    for i in range(500):
        first = src.measure(i, DIAG)
        assert src.measure(i, DIAG) == first


def test_singlet_source_reproducible():
    a = [SingletSource(42).measure(i, X) for i in range(50)]
    b = [SingletSource(42).measure(i, X) for i in range(50)]
    assert a == b


def test_scripted_source():
    src = ScriptedSource({"n": [1, 0]})
    assert src.measure("n", X) == 1
    assert src.measure("n", Z) == 0
    with pytest.raises(PairExhaustedError):
        src.measure("n", X)
    with pytest.raises(KeyError):
        src.measure("other", X)
