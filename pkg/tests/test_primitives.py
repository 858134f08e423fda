import itertools
import math
from fractions import Fraction

import pytest

from earac.bloch import dot
from earac.exactnum import ExactValue, ONE, compare
from earac.primitives import (E2, E3, alice_basis, bob_basis, decode_guess,
                              exact_dot, node_output, qrac_codeword)

S2 = 1 / math.sqrt(2)
S3 = 1 / math.sqrt(3)


def test_alice_basis_e2():
    v = alice_basis(E2, (0, 1))
    assert (v.x, v.y, v.z) == pytest.approx((S2, -S2, 0))
    assert alice_basis(E2, (1, 0)) == v  # depends only on the XOR
    assert alice_basis(E2, (0, 0)) == alice_basis(E2, (1, 1))


def test_alice_basis_e3_table():
    assert alice_basis(E3, (0, 0, 0)).components() == pytest.approx((S3, S3, S3))
    assert alice_basis(E3, (0, 0, 1)).components() == pytest.approx((S3, S3, -S3))
    assert alice_basis(E3, (0, 1, 1)).components() == pytest.approx((S3, -S3, -S3))
    assert alice_basis(E3, (1, 0, 1)).components() == pytest.approx((S3, -S3, S3))


def test_alice_basis_e3_global_flip_invariant():
    for bits in itertools.product((0, 1), repeat=3):
        flipped = tuple(1 - b for b in bits)
        assert alice_basis(E3, bits) == alice_basis(E3, flipped)


def test_alice_basis_arity():
    with pytest.raises(ValueError):
        alice_basis(E2, (0, 1, 0))
    with pytest.raises(ValueError):
        alice_basis(E3, (0, 1))


def test_bob_basis():
    assert bob_basis(E2, 1).components() == (0, 1, 0)
    assert bob_basis(E3, 2).components() == (0, 0, 1)
    with pytest.raises(ValueError):
        bob_basis(E2, 2)


def test_bob_bases_orthogonal():
    for kind in (E2, E3):
        for a, b in itertools.combinations(range(kind.arity), 2):
            assert dot(bob_basis(kind, a), bob_basis(kind, b)) == 0.0


def test_node_output():
    assert node_output((1, 0), 1) == 0
    assert node_output((0, 1, 1), 0) == 0
    assert node_output((1, 1), 0) == 1


def test_decode_guess():
    assert decode_guess(1, [0, 1]) == 0
    assert decode_guess(0, []) == 0
    assert decode_guess(1, [1, 1, 1]) == 0


def test_dot_magnitudes():
    for kind, mag in ((E2, S2), (E3, S3)):
        for bits in itertools.product((0, 1), repeat=kind.arity):
            for q in range(kind.arity):
                d = dot(alice_basis(kind, bits), bob_basis(kind, q))
                assert abs(abs(d) - mag) < 1e-12


def exact_single_primitive_probability(kind, bits, query):
    """Exact success probability by enumerating both outcomes jointly:
    P(A, B) = (1 + (-1)^(A^B) a.b)/4, success iff message ^ B = a_query."""
    d = exact_dot(kind, bits, query)
    total = ExactValue()
    for a_out in (0, 1):
        for b_out in (0, 1):
            signed = d if a_out == b_out else -d
            weight = (ONE + signed) * Fraction(1, 4)
            message = node_output(bits, a_out)
            if decode_guess(message, [b_out]) == bits[query]:
                total = total + weight
    return total


def test_single_primitive_law_exhaustive():
    # every input/query combination hits the same exact success probability
    p2 = (ONE + ExactValue(c2=Fraction(1, 2))) * Fraction(1, 2)
    p3 = (ONE + ExactValue(c3=Fraction(1, 3))) * Fraction(1, 2)
    for kind, expected in ((E2, p2), (E3, p3)):
        for bits in itertools.product((0, 1), repeat=kind.arity):
            for q in range(kind.arity):
                got = exact_single_primitive_probability(kind, bits, q)
                assert compare(got, expected) == 0, (kind, bits, q)


def test_qrac_codeword_signs():
    v = qrac_codeword(E2, (1, 0))
    assert v.components() == pytest.approx((-S2, S2, 0))
    v = qrac_codeword(E3, (1, 1, 0))
    assert v.components() == pytest.approx((-S3, -S3, S3))
