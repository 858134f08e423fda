"""The two primitive codes: basis tables and the bit rules around them.

The 2-bit primitive encodes a0, a1 with a basis chosen by a0^a1; the 3-bit
primitive has four bases chosen by the agreement pattern of a0, a1, a2.
Bob's bases are the coordinate axes.  The message is always the first
input XOR Alice's outcome, and decoding XORs the message with Bob's
outcomes along the concatenation path.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from functools import reduce

from .bloch import BlochVector, dot
from .exactnum import ExactValue

_S2 = 1.0 / math.sqrt(2.0)
_S3 = 1.0 / math.sqrt(3.0)


class PrimitiveKind(enum.Enum):
    E2 = 2
    E3 = 3

    @property
    def arity(self) -> int:
        return self.value


E2 = PrimitiveKind.E2
E3 = PrimitiveKind.E3

# Alice's "+" vectors for the 2-bit code, indexed by a0^a1
_ALICE_E2 = (
    BlochVector(_S2, _S2, 0.0),
    BlochVector(_S2, -_S2, 0.0),
)

# Alice's "+" vectors for the 3-bit code, indexed by (a0^a1, a1^a2)
_ALICE_E3 = {
    (0, 0): BlochVector(_S3, _S3, _S3),
    (0, 1): BlochVector(_S3, _S3, -_S3),
    (1, 0): BlochVector(_S3, -_S3, -_S3),
    (1, 1): BlochVector(_S3, -_S3, _S3),
}

_BOB = (
    BlochVector(1.0, 0.0, 0.0),
    BlochVector(0.0, 1.0, 0.0),
    BlochVector(0.0, 0.0, 1.0),
)


def alice_basis(kind: PrimitiveKind, inputs: tuple[int, ...]) -> BlochVector:
    if len(inputs) != kind.arity:
        raise ValueError(f"{kind.name} expects {kind.arity} inputs, got {len(inputs)}")
    if kind is E2:
        a0, a1 = inputs
        return _ALICE_E2[a0 ^ a1]
    a0, a1, a2 = inputs
    return _ALICE_E3[(a0 ^ a1, a1 ^ a2)]


def bob_basis(kind: PrimitiveKind, query: int) -> BlochVector:
    if not 0 <= query < kind.arity:
        raise ValueError(f"query {query} out of range for {kind.name}")
    return _BOB[query]


def node_output(inputs: tuple[int, ...], alice_outcome: int) -> int:
    return inputs[0] ^ alice_outcome


def decode_guess(message: int, outcomes: list[int]) -> int:
    return reduce(lambda acc, b: acc ^ b, outcomes, message)


# magnitude of every Alice/Bob inner product, per kind
_DOT_MAG = {
    E2: ExactValue(c2=Fraction(1, 2)),
    E3: ExactValue(c3=Fraction(1, 3)),
}


def exact_dot(kind: PrimitiveKind, inputs: tuple[int, ...], query: int) -> ExactValue:
    """Exact Alice/Bob inner product: always +-1/sqrt2 or +-1/sqrt3."""
    d = dot(alice_basis(kind, inputs), bob_basis(kind, query))
    mag = _DOT_MAG[kind]
    return mag if d > 0 else -mag


def qrac_codeword(kind: PrimitiveKind, inputs: tuple[int, ...]) -> BlochVector:
    """The pure-state direction a quantum code would send for these inputs.

    It is the first-input-signed basis vector, so its components are
    ((-1)^a0, (-1)^a1, ...) up to normalization.
    """
    v = alice_basis(kind, inputs)
    return -v if inputs[0] else v
