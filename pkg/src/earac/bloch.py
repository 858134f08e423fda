"""Measurement directions and the classical singlet-correlation sampler.

The shared pair is simulated purely at the correlation level: the first
party's outcome is a uniform bit and the second party's outcome agrees
with it with probability (1 + a.b)/2, where a and b are the "+" Bloch
vectors of the two chosen bases.  Both marginals are uniform, so this
reproduces the exact joint distribution the protocol consumes.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        n = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if n == 0.0:
            raise ValueError("zero vector has no direction")
        if abs(n - 1.0) > _NORM_TOL:
            object.__setattr__(self, "x", self.x / n)
            object.__setattr__(self, "y", self.y / n)
            object.__setattr__(self, "z", self.z / n)

    def __neg__(self) -> "BlochVector":
        return BlochVector(-self.x, -self.y, -self.z)

    def components(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class OutcomePair:
    a_outcome: int  # Alice's A: 0 means collapse onto the "+" state
    b_outcome: int  # Bob's B: 0 for the "-" vector, 1 for "+"


def dot(a: BlochVector, b: BlochVector) -> float:
    d = a.x * b.x + a.y * b.y + a.z * b.z
    return max(-1.0, min(1.0, d))


def correlate(a: BlochVector, b: BlochVector, rng: random.Random) -> OutcomePair:
    """One joint measurement on a singlet: P(B == A) = (1 + a.b)/2."""
    a_bit = rng.getrandbits(1)
    p_eq = 0.5 * (1.0 + dot(a, b))
    b_bit = a_bit if rng.random() < p_eq else 1 - a_bit
    return OutcomePair(a_bit, b_bit)


def steer_and_measure(codeword: BlochVector, bob_dir: BlochVector,
                      rng: random.Random) -> tuple[int, int]:
    """One round of the steering reduction.

    Alice measures her half in a basis containing the codeword; the flip
    bit says whether Bob's half collapsed onto the codeword (0) or its
    antipode (1).  Bob measures along bob_dir; outcome 1 is the "+" result.
    The corrected bit outcome^flip is distributed as a direct measurement
    of the codeword state along bob_dir.
    """
    flip = rng.getrandbits(1)
    sign = -1.0 if flip else 1.0
    p_plus = 0.5 * (1.0 + sign * dot(codeword, bob_dir))
    outcome = 1 if rng.random() < p_plus else 0
    return flip, outcome


class PairExhaustedError(RuntimeError):
    pass


class SingletSource:
    """A pool of singlet pairs, each serving at most two measurements.

    The first measurement on a pair returns a uniform bit; the second is
    conditioned so P(equal) = (1 + a.b)/2.  Pairs are created lazily on
    first use; draws come from one sequential stream, so two runs that
    measure in the same order see identical outcomes.
    """

    def __init__(self, seed):
        self._rng = random.Random(seed)
        self._pairs: dict[object, tuple[BlochVector, int] | None] = {}

    def measure(self, pair_id, axis: BlochVector) -> int:
        state = self._pairs.get(pair_id, "fresh")
        if state is None:
            raise PairExhaustedError(f"pair {pair_id!r} already measured twice")
        if state == "fresh":
            bit = self._rng.getrandbits(1)
            self._pairs[pair_id] = (axis, bit)
            return bit
        first_axis, first_bit = state
        self._pairs[pair_id] = None
        p_eq = 0.5 * (1.0 + dot(first_axis, axis))
        return first_bit if self._rng.random() < p_eq else 1 - first_bit


class ScriptedSource:
    """Deterministic source for tests: outcomes are read from a script.

    `script` maps pair id to the sequence of outcomes to serve, in
    measurement order.
    """

    def __init__(self, script: dict):
        self._script = {k: list(v) for k, v in script.items()}

    def measure(self, pair_id, axis: BlochVector) -> int:
        try:
            pending = self._script[pair_id]
        except KeyError:
            raise KeyError(f"no scripted outcomes for pair {pair_id!r}") from None
        if not pending:
            raise PairExhaustedError(f"scripted pair {pair_id!r} exhausted")
        return pending.pop(0)
