"""Search over concatenation trees and the performance bounds.

The dynamic program works on advantages (delta = 2p - 1) rather than
probabilities: advantages multiply along a path, so splitting n bits under
a 2-ary root divides every subtree advantage by sqrt2 and a 3-ary root
divides by sqrt3.  Both objectives (leaf-average advantage, worst-leaf
advantage) depend on a subtree only through its own objective value, so
memoizing on the bit count alone is valid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .codetree import CodeTree, Leaf, Node
from .exactnum import (ExactValue, INV_SQRT2, INV_SQRT3, ONE, delta,
                       from_rational)
from .primitives import E2, E3


@dataclass(frozen=True)
class DpEntry:
    n: int
    value: ExactValue  # advantage delta, not probability
    tree: CodeTree
    nodes: int  # internal node count, used for tie-breaking

    @property
    def probability(self) -> ExactValue:
        return (ONE + self.value) * Fraction(1, 2)


def _shift_leaves(tree: CodeTree, offset: int) -> CodeTree:
    if isinstance(tree, Leaf):
        return Leaf(tree.index + offset)
    return Node(tree.kind, tuple(_shift_leaves(c, offset) for c in tree.children))


def _compositions(n: int, parts: int):
    """Nondecreasing compositions of n into `parts` positive parts."""
    if parts == 2:
        return [(a, n - a) for a in range(1, n // 2 + 1)]
    out = []
    for a in range(1, n // 3 + 1):
        for b in range(a, (n - a) // 2 + 1):
            out.append((a, b, n - a - b))
    return out


_ROOT_FACTOR = {2: INV_SQRT2, 3: INV_SQRT3}
_ROOT_KIND = {2: E2, 3: E3}


def _search(n: int, cache: dict, combine) -> DpEntry:
    if n <= 0:
        raise ValueError("n must be positive")
    if n in cache:
        return cache[n]
    if n == 1:
        entry = DpEntry(1, ONE, Leaf(0), 0)
        cache[1] = entry
        return entry
    best = None
    best_key = None
    for arity in (2, 3):
        if n < arity:
            continue
        for parts in _compositions(n, arity):
            subs = [_search(p, cache, combine) for p in parts]
            value = combine(n, parts, subs) * _ROOT_FACTOR[arity]
            nodes = 1 + sum(s.nodes for s in subs)
            key = (nodes, parts)
            if (best is None or value > best.value
                    or (value == best.value and key < best_key)):
                children = []
                offset = 0
                for s in subs:
                    children.append(_shift_leaves(s.tree, offset))
                    offset += s.n
                best = DpEntry(n, value, Node(_ROOT_KIND[arity], tuple(children)), nodes)
                best_key = key
    cache[n] = best
    return best


def _combine_avg(n, parts, subs):
    total = from_rational(0)
    for p, s in zip(parts, subs):
        total = total + s.value * Fraction(p)
    return total * Fraction(1, n)


def _combine_min(n, parts, subs):
    return min(s.value for s in subs)


_avg_cache: dict[int, DpEntry] = {}
_min_cache: dict[int, DpEntry] = {}


def best_avg_tree(n: int) -> DpEntry:
    """Tree maximizing the shared-randomness-averaged advantage."""
    return _search(n, _avg_cache, _combine_avg)


def best_min_tree(n: int) -> DpEntry:
    """Tree maximizing the worst-bit advantage (no shared randomness)."""
    return _search(n, _min_cache, _combine_min)


def has_raw_bit_feed(tree: CodeTree) -> bool:
    """True when some primitive takes a raw input bit next to an encoded one
    (a size-1 composition part, never produced by the deterministic rule)."""
    if isinstance(tree, Leaf):
        return False
    kinds = {isinstance(c, Leaf) for c in tree.children}
    if kinds == {True, False}:
        return True
    return any(has_raw_bit_feed(c) for c in tree.children)


# -- bounds -------------------------------------------------------------------

def factor_23(m: int) -> tuple[int, int] | None:
    """(k, j) with m = 2^k * 3^j, or None if m has another prime factor."""
    k = j = 0
    while m % 2 == 0:
        m //= 2
        k += 1
    while m % 3 == 0:
        m //= 3
        j += 1
    return (k, j) if m == 1 else None


def smallest_23_smooth_geq(n: int) -> int:
    if n <= 0:
        raise ValueError("n must be positive")
    m = n
    while factor_23(m) is None:
        m += 1
    return m


def lower_bound(n: int) -> ExactValue:
    """Guaranteed success probability: run the code for the next 3-smooth
    size on padded input."""
    k, j = factor_23(smallest_23_smooth_geq(n))
    return (ONE + delta(k, j)) * Fraction(1, 2)


@dataclass(frozen=True)
class Bound:
    n: int
    exact: ExactValue | None  # present iff 1/sqrt(n) lies in the ring
    decimal: str
    is_exact: bool


def upper_bound(n: int) -> Bound:
    """The ceiling (1 + 1/sqrt(n))/2 on any n-bit code's success."""
    if n <= 0:
        raise ValueError("n must be positive")
    m, s = n, 1
    f = 2
    while f * f <= m:
        while m % (f * f) == 0:
            m //= f * f
            s *= f
        f += 1
    # n = m * s^2 with m square-free; 1/sqrt(n) is in the ring iff m | 6
    if m == 1:
        inv_sqrt = ExactValue(Fraction(1, s))
    elif m == 2:
        inv_sqrt = ExactValue(c2=Fraction(1, 2 * s))
    elif m == 3:
        inv_sqrt = ExactValue(c3=Fraction(1, 3 * s))
    elif m == 6:
        inv_sqrt = ExactValue(c6=Fraction(1, 6 * s))
    else:
        return Bound(n, None, _decimal_half_plus_invsqrt(n), False)
    p = (ONE + inv_sqrt) * Fraction(1, 2)
    return Bound(n, p, p.to_decimal_str(20), True)


def _decimal_half_plus_invsqrt(n: int, digits: int = 20) -> str:
    from decimal import Decimal, localcontext
    with localcontext() as ctx:
        ctx.prec = digits + 5
        v = (1 + 1 / Decimal(n).sqrt()) / 2
        ctx.prec = digits
        return str(+v)


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def ic_check(K: int, p: float) -> tuple[float, bool]:
    """Information-causality style inequality K(1 - h(p)) <= 1."""
    if K < 1:
        raise ValueError("K must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be a probability")
    lhs = K * (1.0 - binary_entropy(p))
    return lhs, lhs <= 1.0 + 1e-12


def entropy_gap(y: float) -> tuple[float, float]:
    """Both sides of 1 - h((1+y)/2) >= y^2 / (2 ln 2) on [0, 1]."""
    if not 0.0 <= y <= 1.0:
        raise ValueError("y must lie in [0, 1]")
    exact_side = 1.0 - binary_entropy((1.0 + y) / 2.0)
    quadratic_side = y * y / (2.0 * math.log(2.0))
    return exact_side, quadratic_side
