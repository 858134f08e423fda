"""Concatenation trees: construction, protocol execution, exact evaluation.

A tree's leaves are Alice's input bits and every internal node is one
primitive code.  Encoding evaluates the tree bottom-up (each node measures
one shared pair and outputs first-input XOR outcome); the root output is
the single message bit.  Decoding measures only the pairs on the
root-to-target path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .bloch import BlochVector
from .exactnum import ExactValue, ONE, ZERO, delta
from .primitives import (E2, E3, PrimitiveKind, alice_basis, bob_basis,
                         decode_guess, exact_dot, node_output)


class TreeFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Leaf:
    index: int


@dataclass(frozen=True)
class Node:
    kind: PrimitiveKind
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) != self.kind.arity:
            raise ValueError(
                f"{self.kind.name} node needs {self.kind.arity} children, "
                f"got {len(self.children)}")


CodeTree = Leaf | Node


@dataclass(frozen=True)
class PathProfile:
    k: int  # 2-bit primitives on the path
    j: int  # 3-bit primitives on the path


@dataclass(frozen=True)
class TranscriptEntry:
    node_id: str
    role: str  # "alice" | "bob"
    basis: BlochVector
    outcome: int
    output: int | None  # node output bit (alice) or final guess (bob, last entry)


@dataclass
class Transcript:
    entries: list[TranscriptEntry] = field(default_factory=list)


# -- structure helpers ----------------------------------------------------

def leaf_indices(tree: CodeTree) -> list[int]:
    if isinstance(tree, Leaf):
        return [tree.index]
    out = []
    for child in tree.children:
        out.extend(leaf_indices(child))
    return out


def leaf_count(tree: CodeTree) -> int:
    return len(leaf_indices(tree))


def ebit_count(tree: CodeTree) -> int:
    """Shared pairs consumed: one per internal node."""
    if isinstance(tree, Leaf):
        return 0
    return 1 + sum(ebit_count(c) for c in tree.children)


def validate_tree(tree: CodeTree) -> None:
    idx = leaf_indices(tree)
    if sorted(idx) != list(range(len(idx))):
        raise TreeFormatError(f"leaf indices must be exactly 0..n-1, got {sorted(idx)}")


def _path_to_leaf(tree: CodeTree, target: int):
    """List of (node_id, node, child_index) from the root to the target leaf."""
    path = []
    node, nid = tree, "n"
    while isinstance(node, Node):
        for c, child in enumerate(node.children):
            if target in leaf_indices(child):
                path.append((nid, node, c))
                node, nid = child, f"{nid}.{c}"
                break
        else:
            raise ValueError(f"leaf {target} not in tree")
    if node.index != target:
        raise ValueError(f"leaf {target} not in tree")
    return path


def path_profile(tree: CodeTree, leaf: int) -> PathProfile:
    k = j = 0
    for _, node, _ in _path_to_leaf(tree, leaf):
        if node.kind is E2:
            k += 1
        else:
            j += 1
    return PathProfile(k, j)


# -- the deterministic grouping rule ----------------------------------------

def build_paper_tree(n: int) -> CodeTree:
    """Deterministic concatenation for n bits: with r = n mod 3, form
    (2r) mod 3 pair groups then (n - 2*(2r mod 3))/3 triple groups, bits
    assigned left to right, and recurse on the group outputs.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    return _combine([Leaf(i) for i in range(n)])


def _combine(subtrees: list[CodeTree]) -> CodeTree:
    n = len(subtrees)
    if n == 1:
        return subtrees[0]
    if n == 2:
        return Node(E2, subtrees)
    if n == 3:
        return Node(E3, subtrees)
    g2 = (2 * (n % 3)) % 3
    groups: list[CodeTree] = []
    pos = 0
    for _ in range(g2):
        groups.append(Node(E2, subtrees[pos:pos + 2]))
        pos += 2
    while pos < n:
        groups.append(Node(E3, subtrees[pos:pos + 3]))
        pos += 3
    return _combine(groups)


def pad_bits(bits, n_prime: int) -> tuple[int, ...]:
    """Extend an input vector with fixed zeros, for running a larger code."""
    bits = tuple(bits)
    if n_prime < len(bits):
        raise ValueError("cannot pad to a smaller size")
    return bits + (0,) * (n_prime - len(bits))


# -- protocol execution ----------------------------------------------------

def encode(tree: CodeTree, bits, source) -> tuple[int, Transcript]:
    bits = tuple(bits)
    if len(bits) != leaf_count(tree):
        raise ValueError(f"expected {leaf_count(tree)} bits, got {len(bits)}")
    transcript = Transcript()

    def go(node: CodeTree, nid: str) -> int:
        if isinstance(node, Leaf):
            return bits[node.index]
        vals = tuple(go(c, f"{nid}.{i}") for i, c in enumerate(node.children))
        axis = alice_basis(node.kind, vals)
        outcome = source.measure(nid, axis)
        out = node_output(vals, outcome)
        transcript.entries.append(TranscriptEntry(nid, "alice", axis, outcome, out))
        return out

    message = go(tree, "n")
    return message, transcript


def decode(tree: CodeTree, message: int, target: int, source) -> tuple[int, Transcript]:
    transcript = Transcript()
    outcomes = []
    for nid, node, c in _path_to_leaf(tree, target):
        axis = bob_basis(node.kind, c)
        outcome = source.measure(nid, axis)
        outcomes.append(outcome)
        transcript.entries.append(TranscriptEntry(nid, "bob", axis, outcome, None))
    guess = decode_guess(message, outcomes)
    if transcript.entries:
        last = transcript.entries[-1]
        transcript.entries[-1] = TranscriptEntry(
            last.node_id, last.role, last.basis, last.outcome, guess)
    return guess, transcript


# -- exact evaluation -------------------------------------------------------

def exact_bit_probability(profile: PathProfile) -> ExactValue:
    """Closed form (1 + 2^(-k/2) 3^(-j/2)) / 2 for one bit's success."""
    return (ONE + delta(profile.k, profile.j)) * Fraction(1, 2)


def error_parity_probability(kind: PrimitiveKind, uses: int, parity: str) -> ExactValue:
    """Probability of an even/odd number of wrong steps over `uses` nodes."""
    if uses < 0:
        raise ValueError("uses must be nonnegative")
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    d = delta(uses, 0) if kind is E2 else delta(0, uses)
    if parity == "even":
        return (ONE + d) * Fraction(1, 2)
    return (ONE - d) * Fraction(1, 2)


def min_probability(tree: CodeTree) -> ExactValue:
    best = None
    for leaf in leaf_indices(tree):
        p = exact_bit_probability(path_profile(tree, leaf))
        if best is None or p < best:
            best = p
    return best


def sr_average(tree: CodeTree) -> ExactValue:
    """Success probability after shared-randomness uniformization: the
    plain average of the per-leaf probabilities."""
    leaves = leaf_indices(tree)
    total = ZERO
    for leaf in leaves:
        total = total + exact_bit_probability(path_profile(tree, leaf))
    return total * Fraction(1, len(leaves))


def exhaustive_success_probability(tree: CodeTree, bits, target: int) -> ExactValue:
    """Independent oracle: exact success probability by enumerating every
    internal-node Alice outcome and every path Bob outcome, weighting path
    nodes by the joint law (1 + (-1)^(A^B) a.b)/4 and off-path outcomes
    by 1/2 each.
    """
    bits = tuple(bits)
    if len(bits) != leaf_count(tree):
        raise ValueError(f"expected {leaf_count(tree)} bits, got {len(bits)}")

    internals: list[tuple[str, Node]] = []

    def collect(node, nid):
        if isinstance(node, Node):
            internals.append((nid, node))
            for i, c in enumerate(node.children):
                collect(c, f"{nid}.{i}")

    collect(tree, "n")
    path = _path_to_leaf(tree, target)
    if len(path) > 12 or len(internals) + len(path) > 16:
        raise ValueError("tree too deep for exhaustive enumeration")

    path_ids = [nid for nid, _, _ in path]
    path_child = {nid: c for nid, _, c in path}
    off_count = len(internals) - len(path)
    off_weight = ExactValue(Fraction(1, 2 ** off_count))

    # joint weights (1 + s*d)/4 depend only on (kind, sign of dot, A^B)
    wcache: dict[tuple, ExactValue] = {}

    def joint_weight(kind, dot_val, agree_bit):
        key = (kind, dot_val.c2 > Fraction(0) or dot_val.c3 > Fraction(0), agree_bit)
        if key not in wcache:
            signed = dot_val if agree_bit == 0 else -dot_val
            wcache[key] = (ONE + signed) * Fraction(1, 4)
        return wcache[key]

    node_of = dict(internals)
    total = ZERO
    for a_assign in itertools.product((0, 1), repeat=len(internals)):
        a_of = {nid: a for (nid, _), a in zip(internals, a_assign)}
        inputs_of: dict[str, tuple[int, ...]] = {}

        def value(node, nid) -> int:
            if isinstance(node, Leaf):
                return bits[node.index]
            vals = tuple(value(c, f"{nid}.{i}") for i, c in enumerate(node.children))
            inputs_of[nid] = vals
            return node_output(vals, a_of[nid])

        message = value(tree, "n")
        path_dots = [
            (node_of[nid].kind,
             exact_dot(node_of[nid].kind, inputs_of[nid], path_child[nid]),
             a_of[nid])
            for nid in path_ids
        ]
        for b_assign in itertools.product((0, 1), repeat=len(path)):
            guess = decode_guess(message, list(b_assign))
            if guess != bits[target]:
                continue
            w = off_weight
            for (kind, d, a), b in zip(path_dots, b_assign):
                w = w * joint_weight(kind, d, a ^ b)
            total = total + w
    return total


# -- leaf permutation --------------------------------------------------------

def permute_leaves(tree: CodeTree, permutation) -> CodeTree:
    """Relabel leaf i as permutation[i]; the shape is unchanged."""
    perm = list(permutation)
    n = leaf_count(tree)
    if sorted(perm) != list(range(n)):
        raise ValueError("permutation must be a bijection on 0..n-1")

    def go(node):
        if isinstance(node, Leaf):
            return Leaf(perm[node.index])
        return Node(node.kind, tuple(go(c) for c in node.children))

    return go(tree)


# -- textual tree format ------------------------------------------------------

TREE_FILE_HEADER = "earac-tree v1"


def format_tree(tree: CodeTree) -> str:
    if isinstance(tree, Leaf):
        return f"L{tree.index}"
    inner = ",".join(format_tree(c) for c in tree.children)
    return f"{tree.kind.name}({inner})"


def parse_tree(text: str) -> CodeTree:
    s = "".join(text.split())
    tree, rest = _parse_expr(s)
    if rest:
        raise TreeFormatError(f"trailing input: {rest!r}")
    validate_tree(tree)
    return tree


def _parse_expr(s: str) -> tuple[CodeTree, str]:
    if s.startswith("L"):
        i = 1
        while i < len(s) and s[i].isdigit():
            i += 1
        if i == 1:
            raise TreeFormatError(f"bad leaf near {s[:8]!r}")
        return Leaf(int(s[1:i])), s[i:]
    for kind in (E2, E3):
        tag = kind.name + "("
        if s.startswith(tag):
            rest = s[len(tag):]
            children = []
            for i in range(kind.arity):
                child, rest = _parse_expr(rest)
                children.append(child)
                sep = "," if i < kind.arity - 1 else ")"
                if not rest.startswith(sep):
                    raise TreeFormatError(f"expected {sep!r} near {rest[:8]!r}")
                rest = rest[1:]
            return Node(kind, tuple(children)), rest
    raise TreeFormatError(f"unrecognized tree syntax near {s[:8]!r}")


def write_tree(tree: CodeTree, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(TREE_FILE_HEADER + "\n")
        f.write(format_tree(tree) + "\n")


def read_tree(path) -> CodeTree:
    with open(path, encoding="utf-8") as f:
        header = f.readline().strip()
        if header != TREE_FILE_HEADER:
            raise TreeFormatError(f"bad header {header!r}")
        return parse_tree(f.read())
