"""Statistical verification: empirical success frequencies vs exact values.

Two engines run the protocol.  The vectorized engine simulates all trials
at once with numpy and is fast enough for 10^5 trials per bit across every
tree of interest; the reference engine drives the actual encode/decode
code path one session at a time and is used to cross-check the vectorized
one on smaller runs.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

import numpy as np

from . import codetree
from .bloch import SingletSource, dot, steer_and_measure
from .codetree import CodeTree, _path_to_leaf, leaf_count
from .primitives import (E2, E3, alice_basis, bob_basis, qrac_codeword)

Z_LIMIT = 4.0


@dataclass(frozen=True)
class BitStat:
    label: str
    trials: int
    successes: int
    p_hat: float
    p_exact: float
    sigma: float
    z: float

    @staticmethod
    def from_counts(label: str, trials: int, successes: int, p_exact: float) -> "BitStat":
        p_hat = successes / trials
        sigma = math.sqrt(p_exact * (1.0 - p_exact) / trials)
        if sigma == 0.0:
            z = 0.0 if p_hat == p_exact else math.copysign(math.inf, p_hat - p_exact)
        else:
            z = (p_hat - p_exact) / sigma
        return BitStat(label, trials, successes, p_hat, p_exact, sigma, z)


@dataclass
class TrialReport:
    tree_text: str
    trials: int
    seed: int
    bits: list[BitStat] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(abs(b.z) < Z_LIMIT for b in self.bits)

    def to_text(self) -> str:
        lines = [f"tree {self.tree_text}  trials {self.trials}  seed {self.seed}"]
        lines.append(f"{'bit':>6} {'successes':>10} {'p_hat':>10} {'p_exact':>10} "
                     f"{'sigma':>10} {'z':>8}")
        for b in self.bits:
            lines.append(f"{b.label:>6} {b.successes:>10d} {b.p_hat:>10.6f} "
                         f"{b.p_exact:>10.6f} {b.sigma:>10.6f} {b.z:>8.3f}")
        lines.append(f"pass: {self.passed}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps({
            "tree": self.tree_text,
            "trials": self.trials,
            "seed": self.seed,
            "bits": [vars(b) for b in self.bits],
            "passed": self.passed,
        })


# representative inputs for each basis index, per kind
_E2_REPS = ((0, 0), (0, 1))
_E3_REPS = ((0, 0, 0), (0, 0, 1), (0, 1, 1), (0, 1, 0))
_E2_MAT = np.array([alice_basis(E2, r).components() for r in _E2_REPS])
_E3_MAT = np.array([alice_basis(E3, r).components() for r in _E3_REPS])


def _simulate_vectorized(tree: CodeTree, target: int, trials: int, rng):
    """Run `trials` independent sessions at once.

    Returns (success: bool array, input_class: int array).
    """
    n = leaf_count(tree)
    bits = rng.integers(0, 2, size=(trials, n), dtype=np.int8)
    path_child = {nid: c for nid, _, c in _path_to_leaf(tree, target)}
    bob_outcomes = []

    def run(node, nid):
        if isinstance(node, codetree.Leaf):
            return bits[:, node.index]
        vals = [run(c, f"{nid}.{i}") for i, c in enumerate(node.children)]
        if node.kind is E2:
            idx = vals[0] ^ vals[1]
            mat = _E2_MAT
        else:
            idx = 2 * (vals[0] ^ vals[1]) + (vals[1] ^ vals[2])
            mat = _E3_MAT
        a = rng.integers(0, 2, size=trials, dtype=np.int8)
        out = vals[0] ^ a
        if nid in path_child:
            bob_vec = np.array(bob_basis(node.kind, path_child[nid]).components())
            dots = mat[idx] @ bob_vec
            equal = rng.random(trials) < 0.5 * (1.0 + dots)
            bob_outcomes.append(np.where(equal, a, 1 - a).astype(np.int8))
        return out

    guess = run(tree, "n")
    for b in bob_outcomes:
        guess = guess ^ b
    success = guess == bits[:, target]
    input_class = bits @ (1 << np.arange(n))
    return success, input_class


def _simulate_reference(tree: CodeTree, target: int, trials: int, seed) -> int:
    """Sequential engine driving the real encode/decode path."""
    successes = 0
    n = leaf_count(tree)
    for t in range(trials):
        rng = random.Random(f"{seed}:{target}:{t}")
        bits = tuple(rng.getrandbits(1) for _ in range(n))
        source = SingletSource(f"{seed}:{target}:{t}:src")
        message, _ = codetree.encode(tree, bits, source)
        guess, _ = codetree.decode(tree, message, target, source)
        successes += guess == bits[target]
    return successes


def estimate(tree: CodeTree, trials: int, seed: int, targets="all",
             engine: str = "vectorized") -> TrialReport:
    """Empirical per-bit success frequency against the exact prediction."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if targets == "all":
        target_list = sorted(codetree.leaf_indices(tree))
    else:
        target_list = [int(targets)]
    report = TrialReport(codetree.format_tree(tree), trials, seed)
    for target in target_list:
        p_exact = codetree.exact_bit_probability(
            codetree.path_profile(tree, target)).to_decimal()
        if engine == "vectorized":
            rng = np.random.default_rng([seed, target])
            success, _ = _simulate_vectorized(tree, target, trials, rng)
            successes = int(success.sum())
        elif engine == "reference":
            successes = _simulate_reference(tree, target, trials, seed)
        else:
            raise ValueError(f"unknown engine {engine!r}")
        report.bits.append(BitStat.from_counts(str(target), trials, successes, p_exact))
    return report


def input_independence_pvalue(tree: CodeTree, target: int, trials: int, seed: int) -> float:
    """Chi-square p-value for success being independent of the input bits."""
    from scipy.stats import chi2_contingency

    rng = np.random.default_rng([seed, target, 1])
    success, input_class = _simulate_vectorized(tree, target, trials, rng)
    n_classes = 1 << leaf_count(tree)
    table = np.zeros((n_classes, 2), dtype=np.int64)
    np.add.at(table, (input_class, success.astype(int)), 1)
    table = table[table.sum(axis=1) > 0]
    _, pvalue, _, _ = chi2_contingency(table)
    return float(pvalue)


@dataclass
class QracReport:
    n: int
    trials: int
    seed: int
    direct: BitStat
    steered: BitStat

    @property
    def passed(self) -> bool:
        return abs(self.direct.z) < Z_LIMIT and abs(self.steered.z) < Z_LIMIT

    def to_text(self) -> str:
        lines = [f"n {self.n}  trials {self.trials}  seed {self.seed}"]
        for b in (self.direct, self.steered):
            lines.append(f"{b.label:>8}: p_hat {b.p_hat:.6f}  p_exact {b.p_exact:.6f}  "
                         f"z {b.z:+.3f}")
        lines.append(f"pass: {self.passed}")
        return "\n".join(lines)


def qrac_reduction_experiment(n: int, trials: int, seed: int) -> QracReport:
    """Compare a direct single-state measurement against the singlet
    steering procedure; both should hit (1 + 1/sqrt(n))/2."""
    if n == 2:
        kind = E2
    elif n == 3:
        kind = E3
    else:
        raise ValueError("only the 2- and 3-bit primitives have codewords here")
    p_exact = 0.5 * (1.0 + 1.0 / math.sqrt(n))

    def one_run(label: str, measure) -> BitStat:
        rng = random.Random(f"qrac:{label}:{n}:{seed}")
        successes = 0
        for _ in range(trials):
            bits = tuple(rng.getrandbits(1) for _ in range(n))
            query = rng.randrange(n)
            codeword = qrac_codeword(kind, bits)
            bob_vec = bob_basis(kind, query)
            guess = measure(codeword, bob_vec, rng)
            successes += guess == bits[query]
        return BitStat.from_counts(label, trials, successes, p_exact)

    def direct(codeword, bob_vec, rng):
        plus = rng.random() < 0.5 * (1.0 + dot(codeword, bob_vec))
        return 0 if plus else 1

    def steered(codeword, bob_vec, rng):
        flip, outcome = steer_and_measure(codeword, bob_vec, rng)
        return 1 - (outcome ^ flip)

    return QracReport(n, trials, seed,
                      one_run("direct", direct), one_run("steered", steered))
