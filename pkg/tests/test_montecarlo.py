import json
import math

import pytest

from earac.codetree import Leaf, build_paper_tree
from earac.montecarlo import (BitStat, estimate, input_independence_pvalue,
                              qrac_reduction_experiment)


def test_reproducible():
    tree = build_paper_tree(4)
    a = estimate(tree, 2000, seed=7)
    b = estimate(tree, 2000, seed=7)
    assert a.to_json() == b.to_json()
    c = estimate(tree, 2000, seed=8)
    assert a.to_json() != c.to_json()


def test_leaf_tree_is_certain():
    report = estimate(Leaf(0), 1000, seed=1)
    (stat,) = report.bits
    assert stat.p_hat == 1.0 and stat.z == 0.0
    assert report.passed


def test_single_e2_frequency():
    report = estimate(build_paper_tree(2), 100_000, seed=3)
    p = 0.5 * (1 + 1 / math.sqrt(2))
    for stat in report.bits:
        assert abs(stat.p_hat - p) < 4 * stat.sigma
        assert stat.p_exact == pytest.approx(p)


def test_four_bit_tree_frequency():
    report = estimate(build_paper_tree(4), 100_000, seed=5)
    for stat in report.bits:
        assert abs(stat.p_hat - 0.75) < 4 * math.sqrt(0.75 * 0.25 / 100_000)


def test_single_target():
    report = estimate(build_paper_tree(5), 5000, seed=2, targets=4)
    assert [s.label for s in report.bits] == ["4"]


def test_reference_engine_agrees():
    # the sequential engine drives the real encode/decode path
    tree = build_paper_tree(5)
    report = estimate(tree, 20_000, seed=11, engine="reference")
    assert report.passed, report.to_text()


def test_engines_statistically_consistent():
    tree = build_paper_tree(3)
    vec = estimate(tree, 50_000, seed=13, engine="vectorized")
    ref = estimate(tree, 50_000, seed=13, engine="reference")
    for a, b in zip(vec.bits, ref.bits):
        assert abs(a.p_hat - b.p_hat) < 8 * a.sigma


def test_unknown_engine():
    with pytest.raises(ValueError):
        estimate(build_paper_tree(2), 10, seed=0, engine="exact")
    with pytest.raises(ValueError):
        estimate(build_paper_tree(2), 0, seed=0)


def test_report_serialization():
    report = estimate(build_paper_tree(2), 1000, seed=4)
    data = json.loads(report.to_json())
    assert data["tree"] == "E2(L0,L1)"
    assert len(data["bits"]) == 2
    text = report.to_text()
    assert "p_hat" in text and "pass:" in text


def test_input_independence():
    pvalue = input_independence_pvalue(build_paper_tree(3), 0, 100_000, seed=17)
    assert pvalue > 0.001


def test_bitstat_extreme():
    stat = BitStat.from_counts("0", 100, 100, 1.0)
    assert stat.z == 0.0
    stat = BitStat.from_counts("0", 100, 99, 1.0)
    assert stat.z == -math.inf


@pytest.mark.parametrize("n", [2, 3])
def test_qrac_reduction(n):
    report = qrac_reduction_experiment(n, 100_000, seed=21)
    p = 0.5 * (1 + 1 / math.sqrt(n))
    assert abs(report.direct.p_hat - p) < 4 * report.direct.sigma
    assert abs(report.steered.p_hat - p) < 4 * report.steered.sigma
    assert report.passed


def test_qrac_reduction_unsupported_n():
    with pytest.raises(ValueError):
        qrac_reduction_experiment(4, 10, seed=0)
