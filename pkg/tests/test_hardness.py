from itertools import product

import pytest

import degeneracy
from alpha import conforms, is_alpha_tree
from errors import BudgetExceededError, PreconditionError
from hardness import (
    SubsetSumInstance,
    build_gadget,
    expected_direction,
    gadget_degenerate,
    pattern_forest,
    subset_sum_search,
)
from polytope import gauge


def test_gadget_structure():
    gadget = build_gadget(SubsetSumInstance((1, 2, 3), 3))
    net = gadget.network
    assert net.n == 3 + 4
    assert net.m == 2 * 3 + 4
    assert net.vertex("v").p_lo == -3 and net.vertex("v").p_hi == 3
    assert net.edge("s-v").b == 3
    assert net.edge("v-v2").b == net.edge("v2-t").b == 4
    assert net.edge("v-v3").f_hi == 1
    assert set(gadget.labels) == set(net.vertex_ids)


def test_instance_validation():
    with pytest.raises(PreconditionError):
        SubsetSumInstance((), 1)
    with pytest.raises(PreconditionError):
        SubsetSumInstance((1, 0), 1)
    with pytest.raises(PreconditionError):
        SubsetSumInstance((1,), 0)


def test_subset_sum_search():
    assert subset_sum_search(SubsetSumInstance((1, 2), 3)) == (1, 2)
    assert subset_sum_search(SubsetSumInstance((3, 1, 2), 3)) == (1,)
    assert subset_sum_search(SubsetSumInstance((2, 4), 3)) is None


def test_pattern_forest_is_full_size():
    gadget = build_gadget(SubsetSumInstance((1, 2), 3))
    edges, vertices = pattern_forest(gadget, (1,))
    assert edges == ["v-w", "v-v2"]
    assert vertices == ["v", "w", "v1"]
    assert len(edges) + len(vertices) == gadget.network.n - 1


@pytest.mark.parametrize("sizes, target", [((2, 4), 3), ((1,), 2), ((1, 2), 4)])
def test_no_instance_gadget_has_no_counterexample_within_its_bounds(sizes, target):
    instance = SubsetSumInstance(sizes, target)
    assert subset_sum_search(instance) is None
    verdict = degeneracy.test_nondegeneracy(build_gadget(instance).network, mode=degeneracy.SearchMode.FIXED)
    assert verdict.outcome is degeneracy.NondegeneracyOutcome.NO_COUNTEREXAMPLE
    assert not verdict.degenerate


@pytest.mark.parametrize(
    "sizes, target, degenerate",
    [((1, 2), 3, True), ((3,), 3, True), ((2, 4), 3, False), ((2, 2, 5), 7, True), ((4, 6, 9), 5, False)],
)
def test_gadget_decision(sizes, target, degenerate):
    decision = gadget_degenerate(SubsetSumInstance(sizes, target))
    assert decision.degenerate is degenerate
    assert decision.agree


def test_degenerate_gadget_carries_a_certificate():
    decision = gadget_degenerate(SubsetSumInstance((1, 2), 3))
    assert decision.polytope_subset == (1, 2)
    net, f, F = decision.network, decision.flow, decision.alpha_tree
    assert is_alpha_tree(net, F)
    assert conforms(net, f, F)
    assert not decision.certificate.is_extremal
    gadget = build_gadget(decision.instance)
    assert decision.direction == expected_direction(gadget, (1, 2))
    assert gauge(decision.direction)[0] == 0


@pytest.mark.parametrize("n", [1, 2])
def test_gadget_matches_subset_search_exhaustively(n):
    for sizes in product(range(1, 4), repeat=n):
        for target in range(1, sum(sizes) + 2):
            decision = gadget_degenerate(SubsetSumInstance(sizes, target))
            assert decision.degenerate == (subset_sum_search(decision.instance) is not None)


@pytest.mark.slow
def test_gadget_matches_subset_search_on_three_items():
    for sizes in product(range(1, 4), repeat=3):
        for target in range(1, sum(sizes) + 2):
            assert gadget_degenerate(SubsetSumInstance(sizes, target)).agree


def test_gadget_cap():
    with pytest.raises(BudgetExceededError):
        gadget_degenerate(SubsetSumInstance((1,) * 9, 3))
    with pytest.raises(BudgetExceededError):
        gadget_degenerate(SubsetSumInstance((1, 2, 3), 3), cap=2)
