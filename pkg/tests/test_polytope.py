from fractions import Fraction
from itertools import combinations

import pytest

from errors import BudgetExceededError, InfeasibleFlowError
from generator import BoundStyle, GeneratorConfig, Topology, generate
from network import Network, potential_to_flow
from polytope import (
    Verdict,
    active_rows,
    active_set,
    enumerate_vertices,
    fit_bounds_to_flow,
    gauge,
    imbalance,
    is_extremal,
    is_feasible,
    recover_potential,
)


def _shifted(f, direction_flow, t):
    return tuple(x + t * d for x, d in zip(f, direction_flow))


def assert_certificate_holds(net, f, certificate):
    """Direction keeps active rows at zero and both steps of size epsilon stay feasible"""
    assert certificate.verdict is Verdict.NOT_EXTREMAL
    rows = active_rows(net, certificate.active)
    assert not any(rows.apply(certificate.direction))
    assert len(set(certificate.direction)) > 1
    assert certificate.epsilon > 0
    df = potential_to_flow(net, certificate.direction)
    assert is_feasible(net, _shifted(f, df, certificate.epsilon)).feasible
    assert is_feasible(net, _shifted(f, df, -certificate.epsilon)).feasible


def test_imbalance_on_k2(k2):
    assert imbalance(k2, [0]) == (0, 0)
    assert imbalance(k2, [3]) == (3, -3)


def test_circulation_has_zero_imbalance(triangle):
    # v->w, w->x and x->v carry one unit each
    assert imbalance(triangle, [1, 1, -1]) == (0, 0, 0)


def test_recover_potential():
    net = Network.from_arcs(["v", "w"], [("v", "w")], b=[2])
    assert recover_potential(net, [0]) == (0, 0)
    assert recover_potential(net, [4]) == (0, 2)


def test_non_differential_flow_has_no_potential(triangle):
    assert recover_potential(triangle, [1, 1, 1]) is None
    report = is_feasible(triangle, [1, 1, 1])
    assert not report.feasible
    assert "not differential" in report.violation


@pytest.mark.parametrize("seed", range(5))
def test_potential_round_trip_up_to_gauge(seed):
    net = generate(GeneratorConfig(seed=seed, topology=Topology.RANDOM))
    phi = tuple(Fraction(i * i - 3, i + 1) for i in range(net.n))
    assert recover_potential(net, potential_to_flow(net, phi)) == gauge(phi)


def test_feasibility_names_the_violated_edge(k2):
    assert is_feasible(k2, [0]).feasible
    report = is_feasible(k2, [2])
    assert not report.feasible
    assert "e0" in report.violation


def test_active_set(k2):
    assert len(active_set(k2, [Fraction(1, 2)])) == 0
    active = active_set(k2, [1])
    assert active.edges_at_upper == {"e0"}
    assert not active.edges_at_lower
    with pytest.raises(InfeasibleFlowError):
        active_set(k2, [5])


def test_fixed_edge_is_active_at_both_sides():
    net = Network.from_arcs(["v", "w"], [("v", "w")], edge_bounds={"e0": (0, 0)})
    active = active_set(net, [0])
    assert active.edges_at_lower == active.edges_at_upper == {"e0"}
    assert active_rows(net, active).rows == 1


def test_k2_boundary_flow_is_extremal(k2):
    certificate = is_extremal(k2, [1])
    assert certificate.is_extremal
    assert certificate.rank_active == 1
    assert certificate.direction is None


def test_k2_interior_flow_certificate(k2):
    certificate = is_extremal(k2, [0])
    assert not certificate.is_extremal
    assert certificate.direction == (0, 1)
    assert certificate.epsilon == Fraction(1, 2)
    assert_certificate_holds(k2, (Fraction(0),), certificate)


def test_balanced_wheatstone_is_not_extremal(balanced_wheatstone):
    f = (Fraction(0),) * 5
    certificate = is_extremal(balanced_wheatstone, f)
    assert not certificate.is_extremal
    assert certificate.rank_active == 2
    assert certificate.direction == (0, 0, 1, -1)
    assert certificate.epsilon == 1
    assert_certificate_holds(balanced_wheatstone, f, certificate)


def test_unbalanced_wheatstone_is_extremal(unbalanced_wheatstone):
    certificate = is_extremal(unbalanced_wheatstone, [0] * 5)
    assert certificate.is_extremal
    assert certificate.rank_active == 3


def test_enumerate_vertices_k2(k2):
    assert enumerate_vertices(k2) == [(-1,), (1,)]


def test_enumerate_vertices_bounded_triangle(bounded_triangle):
    vertices = enumerate_vertices(bounded_triangle)
    # hexagon in potential space
    assert len(vertices) == 6
    for f in vertices:
        assert is_extremal(bounded_triangle, f).is_extremal
    for a, b in combinations(vertices, 2):
        midpoint = tuple((x + y) / 2 for x, y in zip(a, b))
        assert not is_extremal(bounded_triangle, midpoint).is_extremal


@pytest.mark.parametrize("seed", range(6))
def test_enumerated_vertices_are_feasible_and_extremal(seed):
    net = generate(
        GeneratorConfig(seed=seed, min_vertices=3, max_vertices=5, bound_style=BoundStyle.RANDOM_FINITE)
    )
    vertices = enumerate_vertices(net)
    assert vertices == sorted(set(vertices))
    for f in vertices:
        assert is_feasible(net, f).feasible
        assert is_extremal(net, f).is_extremal


@pytest.mark.parametrize("seed", range(6))
def test_certificates_on_non_extremal_points(seed):
    net = generate(
        GeneratorConfig(seed=seed, min_vertices=3, max_vertices=5, bound_style=BoundStyle.SYMMETRIC)
    )
    f = (Fraction(0),) * net.m
    certificate = is_extremal(net, f)
    # zero is strictly inside symmetric bounds
    assert_certificate_holds(net, f, certificate)


def test_enumeration_cap(bowtie):
    with pytest.raises(BudgetExceededError):
        enumerate_vertices(bowtie, cap=4)


def test_fit_bounds_to_flow(k2):
    fitted = fit_bounds_to_flow(k2.free(), [2], ["e0"], [])
    assert fitted.edges[0].f_lo == fitted.edges[0].f_hi == 2
    assert is_extremal(fitted, [2]).is_extremal
    relaxed = fit_bounds_to_flow(k2, [1], [], [])
    assert relaxed.edges[0].f_hi == 2
    assert len(active_set(relaxed, [1])) == 0
