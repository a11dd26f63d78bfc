from fractions import Fraction
from itertools import combinations

import pytest

from alpha import (
    AlphaForest,
    BipartiteLinkGraph,
    alpha_tree_candidates,
    build_link_graph,
    conforms,
    contract_active,
    enumerate_alpha_trees,
    extract_alpha_tree,
    find_orientation,
    find_orientation_exhaustive,
    hall_surplus_holds,
    is_alpha_tree,
    select_connecting_edges,
    validate_alpha_forest,
)
from errors import InfeasibleFlowError, PreconditionError
from generator import BoundStyle, GeneratorConfig, Topology, generate
from network import Network
from polytope import active_rows, active_set, enumerate_vertices, is_extremal


def max_conforming_forest_size(net, f):
    """Largest alpha-forest over the active elements of f, by brute force"""
    active = active_set(net, f)
    edges = [eid for eid in net.edge_ids if eid in active.edges]
    vertices = [vid for vid in net.vertex_ids if vid in active.vertices]
    for size in range(min(net.n - 1, len(edges) + len(vertices)), -1, -1):
        for k in range(0, min(size, len(vertices)) + 1):
            for V_F in combinations(vertices, k):
                for E_F in combinations(edges, size - k):
                    if find_orientation(net, E_F, V_F) is not None:
                        return size
    return 0


def test_alpha_tree_on_the_wheatstone_bridge(balanced_wheatstone):
    F = AlphaForest({"w-v"}, {"w", "v"})
    result = validate_alpha_forest(balanced_wheatstone, F)
    assert result.valid
    assert set(result.orientation) == {"w", "v"}
    assert is_alpha_tree(balanced_wheatstone, F)
    assert conforms(balanced_wheatstone, [0] * 5, F)


@pytest.mark.parametrize(
    "edges, vertices, orientation, reason",
    [
        (["e0", "e1", "e2"], [], None, "exceeds"),
        ([], ["v"], {"v": "e1"}, "not incident"),
        (["e0"], ["v"], {"v": "e0"}, "active edge"),
        ([], ["v", "w"], {"v": "e0", "w": "e0"}, "injective"),
        ([], ["v"], {"w": "e0"}, "domain"),
    ],
)
def test_invalid_forests(triangle, edges, vertices, orientation, reason):
    result = validate_alpha_forest(triangle, AlphaForest(edges, vertices, orientation))
    assert not result.valid
    assert reason in result.reason


def test_cycles_are_invalid(triangle, balanced_wheatstone):
    G = AlphaForest({"e0"}, {"x"}, {"x": "e1"})
    assert validate_alpha_forest(triangle, G).valid
    triangle_edges = AlphaForest({"w-v", "w-s", "v-s"}, set())
    assert "cycle" in validate_alpha_forest(balanced_wheatstone, triangle_edges).reason
    closing = AlphaForest({"w-v", "w-s"}, {"v"}, {"v": "v-s"})
    assert "close a cycle" in validate_alpha_forest(balanced_wheatstone, closing).reason


def test_is_alpha_tree_rejects_invalid_forests(triangle):
    with pytest.raises(PreconditionError):
        is_alpha_tree(triangle, AlphaForest({"e0", "e1", "e2"}, set()))
    assert not is_alpha_tree(triangle, AlphaForest({"e0"}, set()))


def test_vertex_without_free_edge_has_no_orientation(balanced_wheatstone):
    assert find_orientation(balanced_wheatstone, ["w-s", "v-s"], ["s"]) is None
    assert find_orientation_exhaustive(balanced_wheatstone, ["w-s", "v-s"], ["s"]) is None


@pytest.mark.parametrize("fixture", ["bowtie", "balanced_wheatstone", "subdivided_diamond"])
def test_backtracking_orientation_matches_exhaustive_search(fixture, request):
    net = request.getfixturevalue(fixture)
    for E_F, V_F in alpha_tree_candidates(net):
        fast = find_orientation(net, E_F, V_F)
        slow = find_orientation_exhaustive(net, E_F, V_F)
        assert (fast is None) == (slow is None)
        if fast is not None:
            assert validate_alpha_forest(net, AlphaForest(E_F, V_F, fast)).valid


def test_conformance_on_k2(k2):
    F = AlphaForest({"e0"}, set())
    assert conforms(k2, [1], F)
    assert conforms(k2, [-1], F)
    assert not conforms(k2, [0], F)
    with pytest.raises(InfeasibleFlowError):
        conforms(k2, [3], F)


def test_contraction(contraction_network):
    cr = contract_active(contraction_network, ["e0", "e1", "e2", "e3"], ["v1", "v2", "v3", "v4"])
    assert cr.components == (("s11", "s12"), ("v1", "v2", "v3"), ("s3",), ("v4", "s4"), ("s5",))
    assert cr.row_index == ("v1", "v2", "v3", "v4")
    assert cr.C.to_lists() == [
        [-2, 2, 0, 0, 0],
        [-1, 2, -1, 0, 0],
        [0, 2, -1, -1, 0],
        [0, 0, 0, 1, -1],
    ]
    assert cr.C.rank() == 4
    assert cr.component_of("s4") == "S4"


def test_link_graph_and_selection(contraction_network):
    cr = contract_active(contraction_network, ["e0", "e1", "e2", "e3"], ["v1", "v2", "v3", "v4"])
    H = build_link_graph(cr)
    assert len(H.R) == 4
    assert len(H.U) == 6
    assert hall_surplus_holds(H)
    assert hall_surplus_holds(H, limit=0)
    assert select_connecting_edges(H) == (("v1", "S1"), ("v2", "S3"), ("v3", "S4"), ("v4", "S5"))


def test_contraction_requires_full_rank(balanced_wheatstone):
    with pytest.raises(PreconditionError):
        contract_active(balanced_wheatstone, ["w-v"], ["w", "v"])


@pytest.mark.parametrize("limit", [0, 20])
def test_hall_surplus(limit):
    H = BipartiteLinkGraph(("a",), ("S1", "S2"), (("a", "S1"),), (("a", "S2"),))
    assert hall_surplus_holds(H, limit=limit)
    assert not hall_surplus_holds(H, U=(), limit=limit)
    crowded = BipartiteLinkGraph(
        ("a", "b"), ("S1", "S2", "S3"), (("a", "S1"), ("b", "S1")), (("a", "S2"), ("b", "S2"))
    )
    assert not hall_surplus_holds(crowded, limit=limit)


def test_extract_alpha_tree_on_contraction_example(contraction_network):
    F = extract_alpha_tree(contraction_network, [0] * contraction_network.m)
    assert F.active_edges == {"e0", "e1", "e2", "e3"}
    assert F.active_vertices == {"v1", "v2", "v3", "v4"}
    assert F.orientation == {"v1": "e4", "v2": "e7", "v3": "e9", "v4": "e10"}


def test_extract_connects_through_the_smallest_edge_id():
    # "z" comes before "y" in input order; both join a to the active edge
    net = Network.from_arcs(
        ["a", "b", "c"],
        [("b", "c"), ("a", "b"), ("a", "c")],
        edge_ids=["x", "z", "y"],
        vertex_bounds={"a": (0, 0)},
        edge_bounds={"x": (0, 0)},
    )
    F = extract_alpha_tree(net, [0, 0, 0])
    assert F.active_edges == {"x"}
    assert F.active_vertices == {"a"}
    assert F.orientation == {"a": "y"}


def test_extract_requires_extremal_flow(k2):
    with pytest.raises(PreconditionError):
        extract_alpha_tree(k2, [0])
    F = extract_alpha_tree(k2, [1])
    assert F.active_edges == {"e0"}


@pytest.mark.parametrize("seed", range(12))
def test_every_extreme_point_has_a_conforming_alpha_tree(seed):
    topology = list(Topology)[seed % len(Topology)]
    net = generate(
        GeneratorConfig(
            seed=seed,
            min_vertices=4 if topology is Topology.NON_CACTUS else 3,
            max_vertices=5,
            topology=topology,
            bound_style=BoundStyle.RANDOM_FINITE,
        )
    )
    for f in enumerate_vertices(net):
        F = extract_alpha_tree(net, f)
        assert is_alpha_tree(net, F)
        assert conforms(net, f, F)
        assert max_conforming_forest_size(net, f) == net.n - 1


@pytest.mark.parametrize("seed", range(8))
def test_on_cacti_conforming_alpha_tree_means_extremal(seed):
    net = generate(
        GeneratorConfig(
            seed=seed, min_vertices=3, max_vertices=5, topology=Topology.CACTUS, bound_style=BoundStyle.RANDOM_FINITE
        )
    )
    vertices = enumerate_vertices(net)
    points = list(vertices) + [tuple((x + y) / 2 for x, y in zip(a, b)) for a, b in combinations(vertices, 2)]
    points.append((Fraction(0),) * net.m)
    for f in points:
        active = active_set(net, f)
        conforming = any(
            conforms(net, f, F) for F in enumerate_alpha_trees(net, active.edges, active.vertices)
        )
        assert conforming == is_extremal(net, f).is_extremal


@pytest.mark.parametrize("seed", range(12))
def test_active_rank_matches_largest_alpha_forest_on_cacti(seed):
    net = generate(
        GeneratorConfig(
            seed=seed, min_vertices=3, max_vertices=5, topology=Topology.CACTUS, bound_style=BoundStyle.RANDOM_FINITE
        )
    )
    vertices = enumerate_vertices(net)
    points = [tuple((x + y) / 2 for x, y in zip(a, b)) for a, b in combinations(vertices, 2)][:20]
    if vertices:
        points.append(tuple(sum(column) / len(vertices) for column in zip(*vertices)))
    for f in points:
        if is_extremal(net, f).is_extremal:
            continue
        assert active_rows(net, active_set(net, f)).rank() == max_conforming_forest_size(net, f)
