from fractions import Fraction

import pytest

from network import Network

WHEATSTONE_VERTICES = ["w", "v", "s", "t"]
WHEATSTONE_ARCS = [("w", "v"), ("w", "s"), ("v", "s"), ("w", "t"), ("v", "t")]
WHEATSTONE_EDGES = ["w-v", "w-s", "v-s", "w-t", "v-t"]


def wheatstone(b_wt=1) -> Network:
    """Diamond with v, w pinned to zero injection and the bridge edge fixed at zero flow"""
    return Network.from_arcs(
        WHEATSTONE_VERTICES,
        WHEATSTONE_ARCS,
        b=[1, 1, 1, b_wt, 1],
        edge_ids=WHEATSTONE_EDGES,
        vertex_bounds={"w": (0, 0), "v": (0, 0)},
        edge_bounds={"w-v": (0, 0)},
    )


@pytest.fixture
def k2():
    return Network.from_arcs(["v", "w"], [("v", "w")], edge_bounds={"e0": (-1, 1)})


@pytest.fixture
def triangle():
    return Network.from_arcs(["v", "w", "x"], [("v", "w"), ("w", "x"), ("v", "x")])


@pytest.fixture
def bounded_triangle():
    bounds = {eid: (-1, 1) for eid in ("e0", "e1", "e2")}
    return Network.from_arcs(["v", "w", "x"], [("v", "w"), ("w", "x"), ("v", "x")], edge_bounds=bounds)


@pytest.fixture
def bowtie():
    """Two triangles sharing w: a cactus"""
    return Network.from_arcs(
        ["v", "w", "y", "z", "x"],
        [("v", "w"), ("v", "y"), ("w", "y"), ("w", "z"), ("w", "x"), ("z", "x")],
    )


@pytest.fixture
def balanced_wheatstone():
    return wheatstone()


@pytest.fixture
def unbalanced_wheatstone():
    return wheatstone(b_wt=2)


@pytest.fixture
def subdivided_diamond():
    """Three internally disjoint v-w paths of lengths 2, 2 and 3"""
    return Network.from_arcs(
        ["v", "a", "b", "c", "d", "w"],
        [("v", "a"), ("a", "w"), ("v", "b"), ("b", "w"), ("v", "c"), ("c", "d"), ("d", "w")],
    )


CONTRACTION_VERTICES = ["s11", "s12", "v1", "v2", "v3", "s3", "v4", "s4", "s5"]
CONTRACTION_ARCS = [
    ("v2", "v1"),
    ("v2", "v3"),
    ("s11", "s12"),
    ("v4", "s4"),
    ("v1", "s11"),
    ("v1", "s12"),
    ("v2", "s12"),
    ("v2", "s3"),
    ("v3", "s3"),
    ("v3", "s4"),
    ("v4", "s5"),
]


@pytest.fixture
def contraction_network():
    """Zero flow with e0..e3 fixed and v1..v4 pinned: an extreme point with five active components"""
    zero = Fraction(0)
    return Network.from_arcs(
        CONTRACTION_VERTICES,
        CONTRACTION_ARCS,
        vertex_bounds={vid: (zero, zero) for vid in ("v1", "v2", "v3", "v4")},
        edge_bounds={eid: (zero, zero) for eid in ("e0", "e1", "e2", "e3")},
    )


@pytest.fixture
def k2_document():
    return {
        "vertices": [{"id": "v"}, {"id": "w"}],
        "edges": [{"id": "e0", "tail": "v", "head": "w", "f_lo": "-1", "f_hi": "1"}],
    }


@pytest.fixture
def diamond_document():
    """Unbounded Wheatstone graph as a network document"""
    return {
        "vertices": [{"id": vid} for vid in WHEATSTONE_VERTICES],
        "edges": [
            {"id": eid, "tail": tail, "head": head} for eid, (tail, head) in zip(WHEATSTONE_EDGES, WHEATSTONE_ARCS)
        ],
    }
