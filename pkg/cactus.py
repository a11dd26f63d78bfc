"""Cactus recognition and diamond topological minors.

Functions take either a Network or an undirected ``networkx.Graph``. Edges are
reported by id: the network edge id, or the ``id`` edge attribute of a graph,
falling back to ``"u-v"``.
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Tuple, Union

import networkx as nx

import config
from errors import BudgetExceededError, PreconditionError
from network import Network

logger = logging.getLogger(__name__)

GraphLike = Union[Network, nx.Graph]


@dataclass(frozen=True)
class DiamondMinor:
    v: str
    w: str
    paths: Tuple[Tuple[str, ...], ...]
    vertex_paths: Tuple[Tuple[str, ...], ...]


@dataclass(frozen=True)
class CactusReport:
    is_cactus: bool
    violating_edge: Optional[str] = None
    diamond: Optional[DiamondMinor] = None

    def __bool__(self) -> bool:
        return self.is_cactus


def as_graph(graph: GraphLike) -> nx.Graph:
    """Undirected graph with an ``id`` on every edge"""
    if isinstance(graph, Network):
        return graph.to_graph()
    if graph.is_directed() or graph.is_multigraph():
        raise PreconditionError("expected a simple undirected graph")
    result = nx.Graph()
    result.add_nodes_from(graph.nodes)
    for index, (u, v, data) in enumerate(graph.edges(data=True)):
        if u == v:
            raise PreconditionError(f"self-loop at {u!r}")
        result.add_edge(u, v, id=data.get("id", f"{u}-{v}"), index=data.get("index", index))
    return result


def _require_connected(graph: nx.Graph) -> None:
    if graph.number_of_nodes() == 0 or not nx.is_connected(graph):
        raise PreconditionError("graph must be connected")


def is_cactus(graph: GraphLike, find_minor: bool = False) -> CactusReport:
    """Linear-time test: mark each back edge's fundamental cycle, fail on a second mark"""
    g = as_graph(graph)
    _require_connected(g)
    root = next(iter(g.nodes))
    parent: Dict = {root: None}
    depth = {root: 0}
    marked = set()
    stack = [(root, iter(g[root]))]
    while stack:
        u, neighbours = stack[-1]
        advanced = False
        for x in neighbours:
            if x not in depth:
                parent[x] = u
                depth[x] = depth[u] + 1
                stack.append((x, iter(g[x])))
                advanced = True
                break
            if x == parent[u] or depth[x] > depth[u]:
                continue
            # back edge u -> ancestor x
            marked.add(g[u][x]["id"])
            node = u
            while node != x:
                tree_edge = g[node][parent[node]]["id"]
                if tree_edge in marked:
                    logger.debug(f"edge {tree_edge} lies on two cycles")
                    diamond = find_diamond_minor(g) if find_minor else None
                    return CactusReport(False, tree_edge, diamond)
                marked.add(tree_edge)
                node = parent[node]
        if not advanced:
            stack.pop()
    return CactusReport(True)


def _path_edges(g: nx.Graph, nodes: List) -> Tuple[str, ...]:
    return tuple(g[a][b]["id"] for a, b in zip(nodes, nodes[1:]))


def find_diamond_minor(graph: GraphLike) -> Optional[DiamondMinor]:
    """Three internally vertex-disjoint paths between two branch vertices, or None for a cactus.

    Branch pairs are tried among vertices of degree >= 3 in node order. Any
    three disjoint paths qualify: without parallel edges at most one of them
    is a single edge.
    """
    g = as_graph(graph)
    _require_connected(g)
    if is_cactus(g).is_cactus:
        return None
    branch = [x for x in g.nodes if g.degree(x) >= 3]
    for v, w in combinations(branch, 2):
        paths = list(nx.node_disjoint_paths(g, v, w, cutoff=3))
        if len(paths) < 3:
            continue
        paths.sort(key=lambda nodes: (len(nodes), sorted(g[a][b]["index"] for a, b in zip(nodes, nodes[1:]))))
        paths = paths[:3]
        return DiamondMinor(
            str(v),
            str(w),
            tuple(_path_edges(g, p) for p in paths),
            tuple(tuple(str(x) for x in p) for p in paths),
        )
    raise PreconditionError("graph is not a cactus but no diamond minor was found")


def simple_cycles_oracle(graph: GraphLike, cap: int = None) -> List[frozenset]:
    """Edge sets of all simple cycles, for cross-checking at small sizes"""
    cap = config.SIMPLE_CYCLE_VERTEX_CAP if cap is None else cap
    g = as_graph(graph)
    if g.number_of_nodes() > cap:
        raise BudgetExceededError(f"simple-cycle enumeration is capped at {cap} vertices")
    cycles = set()
    for nodes in nx.simple_cycles(g):
        if len(nodes) < 3:
            continue
        closed = list(nodes) + [nodes[0]]
        cycles.add(frozenset(_path_edges(g, closed)))
    return sorted(cycles, key=lambda c: sorted(c))


def brute_force_is_cactus(graph: GraphLike, cap: int = None) -> bool:
    """True iff no edge lies on two distinct simple cycles"""
    seen = set()
    for cycle in simple_cycles_oracle(graph, cap):
        if seen & cycle:
            return False
        seen |= cycle
    return True
