"""Network data model and the matrices derived from it.

Sign conventions: the incidence matrix A has ``A[v][e] = +1`` when edge ``e``
ends at ``v`` and ``-1`` when it starts there; ``B = A diag(b)``; the nodal
admittance matrix is ``A B^T``. A differential flow is ``f = B^T phi``, i.e.
``f_e = b_e (phi_head - phi_tail)``, and the injection of a vertex is its
outflow minus its inflow, ``-A f``.
"""
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from errors import NetworkValidationError, PreconditionError, UnknownElementError
from linalg import RationalMatrix
from rational import Bound, RationalLike, to_bound, to_fraction

logger = logging.getLogger(__name__)

Flow = Tuple[Fraction, ...]
Potential = Tuple[Fraction, ...]


@dataclass(frozen=True)
class Vertex:
    id: str
    p_lo: Bound = None
    p_hi: Bound = None


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    b: Fraction = Fraction(1)
    f_lo: Bound = None
    f_hi: Bound = None

    @property
    def endpoints(self) -> Tuple[str, str]:
        return self.tail, self.head

    def other(self, vertex: str) -> str:
        return self.head if vertex == self.tail else self.tail


@dataclass(frozen=True)
class Network:
    """Weakly connected, anti-symmetric directed graph with elasticities and bounds."""

    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        self._validate()

    def _validate(self):
        if not self.vertices:
            raise NetworkValidationError("vertices: a network needs at least one vertex")
        seen = set()
        for i, vertex in enumerate(self.vertices):
            if vertex.id in seen:
                raise NetworkValidationError(f"vertices[{i}].id: duplicate vertex id {vertex.id!r}")
            seen.add(vertex.id)
            if vertex.p_lo is not None and vertex.p_hi is not None and vertex.p_lo > vertex.p_hi:
                raise NetworkValidationError(f"vertices[{i}]: p_lo {vertex.p_lo} exceeds p_hi {vertex.p_hi}")
        edge_ids = set()
        pairs = set()
        for i, edge in enumerate(self.edges):
            if edge.id in edge_ids:
                raise NetworkValidationError(f"edges[{i}].id: duplicate edge id {edge.id!r}")
            edge_ids.add(edge.id)
            for end in ("tail", "head"):
                if getattr(edge, end) not in seen:
                    raise NetworkValidationError(f"edges[{i}].{end}: unknown vertex {getattr(edge, end)!r}")
            if edge.tail == edge.head:
                raise NetworkValidationError(f"edges[{i}]: self-loop at {edge.tail!r}")
            pair = frozenset((edge.tail, edge.head))
            if pair in pairs:
                raise NetworkValidationError(
                    f"edges[{i}]: second edge between {edge.tail!r} and {edge.head!r} (network must be anti-symmetric)"
                )
            pairs.add(pair)
            if edge.b <= 0:
                raise NetworkValidationError(f"edges[{i}].b: elasticity must be positive, got {edge.b}")
            if edge.f_lo is not None and edge.f_hi is not None and edge.f_lo > edge.f_hi:
                raise NetworkValidationError(f"edges[{i}]: f_lo {edge.f_lo} exceeds f_hi {edge.f_hi}")
        if not nx.is_connected(self.to_graph()):
            raise NetworkValidationError("edges: underlying undirected graph is not connected")

    @classmethod
    def from_arcs(
        cls,
        vertex_ids: Sequence[str],
        arcs: Sequence[Tuple[str, str]],
        b: Optional[Sequence[RationalLike]] = None,
        edge_ids: Optional[Sequence[str]] = None,
        vertex_bounds: Optional[Mapping[str, Tuple[Optional[RationalLike], Optional[RationalLike]]]] = None,
        edge_bounds: Optional[Mapping[str, Tuple[Optional[RationalLike], Optional[RationalLike]]]] = None,
    ) -> "Network":
        """Convenience constructor: arcs in order, ids ``e0, e1, ...`` unless given, bounds free unless given"""
        if edge_ids is None:
            edge_ids = [f"e{i}" for i in range(len(arcs))]
        if b is None:
            b = [1] * len(arcs)
        if len(edge_ids) != len(arcs) or len(b) != len(arcs):
            raise NetworkValidationError("edges: arcs, edge ids and elasticities differ in length")
        vertex_bounds = vertex_bounds or {}
        edge_bounds = edge_bounds or {}
        vertices = []
        for vid in vertex_ids:
            lo, hi = vertex_bounds.get(vid, (None, None))
            vertices.append(Vertex(vid, to_bound(lo), to_bound(hi)))
        edges = []
        for eid, (tail, head), weight in zip(edge_ids, arcs, b):
            lo, hi = edge_bounds.get(eid, (None, None))
            edges.append(Edge(eid, tail, head, to_fraction(weight), to_bound(lo), to_bound(hi)))
        return cls(tuple(vertices), tuple(edges))

    # identifiers and lookups

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def vertex_ids(self) -> Tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    @cached_property
    def edge_ids(self) -> Tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    @cached_property
    def vertex_index(self) -> Dict[str, int]:
        return {vid: i for i, vid in enumerate(self.vertex_ids)}

    @cached_property
    def edge_index(self) -> Dict[str, int]:
        return {eid: i for i, eid in enumerate(self.edge_ids)}

    @cached_property
    def incident(self) -> Dict[str, Tuple[int, ...]]:
        """Edge indices incident to each vertex, in input order"""
        incident: Dict[str, List[int]] = {vid: [] for vid in self.vertex_ids}
        for i, edge in enumerate(self.edges):
            incident[edge.tail].append(i)
            incident[edge.head].append(i)
        return {vid: tuple(indices) for vid, indices in incident.items()}

    def vertex(self, vertex_id: str) -> Vertex:
        try:
            return self.vertices[self.vertex_index[vertex_id]]
        except KeyError:
            raise UnknownElementError(f"unknown vertex id {vertex_id!r}")

    def edge(self, edge_id: str) -> Edge:
        try:
            return self.edges[self.edge_index[edge_id]]
        except KeyError:
            raise UnknownElementError(f"unknown edge id {edge_id!r}")

    def require_vertices(self, vertex_ids) -> None:
        for vid in vertex_ids:
            if vid not in self.vertex_index:
                raise UnknownElementError(f"unknown vertex id {vid!r}")

    def require_edges(self, edge_ids) -> None:
        for eid in edge_ids:
            if eid not in self.edge_index:
                raise UnknownElementError(f"unknown edge id {eid!r}")

    def degree(self, vertex_id: str) -> int:
        return len(self.incident[vertex_id])

    def edge_between(self, u: str, v: str) -> Optional[Edge]:
        for i in self.incident[u]:
            if self.edges[i].other(u) == v:
                return self.edges[i]
        return None

    def to_graph(self) -> nx.Graph:
        """Underlying undirected graph; nodes are vertex ids, edges carry ``id`` and ``index``"""
        graph = nx.Graph()
        graph.add_nodes_from(v.id for v in self.vertices)
        for i, edge in enumerate(self.edges):
            graph.add_edge(edge.tail, edge.head, id=edge.id, index=i)
        return graph

    # derived networks

    def with_bounds(
        self,
        p_lo: Sequence[Bound],
        p_hi: Sequence[Bound],
        f_lo: Sequence[Bound],
        f_hi: Sequence[Bound],
    ) -> "Network":
        if not (len(p_lo) == len(p_hi) == self.n and len(f_lo) == len(f_hi) == self.m):
            raise PreconditionError("bound vectors do not match the network size")
        vertices = tuple(replace(v, p_lo=lo, p_hi=hi) for v, lo, hi in zip(self.vertices, p_lo, p_hi))
        edges = tuple(replace(e, f_lo=lo, f_hi=hi) for e, lo, hi in zip(self.edges, f_lo, f_hi))
        return Network(vertices, edges)

    def with_elasticity(self, b: Sequence[RationalLike]) -> "Network":
        if len(b) != self.m:
            raise PreconditionError("elasticity vector does not match the network size")
        return Network(self.vertices, tuple(replace(e, b=to_fraction(w)) for e, w in zip(self.edges, b)))

    def free(self) -> "Network":
        """Same graph and elasticities with every bound infinite"""
        return self.with_bounds([None] * self.n, [None] * self.n, [None] * self.m, [None] * self.m)


def as_flow(net: Network, values: Sequence) -> Flow:
    if len(values) != net.m:
        raise PreconditionError(f"flow has {len(values)} entries, network has {net.m} edges")
    return tuple(Fraction(x) for x in values)


def as_potential(net: Network, values: Sequence) -> Potential:
    if len(values) != net.n:
        raise PreconditionError(f"potential has {len(values)} entries, network has {net.n} vertices")
    return tuple(Fraction(x) for x in values)


def flow_from_mapping(net: Network, mapping: Mapping[str, RationalLike]) -> Flow:
    net.require_edges(mapping)
    missing = [eid for eid in net.edge_ids if eid not in mapping]
    if missing:
        raise PreconditionError(f"flow has no value for edge {missing[0]!r}")
    return tuple(to_fraction(mapping[eid]) for eid in net.edge_ids)


def potential_from_mapping(net: Network, mapping: Mapping[str, RationalLike]) -> Potential:
    net.require_vertices(mapping)
    missing = [vid for vid in net.vertex_ids if vid not in mapping]
    if missing:
        raise PreconditionError(f"potential has no value for vertex {missing[0]!r}")
    return tuple(to_fraction(mapping[vid]) for vid in net.vertex_ids)


@lru_cache(maxsize=256)
def incidence_matrix(net: Network) -> RationalMatrix:
    """A with rows in vertex order and columns in edge order"""
    rows = [[0] * net.m for _ in range(net.n)]
    for j, edge in enumerate(net.edges):
        rows[net.vertex_index[edge.tail]][j] = -1
        rows[net.vertex_index[edge.head]][j] = 1
    return RationalMatrix(rows, cols=net.m)


@lru_cache(maxsize=256)
def elasticity_matrix(net: Network) -> RationalMatrix:
    return incidence_matrix(net).scale_columns([e.b for e in net.edges])


@lru_cache(maxsize=256)
def admittance_matrix(net: Network) -> RationalMatrix:
    """Nodal admittance A B^T: weighted Laplacian of the underlying graph"""
    return incidence_matrix(net) @ elasticity_matrix(net).transpose()


def potential_to_flow(net: Network, phi: Sequence) -> Flow:
    """f = B^T phi"""
    phi = as_potential(net, phi)
    return tuple(
        e.b * (phi[net.vertex_index[e.head]] - phi[net.vertex_index[e.tail]]) for e in net.edges
    )


def injection(net: Network, f: Sequence) -> Tuple[Fraction, ...]:
    """-A f: outflow minus inflow at every vertex"""
    f = as_flow(net, f)
    out = [Fraction(0)] * net.n
    for value, edge in zip(f, net.edges):
        out[net.vertex_index[edge.tail]] += value
        out[net.vertex_index[edge.head]] -= value
    return tuple(out)
