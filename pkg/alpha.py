"""Alpha-forests, conformance, and the constructive alpha-tree extraction for extreme points."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
from networkx.utils import UnionFind

import config
from errors import (
    BudgetExceededError,
    ConsistencyError,
    InfeasibleFlowError,
    LinkGraphError,
    PreconditionError,
)
from linalg import EchelonBasis, RationalMatrix
from network import Network, admittance_matrix, as_flow, elasticity_matrix, injection
from polytope import constraint_rows, is_extremal, is_feasible

logger = logging.getLogger(__name__)

Orientation = Dict[str, str]


@dataclass(frozen=True)
class AlphaForest:
    active_edges: FrozenSet[str] = frozenset()
    active_vertices: FrozenSet[str] = frozenset()
    orientation: Optional[Mapping[str, str]] = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "active_edges", frozenset(self.active_edges))
        object.__setattr__(self, "active_vertices", frozenset(self.active_vertices))
        if self.orientation is not None:
            object.__setattr__(self, "orientation", dict(self.orientation))

    @property
    def size(self) -> int:
        return len(self.active_edges) + len(self.active_vertices)


@dataclass(frozen=True)
class AlphaValidation:
    valid: bool
    reason: Optional[str] = None
    orientation: Optional[Orientation] = None

    def __bool__(self) -> bool:
        return self.valid


class _RollbackUnionFind:
    """Union-find without path compression so unions can be undone in LIFO order."""

    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.size = {x: 1 for x in items}
        self.history = []

    def find(self, x):
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.history.append((ra, rb))
        return True

    def rollback(self):
        ra, rb = self.history.pop()
        self.parent[rb] = rb
        self.size[ra] -= self.size[rb]


def _forest_union(net: Network, edge_ids) -> Optional[UnionFind]:
    """Union-find over the given edges, or None if they close an undirected cycle"""
    forest = UnionFind(net.vertex_ids)
    for eid in edge_ids:
        edge = net.edge(eid)
        if forest[edge.tail] == forest[edge.head]:
            return None
        forest.union(edge.tail, edge.head)
    return forest


def is_acyclic(net: Network, edge_ids) -> bool:
    return _forest_union(net, edge_ids) is not None


def _ordered(net: Network, vertex_ids) -> List[str]:
    return [vid for vid in net.vertex_ids if vid in set(vertex_ids)]


def find_orientation(net: Network, E_F, V_F) -> Optional[Orientation]:
    """Injective alpha: V_F -> E \\ E_F with E_F plus alpha(V_F) acyclic, or None.

    Backtracking over V_F in decreasing degree order, pruning any edge that
    would close a cycle with what is already chosen.
    """
    net.require_edges(E_F)
    net.require_vertices(V_F)
    E_F = set(E_F)
    forest = _RollbackUnionFind(net.vertex_ids)
    for eid in sorted(E_F, key=net.edge_index.get):
        edge = net.edge(eid)
        if not forest.union(edge.tail, edge.head):
            return None
    order = sorted(_ordered(net, V_F), key=lambda v: -net.degree(v))
    candidates = {
        v: [net.edges[i].id for i in net.incident[v] if net.edges[i].id not in E_F] for v in order
    }
    chosen: Orientation = {}
    used = set()

    def assign(k: int) -> bool:
        if k == len(order):
            return True
        v = order[k]
        for eid in candidates[v]:
            if eid in used:
                continue
            edge = net.edge(eid)
            if not forest.union(edge.tail, edge.head):
                continue
            chosen[v] = eid
            used.add(eid)
            if assign(k + 1):
                return True
            used.discard(eid)
            del chosen[v]
            forest.rollback()
        return False

    if assign(0):
        return dict(chosen)
    return None


def find_orientation_exhaustive(net: Network, E_F, V_F, cap: int = None) -> Optional[Orientation]:
    """Reference search over every assignment of incident edges"""
    cap = config.ORIENTATION_EXHAUSTIVE_CAP if cap is None else cap
    if len(V_F) > cap:
        raise BudgetExceededError(f"exhaustive orientation search is capped at {cap} active vertices")
    E_F = set(E_F)
    if not is_acyclic(net, E_F):
        return None
    order = _ordered(net, V_F)
    options = [[net.edges[i].id for i in net.incident[v] if net.edges[i].id not in E_F] for v in order]
    for assignment in product(*options):
        if len(set(assignment)) != len(assignment):
            continue
        if is_acyclic(net, list(E_F) + list(assignment)):
            return dict(zip(order, assignment))
    return None


def alpha_tree_candidates(net: Network, edge_pool=None, vertex_pool=None):
    """Pairs (E_F, V_F) with |E_F| + |V_F| = |V| - 1 and E_F acyclic.

    Ordered by |V_F| ascending, then vertex combinations, then edge
    combinations, both in input order. Orientation is left to the caller.
    """
    edges = [eid for eid in net.edge_ids if edge_pool is None or eid in edge_pool]
    vertices = [vid for vid in net.vertex_ids if vertex_pool is None or vid in vertex_pool]
    target = net.n - 1
    for k in range(0, min(target, len(vertices)) + 1):
        if target - k > len(edges):
            continue
        for V_F in combinations(vertices, k):
            for E_F in combinations(edges, target - k):
                if is_acyclic(net, E_F):
                    yield E_F, V_F


def enumerate_alpha_trees(net: Network, edge_pool=None, vertex_pool=None):
    """Alpha-trees with an orientation, drawn from the given pools"""
    for E_F, V_F in alpha_tree_candidates(net, edge_pool, vertex_pool):
        orientation = find_orientation(net, E_F, V_F)
        if orientation is not None:
            yield AlphaForest(frozenset(E_F), frozenset(V_F), orientation)


def validate_alpha_forest(net: Network, F: AlphaForest) -> AlphaValidation:
    net.require_edges(F.active_edges)
    net.require_vertices(F.active_vertices)
    if F.size > net.n - 1:
        return AlphaValidation(False, f"size {F.size} exceeds |V|-1 = {net.n - 1}")
    if not is_acyclic(net, F.active_edges):
        return AlphaValidation(False, "active edges contain an undirected cycle")
    if F.orientation is None:
        orientation = find_orientation(net, F.active_edges, F.active_vertices)
        if orientation is None:
            return AlphaValidation(False, "no vertex orientation keeps the forest acyclic")
        return AlphaValidation(True, None, orientation)
    orientation = F.orientation
    if set(orientation) != set(F.active_vertices):
        return AlphaValidation(False, "orientation domain differs from the active vertices")
    net.require_edges(orientation.values())
    if len(set(orientation.values())) != len(orientation):
        return AlphaValidation(False, "orientation is not injective")
    for v, eid in orientation.items():
        if v not in net.edge(eid).endpoints:
            return AlphaValidation(False, f"orientation edge {eid} is not incident to {v}")
        if eid in F.active_edges:
            return AlphaValidation(False, f"orientation edge {eid} is an active edge")
    if not is_acyclic(net, list(F.active_edges) + list(orientation.values())):
        return AlphaValidation(False, "active edges plus oriented edges close a cycle")
    return AlphaValidation(True, None, dict(orientation))


def is_alpha_tree(net: Network, F: AlphaForest) -> bool:
    result = validate_alpha_forest(net, F)
    if not result.valid:
        raise PreconditionError(f"not an alpha-forest: {result.reason}")
    return F.size == net.n - 1


def conforms(net: Network, f: Sequence, F: AlphaForest) -> bool:
    f = as_flow(net, f)
    report = is_feasible(net, f)
    if not report.feasible:
        raise InfeasibleFlowError(f"flow is infeasible: {report.violation}")
    result = validate_alpha_forest(net, F)
    if not result.valid:
        raise PreconditionError(f"not an alpha-forest: {result.reason}")
    for eid in F.active_edges:
        edge = net.edge(eid)
        value = f[net.edge_index[eid]]
        if value not in (edge.f_lo, edge.f_hi):
            return False
    p = injection(net, f)
    for vid in F.active_vertices:
        vertex = net.vertex(vid)
        if p[net.vertex_index[vid]] not in (vertex.p_lo, vertex.p_hi):
            return False
    return True


@dataclass(frozen=True)
class ContractionResult:
    components: Tuple[Tuple[str, ...], ...]
    C: RationalMatrix
    row_index: Tuple[str, ...]
    col_index: Tuple[str, ...]

    def component_of(self, vertex_id: str) -> str:
        for cid, members in zip(self.col_index, self.components):
            if vertex_id in members:
                return cid
        raise KeyError(vertex_id)


def contract_active(net: Network, E_star, V_star) -> ContractionResult:
    """Collapse each component of (V, E*) onto its smallest vertex and keep the V* rows.

    Entry (v, S_j) is the sum of row (A B^T)_v over the columns of S_j.
    """
    net.require_edges(E_star)
    net.require_vertices(V_star)
    if len(E_star) + len(V_star) != net.n - 1:
        raise PreconditionError(f"|E*| + |V*| = {len(E_star) + len(V_star)}, expected {net.n - 1}")
    rank_active = constraint_rows(net, E_star, V_star).rank()
    if rank_active != net.n - 1:
        raise PreconditionError(f"active rows have rank {rank_active} < {net.n - 1}")
    forest = _forest_union(net, E_star)
    groups: Dict[str, List[str]] = {}
    for vid in net.vertex_ids:
        groups.setdefault(forest[vid], []).append(vid)
    components = tuple(sorted((tuple(g) for g in groups.values()), key=lambda g: net.vertex_index[g[0]]))
    col_index = tuple(f"S{j + 1}" for j in range(len(components)))
    where = {vid: j for j, members in enumerate(components) for vid in members}
    row_index = tuple(_ordered(net, V_star))
    laplacian = admittance_matrix(net)
    rows = []
    for vid in row_index:
        row = [Fraction(0)] * len(components)
        for u, value in zip(net.vertex_ids, laplacian.row(net.vertex_index[vid])):
            row[where[u]] += value
        rows.append(row)
    C = RationalMatrix(rows, cols=len(components))
    if len(components) != len(row_index) + 1 or C.rank() != len(row_index):
        raise ConsistencyError("contracted matrix lost rank")
    logger.debug(f"contracted {net.n} vertices into {len(components)} components")
    return ContractionResult(components, C, row_index, col_index)


@dataclass(frozen=True)
class BipartiteLinkGraph:
    W: Tuple[str, ...]
    S: Tuple[str, ...]
    R: Tuple[Tuple[str, str], ...]
    U: Tuple[Tuple[str, str], ...]

    def neighbours(self, w: str, U: Sequence[Tuple[str, str]] = None) -> set:
        U = self.U if U is None else U
        return {s for x, s in self.R if x == w} | {s for x, s in U if x == w}


def hall_surplus_holds(H: BipartiteLinkGraph, U: Sequence[Tuple[str, str]] = None, limit: int = None) -> bool:
    """|N(W')| >= |W'| + 1 for every nonempty W' of W, using R and the given U-edges"""
    limit = config.HALL_BRUTE_FORCE_LIMIT if limit is None else limit
    U = H.U if U is None else U
    if not H.W:
        return True
    neighbours = {w: H.neighbours(w, U) for w in H.W}
    if len(H.W) <= limit:
        for k in range(1, len(H.W) + 1):
            for subset in combinations(H.W, k):
                reached = set().union(*(neighbours[w] for w in subset))
                if len(reached) < k + 1:
                    return False
        return True
    # surplus one everywhere iff every H - s still saturates W
    for s in H.S:
        graph = nx.Graph()
        graph.add_nodes_from(("w", w) for w in H.W)
        graph.add_nodes_from(("s", x) for x in H.S if x != s)
        graph.add_edges_from((("w", w), ("s", x)) for w in H.W for x in neighbours[w] if x != s)
        matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=[("w", w) for w in H.W])
        if sum(1 for w in H.W if ("w", w) in matching) < len(H.W):
            return False
    return True


def build_link_graph(cr: ContractionResult) -> BipartiteLinkGraph:
    R, U = [], []
    for i, w in enumerate(cr.row_index):
        for j, s in enumerate(cr.col_index):
            if cr.C[i, j] > 0:
                R.append((w, s))
            elif cr.C[i, j] < 0:
                U.append((w, s))
    H = BipartiteLinkGraph(tuple(cr.row_index), tuple(cr.col_index), tuple(R), tuple(U))
    if len(H.S) != len(H.W) + 1:
        raise LinkGraphError(f"{len(H.S)} component nodes for {len(H.W)} vertex nodes")
    for w in H.W:
        if sum(1 for x, _ in R if x == w) != 1:
            raise LinkGraphError(f"vertex node {w} does not meet exactly one membership edge")
    if not hall_surplus_holds(H):
        raise LinkGraphError("surplus condition |N(W')| >= |W'| + 1 violated")
    return H


def select_connecting_edges(H: BipartiteLinkGraph) -> Tuple[Tuple[str, str], ...]:
    """Drop U-edges one at a time, keeping the surplus condition, until each w keeps one"""
    w_order = {w: i for i, w in enumerate(H.W)}
    s_order = {s: j for j, s in enumerate(H.S)}
    U = sorted(H.U, key=lambda pair: (w_order[pair[0]], s_order[pair[1]]))
    if not hall_surplus_holds(H, U):
        raise LinkGraphError("surplus condition violated before selection")
    while len(U) > len(H.W):
        for w in H.W:
            own = [pair for pair in U if pair[0] == w]
            if len(own) < 2:
                continue
            for pair in own:
                remaining = [x for x in U if x != pair]
                if hall_surplus_holds(H, remaining):
                    U = remaining
                    break
            else:
                raise LinkGraphError(f"no U-edge at {w} can be dropped")
            break
    tree = nx.Graph()
    tree.add_nodes_from(("w", w) for w in H.W)
    tree.add_nodes_from(("s", s) for s in H.S)
    tree.add_edges_from((("w", w), ("s", s)) for w, s in list(H.R) + U)
    if tree.number_of_edges() != len(H.W) + len(H.S) - 1 or not nx.is_connected(tree):
        raise ConsistencyError("membership and selected edges do not form a tree")
    return tuple(U)


def select_independent_rows(net: Network, edge_ids, vertex_ids) -> Tuple[List[str], List[str]]:
    """Greedy rank augmentation over edge rows then vertex rows, each in input order"""
    basis = EchelonBasis(net.n)
    bt = elasticity_matrix(net).transpose()
    laplacian = admittance_matrix(net)
    chosen_edges, chosen_vertices = [], []
    for i, eid in enumerate(net.edge_ids):
        if eid in edge_ids and basis.add(bt.row(i)):
            chosen_edges.append(eid)
    for i, vid in enumerate(net.vertex_ids):
        if vid in vertex_ids and basis.add(laplacian.row(i)):
            chosen_vertices.append(vid)
    return chosen_edges, chosen_vertices


def extract_alpha_tree(net: Network, f: Sequence) -> AlphaForest:
    f = as_flow(net, f)
    certificate = is_extremal(net, f)
    if not certificate.is_extremal:
        raise PreconditionError(f"flow is not extremal (active rank {certificate.rank_active})")
    E_star, V_star = select_independent_rows(net, certificate.active.edges, certificate.active.vertices)
    cr = contract_active(net, E_star, V_star)
    H = build_link_graph(cr)
    members = dict(zip(cr.col_index, cr.components))
    orientation = {}
    for w, s in select_connecting_edges(H):
        target = set(members[s])
        edge_index = min(
            (i for i in net.incident[w] if net.edges[i].other(w) in target),
            key=lambda i: net.edges[i].id,
        )
        orientation[w] = net.edges[edge_index].id
    F = AlphaForest(frozenset(E_star), frozenset(V_star), orientation)
    if not (is_alpha_tree(net, F) and conforms(net, f, F)):
        raise ConsistencyError("extracted forest is not a conforming alpha-tree")
    return F
