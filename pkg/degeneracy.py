"""Degeneracy: witnesses on non-cacti, sufficient extremality conditions,
generalized differential flows and the small-scale non-degeneracy test."""
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
from networkx.utils import UnionFind

import config
from alpha import (
    AlphaForest,
    alpha_tree_candidates,
    conforms,
    enumerate_alpha_trees,
    find_orientation,
    is_alpha_tree,
    validate_alpha_forest,
)
from cactus import find_diamond_minor
from errors import BudgetExceededError, ConsistencyError, PreconditionError
from linalg import RationalMatrix
from network import (
    Flow,
    Network,
    Potential,
    admittance_matrix,
    as_flow,
    potential_to_flow,
)
from polytope import (
    ExtremalityCertificate,
    bound_violation,
    constraint_rows,
    enumerate_vertices,
    is_extremal,
    is_feasible,
)

logger = logging.getLogger(__name__)

PARTS = ("W", "S", "T")
POTENTIAL_BY_PART = {"W": Fraction(0), "S": Fraction(1), "T": Fraction(-1)}


@dataclass(frozen=True)
class DegeneracyWitness:
    network: Network
    alpha_tree: AlphaForest
    flow: Flow
    direction: Potential
    partition: Mapping[str, str] = field(hash=False)
    branch: Tuple[str, str] = ("", "")


def _grow(net: Network, label: Dict[str, str], part: str, tree: List[int]) -> None:
    """Extend ``part`` by the smallest-index edge into an unlabelled vertex until none is left"""
    while True:
        for i, edge in enumerate(net.edges):
            a, b = label.get(edge.tail), label.get(edge.head)
            if a == part and b is None:
                label[edge.head] = part
            elif b == part and a is None:
                label[edge.tail] = part
            else:
                continue
            tree.append(i)
            break
        else:
            return


def build_degeneracy_witness(graph: Network) -> Optional[DegeneracyWitness]:
    """Bounds, elasticities and a zero flow that conform to an alpha-tree without being extremal.

    Returns None on a cactus. Bounds and elasticities of ``graph`` are
    replaced; only its vertices and arcs are used.
    """
    minor = find_diamond_minor(graph)
    if minor is None:
        return None
    net = graph
    v, w = minor.v, minor.w
    path_vw, path_s, path_t = minor.vertex_paths
    label: Dict[str, str] = {}
    trees: Dict[str, List[int]] = {part: [] for part in PARTS}
    for part, nodes in (("W", list(path_vw)), ("S", list(path_s[1:-1])), ("T", list(path_t[1:-1]))):
        for x in nodes:
            label[x] = part
        for a, b in zip(nodes, nodes[1:]):
            trees[part].append(net.edge_index[net.edge_between(a, b).id])
    for part in PARTS:
        _grow(net, label, part, trees[part])
    if len(label) != net.n:
        raise ConsistencyError("witness trees do not cover every vertex")

    b = [Fraction(1)] * net.m
    for center in (v, w):
        to_s = [i for i in net.incident[center] if label[net.edges[i].other(center)] == "S"]
        to_t = [i for i in net.incident[center] if label[net.edges[i].other(center)] == "T"]
        if not to_s or not to_t:
            raise ConsistencyError(f"branch vertex {center} does not touch both S and T")
        if len(to_s) < len(to_t):
            b[to_s[0]] = Fraction(1 + len(to_t) - len(to_s))
        elif len(to_t) < len(to_s):
            b[to_t[0]] = Fraction(1 + len(to_s) - len(to_t))

    pinned = {i for part in PARTS for i in trees[part]}
    zero = Fraction(0)
    f_bounds = [zero if i in pinned else None for i in range(net.m)]
    p_lo = [zero if vid in (v, w) else None for vid in net.vertex_ids]
    witness_net = net.with_elasticity(b).with_bounds(p_lo, list(p_lo), f_bounds, list(f_bounds))

    orientation = {
        v: net.edge_between(path_s[0], path_s[1]).id,
        w: net.edge_between(path_t[-2], path_t[-1]).id,
    }
    alpha_tree = AlphaForest(frozenset(net.edges[i].id for i in pinned), frozenset((v, w)), orientation)
    direction = tuple(POTENTIAL_BY_PART[label[vid]] for vid in net.vertex_ids)
    partition = {vid: label[vid] for vid in net.vertex_ids}
    logger.info(
        f"degeneracy witness on branch vertices {v}, {w}: "
        f"|W|={sum(1 for x in label.values() if x == 'W')}, "
        f"|S|={sum(1 for x in label.values() if x == 'S')}, "
        f"|T|={sum(1 for x in label.values() if x == 'T')}"
    )
    return DegeneracyWitness(witness_net, alpha_tree, tuple([zero] * net.m), direction, partition, (v, w))


def verify_degeneracy_witness(witness: DegeneracyWitness) -> List[str]:
    """Failed checks, empty when the witness is valid"""
    net = witness.network
    failures = []
    if set(witness.partition) != set(net.vertex_ids) or set(witness.partition.values()) - set(PARTS):
        failures.append("partition does not label every vertex with W, S or T")
    if any(x != 0 for x in witness.flow):
        failures.append("flow is not identically zero")
    if any(x not in (-1, 0, 1) for x in witness.direction):
        failures.append("direction has values outside {-1, 0, 1}")
    if not is_feasible(net, witness.flow).feasible:
        failures.append("flow is infeasible")
        return failures
    validation = validate_alpha_forest(net, witness.alpha_tree)
    if not validation.valid:
        failures.append(f"alpha-tree invalid: {validation.reason}")
        return failures
    if not is_alpha_tree(net, witness.alpha_tree):
        failures.append("alpha-forest is not maximal")
    if not conforms(net, witness.flow, witness.alpha_tree):
        failures.append("flow does not conform to the alpha-tree")
    if is_extremal(net, witness.flow).is_extremal:
        failures.append("flow is extremal")
    direction_flow = potential_to_flow(net, witness.direction)
    if not any(direction_flow):
        failures.append("B^T phi vanishes")
    for eid in witness.alpha_tree.active_edges:
        if direction_flow[net.edge_index[eid]] != 0:
            failures.append(f"B^T phi is nonzero on tree edge {eid}")
    laplacian_phi = admittance_matrix(net).apply(witness.direction)
    for vid in witness.branch:
        if vid not in net.vertex_index or laplacian_phi[net.vertex_index[vid]] != 0:
            failures.append(f"A B^T phi is nonzero at branch vertex {vid}")
    return failures


class Sufficiency(str, Enum):
    CERTIFIED = "certified"
    NOT_APPLICABLE = "not-applicable"


def _require_conforming_tree(net: Network, f: Flow, F: AlphaForest) -> None:
    if not conforms(net, f, F):
        raise PreconditionError("flow does not conform to the alpha-forest")
    if not is_alpha_tree(net, F):
        raise PreconditionError("alpha-forest is not an alpha-tree")


def _certify(net: Network, f: Flow, condition: str) -> Sufficiency:
    if not is_extremal(net, f).is_extremal:
        raise ConsistencyError(f"{condition} certified a flow that is not extremal")
    return Sufficiency.CERTIFIED


def check_suff_one_active_per_component(net: Network, f: Sequence, F: AlphaForest) -> Sufficiency:
    """Certified when every component of (V, E_F) holds at most one active vertex"""
    f = as_flow(net, f)
    _require_conforming_tree(net, f, F)
    forest = UnionFind(net.vertex_ids)
    for eid in F.active_edges:
        edge = net.edge(eid)
        forest.union(edge.tail, edge.head)
    roots = [forest[vid] for vid in F.active_vertices]
    if len(roots) != len(set(roots)):
        return Sufficiency.NOT_APPLICABLE
    return _certify(net, f, "one-active-vertex-per-component")


def check_suff_small_degree(net: Network, f: Sequence, F: AlphaForest) -> Sufficiency:
    """Certified when at most one active vertex has degree three or more"""
    f = as_flow(net, f)
    _require_conforming_tree(net, f, F)
    if sum(1 for vid in F.active_vertices if net.degree(vid) >= 3) > 1:
        return Sufficiency.NOT_APPLICABLE
    return _certify(net, f, "small-degree")


@dataclass(frozen=True)
class GeneralizedElasticity:
    """Nonnegative weights on ordered pairs of a ground set; b'(v, w) and b'(w, v) are independent."""

    ground: Tuple[str, ...]
    weights: Mapping[Tuple[str, str], Fraction] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "ground", tuple(self.ground))
        weights = {}
        members = set(self.ground)
        for (v, w), value in dict(self.weights).items():
            if v not in members or w not in members:
                raise PreconditionError(f"pair ({v}, {w}) is outside the ground set")
            if v == w:
                raise PreconditionError(f"pair ({v}, {w}) repeats an element")
            value = Fraction(value)
            if value < 0:
                raise PreconditionError(f"weight of ({v}, {w}) is negative")
            weights[(v, w)] = value
        object.__setattr__(self, "weights", weights)

    def weight(self, v: str, w: str) -> Fraction:
        return self.weights.get((v, w), Fraction(0))

    def constraint_matrix(self) -> RationalMatrix:
        """Row v maps phi to sum_w b'(v, w) (phi_w - phi_v)"""
        index = {x: i for i, x in enumerate(self.ground)}
        rows = [[Fraction(0)] * len(self.ground) for _ in self.ground]
        for (v, w), value in self.weights.items():
            rows[index[v]][index[w]] += value
            rows[index[v]][index[v]] -= value
        return RationalMatrix(rows, cols=len(self.ground))

    def support_digraph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.ground)
        graph.add_edges_from(pair for pair, value in self.weights.items() if value > 0)
        return graph


def generalized_flow_feasible(ground: Sequence[str], b_prime: GeneralizedElasticity, phi: Sequence) -> bool:
    """Every element balances: sum_w b'(v, w) (phi_w - phi_v) = 0 exactly"""
    if tuple(ground) != b_prime.ground:
        raise PreconditionError("elasticity is defined on a different ground set")
    if len(phi) != len(ground):
        raise PreconditionError(f"potential has {len(phi)} entries for {len(ground)} elements")
    return not any(b_prime.constraint_matrix().apply(phi))


def anti_arborescence(digraph: nx.DiGraph) -> Optional[Dict]:
    """Successor map of a spanning anti-arborescence (sink maps to None), or None"""
    nodes = list(digraph.nodes)
    for sink in nodes:
        if len(nx.ancestors(digraph, sink)) + 1 != len(nodes):
            continue
        successor = {sink: None}
        for u, v in nx.bfs_edges(digraph, sink, reverse=True):
            successor[v] = u
        return successor
    return None


def has_spanning_anti_arborescence(digraph: nx.DiGraph) -> Tuple[bool, Optional[str]]:
    """Whether every vertex reaches a common sink along arcs, and that sink"""
    if digraph.number_of_nodes() == 0:
        return False, None
    successor = anti_arborescence(digraph)
    if successor is None:
        return False, None
    sink = next(x for x, nxt in successor.items() if nxt is None)
    return True, sink


def blocks(net: Network) -> List[frozenset]:
    """Vertex sets of the biconnected blocks; degeneracy only ever lives inside one"""
    return sorted(
        (frozenset(c) for c in nx.biconnected_components(net.to_graph())),
        key=lambda block: min(net.vertex_index[x] for x in block),
    )


class SearchMode(str, Enum):
    FREE = "free"
    FIXED = "fixed"


class NondegeneracyOutcome(str, Enum):
    CERTIFIED_DEGENERATE = "certified-degenerate"
    NO_COUNTEREXAMPLE = "no-counterexample-found"


@dataclass(frozen=True)
class NondegeneracyVerdict:
    outcome: NondegeneracyOutcome
    mode: SearchMode
    examined: int
    network: Optional[Network] = None
    flow: Optional[Flow] = None
    alpha_tree: Optional[AlphaForest] = None
    certificate: Optional[ExtremalityCertificate] = None

    @property
    def degenerate(self) -> bool:
        return self.outcome is NondegeneracyOutcome.CERTIFIED_DEGENERATE


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceededError(f"non-degeneracy search exceeded its budget of {self.limit} candidates")


def _degenerate(mode, budget, net, f, F) -> NondegeneracyVerdict:
    certificate = is_extremal(net, f)
    if certificate.is_extremal or not conforms(net, f, F) or not is_alpha_tree(net, F):
        raise ConsistencyError("constructed counterexample does not check out")
    logger.info(f"certified degenerate after {budget.used} candidates ({mode.value} bounds)")
    return NondegeneracyVerdict(
        NondegeneracyOutcome.CERTIFIED_DEGENERATE, mode, budget.used, net, f, F, certificate
    )


def _search_free(net: Network, budget: _Budget) -> Optional[NondegeneracyVerdict]:
    """A rank-deficient alpha-tree is degenerate once its own constraints are pinned at zero"""
    for E_F, V_F in alpha_tree_candidates(net):
        budget.spend()
        if constraint_rows(net, E_F, V_F).rank() == net.n - 1:
            continue
        orientation = find_orientation(net, E_F, V_F)
        if orientation is None:
            continue
        zero = Fraction(0)
        f_bounds = [zero if eid in E_F else None for eid in net.edge_ids]
        p_bounds = [zero if vid in V_F else None for vid in net.vertex_ids]
        pinned = net.with_bounds(p_bounds, list(p_bounds), f_bounds, list(f_bounds))
        F = AlphaForest(frozenset(E_F), frozenset(V_F), orientation)
        return _degenerate(SearchMode.FREE, budget, pinned, tuple([zero] * net.m), F)
    return None


def _row_values(net: Network, E_F, V_F) -> List[List[Fraction]]:
    """Finite bound values per chosen row, vertex values negated to match (A B^T) phi"""
    options = []
    for eid in net.edge_ids:
        if eid in E_F:
            edge = net.edge(eid)
            options.append(sorted({x for x in (edge.f_lo, edge.f_hi) if x is not None}))
    for vid in net.vertex_ids:
        if vid in V_F:
            vertex = net.vertex(vid)
            options.append(sorted({-x for x in (vertex.p_lo, vertex.p_hi) if x is not None}))
    return options


def _interval_point(net: Network, phi: Potential, direction: Sequence[Fraction]) -> Optional[Potential]:
    """A point phi + t*direction inside every bound, near the middle of the feasible t-range"""
    f0, df = potential_to_flow(net, phi), potential_to_flow(net, direction)
    laplacian = admittance_matrix(net)
    p0 = [-x for x in laplacian.apply(phi)]
    dp = [-x for x in laplacian.apply(direction)]
    low, high = None, None
    checks = [(a, d, e.f_lo, e.f_hi) for a, d, e in zip(f0, df, net.edges)]
    checks += [(a, d, v.p_lo, v.p_hi) for a, d, v in zip(p0, dp, net.vertices)]
    for value, step, lower, upper in checks:
        for bound, sign in ((lower, 1), (upper, -1)):
            if bound is None:
                continue
            # need sign * (value + t * step - bound) >= 0
            slack, rate = sign * (value - bound), sign * step
            if rate == 0:
                if slack < 0:
                    return None
            elif rate > 0:
                t = -slack / rate
                low = t if low is None else max(low, t)
            else:
                t = -slack / rate
                high = t if high is None else min(high, t)
    if low is not None and high is not None:
        if low > high:
            return None
        t = (low + high) / 2
    elif low is not None:
        t = low + 1
    elif high is not None:
        t = high - 1
    else:
        t = Fraction(0)
    return tuple(a + t * d for a, d in zip(phi, direction))


def _search_fixed(net: Network, budget: _Budget, cap: int) -> Optional[NondegeneracyVerdict]:
    """Search inside the given bounds; sound but not complete"""
    vertices = enumerate_vertices(net, cap)
    for a, b in combinations(vertices, 2):
        budget.spend()
        midpoint = tuple((x + y) / 2 for x, y in zip(a, b))
        certificate = is_extremal(net, midpoint)
        active = certificate.active
        for F in enumerate_alpha_trees(net, active.edges, active.vertices):
            if conforms(net, midpoint, F):
                return _degenerate(SearchMode.FIXED, budget, net, midpoint, F)

    bounded_edges = [e.id for e in net.edges if e.f_lo is not None or e.f_hi is not None]
    bounded_vertices = [v.id for v in net.vertices if v.p_lo is not None or v.p_hi is not None]
    gauge_row = [Fraction(1)] + [Fraction(0)] * (net.n - 1)
    for E_F, V_F in alpha_tree_candidates(net, bounded_edges, bounded_vertices):
        budget.spend()
        rows = constraint_rows(net, E_F, V_F)
        if rows.rank() == net.n - 1:
            continue
        orientation = find_orientation(net, E_F, V_F)
        if orientation is None:
            continue
        F = AlphaForest(frozenset(E_F), frozenset(V_F), orientation)
        system = rows.stack(RationalMatrix([gauge_row], cols=net.n))
        kernel = system.kernel_basis()
        for rhs in product(*_row_values(net, E_F, V_F)):
            phi = system.solve(list(rhs) + [0])
            if phi is None:
                continue
            for direction in [tuple([Fraction(0)] * net.n)] + kernel:
                point = _interval_point(net, phi, direction)
                if point is None:
                    continue
                f = potential_to_flow(net, point)
                if bound_violation(net, f) is not None or not conforms(net, f, F):
                    continue
                if not is_extremal(net, f).is_extremal:
                    return _degenerate(SearchMode.FIXED, budget, net, f, F)
    return None


def test_nondegeneracy(net: Network, budget: int = None, mode: SearchMode = SearchMode.FREE, cap: int = None) -> NondegeneracyVerdict:
    """Look for a flow that conforms to an alpha-tree but is not extremal.

    ``free`` mode asks the question for the weighted graph (V, E, b) and may
    choose bounds; it is exhaustive. ``fixed`` mode stays inside the given
    bounds and only reports what it finds.
    """
    cap = config.NONDEGENERACY_VERTEX_CAP if cap is None else cap
    budget = _Budget(config.NONDEGENERACY_BUDGET if budget is None else budget)
    mode = SearchMode(mode)
    if net.n > cap:
        raise BudgetExceededError(f"non-degeneracy test is capped at {cap} vertices, network has {net.n}")
    if mode is SearchMode.FREE:
        verdict = _search_free(net, budget)
    else:
        verdict = _search_fixed(net, budget, cap)
    if verdict is not None:
        return verdict
    logger.info(f"no counterexample among {budget.used} candidates ({mode.value} bounds)")
    return NondegeneracyVerdict(NondegeneracyOutcome.NO_COUNTEREXAMPLE, mode, budget.used)
