"""Membership, active constraints and extremality for the differential-flow polytope.

A point is handled as a flow ``f``; its potential is recovered on demand.
Constraint rows live in potential space: edge ``e`` contributes the row
``(B^T)_e`` and vertex ``v`` the row ``(A B^T)_v``, whose product with the
potential is ``f_e`` and minus the injection of ``v`` respectively.
"""
import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations, product
from typing import FrozenSet, List, Optional, Sequence, Tuple

import config
from errors import BudgetExceededError, InfeasibleFlowError
from linalg import RationalMatrix, is_constant, primitive_integer_vector
from network import (
    Flow,
    Network,
    Potential,
    admittance_matrix,
    as_flow,
    elasticity_matrix,
    injection,
    potential_to_flow,
)
from rational import Bound

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    EXTREMAL = "extremal"
    NOT_EXTREMAL = "not-extremal"


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    potential: Optional[Potential] = None
    violation: Optional[str] = None

    def __bool__(self) -> bool:
        return self.feasible


@dataclass(frozen=True)
class ActiveSet:
    edges_at_lower: FrozenSet[str] = frozenset()
    edges_at_upper: FrozenSet[str] = frozenset()
    vertices_at_lower: FrozenSet[str] = frozenset()
    vertices_at_upper: FrozenSet[str] = frozenset()

    @property
    def edges(self) -> FrozenSet[str]:
        return self.edges_at_lower | self.edges_at_upper

    @property
    def vertices(self) -> FrozenSet[str]:
        return self.vertices_at_lower | self.vertices_at_upper

    def __len__(self) -> int:
        return len(self.edges) + len(self.vertices)


@dataclass(frozen=True)
class ExtremalityCertificate:
    verdict: Verdict
    active: ActiveSet
    rank_active: int
    direction: Optional[Potential] = None
    epsilon: Optional[Fraction] = None

    @property
    def is_extremal(self) -> bool:
        return self.verdict is Verdict.EXTREMAL


def imbalance(net: Network, f: Sequence) -> Tuple[Fraction, ...]:
    """Per-vertex outflow minus inflow"""
    return injection(net, f)


def recover_potential(net: Network, f: Sequence) -> Optional[Potential]:
    """Potential with B^T phi = f and phi = 0 at the first vertex, or None if f is not differential"""
    f = as_flow(net, f)
    phi = [None] * net.n
    phi[0] = Fraction(0)
    queue = deque([net.vertex_ids[0]])
    while queue:
        u = queue.popleft()
        pu = phi[net.vertex_index[u]]
        for i in net.incident[u]:
            edge = net.edges[i]
            other = edge.other(u)
            k = net.vertex_index[other]
            if phi[k] is not None:
                continue
            drop = f[i] / edge.b
            phi[k] = pu + drop if u == edge.tail else pu - drop
            queue.append(other)
    potential = tuple(phi)
    if potential_to_flow(net, potential) != f:
        return None
    return potential


def bound_violation(net: Network, f: Flow) -> Optional[str]:
    """First violated edge or vertex bound, edges before vertices"""
    p = injection(net, f)
    for value, edge in zip(f, net.edges):
        if edge.f_lo is not None and value < edge.f_lo:
            return f"edge {edge.id}: flow {value} below f_lo {edge.f_lo}"
        if edge.f_hi is not None and value > edge.f_hi:
            return f"edge {edge.id}: flow {value} above f_hi {edge.f_hi}"
    for value, vertex in zip(p, net.vertices):
        if vertex.p_lo is not None and value < vertex.p_lo:
            return f"vertex {vertex.id}: injection {value} below p_lo {vertex.p_lo}"
        if vertex.p_hi is not None and value > vertex.p_hi:
            return f"vertex {vertex.id}: injection {value} above p_hi {vertex.p_hi}"
    return None


def is_feasible(net: Network, f: Sequence) -> FeasibilityReport:
    f = as_flow(net, f)
    phi = recover_potential(net, f)
    if phi is None:
        return FeasibilityReport(False, None, "flow is not differential: f/b sums to nonzero around a cycle")
    violation = bound_violation(net, f)
    if violation is not None:
        return FeasibilityReport(False, phi, violation)
    return FeasibilityReport(True, phi, None)


def _require_feasible(net: Network, f: Sequence) -> FeasibilityReport:
    report = is_feasible(net, f)
    if not report.feasible:
        raise InfeasibleFlowError(f"flow is infeasible: {report.violation}")
    return report


def active_set(net: Network, f: Sequence) -> ActiveSet:
    f = as_flow(net, f)
    _require_feasible(net, f)
    p = injection(net, f)
    edges_lo = frozenset(e.id for e, x in zip(net.edges, f) if e.f_lo is not None and x == e.f_lo)
    edges_hi = frozenset(e.id for e, x in zip(net.edges, f) if e.f_hi is not None and x == e.f_hi)
    vertices_lo = frozenset(v.id for v, x in zip(net.vertices, p) if v.p_lo is not None and x == v.p_lo)
    vertices_hi = frozenset(v.id for v, x in zip(net.vertices, p) if v.p_hi is not None and x == v.p_hi)
    return ActiveSet(edges_lo, edges_hi, vertices_lo, vertices_hi)


def constraint_rows(net: Network, edge_ids, vertex_ids) -> RationalMatrix:
    """Rows (B^T)_e for the given edges then (A B^T)_v for the given vertices, each in input order"""
    edge_ids = set(edge_ids)
    vertex_ids = set(vertex_ids)
    bt = elasticity_matrix(net).transpose()
    laplacian = admittance_matrix(net)
    rows = [bt.row(i) for i, eid in enumerate(net.edge_ids) if eid in edge_ids]
    rows += [laplacian.row(i) for i, vid in enumerate(net.vertex_ids) if vid in vertex_ids]
    return RationalMatrix(rows, cols=net.n)


def active_rows(net: Network, active: ActiveSet) -> RationalMatrix:
    """Matrix of active rows; an element active at both bounds contributes one row"""
    return constraint_rows(net, active.edges, active.vertices)


def _step_limit(value: Fraction, step: Fraction, lower: Bound, upper: Bound) -> Optional[Fraction]:
    """Largest t with value +- t*step inside [lower, upper], None if unlimited"""
    if step == 0:
        return None
    limits = []
    if upper is not None:
        limits.append((upper - value) / abs(step))
    if lower is not None:
        limits.append((value - lower) / abs(step))
    return min(limits) if limits else None


def feasible_step(net: Network, f: Flow, direction: Sequence[Fraction]) -> Fraction:
    """Half the smallest slack along +-B^T direction over finite constraints, 1 if nothing limits"""
    df = potential_to_flow(net, direction)
    p = injection(net, f)
    dp = injection(net, df)
    limits = []
    for value, step, edge in zip(f, df, net.edges):
        limits.append(_step_limit(value, step, edge.f_lo, edge.f_hi))
    for value, step, vertex in zip(p, dp, net.vertices):
        limits.append(_step_limit(value, step, vertex.p_lo, vertex.p_hi))
    limits = [x for x in limits if x is not None]
    if not limits:
        return Fraction(1)
    return min(limits) / 2


def gauge(phi: Sequence[Fraction]) -> Potential:
    return tuple(x - phi[0] for x in phi)


def is_extremal(net: Network, f: Sequence) -> ExtremalityCertificate:
    f = as_flow(net, f)
    active = active_set(net, f)
    rows = active_rows(net, active)
    rank_active = rows.rank()
    if rank_active == net.n - 1:
        return ExtremalityCertificate(Verdict.EXTREMAL, active, rank_active)
    kernel = rows.kernel_basis()
    candidate = next(v for v in kernel if not is_constant(v))
    direction = primitive_integer_vector(gauge(candidate))
    epsilon = feasible_step(net, f, direction)
    logger.debug(f"flow not extremal: active rank {rank_active} < {net.n - 1}, step {epsilon}")
    return ExtremalityCertificate(Verdict.NOT_EXTREMAL, active, rank_active, direction, epsilon)


def _finite_values(lower: Bound, upper: Bound) -> List[Fraction]:
    values = [x for x in (lower, upper) if x is not None]
    return sorted(set(values))


def enumerate_vertices(net: Network, cap: int = None) -> List[Flow]:
    """All extreme points by brute force over bases of |V|-1 constraint rows"""
    cap = config.ENUMERATION_VERTEX_CAP if cap is None else cap
    if net.n > cap:
        raise BudgetExceededError(f"vertex enumeration is capped at {cap} vertices, network has {net.n}")
    n = net.n
    bt = elasticity_matrix(net).transpose()
    laplacian = admittance_matrix(net)
    elements = []
    for i, edge in enumerate(net.edges):
        values = _finite_values(edge.f_lo, edge.f_hi)
        if values:
            elements.append((bt.row(i), values))
    for i, vertex in enumerate(net.vertices):
        values = _finite_values(vertex.p_lo, vertex.p_hi)
        if values:
            # row value is minus the injection
            elements.append((laplacian.row(i), [-x for x in values]))
    gauge_row = tuple(Fraction(1) if j == 0 else Fraction(0) for j in range(n))
    found = set()
    bases = 0
    for basis in combinations(elements, n - 1):
        rows = RationalMatrix([row for row, _ in basis] + [gauge_row], cols=n)
        if rows.rank() < n:
            continue
        bases += 1
        inverse = rows.inverse()
        for rhs in product(*(values for _, values in basis)):
            phi = inverse.apply(list(rhs) + [0])
            f = potential_to_flow(net, phi)
            if bound_violation(net, f) is None:
                found.add(f)
    logger.info(f"enumerated {len(found)} vertices from {bases} bases over {len(elements)} bounded elements")
    return sorted(found)


def fit_bounds_to_flow(net: Network, f: Sequence, active_edges, active_vertices) -> Network:
    """Network whose bounds make ``f`` feasible with exactly the given elements active.

    Active elements are pinned to their current value; finite bounds of the
    other elements that ``f`` touches or crosses are moved 1 outward.
    """
    f = as_flow(net, f)
    net.require_edges(active_edges)
    net.require_vertices(active_vertices)
    active_edges = set(active_edges)
    active_vertices = set(active_vertices)
    p = injection(net, f)

    def fitted(value, lower, upper, pinned):
        if pinned:
            return value, value
        if lower is not None and lower >= value:
            lower = value - 1
        if upper is not None and upper <= value:
            upper = value + 1
        return lower, upper

    edge_bounds = [fitted(x, e.f_lo, e.f_hi, e.id in active_edges) for x, e in zip(f, net.edges)]
    vertex_bounds = [fitted(x, v.p_lo, v.p_hi, v.id in active_vertices) for x, v in zip(p, net.vertices)]
    return net.with_bounds(
        [lo for lo, _ in vertex_bounds],
        [hi for _, hi in vertex_bounds],
        [lo for lo, _ in edge_bounds],
        [hi for _, hi in edge_bounds],
    )
