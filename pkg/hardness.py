"""SubsetSum reduction: a gadget network that is degenerate exactly for yes-instances."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import config
from alpha import AlphaForest, conforms, find_orientation, is_alpha_tree
from errors import BudgetExceededError, ConsistencyError, PreconditionError
from linalg import RationalMatrix, primitive_integer_vector
from network import Edge, Flow, Network, Potential, Vertex, potential_to_flow
from polytope import ExtremalityCertificate, constraint_rows, fit_bounds_to_flow, gauge, is_extremal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubsetSumInstance:
    sizes: Tuple[int, ...]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(x) for x in self.sizes))
        if not self.sizes:
            raise PreconditionError("a SubsetSum instance needs at least one size")
        if any(x < 1 for x in self.sizes) or self.target < 1:
            raise PreconditionError("sizes and target must be positive integers")

    @property
    def n(self) -> int:
        return len(self.sizes)


@dataclass(frozen=True)
class Gadget:
    instance: SubsetSumInstance
    network: Network
    labels: Dict[str, str] = field(hash=False)


def _vertex(i: int) -> str:
    return f"v{i}"


def build_gadget(inst: SubsetSumInstance) -> Gadget:
    """Vertices v, w, s, t, v1..vn; edges s->v (beta), v->w, w->t, s->w (1), v->vi and vi->t (2 alpha_i).

    Edges v->vi and v->w are capped at 1; p(v) in [-beta, beta]; p(w), p(vi) >= 0.
    """
    one = Fraction(1)
    zero = Fraction(0)
    beta = Fraction(inst.target)
    vertices = [Vertex("v", -beta, beta), Vertex("w", zero, None), Vertex("s"), Vertex("t")]
    edges = [
        Edge("s-v", "s", "v", beta),
        Edge("v-w", "v", "w", one, None, one),
        Edge("w-t", "w", "t", one),
        Edge("s-w", "s", "w", one),
    ]
    labels = {"v": "v", "w": "w", "s": "s", "t": "t"}
    for i, alpha in enumerate(inst.sizes, start=1):
        vi = _vertex(i)
        vertices.append(Vertex(vi, zero, None))
        edges.append(Edge(f"v-{vi}", "v", vi, Fraction(2 * alpha), None, one))
        edges.append(Edge(f"{vi}-t", vi, "t", Fraction(2 * alpha)))
        labels[vi] = vi
    return Gadget(inst, Network(tuple(vertices), tuple(edges)), labels)


def subset_sum_search(inst: SubsetSumInstance) -> Optional[Tuple[int, ...]]:
    """First subset (1-based indices) in bitmask order whose sizes sum to the target"""
    for mask in range(1, 1 << inst.n):
        chosen = tuple(i + 1 for i in range(inst.n) if mask >> i & 1)
        if sum(inst.sizes[i - 1] for i in chosen) == inst.target:
            return chosen
    return None


@dataclass(frozen=True)
class GadgetDecision:
    instance: SubsetSumInstance
    subset: Optional[Tuple[int, ...]]
    polytope_subset: Optional[Tuple[int, ...]]
    network: Optional[Network] = None
    flow: Optional[Flow] = None
    alpha_tree: Optional[AlphaForest] = None
    direction: Optional[Potential] = None
    certificate: Optional[ExtremalityCertificate] = None

    @property
    def subset_exists(self) -> bool:
        return self.subset is not None

    @property
    def degenerate(self) -> bool:
        return self.polytope_subset is not None

    @property
    def agree(self) -> bool:
        return self.subset_exists == self.degenerate


def pattern_forest(gadget: Gadget, subset) -> Tuple[List[str], List[str]]:
    """Active edges and vertices for a subset: v->w and v->vj (j outside) active; v, w and vi (i inside) active"""
    chosen = set(subset)
    edges = ["v-w"] + [f"v-{_vertex(j)}" for j in range(1, gadget.instance.n + 1) if j not in chosen]
    vertices = ["v", "w"] + [_vertex(i) for i in range(1, gadget.instance.n + 1) if i in chosen]
    return edges, vertices


def expected_direction(gadget: Gadget, subset) -> Potential:
    """phi(v) = phi(w) = 0, phi(t) = 2, phi(s) = -2, phi(vi) = 1 inside the subset and 0 outside"""
    chosen = {_vertex(i) for i in subset}
    values = {"v": 0, "w": 0, "s": -2, "t": 2}
    return tuple(
        Fraction(values.get(vid, 1 if vid in chosen else 0)) for vid in gadget.network.vertex_ids
    )


def _realize(gadget: Gadget, subset):
    """Conforming non-extremal flow for a rank-deficient activity pattern, or None"""
    net = gadget.network
    E_F, V_F = pattern_forest(gadget, subset)
    orientation = find_orientation(net, E_F, V_F)
    if orientation is None:
        return None
    # edges at capacity 1, w and the chosen vi at injection 0; v's own row is left free
    rhs_rows = constraint_rows(net, E_F, [x for x in V_F if x != "v"])
    rhs = [Fraction(1)] * len(E_F) + [Fraction(0)] * (len(V_F) - 1)
    gauge_row = [Fraction(1) if vid == "v" else Fraction(0) for vid in net.vertex_ids]
    system = rhs_rows.stack(RationalMatrix([gauge_row], cols=net.n))
    phi = system.solve(rhs + [0])
    if phi is None:
        return None
    f = potential_to_flow(net, phi)
    fitted = fit_bounds_to_flow(net, f, E_F, V_F)
    F = AlphaForest(frozenset(E_F), frozenset(V_F), orientation)
    certificate = is_extremal(fitted, f)
    if certificate.is_extremal or not is_alpha_tree(fitted, F) or not conforms(fitted, f, F):
        return None
    return fitted, f, F, certificate


def _parallel(a: Potential, b: Potential) -> bool:
    return primitive_integer_vector(gauge(a)) == primitive_integer_vector(gauge(b))


def gadget_degenerate(inst: SubsetSumInstance, cap: int = None) -> GadgetDecision:
    """Decide the instance by subset search and, independently, on the gadget polytope"""
    cap = config.GADGET_SUBSET_CAP if cap is None else cap
    if inst.n > cap:
        raise BudgetExceededError(f"gadget decision is capped at n = {cap}, instance has n = {inst.n}")
    subset = subset_sum_search(inst)
    gadget = build_gadget(inst)
    net = gadget.network
    for mask in range(1 << inst.n):
        chosen = tuple(i + 1 for i in range(inst.n) if mask >> i & 1)
        E_F, V_F = pattern_forest(gadget, chosen)
        if constraint_rows(net, E_F, V_F).rank() == net.n - 1:
            continue
        realized = _realize(gadget, chosen)
        if realized is None:
            continue
        fitted, f, F, certificate = realized
        direction = expected_direction(gadget, chosen)
        if not _parallel(certificate.direction, direction):
            raise ConsistencyError(f"direction for subset {chosen} is not parallel to the expected potential")
        decision = GadgetDecision(inst, subset, chosen, fitted, f, F, direction, certificate)
        break
    else:
        decision = GadgetDecision(inst, subset, None)
    if not decision.agree:
        raise ConsistencyError(f"subset search and polytope check disagree on {inst}")
    logger.info(f"gadget for sizes {list(inst.sizes)}, target {inst.target}: degenerate={decision.degenerate}")
    return decision
