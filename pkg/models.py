"""Pydantic documents: the network file format, flow and potential maps,
certificates, and request bodies for the HTTP service."""
from typing import Dict, List, Optional, Sequence

from pydantic import BaseModel, Field, StrictStr, ValidationError, conint, validator

from alpha import AlphaForest, AlphaValidation
from cactus import CactusReport, DiamondMinor
from degeneracy import DegeneracyWitness, NondegeneracyVerdict, SearchMode, Sufficiency
from errors import DocumentError
from hardness import Gadget, GadgetDecision
from network import Edge, Network, Vertex
from polytope import ActiveSet, ExtremalityCertificate, FeasibilityReport
from rational import format_bound, format_rational, parse_bound, parse_rational

RationalMap = Dict[StrictStr, StrictStr]


class StrictModel(BaseModel):
    class Config:
        extra = "forbid"


def _rational_field(value: str) -> str:
    try:
        parse_rational(value)
    except DocumentError as e:
        raise ValueError(e.message)
    return value


def _bound_field(value: str, upper: bool) -> str:
    try:
        parse_bound(value, upper)
    except DocumentError as e:
        raise ValueError(e.message)
    return value


# Network file format

class VertexDocument(StrictModel):
    id: StrictStr
    p_lo: StrictStr = "-inf"
    p_hi: StrictStr = "inf"

    @validator("p_lo")
    def check_lower(cls, v):
        return _bound_field(v, upper=False)

    @validator("p_hi")
    def check_upper(cls, v):
        return _bound_field(v, upper=True)


class EdgeDocument(StrictModel):
    id: StrictStr
    tail: StrictStr
    head: StrictStr
    b: StrictStr = "1"
    f_lo: StrictStr = "-inf"
    f_hi: StrictStr = "inf"

    @validator("b")
    def check_elasticity(cls, v):
        return _rational_field(v)

    @validator("f_lo")
    def check_lower(cls, v):
        return _bound_field(v, upper=False)

    @validator("f_hi")
    def check_upper(cls, v):
        return _bound_field(v, upper=True)


class NetworkDocument(StrictModel):
    vertices: List[VertexDocument]
    edges: List[EdgeDocument] = Field(default_factory=list)

    def to_network(self) -> Network:
        vertices = tuple(
            Vertex(v.id, parse_bound(v.p_lo, False), parse_bound(v.p_hi, True)) for v in self.vertices
        )
        edges = tuple(
            Edge(e.id, e.tail, e.head, parse_rational(e.b), parse_bound(e.f_lo, False), parse_bound(e.f_hi, True))
            for e in self.edges
        )
        return Network(vertices, edges)

    @classmethod
    def from_network(cls, net: Network) -> "NetworkDocument":
        return cls(
            vertices=[
                VertexDocument(id=v.id, p_lo=format_bound(v.p_lo, False), p_hi=format_bound(v.p_hi, True))
                for v in net.vertices
            ],
            edges=[
                EdgeDocument(
                    id=e.id,
                    tail=e.tail,
                    head=e.head,
                    b=format_rational(e.b),
                    f_lo=format_bound(e.f_lo, False),
                    f_hi=format_bound(e.f_hi, True),
                )
                for e in net.edges
            ],
        )


def error_location(error: ValidationError, prefix: str = "") -> DocumentError:
    """DocumentError pointing at the first validation failure, e.g. ``edges[2].b``"""
    first = error.errors()[0]
    location = prefix
    for part in first["loc"]:
        if isinstance(part, int):
            location += f"[{part}]"
        else:
            location += f".{part}" if location else str(part)
    message = first["msg"]
    # pydantic v2 prefixes messages raised from validators
    if message.startswith("Value error, "):
        message = message[len("Value error, "):]
    return DocumentError(location or "document", message)


def parse_document(model, data, name: str = ""):
    """Validate ``data`` against ``model``, raising DocumentError on failure"""
    if not isinstance(data, dict):
        raise DocumentError(name or "document", f"expected an object, got {type(data).__name__}")
    try:
        return model.parse_obj(data)
    except ValidationError as e:
        raise error_location(e, name)


def load_network(data) -> Network:
    return parse_document(NetworkDocument, data).to_network()


def _load_values(ids: Sequence[str], data, kind: str):
    if not isinstance(data, dict):
        raise DocumentError(kind, f"expected an object mapping ids to rationals, got {type(data).__name__}")
    known = set(ids)
    for key in data:
        if key not in known:
            raise DocumentError(f"{kind}.{key}", "unknown id")
    values = []
    for key in ids:
        if key not in data:
            raise DocumentError(f"{kind}.{key}", "missing value")
        values.append(parse_rational(data[key], f"{kind}.{key}"))
    return tuple(values)


def load_flow(net: Network, data) -> tuple:
    return _load_values(net.edge_ids, data, "flow")


def load_potential(net: Network, data) -> tuple:
    return _load_values(net.vertex_ids, data, "potential")


def dump_flow(net: Network, f) -> Dict[str, str]:
    return {eid: format_rational(x) for eid, x in zip(net.edge_ids, f)}


def dump_potential(net: Network, phi) -> Dict[str, str]:
    return {vid: format_rational(x) for vid, x in zip(net.vertex_ids, phi)}


def _in_order(order: Sequence[str], ids) -> List[str]:
    ids = set(ids)
    return [x for x in order if x in ids]


# Certificates

class FeasibilityDocument(StrictModel):
    feasible: bool
    violation: Optional[str] = None
    potential: Optional[RationalMap] = None

    @classmethod
    def from_report(cls, net: Network, report: FeasibilityReport) -> "FeasibilityDocument":
        potential = dump_potential(net, report.potential) if report.potential is not None else None
        return cls(feasible=report.feasible, violation=report.violation, potential=potential)


class ActiveSetDocument(StrictModel):
    edges_at_lower: List[StrictStr] = Field(default_factory=list)
    edges_at_upper: List[StrictStr] = Field(default_factory=list)
    vertices_at_lower: List[StrictStr] = Field(default_factory=list)
    vertices_at_upper: List[StrictStr] = Field(default_factory=list)

    @classmethod
    def from_active(cls, net: Network, active: ActiveSet) -> "ActiveSetDocument":
        return cls(
            edges_at_lower=_in_order(net.edge_ids, active.edges_at_lower),
            edges_at_upper=_in_order(net.edge_ids, active.edges_at_upper),
            vertices_at_lower=_in_order(net.vertex_ids, active.vertices_at_lower),
            vertices_at_upper=_in_order(net.vertex_ids, active.vertices_at_upper),
        )


class ExtremalityCertificateDocument(StrictModel):
    verdict: str
    active: ActiveSetDocument
    rank_active: int
    vertex_count: int
    direction: Optional[RationalMap] = None
    epsilon: Optional[StrictStr] = None

    @classmethod
    def from_certificate(cls, net: Network, cert: ExtremalityCertificate) -> "ExtremalityCertificateDocument":
        return cls(
            verdict=cert.verdict.value,
            active=ActiveSetDocument.from_active(net, cert.active),
            rank_active=cert.rank_active,
            vertex_count=net.n,
            direction=dump_potential(net, cert.direction) if cert.direction is not None else None,
            epsilon=format_rational(cert.epsilon) if cert.epsilon is not None else None,
        )


class VertexListDocument(StrictModel):
    vertex_count: int
    flows: List[RationalMap]

    @classmethod
    def from_flows(cls, net: Network, flows) -> "VertexListDocument":
        return cls(vertex_count=len(flows), flows=[dump_flow(net, f) for f in flows])


class AlphaTreeDocument(StrictModel):
    active_edges: List[StrictStr] = Field(default_factory=list)
    active_vertices: List[StrictStr] = Field(default_factory=list)
    orientation: Optional[Dict[StrictStr, StrictStr]] = None

    def to_forest(self) -> AlphaForest:
        return AlphaForest(frozenset(self.active_edges), frozenset(self.active_vertices), self.orientation)

    @classmethod
    def from_forest(cls, net: Network, F: AlphaForest) -> "AlphaTreeDocument":
        orientation = None
        if F.orientation is not None:
            orientation = {v: F.orientation[v] for v in _in_order(net.vertex_ids, F.orientation)}
        return cls(
            active_edges=_in_order(net.edge_ids, F.active_edges),
            active_vertices=_in_order(net.vertex_ids, F.active_vertices),
            orientation=orientation,
        )


class AlphaValidationDocument(StrictModel):
    valid: bool
    is_alpha_tree: bool
    size: int
    reason: Optional[str] = None
    orientation: Optional[Dict[StrictStr, StrictStr]] = None

    @classmethod
    def from_validation(cls, net: Network, F: AlphaForest, result: AlphaValidation) -> "AlphaValidationDocument":
        orientation = None
        if result.orientation is not None:
            orientation = {v: result.orientation[v] for v in _in_order(net.vertex_ids, result.orientation)}
        return cls(
            valid=result.valid,
            is_alpha_tree=result.valid and F.size == net.n - 1,
            size=F.size,
            reason=result.reason,
            orientation=orientation,
        )


class DiamondMinorDocument(StrictModel):
    v: str
    w: str
    paths: List[List[str]]

    @classmethod
    def from_minor(cls, minor: DiamondMinor) -> "DiamondMinorDocument":
        return cls(v=minor.v, w=minor.w, paths=[list(p) for p in minor.paths])


class CactusReportDocument(StrictModel):
    is_cactus: bool
    report: str
    violating_edge: Optional[str] = None
    diamond: Optional[DiamondMinorDocument] = None

    @classmethod
    def from_report(cls, report: CactusReport) -> "CactusReportDocument":
        return cls(
            is_cactus=report.is_cactus,
            report="cactus" if report.is_cactus else "not a cactus",
            violating_edge=report.violating_edge,
            diamond=DiamondMinorDocument.from_minor(report.diamond) if report.diamond is not None else None,
        )


class DegeneracyWitnessDocument(StrictModel):
    network: NetworkDocument
    alpha_tree: AlphaTreeDocument
    flow: RationalMap
    direction: RationalMap
    partition: Dict[StrictStr, StrictStr]
    branch_vertices: List[StrictStr]

    @validator("branch_vertices")
    def check_branch_vertices(cls, v):
        if len(v) != 2:
            raise ValueError("expected exactly two branch vertices")
        return v

    @classmethod
    def from_witness(cls, witness: DegeneracyWitness) -> "DegeneracyWitnessDocument":
        net = witness.network
        return cls(
            network=NetworkDocument.from_network(net),
            alpha_tree=AlphaTreeDocument.from_forest(net, witness.alpha_tree),
            flow=dump_flow(net, witness.flow),
            direction=dump_potential(net, witness.direction),
            partition={vid: witness.partition[vid] for vid in net.vertex_ids if vid in witness.partition},
            branch_vertices=list(witness.branch),
        )

    def to_witness(self) -> DegeneracyWitness:
        net = self.network.to_network()
        return DegeneracyWitness(
            net,
            self.alpha_tree.to_forest(),
            load_flow(net, self.flow),
            load_potential(net, self.direction),
            dict(self.partition),
            (self.branch_vertices[0], self.branch_vertices[1]),
        )


class WitnessCheckDocument(StrictModel):
    valid: bool
    failures: List[str] = Field(default_factory=list)


class NondegeneracyVerdictDocument(StrictModel):
    verdict: str
    mode: str
    examined: int
    network: Optional[NetworkDocument] = None
    flow: Optional[RationalMap] = None
    alpha_tree: Optional[AlphaTreeDocument] = None
    certificate: Optional[ExtremalityCertificateDocument] = None

    @classmethod
    def from_verdict(cls, verdict: NondegeneracyVerdict) -> "NondegeneracyVerdictDocument":
        if verdict.network is None:
            return cls(verdict=verdict.outcome.value, mode=verdict.mode.value, examined=verdict.examined)
        net = verdict.network
        return cls(
            verdict=verdict.outcome.value,
            mode=verdict.mode.value,
            examined=verdict.examined,
            network=NetworkDocument.from_network(net),
            flow=dump_flow(net, verdict.flow),
            alpha_tree=AlphaTreeDocument.from_forest(net, verdict.alpha_tree),
            certificate=ExtremalityCertificateDocument.from_certificate(net, verdict.certificate),
        )


class SufficientConditionDocument(StrictModel):
    one_active_per_component: Sufficiency
    small_degree: Sufficiency
    certified: bool

    class Config:
        extra = "forbid"
        use_enum_values = True

    @classmethod
    def from_results(cls, one_active: Sufficiency, small_degree: Sufficiency) -> "SufficientConditionDocument":
        return cls(
            one_active_per_component=one_active,
            small_degree=small_degree,
            certified=Sufficiency.CERTIFIED in (one_active, small_degree),
        )


class GadgetDocument(StrictModel):
    sizes: List[int]
    target: int
    labels: Dict[str, str]
    network: NetworkDocument

    @classmethod
    def from_gadget(cls, gadget: Gadget) -> "GadgetDocument":
        return cls(
            sizes=list(gadget.instance.sizes),
            target=gadget.instance.target,
            labels=dict(gadget.labels),
            network=NetworkDocument.from_network(gadget.network),
        )


class GadgetDecisionDocument(StrictModel):
    sizes: List[int]
    target: int
    subset_exists: bool
    degenerate: bool
    agree: bool
    subset: Optional[List[int]] = None
    polytope_subset: Optional[List[int]] = None
    network: Optional[NetworkDocument] = None
    flow: Optional[RationalMap] = None
    alpha_tree: Optional[AlphaTreeDocument] = None
    direction: Optional[RationalMap] = None

    @classmethod
    def from_decision(cls, decision: GadgetDecision) -> "GadgetDecisionDocument":
        fields = dict(
            sizes=list(decision.instance.sizes),
            target=decision.instance.target,
            subset_exists=decision.subset_exists,
            degenerate=decision.degenerate,
            agree=decision.agree,
            subset=list(decision.subset) if decision.subset is not None else None,
            polytope_subset=list(decision.polytope_subset) if decision.polytope_subset is not None else None,
        )
        if decision.network is not None:
            net = decision.network
            fields.update(
                network=NetworkDocument.from_network(net),
                flow=dump_flow(net, decision.flow),
                alpha_tree=AlphaTreeDocument.from_forest(net, decision.alpha_tree),
                direction=dump_potential(net, decision.direction),
            )
        return cls(**fields)


# Request bodies

class FlowRequest(StrictModel):
    network: NetworkDocument
    flow: RationalMap


class EnumerationRequest(StrictModel):
    network: NetworkDocument
    cap: Optional[conint(ge=1)] = None


class AlphaRequest(StrictModel):
    network: NetworkDocument
    alpha_forest: AlphaTreeDocument


class NetworkRequest(StrictModel):
    network: NetworkDocument


class SufficientConditionRequest(StrictModel):
    network: NetworkDocument
    flow: RationalMap
    alpha_forest: AlphaTreeDocument


class NondegeneracyRequest(StrictModel):
    network: NetworkDocument
    mode: SearchMode = SearchMode.FREE
    budget: Optional[conint(ge=1)] = None


class SubsetSumRequest(StrictModel):
    sizes: List[conint(ge=1)]
    target: conint(ge=1)
    cap: Optional[conint(ge=1)] = None
