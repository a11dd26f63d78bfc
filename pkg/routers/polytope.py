from fastapi import APIRouter, Request
import logging

from models import (
    EnumerationRequest,
    ExtremalityCertificateDocument,
    FeasibilityDocument,
    FlowRequest,
    VertexListDocument,
    load_flow,
)
from polytope import enumerate_vertices, is_extremal, is_feasible
from rate_limiter import search_limit
from routers.common import http_error

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/polytope", tags=["polytope"])


@router.post("/feasible", response_model=FeasibilityDocument)
def check_feasible(body: FlowRequest):
    """Check that a flow is differential and within every bound"""
    try:
        net = body.network.to_network()
        report = is_feasible(net, load_flow(net, body.flow))
        return FeasibilityDocument.from_report(net, report)
    except Exception as e:
        raise http_error(e, "feasibility check")


@router.post("/extremal", response_model=ExtremalityCertificateDocument)
def check_extremal(body: FlowRequest):
    """Extremality certificate: active set, its rank and a feasible direction if there is one"""
    try:
        net = body.network.to_network()
        certificate = is_extremal(net, load_flow(net, body.flow))
        return ExtremalityCertificateDocument.from_certificate(net, certificate)
    except Exception as e:
        raise http_error(e, "extremality check")


@router.post("/vertices", response_model=VertexListDocument)
@search_limit("vertices")
def list_vertices(request: Request, body: EnumerationRequest):
    """Enumerate all extreme points of a small network"""
    try:
        net = body.network.to_network()
        flows = enumerate_vertices(net, body.cap)
        logger.info(f"Enumerated {len(flows)} vertices for a network with {net.n} vertices")
        return VertexListDocument.from_flows(net, flows)
    except Exception as e:
        raise http_error(e, "vertex enumeration")
