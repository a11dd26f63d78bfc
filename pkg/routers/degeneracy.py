from fastapi import APIRouter, Request
import logging

import degeneracy
from cactus import is_cactus
from errors import PreconditionError
from models import (
    CactusReportDocument,
    DegeneracyWitnessDocument,
    NetworkRequest,
    NondegeneracyRequest,
    NondegeneracyVerdictDocument,
    SufficientConditionDocument,
    SufficientConditionRequest,
    WitnessCheckDocument,
    load_flow,
)
from rate_limiter import search_limit
from routers.common import http_error

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/degeneracy", tags=["degeneracy"])


@router.post("/cactus", response_model=CactusReportDocument)
def check_cactus(body: NetworkRequest, minor: bool = False):
    """Cactus test, with a diamond minor on request"""
    try:
        return CactusReportDocument.from_report(is_cactus(body.network.to_network(), find_minor=minor))
    except Exception as e:
        raise http_error(e, "cactus check")


@router.post("/witness", response_model=DegeneracyWitnessDocument)
def witness(body: NetworkRequest):
    """Degeneracy witness for a graph that is not a cactus"""
    try:
        result = degeneracy.build_degeneracy_witness(body.network.to_network())
        if result is None:
            raise PreconditionError("graph is a cactus; no degeneracy witness exists")
        return DegeneracyWitnessDocument.from_witness(result)
    except Exception as e:
        raise http_error(e, "witness construction")


@router.post("/verify", response_model=WitnessCheckDocument)
def verify(body: DegeneracyWitnessDocument):
    """Re-check every property of a witness document"""
    try:
        failures = degeneracy.verify_degeneracy_witness(body.to_witness())
        return WitnessCheckDocument(valid=not failures, failures=failures)
    except Exception as e:
        raise http_error(e, "witness verification")


@router.post("/test", response_model=NondegeneracyVerdictDocument)
@search_limit("nondegeneracy")
def test(request: Request, body: NondegeneracyRequest):
    """Exhaustive search for a conforming flow that is not extremal"""
    try:
        net = body.network.to_network()
        verdict = degeneracy.test_nondegeneracy(net, budget=body.budget, mode=body.mode)
        return NondegeneracyVerdictDocument.from_verdict(verdict)
    except Exception as e:
        raise http_error(e, "non-degeneracy test")


@router.post("/suffcond", response_model=SufficientConditionDocument)
def sufficient_conditions(body: SufficientConditionRequest):
    """Evaluate both sufficient extremality conditions"""
    try:
        net = body.network.to_network()
        f = load_flow(net, body.flow)
        F = body.alpha_forest.to_forest()
        return SufficientConditionDocument.from_results(
            degeneracy.check_suff_one_active_per_component(net, f, F),
            degeneracy.check_suff_small_degree(net, f, F),
        )
    except Exception as e:
        raise http_error(e, "sufficient condition check")
