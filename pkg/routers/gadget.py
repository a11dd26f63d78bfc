from fastapi import APIRouter, Request

from generator import GeneratorConfig, generate
from hardness import SubsetSumInstance, build_gadget, gadget_degenerate
from models import GadgetDecisionDocument, GadgetDocument, NetworkDocument, SubsetSumRequest
from rate_limiter import search_limit
from routers.common import http_error

router = APIRouter(prefix="/api/gadget", tags=["gadget"])


@router.post("/build", response_model=GadgetDocument)
def build(body: SubsetSumRequest):
    """Gadget network for a SubsetSum instance"""
    try:
        return GadgetDocument.from_gadget(build_gadget(SubsetSumInstance(tuple(body.sizes), body.target)))
    except Exception as e:
        raise http_error(e, "gadget construction")


@router.post("/decide", response_model=GadgetDecisionDocument)
@search_limit("gadget")
def decide(request: Request, body: SubsetSumRequest):
    """Decide the instance by subset search and on the gadget polytope"""
    try:
        decision = gadget_degenerate(SubsetSumInstance(tuple(body.sizes), body.target), body.cap)
        return GadgetDecisionDocument.from_decision(decision)
    except Exception as e:
        raise http_error(e, "gadget decision")


@router.post("/generate", response_model=NetworkDocument)
def random_network(body: GeneratorConfig):
    """Seeded random network"""
    try:
        return NetworkDocument.from_network(generate(body))
    except Exception as e:
        raise http_error(e, "network generation")
