from fastapi import APIRouter

from alpha import extract_alpha_tree, validate_alpha_forest
from models import AlphaRequest, AlphaTreeDocument, AlphaValidationDocument, FlowRequest, load_flow
from routers.common import http_error

router = APIRouter(prefix="/api/alpha", tags=["alpha"])


@router.post("/validate", response_model=AlphaValidationDocument)
def validate(body: AlphaRequest):
    """Check the alpha-forest conditions and report whether the forest is maximal"""
    try:
        net = body.network.to_network()
        F = body.alpha_forest.to_forest()
        return AlphaValidationDocument.from_validation(net, F, validate_alpha_forest(net, F))
    except Exception as e:
        raise http_error(e, "alpha-forest validation")


@router.post("/extract", response_model=AlphaTreeDocument)
def extract(body: FlowRequest):
    """Conforming alpha-tree of an extremal flow"""
    try:
        net = body.network.to_network()
        F = extract_alpha_tree(net, load_flow(net, body.flow))
        return AlphaTreeDocument.from_forest(net, F)
    except Exception as e:
        raise http_error(e, "alpha-tree extraction")
