# main.py
import logging

import config

config.configure_logging()
logger = logging.getLogger(__name__)

from fastapi import FastAPI
from slowapi.errors import RateLimitExceeded
from slowapi.middleware import SlowAPIMiddleware

from rate_limiter import limiter, rate_limit_exceeded_handler
from routers.alpha import router as alpha_router
from routers.degeneracy import router as degeneracy_router
from routers.gadget import router as gadget_router
from routers.polytope import router as polytope_router

app = FastAPI(
    title="Differential Flow API",
    description="Exact extremality, alpha-tree and degeneracy checks for differential-flow polytopes",
    version="1.0.0",
    openapi_tags=[
        {
            "name": "polytope",
            "description": "Feasibility, extremality and vertex enumeration",
        },
        {
            "name": "alpha",
            "description": "Alpha-forest validation and alpha-tree extraction",
        },
        {
            "name": "degeneracy",
            "description": "Cactus recognition, degeneracy witnesses and sufficient conditions",
        },
        {
            "name": "gadget",
            "description": "SubsetSum gadget and random instances",
        },
    ],
)

# Add rate limiter to app
app.state.limiter = limiter
app.add_middleware(SlowAPIMiddleware)
app.add_exception_handler(RateLimitExceeded, rate_limit_exceeded_handler)

app.include_router(polytope_router)
app.include_router(alpha_router)
app.include_router(degeneracy_router)
app.include_router(gadget_router)


@app.get("/")
async def root():
    return {"message": "Differential Flow API", "docs": "/docs"}


@app.get("/health")
async def health_check():
    """Liveness probe"""
    return {"status": "healthy"}


if __name__ == "__main__":
    import uvicorn

    uvicorn.run("main:app", host="0.0.0.0", port=8000)
