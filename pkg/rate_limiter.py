"""slowapi limiter shared by the routers.

Cheap checks only count against ``API_DEFAULT_LIMITS``. Each exhaustive search
(vertex enumeration, the non-degeneracy search, the gadget decision) has its
own rate in ``config.API_SEARCH_LIMITS``.
"""
import logging

from fastapi import Request
from fastapi.responses import JSONResponse
from slowapi import Limiter
from slowapi.errors import RateLimitExceeded
from slowapi.util import get_remote_address

import config

logger = logging.getLogger(__name__)

limiter = Limiter(
    key_func=get_remote_address,
    default_limits=config.API_DEFAULT_LIMITS,
    enabled=config.RATE_LIMIT_ENABLED,
)


def search_limit(search: str):
    """Decorator applying the configured rate of one exhaustive search"""
    try:
        rate = config.API_SEARCH_LIMITS[search]
    except KeyError:
        raise ValueError(f"no rate limit configured for search '{search}'") from None
    return limiter.limit(rate, error_message=f"{search} limited to {rate}")


async def rate_limit_exceeded_handler(request: Request, exc: RateLimitExceeded) -> JSONResponse:
    logger.warning(f"Rate limit hit on {request.url.path}: {exc.detail}")
    return JSONResponse(
        status_code=429,
        content={"error": "Rate limit exceeded", "detail": exc.detail, "path": request.url.path},
    )
