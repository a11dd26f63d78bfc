import logging

from fastapi import HTTPException

from errors import (
    BudgetExceededError,
    DocumentError,
    GeneratorConfigError,
    InfeasibleFlowError,
    NetworkValidationError,
    PreconditionError,
    UnknownElementError,
)

logger = logging.getLogger(__name__)

STATUS_BY_ERROR = (
    (DocumentError, 422),
    (NetworkValidationError, 422),
    (UnknownElementError, 422),
    (GeneratorConfigError, 422),
    (InfeasibleFlowError, 409),
    (PreconditionError, 409),
    (BudgetExceededError, 413),
)


def http_error(e: Exception, action: str) -> HTTPException:
    """Map a library error onto an HTTP status; anything unexpected becomes a 500"""
    if isinstance(e, HTTPException):
        return e
    for error_type, status in STATUS_BY_ERROR:
        if isinstance(e, error_type):
            logger.info(f"{action} rejected ({status}): {e}")
            return HTTPException(status_code=status, detail=str(e))
    logger.error(f"Error in {action}: {str(e)}")
    return HTTPException(status_code=500, detail=str(e))
