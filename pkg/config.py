import os
import logging
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Search caps for the brute-force oracles
ENUMERATION_VERTEX_CAP = int(os.getenv("ENUMERATION_VERTEX_CAP", "10"))
NONDEGENERACY_VERTEX_CAP = int(os.getenv("NONDEGENERACY_VERTEX_CAP", "8"))
NONDEGENERACY_BUDGET = int(os.getenv("NONDEGENERACY_BUDGET", "200000"))
GADGET_SUBSET_CAP = int(os.getenv("GADGET_SUBSET_CAP", "8"))
HALL_BRUTE_FORCE_LIMIT = int(os.getenv("HALL_BRUTE_FORCE_LIMIT", "20"))
SIMPLE_CYCLE_VERTEX_CAP = int(os.getenv("SIMPLE_CYCLE_VERTEX_CAP", "10"))
ORIENTATION_EXHAUSTIVE_CAP = int(os.getenv("ORIENTATION_EXHAUSTIVE_CAP", "8"))

# HTTP service
API_DEFAULT_LIMITS = [
    limit.strip()
    for limit in os.getenv("API_DEFAULT_LIMITS", "200 per day;100 per hour").split(";")
    if limit.strip()
]
API_SEARCH_LIMITS = {
    "vertices": os.getenv("API_VERTICES_LIMIT", "30/minute"),
    "nondegeneracy": os.getenv("API_NONDEGENERACY_LIMIT", "10/minute"),
    "gadget": os.getenv("API_GADGET_LIMIT", "20/minute"),
}
RATE_LIMIT_ENABLED = os.getenv("RATE_LIMIT_ENABLED", "true").lower() == "true"


def configure_logging(level: str = None, stream=None):
    """Configure root logging the same way for every entry point.

    Replaces handlers installed by an earlier call, so a CLI --log-level wins
    over the configuration done when main is imported.
    """
    handler = logging.StreamHandler(stream) if stream is not None else logging.StreamHandler()
    logging.basicConfig(
        level=getattr(logging, (level or LOG_LEVEL).upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=[handler],
        force=True,
    )
