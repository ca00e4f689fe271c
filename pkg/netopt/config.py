import logging
import os

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"

DEFAULT_THREADS = 1
DEFAULT_SEARCH_CAP = 10**7
DEFAULT_LOG_LEVEL = "WARNING"


def _int_setting(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r, expected an integer; using %s", name, raw, default)
        return default


def get_thread_count() -> int:
    """Worker cap for solver parallelism, from NETOPT_THREADS"""
    return max(1, _int_setting("NETOPT_THREADS", DEFAULT_THREADS))


def get_search_cap() -> int:
    """Default exact-search size cap, from NETOPT_SEARCH_CAP"""
    return _int_setting("NETOPT_SEARCH_CAP", DEFAULT_SEARCH_CAP)


def get_log_level() -> str:
    return os.getenv("NETOPT_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper()
