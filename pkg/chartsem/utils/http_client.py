"""
Small JSON-over-HTTP helper for chartsem.

Used by the generative text client and the remote embedding client.
"""

import http.client
import json
import logging
import time
import urllib.error
import urllib.request
from typing import Any, Callable, Dict, TypeVar

from ..errors import ServiceError

logger = logging.getLogger(__name__)

T = TypeVar("T")


def post_json(url: str, payload: Dict[str, Any], timeout: float) -> Dict[str, Any]:
    """
    POST a JSON body and decode the JSON response.

    Args:
        url: Endpoint URL.
        payload: Request body.
        timeout: Socket timeout in seconds.

    Returns:
        Decoded JSON object.

    Raises:
        ServiceError: On network, HTTP status or decoding failure.
    """
    body = json.dumps(payload).encode('utf-8')
    request = urllib.request.Request(
        url,
        data=body,
        headers={'Content-Type': 'application/json', 'Accept': 'application/json'},
        method='POST',
    )
    try:
        with urllib.request.urlopen(request, timeout=timeout) as response:
            data = json.loads(response.read().decode('utf-8'))
    except urllib.error.HTTPError as e:
        raise ServiceError(f"{url} returned HTTP {e.code}") from e
    except (urllib.error.URLError, http.client.HTTPException, OSError) as e:
        raise ServiceError(f"{url} unreachable: {e}") from e
    except (ValueError, UnicodeDecodeError) as e:
        raise ServiceError(f"{url} returned invalid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ServiceError(f"{url} returned a JSON {type(data).__name__}, expected an object")
    return data


def with_retries(call: Callable[[], T], attempts: int, what: str, backoff: float = 0.0) -> T:
    """
    Run call up to `attempts` times, re-raising the last ServiceError.

    Args:
        call: Zero-argument callable.
        attempts: Total number of tries (at least 1).
        what: Label for log messages.
        backoff: Seconds to wait after the first failure, doubled after each
            further one. No wait follows the last attempt.
    """
    attempts = max(1, attempts)
    last_error = None
    for attempt in range(1, attempts + 1):
        try:
            return call()
        except ServiceError as e:
            last_error = e
            logger.warning(f"{what} failed (attempt {attempt}/{attempts}): {e}")
            if attempt < attempts and backoff > 0:
                time.sleep(backoff * 2 ** (attempt - 1))
    raise last_error
