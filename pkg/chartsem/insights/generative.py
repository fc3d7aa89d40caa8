"""
Generative text client for chartsem.

Talks to a chat-completion style HTTP endpoint. Every failure surfaces as a
ServiceError; callers fall back to templates.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from ..core.types import ChartSpec, InsightLevel
from ..data import prompts
from ..errors import ServiceError
from ..utils.http_client import post_json, with_retries
from .stats import StatReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EndpointConfig:
    """Connection settings of a generative endpoint."""

    url: str
    model: str = ""
    timeout: float = 30.0
    attempts: int = 3
    backoff: float = 0.5
    temperature: float = 0.7
    concurrency: int = 4


def extract_text(data: Dict[str, Any]) -> str:
    """Pull the generated text out of a chat-completion response."""
    try:
        choices = data.get('choices')
        if choices:
            first = choices[0]
            message = first.get('message') or {}
            text = message.get('content') or first.get('text')
        else:
            text = data.get('text')
    except (AttributeError, IndexError, TypeError) as e:
        raise ServiceError(f"unexpected response shape: {e}") from e
    if not isinstance(text, str) or not text.strip():
        raise ServiceError("response carries no text")
    return text.strip()


def generative_complete(system_prompt: str, user_prompt: str, config: EndpointConfig) -> str:
    """
    Request a completion.

    Args:
        system_prompt: System message.
        user_prompt: User message.
        config: Endpoint settings; `attempts` is the total number of tries.

    Returns:
        Generated text.

    Raises:
        ServiceError: When every attempt failed.
    """
    payload = {
        'model': config.model,
        'messages': [
            {'role': 'system', 'content': system_prompt},
            {'role': 'user', 'content': user_prompt},
        ],
        'temperature': config.temperature,
    }
    return with_retries(
        lambda: extract_text(post_json(config.url, payload, config.timeout)),
        config.attempts,
        f"completion from {config.url}",
        config.backoff,
    )


def _metadata(spec: ChartSpec) -> Dict[str, str]:
    categories = ', '.join(spec.categories)
    return {
        'title': spec.title,
        'subtitle': spec.subtitle,
        'chart': spec.chart_type.value,
        'x_name': spec.x_name,
        'y_name': spec.y_name,
        'categories_or_single': categories or 'Single category',
        'categories_or_none': categories or 'None',
    }


def build_insight_prompt(level: InsightLevel, spec: ChartSpec,
                         report: Optional[StatReport] = None) -> Tuple[str, str]:
    """
    Fill the prompt of one insight level from chart metadata.

    Returns:
        Tuple of (system_prompt, user_prompt).
    """
    fields = _metadata(spec)
    if level == InsightLevel.VISUAL:
        return prompts.VISUAL_SYSTEM_PROMPT, prompts.VISUAL_USER_PROMPT.format(**fields)
    if level == InsightLevel.TASK:
        return prompts.TASK_SYSTEM_PROMPT, prompts.TASK_USER_PROMPT.format(**fields)
    stats_info = '\n'.join(report.summary_lines()) if report is not None else ''
    return (prompts.STATISTICS_SYSTEM_PROMPT,
            prompts.STATISTICS_USER_PROMPT.format(stats_info=stats_info, **fields))
