"""
Check Reports

Checks never raise on a failed property. They return a report dictionary:

    {'success': bool, 'check': str, 'checked': int, 'failure': dict or None}

A failure carries a witness {'kind', 'instance', 'expected', 'actual'} that
can be handed back to replay_failure to reproduce the same failure.
"""

import logging
from typing import Any, Callable, Dict, List, Optional

logger = logging.getLogger(__name__)

_REPLAYS: Dict[str, Callable[..., bool]] = {}


def make_report(check: str, checked: int, failure: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    report = {
        'success': failure is None,
        'check': check,
        'checked': checked,
        'failure': failure
    }
    log_report(report)
    return report


def witness(kind: str, instance: Dict[str, Any], expected: Any = None, actual: Any = None) -> Dict[str, Any]:
    return {'kind': kind, 'instance': instance, 'expected': expected, 'actual': actual}


def combine_reports(check: str, reports: List[Dict[str, Any]]) -> Dict[str, Any]:
    """Merge sub-reports; the first failing part decides the failure"""
    failure = None
    for report in reports:
        if not report['success']:
            failure = dict(report['failure'])
            failure.setdefault('part', report['check'])
            break

    combined = {
        'success': failure is None,
        'check': check,
        'checked': sum(r['checked'] for r in reports),
        'failure': failure,
        'parts': [{'check': r['check'], 'success': r['success'], 'checked': r['checked']} for r in reports]
    }
    return combined


def log_report(report: Dict[str, Any]):
    if report['success']:
        logger.info(f"{report['check']}: passed ({report['checked']} instances)")
    else:
        logger.warning(f"{report['check']}: FAILED after {report['checked']} instances, witness {report['failure']}")


def register_replay(kind: str):
    """Decorator registering the function that re-evaluates a witness kind"""
    def decorator(fn: Callable[..., bool]) -> Callable[..., bool]:
        _REPLAYS[kind] = fn
        return fn
    return decorator


def replay_failure(failure: Dict[str, Any], **context) -> bool:
    """
    Re-evaluate a failure witness

    Args:
        failure: the 'failure' entry of a report (or the report itself)
        context: objects the witness refers to but cannot carry, such as
            the category and An data a coherence check ran against

    Returns:
        True if the witness still fails
    """
    if 'failure' in failure and 'kind' not in failure:
        failure = failure['failure']
    if failure is None:
        return False

    kind = failure['kind']
    if kind not in _REPLAYS:
        raise KeyError(f"No replay registered for witness kind '{kind}'")
    return _REPLAYS[kind](failure['instance'], **context)


def registered_kinds() -> List[str]:
    return sorted(_REPLAYS)
