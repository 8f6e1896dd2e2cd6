"""
Response dictionaries returned by the experiment managers.

The CLI commands and the API endpoints only look at 'success', 'msg',
'payload' and, on failure, 'error': the failure kind that picks the exit
code or the HTTP status.
"""

from typing import Any, Optional

# Failure kinds a manager can report.
ERROR_KINDS = ("validation", "domain", "divergence", "convergence", "error")


def generic_res(payload: Optional[dict[str, Any]] = None, msg: str = "") -> dict[str, Any]:
    """
    Base response; unsuccessful until a caller says otherwise.

    Args:
        payload (dict, optional): Result data, e.g. {"table": ResultTable}.
        msg (str, optional): Human-readable summary.

    Returns:
        dict: {"success": False, "msg": msg, "payload": payload or {}}.
    """
    return {
        "success": False,
        "msg": msg,
        "payload": {} if payload is None else payload,
    }


def error_res(msg: str, error: Optional[str] = None) -> dict[str, Any]:
    """
    Failed response carrying a failure kind.

    Args:
        msg (str): What went wrong, shown to the user as is.
        error (str, optional): One of ERROR_KINDS; unknown or missing
            kinds are reported as "error".
    """
    res = generic_res(msg=msg)
    res["error"] = error if error in ERROR_KINDS else "error"
    return res


def success_res(payload: dict[str, Any], msg: str) -> dict[str, Any]:
    res = generic_res(payload=payload, msg=msg)
    res["success"] = True
    return res
