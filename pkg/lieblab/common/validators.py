import logging
import math
from typing import Any, Dict, List

logger = logging.getLogger(__name__)


def _is_finite_number(value: Any) -> bool:
    if isinstance(value, bool):
        return False
    try:
        return math.isfinite(float(value))
    except (TypeError, ValueError):
        return False


def _check_rows(rows: Any, dim: int, cols: int, name: str) -> bool:
    if not isinstance(rows, list) or len(rows) != dim:
        logger.debug(f"'{name}' must be a list of {dim} rows")
        return False
    for index, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != cols:
            logger.debug(f"'{name}' row {index} must have {cols} entries")
            return False
        for value in row:
            if not _is_finite_number(value):
                logger.debug(f"'{name}' row {index} holds a non-finite entry: {value!r}")
                return False
    return True


def validate_matrix_record(record: Dict[str, Any]) -> bool:
    if not isinstance(record, dict):
        logger.debug("Matrix record is not a dictionary")
        return False

    dim = record.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        logger.debug(f"Matrix record needs a positive integer 'dim', got {dim!r}")
        return False

    cols = record.get("cols", dim)
    if not isinstance(cols, int) or isinstance(cols, bool) or cols < 1:
        logger.debug(f"'cols' must be a positive integer, got {cols!r}")
        return False

    if "re" not in record:
        logger.debug("Missing required field: re")
        return False
    if not _check_rows(record["re"], dim, cols, "re"):
        return False
    if record.get("im") is not None and not _check_rows(record["im"], dim, cols, "im"):
        return False

    return True


def _validate_point(point: Any, index: int) -> bool:
    if not isinstance(point, dict):
        logger.debug(f"Point {index} is not a dictionary")
        return False

    for field_name in ("params", "trials", "violations", "worst_gap"):
        if field_name not in point:
            logger.debug(f"Point {index} missing required field: {field_name}")
            return False

    if not isinstance(point["params"], dict):
        logger.debug(f"Point {index} params is not a dictionary")
        return False

    trials, violations = point["trials"], point["violations"]
    if not isinstance(trials, int) or trials < 1:
        logger.debug(f"Point {index} trials must be a positive integer, got {trials!r}")
        return False
    if not isinstance(violations, int) or not 0 <= violations <= trials:
        logger.debug(
            f"Point {index} violations must lie in [0, {trials}], got {violations!r}"
        )
        return False

    if not _is_finite_number(point["worst_gap"]):
        logger.debug(f"Point {index} worst_gap is not finite: {point['worst_gap']!r}")
        return False

    witness = point.get("witness")
    if (witness is not None) != (violations > 0):
        logger.debug(f"Point {index} witness must be present exactly when violations > 0")
        return False

    return True


def validate_report_payload(payload: Dict[str, Any]) -> bool:
    """Check a suite report (or a ``{"suites": [...]}`` bundle) before it is written."""
    if not isinstance(payload, dict):
        logger.debug("Report is not a dictionary")
        return False

    if "suites" in payload:
        suites = payload["suites"]
        if not isinstance(suites, list):
            logger.debug("'suites' must be a list")
            return False
        return all(validate_report_payload(suite) for suite in suites)

    suite = payload.get("suite")
    if not isinstance(suite, str) or len(suite.strip()) == 0:
        logger.debug("suite is empty or not a string")
        return False

    seed = payload.get("seed")
    if not isinstance(seed, int) or isinstance(seed, bool):
        logger.debug(f"seed must be an integer, got {seed!r}")
        return False

    points: List[Any] = payload.get("points")
    if not isinstance(points, list):
        logger.debug("points must be a list")
        return False

    return all(_validate_point(point, index) for index, point in enumerate(points))


__all__ = ["validate_matrix_record", "validate_report_payload"]
