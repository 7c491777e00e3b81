from __future__ import annotations

import logging
from typing import Any, Dict

import pandas as pd

from .dataframe import ensure_required_columns

logger = logging.getLogger(__name__)

EMPTY_METRICS = {
    "count": 0,
    "mean": None,
    "median": None,
    "std": None,
    "min": None,
    "max": None,
    "q25": None,
    "q75": None,
}


def calculate_gap_metrics(df: pd.DataFrame) -> Dict[str, Any]:
    """
    Summary statistics of the worst gaps in a report table.

    Args:
        df: DataFrame from reports_to_dataframe (must have 'worst_gap')

    Returns:
        Dictionary with count, mean, median, std, min, max, q25, q75,
        plus the number of points and of points with violations
    """
    if df.empty or "worst_gap" not in df.columns:
        return {**EMPTY_METRICS, "points": 0, "failing_points": 0}

    ensure_required_columns(df, ["worst_gap", "violations"])
    gaps = df["worst_gap"].dropna()
    failing = int((df["violations"].fillna(0) > 0).sum())
    if gaps.empty:
        return {**EMPTY_METRICS, "points": len(df), "failing_points": failing}

    return {
        "count": len(gaps),
        "mean": float(gaps.mean()),
        "median": float(gaps.median()),
        "std": float(gaps.std()) if len(gaps) > 1 else 0.0,
        "min": float(gaps.min()),
        "max": float(gaps.max()),
        "q25": float(gaps.quantile(0.25)),
        "q75": float(gaps.quantile(0.75)),
        "points": len(df),
        "failing_points": failing,
    }


__all__ = ["calculate_gap_metrics"]
