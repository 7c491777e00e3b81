from __future__ import annotations

from typing import Any, Dict, Iterable, Sequence

import pandas as pd

from .trials import ConcavityReport

PARAM_COLUMNS = ["suite", "label", "dim", "p", "q", "s", "form", "direction"]
INT_COLUMNS = ["trials", "violations", "runtime_ms"]
FLOAT_COLUMNS = ["worst_gap"]
TEXT_COLUMNS = ["params", "witness_lane", "witness_index"]

ALL_COLUMNS = PARAM_COLUMNS + INT_COLUMNS + FLOAT_COLUMNS + TEXT_COLUMNS


def flatten_report(report: ConcavityReport, suite: str = "") -> Dict[str, Any]:
    params = dict(report.params)
    witness = report.worst_witness or {}
    return {
        "suite": suite,
        "label": report.label,
        "dim": params.get("dim"),
        "p": params.get("p"),
        "q": params.get("q"),
        "s": params.get("s"),
        "form": params.get("form", ""),
        "direction": params.get("direction", ""),
        "trials": report.trials_run,
        "violations": report.violations,
        "runtime_ms": report.runtime_ms,
        "worst_gap": report.worst_gap,
        "params": ";".join(f"{key}={value}" for key, value in sorted(params.items())),
        "witness_lane": "" if not witness else str(witness.get("lane")),
        "witness_index": "" if not witness else str(witness.get("index")),
    }


def reports_to_dataframe(
    reports: Sequence[ConcavityReport],
    *,
    suite: str = "",
    enforce_types: bool = True,
) -> pd.DataFrame:
    """One row per report; nested params are flattened into ``key=value`` text."""
    if not reports:
        return pd.DataFrame(columns=ALL_COLUMNS)

    df = pd.DataFrame([flatten_report(report, suite) for report in reports])
    df = df[ALL_COLUMNS]

    if enforce_types:
        for col in ("p", "q", "s", *FLOAT_COLUMNS):
            df[col] = pd.to_numeric(df[col], errors="coerce")
        for col in ("dim", *INT_COLUMNS):
            df[col] = pd.to_numeric(df[col], errors="coerce").astype("Int64")

    return df.reset_index(drop=True)


def ensure_required_columns(
    df: pd.DataFrame, required: Iterable[str] | None = None
) -> None:
    columns = set(df.columns)
    required = set(required or ["label", "trials", "violations", "worst_gap"])
    missing = required - columns
    if missing:
        raise ValueError(f"DataFrame missing required columns: {missing}")


__all__ = ["reports_to_dataframe", "ensure_required_columns", "flatten_report"]
