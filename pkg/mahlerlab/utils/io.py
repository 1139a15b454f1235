"""
I/O utilities for the curve table, verification reports and scan tables.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Union

import pandas as pd
from loguru import logger

from mahlerlab.exceptions import ConfigurationError

REPORT_COLUMNS = [
    "claim_id",
    "lhs",
    "rhs",
    "abs_diff",
    "tolerance",
    "passed",
    "lhs_err",
    "rhs_err",
    "wall_time_ms",
]


def load_curves(path: Union[str, Path]) -> List[Dict[str, Any]]:
    """Load the list of curve records from a UTF-8 JSON file."""
    logger.info(f"Loading curve table: {path}")
    try:
        with open(path, "r", encoding="utf-8") as file:
            records = json.load(file)
    except FileNotFoundError as e:
        logger.error(f"Curve table not found: {e}")
        raise ConfigurationError(f"curve table not found: {path}") from e
    except json.JSONDecodeError as e:
        logger.error(f"Malformed curve table {path}: {e}")
        raise ConfigurationError(f"malformed curve table: {path}") from e

    if not isinstance(records, list) or not all(isinstance(r, dict) for r in records):
        raise ConfigurationError(f"curve table must be a JSON array of objects: {path}")
    return records


def book_output_file(path: Union[str, Path]) -> Path:
    """Resolve the output path and create its parent directories."""
    try:
        outpath = Path(path)
        outpath.parent.mkdir(parents=True, exist_ok=True)
    except Exception as e:
        logger.error(f"Failed to create output directory for {path}. Error: {e}")
        raise
    return outpath


def _report_frame(df: pd.DataFrame) -> pd.DataFrame:
    missing = [c for c in REPORT_COLUMNS if c not in df.columns]
    if missing:
        raise ValueError(f"report frame lacks columns {missing}")
    return df[REPORT_COLUMNS]


def write_report_csv(df: pd.DataFrame, path: Union[str, Path]) -> None:
    """One line per verification row under the fixed report header."""
    outpath = book_output_file(path)
    _report_frame(df).to_csv(outpath, index=False)
    logger.info(f"Wrote {len(df)} report rows to {outpath}")


def write_report_json(df: pd.DataFrame, path: Union[str, Path]) -> None:
    """JSON array of objects carrying the report fields."""
    outpath = book_output_file(path)
    _report_frame(df).to_json(outpath, orient="records", indent=2, double_precision=15)
    logger.info(f"Wrote {len(df)} report rows to {outpath}")


def write_scan_csv(df: pd.DataFrame, path: Union[str, Path]) -> None:
    """(k, m, error) table from a parameter scan."""
    outpath = book_output_file(path)
    df.to_csv(outpath, index=False)
    logger.info(f"Wrote {len(df)} scan points to {outpath}")
