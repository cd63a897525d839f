"""
Rendering of command and API results.
json and csv carry no timestamps or locale-dependent text, so identical inputs give identical bytes.
"""

import json
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd


class OutputFormat(str, Enum):
    JSON = 'json'
    CSV = 'csv'
    PRETTY = 'pretty'


def render_json(document: Any) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False, allow_nan=False) + '\n'


def _frame(rows: Sequence[Dict[str, Any]], columns: Optional[Sequence[str]]) -> pd.DataFrame:
    return pd.DataFrame(list(rows), columns=list(columns) if columns else None)


def render_csv(rows: Sequence[Dict[str, Any]], columns: Optional[Sequence[str]] = None) -> str:
    return _frame(rows, columns).to_csv(index=False, lineterminator='\n')


def render_pretty(rows: Sequence[Dict[str, Any]], columns: Optional[Sequence[str]] = None) -> str:
    frame = _frame(rows, columns)
    if frame.empty:
        return '(no rows)\n'
    return frame.to_string(index=False, na_rep='-', float_format=lambda v: f'{v:,.4f}') + '\n'


def render(fmt: str, document: Any, rows: List[Dict[str, Any]], columns: Optional[Sequence[str]] = None) -> str:
    """``document`` is the full JSON result; ``rows`` its flat table form for csv and pretty output"""
    fmt = OutputFormat(fmt)
    if fmt == OutputFormat.JSON:
        return render_json(document)
    if fmt == OutputFormat.CSV:
        return render_csv(rows, columns)
    return render_pretty(rows, columns)
