"""
CSV and JSON serialisation of result tables.
"""

import csv
import io
from typing import Any, Dict, List, Optional, TextIO

import numpy as np
from pydantic import BaseModel, Field

from .. import __version__
from ..models import Curve


class Table(BaseModel):
    """Column-oriented result: parallel arrays under ordered column names."""
    columns: Dict[str, List[Any]]
    meta: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_curve(cls, curve: Curve, x_name: Optional[str] = None, y_name: Optional[str] = None,
                   extra: Optional[Dict[str, Any]] = None, meta: Optional[Dict[str, Any]] = None) -> "Table":
        columns = {
            x_name or curve.x_label: _plain(curve.xs),
            y_name or curve.y_label: _plain(curve.ys),
        }
        for name, values in (extra or {}).items():
            columns[name] = _plain(values)

        merged = dict(curve.meta)
        merged.update(meta or {})
        return cls(columns=columns, meta=merged)

    @classmethod
    def from_columns(cls, columns: Dict[str, Any], meta: Optional[Dict[str, Any]] = None) -> "Table":
        return cls(columns={name: _plain(values) for name, values in columns.items()}, meta=meta or {})

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values()), []))


class Document(BaseModel):
    """JSON output document."""
    meta: Dict[str, Any]
    data: Dict[str, List[Any]]


def _plain(values: Any) -> List[Any]:
    """Convert arrays and numpy scalars into plain Python lists."""
    if isinstance(values, np.ndarray):
        return values.tolist()
    return [v.item() if isinstance(v, np.generic) else v for v in values]


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        # repr is the shortest string that round-trips the double
        return repr(value)
    return str(value)


def write_csv(table: Table, stream: TextIO) -> None:
    """Header row plus one record per row, LF line endings."""
    writer = csv.writer(stream, lineterminator="\n")
    names = list(table.columns)
    writer.writerow(names)
    for row in zip(*(table.columns[name] for name in names)):
        writer.writerow([_cell(value) for value in row])


def write_json(table: Table, stream: TextIO) -> None:
    """Object with the resolved parameters under meta and the columns under data."""
    meta = {"version": __version__}
    meta.update(table.meta)
    stream.write(Document(meta=meta, data=table.columns).model_dump_json(indent=2))
    stream.write("\n")


def render(table: Table, fmt: str) -> str:
    """Serialise a table to a string in the requested format."""
    buffer = io.StringIO()
    if fmt == "json":
        write_json(table, buffer)
    else:
        write_csv(table, buffer)
    return buffer.getvalue()
