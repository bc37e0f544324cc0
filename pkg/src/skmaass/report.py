"""Report container and its JSON / CSV / TSV renderings.

JSON layout (keys in this order)::

    {"meta": {"tool", "version", "command", "k", "config", "args",
              "digits", "summary", "timestamp"},
     "rows": [{<column>: <value>, ...}, ...]}

High-precision values are written as fixed-point decimal strings with
``meta.digits`` places; exact rationals as ``"num/den"``; exact integers as
plain (arbitrary-size) integers.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .hpreal import HighPrecisionReal

FORMATS = ("json", "csv", "tsv")
DEFAULT_DIGITS = 25


@dataclass
class Report:
    command: str
    k: int
    config: dict[str, Any]
    columns: Sequence[str]
    rows: list[Sequence[Any]]
    args: dict[str, Any] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)
    digits: int = DEFAULT_DIGITS
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def _cell(self, v: Any) -> Any:
        if isinstance(v, HighPrecisionReal):
            return v.to_decimal(self.digits)
        if isinstance(v, Fraction):
            return f"{v.numerator}/{v.denominator}"
        if isinstance(v, (list, tuple)):
            return [self._cell(x) for x in v]
        if isinstance(v, dict):
            return {key: self._cell(x) for key, x in v.items()}
        return v

    def meta(self) -> dict[str, Any]:
        return {
            "tool": "skmaass",
            "version": __version__,
            "command": self.command,
            "k": self.k,
            "config": self._cell(self.config),
            "args": self._cell(self.args),
            "digits": self.digits,
            "summary": self._cell(self.summary),
            "timestamp": self.timestamp,
        }

    def to_json(self) -> str:
        rows = [dict(zip(self.columns, (self._cell(v) for v in row))) for row in self.rows]
        return json.dumps({"meta": self.meta(), "rows": rows}, indent=2, ensure_ascii=False) + "\n"

    def to_delimited(self, delimiter: str = ",") -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow(["" if v is None else self._cell(v) for v in row])
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_delimited(",")
        if fmt == "tsv":
            return self.to_delimited("\t")
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def strip_timestamp(text: str) -> str:
    """Drop the timestamp line so two JSON reports can be compared byte for byte."""
    return "\n".join(line for line in text.split("\n") if not line.lstrip().startswith('"timestamp"'))
