"""Report model and deterministic CSV / JSON-lines rendering.

Rendering is byte-deterministic for a fixed report: floats via ``repr``,
JSON with sorted keys, no timestamps.  Wall-clock metadata stays on the
in-memory object only, so rerunning a config reproduces output files
byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

CSV_COLUMNS = (
    "scenario",
    "cell",
    "metric",
    "estimate",
    "ci_lo",
    "ci_hi",
    "replicas",
    "passed",
    "detail",
)


@dataclass(frozen=True)
class ReportRow:
    cell: dict
    metric: str
    estimate: float
    ci_lo: float | None = None
    ci_hi: float | None = None
    replicas: int | None = None
    passed: bool | None = None
    detail: str = ""


@dataclass
class Report:
    scenario: str
    config_echo: dict
    rows: list[ReportRow] = field(default_factory=list)
    elapsed_seconds: float = 0.0  # informational; never serialized

    def failed_rows(self) -> list[ReportRow]:
        return [r for r in self.rows if r.passed is False]


def _fmt_cell(cell: dict) -> str:
    return ";".join(f"{k}={v}" for k, v in cell.items())


def _fmt_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(report: Report) -> str:
    lines = [f"# scenario={report.scenario}"]
    echo = report.config_echo
    lines.append(f"# seed={echo['seed']}")
    lines.append(f"# replicas={echo['replicas']}")
    lines.append(f"# params={json.dumps(echo['params'], sort_keys=True)}")
    lines.append(",".join(CSV_COLUMNS))
    for row in report.rows:
        values = (
            report.scenario,
            _fmt_cell(row.cell),
            row.metric,
            _fmt_value(row.estimate),
            _fmt_value(row.ci_lo),
            _fmt_value(row.ci_hi),
            _fmt_value(row.replicas),
            _fmt_value(row.passed),
            row.detail,
        )
        for v in values:
            if "," in v or "\n" in v:
                raise ValueError(f"CSV field may not contain separators: {v!r}")
        lines.append(",".join(values))
    return "\n".join(lines) + "\n"


def render_jsonl(report: Report) -> str:
    records = [{"record": "config", **report.config_echo}]
    for row in report.rows:
        records.append(
            {
                "record": "row",
                "scenario": report.scenario,
                "cell": row.cell,
                "metric": row.metric,
                "estimate": row.estimate,
                "ci_lo": row.ci_lo,
                "ci_hi": row.ci_hi,
                "replicas": row.replicas,
                "passed": row.passed,
                "detail": row.detail,
            }
        )
    return "\n".join(json.dumps(r, sort_keys=True) for r in records) + "\n"


def emit_report(report: Report, fmt: str, path) -> None:
    """Write the report in the requested format; bytes are a pure function
    of the report content."""
    if fmt == "csv":
        text = render_csv(report)
    elif fmt == "jsonl":
        text = render_jsonl(report)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    Path(path).write_bytes(text.encode("utf-8"))
