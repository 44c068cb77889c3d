"""Evaluation reports and their text and machine renderings.

The machine format is JSON with every real number written as its shortest
round-tripping decimal string, complex numbers as ``{"re", "im"}`` pairs and
matrices as ``{"re": rows, "im": rows}``. :func:`parse_machine_report`
inverts it exactly.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import QHistoryError

FORMAT = "qhistory-report/1"
DEFAULT_PRECISION = 12

STATUS_EXIT = {
    "ok": 0,
    "validation_error": 2,
    "evaluation_error": 3,
    "forbidden_history": 3,
    "alternative_endpoint": 3,
    "non_orthogonal_alternatives": 3,
    "nested_sequence_in_slot": 3,
    "no_alternatives": 3,
    "internal_consistency_error": 4,
}


@dataclass
class QueryRecord:
    kind: str
    target: object
    status: str = "ok"
    inputs: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    cross_checks: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    error: dict | None = None
    precision: int | None = None

    @property
    def exit_code(self) -> int:
        return STATUS_EXIT.get(self.status, 1)

    def fail(self, exc: QHistoryError):
        self.status = exc.kind
        self.error = {"type": type(exc).__name__, "message": str(exc)}

    def add_cross_check(self, name, projector, amplitude, tolerance=1e-10, applies=True):
        difference = abs(projector - amplitude)
        entry = {
            "name": name,
            "projector": projector,
            "amplitude": amplitude,
            "difference": float(difference),
            "tolerance": tolerance,
            "applies": applies,
        }
        self.cross_checks.append(entry)
        if applies and not difference <= tolerance and self.status == "ok":
            self.status = "internal_consistency_error"
            self.error = {
                "type": "InternalConsistencyError",
                "message": f"{name}: representations differ by {float(difference)!r}",
            }
        return entry


@dataclass
class EvalReport:
    title: str
    records: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return max((r.exit_code for r in self.records), default=0)


# ----------------------------------------------------------------- machine

_NUMBER_RE = re.compile(r"^-?\d+(\.\d+)?([eE][-+]?\d+)?$")


def _encode(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r} in report")
        return repr(value)
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        return {"re": _encode(value.real), "im": _encode(value.imag)}
    if isinstance(value, np.ndarray):
        m = np.asarray(value, dtype=np.complex128)
        return {
            "re": [[repr(float(x)) for x in row] for row in m.real],
            "im": [[repr(float(x)) for x in row] for row in m.imag],
        }
    if isinstance(value, dict):
        return {str(k): _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if value is None or isinstance(value, str):
        return value
    raise TypeError(f"cannot encode {type(value).__name__} in report")


def _decode(value):
    if isinstance(value, str):
        return float(value) if _NUMBER_RE.match(value) else value
    if isinstance(value, list):
        return [_decode(v) for v in value]
    if isinstance(value, dict):
        if set(value) == {"re", "im"}:
            re_, im_ = value["re"], value["im"]
            if isinstance(re_, list):
                return np.array(_decode(re_), dtype=float) + 1j * np.array(_decode(im_), dtype=float)
            return complex(_decode(re_), _decode(im_))
        return {k: _decode(v) for k, v in value.items()}
    return value


def _record_doc(r: QueryRecord) -> dict:
    return {
        "kind": r.kind,
        "target": _encode(r.target),
        "status": r.status,
        "exit_code": r.exit_code,
        "inputs": _encode(r.inputs),
        "results": _encode(r.results),
        "cross_checks": _encode(r.cross_checks),
        "warnings": list(r.warnings),
        "error": r.error,
    }


def to_machine(report: EvalReport) -> str:
    doc = {
        "format": FORMAT,
        "title": report.title,
        "meta": _encode(report.meta),
        "exit_code": report.exit_code,
        "records": [_record_doc(r) for r in report.records],
    }
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def parse_machine_report(text: str) -> dict:
    """Decode a machine report back into Python values."""
    doc = json.loads(text)
    if doc.get("format") != FORMAT:
        raise ValueError(f"not a {FORMAT} document")
    return _decode(doc)


# -------------------------------------------------------------------- text

def _fmt_real(x, p):
    return f"{float(x):.{p}f}"


def _fmt_complex(z, p):
    z = complex(z)
    return f"{z.real:.{p}f}{z.imag:+.{p}f}j"


def _fmt_scalar(v, p):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _fmt_real(v, p)
    if isinstance(v, (complex, np.complexfloating)):
        return _fmt_complex(v, p)
    if v is None:
        return "-"
    if isinstance(v, (list, tuple)) and all(not isinstance(x, (list, tuple, dict, np.ndarray)) for x in v):
        return ", ".join(_fmt_scalar(x, p) for x in v)
    return str(v)


def _matrix_lines(m, p, indent):
    m = np.asarray(m)
    if np.all(m.imag == 0):
        cells = [[_fmt_real(x, p) for x in row] for row in m.real]
    else:
        cells = [[_fmt_complex(x, p) for x in row] for row in m]
    width = max((len(c) for row in cells for c in row), default=0)
    return [indent + "[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells]


_SCIENTIFIC = {"difference", "tolerance"}


def _fmt_cell(key, v, p):
    if key in _SCIENTIFIC and isinstance(v, (float, np.floating)):
        return f"{float(v):.3e}"
    return _fmt_scalar(v, p)


def _table_lines(rows, p, indent):
    keys = list(rows[0])
    body = [[_fmt_cell(k, r.get(k), p) for k in keys] for r in rows]
    widths = [max(len(k), *(len(b[i]) for b in body)) for i, k in enumerate(keys)]
    lines = [indent + "  ".join(k.rjust(w) for k, w in zip(keys, widths))]
    lines.append(indent + "  ".join("-" * w for w in widths))
    lines.extend(indent + "  ".join(c.rjust(w) for c, w in zip(b, widths)) for b in body)
    return lines


def _is_table(v):
    return (
        isinstance(v, list)
        and v
        and all(isinstance(r, dict) for r in v)
        and all(list(r) == list(v[0]) for r in v)
        and all(not isinstance(x, (np.ndarray, list, dict)) for r in v for x in r.values())
    )


def _value_lines(key, v, p, indent, width):
    if isinstance(v, np.ndarray):
        return [f"{indent}{key}:"] + _matrix_lines(v, p, indent + "  ")
    if _is_table(v):
        return [f"{indent}{key}:"] + _table_lines(v, p, indent + "  ")
    if isinstance(v, dict):
        w = max((len(str(k)) for k in v), default=0)
        lines = [f"{indent}{key}:"]
        for k, x in v.items():
            lines.extend(_value_lines(str(k), x, p, indent + "  ", w))
        return lines
    if isinstance(v, list) and any(isinstance(x, (dict, np.ndarray)) for x in v):
        lines = [f"{indent}{key}:"]
        for n, x in enumerate(v, 1):
            lines.extend(_value_lines(f"[{n}]", x, p, indent + "  ", 0))
        return lines
    return [f"{indent}{key.ljust(width)}  {_fmt_scalar(v, p)}"]


def to_text(report: EvalReport, precision: int = DEFAULT_PRECISION) -> str:
    lines = [f"qhistory report: {report.title}"]
    if report.meta:
        w = max(len(k) for k in report.meta)
        for k, v in report.meta.items():
            lines.extend(_value_lines(k, v, precision, "  ", w))
    for n, r in enumerate(report.records, 1):
        p = r.precision if r.precision is not None else precision
        target = _fmt_scalar(r.target, p)
        lines.append("")
        lines.append(f"[{n}] {r.kind}  target={target}  status={r.status}")
        if r.inputs:
            w = max(len(k) for k in r.inputs)
            for k, v in r.inputs.items():
                lines.extend(_value_lines(k, v, p, "    ", w))
        if r.results:
            lines.append("  results")
            w = max(len(k) for k in r.results)
            for k, v in r.results.items():
                lines.extend(_value_lines(k, v, p, "    ", w))
        if r.cross_checks:
            lines.append("  cross-checks")
            lines.extend(_table_lines(r.cross_checks, p, "    "))
        for msg in r.warnings:
            lines.append(f"  warning: {msg}")
        if r.error:
            lines.append(f"  error: {r.error['type']}: {r.error['message']}")
    return "\n".join(lines) + "\n"


def render_report(report: EvalReport, format: str = "text", precision: int = DEFAULT_PRECISION) -> str:
    if format == "machine":
        return to_machine(report)
    if format == "text":
        return to_text(report, precision)
    raise ValueError(f"unknown report format {format!r}")
