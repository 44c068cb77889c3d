"""Scenario documents and query dispatch.

A scenario is a JSON object::

    {
      "dimension": 2,
      "events": {"a": {"angle": 0}, "b": {"components": [[0.6, 0], 0.8]},
                 "c": {"basis": 2}},
      "histories": {"h": "a & b & c"},
      "queries": [{"kind": "certainty", "target": "h",
                   "options": {"lenient": false, "precision": 6}}]
    }

``basis`` indices count from 1. ``angle`` is only accepted in dimension 2.
"""

from __future__ import annotations

import json
import math
import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import amplitude as amp
from . import probability as prob
from . import projector as proj
from .errors import (
    HistorySyntaxError,
    QHistoryError,
    ScenarioFileNotFound,
    ScenarioValidationError,
    SchemaError,
)
from .lang import (
    endpoints,
    event_names,
    expand_paths,
    has_elementary_endpoints,
    parse,
    render,
    reverse,
    seq,
)
from .rays import MAX_DIMENSION, EventSpace, angle_ray, basis_ray, make_ray
from .report import EvalReport, QueryRecord

QUERY_KINDS = (
    "operator",
    "certainty",
    "amplitude",
    "absolute_prob",
    "conditional_prob",
    "interference",
    "loops",
    "actualize",
    "memory_check",
)
CROSS_CHECK_TOL = 1e-10
LOOP_TOL = 1e-12

_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class Query:
    kind: str
    target: object
    strict: bool | None = None
    precision: int | None = None


@dataclass
class Scenario:
    space: EventSpace
    histories: dict = field(default_factory=dict)
    queries: list = field(default_factory=list)
    name: str = "scenario"

    @property
    def dimension(self) -> int:
        return self.space.dimension


# ----------------------------------------------------------------- loading

def load_scenario(path) -> Scenario:
    """Read and validate a scenario file.

    Raises
    ------
    ScenarioFileNotFound
        If ``path`` does not exist.
    SchemaError
        If the document is not valid JSON or has the wrong shape.
    ScenarioValidationError
        For bad rays, unparsable histories or dangling references.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ScenarioFileNotFound(f"scenario file not found: {path}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from None
    return scenario_from_dict(data, name=path.stem)


def _real(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(where, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ScenarioValidationError(where, "number must be finite")
    return float(value)


def _component(value, where):
    if isinstance(value, list):
        if len(value) != 2:
            raise SchemaError(where, "complex number must be [re, im]")
        return complex(_real(value[0], where + "[0]"), _real(value[1], where + "[1]"))
    return complex(_real(value, where))


def _ray_from_spec(spec, dim, where):
    if not isinstance(spec, dict) or len(spec) != 1:
        raise SchemaError(where, "ray must be an object with exactly one of 'components', 'angle', 'basis'")
    (key, value), = spec.items()
    try:
        if key == "components":
            if not isinstance(value, list):
                raise SchemaError(where + ".components", "expected an array")
            comps = [_component(v, f"{where}.components[{k}]") for k, v in enumerate(value)]
            if len(comps) != dim:
                raise ScenarioValidationError(
                    where + ".components", f"expected {dim} components, got {len(comps)}"
                )
            return make_ray(comps)
        if key == "angle":
            if dim != 2:
                raise ScenarioValidationError(where + ".angle", "angle shorthand requires dimension 2")
            return angle_ray(_real(value, where + ".angle"))
        if key == "basis":
            if isinstance(value, bool) or not isinstance(value, int):
                raise SchemaError(where + ".basis", f"expected an integer, got {value!r}")
            if not 1 <= value <= dim:
                raise ScenarioValidationError(where + ".basis", f"basis index {value} outside 1..{dim}")
            return basis_ray(dim, value - 1)
    except SchemaError:
        raise
    except QHistoryError as exc:
        raise ScenarioValidationError(where, str(exc)) from None
    raise SchemaError(where, f"unknown ray specification {key!r}")


def _parse_options(options, where):
    if options is None:
        return None, None
    if not isinstance(options, dict):
        raise SchemaError(where, "options must be an object")
    strict = None
    precision = None
    for key, value in options.items():
        if key in ("strict", "lenient"):
            if not isinstance(value, bool):
                raise SchemaError(f"{where}.{key}", "expected true or false")
            strict = value if key == "strict" else not value
        elif key == "precision":
            if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value <= 17:
                raise SchemaError(f"{where}.precision", "expected an integer in 0..17")
            precision = value
        else:
            raise SchemaError(f"{where}.{key}", "unknown option")
    return strict, precision


def scenario_from_dict(data, name: str = "scenario") -> Scenario:
    if not isinstance(data, dict):
        raise SchemaError("$", "scenario must be a JSON object")
    unknown = set(data) - {"dimension", "events", "histories", "queries", "name"}
    if unknown:
        raise SchemaError(sorted(unknown)[0], "unknown top-level field")
    dim = data.get("dimension")
    if isinstance(dim, bool) or not isinstance(dim, int):
        raise SchemaError("dimension", "expected a positive integer")
    if not 1 <= dim <= MAX_DIMENSION:
        raise ScenarioValidationError("dimension", f"must be in 1..{MAX_DIMENSION}")

    events_doc = data.get("events", {})
    if not isinstance(events_doc, dict):
        raise SchemaError("events", "expected an object")
    events = {}
    for ev, spec in events_doc.items():
        if not _IDENT_RE.match(ev):
            raise ScenarioValidationError(f"events.{ev}", "event names must be identifiers")
        events[ev] = _ray_from_spec(spec, dim, f"events.{ev}")
    space = EventSpace(dim, events)

    hist_doc = data.get("histories", {})
    if not isinstance(hist_doc, dict):
        raise SchemaError("histories", "expected an object")
    histories = {}
    for hname, text in hist_doc.items():
        where = f"histories.{hname}"
        if not isinstance(text, str):
            raise SchemaError(where, "expected a history expression string")
        try:
            h = parse(text)
        except HistorySyntaxError as exc:
            err = ScenarioValidationError(where, f"{exc.message} at position {exc.position}")
            err.position = exc.position
            raise err from None
        missing = [e for e in event_names(h) if e not in space]
        if missing:
            raise ScenarioValidationError(where, f"unknown event {missing[0]!r}")
        histories[hname] = h

    queries_doc = data.get("queries", [])
    if not isinstance(queries_doc, list):
        raise SchemaError("queries", "expected an array")
    queries = [_parse_query(q, f"queries[{k}]", space, histories) for k, q in enumerate(queries_doc)]
    return Scenario(space, histories, queries, name=str(data.get("name", name)))


def _parse_query(doc, where, space, histories):
    if not isinstance(doc, dict):
        raise SchemaError(where, "query must be an object")
    unknown = set(doc) - {"kind", "target", "options"}
    if unknown:
        raise SchemaError(f"{where}.{sorted(unknown)[0]}", "unknown query field")
    kind = doc.get("kind")
    if kind not in QUERY_KINDS:
        raise SchemaError(f"{where}.kind", f"expected one of {', '.join(QUERY_KINDS)}")
    target = doc.get("target")
    if kind == "memory_check":
        if not (isinstance(target, list) and len(target) == 3 and all(isinstance(t, str) for t in target)):
            raise SchemaError(f"{where}.target", "memory_check needs three event names")
        for t in target:
            if t not in space:
                raise ScenarioValidationError(f"{where}.target", f"unknown event {t!r}")
        target = tuple(target)
    else:
        if not isinstance(target, str):
            raise SchemaError(f"{where}.target", "expected a history name")
        if target not in histories:
            raise ScenarioValidationError(f"{where}.target", f"unknown history {target!r}")
    strict, precision = _parse_options(doc.get("options"), f"{where}.options")
    return Query(kind, target, strict, precision)


# ---------------------------------------------------------------- dispatch

def _path_rows(h, space):
    paths = expand_paths(h)
    amps = amp.path_amplitudes(h, space)
    return [{"path": str(p), "amplitude": complex(a)} for p, a in zip(paths, amps)]


def _q_operator(rec, h, space, strict):
    op = proj.gamma_of(h, space, strict)
    tr = op.trace
    rec.results.update(gamma=op.gamma, trace=tr.real, trace_imag=tr.imag,
                       elementary_endpoints=op.elementary_endpoints)
    if op.elementary_endpoints:
        rec.add_cross_check("trace", tr.real, amp.trace_via_amplitudes(h, space), CROSS_CHECK_TOL)


def _q_certainty(rec, h, space, strict):
    op = proj.gamma_of(h, space, strict)
    lam = proj.certainty_from(op)
    rec.results["certainty"] = lam
    if op.elementary_endpoints:
        rec.add_cross_check("certainty", lam, amp.trace_via_amplitudes(h, space), CROSS_CHECK_TOL)
    else:
        rec.warnings.append("alternative endpoint: amplitude route does not apply")


def _q_amplitude(rec, h, space, strict):
    a = amp.amplitude_of(h, space).value
    a_rev = amp.amplitude_of(reverse(h), space).value
    rec.results.update(amplitude=a, reverse_amplitude=a_rev, amplitude_product=a * a_rev,
                       paths=_path_rows(h, space))
    tr = proj.gamma_of(h, space, strict).trace.real
    if has_elementary_endpoints(h):
        rec.add_cross_check("trace", tr, (a * a_rev).real, CROSS_CHECK_TOL)
    else:
        # no prescription for which representation is right here; show both
        rec.add_cross_check("trace", tr, (a * a_rev).real, CROSS_CHECK_TOL, applies=False)
        rec.warnings.append(
            "alternative endpoint: operator trace and amplitude product need not agree"
        )


def _q_probability(conditional):
    def run(rec, h, space, strict):
        f = prob.conditional_probability if conditional else prob.absolute_probability
        r = f(h, space, strict)
        rec.results.update(probability=r.value, numerator=r.numerator, denominator=r.denominator)
        if r.amplitude_value is not None:
            rec.add_cross_check("probability", r.raw, r.amplitude_value, CROSS_CHECK_TOL)
        else:
            rec.warnings.append("alternative endpoint: amplitude route does not apply")

    return run


def _q_interference(rec, h, space, strict):
    split = proj.interference_split(h, space, strict)
    rec.results.update(
        total=split.total,
        direct_terms=[
            {"path": str(p), "trace": float(np.trace(op).real), "operator": op}
            for p, op in split.direct_terms
        ],
        interference=split.interference,
        interference_trace=float(np.trace(split.interference).real),
        interference_max_abs=float(np.max(np.abs(split.interference))),
    )
    totals = amp.loop_totals(amp.closed_loops(h, space))
    rec.add_cross_check("interference_trace", float(np.trace(split.interference).real),
                        totals["interference"].real, LOOP_TOL)


def _q_loops(rec, h, space, strict):
    loops = amp.closed_loops(h, space)
    totals = amp.loop_totals(loops)
    rec.results.update(
        loops=[{"loop": str(lp), "kind": lp.kind, "amplitude": lp.amplitude} for lp in loops],
        direct_sum=totals["direct"],
        interference_sum=totals["interference"],
        total=totals["total"],
    )
    tr = proj.gamma_of(h, space, strict).trace.real
    rec.add_cross_check("trace", tr, totals["total"].real, CROSS_CHECK_TOL)


def _q_actualize(rec, h, space, strict):
    psi = prob.actualize(h, space, strict)
    last = endpoints(h)[1].name
    rec.results.update(
        operator=psi,
        final_event=last,
        distance_to_final_projector=float(np.max(np.abs(psi - space.projector(last)))),
    )


def _q_memory(rec, target, space, strict):
    a, b, c = target
    p_ab, p_b = prob.memory_loss_check(a, b, c, space)
    psi = prob.actualize(seq(a, b), space, strict)
    pc = space.projector(c)
    p_psi = float(np.trace(pc @ psi @ pc).real)
    rec.results.update(p_c_given_ab=p_ab, p_c_given_b=p_b, p_c_given_actualized=p_psi)
    rec.add_cross_check("memory_loss", p_ab, p_b, CROSS_CHECK_TOL)


_DISPATCH = {
    "operator": _q_operator,
    "certainty": _q_certainty,
    "amplitude": _q_amplitude,
    "absolute_prob": _q_probability(False),
    "conditional_prob": _q_probability(True),
    "interference": _q_interference,
    "loops": _q_loops,
    "actualize": _q_actualize,
    "memory_check": _q_memory,
}


def run_query(s: Scenario, q: Query, strict: bool = True) -> QueryRecord:
    """Evaluate one query. Errors are captured in the record's status."""
    effective_strict = strict if q.strict is None else q.strict
    target = list(q.target) if isinstance(q.target, tuple) else q.target
    rec = QueryRecord(kind=q.kind, target=target, precision=q.precision)
    rec.inputs["strict"] = effective_strict
    if q.kind == "memory_check":
        subject = q.target
    else:
        subject = s.histories[q.target]
        rec.inputs["history"] = render(subject)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            _DISPATCH[q.kind](rec, subject, s.space, effective_strict)
        except QHistoryError as exc:
            rec.fail(exc)
    rec.warnings.extend(str(w.message) for w in caught)
    return rec


def run_scenario(s: Scenario, strict: bool = True) -> EvalReport:
    report = EvalReport(title=s.name, meta={"dimension": s.dimension, "events": list(s.space.names)})
    for q in s.queries:
        report.records.append(run_query(s, q, strict))
    return report
