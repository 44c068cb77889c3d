"""Built-in demonstrations: polarizers, double slit, quantum die, self-check.

Each demo is a pure function of its parameters returning an
:class:`~qhistory.report.EvalReport`.
"""

from __future__ import annotations

import math

import numpy as np

from . import amplitude as amp
from . import probability as prob
from . import projector as proj
from .lang import parse, render
from .randomized import random_slot_history
from .rays import EventSpace, angle_ray, basis_ray, make_ray
from .report import EvalReport, QueryRecord
from .scenario import Query, Scenario, run_query

POLARIZER_HISTORY = "(a & b) & abar"
DOUBLE_SLIT_HISTORY = "a & (b1 | b2) & c"


def polarizer_space(theta: float) -> EventSpace:
    return EventSpace(2, {"a": angle_ray(0.0), "b": angle_ray(theta), "abar": angle_ray(math.pi / 2)})


def polarizer_certainty(theta: float) -> float:
    return proj.certainty_of(parse(POLARIZER_HISTORY), polarizer_space(theta))


def polarizer(theta: float, sweep: int | None = None, strict: bool = True) -> EvalReport:
    """Crossed polarizers with a third one at ``theta`` in between."""
    h = parse(POLARIZER_HISTORY)
    s = Scenario(polarizer_space(theta), {"polarizer": h}, name="polarizer")
    report = EvalReport("polarizer", meta={"theta": float(theta), "history": render(h)})
    for kind in ("certainty", "amplitude", "conditional_prob"):
        report.records.append(run_query(s, Query(kind, "polarizer"), strict))

    lam = proj.certainty_of(h, s.space, strict)
    analytic = math.cos(theta) ** 2 * math.sin(theta) ** 2
    rec = QueryRecord("analytic", "polarizer")
    rec.results.update(certainty=lam, analytic=analytic)
    rec.add_cross_check("cos2_sin2", lam, analytic, 1e-12)
    report.records.append(rec)

    if sweep:
        rows = []
        for k in range(sweep + 1):
            t = k * (math.pi / 2) / sweep
            lam_t = polarizer_certainty(t)
            exact = math.cos(t) ** 2 * math.sin(t) ** 2
            rows.append({"theta": t, "certainty": lam_t, "analytic": exact, "difference": abs(lam_t - exact)})
        rec = QueryRecord("sweep", "polarizer")
        rec.results["rows"] = rows
        worst = max(r["difference"] for r in rows)
        rec.results["max_difference"] = worst
        rec.add_cross_check("sweep", worst, 0.0, 1e-12)
        report.records.append(rec)
    return report


def double_slit_space(commuting: bool = False) -> EventSpace:
    """Source ``a``, slits ``b1``/``b2`` and screen point ``c`` in 3-D.

    With ``commuting`` the source lies along slit ``b1``, so its projector
    commutes with both slit projectors.
    """
    if commuting:
        a = basis_ray(3, 0)
    else:
        a = make_ray(np.array([1.0, 1.0, 1.0]) / math.sqrt(3))
    c = make_ray(np.array([2.0, 1.0, 2.0]) / 3.0)
    return EventSpace(3, {"a": a, "b1": basis_ray(3, 0), "b2": basis_ray(3, 1), "c": c})


def double_slit(commuting: bool = False, strict: bool = True) -> EvalReport:
    h = parse(DOUBLE_SLIT_HISTORY)
    space = double_slit_space(commuting)
    s = Scenario(space, {"double_slit": h}, name="double-slit")
    report = EvalReport("double-slit", meta={"commuting": commuting, "history": render(h)})
    for kind in ("interference", "loops", "certainty"):
        report.records.append(run_query(s, Query(kind, "double_slit"), strict))

    split = proj.interference_split(h, space, strict)
    loops = amp.closed_loops(h, space)
    cross = [lp for lp in loops if not lp.direct]
    total = proj.certainty_of(h, space, strict)
    path_probs = [float(np.trace(op).real) for _, op in split.direct_terms]
    rec = QueryRecord("summary", "double_slit")
    rec.results.update(
        total_probability=total,
        path_probabilities=path_probs,
        boolean_sum=sum(path_probs),
        interference_trace=float(np.trace(split.interference).real),
        interference_loops=[{"loop": str(lp), "amplitude": lp.amplitude} for lp in cross],
        interference_max_abs=float(np.max(np.abs(split.interference))),
    )
    rec.add_cross_check(
        "trace_I_vs_loops",
        complex(np.trace(split.interference)),
        sum((lp.amplitude for lp in cross), 0j),
        1e-12,
    )
    if commuting:
        rec.add_cross_check("boolean_sum", total, sum(path_probs), 1e-12)
    report.records.append(rec)
    return report


def plane_rotation(n: int, theta: float) -> np.ndarray:
    """Rotation by ``theta`` in the plane of the first two axes of ``n``-D."""
    u = np.eye(n, dtype=np.complex128)
    c, s = math.cos(theta), math.sin(theta)
    u[:2, :2] = [[c, s], [-s, c]]
    return u


def die(faces: int = 6, rotate: float | None = None) -> EvalReport:
    d = prob.make_die(faces)
    report = EvalReport("die", meta={"faces": faces, "rotate": rotate})
    rec = QueryRecord("faces", f"die{faces}")
    probs = [prob.absolute_probability(parse(d.face(i)), d.space) for i in range(1, faces + 1)]
    rec.results["faces"] = [
        {"face": d.face(i), "probability": p.value, "laplace": 1.0 / faces} for i, p in enumerate(probs, 1)
    ]
    rec.results["sum"] = sum(p.value for p in probs)
    rec.add_cross_check("normalization", rec.results["sum"], 1.0, 1e-12)
    report.records.append(rec)

    if rotate is not None:
        u = plane_rotation(faces, rotate)
        rec = QueryRecord("rotated", f"die{faces}")
        matrix = np.array(
            [[prob.rotated_face_probability(d, i, u, j) for j in range(1, faces + 1)] for i in range(1, faces + 1)]
        )
        rec.results["theta"] = float(rotate)
        rec.results["conditional"] = matrix
        rec.results["row_sums"] = [float(x) for x in matrix.sum(axis=1)]
        rec.results["same_face_f1"] = float(matrix[0, 0])
        rec.results["born"] = math.cos(rotate) ** 2
        rec.add_cross_check("born", float(matrix[0, 0]), math.cos(rotate) ** 2, 1e-12)
        rec.add_cross_check("row_sums", float(np.max(np.abs(matrix.sum(axis=1) - 1))), 0.0, 1e-10)
        report.records.append(rec)
    return report


def selfcheck(seed: int = 0, count: int = 1000, tol: float = 1e-10) -> EvalReport:
    """Compare operator traces with amplitude products on random histories."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    failures = []
    for k in range(count):
        dim = int(rng.integers(2, 9))
        n_slots = int(rng.integers(2, 7))
        space, h = random_slot_history(rng, dim, n_slots)
        tr = float(np.trace(proj.gamma_of(h, space).gamma).real)
        via_amp = amp.trace_via_amplitudes(h, space)
        diff = abs(tr - via_amp)
        worst = max(worst, diff)
        if not diff < tol:
            failures.append({"index": k, "history": render(h), "dimension": dim, "difference": diff})
    report = EvalReport("selfcheck", meta={"seed": seed, "count": count, "tolerance": tol})
    rec = QueryRecord("representation_equivalence", f"{count} histories")
    rec.results.update(max_difference=worst, failures=len(failures))
    if failures:
        rec.results["failed"] = failures
    rec.add_cross_check("max_difference", worst, 0.0, tol)
    report.records.append(rec)
    return report
