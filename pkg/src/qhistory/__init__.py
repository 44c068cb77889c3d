"""Quantum histories of events in ray space.

A history joins events (rays) with ``&`` (one after another) and ``|``
(mutually exclusive alternatives). It can be evaluated as a palindromic
product of projectors or as a sum of bracket products over its paths; the
trace of the former equals the amplitude times the amplitude of the reversed
history.
"""

from .amplitude import (
    Amplitude,
    ClosedLoop,
    amplitude_of,
    closed_loops,
    path_amplitude,
    trace_via_amplitudes,
)
from .kernels import BACKEND
from .lang import (
    Alt,
    ElementaryPath,
    EventRef,
    Seq,
    alt,
    endpoints,
    expand_paths,
    parse,
    render,
    reverse,
    seq,
)
from .probability import (
    ProbabilityResult,
    QuantumDie,
    absolute_probability,
    actualize,
    conditional_probability,
    make_die,
    memory_loss_check,
    rotated_face_probability,
)
from .projector import (
    HistoryOperator,
    InterferenceSplit,
    certainty_of,
    gamma_of,
    interference_split,
    slot_operator,
)
from .rays import (
    EventSpace,
    Ray,
    conjugate_projector,
    inner_product,
    make_ray,
    projector_of,
    rotation_2d,
    trace,
)
from .report import EvalReport, render_report
from .scenario import Query, Scenario, load_scenario, run_query

__version__ = "0.1.0"
