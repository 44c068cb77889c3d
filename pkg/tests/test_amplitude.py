import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bracket
from qhistory.amplitude import (
    amplitude_of,
    closed_loops,
    loop_totals,
    path_amplitude,
    path_amplitudes,
    trace_via_amplitudes,
)
from qhistory.errors import AlternativeEndpoint, UnknownEvent
from qhistory.lang import ElementaryPath, expand_paths, parse, reverse
from qhistory.projector import gamma_of, interference_split
from qhistory.randomized import random_ast, random_basis, random_ray, random_slot_history
from qhistory.rays import EventSpace


@pytest.fixture
def space3(rng):
    basis = random_basis(rng, 3)
    events = {"a": random_ray(rng, 3), "b": random_ray(rng, 3), "c": random_ray(rng, 3)}
    events.update(a1=basis[0], a2=basis[1], b1=basis[0], b2=basis[1], b3=basis[2])
    return EventSpace(3, events)


def vec(space, name):
    return [complex(x) for x in space.ray(name).vector]


def br(space, x, y):
    return bracket(vec(space, x), vec(space, y))


def test_path_amplitude_product(space3):
    expected = br(space3, "a", "b") * br(space3, "b", "c")
    assert abs(path_amplitude(ElementaryPath(("a", "b", "c")), space3) - expected) < 1e-15


def test_path_amplitude_single_event(space3):
    assert path_amplitude(ElementaryPath(("a",)), space3) == 1


def test_path_amplitude_repeated_event(space3):
    assert abs(path_amplitude(ElementaryPath(("a", "a", "a")), space3) - 1) < 1e-15


def test_path_amplitude_unknown_event(space3):
    with pytest.raises(UnknownEvent):
        path_amplitude(ElementaryPath(("a", "zz")), space3)


def test_amplitude_alternative_start(space3):
    expected = br(space3, "a1", "b") + br(space3, "a2", "b")
    assert abs(amplitude_of(parse("(a1 | a2) & b"), space3).value - expected) < 1e-15


def test_amplitude_double_slit(space3):
    expected = br(space3, "a", "b1") * br(space3, "b1", "c") + br(space3, "a", "b2") * br(space3, "b2", "c")
    assert abs(amplitude_of(parse("a & (b1 | b2) & c"), space3).value - expected) < 1e-15


def test_amplitude_full_basis_resolves(space3):
    a = amplitude_of(parse("a & (b1 | b2 | b3) & c"), space3).value
    assert abs(a - br(space3, "a", "c")) < 1e-12


def test_general_ast_uses_explicit_paths(space3):
    h = parse("a & ((b & c) | b1) & c")
    by_paths = sum(
        np.prod([br(space3, x, y) for x, y in zip(p.events, p.events[1:])]) for p in expand_paths(h)
    )
    assert abs(amplitude_of(h, space3).value - by_paths) < 1e-14


def test_trace_via_amplitudes_three_events(space3):
    h = parse("a & b & c")
    expected = br(space3, "a", "b") * br(space3, "b", "c") * br(space3, "c", "b") * br(space3, "b", "a")
    assert abs(trace_via_amplitudes(h, space3) - expected.real) < 1e-15
    assert abs(trace_via_amplitudes(h, space3) - np.trace(gamma_of(h, space3).gamma).real) < 1e-12


def test_trace_via_amplitudes_staying(space3):
    assert abs(trace_via_amplitudes(parse("a & a"), space3) - 1) < 1e-15


def test_trace_via_amplitudes_rejects_alternative_endpoint(space3):
    with pytest.raises(AlternativeEndpoint):
        trace_via_amplitudes(parse("(a1 | a2) & b"), space3)
    with pytest.raises(AlternativeEndpoint):
        closed_loops(parse("a & (b1 | b2)"), space3)


def test_alternative_endpoint_representations_differ(space3):
    # cross terms <a1|b><b|a2> appear in |A|^2 but not in the trace
    h = parse("(a1 | a2) & b")
    tr = np.trace(gamma_of(h, space3).gamma).real
    a = amplitude_of(h, space3).value
    a_rev = amplitude_of(reverse(h), space3).value
    cross = 2 * (br(space3, "a1", "b") * br(space3, "b", "a2")).real
    assert abs((a * a_rev).real - tr - cross) < 1e-12


def test_trace_matches_projector_on_random_histories(rng):
    for _ in range(300):
        dim = int(rng.integers(2, 9))
        space, h = random_slot_history(rng, dim, int(rng.integers(2, 7)))
        tr = np.trace(gamma_of(h, space).gamma).real
        assert abs(trace_via_amplitudes(h, space) - tr) < 1e-10


def test_double_slit_loops(space3):
    h = parse("a & (b1 | b2) & c")
    loops = closed_loops(h, space3)
    assert [str(lp) for lp in loops] == ["a·b1·c·b1·a", "a·b1·c·b2·a", "a·b2·c·b1·a", "a·b2·c·b2·a"]
    assert [lp.kind for lp in loops] == ["direct", "interference", "interference", "direct"]
    for lp in loops:
        assert lp.backward.events[0] == lp.forward.events[-1]
        assert lp.backward.events[-1] == lp.forward.events[0]
    totals = loop_totals(loops)
    assert abs(totals["total"] - trace_via_amplitudes(h, space3)) < 1e-12
    split = interference_split(h, space3)
    assert abs(totals["interference"] - np.trace(split.interference)) < 1e-12


def test_loop_amplitudes_are_closed_path_amplitudes(space3):
    for lp in closed_loops(parse("a & (b1 | b2) & c"), space3):
        assert abs(lp.amplitude - path_amplitude(ElementaryPath(lp.events), space3)) < 1e-15


def test_no_alternatives_single_direct_loop(space3):
    loops = closed_loops(parse("a & b & c"), space3)
    assert len(loops) == 1 and loops[0].direct


def test_loop_sums_on_random_histories(rng):
    for _ in range(30):
        space, h = random_slot_history(rng, int(rng.integers(3, 7)), 4, alt_probability=1.0)
        loops = closed_loops(h, space)
        totals = loop_totals(loops)
        assert abs(totals["total"] - trace_via_amplitudes(h, space)) < 1e-12
        split = interference_split(h, space)
        assert abs(totals["interference"] - np.trace(split.interference)) < 1e-12


def test_path_amplitudes_order(space3):
    h = parse("a & (b1 | b2) & (b | b3) & c")
    amps = path_amplitudes(h, space3)
    for p, amp in zip(expand_paths(h), amps):
        assert amp == path_amplitude(p, space3)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_reverse_conjugates_amplitude(seed):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(2, 6))
    space = EventSpace(dim, {f"x{k}": random_ray(rng, dim) for k in range(6)})
    h = random_ast(rng, depth=3, width=3)
    a = amplitude_of(h, space).value
    assert abs(amplitude_of(reverse(h), space).value - a.conjugate()) < 1e-12
