import math
import warnings

import numpy as np
import pytest

from oracles import add, as_lists, chain, diag_sum, max_abs_diff
from qhistory.errors import (
    AlternativeEndpoint,
    NestedSequenceInSlot,
    NoAlternatives,
    NonOrthogonalAlternatives,
    UnknownEvent,
)
from qhistory.lang import parse
from qhistory.projector import (
    NonOrthogonalAlternativesWarning,
    certainty_of,
    gamma_of,
    interference_split,
    slot_operator,
)
from qhistory.randomized import random_basis, random_ray, random_slot_history
from qhistory.rays import EventSpace, angle_ray, basis_ray, make_ray


@pytest.fixture
def space4(rng):
    basis = random_basis(rng, 4)
    return EventSpace(
        4,
        {
            "a": random_ray(rng, 4),
            "a1": basis[0],
            "a2": basis[1],
            "b": random_ray(rng, 4),
            "b1": basis[2],
            "b2": basis[3],
            "c": random_ray(rng, 4),
        },
    )


def P(space, name):
    return as_lists(space.projector(name))


def test_slot_operator_event(space4):
    assert np.array_equal(slot_operator(parse("a"), space4), space4.projector("a"))


def test_slot_operator_alternative_sums(space4):
    expected = add(P(space4, "b1"), P(space4, "b2"))
    assert max_abs_diff(slot_operator(parse("b1 | b2"), space4), expected) < 1e-15


def test_slot_operator_full_basis_is_identity(rng):
    basis = random_basis(rng, 5)
    space = EventSpace(5, {f"f{k}": r for k, r in enumerate(basis)})
    op = slot_operator(parse(" | ".join(space.names)), space)
    assert np.max(np.abs(op - np.eye(5))) < 1e-12


def test_slot_operator_errors(space4):
    with pytest.raises(NestedSequenceInSlot):
        slot_operator(parse("a & b"), space4)
    with pytest.raises(NestedSequenceInSlot):
        gamma_of(parse("a & ((b & c) | b1) & c"), space4)
    with pytest.raises(UnknownEvent):
        gamma_of(parse("a & zz"), space4)


def test_non_orthogonal_alternatives(space4):
    h = parse("a & (b | c) & a")
    with pytest.raises(NonOrthogonalAlternatives):
        gamma_of(h, space4)
    with pytest.warns(NonOrthogonalAlternativesWarning):
        op = gamma_of(h, space4, strict=False)
    assert not op.orthogonal_alternatives


def test_orthogonal_alternatives_no_warning(space4):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert gamma_of(parse("a & (b1 | b2) & c"), space4).orthogonal_alternatives


# palindromic products written out for the table rows
def test_table_row_two_events(space4):
    expected = chain(P(space4, "b"), P(space4, "a"), P(space4, "b"))
    assert max_abs_diff(gamma_of(parse("a & b"), space4).gamma, expected) < 1e-12


def test_table_row_three_events(space4):
    pa, pb, pc = (P(space4, n) for n in "abc")
    expected = chain(pc, pb, pa, pb, pc)
    assert max_abs_diff(gamma_of(parse("(a & b) & c"), space4).gamma, expected) < 1e-12


def test_table_row_alternative_start(space4):
    pa = add(P(space4, "a1"), P(space4, "a2"))
    pb = P(space4, "b")
    expected = chain(pb, pa, pb)
    assert max_abs_diff(gamma_of(parse("(a1 | a2) & b"), space4).gamma, expected) < 1e-12


def test_table_row_double_slit(space4):
    q = add(P(space4, "b1"), P(space4, "b2"))
    pa, pc = P(space4, "a"), P(space4, "c")
    expected = chain(pc, q, pa, q, pc)
    assert max_abs_diff(gamma_of(parse("[a & (b1 | b2)] & c".replace("[", "(").replace("]", ")")), space4).gamma,
                        expected) < 1e-12


def test_single_event_history(space4):
    assert np.array_equal(gamma_of(parse("a"), space4).gamma, space4.projector("a"))


@pytest.mark.parametrize("theta", [0.1, math.pi / 4, 1.0, math.pi / 2])
def test_polarizer_certainty(theta):
    space = EventSpace(2, {"a": angle_ray(0), "b": angle_ray(theta), "abar": angle_ray(math.pi / 2)})
    lam = certainty_of(parse("(a & b) & abar"), space)
    assert abs(lam - math.cos(theta) ** 2 * math.sin(theta) ** 2) < 1e-12


def test_polarizer_quarter_turn_value():
    space = EventSpace(2, {"a": angle_ray(0), "b": angle_ray(math.pi / 4), "abar": angle_ray(math.pi / 2)})
    assert abs(certainty_of(parse("a & b & abar"), space) - 0.25) < 1e-12


def test_orthogonal_transition_is_forbidden():
    space = EventSpace(2, {"a": basis_ray(2, 0), "abar": basis_ray(2, 1)})
    assert certainty_of(parse("a & abar"), space) == 0


def test_staying_is_certain(space4):
    assert abs(certainty_of(parse("a & a"), space4) - 1) < 1e-12


def test_interference_formula(space4):
    split = interference_split(parse("a & (b1 | b2) & c"), space4)
    pa, pb1, pb2, pc = (P(space4, n) for n in ("a", "b1", "b2", "c"))
    expected = add(chain(pc, pb1, pa, pb2, pc), chain(pc, pb2, pa, pb1, pc))
    assert max_abs_diff(split.interference, expected) < 1e-12
    assert [str(p) for p, _ in split.direct_terms] == ["a·b1·c", "a·b2·c"]
    assert max_abs_diff(split.direct_terms[0][1], chain(pc, pb1, pa, pb1, pc)) < 1e-12


def test_interference_vanishes_when_source_commutes(rng):
    c = random_ray(rng, 3)
    for a in (basis_ray(3, 0), basis_ray(3, 1), basis_ray(3, 2)):
        space = EventSpace(3, {"a": a, "b1": basis_ray(3, 0), "b2": basis_ray(3, 1), "c": c})
        split = interference_split(parse("a & (b1 | b2) & c"), space)
        assert np.max(np.abs(split.interference)) < 1e-12


def test_interference_split_reconstructs_total(rng):
    for _ in range(20):
        space, h = random_slot_history(rng, 4, 5, alt_probability=1.0)
        split = interference_split(h, space)
        total = split.direct_sum() + split.interference
        assert np.max(np.abs(total - gamma_of(h, space).gamma)) < 1e-12


def test_interference_split_errors(space4):
    with pytest.raises(NoAlternatives):
        interference_split(parse("a & b & c"), space4)
    with pytest.raises(AlternativeEndpoint):
        interference_split(parse("(a1 | a2) & b"), space4)


def test_history_operator_properties(rng):
    for _ in range(200):
        dim = int(rng.integers(2, 9))
        space, h = random_slot_history(rng, dim, int(rng.integers(1, 7)))
        op = gamma_of(h, space)
        g = op.gamma
        tr = np.trace(g)
        last = h.steps[-1].name if hasattr(h, "steps") else h.name
        assert np.max(np.abs(g - g.conj().T)) < 1e-12
        assert np.max(np.abs(g - tr * space.projector(last))) < 1e-10
        assert -1e-12 <= tr.real <= 1 + 1e-9
        assert abs(diag_sum(as_lists(g)) - tr) < 1e-12


def test_two_event_certainty_is_born(rng):
    for _ in range(100):
        dim = int(rng.integers(2, 7))
        a, b = random_ray(rng, dim), random_ray(rng, dim)
        space = EventSpace(dim, {"a": a, "b": b})
        born = abs(np.vdot(a.vector, b.vector)) ** 2
        assert abs(certainty_of(parse("a & b"), space) - born) < 1e-12


def test_alternative_endpoint_can_exceed_one():
    # rows of the table with a group at the start are evaluable; no bound
    space = EventSpace(2, {"a1": basis_ray(2, 0), "a2": basis_ray(2, 1), "b": make_ray([1, 0])})
    op = gamma_of(parse("(a1 | a2) & b"), space)
    assert not op.elementary_endpoints
    assert abs(op.trace - 1) < 1e-12
