import random
from fractions import Fraction

import pytest

from hironaka.coeff import (
    coefficient_pair,
    delta_invariant,
    find_maximal_contact,
    prepare_vertices,
)
from hironaka.errors import PreconditionError
from hironaka.frames import Frame
from hironaka.pairs import Component, Pair, is_singular_at_origin
from hironaka.poly import Polynomial, parse_polynomial, substitute
from hironaka.polyhedra import delta, polyhedron_of_pair

from conftest import random_singular_pair

NAMES2 = ["x", "y"]
NAMES4 = ["x", "y", "z", "t"]
FRAME_XY = Frame(("x", "y"), (0,), (1,))
FRAME_T = Frame(("x", "y", "z", "t"), (0, 1, 2), (3,))


def p(text, names=NAMES2):
    return parse_polynomial(text, names)


# ---------------------------------------------------------------------------
# coefficient_pair


def test_coefficient_pair_of_curve():
    C = coefficient_pair(Pair.single([p("y^2 - x^3")], 2), FRAME_XY, [1])
    assert len(C.components) == 1
    comp = C.components[0]
    assert comp.weight == 2
    assert comp.gens == (parse_polynomial("-x^3", ["x"]),)


def test_coefficient_pair_of_threefold():
    E = Pair.single([p("t^2 + x*y*z", NAMES4)], 2)
    C = coefficient_pair(E, FRAME_T, [3])
    assert len(C.components) == 1
    assert C.components[0].weight == 2
    assert C.components[0].gens == (parse_polynomial("x*y*z", ["x", "y", "z"]),)


def test_coefficient_pair_two_variable_restriction():
    E = Pair((
        Component((p("z^3 - x^2*y^2", NAMES4),), Fraction(3)),
        Component((p("t", NAMES4),), Fraction(1)),
    ))
    frame = Frame(tuple(NAMES4), (0, 1), (2, 3))
    C = coefficient_pair(E, frame, [2, 3])
    assert len(C.components) == 1
    assert C.components[0].weight == 3
    assert C.components[0].gens == (parse_polynomial("-x^2*y^2", ["x", "y"]),)


def test_coefficient_pair_levels_carry_weights():
    E = Pair.single([p("y^3 + y*x^3 + x^5")], 3)
    C = coefficient_pair(E, FRAME_XY, [1])
    data = {comp.weight: comp.gens for comp in C.components}
    assert set(data) == {Fraction(3), Fraction(2)}
    assert data[Fraction(3)] == (parse_polynomial("x^5", ["x"]),)
    assert data[Fraction(2)] == (parse_polynomial("x^3", ["x"]),)


def test_coefficient_pair_fractional_level_on_marked_variable():
    frame = Frame(("x", "y"), (0,), (1,), (("E1", 0),))
    D = Polynomial(2, {(Fraction(1, 2), Fraction(1, 2)): Fraction(1)})
    E = Pair((Component((D,), Fraction(1, 2)), Component((p("y"),), Fraction(1))))
    C = coefficient_pair(E, frame, [0])
    # the monomial sits exactly at its weight: nothing survives from it
    assert [comp.gens for comp in C.components] == [(parse_polynomial("y", ["y"]),)]


# ---------------------------------------------------------------------------
# find_maximal_contact


def test_contact_on_curve():
    mc = find_maximal_contact(Pair.single([p("y^2 - x^3")], 2), FRAME_XY)
    assert mc.witness == p("y")
    assert mc.contact_index == 1
    assert mc.pair.all_generators() == (p("y^2 - x^3"),)


def test_contact_on_threefold():
    E = Pair.single([p("t^2 + x*y*z", NAMES4)], 2)
    mc = find_maximal_contact(E, FRAME_T)
    assert mc.witness == p("t", NAMES4)
    assert mc.contact_index == 3


def test_contact_after_shift():
    E = Pair.single([p("(y+x)^2 - x^3")], 2)
    mc = find_maximal_contact(E, FRAME_XY)
    assert mc.witness == p("y + x")
    # in the adapted coordinates the pair is the plain cusp again
    assert mc.pair.all_generators() == (p("y^2 - x^3"),)


def test_contact_prefers_given_variables():
    E = Pair((
        Component((p("y^2 - x^3"),), Fraction(2)),
        Component((p("x"),), Fraction(1)),
    ))
    mc = find_maximal_contact(E, FRAME_XY, preferred_variables=(0,))
    assert mc.contact_index == 0
    assert mc.witness == p("x")


def test_contact_requires_witness():
    # both generators have order strictly above their weight
    E = Pair.single([p("y^3")], 2)
    with pytest.raises(PreconditionError, match="no maximal contact witness"):
        find_maximal_contact(E, FRAME_XY)


def test_contact_requires_singularity():
    with pytest.raises(PreconditionError, match="point not in Sing"):
        find_maximal_contact(Pair.single([p("y - x^2")], 2), FRAME_XY)


def test_contact_rejects_completion_level_input():
    # V(z) for z = y + y^2 + x^2 is a graph with an infinite expansion
    E = Pair.single([p("(y + y^2 + x^2)^2")], 2)
    with pytest.raises(PreconditionError, match="completion"):
        find_maximal_contact(E, FRAME_XY)


def test_contact_unit_tail_is_fine():
    # y(1+y) generates the same hypersurface germ as y
    E = Pair.single([p("(y + y^2)^2 - x^5")], 2)
    mc = find_maximal_contact(E, FRAME_XY)
    assert mc.contact_index == 1


# ---------------------------------------------------------------------------
# prepare_vertices


def test_prepare_removes_solvable_vertex():
    res = prepare_vertices(Pair.single([p("(y + x^2)^2")], 2), FRAME_XY)
    assert res.prepared
    assert res.polyhedron.is_empty()
    assert res.translations == (((2,), (Fraction(-1),)),)


def test_prepare_keeps_unsolvable_vertex():
    res = prepare_vertices(Pair.single([p("y^2 - x^3")], 2), FRAME_XY)
    assert res.prepared
    assert res.polyhedron.vertices == ((Fraction(3, 2),),)
    assert res.translations == ()


def test_prepare_identity_when_already_prepared():
    E = Pair.single([p("y^2 - x^3")], 2)
    res = prepare_vertices(E, FRAME_XY)
    assert res.pair == E
    assert res.frame == FRAME_XY


def test_prepare_never_grows_polyhedron(rng):
    for _ in range(20):
        E = random_singular_pair(rng, 2)
        try:
            before = polyhedron_of_pair(E, FRAME_XY)
            res = prepare_vertices(E, FRAME_XY, max_iters=8)
        except PreconditionError:
            continue  # directrix not spanned by y: out of contract
        assert res.polyhedron.subset_of(before)
        assert delta(res.polyhedron) == delta(before)


def test_prepare_multi_step():
    # two separately solvable vertices
    E = Pair.single([p("(y + x^2 + x^3)^2")], 2)
    res = prepare_vertices(E, FRAME_XY)
    assert res.prepared
    assert res.polyhedron.is_empty()
    assert len(res.translations) >= 1


# ---------------------------------------------------------------------------
# delta_invariant


def test_delta_invariant_cusp():
    assert delta_invariant(Pair.single([p("y^2 - x^3")], 2), FRAME_XY) == Fraction(3, 2)


def test_delta_invariant_threefold():
    E = Pair.single([p("t^2 + x*y*z", NAMES4)], 2)
    assert delta_invariant(E, FRAME_T) == Fraction(3, 2)


def test_delta_invariant_of_equivalent_pairs_agrees():
    frame = Frame(tuple(NAMES4), (0, 1), (2, 3))
    f = p("z^3 - x^2*y^2", NAMES4)
    first = Pair((Component((f,), Fraction(3)), Component((p("t", NAMES4),), Fraction(1))))
    second = Pair((
        Component((f,), Fraction(3)),
        Component((p("t^2 - x*y^2", NAMES4),), Fraction(2)),
    ))
    assert delta_invariant(first, frame) == Fraction(4, 3)
    assert delta_invariant(second, frame) == Fraction(4, 3)


def test_delta_invariant_refuses_bad_split():
    # moving the contact variable into the u-part breaks the precondition
    frame = Frame(("x", "y"), (0, 1), ())
    with pytest.raises(PreconditionError, match="directrix") as err:
        delta_invariant(Pair.single([p("y^2 - x^3")], 2), frame)
    assert getattr(err.value, "forced_delta", None) == 1


def test_delta_one_degeneracy_when_y_misses_directrix():
    # with a directrix direction inside u the raw polyhedron has delta 1
    frame = Frame(("x", "y"), (0, 1), ())
    E = Pair.single([p("y^2 - x^3")], 2)
    assert delta(polyhedron_of_pair(E, frame)) == 1


# ---------------------------------------------------------------------------
# coefficient-pair delta identity


def test_coefficient_delta_identity_fixed_cases():
    cases = [
        (Pair.single([p("y^2 - x^3")], 2), FRAME_XY),
        (Pair.single([p("t^2 + x*y*z", NAMES4)], 2), FRAME_T),
        (Pair.single([p("y^2 - x^5")], 2), FRAME_XY),
    ]
    for E, frame in cases:
        C = coefficient_pair(E, frame, frame.y_indices)
        reduced, _ = frame.drop_variables(frame.y_indices)
        inner = Frame(reduced.variables, tuple(range(reduced.nvars)), ())
        assert delta(polyhedron_of_pair(C, inner)) == delta(polyhedron_of_pair(E, frame))


def test_coefficient_delta_identity_random(rng):
    frame = Frame(("x", "y", "z"), (0, 1), (2,))
    inner = Frame(("x", "y"), (0, 1), ())
    tested = 0
    while tested < 25:
        E = random_singular_pair(rng, 3)
        C = coefficient_pair(E, frame, [2])
        lhs = delta(polyhedron_of_pair(C, inner)) if not C.is_empty() else None
        rhs = delta(polyhedron_of_pair(E, frame))
        if C.is_empty():
            from hironaka.poly import INF

            assert rhs == INF
        else:
            assert lhs == rhs
        tested += 1


def test_contact_choice_invariance_of_polyhedron():
    # two successful contact runs from different presentations give the same
    # projected polyhedron
    E1 = Pair.single([p("(y+x)^2 - x^3")], 2)
    mc1 = find_maximal_contact(E1, FRAME_XY)
    E2 = Pair.single([p("y^2 - x^3")], 2)
    mc2 = find_maximal_contact(E2, FRAME_XY)
    assert polyhedron_of_pair(mc1.pair, mc1.frame) == polyhedron_of_pair(mc2.pair, mc2.frame)
