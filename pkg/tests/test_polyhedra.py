import random
from fractions import Fraction

import pytest

from hironaka.errors import PreconditionError
from hironaka.frames import Frame
from hironaka.pairs import Component, Pair
from hironaka.poly import INF, Polynomial, parse_polynomial
from hironaka.polyhedra import (
    AddPoints,
    OrthantPolyhedron,
    Scale,
    Translate,
    coordinate_min,
    delta,
    minimize_vertices,
    newton_polyhedron,
    nu_subset,
    polyhedron_of_pair,
    transform_polyhedron,
)

from conftest import random_singular_pair, staircase_oracle

NAMES4 = ["x", "y", "z", "t"]
FRAME22 = Frame(("x", "y", "z", "t"), (0, 1), (2, 3))


def equivalent_pairs(d: int):
    """The two equivalent weighted ideals whose polyhedra differ."""
    f = parse_polynomial(f"z^{d} - x^{d-1}*y^{d-1}", NAMES4)
    first = Pair((
        Component((f,), Fraction(d)),
        Component((parse_polynomial("t", NAMES4),), Fraction(1)),
    ))
    g = parse_polynomial(f"t^{d-1} - x^{d-2}*y^{d-1}", NAMES4)
    second = Pair((
        Component((f,), Fraction(d)),
        Component((g,), Fraction(d - 1)),
    ))
    return first, second


# ---------------------------------------------------------------------------
# polyhedron_of_pair


def test_vertex_family_first_pair():
    for d in (2, 3, 4, 5):
        first, _ = equivalent_pairs(d)
        P = polyhedron_of_pair(first, FRAME22)
        assert P.vertices == ((Fraction(d - 1, d), Fraction(d - 1, d)),)


def test_vertex_family_second_pair():
    for d in (3, 4, 5):
        _, second = equivalent_pairs(d)
        P = polyhedron_of_pair(second, FRAME22)
        assert set(P.vertices) == {
            (Fraction(d - 1, d), Fraction(d - 1, d)),
            (Fraction(d - 2, d - 1), Fraction(1)),
        }


def test_polyhedron_single_contributing_term():
    E = Pair.single([parse_polynomial("t^2 + x*y*z", NAMES4)], 2)
    frame = Frame(("x", "y", "z", "t"), (0, 1, 2), (3,))
    P = polyhedron_of_pair(E, frame)
    assert P.vertices == ((Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)),)


def test_generator_independence(rng):
    # adding a polynomial multiple of another generator never moves the hull
    frame = Frame(("x", "y"), (0,), (1,))
    for _ in range(40):
        E = random_singular_pair(rng, 2)
        comp = E.components[0]
        if len(comp.gens) < 2:
            comp = Component(comp.gens + comp.gens, comp.weight)
        h = Polynomial.variable(2, rng.randrange(2)) * Polynomial.constant(
            2, rng.randint(1, 2)
        )
        changed = Component(
            (comp.gens[0] + h * comp.gens[1],) + comp.gens[1:], comp.weight
        )
        E2 = Pair((changed,) + E.components[1:])
        E1 = Pair((comp,) + E.components[1:])
        assert polyhedron_of_pair(E1, frame) == polyhedron_of_pair(E2, frame)


# ---------------------------------------------------------------------------
# newton_polyhedron and the projection identity


def test_newton_polyhedron_of_curve():
    E = Pair.single([parse_polynomial("y^2 - x^3", ["x", "y"])], 2)
    frame = Frame(("x", "y"), (0,), (1,))
    P = newton_polyhedron(E, frame)
    assert set(P.vertices) == {(0, 2), (3, 0)}


def test_newton_polyhedron_single_variable_component():
    E = Pair((Component((parse_polynomial("t", NAMES4),), Fraction(1)),))
    P = newton_polyhedron(E, FRAME22)
    assert P.vertices == ((0, 0, 0, 1),)


def test_projection_identity(rng):
    # mapping Newton points (A, B) with |B| < b through A/(b-|B|) and
    # re-hulling recovers the projected polyhedron
    for _ in range(30):
        E = random_singular_pair(rng, 3)
        frame = Frame(("x", "y", "z"), (0, 1), (2,))
        e = 2
        points = []
        for comp in E.components:
            for g in comp.gens:
                for exps in g.terms:
                    B = sum(exps[i] for i in frame.y_indices)
                    if B < comp.weight:
                        points.append(
                            tuple(
                                Fraction(exps[i]) / (comp.weight - B)
                                for i in frame.u_indices
                            )
                        )
        expected = OrthantPolyhedron.from_points(e, points)
        assert polyhedron_of_pair(E, frame) == expected


# ---------------------------------------------------------------------------
# minimize_vertices


def test_minimize_domination():
    assert minimize_vertices([(1, 0), (2, 0)]) == [(1, 0)]


def test_minimize_drops_dominated_corner():
    assert minimize_vertices([(0, 1), (1, 0), (1, 1)]) == [(0, 1), (1, 0)]


def test_minimize_on_a_segment_midpoint():
    # (1,1) is the midpoint of the other two, hence redundant in the hull
    assert minimize_vertices([(0, 2), (1, 1), (2, 0)]) == [(0, 2), (2, 0)]


def test_minimize_keeps_true_corners():
    pts = [(0, 2), (Fraction(1, 2), 1), (2, 0)]
    assert minimize_vertices(pts) == sorted(pts)


def test_minimize_matches_staircase_oracle(rng):
    for _ in range(40):
        pts = [
            (Fraction(rng.randint(0, 6), rng.randint(1, 3)),
             Fraction(rng.randint(0, 6), rng.randint(1, 3)))
            for _ in range(rng.randint(1, 9))
        ]
        assert minimize_vertices(pts) == staircase_oracle(pts)


def test_minimize_idempotent_and_order_independent(rng):
    for _ in range(20):
        pts = [
            (Fraction(rng.randint(0, 5)), Fraction(rng.randint(0, 5)), Fraction(rng.randint(0, 5)))
            for _ in range(rng.randint(2, 8))
        ]
        out = minimize_vertices(pts)
        assert minimize_vertices(out) == out
        shuffled = pts[:]
        rng.shuffle(shuffled)
        assert minimize_vertices(shuffled) == out


# ---------------------------------------------------------------------------
# delta / coordinate_min / nu_subset


def test_delta_of_family_vertex():
    first, _ = equivalent_pairs(3)
    assert delta(polyhedron_of_pair(first, FRAME22)) == Fraction(4, 3)


def test_delta_agrees_for_equivalent_pairs():
    for d in (2, 3, 4, 5):
        first, second = equivalent_pairs(d)
        assert delta(polyhedron_of_pair(first, FRAME22)) == delta(
            polyhedron_of_pair(second, FRAME22)
        )


def test_delta_empty_is_infinite():
    assert delta(OrthantPolyhedron(2, ())) == INF


def test_coordinate_min_distinguishes_equivalent_pairs():
    for d in (3, 4, 5):
        first, second = equivalent_pairs(d)
        P1 = polyhedron_of_pair(first, FRAME22)
        P2 = polyhedron_of_pair(second, FRAME22)
        assert coordinate_min(P1, 0) == Fraction(d - 1, d)
        assert coordinate_min(P2, 0) == Fraction(d - 2, d - 1)


def test_coordinate_min_single_vertex():
    P = OrthantPolyhedron.from_points(3, [(Fraction(1, 2),) * 3])
    for i in range(3):
        assert coordinate_min(P, i) == Fraction(1, 2)


def test_coordinate_min_empty_is_error():
    with pytest.raises(PreconditionError, match="d_i undefined"):
        coordinate_min(OrthantPolyhedron(2, ()), 0)


def test_nu_subset_values():
    first, _ = equivalent_pairs(3)
    P = polyhedron_of_pair(first, FRAME22)
    assert nu_subset(P, [0]) == Fraction(2, 3)
    assert nu_subset(P, []) == delta(P)
    P3 = OrthantPolyhedron.from_points(3, [(Fraction(1, 2),) * 3])
    assert nu_subset(P3, [0, 1, 2]) == 0


# ---------------------------------------------------------------------------
# transformations


def test_translate():
    P = OrthantPolyhedron.from_points(2, [(Fraction(3, 2), 1)])
    out = transform_polyhedron(P, Translate((Fraction(1, 2), 0)))
    assert out.vertices == ((1, 1),)


def test_translate_requires_domination():
    P = OrthantPolyhedron.from_points(2, [(1, 0)])
    with pytest.raises(PreconditionError, match="not dominated"):
        transform_polyhedron(P, Translate((0, 1)))


def test_scale():
    P = OrthantPolyhedron.from_points(2, [(1, 1)])
    out = transform_polyhedron(P, Scale(Fraction(2)))
    assert out.vertices == ((2, 2),)


def test_add_unit_points_counts():
    # adjoining unit vectors for a two-element index set adds two vertices,
    # and here they absorb the old one
    P = OrthantPolyhedron.from_points(3, [(2, 2, 2)])
    units = [tuple(1 if j == k else 0 for j in range(3)) for k in (0, 2)]
    out = transform_polyhedron(P, AddPoints(tuple(units)))
    assert set(out.vertices) == {(1, 0, 0), (0, 0, 1)}


def test_membership():
    P = OrthantPolyhedron.from_points(2, [(0, 2), (2, 0)])
    assert P.contains((1, 1))
    assert P.contains((3, 0))
    assert not P.contains((Fraction(1, 2), Fraction(1, 2)))
