import random
from fractions import Fraction

import pytest

from hironaka.errors import PreconditionError
from hironaka.frames import Frame
from hironaka.pairs import (
    Component,
    Pair,
    apply_log_diff,
    is_singular_at_origin,
    merge_to_single,
    pair_order,
    power_rewrite,
)
from hironaka.poly import Polynomial, parse_polynomial, substitute
from hironaka.polyhedra import polyhedron_of_pair

from conftest import random_singular_pair

NAMES2 = ["x", "y"]
NAMES4 = ["x", "y", "z", "t"]


def p(text, names=NAMES2):
    return parse_polynomial(text, names)


def single(text, b, names=NAMES2):
    return Pair.single([p(text, names)], b)


# ---------------------------------------------------------------------------
# pair_order / Sing


def test_pair_order_unit_weight_match():
    assert pair_order(single("x^2", 2)) == 1


def test_pair_order_clamps_to_zero_below_weight():
    assert pair_order(single("x^2", 3)) == 0


def test_pair_order_intersection_minimum():
    E = Pair((
        Component((p("t^2 + x*y*z", NAMES4),), Fraction(2)),
        Component((p("t", NAMES4),), Fraction(1)),
    ))
    assert pair_order(E) == 1


def test_singular_at_origin():
    assert is_singular_at_origin(single("y^2 - x^3", 2))
    assert not is_singular_at_origin(single("y - x^3", 2))


def test_singular_intersection_example():
    E = Pair((
        Component((p("z^3 - x^2*y^2", NAMES4),), Fraction(3)),
        Component((p("t", NAMES4),), Fraction(1)),
    ))
    assert is_singular_at_origin(E)


# ---------------------------------------------------------------------------
# merge_to_single


def test_merge_two_linear_components():
    E = Pair((
        Component((p("x"),), Fraction(1)),
        Component((p("y"),), Fraction(1)),
    ))
    merged = merge_to_single(E, 1)
    assert len(merged.components) == 1
    assert merged.components[0].weight == 1
    assert set(
        tuple(sorted(g.terms)) for g in merged.components[0].gens
    ) == {(((1, 0),)), (((0, 1),))}


def test_merge_powers_each_side():
    E = Pair((
        Component((p("x^2"),), Fraction(2)),
        Component((p("y"),), Fraction(1)),
    ))
    merged = merge_to_single(E, 2)
    gens = sorted(sorted(g.terms) for g in merged.components[0].gens)
    assert gens == [[(0, 2)], [(2, 0)]]
    assert merged.components[0].weight == 2


def test_merge_rejects_non_divisor():
    E = Pair((Component((p("x^2"),), Fraction(2)),))
    with pytest.raises(PreconditionError, match="divide"):
        merge_to_single(E, 3)


def test_power_rewrite_square():
    E = single("x", 1)
    out = power_rewrite(E, 2)
    assert out.components[0].weight == 2
    assert [sorted(g.terms) for g in out.components[0].gens] == [[(2, 0)]]


def test_power_rewrite_two_generators():
    E = Pair.single([p("x"), p("y")], 1)
    out = power_rewrite(E, 2)
    gens = sorted(sorted(g.terms) for g in out.components[0].gens)
    assert gens == [[(0, 2)], [(1, 1)], [(2, 0)]]


def test_power_rewrite_needs_single_component():
    E = Pair((
        Component((p("x"),), Fraction(1)),
        Component((p("y"),), Fraction(1)),
    ))
    with pytest.raises(PreconditionError):
        power_rewrite(E, 2)


def test_order_preserved_by_rewrites(rng):
    for _ in range(30):
        E = random_singular_pair(rng, 2)
        # weights are integers 1..3 here, so 6 is a common multiple
        merged = merge_to_single(E, 6)
        assert pair_order(merged) == min(
            pair_order(Pair((c,))) for c in E.components
        )
        single_comp = Pair((E.components[0],))
        assert pair_order(power_rewrite(single_comp, 2)) == pair_order(single_comp)


def test_order_preserved_at_sampled_points(rng):
    # shift the origin to a nearby rational point and compare there as well
    for _ in range(10):
        E = random_singular_pair(rng, 2)
        shift = {
            i: Polynomial.variable(2, i) + Polynomial.constant(2, Fraction(rng.randint(-2, 2), 3))
            for i in range(2)
        }
        moved = Pair(tuple(
            Component(tuple(substitute(g, shift) for g in c.gens), c.weight)
            for c in E.components
        ))
        assert pair_order(merge_to_single(moved, 6)) == min(
            pair_order(Pair((c,))) for c in moved.components
        )


# ---------------------------------------------------------------------------
# apply_log_diff


def test_apply_log_diff_example():
    E = single("y^2 - x^3", 2)
    out = apply_log_diff(E, (1, 0))
    assert len(out.components) == 2
    extra = out.components[1]
    assert extra.weight == 1
    assert extra.gens[0] == p("-3*x^3")


def test_apply_log_diff_zero_order_is_identity():
    E = single("y^2 - x^3", 2)
    out = apply_log_diff(E, (0, 0))
    # M = 0 keeps every component and adds copies with the same data
    assert polyhedron_of_pair(out, Frame(("x", "y"), (0,), (1,))) == polyhedron_of_pair(
        E, Frame(("x", "y"), (0,), (1,))
    )


def test_apply_log_diff_polyhedron_stable(rng):
    frame = Frame(("x", "y"), (0, 1), ())
    for _ in range(30):
        E = random_singular_pair(rng, 2)
        M = (rng.randint(0, 1), rng.randint(0, 1))
        out = apply_log_diff(E, M)
        assert polyhedron_of_pair(out, frame) == polyhedron_of_pair(E, frame)


def test_apply_log_diff_preserves_singularity(rng):
    for _ in range(30):
        E = random_singular_pair(rng, 3)
        M = [0, 0, 0]
        M[rng.randrange(3)] = 1
        out = apply_log_diff(E, tuple(M))
        assert is_singular_at_origin(out) == is_singular_at_origin(E)


def test_apply_log_diff_rejects_fractional_support():
    f = Polynomial(2, {(Fraction(1, 2), 2): Fraction(1)})
    E = Pair.single([f], Fraction(3, 2))
    with pytest.raises(PreconditionError):
        apply_log_diff(E, (1, 0))


# ---------------------------------------------------------------------------
# validation


def test_component_rejects_zero_generator():
    with pytest.raises(PreconditionError):
        Component((Polynomial.zero(2),), Fraction(1))


def test_component_rejects_nonpositive_weight():
    with pytest.raises(PreconditionError):
        Component((p("x"),), Fraction(0))
