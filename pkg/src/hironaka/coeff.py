"""Coefficient pairs, maximal-contact selection (characteristic zero), and
vertex preparation toward the minimal polyhedron.

Maximal contact follows the derivative recipe: pick a generator whose order
equals its weight, find a small-integer direction where the top derivative
is nonzero, apply the corresponding linear change, and take the (b-1)-fold
derivative as the new hypersurface.  The resulting element is then turned
into an actual coordinate by triangular substitutions; inputs that would
need an infinite (completion-level) change are rejected with a clear error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct

from .cone import DirectrixBasis, directrix, initial_ideal
from .errors import InternalError, PreconditionError
from .frames import Frame
from .linalg import solve
from .pairs import Component, Pair, is_singular_at_origin
from .poly import (
    INF,
    Polynomial,
    hasse_derivative,
    ord_at_origin,
    split_by_variables,
    substitute,
)
from .polyhedra import OrthantPolyhedron, delta, polyhedron_of_pair


def coefficient_pair(E: Pair, frame: Frame, z_indices) -> Pair:
    """Expand the generators in powers of the z-variables and collect, per
    component and per level l < b, the coefficient polynomials with weight
    b - l.  The result lives in the remaining variables.

    Exceptional-marked z-variables may carry fractional exponents; the
    grouping is then by the exact rational level.
    """
    zs = sorted(set(z_indices))
    marked = frame.marked_indices()
    for comp in E.components:
        for g in comp.gens:
            for i in zs:
                if i not in marked and g.has_fractional_exponent(i):
                    raise PreconditionError(
                        "coefficient expansion needs integer exponents on the z-variables"
                    )
    out: list[Component] = []
    for comp in E.components:
        levels: dict[Fraction, list[Polynomial]] = {}
        for g in comp.gens:
            for B, coeff in sorted(split_by_variables(g, zs).items()):
                l = Fraction(sum(B))
                if l < comp.weight and not coeff.is_zero():
                    levels.setdefault(l, []).append(coeff)
        for l in sorted(levels):
            out.append(Component(tuple(levels[l]), comp.weight - l))
    return Pair(tuple(out))


# ---------------------------------------------------------------------------
# Maximal contact


@dataclass(frozen=True)
class MaximalContact:
    pair: Pair                 # the pair rewritten in the adapted coordinates
    frame: Frame               # same variables, contact index moved to the y-part
    contact_index: int         # the variable that now cuts out the hypersurface
    witness: Polynomial        # degree-1 element in the pre-substitution coordinates
    direction: tuple


def _direction_candidates(n: int, height_cap: int):
    """Deterministic sweep: by height, then sparsity, then lowest variable."""
    for h in range(1, height_cap + 1):
        batch = []
        for vec in iproduct(range(-h, h + 1), repeat=n):
            if max((abs(x) for x in vec), default=0) != h:
                continue
            first = next((i for i, x in enumerate(vec) if x != 0), None)
            if first is None or vec[first] < 0:
                continue
            batch.append((sum(1 for x in vec if x), first, vec))
        for _, _, vec in sorted(batch):
            yield vec


def _evaluate(f: Polynomial, point) -> Fraction:
    total = Fraction(0)
    for exps, c in f.terms.items():
        v = Fraction(c)
        for e, p in zip(exps, point):
            if e:
                if p == 0:
                    v = Fraction(0)
                    break
                v *= Fraction(p) ** e
        total += v
    return total


def find_maximal_contact(
    E: Pair,
    frame: Frame,
    preferred_variables=(),
    height_cap: int = 4,
    tail_iters: int = 8,
) -> MaximalContact:
    """Select a maximal-contact hypersurface and normalize it to a coordinate.

    ``preferred_variables`` short-circuits the search: if one of them appears
    as a weight-1 component generator it is taken as the contact directly.
    """
    if not is_singular_at_origin(E):
        raise PreconditionError("point not in Sing")
    n = E.nvars

    for idx in preferred_variables:
        var = Polynomial.variable(n, idx)
        for comp in E.components:
            if comp.weight == 1 and any(
                len(g.terms) == 1 and g.terms.get(tuple(1 if j == idx else 0 for j in range(n)))
                for g in comp.gens
            ):
                return MaximalContact(E, frame.move_to_y(idx), idx, var, tuple(
                    1 if j == idx else 0 for j in range(n)))

    # choose the witness generator: first component with integral weight whose
    # ideal order equals the weight, first generator attaining it
    chosen = None
    for comp in E.components:
        if comp.weight.denominator != 1:
            continue
        for g in comp.gens:
            if ord_at_origin(g) == comp.weight and not g.has_fractional_exponent():
                chosen = (g, int(comp.weight))
                break
        if chosen:
            break
    if chosen is None:
        raise PreconditionError("no maximal contact witness")
    f, b = chosen
    top = Polynomial(n, {e: c for e, c in f.terms.items() if sum(e) == b})
    marked = frame.marked_indices()

    saw_direction = False
    failed_screens = 0
    for vec in _direction_candidates(n, height_cap):
        touched = {i for i, x in enumerate(vec) if x != 0}
        if touched & marked:
            # only a pure divisor direction keeps the crossings coordinate
            if not (len(touched) == 1 and vec[next(iter(touched))] == 1):
                continue
        if _evaluate(top, vec) == 0:
            continue
        saw_direction = True
        pivot = next(i for i, x in enumerate(vec) if x != 0)
        change = None
        if any(x != 0 and i != pivot for i, x in enumerate(vec)) or vec[pivot] != 1:
            change = {
                i: (Polynomial.variable(n, i) + Polynomial.variable(n, pivot).scale(vec[i])
                    if i != pivot else Polynomial.variable(n, pivot).scale(vec[pivot]))
                for i in range(n) if vec[i] != 0 or i == pivot
            }
        fvec = substitute(f, change) if change else f

        M = tuple(b - 1 if j == pivot else 0 for j in range(n))
        witness = hasse_derivative(fvec, M)
        if ord_at_origin(witness) != 1:
            raise InternalError("contact derivative does not have order one")
        lead = witness.terms.get(tuple(1 if j == pivot else 0 for j in range(n)))
        if not lead:
            raise InternalError("contact derivative lost the pivot direction")
        witness = witness.scale(Fraction(1) / lead)

        # triangular reduction on the witness alone: rewrite until the
        # contact is the pivot variable itself.  Directions whose reduction
        # does not terminate (a completion-level graph) are skipped.
        shifts: list[dict] = []
        current = witness
        ok = False
        for _ in range(tail_iters + 1):
            tail = Polynomial(n, {e: c for e, c in current.terms.items() if e[pivot] == 0})
            if tail.is_zero():
                ok = True
                break
            if len(shifts) >= tail_iters or len(current.terms) > 150:
                break
            shift = {pivot: Polynomial.variable(n, pivot) - tail}
            shifts.append(shift)
            current = substitute(current, shift)
        if not ok:
            failed_screens += 1
            if failed_screens >= 12:
                raise PreconditionError(
                    "maximal contact requires a completion-level coordinate change"
                )
            continue

        pair = _substitute_pair(E, change) if change else E
        for shift in shifts:
            pair = _substitute_pair(pair, shift)
        return MaximalContact(pair, frame.move_to_y(pivot), pivot, witness, tuple(vec))

    if saw_direction:
        raise PreconditionError(
            "maximal contact requires a completion-level coordinate change"
        )
    raise PreconditionError("no maximal contact witness")


def _substitute_pair(E: Pair, assignment) -> Pair:
    return Pair(tuple(
        Component(tuple(substitute(g, assignment) for g in comp.gens), comp.weight)
        for comp in E.components
    ))


# ---------------------------------------------------------------------------
# Vertex preparation


@dataclass(frozen=True)
class PrepareResult:
    pair: Pair
    frame: Frame
    polyhedron: OrthantPolyhedron
    prepared: bool
    translations: tuple


def _directrix_of_pair(E: Pair) -> DirectrixBasis | None:
    I = initial_ideal(E)
    if I.is_zero():
        return None
    return directrix(I)


def _check_spanning(E: Pair, frame: Frame) -> None:
    basis = _directrix_of_pair(E)
    if basis is not None and not basis.spans_within(frame.y_indices):
        err = PreconditionError("y does not span directrix")
        err.forced_delta = Fraction(1)
        raise err


def _solvability_system(E: Pair, frame: Frame, vertex):
    """Linear system on the translation coefficients removing the vertex.

    Returns (rows, rhs, contributing) or None when the vertex face carries a
    component with non-integral weight (never solvable).
    """
    u_idx = list(frame.u_indices)
    y_idx = list(frame.y_indices)
    r = len(y_idx)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    contributing = False
    for comp in E.components:
        b = comp.weight
        for g in comp.gens:
            face: dict[tuple, Fraction] = {}
            for exps, c in g.terms.items():
                B = tuple(exps[i] for i in y_idx)
                lb = sum(B)
                if lb > b:
                    continue
                A = tuple(Fraction(exps[i]) for i in u_idx)
                if lb == b:
                    if any(a != 0 for a in A):
                        continue
                    tdeg = 0
                else:
                    scaled = tuple((b - lb) * Fraction(v) for v in vertex)
                    if A != scaled:
                        continue
                    tdeg = b - lb
                face[(tdeg,) + B] = c
            if not face:
                continue
            if b.denominator != 1:
                return None  # fractional ladder on the face: unsolvable
            contributing = True
            # condition: d/dT Q + sum_j lambda_j d/dy_j Q = 0
            eq: dict[tuple, list[Fraction]] = {}
            const: dict[tuple, Fraction] = {}
            for key, c in face.items():
                tdeg, B = key[0], key[1:]
                if tdeg > 0:
                    mono = (tdeg - 1,) + B
                    const[mono] = const.get(mono, Fraction(0)) + c * tdeg
                for j in range(r):
                    if B[j] > 0:
                        mono = (key[0],) + B[:j] + (B[j] - 1,) + B[j + 1:]
                        eq.setdefault(mono, [Fraction(0)] * r)[j] += c * B[j]
            for mono in sorted(set(eq) | set(const)):
                rows.append(eq.get(mono, [Fraction(0)] * r))
                rhs.append(-const.get(mono, Fraction(0)))
    if not contributing:
        return None
    return rows, rhs


def _solve_vertex(pair: Pair, frame: Frame, P: OrthantPolyhedron):
    """First solvable vertex in lex order, as (vertex, translated pair, new
    polyhedron, coefficients); None when every vertex is prepared."""
    for vertex in P.vertices:
        if any(not isinstance(c, int) for c in vertex):
            continue
        system = _solvability_system(pair, frame, vertex)
        if system is None:
            continue
        lam = solve(*system)
        if lam is None or all(x == 0 for x in lam):
            continue
        n = pair.nvars
        mono_exps = [0] * n
        for pos, i in enumerate(frame.u_indices):
            mono_exps[i] = vertex[pos]
        assignment = {
            yi: Polynomial.variable(n, yi)
            + Polynomial.monomial(n, tuple(mono_exps), lam[j])
            for j, yi in enumerate(frame.y_indices)
            if lam[j] != 0
        }
        candidate = _substitute_pair(pair, assignment)
        P2 = polyhedron_of_pair(candidate, frame)
        if vertex in P2.vertices or not P2.subset_of(P):
            continue
        return vertex, candidate, P2, tuple(lam)
    return None


def prepare_vertices(E: Pair, frame: Frame, max_iters: int = 32) -> PrepareResult:
    """Iteratively remove solvable vertices by translations y -> y + c*u^v.

    Candidate coefficients come from an exact linear system on the vertex
    face; a candidate is committed only when the recomputed polyhedron drops
    the vertex and shrinks, so the polyhedron never grows.
    """
    _check_spanning(E, frame)
    pair = E
    translations: list[tuple] = []
    P = polyhedron_of_pair(pair, frame)
    for _ in range(max_iters):
        hit = _solve_vertex(pair, frame, P)
        if hit is None:
            return PrepareResult(pair, frame, P, True, tuple(translations))
        vertex, pair, P, lam = hit
        translations.append((vertex, lam))
    remaining = _solve_vertex(pair, frame, P) is not None
    return PrepareResult(pair, frame, P, not remaining, tuple(translations))


def delta_invariant(E: Pair, frame: Frame, max_iters: int = 32):
    """The minimal coordinate sum of the prepared polyhedron on the u-part.

    Independent of the y-choice whenever the y-part spans the directrix; the
    value before preparation is returned and cross-checked after.
    """
    _check_spanning(E, frame)
    before = delta(polyhedron_of_pair(E, frame))
    result = prepare_vertices(E, frame, max_iters)
    after = delta(result.polyhedron)
    if before != after:
        raise InternalError("delta changed under vertex preparation")
    return before
