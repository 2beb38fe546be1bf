"""Rational orthant polyhedra: finite vertex sets generating
conv(V) + R^e_{>=0}, kept in minimal form, plus the projections that tie
them to pairs and the elementary transformations used along blow-ups.

Everything is V-representation only; membership queries reduce to exact LP
feasibility on the vertex set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .frames import Frame
from .linalg import lp_feasible
from .pairs import Pair
from .poly import INF

Point = tuple  # tuple of Fraction | int, length = dimension


def _pt(coords) -> Point:
    out = []
    for c in coords:
        q = Fraction(c)
        out.append(int(q) if q.denominator == 1 else q)
    return tuple(out)


def dominates(p: Point, q: Point) -> bool:
    return all(a >= b for a, b in zip(p, q))


def point_in_hull_orthant(p: Point, points: list[Point]) -> bool:
    """Exact test for p in conv(points) + R^e_{>=0}."""
    if not points:
        return False
    for q in points:
        if dominates(p, q):
            return True
    e = len(p)
    k = len(points)
    # lambda_i >= 0, slack_j >= 0:  sum_i lambda_i q_i + slack = p, sum lambda = 1
    rows = []
    rhs = []
    for j in range(e):
        row = [Fraction(q[j]) for q in points] + [
            Fraction(1) if s == j else Fraction(0) for s in range(e)
        ]
        rows.append(row)
        rhs.append(Fraction(p[j]))
    rows.append([Fraction(1)] * k + [Fraction(0)] * e)
    rhs.append(Fraction(1))
    return lp_feasible(rows, rhs)


def minimize_vertices(points) -> list[Point]:
    """Minimal subset generating the same conv + orthant; canonically sorted."""
    pts = sorted({_pt(p) for p in points})
    keep = list(pts)
    i = 0
    while i < len(keep):
        p = keep[i]
        others = keep[:i] + keep[i + 1:]
        if point_in_hull_orthant(p, others):
            keep.pop(i)
        else:
            i += 1
    return keep


@dataclass(frozen=True)
class OrthantPolyhedron:
    dimension: int
    vertices: tuple[Point, ...]

    @staticmethod
    def from_points(dimension: int, points) -> "OrthantPolyhedron":
        verts = minimize_vertices(points)
        for v in verts:
            if len(v) != dimension:
                raise PreconditionError("point dimension mismatch")
            if any(c < 0 for c in v):
                raise PreconditionError("orthant polyhedron points must be nonnegative")
        return OrthantPolyhedron(dimension, tuple(verts))

    def is_empty(self) -> bool:
        return not self.vertices

    def contains(self, p) -> bool:
        return point_in_hull_orthant(_pt(p), list(self.vertices))

    def subset_of(self, other: "OrthantPolyhedron") -> bool:
        return all(other.contains(v) for v in self.vertices)


# ---------------------------------------------------------------------------
# Polyhedra of pairs


def polyhedron_of_pair(E: Pair, frame: Frame) -> OrthantPolyhedron:
    """Vertices of the projected polyhedron generated by A/(b - |B|) over all
    terms with |B| < b, where A collects u-exponents and B y-exponents."""
    e = len(frame.u_indices)
    pts: list[Point] = []
    for comp in E.components:
        b = comp.weight
        for g in comp.gens:
            for exps in g.terms:
                B = sum(exps[i] for i in frame.y_indices)
                if B < b:
                    denom = b - B
                    pts.append(tuple(Fraction(exps[i]) / denom for i in frame.u_indices))
    return OrthantPolyhedron.from_points(e, pts)


def newton_polyhedron(E: Pair, frame: Frame) -> OrthantPolyhedron:
    """Exponent polyhedron in the (u, y)-ordered coordinates, all terms."""
    dim = len(frame.u_indices) + len(frame.y_indices)
    order = list(frame.u_indices) + list(frame.y_indices)
    pts = [
        tuple(exps[i] for i in order)
        for comp in E.components
        for g in comp.gens
        for exps in g.terms
    ]
    return OrthantPolyhedron.from_points(dim, pts)


# ---------------------------------------------------------------------------
# Numerical data


def delta(P: OrthantPolyhedron):
    """Minimal coordinate sum over the polyhedron; INF when empty."""
    if P.is_empty():
        return INF
    return min(sum(Fraction(c) for c in v) for v in P.vertices)


def coordinate_min(P: OrthantPolyhedron, i: int) -> Fraction:
    if P.is_empty():
        raise PreconditionError("d_i undefined")
    return min(Fraction(v[i]) for v in P.vertices)


def nu_subset(P: OrthantPolyhedron, I) -> Fraction:
    """delta minus the coordinate minima over the index set I."""
    d = delta(P)
    if d == INF:
        raise PreconditionError("d_i undefined")
    return d - sum(coordinate_min(P, i) for i in I)


# ---------------------------------------------------------------------------
# Elementary transformations


@dataclass(frozen=True)
class Translate:
    offset: tuple


@dataclass(frozen=True)
class Scale:
    factor: Fraction


@dataclass(frozen=True)
class AddPoints:
    points: tuple


def transform_polyhedron(P: OrthantPolyhedron, step) -> OrthantPolyhedron:
    if isinstance(step, Translate):
        w = _pt(step.offset)
        if len(w) != P.dimension:
            raise PreconditionError("offset dimension mismatch")
        moved = []
        for v in P.vertices:
            nv = tuple(a - b for a, b in zip(v, w))
            if any(c < 0 for c in nv):
                raise PreconditionError("not dominated")
            moved.append(nv)
        return OrthantPolyhedron.from_points(P.dimension, moved)
    if isinstance(step, Scale):
        c = Fraction(step.factor)
        if c <= 0:
            raise PreconditionError("scale factor must be positive")
        return OrthantPolyhedron.from_points(
            P.dimension, [tuple(c * Fraction(x) for x in v) for v in P.vertices]
        )
    if isinstance(step, AddPoints):
        return OrthantPolyhedron.from_points(
            P.dimension, list(P.vertices) + [_pt(p) for p in step.points]
        )
    raise PreconditionError(f"unknown polyhedron transformation {step!r}")
