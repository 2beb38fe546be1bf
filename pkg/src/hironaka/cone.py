"""Initial ideals, graded pieces, the directrix of a homogeneous ideal
(characteristic zero), and truncated Hilbert-Samuel functions.

The directrix is computed through the translation-invariance direction
space W = {v : directional derivative of every generator lies in the
ideal}; its annihilator in the degree-1 dual is the returned basis.  A
rewriting check (every generator is a combination of ideal elements that
involve only the basis forms) runs on every call.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .errors import InternalError, PreconditionError
from .linalg import nullspace, reduce_against, rref, sparse_rank
from .pairs import Pair
from .poly import Polynomial, hasse_derivative, initial_form, ord_at_origin, substitute


@dataclass(frozen=True)
class HomIdeal:
    nvars: int
    generators: tuple[Polynomial, ...]

    def __post_init__(self):
        for g in self.generators:
            if g.is_zero():
                raise PreconditionError("homogeneous generators must be nonzero")
            degs = {sum(e) for e in g.terms}
            if len(degs) != 1:
                raise PreconditionError("generators must be homogeneous")
            if g.has_fractional_exponent():
                raise PreconditionError("homogeneous ideals use integer exponents")

    def is_zero(self) -> bool:
        return not self.generators

    def degrees(self) -> tuple[int, ...]:
        return tuple(sum(next(iter(g.terms))) for g in self.generators)


def initial_ideal(E: Pair) -> HomIdeal:
    """Degree-b initial forms of the order-b generators, per component.

    Components whose weight is not a positive integer contribute nothing.
    """
    gens: list[Polynomial] = []
    for comp in E.components:
        b = comp.weight
        if b.denominator != 1:
            continue
        for g in comp.gens:
            if ord_at_origin(g) == b:
                form = initial_form(g, b)
                if not form.is_zero():
                    gens.append(form)
    return HomIdeal(E.nvars, tuple(gens))


# ---------------------------------------------------------------------------
# Monomial bookkeeping


def monomials_of_degree(nvars: int, d: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree d, in a fixed deterministic order."""
    if d < 0:
        return []
    if nvars == 0:
        return [()] if d == 0 else []
    out: list[tuple[int, ...]] = []
    for combo in combinations_with_replacement(range(nvars), d):
        exps = [0] * nvars
        for i in combo:
            exps[i] += 1
        out.append(tuple(exps))
    return sorted(set(out))


def monomials_below_degree(nvars: int, k: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    for d in range(k):
        out.extend(monomials_of_degree(nvars, d))
    return out


def _poly_to_vector(f: Polynomial, index: dict[tuple, int]) -> list[Fraction]:
    vec = [Fraction(0)] * len(index)
    for exps, c in f.terms.items():
        vec[index[exps]] = c
    return vec


def _vector_to_poly(vec, basis: list[tuple], nvars: int) -> Polynomial:
    return Polynomial(nvars, {basis[i]: c for i, c in enumerate(vec) if c != 0})


def graded_piece(I: HomIdeal, d: int) -> list[Polynomial]:
    """Row-reduced basis of the degree-d slice of the ideal."""
    if d < 0:
        return []
    basis = monomials_of_degree(I.nvars, d)
    index = {m: i for i, m in enumerate(basis)}
    rows: list[list[Fraction]] = []
    for g in I.generators:
        dg = sum(next(iter(g.terms)))
        if dg > d:
            continue
        for m in monomials_of_degree(I.nvars, d - dg):
            rows.append(_poly_to_vector(g * Polynomial.monomial(I.nvars, m), index))
    red, _pivots = rref(rows)
    return [_vector_to_poly(row, basis, I.nvars) for row in red]


def _graded_basis_rows(I: HomIdeal, d: int):
    basis = monomials_of_degree(I.nvars, d)
    index = {m: i for i, m in enumerate(basis)}
    polys = graded_piece(I, d)
    rows = [_poly_to_vector(p, index) for p in polys]
    red, pivots = rref(rows)
    return red, pivots, index


def homogeneous_member(I: HomIdeal, f: Polynomial) -> bool:
    """Exact membership of a homogeneous polynomial in the ideal."""
    if f.is_zero():
        return True
    degs = {sum(e) for e in f.terms}
    if len(degs) != 1:
        raise PreconditionError("membership test expects a homogeneous polynomial")
    d = degs.pop()
    red, pivots, index = _graded_basis_rows(I, d)
    residue = reduce_against(red, pivots, _poly_to_vector(f, index))
    return all(x == 0 for x in residue)


# ---------------------------------------------------------------------------
# Directrix


@dataclass(frozen=True)
class DirectrixBasis:
    forms: tuple[Polynomial, ...]       # independent degree-1 polynomials
    directions: tuple[tuple, ...]       # basis of the invariance space W

    @property
    def dim(self) -> int:
        return len(self.forms)

    def spans_within(self, coordinate_indices) -> bool:
        """True iff every basis form involves only the given coordinates."""
        allowed = set(coordinate_indices)
        return all(form.variables_used() <= allowed for form in self.forms)


def directrix(I: HomIdeal) -> DirectrixBasis:
    if I.is_zero():
        raise PreconditionError("directrix undefined")
    n = I.nvars
    if 0 in I.degrees():
        # a unit generator: the whole space is invariant, no forms needed
        dirs = tuple(tuple(Fraction(1) if j == i else Fraction(0) for j in range(n)) for i in range(n))
        return DirectrixBasis((), dirs)
    # rows of the linear system on a direction v: for each generator g and
    # each monomial coordinate, sum_i v_i * (residue of d_i g mod I) = 0
    sys_rows: list[list[Fraction]] = []
    for g in I.generators:
        dg = sum(next(iter(g.terms)))
        red, pivots, index = _graded_basis_rows(I, dg - 1)
        residues = []
        for i in range(n):
            M = tuple(1 if j == i else 0 for j in range(n))
            der = hasse_derivative(g, M)
            residues.append(reduce_against(red, pivots, _poly_to_vector(der, index)))
        for coord in range(len(index)):
            row = [residues[i][coord] for i in range(n)]
            if any(x != 0 for x in row):
                sys_rows.append(row)
    directions = nullspace(sys_rows, n) if sys_rows else nullspace([], n)
    if not sys_rows:
        directions = [[Fraction(1) if j == i else Fraction(0) for j in range(n)] for i in range(n)]
    ann = nullspace(directions, n) if directions else [
        [Fraction(1) if j == i else Fraction(0) for j in range(n)] for i in range(n)
    ]
    forms = tuple(
        Polynomial(n, {tuple(1 if j == i else 0 for j in range(n)): c for i, c in enumerate(vec) if c != 0})
        for vec in ann
    )
    basis = DirectrixBasis(forms, tuple(tuple(v) for v in directions))
    _check_rewriting(I, basis)
    return basis


def _adapted_change(forms: tuple[Polynomial, ...], n: int) -> list[list[Fraction]]:
    """Invertible matrix whose first rows are the given independent forms."""
    rows = [
        [Fraction(f.terms.get(tuple(1 if j == i else 0 for j in range(n)), 0)) for i in range(n)]
        for f in forms
    ]
    red, pivots = rref(rows)
    full = [list(r) for r in rows]
    for i in range(n):
        if i not in pivots:
            full.append([Fraction(1) if j == i else Fraction(0) for j in range(n)])
    return full


def _invert(matrix: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(matrix)
    aug = [list(row) + [Fraction(1) if j == i else Fraction(0) for j in range(n)]
           for i, row in enumerate(matrix)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise InternalError("adapted coordinate change is singular")
    return [row[n:] for row in red]


def _check_rewriting(I: HomIdeal, basis: DirectrixBasis) -> None:
    """Verify the ideal is generated by polynomials in the basis forms.

    In coordinates adapted to the invariance space, every slice of every
    generator along the complementary directions must itself belong to the
    ideal; that exhibits a generating set inside the subring the forms span.
    """
    n = I.nvars
    r = basis.dim
    if r == n or I.is_zero():
        return
    Q = _adapted_change(basis.forms, n)
    Qinv = _invert(Q)
    # old variable x_i = sum_j Qinv[i][j] * new_j
    change = {
        i: Polynomial(n, {
            tuple(1 if k == j else 0 for k in range(n)): Qinv[i][j]
            for j in range(n) if Qinv[i][j] != 0
        })
        for i in range(n)
    }
    back = {
        j: Polynomial(n, {
            tuple(1 if k == i else 0 for k in range(n)): Q[j][i]
            for i in range(n) if Q[j][i] != 0
        })
        for j in range(n)
    }
    for g in I.generators:
        moved = substitute(g, change)
        slices: dict[tuple, dict] = {}
        for exps, c in moved.terms.items():
            tail = exps[r:]
            key = exps[:r] + (0,) * (n - r)
            slices.setdefault(tail, {})[key] = c
        for tail, terms in slices.items():
            zpart = Polynomial(n, terms)
            original = substitute(zpart, back)
            if not homogeneous_member(I, original):
                raise InternalError("directrix rewriting check failed")


# ---------------------------------------------------------------------------
# Hilbert-Samuel


def hilbert_samuel_truncated(generators, k_max: int) -> list[int]:
    """dim of the ambient power-series ring modulo (ideal + M^k), k = 1..k_max.

    Computed as (#monomials of degree < k) minus the rank of the truncated
    multiples of the generators.
    """
    gens = [g for g in generators if not g.is_zero()]
    if k_max < 1:
        raise PreconditionError("k_max must be at least 1")
    for g in gens:
        if g.constant_term() != 0:
            raise PreconditionError("point not on X")
        if g.has_fractional_exponent():
            raise PreconditionError("Hilbert-Samuel needs integer exponents")
    if not gens:
        nvars = 0
    else:
        nvars = gens[0].nvars
    out: list[int] = []
    for k in range(1, k_max + 1):
        basis = monomials_below_degree(nvars, k)
        index = {m: i for i, m in enumerate(basis)}
        rows: list[dict[int, Fraction]] = []
        for g in gens:
            for m in monomials_below_degree(nvars, max(k - 1, 0)):
                prod = g * Polynomial.monomial(nvars, m)
                row = {
                    index[exps]: c
                    for exps, c in prod.terms.items()
                    if sum(exps) < k
                }
                if row:
                    rows.append(row)
        out.append(len(basis) - sparse_rank(rows))
    return out
