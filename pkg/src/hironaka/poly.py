"""Exact sparse multivariate polynomials over the rationals.

A polynomial is a dict mapping exponent tuples to Fraction coefficients.
Exponents are nonnegative rationals; integral entries are stored as int so
that purely polynomial data stays int-keyed.  Fractional exponents are legal
at this layer (callers restrict them to exceptional-marked variables) but
derivative operators reject them.

The zero polynomial has no terms and order INF.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import PreconditionError, ProblemParseError

INF = math.inf

Exponents = tuple  # length-nvars tuple of int | Fraction


def _norm_exp(e) -> int | Fraction:
    q = Fraction(e)
    if q < 0:
        raise ValueError(f"negative exponent {e}")
    return int(q) if q.denominator == 1 else q


class Polynomial:
    """Immutable sparse polynomial in a fixed number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponents, Fraction] | None = None):
        clean: dict[Exponents, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                c = Fraction(coeff)
                if c == 0:
                    continue
                if len(exps) != nvars:
                    raise ValueError(f"exponent tuple {exps} has wrong arity for {nvars} variables")
                key = tuple(_norm_exp(e) for e in exps)
                acc = clean.get(key)
                c = c if acc is None else acc + c
                if c == 0:
                    clean.pop(key, None)
                else:
                    clean[key] = c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "Polynomial":
        return Polynomial(nvars)

    @staticmethod
    def constant(nvars: int, value) -> "Polynomial":
        return Polynomial(nvars, {(0,) * nvars: Fraction(value)})

    @staticmethod
    def variable(nvars: int, index: int) -> "Polynomial":
        exps = [0] * nvars
        exps[index] = 1
        return Polynomial(nvars, {tuple(exps): Fraction(1)})

    @staticmethod
    def monomial(nvars: int, exps: Iterable, coeff=1) -> "Polynomial":
        return Polynomial(nvars, {tuple(exps): Fraction(coeff)})

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def has_fractional_exponent(self, index: int | None = None) -> bool:
        for exps in self.terms:
            if index is None:
                if any(not isinstance(e, int) for e in exps):
                    return True
            elif not isinstance(exps[index], int):
                return True
        return False

    def variables_used(self) -> set[int]:
        used: set[int] = set()
        for exps in self.terms:
            used.update(i for i, e in enumerate(exps) if e != 0)
        return used

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in graded-lex order (total degree, then exponent tuple)."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if self.nvars != other.nvars:
            raise ValueError("arity mismatch")
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, Fraction(0)) + c
        return Polynomial(self.nvars, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        if self.nvars != other.nvars:
            raise ValueError("arity mismatch")
        out: dict[Exponents, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                out[key] = out.get(key, Fraction(0)) + ca * cb
        return Polynomial(self.nvars, out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = Polynomial.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    __hash__ = None  # mutable-looking container semantics

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {format_polynomial(self)!r})"


# ---------------------------------------------------------------------------
# Orders and initial forms


def ord_at_origin(f: Polynomial):
    """Minimal total degree among the terms of f; INF for the zero polynomial."""
    if f.is_zero():
        return INF
    return min(sum(exps) for exps in f.terms)


def weighted_order(f: Polynomial, weights):
    """Minimal weighted degree sum(w_i * e_i); INF for the zero polynomial."""
    ws = [Fraction(w) for w in weights]
    if len(ws) != f.nvars:
        raise ValueError("weights must cover all variables")
    if any(w <= 0 for w in ws):
        raise ValueError("weights must be positive")
    if f.is_zero():
        return INF
    return min(sum(w * e for w, e in zip(ws, exps)) for exps in f.terms)


def initial_form(f: Polynomial, b, weights=None) -> Polynomial:
    """Sum of the terms of (weighted) degree exactly b.

    Without weights a non-integral or negative b yields the zero polynomial.
    """
    if weights is None:
        bq = Fraction(b)
        if bq < 0 or bq.denominator != 1:
            return Polynomial.zero(f.nvars)
        return Polynomial(
            f.nvars, {e: c for e, c in f.terms.items() if sum(e) == bq}
        )
    ws = [Fraction(w) for w in weights]
    bq = Fraction(b)
    return Polynomial(
        f.nvars,
        {e: c for e, c in f.terms.items() if sum(w * x for w, x in zip(ws, e)) == bq},
    )


def ord_along_variable(f: Polynomial, index: int):
    """Multiplicity of the coordinate hyperplane of `index` in f; INF for 0."""
    if f.is_zero():
        return INF
    return min(exps[index] for exps in f.terms)


# ---------------------------------------------------------------------------
# Hasse derivatives


def _binom(n, k: int) -> Fraction:
    # n is a nonnegative integer exponent here; k a nonnegative int
    return Fraction(math.comb(n, k))


def hasse_derivative(f: Polynomial, order: Iterable[int]) -> Polynomial:
    """Binomial-weighted derivative: x^D maps to C(D, M) x^(D-M)."""
    M = tuple(order)
    if len(M) != f.nvars:
        raise ValueError("derivative order must cover all variables")
    if any((not isinstance(m, int)) or m < 0 for m in M):
        raise ValueError("derivative orders must be nonnegative integers")
    for i, m in enumerate(M):
        if m > 0 and f.has_fractional_exponent(i):
            raise PreconditionError("derivative undefined on fractional variable")
    out: dict[Exponents, Fraction] = {}
    for exps, c in f.terms.items():
        if any(e < m for e, m in zip(exps, M)):
            continue
        w = Fraction(1)
        for e, m in zip(exps, M):
            if m:
                w *= _binom(e, m)
        key = tuple(e - m for e, m in zip(exps, M))
        out[key] = out.get(key, Fraction(0)) + w * c
    return Polynomial(f.nvars, out)


def log_diff(f: Polynomial, order: Iterable[int]) -> Polynomial:
    """Logarithmic variant: x^D maps to C(D, M) x^D (same exponents)."""
    M = tuple(order)
    if len(M) != f.nvars:
        raise ValueError("derivative order must cover all variables")
    for i, m in enumerate(M):
        if m > 0 and f.has_fractional_exponent(i):
            raise PreconditionError("derivative undefined on fractional variable")
    out: dict[Exponents, Fraction] = {}
    for exps, c in f.terms.items():
        if any(e < m for e, m in zip(exps, M)):
            continue
        w = Fraction(1)
        for e, m in zip(exps, M):
            if m:
                w *= _binom(e, m)
        out[exps] = w * c
    return Polynomial(f.nvars, out)


# ---------------------------------------------------------------------------
# Substitution and monomial division


def substitute(f: Polynomial, assignment: Mapping[int, Polynomial]) -> Polynomial:
    """Exact composite polynomial; variables absent from the map stay fixed.

    A variable carrying fractional exponents may only be mapped to a
    single-term polynomial with coefficient 1 (a unit monomial), so that the
    fractional power stays exact.
    """
    n = f.nvars
    full = {i: assignment.get(i, Polynomial.variable(n, i)) for i in range(n)}
    for g in full.values():
        if g.nvars != n:
            raise ValueError("substitution must preserve the variable list")
    out = Polynomial.zero(n)
    power_cache: dict[tuple[int, object], Polynomial] = {}
    for exps, c in f.terms.items():
        term = Polynomial.constant(n, c)
        for i, e in enumerate(exps):
            if e == 0:
                continue
            key = (i, e)
            p = power_cache.get(key)
            if p is None:
                g = full[i]
                if isinstance(e, int):
                    p = g ** e
                else:
                    if len(g.terms) != 1:
                        raise PreconditionError(
                            "fractional power of a non-monomial substitution"
                        )
                    (gexps, gc), = g.terms.items()
                    if gc != 1:
                        raise PreconditionError(
                            "fractional power of a non-unit monomial substitution"
                        )
                    p = Polynomial.monomial(n, tuple(ge * e for ge in gexps))
                power_cache[key] = p
            term = term * p
        out = out + term
    return out


def divide_by_variable_power(f: Polynomial, index: int, power) -> Polynomial:
    """Exact division by a single variable power; raises if not exact."""
    p = Fraction(power)
    out: dict[Exponents, Fraction] = {}
    for exps, c in f.terms.items():
        e = exps[index] - p
        if e < 0:
            raise ValueError("inexact monomial division")
        key = exps[:index] + (_norm_exp(e),) + exps[index + 1:]
        out[key] = c
    return Polynomial(f.nvars, out)


def split_by_variables(f: Polynomial, z_indices) -> dict[tuple, Polynomial]:
    """Group terms of f by their exponents on the z-variables.

    Returns a map from the z-exponent tuple B (in z_indices order) to the
    coefficient polynomial in the remaining variables (reindexed in their
    original relative order).
    """
    zs = list(z_indices)
    rest = [i for i in range(f.nvars) if i not in set(zs)]
    out: dict[tuple, dict[Exponents, Fraction]] = {}
    for exps, c in f.terms.items():
        b = tuple(exps[i] for i in zs)
        key = tuple(exps[i] for i in rest)
        bucket = out.setdefault(b, {})
        bucket[key] = bucket.get(key, Fraction(0)) + c
    return {b: Polynomial(len(rest), terms) for b, terms in out.items()}


# ---------------------------------------------------------------------------
# Text I/O

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9']*|\d+|[()^*+-]|/)")


def format_rational(q) -> str:
    if q == INF:
        return "inf"
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_polynomial(f: Polynomial, names: list[str] | None = None) -> str:
    if names is None:
        names = [f"x{i}" for i in range(f.nvars)]
    if f.is_zero():
        return "0"
    parts: list[str] = []
    for exps, coeff in f.sorted_terms():
        factors: list[str] = []
        for i, e in enumerate(exps):
            if e == 0:
                continue
            if e == 1:
                factors.append(names[i])
            elif isinstance(e, int):
                factors.append(f"{names[i]}^{e}")
            else:
                factors.append(f"{names[i]}^({format_rational(e)})")
        mag = abs(coeff)
        if not factors:
            body = format_rational(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([format_rational(mag)] + factors)
        sign = "-" if coeff < 0 else "+"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


class _Parser:
    def __init__(self, text: str, names: list[str], fractional_ok: set[int]):
        self.tokens: list[str] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                if text[pos:].strip():
                    raise ProblemParseError(f"bad character in polynomial: {text[pos:]!r}")
                break
            self.tokens.append(m.group(1))
            pos = m.end()
        self.pos = 0
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}
        self.fractional_ok = fractional_ok

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, tok: str):
        got = self.next()
        if got != tok:
            raise ProblemParseError(f"expected {tok!r}, got {got!r}")

    def parse(self) -> Polynomial:
        poly = self.parse_sum()
        if self.peek() is not None:
            raise ProblemParseError(f"trailing input at {self.peek()!r}")
        return poly

    def parse_sum(self) -> Polynomial:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.next() == "-":
                sign = -sign
        poly = self.parse_product().scale(sign)
        while self.peek() in ("+", "-"):
            sign = 1
            while self.peek() in ("+", "-"):
                if self.next() == "-":
                    sign = -sign
            poly = poly + self.parse_product().scale(sign)
        return poly

    def parse_product(self) -> Polynomial:
        poly = self.parse_factor()
        while True:
            tok = self.peek()
            if tok == "*":
                self.next()
                poly = poly * self.parse_factor()
            elif tok == "/":
                self.next()
                den = self.parse_factor()
                if not den.is_constant() or den.constant_term() == 0:
                    raise ProblemParseError("division only by nonzero constants")
                poly = poly.scale(Fraction(1) / den.constant_term())
            elif tok is not None and (tok[0].isalpha() or tok[0] == "_" or tok == "("):
                # implicit multiplication such as "3x" or "x(y+1)"
                poly = poly * self.parse_factor()
            else:
                return poly

    def parse_factor(self) -> Polynomial:
        tok = self.next()
        if tok is None:
            raise ProblemParseError("unexpected end of polynomial")
        n = len(self.names)
        if tok == "(":
            poly = self.parse_sum()
            self.expect(")")
        elif tok.isdigit():
            poly = Polynomial.constant(n, int(tok))
        elif tok in self.index:
            poly = Polynomial.variable(n, self.index[tok])
        else:
            raise ProblemParseError(f"undeclared variable {tok!r}")
        if self.peek() == "^":
            self.next()
            exp = self.parse_exponent()
            if len(poly.terms) == 1 and next(iter(poly.terms.values())) == 1 and not poly.is_constant():
                exps = next(iter(poly.terms))
                idx = next(i for i, e in enumerate(exps) if e)
                q = Fraction(exp)
                if q.denominator != 1 and idx not in self.fractional_ok:
                    raise ProblemParseError(
                        f"fractional exponent on non-exceptional variable {self.names[idx]!r}"
                    )
                poly = Polynomial.monomial(n, tuple(e * q for e in exps))
            else:
                q = Fraction(exp)
                if q.denominator != 1:
                    raise ProblemParseError("fractional exponent on a compound expression")
                poly = poly ** int(q)
        return poly

    def parse_exponent(self) -> Fraction:
        tok = self.next()
        if tok == "(":
            num = self.next()
            if not (num and num.isdigit()):
                raise ProblemParseError("malformed exponent")
            if self.peek() == "/":
                self.next()
                den = self.next()
                if not (den and den.isdigit()):
                    raise ProblemParseError("malformed exponent")
                q = Fraction(int(num), int(den))
            else:
                q = Fraction(int(num))
            self.expect(")")
            return q
        if tok and tok.isdigit():
            return Fraction(int(tok))
        raise ProblemParseError(f"malformed exponent at {tok!r}")


def parse_polynomial(
    text: str, names: list[str], fractional_ok: Iterable[int] = ()
) -> Polynomial:
    """Parse terms like ``3/2*x^2*y - x + y^(5/2)`` over declared variables."""
    return _Parser(text, names, set(fractional_ok)).parse()
