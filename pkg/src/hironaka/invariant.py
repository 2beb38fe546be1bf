"""The resolution-invariant pipeline at a point: partition of the
exceptional divisors into old and new, the descent
G -> F -> coefficient pair -> companion pair, the termination cases, and a
fast path that collapses the forced unit steps.

The vector has the shape (nu1, s1; nu2, s2; ...; nu_t) where nu1 is a
truncated Hilbert-Samuel sequence, each further nu is a rational residual
order (INF and 0 terminate), and s_i counts old exceptional divisors.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .coeff import MaximalContact, coefficient_pair, find_maximal_contact
from .errors import InternalError, PreconditionError
from .frames import Frame
from .history import ExcDivisor, ExceptionalData, PairWithHistory, Trace
from .pairs import Component, Pair, is_singular_at_origin
from .poly import (
    INF,
    Polynomial,
    divide_by_variable_power,
    format_polynomial,
    ord_along_variable,
    ord_at_origin,
)
from .polyhedra import coordinate_min, delta, polyhedron_of_pair
from .cone import hilbert_samuel_truncated


@dataclass(frozen=True)
class Options:
    hs_cutoff: int = 12
    max_prep_iters: int = 32
    contact_height_cap: int = 4
    tail_iters: int = 8
    verify: bool = True           # polyhedron cross-checks during slow runs
    skip_unit_steps: bool = False  # drop (1, 0) padding entries from the output


@dataclass(frozen=True)
class HilbertSamuel:
    dims: tuple[int, ...]
    cutoff: int


@dataclass(frozen=True)
class InvariantEntry:
    nu: Fraction
    s: int


@dataclass(frozen=True)
class InvariantVector:
    nu1: HilbertSamuel
    s1: int
    entries: tuple[InvariantEntry, ...]
    terminal: object | None            # Fraction(0) or INF once the run ends
    center: tuple[str, ...] | None     # blow-up center for the INF case
    monomial: str | None               # exceptional monomial for the 0 case

    def tokens(self) -> tuple:
        """Flat comparison sequence: s1, nu2, s2, ..., terminal."""
        toks: list = [self.s1]
        for e in self.entries:
            toks.append(e.nu)
            toks.append(e.s)
        if self.terminal is not None:
            toks.append(self.terminal)
        return tuple(toks)


@dataclass(frozen=True)
class PipelineState:
    r: int
    pair: Pair
    frame: Frame
    exdata: ExceptionalData
    consumed: tuple[str, ...]
    pending: tuple[str, ...]           # adjoined divisor variables, unconsumed
    adjoin: tuple[str, ...]            # divisor variables adjoined this step
    opts: Options = field(default_factory=Options)


@dataclass(frozen=True)
class Terminal:
    nu: object                         # Fraction(0) or INF
    center: tuple[str, ...] | None
    monomial: str | None


@dataclass(frozen=True)
class StepResult:
    mu: object
    mu_by_divisor: tuple[tuple[str, Fraction], ...]
    nu: object
    outcome: object                    # PipelineState | Terminal
    exceptional_factor: Polynomial | None


def _by_index(frame: Frame, names) -> tuple[str, ...]:
    return tuple(sorted(names, key=frame.index_of))


# ---------------------------------------------------------------------------
# Companion pair


def _exceptional_monomial(frame: Frame, mu_by_divisor) -> Polynomial:
    n = frame.nvars
    exps = [Fraction(0)] * n
    for div_id, mu in mu_by_divisor:
        idx = frame.variable_of(div_id)
        if idx is None:
            raise InternalError("divisor without a frame variable")
        exps[idx] += mu
    return Polynomial.monomial(n, tuple(exps))


def divisor_multiplicities(H: Pair, frame: Frame, exdata: ExceptionalData):
    """mu_H = min over components of (multiplicity along H) / weight."""
    out: list[tuple[str, Fraction]] = []
    u_set = set(frame.u_indices)
    for e in exdata.present_entries():
        if e.variable not in u_set:
            continue
        best = None
        for comp in H.components:
            o = min(ord_along_variable(g, e.variable) for g in comp.gens)
            val = Fraction(o) / comp.weight
            best = val if best is None else min(best, val)
        if best is None:
            best = Fraction(0)
        out.append((e.divisor_id, best))
    return tuple(out)


def companion_pair(H: Pair, frame: Frame, exdata: ExceptionalData, nu) -> Pair:
    """Factor the exceptional monomial D out of every generator, reweight by
    nu, and adjoin (D, 1 - nu) exactly when nu < 1."""
    if nu == INF or nu == 0:
        raise PreconditionError("terminal case, no companion pair")
    nu = Fraction(nu)
    mus = divisor_multiplicities(H, frame, exdata)
    factors = [(frame.variable_of(d), mu) for d, mu in mus if mu != 0]
    comps: list[Component] = []
    for comp in H.components:
        gens = []
        for g in comp.gens:
            reduced = g
            for idx, mu in factors:
                try:
                    reduced = divide_by_variable_power(reduced, idx, mu * comp.weight)
                except ValueError as exc:
                    raise InternalError("inexact exceptional factoring") from exc
            gens.append(reduced)
        comps.append(Component(tuple(gens), comp.weight * nu))
    result = Pair(tuple(comps))
    if nu < 1 and factors:
        D = _exceptional_monomial(frame, mus)
        result = Pair(result.components + (Component((D,), 1 - nu),))
    return result


# ---------------------------------------------------------------------------
# One descent step


def invariant_step(state: PipelineState) -> StepResult:
    """G -> F -> coefficient pair -> (mu, mu_H, nu) -> companion or terminal."""
    opts = state.opts
    frame = state.frame
    n = frame.nvars

    # adjoin the old divisors chosen for this step
    pair = state.pair
    extra = []
    for name in state.adjoin:
        idx = frame.index_of(name)
        extra.append(Component((Polynomial.variable(n, idx),), Fraction(1)))
    if extra:
        pair = Pair(pair.components + tuple(extra))
    pending = _by_index(frame, set(state.pending) | set(state.adjoin))

    preferred = tuple(frame.index_of(nm) for nm in pending)
    mc = find_maximal_contact(
        pair,
        frame,
        preferred_variables=preferred,
        height_cap=opts.contact_height_cap,
        tail_iters=opts.tail_iters,
    )
    contact_name = frame.variables[mc.contact_index]
    pending = tuple(nm for nm in pending if nm != contact_name)

    H = coefficient_pair(mc.pair, mc.frame, [mc.contact_index])
    new_frame, remap = mc.frame.drop_variables([mc.contact_index])
    exdata = _remap_exdata(state.exdata, remap)

    mu = INF if H.is_empty() else min(
        Fraction(min(ord_at_origin(g) for g in comp.gens)) / comp.weight
        for comp in H.components
    )
    mus = divisor_multiplicities(H, new_frame, exdata) if not H.is_empty() else ()
    nu = mu if mu == INF else mu - sum((m for _, m in mus), start=Fraction(0))

    if opts.verify:
        _verify_step(mc, H, new_frame, mu, mus)

    consumed = state.consumed + (contact_name,)
    if nu == INF:
        outcome = Terminal(INF, consumed, None)
        return StepResult(mu, mus, nu, outcome, None)
    if nu == 0:
        D = _exceptional_monomial(new_frame, mus)
        outcome = Terminal(
            Fraction(0), None, format_polynomial(D, list(new_frame.variables))
        )
        return StepResult(mu, mus, nu, outcome, D)

    G_next = companion_pair(H, new_frame, exdata, nu)
    next_state = PipelineState(
        r=state.r + 1,
        pair=G_next,
        frame=new_frame,
        exdata=_zero_assigned(exdata),
        consumed=consumed,
        pending=pending,
        adjoin=(),
        opts=opts,
    )
    return StepResult(mu, mus, nu, next_state, None)


def _remap_exdata(exdata: ExceptionalData, remap: dict[int, int]) -> ExceptionalData:
    entries = []
    for e in exdata.entries:
        if e.present:
            if e.variable not in remap:
                raise InternalError("tracked divisor variable was consumed")
            entries.append(ExcDivisor(e.divisor_id, remap[e.variable], e.d, e.birth_year))
        else:
            entries.append(e)
    return ExceptionalData(tuple(entries))


def _zero_assigned(exdata: ExceptionalData) -> ExceptionalData:
    return ExceptionalData(tuple(
        ExcDivisor(e.divisor_id, e.variable, Fraction(0), e.birth_year)
        if e.present else e
        for e in exdata.entries
    ))


def _verify_step(mc: MaximalContact, H: Pair, frame_H: Frame, mu, mus) -> None:
    """Polyhedron cross-checks: the coefficient-pair order equals the
    projected delta, and each divisor multiplicity equals a coordinate
    minimum."""
    P = polyhedron_of_pair(mc.pair, mc.frame)
    d = delta(P)
    if d != mu:
        raise InternalError(f"order/delta cross-check failed: {mu} vs {d}")
    if H.is_empty():
        return
    PH = polyhedron_of_pair(H, frame_H)
    pos = {i: p for p, i in enumerate(frame_H.u_indices)}
    for div_id, m in mus:
        idx = frame_H.variable_of(div_id)
        cm = coordinate_min(PH, pos[idx])
        if cm != m:
            raise InternalError(
                f"divisor multiplicity cross-check failed for {div_id}: {m} vs {cm}"
            )


# ---------------------------------------------------------------------------
# Year-by-year evaluation of the truncated invariant


def _hs_of_pair(pair: Pair, cutoff: int) -> HilbertSamuel:
    dims = hilbert_samuel_truncated(list(pair.all_generators()), cutoff)
    return HilbertSamuel(tuple(dims), cutoff)


def _pipeline_frame(state: PairWithHistory) -> Frame:
    """The working frame: everything in the u-part, markings preserved."""
    fr = state.frame
    return Frame(fr.variables, tuple(range(fr.nvars)), (), fr.exceptional)


@dataclass
class _Partition:
    records: list  # (s_i, E^i ids, remaining ids)


def _drive(
    state: PairWithHistory,
    year_tokens: list,
    opts: Options,
    fast: bool,
) -> tuple[InvariantVector, _Partition]:
    if not is_singular_at_origin(state.pair):
        raise PreconditionError("point not in Sing")
    hs = _hs_of_pair(state.pair, opts.hs_cutoff)
    partition = _Partition([])

    frame = _pipeline_frame(state)
    exdata = state.exdata
    cur = PipelineState(
        r=1, pair=state.pair, frame=frame, exdata=exdata,
        consumed=(), pending=(), adjoin=(), opts=opts,
    )

    prefix: list = []  # comparison tokens after hs: s1, nu2, s2, ...
    s1 = 0
    entries: list[InvariantEntry] = []
    pending_nu = None
    terminal = None
    center = None
    monomial = None

    # base data for the deferred fast-path computation
    base_pair = cur.pair
    base_frame = cur.frame
    base_exdata = cur.exdata
    deferred: list[str] = []

    r = 1
    while True:
        i_r = _first_matching_year(hs, prefix, year_tokens)
        Er = tuple(
            e for e in cur.exdata.present_entries() if e.birth_year <= i_r
        )
        s_r = len(Er)
        adjoin = tuple(
            cur.frame.variables[e.variable] for e in sorted(Er, key=lambda e: e.divisor_id)
        )
        remaining = tuple(
            e.divisor_id for e in cur.exdata.present_entries() if e.birth_year > i_r
        )
        partition.records.append(
            (s_r, tuple(e.divisor_id for e in Er), remaining)
        )
        if Er:
            kept = tuple(e for e in cur.exdata.entries if e not in Er)
            cur = replace(cur, exdata=ExceptionalData(kept), adjoin=adjoin)
        else:
            cur = replace(cur, adjoin=())

        if r == 1:
            s1 = s_r
        else:
            entries.append(InvariantEntry(pending_nu, s_r))
        prefix.append(s_r)

        if fast:
            pending_now = _by_index(cur.frame, set(cur.pending) | set(cur.adjoin))
            if pending_now:
                contact = pending_now[0]
                rest = pending_now[1:]
                if rest:
                    # forced unit step: another adjoined divisor remains
                    deferred.append(contact)
                    cur = replace(
                        cur, r=cur.r + 1, pending=rest, adjoin=(),
                        consumed=cur.consumed + (contact,),
                    )
                    pending_nu = Fraction(1)
                    prefix.append(pending_nu)
                    r += 1
                    continue
                deferred.append(contact)
                step = _deferred_step(base_pair, base_frame, base_exdata,
                                      cur, deferred, opts)
                deferred = []
            else:
                if deferred:
                    step = _deferred_step(base_pair, base_frame, base_exdata,
                                          cur, deferred, opts)
                    deferred = []
                else:
                    step = invariant_step(replace(cur, opts=replace(opts, verify=False)))
        else:
            step = invariant_step(cur)

        pending_nu = step.nu
        if isinstance(step.outcome, Terminal):
            terminal = step.outcome.nu
            center = step.outcome.center
            monomial = step.outcome.monomial
            prefix.append(INF if terminal == INF else Fraction(0))
            break
        cur = step.outcome
        base_pair, base_frame, base_exdata = cur.pair, cur.frame, cur.exdata
        prefix.append(pending_nu)
        r += 1

    vec = InvariantVector(
        nu1=hs,
        s1=s1,
        entries=tuple(entries),
        terminal=terminal,
        center=center,
        monomial=monomial,
    )
    if opts.skip_unit_steps:
        vec = replace(vec, entries=tuple(
            e for e in vec.entries if not (e.nu == 1 and e.s == 0)
        ))
    return vec, partition


def _deferred_step(base_pair, base_frame, base_exdata, cur: PipelineState,
                   consumed_names, opts: Options) -> StepResult:
    """Collapse a forced run: one multi-variable coefficient pair of the base
    state with respect to every contact consumed since, then the usual
    mu/nu arithmetic."""
    idxs = [base_frame.index_of(nm) for nm in consumed_names]
    H = coefficient_pair(base_pair, base_frame, idxs)
    new_frame, remap = base_frame.drop_variables(idxs)
    exdata = _remap_exdata(cur.exdata, _compose_remap(base_exdata, cur.exdata, base_frame, remap))
    mu = INF if H.is_empty() else min(
        Fraction(min(ord_at_origin(g) for g in comp.gens)) / comp.weight
        for comp in H.components
    )
    mus = divisor_multiplicities(H, new_frame, exdata) if not H.is_empty() else ()
    nu = mu if mu == INF else mu - sum((m for _, m in mus), start=Fraction(0))
    consumed = cur.consumed + (consumed_names[-1],)
    if nu == INF:
        return StepResult(mu, mus, nu, Terminal(INF, consumed, None), None)
    if nu == 0:
        D = _exceptional_monomial(new_frame, mus)
        return StepResult(
            mu, mus, nu,
            Terminal(Fraction(0), None, format_polynomial(D, list(new_frame.variables))),
            D,
        )
    G_next = companion_pair(H, new_frame, exdata, nu)
    next_state = PipelineState(
        r=cur.r + 1, pair=G_next, frame=new_frame,
        exdata=_zero_assigned(exdata), consumed=consumed,
        pending=(), adjoin=(), opts=opts,
    )
    return StepResult(mu, mus, nu, next_state, None)


def _compose_remap(base_exdata, cur_exdata, base_frame, remap):
    # the deferred step restricts from the base frame, whose indices current
    # exdata still uses (no restriction happened during the forced run)
    return remap


def _first_matching_year(hs: HilbertSamuel, prefix: list, year_tokens: list) -> int:
    mine = (hs.dims,) + tuple(prefix)
    for k, tokens in enumerate(year_tokens):
        if tokens is None:
            continue
        if len(tokens) >= len(mine) and tuple(tokens[: len(mine)]) == mine:
            return k
    return len(year_tokens)


def _vector_tokens(vec: InvariantVector) -> tuple:
    return (vec.nu1.dims,) + vec.tokens()


# ---------------------------------------------------------------------------
# Public entry points


def compute_invariant(
    state: PairWithHistory, trace: Trace | None = None, opts: Options | None = None
) -> InvariantVector:
    opts = opts or Options()
    year_tokens = _year_tokens(trace, opts, fast=False) if trace else []
    vec, _ = _drive(state, year_tokens, opts, fast=False)
    return vec


def fast_path_invariant(
    state: PairWithHistory, trace: Trace | None = None, opts: Options | None = None
) -> InvariantVector:
    opts = opts or Options()
    year_tokens = _year_tokens(trace, opts, fast=True) if trace else []
    vec, _ = _drive(state, year_tokens, opts, fast=True)
    return vec


def s_partition(trace: Trace, opts: Options | None = None):
    """The old/new split of the exceptional divisors at the final point:
    one (s_i, E^i ids, remaining ids) triple per pipeline step."""
    opts = opts or Options()
    year_tokens = _year_tokens(trace, opts, fast=False)
    _, partition = _drive(trace.final, year_tokens, opts, fast=False)
    return partition.records


def _year_tokens(trace: Trace, opts: Options, fast: bool) -> list:
    """Comparison tokens of the invariant at every tracked year, final year
    included; None marks years whose point is no longer singular."""
    tokens: list = []
    for record in trace.years:
        if not is_singular_at_origin(record.state.pair):
            tokens.append(None)
            continue
        vec, _ = _drive(record.state, tokens, opts, fast)
        tokens.append(_vector_tokens(vec))
    return tokens


def compare_invariants(a: InvariantVector, b: InvariantVector) -> str:
    """Lexicographic comparison; 'incomparable-at-cutoff' when the truncated
    Hilbert-Samuel parts tie but were computed at different cutoffs."""
    common = min(a.nu1.cutoff, b.nu1.cutoff)
    da, db = a.nu1.dims[:common], b.nu1.dims[:common]
    if da != db:
        return "less" if da < db else "greater"
    if a.nu1.cutoff != b.nu1.cutoff:
        return "incomparable-at-cutoff"
    ta, tb = a.tokens(), b.tokens()
    for xa, xb in zip(ta, tb):
        if xa == xb:
            continue
        return "less" if xa < xb else "greater"
    if len(ta) != len(tb):
        return "less" if len(ta) < len(tb) else "greater"
    return "equal"
