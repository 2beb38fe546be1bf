"""Problem-file ingestion, subcommand dispatch, and rendering.

One self-describing JSON schema covers problems, traces and reports; exact
rationals always travel as strings like "4/3".  Exit codes: 0 success,
2 precondition failure, 3 parse error, 4 internal assertion.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .coeff import coefficient_pair, delta_invariant, prepare_vertices
from .cone import directrix, hilbert_samuel_truncated, initial_ideal
from .errors import InternalError, PreconditionError, ProblemParseError
from .frames import Frame
from .history import (
    ExcDivisor,
    ExceptionalData,
    PairWithHistory,
    Trace,
    blowup_chart,
    run_lsb,
)
from .invariant import (
    InvariantVector,
    Options,
    compute_invariant,
    fast_path_invariant,
)
from .pairs import Component, Pair, pair_order
from .poly import (
    INF,
    format_polynomial,
    format_rational,
    parse_polynomial,
)
from .polyhedra import (
    OrthantPolyhedron,
    coordinate_min,
    delta,
    newton_polyhedron,
    polyhedron_of_pair,
)

COMMANDS = (
    "order", "poly", "newton", "char-poly", "delta", "d-i", "nu",
    "directrix", "hs", "coeff", "blowup", "run-lsb", "invariant",
    "invariant-fast",
)


@dataclass(frozen=True)
class Problem:
    state: PairWithHistory
    script: tuple = ()
    options: Options = field(default_factory=Options)

    @property
    def frame(self) -> Frame:
        return self.state.frame

    @property
    def pair(self) -> Pair:
        return self.state.pair


def _parse_rational(text, where: str) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise ProblemParseError(f"{where}: bad rational {text!r}") from None


def parse_problem(source) -> Problem:
    """Parse a problem from a path, a file object, or a JSON string."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            with open(text, "r", encoding="utf-8") as fh:
                text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemParseError(f"problem file is not valid JSON: {exc}") from None
    return problem_from_data(data)


def problem_from_data(data: dict) -> Problem:
    if not isinstance(data, dict):
        raise ProblemParseError("problem must be a JSON object")
    try:
        variables = tuple(str(v) for v in data["variables"])
    except KeyError:
        raise ProblemParseError("missing field 'variables'") from None
    index = {name: i for i, name in enumerate(variables)}
    if len(index) != len(variables):
        raise ProblemParseError("duplicate variable names")

    def look(name, where):
        if name not in index:
            raise ProblemParseError(f"{where}: undeclared variable {name!r}")
        return index[name]

    u_names = data.get("u")
    y_names = data.get("y", [])
    if u_names is None:
        u_names = [v for v in variables if v not in set(y_names)]
    u_idx = tuple(look(n, "u") for n in u_names)
    y_idx = tuple(look(n, "y") for n in y_names)

    marks = []
    entries = []
    for item in data.get("exceptional", []):
        div_id = str(item.get("id"))
        var = item.get("variable")
        d = _parse_rational(item.get("d", 0), f"exceptional {div_id}")
        birth = int(item.get("birth", 0))
        if var is None:
            entries.append(ExcDivisor(div_id, None, d, birth))
        else:
            vi = look(var, f"exceptional {div_id}")
            marks.append((div_id, vi))
            entries.append(ExcDivisor(div_id, vi, d, birth))
    try:
        frame = Frame(variables, u_idx, y_idx, tuple(marks))
    except PreconditionError as exc:
        raise ProblemParseError(str(exc)) from None

    fractional_ok = frame.marked_indices()
    pair_data = data.get("pair")
    if not isinstance(pair_data, dict) or "components" not in pair_data:
        raise ProblemParseError("missing field 'pair.components'")
    comps = []
    for k, comp in enumerate(pair_data["components"]):
        gens_text = comp.get("gens", [])
        if not gens_text:
            raise ProblemParseError(f"component {k}: empty generator list")
        gens = tuple(
            parse_polynomial(g, list(variables), fractional_ok) for g in gens_text
        )
        if any(g.is_zero() for g in gens):
            raise ProblemParseError(f"component {k}: zero generator")
        b = _parse_rational(comp.get("b"), f"component {k}")
        if b <= 0:
            raise ProblemParseError(f"component {k}: weight must be positive")
        comps.append(Component(gens, b))
    pair = Pair(tuple(comps))

    script = []
    for k, step in enumerate(data.get("script", {}).get("steps", [])):
        center = [str(n) for n in step.get("center", [])]
        chart = step.get("chart")
        if not center or chart is None:
            raise ProblemParseError(f"script step {k}: needs 'center' and 'chart'")
        for n in center + [chart]:
            look(n, f"script step {k}")
        script.append((center, str(chart)))

    odata = data.get("options", {})
    options = Options(
        hs_cutoff=int(odata.get("hs_cutoff", 12)),
        max_prep_iters=int(odata.get("max_prep_iters", 32)),
        contact_height_cap=int(odata.get("contact_height_cap", 4)),
        tail_iters=int(odata.get("tail_iters", 8)),
        verify=bool(odata.get("verify", True)),
        skip_unit_steps=bool(odata.get("skip_unit_steps", False)),
    )
    try:
        state = PairWithHistory(pair, frame, ExceptionalData(tuple(entries)))
    except PreconditionError as exc:
        raise ProblemParseError(str(exc)) from None
    return Problem(state, tuple(script), options)


# ---------------------------------------------------------------------------
# Reports


def _rat(x) -> str:
    return format_rational(x)


def _poly_str(p, frame: Frame) -> str:
    return format_polynomial(p, list(frame.variables))


def _vertices_data(P: OrthantPolyhedron):
    return [[_rat(c) for c in v] for v in P.vertices]


def _pair_data(pair: Pair, frame: Frame):
    return {
        "components": [
            {"gens": [_poly_str(g, frame) for g in comp.gens], "b": _rat(comp.weight)}
            for comp in pair.components
        ]
    }


def _frame_data(frame: Frame):
    return {
        "variables": list(frame.variables),
        "u": list(frame.u_names()),
        "y": list(frame.y_names()),
        "exceptional": [
            {"id": d, "variable": frame.variables[i]} for d, i in frame.exceptional
        ],
    }


def _invariant_data(vec: InvariantVector):
    return {
        "nu1": {"dims": list(vec.nu1.dims), "cutoff": vec.nu1.cutoff},
        "s1": vec.s1,
        "entries": [{"nu": _rat(e.nu), "s": e.s} for e in vec.entries],
        "terminal": None if vec.terminal is None else ("inf" if vec.terminal == INF else "0"),
        "center": None if vec.center is None else list(vec.center),
        "monomial": vec.monomial,
    }


def run(problem: Problem, command: str, chart: str | None = None, fast: bool = False):
    """Execute one subcommand; returns a JSON-ready report dict."""
    state = problem.state
    pair, frame = state.pair, state.frame
    opts = problem.options
    if command == "order":
        return {
            "command": command,
            "pair_order": _rat(pair_order(pair)),
            "component_orders": [
                _rat(c.ideal_order()) for c in pair.components
            ],
        }
    if command == "poly":
        P = polyhedron_of_pair(pair, frame)
        return {
            "command": command,
            "u": list(frame.u_names()),
            "vertices": _vertices_data(P),
        }
    if command == "newton":
        P = newton_polyhedron(pair, frame)
        return {
            "command": command,
            "coordinates": list(frame.u_names()) + list(frame.y_names()),
            "vertices": _vertices_data(P),
        }
    if command == "char-poly":
        res = prepare_vertices(pair, frame, opts.max_prep_iters)
        return {
            "command": command,
            "u": list(frame.u_names()),
            "vertices": _vertices_data(res.polyhedron),
            "prepared": res.prepared,
            "iterations": len(res.translations),
            "pair": _pair_data(res.pair, frame),
        }
    if command == "delta":
        try:
            value = delta_invariant(pair, frame, opts.max_prep_iters)
        except PreconditionError as exc:
            forced = getattr(exc, "forced_delta", None)
            if forced is None:
                raise
            return {"command": command, "error": str(exc), "forced_delta": _rat(forced)}
        return {"command": command, "delta": _rat(value)}
    if command == "d-i":
        P = polyhedron_of_pair(pair, frame)
        table = {}
        for pos, i in enumerate(frame.u_indices):
            table[frame.variables[i]] = (
                None if P.is_empty() else _rat(coordinate_min(P, pos))
            )
        return {"command": command, "d": table}
    if command == "nu":
        from .history import exceptional_nu

        value = exceptional_nu(pair, frame, state.exdata, opts.max_prep_iters)
        return {"command": command, "nu": _rat(value)}
    if command == "directrix":
        basis = directrix(initial_ideal(pair))
        return {
            "command": command,
            "forms": [_poly_str(f, frame) for f in basis.forms],
            "dim": basis.dim,
        }
    if command == "hs":
        dims = hilbert_samuel_truncated(list(pair.all_generators()), opts.hs_cutoff)
        return {"command": command, "dims": dims, "cutoff": opts.hs_cutoff}
    if command == "coeff":
        C = coefficient_pair(pair, frame, frame.y_indices)
        reduced, _ = frame.drop_variables(frame.y_indices)
        return {
            "command": command,
            "z": list(frame.y_names()),
            "pair": _pair_data(C, reduced),
        }
    if command == "blowup":
        if problem.script:
            center_names, chart_name = problem.script[0]
        else:
            center_names = list(frame.variables)
            chart_name = chart
        if chart is not None:
            chart_name = chart
        if chart_name is None:
            raise PreconditionError("blowup needs a chart variable (--chart)")
        report = blowup_chart(
            state, [frame.index_of(n) for n in center_names], frame.index_of(chart_name)
        )
        return {
            "command": command,
            "center": center_names,
            "chart": chart_name,
            "delta_center": _rat(report.delta_center_value),
            "new_divisor": report.new_divisor,
            "d_from_center": _rat(report.d_from_center),
            "d_from_polyhedron": _rat(report.d_from_polyhedron),
            "pair": _pair_data(report.state.pair, report.state.frame),
            "frame": _frame_data(report.state.frame),
        }
    if command == "run-lsb":
        trace = run_lsb(state, problem.script)
        return {"command": command, "trace": _trace_data(trace)}
    if command in ("invariant", "invariant-fast"):
        trace = run_lsb(state, problem.script) if problem.script else None
        subject = trace.final if trace else state
        compute = fast_path_invariant if (fast or command == "invariant-fast") else compute_invariant
        vec = compute(subject, trace, opts)
        return {"command": command, "invariant": _invariant_data(vec)}
    raise PreconditionError(f"unknown command {command!r}")


def _trace_data(trace: Trace):
    years = []
    for rec in trace.years:
        frame = rec.state.frame
        entry = {
            "year": rec.year,
            "pair": _pair_data(rec.state.pair, frame),
            "frame": _frame_data(frame),
            "exceptional": [
                {
                    "id": e.divisor_id,
                    "variable": None if e.variable is None else frame.variables[e.variable],
                    "d": _rat(e.d),
                    "birth": e.birth_year,
                }
                for e in rec.state.exdata.entries
            ],
        }
        if rec.step is not None:
            entry["step"] = {
                "center": [frame.variables[i] for i in rec.step.center],
                "chart": frame.variables[rec.step.chart],
                "delta_center": _rat(rec.step.delta_center_value),
                "d_from_center": _rat(rec.step.d_from_center),
                "d_from_polyhedron": _rat(rec.step.d_from_polyhedron),
            }
        years.append(entry)
    return {"years": years}


# ---------------------------------------------------------------------------
# Rendering


def render(report: dict, format: str = "text") -> bytes:
    if format == "json":
        return (json.dumps(report, indent=2, sort_keys=True) + "\n").encode()
    if format == "text":
        return _render_text(report).encode()
    if format == "svg":
        return _render_svg(report)
    raise PreconditionError(f"unknown format {format!r}")


def _render_text(report: dict, indent: int = 0) -> str:
    lines: list[str] = []

    def emit(key, value, depth):
        pad = "  " * depth
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            for k in value:
                emit(k, value[k], depth + 1)
        elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
            lines.append(f"{pad}{key}:")
            for i, item in enumerate(value):
                emit(f"[{i}]", item, depth + 1)
        else:
            if isinstance(value, list):
                value = " ".join(str(v) for v in value) if value else "(none)"
            lines.append(f"{pad}{key}: {value}")

    for k in report:
        emit(k, report[k], indent)
    return "\n".join(lines) + "\n"


def _render_svg(report: dict) -> bytes:
    verts = report.get("vertices")
    if verts is None or any(len(v) != 2 for v in verts):
        raise PreconditionError("svg output needs a 2-dimensional polyhedron report")
    pts = [(Fraction(a), Fraction(b)) for a, b in verts]
    span = max([c for p in pts for c in p] + [Fraction(1)]) + 1
    size = 360
    margin = 30

    def sx(x: Fraction) -> float:
        return margin + float(x / span) * (size - 2 * margin)

    def sy(y: Fraction) -> float:
        return size - margin - float(y / span) * (size - 2 * margin)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<line x1="{margin}" y1="{size - margin}" x2="{size - margin}" '
        f'y2="{size - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{size - margin}" x2="{margin}" y2="{margin}" '
        f'stroke="black"/>',
    ]
    if pts:
        ordered = sorted(pts)
        path = [f"M {sx(ordered[0][0]):.2f} {sy(span):.2f}"]
        path.append(f"L {sx(ordered[0][0]):.2f} {sy(ordered[0][1]):.2f}")
        for p in ordered[1:]:
            path.append(f"L {sx(p[0]):.2f} {sy(p[1]):.2f}")
        last = ordered[-1]
        path.append(f"L {sx(span):.2f} {sy(last[1]):.2f}")
        path.append(f"L {sx(span):.2f} {sy(span):.2f} Z")
        out.append(
            f'<path d="{" ".join(path)}" fill="#c8d8f0" stroke="#3050a0" '
            f'fill-opacity="0.6"/>'
        )
        for a, b in ordered:
            out.append(
                f'<circle cx="{sx(a):.2f}" cy="{sy(b):.2f}" r="3" fill="#203060"/>'
            )
            label = f"({format_rational(a)}, {format_rational(b)})"
            out.append(
                f'<text x="{sx(a) + 5:.2f}" y="{sy(b) - 5:.2f}" '
                f'font-size="11">{label}</text>'
            )
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode()


# ---------------------------------------------------------------------------
# Entry point


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hironaka",
        description="exact polyhedral invariants of weighted ideals at a point",
    )
    parser.add_argument("problem", help="problem JSON file, or - for stdin")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--format", choices=("text", "json", "svg"), default="text")
    parser.add_argument("--hs-cutoff", type=int, default=None)
    parser.add_argument("--max-prep-iters", type=int, default=None)
    parser.add_argument("--chart", default=None)
    parser.add_argument("--fast", action="store_true")
    args = parser.parse_args(argv)

    try:
        if args.problem == "-":
            problem = parse_problem(sys.stdin)
        else:
            problem = parse_problem(args.problem)
        opts = problem.options
        if args.hs_cutoff is not None:
            opts = replace(opts, hs_cutoff=args.hs_cutoff)
        if args.max_prep_iters is not None:
            opts = replace(opts, max_prep_iters=args.max_prep_iters)
        problem = Problem(problem.state, problem.script, opts)
        report = run(problem, args.command, chart=args.chart, fast=args.fast)
        sys.stdout.buffer.write(render(report, args.format))
        return 0
    except ProblemParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 3
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return 2
    except (InternalError, AssertionError) as exc:
        print(f"internal assertion: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
