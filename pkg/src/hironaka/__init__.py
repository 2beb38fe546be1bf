"""Exact-rational toolkit for pairs, their polyhedra, blow-up histories and
the resolution invariant at a point."""

from .errors import InternalError, PreconditionError, ProblemParseError, ToolkitError
from .frames import Frame
from .pairs import (
    Component,
    Pair,
    apply_log_diff,
    is_singular_at_origin,
    merge_to_single,
    pair_order,
    power_rewrite,
)
from .poly import (
    INF,
    Polynomial,
    format_polynomial,
    format_rational,
    hasse_derivative,
    initial_form,
    ord_at_origin,
    parse_polynomial,
    substitute,
    weighted_order,
)
from .polyhedra import (
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
from .cone import (
    DirectrixBasis,
    HomIdeal,
    directrix,
    graded_piece,
    hilbert_samuel_truncated,
    initial_ideal,
)
from .coeff import (
    MaximalContact,
    PrepareResult,
    coefficient_pair,
    delta_invariant,
    find_maximal_contact,
    prepare_vertices,
)
from .history import (
    ChartReport,
    ExcDivisor,
    ExceptionalData,
    PairWithHistory,
    Trace,
    blowup_chart,
    delta_center,
    exceptional_nu,
    is_permissible,
    run_lsb,
)
from .invariant import (
    HilbertSamuel,
    InvariantEntry,
    InvariantVector,
    Options,
    PipelineState,
    companion_pair,
    compare_invariants,
    compute_invariant,
    fast_path_invariant,
    invariant_step,
    s_partition,
)

__all__ = [name for name in dir() if not name.startswith("_")]
