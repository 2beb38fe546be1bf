"""Variable frames: an ordered variable list with a (u | y) split and
exceptional markings (divisor id <-> variable index).  The base point is
always the origin of the frame's coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PreconditionError


@dataclass(frozen=True)
class Frame:
    variables: tuple[str, ...]
    u_indices: tuple[int, ...]
    y_indices: tuple[int, ...]
    exceptional: tuple[tuple[str, int], ...] = field(default=())

    def __post_init__(self):
        n = len(self.variables)
        if len(set(self.variables)) != n:
            raise PreconditionError("duplicate variable names")
        split = sorted(self.u_indices) + sorted(self.y_indices)
        if sorted(split) != list(range(n)) or len(split) != n:
            raise PreconditionError("u and y must partition the variables")
        seen_vars: set[int] = set()
        seen_ids: set[str] = set()
        for div_id, idx in self.exceptional:
            if idx < 0 or idx >= n:
                raise PreconditionError(f"exceptional mark {div_id!r} on unknown variable")
            if idx in seen_vars or div_id in seen_ids:
                raise PreconditionError("exceptional markings must be pairwise distinct")
            seen_vars.add(idx)
            seen_ids.add(div_id)

    # -- queries -----------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index_of(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise PreconditionError(f"undeclared variable {name!r}") from None

    def u_names(self) -> tuple[str, ...]:
        return tuple(self.variables[i] for i in self.u_indices)

    def y_names(self) -> tuple[str, ...]:
        return tuple(self.variables[i] for i in self.y_indices)

    def marked_indices(self) -> frozenset[int]:
        return frozenset(idx for _, idx in self.exceptional)

    def divisor_on(self, index: int) -> str | None:
        for div_id, idx in self.exceptional:
            if idx == index:
                return div_id
        return None

    def variable_of(self, div_id: str) -> int | None:
        for d, idx in self.exceptional:
            if d == div_id:
                return idx
        return None

    # -- derived frames ----------------------------------------------------

    def with_split(self, u_indices, y_indices) -> "Frame":
        return Frame(self.variables, tuple(u_indices), tuple(y_indices), self.exceptional)

    def move_to_y(self, index: int) -> "Frame":
        if index in self.y_indices:
            return self
        return Frame(
            self.variables,
            tuple(i for i in self.u_indices if i != index),
            tuple(list(self.y_indices) + [index]),
            self.exceptional,
        )

    def move_to_u(self, index: int) -> "Frame":
        if index in self.u_indices:
            return self
        return Frame(
            self.variables,
            tuple(list(self.u_indices) + [index]),
            tuple(i for i in self.y_indices if i != index),
            self.exceptional,
        )

    def with_mark(self, div_id: str, index: int) -> "Frame":
        marks = tuple(m for m in self.exceptional if m[0] != div_id and m[1] != index)
        return Frame(self.variables, self.u_indices, self.y_indices, marks + ((div_id, index),))

    def without_mark(self, div_id: str) -> "Frame":
        return Frame(
            self.variables,
            self.u_indices,
            self.y_indices,
            tuple(m for m in self.exceptional if m[0] != div_id),
        )

    def drop_variables(self, indices) -> tuple["Frame", dict[int, int]]:
        """Remove variables; returns the reduced frame and an old->new index map."""
        dropped = set(indices)
        keep = [i for i in range(self.nvars) if i not in dropped]
        remap = {old: new for new, old in enumerate(keep)}
        frame = Frame(
            tuple(self.variables[i] for i in keep),
            tuple(remap[i] for i in self.u_indices if i in remap),
            tuple(remap[i] for i in self.y_indices if i in remap),
            tuple((d, remap[i]) for d, i in self.exceptional if i in remap),
        )
        return frame, remap
