"""Exact integer matrices, alphabets, and the shared text serialization.

Everything here is plain Python integer arithmetic guarded by a fixed
127-bit signed magnitude budget: a value that leaves the budget raises
MagnitudeError instead of growing silently.  Matrices are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

MAGNITUDE_BITS = 127
_LIMIT = 1 << MAGNITUDE_BITS


class MagnitudeError(ArithmeticError):
    """A value left the 127-bit signed magnitude budget."""


class MatrixFormatError(ValueError):
    """Matrix text does not conform to the file format."""


def checked(value: int) -> int:
    """Return ``value`` unchanged, or raise if |value| >= 2**127."""
    if value >= _LIMIT or value <= -_LIMIT:
        raise MagnitudeError(f"|{value}| exceeds the 2^{MAGNITUDE_BITS} budget")
    return value


@dataclass(frozen=True)
class IntMatrix:
    """Immutable row-major signed-integer matrix with a cached weight bound."""

    entries: tuple[tuple[int, ...], ...]
    weight_bound: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if not self.entries or not self.entries[0]:
            raise ValueError("matrix needs at least one row and one column")
        width = len(self.entries[0])
        rows = []
        bound = 0
        for row in self.entries:
            if len(row) != width:
                raise ValueError("ragged rows")
            clean = tuple(checked(int(v)) for v in row)
            bound = max(bound, max(abs(v) for v in clean))
            rows.append(clean)
        object.__setattr__(self, "entries", tuple(rows))
        object.__setattr__(self, "weight_bound", bound)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "IntMatrix":
        return cls(tuple(tuple(int(v) for v in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def __str__(self) -> str:
        return write_matrix(self)


@dataclass(frozen=True)
class AlphabetSpec:
    """Arity q >= 2; kernel alphabet {-(q-1),..,q-1}, encoding alphabet {0,..,q-1}."""

    q: int

    def __post_init__(self) -> None:
        if self.q < 2:
            raise ValueError("arity q must be at least 2")

    def kernel_values(self) -> range:
        return range(-(self.q - 1), self.q)

    def encoding_values(self) -> range:
        return range(self.q)

    @property
    def kernel_size(self) -> int:
        return 2 * self.q - 1


@dataclass(frozen=True)
class Counterexample:
    """A nonzero kernel vector witnessing failure of the EQ_q property."""

    x: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", tuple(int(v) for v in self.x))
        if not any(self.x):
            raise ValueError("counterexample vector must be nonzero")


@dataclass(frozen=True)
class ConstructionTrace:
    """Recursion metadata (base dims, iterations, arity) for constructed matrices."""

    m0: int
    n0: int
    k: int
    q: int

    def __post_init__(self) -> None:
        if self.m0 < 1 or self.n0 < 1:
            raise ValueError("base dimensions must be positive")
        if self.k < 0:
            raise ValueError("iteration count must be >= 0")
        if self.q < 2:
            raise ValueError("arity q must be at least 2")
        # dimension law must close in exact rational arithmetic
        cols = (
            Fraction(self.q) ** self.k
            * self.n0
            * (Fraction(self.k, self.q) * Fraction(self.m0, self.n0) + 1)
        )
        if cols.denominator != 1:
            raise ValueError(f"trace implies non-integer column count {cols}")
        object.__setattr__(self, "_cols", int(cols))

    @property
    def rows(self) -> int:
        return self.q**self.k * self.m0

    @property
    def cols(self) -> int:
        return self._cols  # type: ignore[attr-defined]


def matvec(a: IntMatrix, x: Sequence[int]) -> tuple[int, ...]:
    """Exact product A*x with overflow-checked accumulation."""
    if len(x) != a.n:
        raise ValueError(f"vector length {len(x)} does not match {a.m}x{a.n} matrix")
    out = []
    for row in a.entries:
        acc = 0
        for coeff, xi in zip(row, x):
            if coeff and xi:
                acc = checked(acc + checked(coeff * int(xi)))
        out.append(acc)
    return tuple(out)


_TRACE_RE = re.compile(
    r"#\s*trace\s+m0=(-?\d+)\s+n0=(-?\d+)\s+k=(-?\d+)\s+q=(-?\d+)\s*$"
)


def write_matrix(a: IntMatrix, trace: Optional[ConstructionTrace] = None) -> str:
    """Canonical text form: optional trace comment, `m n` header, one row per line."""
    lines = []
    if trace is not None:
        lines.append(f"# trace m0={trace.m0} n0={trace.n0} k={trace.k} q={trace.q}")
    lines.append(f"{a.m} {a.n}")
    lines.extend(" ".join(str(v) for v in row) for row in a.entries)
    return "\n".join(lines) + "\n"


def read_matrix(text: str) -> tuple[IntMatrix, Optional[ConstructionTrace]]:
    """Parse the matrix file format; inverse of write_matrix on canonical text.

    Comment lines before the header are tolerated; a `# trace ...` comment is
    parsed into a ConstructionTrace, any other comment is ignored.
    """
    lines = text.splitlines()
    trace = None
    pos = 0
    while pos < len(lines) and lines[pos].lstrip().startswith("#"):
        match = _TRACE_RE.match(lines[pos].strip())
        if match:
            trace = ConstructionTrace(*(int(g) for g in match.groups()))
        pos += 1
    if pos >= len(lines):
        raise MatrixFormatError("missing header line")
    header = lines[pos].split()
    if len(header) != 2:
        raise MatrixFormatError(f"malformed header {lines[pos]!r}")
    try:
        m, n = int(header[0]), int(header[1])
    except ValueError:
        raise MatrixFormatError(f"malformed header {lines[pos]!r}") from None
    if m < 1 or n < 1:
        raise MatrixFormatError(f"malformed header {lines[pos]!r}")
    body = lines[pos + 1 :]
    if len(body) != m:
        raise MatrixFormatError(f"expected {m} rows, found {len(body)}")
    rows = []
    for line in body:
        tokens = line.split()
        if len(tokens) != n:
            raise MatrixFormatError(
                f"expected {n} entries per row, found {len(tokens)}"
            )
        try:
            rows.append([int(t) for t in tokens])
        except ValueError:
            raise MatrixFormatError(f"non-integer token in row {line!r}") from None
    return IntMatrix.from_rows(rows), trace
