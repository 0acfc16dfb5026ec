"""Exact rational dense linear algebra.

Every rank decision in the package goes through this module. Entries are
:class:`fractions.Fraction`, which already keeps numerator/denominator in
lowest terms with a positive denominator, so no floating point ever enters
a rank computation.

Pivoting is deterministic: columns are scanned left to right and the first
row at or below the current pivot row holding a nonzero entry is used. No
magnitude heuristics are needed (or wanted) with exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exceptions import DimensionError, ParseError, SingularMatrix

ROWS = "rows"
COLUMNS = "columns"


def parse_scalar(value) -> Fraction:
    """Parse ``"p/q"``, ``"p"``, a decimal string or an int into a Fraction.

    Floats are accepted through their shortest ``repr`` so that ``0.1``
    becomes ``1/10`` rather than the binary expansion.
    """
    if isinstance(value, bool):
        raise ParseError(f"boolean is not a scalar: {value!r}")
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, float):
        value = repr(value)
    if not isinstance(value, str):
        raise ParseError(f"cannot parse scalar from {type(value).__name__}: {value!r}")
    try:
        return Fraction(value.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"invalid rational {value!r}") from exc


def format_scalar(x: Fraction) -> str:
    """Canonical text form: ``"p"`` for integers, ``"p/q"`` otherwise."""
    return str(x)


class Mat:
    """Immutable dense matrix of Fractions, stored row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Iterable = ()):
        data = tuple(parse_scalar(e) for e in entries)
        if rows < 0 or cols < 0:
            raise DimensionError(f"negative shape {rows}x{cols}")
        if len(data) != rows * cols:
            raise DimensionError(
                f"{len(data)} entries given for a {rows}x{cols} matrix"
            )
        self.rows = rows
        self.cols = cols
        self._data = data

    # construction -------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Mat":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for i, r in enumerate(rows):
            if len(r) != cols:
                raise DimensionError(f"row {i} has {len(r)} entries, expected {cols}")
        return cls(len(rows), cols, (e for r in rows for e in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "Mat":
        if rows is None:
            rows = len(columns[0]) if columns else 0
        return cls.from_rows(columns, cols=rows).T if columns else cls(rows, 0)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def versor(cls, n: int, i: int) -> "Mat":
        """Row vector e_i (0-based) of length n."""
        return cls(1, n, [1 if j == i else 0 for j in range(n)])

    # access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return self._data

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self._data[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def to_strings(self) -> list[list[str]]:
        return [[format_scalar(x) for x in self.row(i)] for i in range(self.rows)]

    def take(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "Mat":
        rows = range(self.rows) if rows is None else list(rows)
        cols = range(self.cols) if cols is None else list(cols)
        return Mat(len(rows), len(cols), (self[i, j] for i in rows for j in cols))

    def is_zero(self) -> bool:
        return not any(self._data)

    # algebra ------------------------------------------------------------
    @property
    def T(self) -> "Mat":
        return Mat(self.cols, self.rows, (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.col(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for c in cols:
                out.append(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)))
        return Mat(self.rows, other.cols, out)

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return Mat(self.rows, self.cols, (a + b for a, b in zip(self._data, other._data)))

    def __neg__(self) -> "Mat":
        return Mat(self.rows, self.cols, (-a for a in self._data))

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def scale(self, c) -> "Mat":
        c = parse_scalar(c)
        return Mat(self.rows, self.cols, (c * a for a in self._data))

    def __pow__(self, k: int) -> "Mat":
        if self.rows != self.cols:
            raise DimensionError("matrix power needs a square matrix")
        out = Mat.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"Mat({self.rows}x{self.cols}, {self.to_strings()})"


def vstack(*mats: Mat, cols: int | None = None) -> Mat:
    mats = [m for m in mats]
    if cols is None:
        cols = mats[0].cols if mats else 0
    if any(m.cols != cols for m in mats):
        raise DimensionError("vstack: column counts differ")
    return Mat(sum(m.rows for m in mats), cols, (e for m in mats for e in m.entries))


def hstack(*mats: Mat, rows: int | None = None) -> Mat:
    if rows is None:
        rows = mats[0].rows if mats else 0
    return vstack(*(m.T for m in mats), cols=rows).T


# ---------------------------------------------------------------------------
# elementary operations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ElemOp:
    """One elementary operation.

    ``kind`` is ``"swap"`` (exchange i and j), ``"scale"`` (line i *= c) or
    ``"add"`` (line i += c * line j); ``axis`` is ``"row"`` or ``"col"``.
    """

    kind: str
    i: int
    j: int = -1
    c: Fraction = Fraction(1)
    axis: str = "row"

    def to_json(self) -> dict:
        out = {"op": self.kind, "axis": self.axis, "i": self.i}
        if self.kind != "scale":
            out["j"] = self.j
        if self.kind != "swap":
            out["c"] = format_scalar(self.c)
        return out


ElemOpLog = list  # list[ElemOp], in application order


def _apply_row_op(rows: list[list[Fraction]], op: ElemOp) -> None:
    if op.kind == "swap":
        rows[op.i], rows[op.j] = rows[op.j], rows[op.i]
    elif op.kind == "scale":
        rows[op.i] = [op.c * x for x in rows[op.i]]
    elif op.kind == "add":
        src = rows[op.j]
        rows[op.i] = [x + op.c * y for x, y in zip(rows[op.i], src)]
    else:
        raise ValueError(f"unknown elementary operation {op.kind!r}")


def replay(M: Mat, log: Sequence[ElemOp]) -> Mat:
    """Apply a logged sequence of elementary operations to ``M``."""
    rows = M.to_rows()
    for op in log:
        if op.axis == "row":
            _apply_row_op(rows, op)
        else:
            cols = [list(c) for c in zip(*rows)] if rows else []
            _apply_row_op(cols, op)
            rows = [list(r) for r in zip(*cols)] if cols else [[] for _ in rows]
    return Mat.from_rows(rows, cols=M.cols)


def _eliminate(rows: list[list[Fraction]], ncols: int, *, reduced: bool = True,
               normalize: bool = True, col_order: Sequence[int] | None = None):
    """In-place Gauss(-Jordan) elimination on a list of rows.

    Returns ``(log, pivots)`` with row-axis operations. ``col_order`` restricts
    and orders the columns that may carry pivots.
    """
    log: list[ElemOp] = []
    pivots: list[tuple[int, int]] = []
    r = 0
    n = len(rows)
    for c in (range(ncols) if col_order is None else col_order):
        if r == n:
            break
        p = next((i for i in range(r, n) if rows[i][c]), None)
        if p is None:
            continue
        if p != r:
            op = ElemOp("swap", r, p)
            _apply_row_op(rows, op)
            log.append(op)
        if normalize and rows[r][c] != 1:
            op = ElemOp("scale", r, c=1 / rows[r][c])
            _apply_row_op(rows, op)
            log.append(op)
        piv = rows[r][c]
        targets = range(n) if reduced else range(r + 1, n)
        for i in targets:
            if i != r and rows[i][c]:
                op = ElemOp("add", i, r, -rows[i][c] / piv)
                _apply_row_op(rows, op)
                log.append(op)
        pivots.append((r, c))
        r += 1
    return log, pivots


def rref(M: Mat, axis: str = ROWS) -> tuple[Mat, list[ElemOp], list[tuple[int, int]]]:
    """Reduced echelon form along ``axis`` with the log of operations used.

    With ``axis="columns"`` the column-reduced form is returned, the log holds
    column operations and pivots are reported as ``(row, col)`` of the result.
    """
    if axis == ROWS:
        rows = M.to_rows()
        log, pivots = _eliminate(rows, M.cols)
        return Mat.from_rows(rows, cols=M.cols), log, pivots
    if axis == COLUMNS:
        reduced, log, pivots = rref(M.T, ROWS)
        log = [ElemOp(op.kind, op.i, op.j, op.c, "col") for op in log]
        return reduced.T, log, [(c, r) for r, c in pivots]
    raise ValueError(f"axis must be {ROWS!r} or {COLUMNS!r}, got {axis!r}")


def rank(M: Mat) -> int:
    rows = M.to_rows()
    _, pivots = _eliminate(rows, M.cols, reduced=False, normalize=False)
    return len(pivots)


def independent_rows(M: Mat) -> list[int]:
    """Indices of the first linearly independent rows, scanning top to bottom."""
    return [c for _, c in rref(M.T)[2]]


def independent_columns(M: Mat) -> list[int]:
    """Indices of the first linearly independent columns, scanning left to right."""
    return [c for _, c in rref(M)[2]]


def row_space_contains(M: Mat, v) -> bool:
    v = v if isinstance(v, Mat) else Mat(1, len(v), v)
    if v.rows != 1 or v.cols != M.cols:
        raise DimensionError(f"vector of length {v.cols} tested against {M.cols} columns")
    return rank(vstack(M, v)) == rank(M)


def column_space_contains(M: Mat, v) -> bool:
    v = v if isinstance(v, Mat) else Mat(len(v), 1, v)
    return row_space_contains(M.T, v.T)


def null_space(M: Mat) -> Mat:
    """Basis of ``{x : M x = 0}`` as the columns of an ``M.cols x k`` matrix."""
    R, _, pivots = rref(M)
    pivot_cols = [c for _, c in pivots]
    free = [c for c in range(M.cols) if c not in set(pivot_cols)]
    basis = []
    for f in free:
        x = [Fraction(0)] * M.cols
        x[f] = Fraction(1)
        for r, c in pivots:
            x[c] = -R[r, f]
        basis.append(x)
    return Mat.from_columns(basis, rows=M.cols)


def invert(M: Mat) -> Mat:
    if M.rows != M.cols:
        raise DimensionError(f"cannot invert a {M.rows}x{M.cols} matrix")
    n = M.rows
    aug = [list(M.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    _, pivots = _eliminate(aug, 2 * n, col_order=range(n))
    if len(pivots) < n:
        raise SingularMatrix(f"matrix has rank {len(pivots)} < {n}")
    return Mat.from_rows([r[n:] for r in aug], cols=n)


def complete_to_full_rank(M: Mat, axis: str = ROWS, candidates: Sequence[int] | None = None) -> Mat:
    """Versors to append to ``M`` so the stacked matrix is square and invertible.

    Standard-basis vectors are tried in increasing index order (or in the
    order of ``candidates``) and kept whenever they raise the rank. Only the
    appended rows (resp. columns) are returned.
    """
    if axis == COLUMNS:
        return complete_to_full_rank(M.T, ROWS, candidates).T
    if axis != ROWS:
        raise ValueError(f"axis must be {ROWS!r} or {COLUMNS!r}, got {axis!r}")
    n = M.cols
    # keep the running stack in echelon form so each test is a single reduction
    basis = M.to_rows()
    _eliminate(basis, n, reduced=False, normalize=False)
    basis = [r for r in basis if any(r)]
    if len(basis) != M.rows:
        raise DimensionError("complete_to_full_rank needs independent rows")
    added = []
    for i in (range(n) if candidates is None else candidates):
        if len(basis) == n:
            break
        trial = basis + [[Fraction(int(j == i)) for j in range(n)]]
        _eliminate(trial, n, reduced=False, normalize=False)
        trial = [r for r in trial if any(r)]
        if len(trial) > len(basis):
            basis = trial
            added.append(i)
    if len(basis) != n:
        raise DimensionError("candidate versors cannot complete the matrix")
    return Mat(len(added), n, (int(j == i) for i in added for j in range(n)))
