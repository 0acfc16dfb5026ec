"""Node-level observability.

The observable node set is the set of nodes v_i whose versor e_i lies in the
row space of the observability matrix. It is computed two ways: by the
iterative block reduction in :func:`algorithm1`, and by the direct
membership test in :func:`observable_oracle`. :func:`observe` runs both and
refuses to return if they disagree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exceptions import InvariantViolation
from .linalg import (ElemOp, Mat, _apply_row_op, _eliminate, complete_to_full_rank,
                     independent_rows, invert, row_space_contains, vstack)
from .system import NetworkSystem


@dataclass(frozen=True)
class IterationRecord:
    k: int
    q_k: int
    f_k: int
    row_ops: tuple[ElemOp, ...]
    h_columns: tuple[int, ...]       # columns kept as the next H block
    dropped_columns: tuple[int, ...]  # H columns moved to the F side

    def to_json(self) -> dict:
        return {"k": self.k, "q_k": self.q_k, "f_k": self.f_k}


@dataclass(frozen=True)
class ObservabilityResult:
    O: Mat
    q: int
    Q: Mat
    h_columns: tuple[int, ...]
    observable_set: frozenset
    trace: tuple[IterationRecord, ...]
    Qbar: Mat
    column_permutation: tuple[int, ...]
    T: Mat
    fingerprint: str = ""
    labels: tuple[str, ...] = field(default=(), repr=False)

    def to_json(self, emit_T: bool = False) -> dict:
        out = {
            "q": self.q,
            "n_observable": len(self.observable_set),
            "observable": [self.labels[i] for i in sorted(self.observable_set)],
            "h_columns": [self.labels[i] for i in self.h_columns],
            "trace": [r.to_json() for r in self.trace],
        }
        if emit_T:
            out["T"] = self.T.to_strings()
        return out


def build_O(sys: NetworkSystem) -> Mat:
    """Stack ``C, CA, ..., CA^(N-1)``."""
    blocks = []
    block = sys.C
    for _ in range(sys.n):
        blocks.append(block)
        block = block @ sys.A
    return vstack(*blocks, cols=sys.n)


def extract_Q(O: Mat) -> tuple[Mat, tuple[int, ...]]:
    """First independent rows of ``O`` and the first independent columns of that block."""
    Q = O.take(rows=independent_rows(O))
    h = tuple(c for _, c in _eliminate(Q.to_rows(), Q.cols, reduced=False,
                                       normalize=False)[1])
    return Q, h


def _select_columns(rows, candidates, count):
    """Greedy left-to-right choice of ``count`` columns giving an invertible block."""
    chosen = []
    basis: list[list[Fraction]] = []
    for c in candidates:
        if len(chosen) == count:
            break
        trial = basis + [[r[c] for r in rows]]
        _eliminate(trial, len(rows), reduced=False, normalize=False)
        trial = [t for t in trial if any(t)]
        if len(trial) > len(basis):
            basis = trial
            chosen.append(c)
    return chosen


def algorithm1(Q: Mat, h_columns):
    """Iterative block reduction isolating the observable nodes.

    Each pass zeroes the F block in all but ``f_k`` rows by bottom-up
    elimination, freezes those ``f_k`` rows, then picks (lowest index first)
    a square invertible block among the remaining H columns; the H columns
    left over join the F side. The loop stops when F vanishes on the live
    rows and the surviving H columns are the observable nodes.

    Returns ``(observable_set, trace, Qbar, column_permutation)``.
    """
    n = Q.cols
    live = Q.to_rows()
    h_cols = sorted(h_columns)
    if len(h_cols) != len(live):
        raise InvariantViolation(f"H must be square: {len(live)} rows, {len(h_cols)} columns")
    initial_f = [c for c in range(n) if c not in set(h_cols)]
    frozen_blocks = []
    dropped_groups = []
    trace = []
    k = 1
    while True:
        f_cols = [c for c in range(n) if c not in set(h_cols)]
        if not any(r[c] for r in live for c in f_cols):
            break
        q_k = len(live)
        # bottom-up elimination on F: work on the reversed row list
        rev = live[::-1]
        F = [[r[c] for c in f_cols] for r in rev]
        log, pivots = _eliminate(F, len(f_cols), normalize=False)
        f_k = len(pivots)
        for op in log:
            _apply_row_op(rev, op)
        live = rev[::-1]
        ops = tuple(ElemOp(op.kind, q_k - 1 - op.i, q_k - 1 - op.j if op.j >= 0 else -1,
                           op.c) for op in log)
        top, bottom = live[:q_k - f_k], live[q_k - f_k:]
        if any(r[c] for r in top for c in f_cols):
            raise InvariantViolation(f"iteration {k}: F block not cleared on the top rows")
        keep = _select_columns(top, h_cols, q_k - f_k)
        if len(keep) != q_k - f_k:
            raise InvariantViolation(
                f"iteration {k}: no invertible H block of size {q_k - f_k}")
        drop = [c for c in h_cols if c not in set(keep)]
        trace.append(IterationRecord(k, q_k, f_k, ops, tuple(keep), tuple(drop)))
        frozen_blocks.append(bottom)
        dropped_groups.append(drop)
        live, h_cols = top, keep
        k += 1

    observable = frozenset(h_cols)
    qbar_rows = live + [r for block in reversed(frozen_blocks) for r in block]
    perm = list(h_cols) + [c for g in reversed(dropped_groups) for c in g] + initial_f
    return observable, tuple(trace), Mat.from_rows(qbar_rows, cols=n), tuple(perm)


def observable_oracle(sys: NetworkSystem, O: Mat | None = None) -> frozenset:
    """Nodes whose versor lies in the row space of O (orthogonal to its kernel)."""
    O = build_O(sys) if O is None else O
    if O.rows == 0:
        return frozenset()
    return frozenset(i for i in range(sys.n) if row_space_contains(O, Mat.versor(sys.n, i)))


def build_T_observability(Qbar: Mat, observable) -> Mat:
    """Invertible T whose first rows are the versors of the observable nodes.

    The top block of ``Qbar`` is mapped to those versors, the observable
    coordinates are cleared from the remaining rows, and the result is
    completed with versors to a square invertible matrix.
    """
    n = Qbar.cols
    obs = sorted(observable)
    p = len(obs)
    top = Qbar.take(rows=range(p), cols=obs)
    rows = (invert(top) @ Qbar.take(rows=range(p))).to_rows() if p else []
    for i, c in enumerate(obs):
        if [j for j, x in enumerate(rows[i]) if x] != [c] or rows[i][c] != 1:
            raise InvariantViolation("top block of Qbar is not supported on observable columns")
    for r in range(p, Qbar.rows):
        row = list(Qbar.row(r))
        for c in obs:
            row[c] = Fraction(0)
        rows.append(row)
    head = Mat.from_rows(rows, cols=n)
    return vstack(head, complete_to_full_rank(head), cols=n)


def observe(sys: NetworkSystem, check: bool = True) -> ObservabilityResult:
    """Full observability analysis of ``sys``."""
    O = build_O(sys)
    Q, h = extract_Q(O)
    observable, trace, Qbar, perm = algorithm1(Q, h)
    if check:
        oracle = observable_oracle(sys, O)
        if oracle != observable:
            raise InvariantViolation(
                f"algorithm1 gave {sys.names(observable)}, oracle gave {sys.names(oracle)}")
    q = Q.rows
    if sum(r.f_k for r in trace) != q - len(observable):
        raise InvariantViolation("sum of f_k differs from q - |O|")
    T = build_T_observability(Qbar, observable)
    return ObservabilityResult(O, q, Q, h, observable, trace, Qbar, perm, T,
                               sys.fingerprint(), sys.labels)
