"""Node-level controllability: the core set C1, its completions C2 and perturbed nodes.

Rows of K stay attached to nodes throughout; only column operations and a
row bookkeeping permutation (C1 | C2 | rest) are used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .exceptions import BudgetExceeded, InvalidChoice, SingularMatrix
from .linalg import (Mat, column_space_contains, complete_to_full_rank, hstack,
                     independent_columns, invert, rank)
from .system import NetworkSystem, graph

DEFAULT_LIMIT = 64
DEFAULT_ORACLE_CAP = 100_000


@dataclass(frozen=True)
class ControllableChoice:
    C2: frozenset
    C: frozenset
    P: frozenset
    rest: tuple[int, ...]      # row order of W
    W: Mat
    T: Mat                     # rows in original node order
    T_inv: Mat                 # columns in original node order
    order: tuple[int, ...]     # C1 + C2 + rest; T.take(rows=order) has the block form

    def to_json(self, labels, emit_T: bool = False) -> dict:
        out = {
            "C2": [labels[i] for i in sorted(self.C2)],
            "C": [labels[i] for i in sorted(self.C)],
            "P": [labels[i] for i in sorted(self.P)],
            "W": {"rows": [labels[i] for i in self.rest],
                  "cols": [labels[i] for i in sorted(self.C2)],
                  "values": self.W.to_strings()},
        }
        if emit_T:
            out["T"] = self.T.to_strings()
            out["T_inv"] = self.T_inv.to_strings()
        return out


@dataclass(frozen=True)
class ControllabilityResult:
    K: Mat
    q: int
    h: int
    C1: frozenset
    basis: Mat          # N x q: versors of C1, then the R columns
    choices: tuple[ControllableChoice, ...]
    downstream: frozenset = frozenset()
    fingerprint: str = ""
    labels: tuple[str, ...] = field(default=(), repr=False)

    @property
    def R(self) -> Mat:
        return self.basis.take(cols=range(self.h, self.q))

    def to_json(self, emit_T: bool = False) -> dict:
        lab = self.labels
        return {
            "q": self.q,
            "h": self.h,
            "C1": [lab[i] for i in sorted(self.C1)],
            "downstream": [lab[i] for i in sorted(self.downstream)],
            "n_choices": len(self.choices),
            "choices": [c.to_json(lab, emit_T) for c in self.choices],
        }


def build_K(sys: NetworkSystem) -> Mat:
    """``[B, AB, ..., A^(N-1) B]``."""
    blocks = []
    block = sys.B
    for _ in range(sys.n):
        blocks.append(block)
        block = sys.A @ block
    return hstack(*blocks, rows=sys.n)


def reduce_K(K: Mat) -> tuple[Mat, int, frozenset]:
    """Column basis of range(K) in ``[I_h 0; 0 R]`` form (rows kept in node order).

    C1 collects the nodes whose versor lies in range(K). R is taken from the
    first independent columns of K with the C1 rows cleared, which keeps it
    inside range(K).
    """
    n = K.rows
    cols = independent_columns(K)
    B0 = K.take(cols=cols)
    C1 = frozenset(i for i in range(n)
                   if cols and column_space_contains(B0, [int(j == i) for j in range(n)]))
    cleared = Mat(n, B0.cols, (0 if i in C1 else B0[i, j]
                                for i in range(n) for j in range(B0.cols)))
    R = cleared.take(cols=independent_columns(cleared))
    versors = Mat(n, len(C1), (int(i == c) for i in range(n) for c in sorted(C1)))
    basis = hstack(versors, R, rows=n)
    return basis, len(C1), C1


def _R_rows(basis: Mat, h: int, rows) -> Mat:
    return basis.take(rows=rows, cols=range(h, basis.cols))


def enumerate_C2(basis: Mat, C1, limit: int | None = DEFAULT_LIMIT) -> list[frozenset]:
    """Node sets S outside C1 with |S| = q - h and R[S] invertible, lexicographic."""
    h = len(C1)
    m = basis.cols - h
    out = []
    others = [i for i in range(basis.rows) if i not in C1]
    for S in combinations(others, m):
        if limit is not None and len(out) >= limit:
            break
        if rank(_R_rows(basis, h, S)) == m:
            out.append(frozenset(S))
    return out


def perturbed_map(basis: Mat, C1, C2) -> tuple[frozenset, Mat, tuple[int, ...]]:
    """Forced-value map ``W = R32 R22^-1`` and the perturbed nodes (nonzero W rows).

    Returns ``(P, W, rest)``; row r of W belongs to node ``rest[r]``.
    """
    h = len(C1)
    c2 = sorted(C2)
    rest = tuple(i for i in range(basis.rows) if i not in C1 and i not in C2)
    try:
        R22_inv = invert(_R_rows(basis, h, c2))
    except SingularMatrix as exc:
        raise InvalidChoice(f"R22 on rows {c2} is singular") from exc
    W = _R_rows(basis, h, rest) @ R22_inv
    P = frozenset(i for r, i in enumerate(rest) if any(W.row(r)))
    return P, W, rest


def build_T_controllability(basis: Mat, C1, C2) -> tuple[Mat, Mat, tuple[int, ...]]:
    """``T = [I 0 0; 0 R22 0; 0 R32 T33]`` (up to row order) and its exact inverse.

    T33 is completed from versors of the rest nodes. Returns ``(T, T_inv, order)``.
    """
    n = basis.rows
    rest = [i for i in range(n) if i not in C1 and i not in C2]
    if len(C2) != basis.cols - len(C1):
        raise InvalidChoice(f"C2 must have {basis.cols - len(C1)} nodes, got {len(C2)}")
    completion = complete_to_full_rank(basis, axis="columns", candidates=rest)
    T = hstack(basis, completion, rows=n)
    T_inv = invert(T)
    order = tuple(sorted(C1)) + tuple(sorted(C2)) + tuple(rest)
    return T, T_inv, order


def controllable_oracle(K: Mat, size_cap: int = DEFAULT_ORACLE_CAP) -> list[frozenset]:
    """Brute force: every S with |S| = rank(K) whose rows of K have full rank."""
    n = K.rows
    q = rank(K)
    if comb(n, q) > size_cap:
        raise BudgetExceeded(f"C({n}, {q}) = {comb(n, q)} subsets exceeds cap {size_cap}")
    return [frozenset(S) for S in combinations(range(n), q)
            if rank(K.take(rows=S)) == q]


def downstream_nodes(sys: NetworkSystem) -> frozenset:
    """Nodes reachable from some driver in the network graph (drivers included)."""
    g = graph(sys)
    seen = set(sys.drivers)
    stack = list(seen)
    while stack:
        u = stack.pop()
        for v, _ in g.successors(u):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return frozenset(seen)


def make_choice(basis: Mat, C1, C2) -> ControllableChoice:
    P, W, rest = perturbed_map(basis, C1, C2)
    T, T_inv, order = build_T_controllability(basis, C1, C2)
    return ControllableChoice(frozenset(C2), frozenset(C1) | frozenset(C2), P, rest, W,
                              T, T_inv, order)


def control(sys: NetworkSystem, limit: int | None = DEFAULT_LIMIT) -> ControllabilityResult:
    """Full controllability analysis; at most ``limit`` completions (None for all)."""
    K = build_K(sys)
    basis, h, C1 = reduce_K(K)
    choices = tuple(make_choice(basis, C1, S) for S in enumerate_C2(basis, C1, limit))
    return ControllabilityResult(K, basis.cols, h, C1, basis, choices,
                                 downstream_nodes(sys), sys.fingerprint(), sys.labels)


def complete_reachable(K: Mat, C, values) -> list[Fraction]:
    """Unique point of range(K) taking ``values`` on the nodes ``C`` (sorted order).

    Solves with a plain column basis of K, independent of the R/W machinery.
    """
    cols = independent_columns(K)
    B0 = K.take(cols=cols)
    c = sorted(C)
    alpha = invert(B0.take(rows=c)) @ Mat(len(c), 1, values)
    return list((B0 @ alpha).col(0))
