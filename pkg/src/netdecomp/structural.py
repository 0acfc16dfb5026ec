"""Structured (free/fixed) matrices, generic rank and the genericity probe."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .linalg import Mat
from .system import NetworkSystem

DRAW_LOW, DRAW_HIGH = 1, 10**6


@dataclass(frozen=True)
class StructurePattern:
    """Boolean mask; ``free[i][j]`` is True for a free (indeterminate) entry."""

    rows: int
    cols: int
    free: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        if len(self.free) != self.rows or any(len(r) != self.cols for r in self.free):
            raise ValueError("mask shape does not match rows x cols")

    @classmethod
    def from_mask(cls, mask) -> "StructurePattern":
        mask = tuple(tuple(bool(x) for x in r) for r in mask)
        return cls(len(mask), len(mask[0]) if mask else 0, mask)

    @property
    def n_free(self) -> int:
        return sum(map(sum, self.free))

    def __le__(self, other: "StructurePattern") -> bool:
        """Free-entry containment."""
        return all(not a or b for ra, rb in zip(self.free, other.free) for a, b in zip(ra, rb))


def pattern_of(M: Mat) -> StructurePattern:
    return StructurePattern(M.rows, M.cols,
                            tuple(tuple(bool(x) for x in M.row(i)) for i in range(M.rows)))


def generic_rank(p: StructurePattern) -> int:
    """Maximum number of free entries with no two in a row or column."""
    if p.rows == 0 or p.cols == 0:
        return 0
    graph = csr_matrix(np.array(p.free, dtype=np.int8))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return int((match >= 0).sum())


def power_pattern(p: StructurePattern, k: int) -> StructurePattern:
    """Structural pattern of A^k: entry (i, j) is free iff some length-k walk links them.

    Numeric cancellation is ignored, so this is a superset of ``pattern_of(A**k)``.
    """
    if p.rows != p.cols:
        raise ValueError("power_pattern needs a square pattern")
    if k < 1:
        raise ValueError("k must be at least 1")
    base = np.array(p.free, dtype=bool).astype(np.int64)
    acc = base.copy()
    for _ in range(k - 1):
        acc = ((acc @ base) > 0).astype(np.int64)
    return StructurePattern.from_mask(acc > 0)


# ---------------------------------------------------------------------------
# genericity probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GenericityReport:
    samples: int
    seed: int
    agreement_fraction: Fraction
    baseline_set: tuple[str, ...]
    disagreeing_samples: tuple[tuple[int, tuple[str, ...]], ...]

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "agreement_fraction": str(self.agreement_fraction),
            "baseline_set": list(self.baseline_set),
            "disagreeing_samples": [{"sample": i, "set": list(s)}
                                    for i, s in self.disagreeing_samples],
        }


def _redraw(M: Mat, rng: np.random.Generator) -> Mat:
    out = []
    for x in M.entries:
        if x:
            v = int(rng.integers(DRAW_LOW, DRAW_HIGH, endpoint=True))
            out.append(-v if x < 0 else v)
        else:
            out.append(0)
    return Mat(M.rows, M.cols, out)


def resample(sys: NetworkSystem, rng: np.random.Generator) -> NetworkSystem:
    """Same structure as ``sys`` with every nonzero of A and B redrawn."""
    return NetworkSystem(_redraw(sys.A, rng), _redraw(sys.B, rng), sys.C, sys.labels)


def genericity_probe(sys: NetworkSystem, samples: int, seed: int = 0) -> GenericityReport:
    """Resample the free entries and count how often the observable set survives."""
    from .observability import observe

    if samples < 1:
        raise ValueError("samples must be at least 1")
    baseline = observe(sys).observable_set
    agree = 0
    disagreeing = []
    for s in range(samples):
        rng = np.random.default_rng([seed, s])
        got = observe(resample(sys, rng)).observable_set
        if got == baseline:
            agree += 1
        else:
            disagreeing.append((s, tuple(sys.names(got))))
    return GenericityReport(samples, seed, Fraction(agree, samples),
                            tuple(sys.names(baseline)), tuple(disagreeing))
