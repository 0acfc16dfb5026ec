"""The network triple (A, B, C), its graphs, walk enumeration and file I/O."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path as FsPath
from typing import Sequence

from .exceptions import ParseError, ValidationError
from .linalg import Mat, format_scalar, parse_scalar


@dataclass(frozen=True)
class NetworkSystem:
    """Validated triple ``x' = A x + B u, y = C x`` seen as a network.

    Node indices are 0-based internally; ``labels`` carries the names used in
    every report (``v1..vN`` unless the input says otherwise).
    """

    A: Mat
    B: Mat
    C: Mat
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        n = self.A.rows
        if self.A.cols != n:
            raise ValidationError(f"A must be square, got {self.A.rows}x{self.A.cols}")
        if self.B.rows != n:
            raise ValidationError(f"B must have {n} rows, got {self.B.rows}")
        if self.C.cols != n:
            raise ValidationError(f"C must have {n} columns, got {self.C.cols}")
        for j in range(self.B.cols):
            nz = [i for i, x in enumerate(self.B.col(j)) if x]
            if len(nz) != 1:
                raise ValidationError(
                    f"B column {j + 1} must have exactly one nonzero entry, found {len(nz)}"
                )
        for i in range(self.C.rows):
            row = self.C.row(i)
            nz = [j for j, x in enumerate(row) if x]
            if len(nz) != 1 or row[nz[0]] != 1:
                raise ValidationError(f"C row {i + 1} is not a versor")
        labels = tuple(self.labels) or tuple(f"v{i + 1}" for i in range(n))
        if len(labels) != n:
            raise ValidationError(f"{len(labels)} labels given for {n} nodes")
        if len(set(labels)) != n:
            raise ValidationError("node labels must be unique")
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.A.rows

    @property
    def n_inputs(self) -> int:
        return self.B.cols

    @property
    def n_outputs(self) -> int:
        return self.C.rows

    @property
    def drivers(self) -> list[int]:
        return [next(i for i, x in enumerate(self.B.col(j)) if x) for j in range(self.B.cols)]

    @property
    def sensors(self) -> list[int]:
        return [next(j for j, x in enumerate(self.C.row(i)) if x) for i in range(self.C.rows)]

    def names(self, nodes) -> list[str]:
        return [self.labels[i] for i in sorted(nodes)]

    def fingerprint(self) -> str:
        return hashlib.sha256(dumps(self).encode()).hexdigest()[:16]

    @classmethod
    def from_arrays(cls, A, B=None, C=None, labels: Sequence[str] = ()) -> "NetworkSystem":
        A = A if isinstance(A, Mat) else Mat.from_rows(A)
        n = A.rows
        if B is None:
            B = Mat(n, 0)
        elif not isinstance(B, Mat):
            B = Mat.from_rows(B, cols=len(B[0]) if len(B) else 0)
        if C is None:
            C = Mat(0, n)
        elif not isinstance(C, Mat):
            C = Mat.from_rows(C, cols=n)
        return cls(A, B, C, tuple(labels))

    @classmethod
    def from_nodes(cls, A, drivers=(), sensors=(), gains=None, labels=()) -> "NetworkSystem":
        """Build B and C from 0-based driver/sensor node lists."""
        A = A if isinstance(A, Mat) else Mat.from_rows(A)
        n = A.rows
        gains = [1] * len(drivers) if gains is None else list(gains)
        B = Mat(n, len(drivers), (gains[j] if drivers[j] == i else 0
                                  for i in range(n) for j in range(len(drivers))))
        C = Mat(len(sensors), n, (int(s == j) for s in sensors for j in range(n)))
        return cls(A, B, C, tuple(labels))


# ---------------------------------------------------------------------------
# graphs and walks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Graph:
    """Weighted digraph of A. ``edges[(src, dst)]`` is the edge weight.

    In the network graph an entry a_ij != 0 is an edge j -> i; the transposed
    graph reverses every edge.
    """

    n: int
    edges: dict = field(hash=False)
    transposed: bool = False

    def successors(self, u: int):
        return [(v, w) for (s, v), w in self.edges.items() if s == u]

    def adjacency(self) -> list[list[bool]]:
        """``adj[i][j]`` is True when edge i -> j exists."""
        adj = [[False] * self.n for _ in range(self.n)]
        for (s, d) in self.edges:
            adj[s][d] = True
        return adj


def graph(sys: NetworkSystem, transposed: bool = False) -> Graph:
    A = sys.A
    edges = {}
    for i in range(sys.n):
        for j in range(sys.n):
            if A[i, j]:
                edges[(i, j) if transposed else (j, i)] = A[i, j]
    return Graph(sys.n, dict(sorted(edges.items())), transposed)


@dataclass(frozen=True)
class Path:
    """A walk: ``edges`` may revisit nodes and edges."""

    edges: tuple[tuple[int, int], ...]
    weight: Fraction

    @property
    def nodes(self) -> tuple[int, ...]:
        return (self.edges[0][0],) + tuple(d for _, d in self.edges) if self.edges else ()

    def __len__(self) -> int:
        return len(self.edges)


def paths_of_length(sys: NetworkSystem, source: int, target: int, k: int,
                    transposed: bool = False) -> list[Path]:
    """Every walk of exactly ``k`` edges from ``source`` to ``target``.

    Exponential in ``k``; meant for verification on small systems only.
    """
    if k < 1:
        raise ValueError("walk length must be at least 1")
    for node in (source, target):
        if not 0 <= node < sys.n:
            raise ValueError(f"node index {node} out of range")
    g = graph(sys, transposed)
    succ = {u: g.successors(u) for u in range(sys.n)}
    out = []

    def walk(u, trail, weight):
        if len(trail) == k:
            if u == target:
                out.append(Path(tuple(trail), weight))
            return
        for v, w in succ[u]:
            trail.append((u, v))
            walk(v, trail, weight * w)
            trail.pop()

    walk(source, [], Fraction(1))
    return out


def verify_path_identity(sys: NetworkSystem, sensor_row: int, node: int, k: int):
    """Compare ``(c_j A^k)_i`` with the summed weights of walks in the transposed graph.

    Returns ``(lhs, rhs, equal)``.
    """
    if not 0 <= sensor_row < sys.n_outputs:
        raise ValueError(f"sensor row {sensor_row} out of range")
    if not 1 <= k <= sys.n - 1:
        raise ValueError(f"k must lie in 1..{sys.n - 1}")
    c = sys.C.take(rows=[sensor_row])
    lhs = (c @ sys.A ** k)[0, node]
    sensor = sys.sensors[sensor_row]
    rhs = sum((p.weight for p in paths_of_length(sys, sensor, node, k, transposed=True)),
              Fraction(0))
    return lhs, rhs, lhs == rhs


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

def _index(value, n: int, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{what} must be an integer node index, got {value!r}")
    if not 1 <= value <= n:
        raise ValidationError(f"{what} {value} outside 1..{n}")
    return value - 1


def _parse_A(block, n: int) -> Mat:
    if not isinstance(block, dict) or len(block) != 1:
        raise ParseError('"A" must be an object with exactly one of "dense" or "triplets"')
    if "dense" in block:
        rows = block["dense"]
        if not isinstance(rows, list) or len(rows) != n:
            raise ValidationError(f'"A.dense" must have {n} rows')
        for i, r in enumerate(rows):
            if not isinstance(r, list) or len(r) != n:
                raise ValidationError(f'"A.dense" row {i + 1} must have {n} entries')
        return Mat(n, n, (parse_scalar(x) for r in rows for x in r))
    if "triplets" in block:
        data = [[Fraction(0)] * n for _ in range(n)]
        for t in block["triplets"]:
            if not isinstance(t, list) or len(t) != 3:
                raise ParseError(f"triplet {t!r} must be [i, j, value]")
            i = _index(t[0], n, "triplet row")
            j = _index(t[1], n, "triplet column")
            data[i][j] = parse_scalar(t[2])
        return Mat.from_rows(data, cols=n)
    raise ParseError('"A" must contain "dense" or "triplets"')


def parse_system(doc: dict) -> NetworkSystem:
    """Build a system from an already-decoded JSON document."""
    if not isinstance(doc, dict):
        raise ParseError("system document must be a JSON object")
    unknown = set(doc) - {"n", "labels", "A", "B", "C"}
    if unknown:
        raise ParseError(f"unknown keys: {sorted(unknown)}")
    n = doc.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError('"n" must be a positive integer')
    if "A" not in doc:
        raise ParseError('missing "A"')
    A = _parse_A(doc["A"], n)

    drivers, gains = [], []
    for k, d in enumerate((doc.get("B") or {}).get("drivers", [])):
        if not isinstance(d, dict) or "node" not in d:
            raise ParseError(f"driver {k + 1} must be an object with a \"node\" key")
        drivers.append(_index(d["node"], n, f"driver {k + 1} node"))
        g = parse_scalar(d.get("gain", "1"))
        if g == 0:
            raise ValidationError(f"B column {k + 1} has no nonzero entry (gain 0)")
        gains.append(g)
    sensors = [_index(s, n, f"sensor {k + 1}")
               for k, s in enumerate((doc.get("C") or {}).get("sensors", []))]

    labels = doc.get("labels") or ()
    if not all(isinstance(x, str) for x in labels):
        raise ParseError('"labels" must be a list of strings')
    return NetworkSystem.from_nodes(A, drivers, sensors, gains, labels)


def loads(text: str) -> NetworkSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return parse_system(doc)


def load_system(source) -> NetworkSystem:
    """Load from a path, an open file, a JSON string or a decoded dict."""
    if isinstance(source, dict):
        return parse_system(source)
    if hasattr(source, "read"):
        return loads(source.read())
    if isinstance(source, FsPath) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        try:
            text = FsPath(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read {source}: {exc}") from exc
        return loads(text)
    return loads(source)


def to_document(sys: NetworkSystem) -> dict:
    gains = [sys.B[d, j] for j, d in enumerate(sys.drivers)]
    return {
        "n": sys.n,
        "labels": list(sys.labels),
        "A": {"dense": sys.A.to_strings()},
        "B": {"drivers": [{"node": d + 1, "gain": format_scalar(g)}
                          for d, g in zip(sys.drivers, gains)]},
        "C": {"sensors": [s + 1 for s in sys.sensors]},
    }


def dumps(sys: NetworkSystem) -> str:
    return json.dumps(to_document(sys), separators=(",", ":"))
