"""K-theory of graph C*-algebras.

Convention: a vertex's projection is the sum of the range projections of the
edges *entering* it, so for every regular vertex v

    [p_v] = sum over edges w -> v of [p_w].

A vertex is regular when it receives at least one and finitely many edges.
Vertices flagged in ``infinite_emitters`` (the vertex carrying infinitely many
parallel edges) and vertices receiving nothing impose no relation. K_0 is the
cokernel and K_1 the kernel of the matrix whose column for a regular vertex v
is sum_w mult(w -> v) e_w - e_v; the unit is the class of (1, ..., 1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .exceptions import SpecValidationError
from .integer_linalg import FgAbGroup, IntMatrix, cokernel, kernel

__all__ = ["DirectedGraph", "GraphKTheory", "graph_k_theory", "TableRow", "builtin_table"]


@dataclass(frozen=True)
class DirectedGraph:
    vertex_count: int
    # (source, target) -> multiplicity; ignored for edges at infinite vertices
    edges: Mapping[tuple[int, int], int] = field(default_factory=dict)
    infinite_emitters: frozenset[int] = frozenset()

    def __post_init__(self):
        if self.vertex_count < 1:
            raise SpecValidationError("a graph needs at least one vertex")
        object.__setattr__(self, "infinite_emitters", frozenset(self.infinite_emitters))
        edges = {}
        for (v, w), m in dict(self.edges).items():
            for x in (v, w):
                if not 0 <= x < self.vertex_count:
                    raise SpecValidationError(f"edge endpoint {x} is not a vertex")
            if int(m) < 1:
                raise SpecValidationError("edge multiplicities must be at least 1")
            edges[int(v), int(w)] = int(m)
        object.__setattr__(self, "edges", edges)
        for v in self.infinite_emitters:
            if not 0 <= v < self.vertex_count:
                raise SpecValidationError(f"infinite emitter {v} is not a vertex")

    def in_degree(self, v: int) -> int:
        return sum(m for (_, w), m in self.edges.items() if w == v)

    def regular_vertices(self) -> list[int]:
        return [v for v in range(self.vertex_count)
                if v not in self.infinite_emitters and self.in_degree(v) > 0]

    def relation_matrix(self) -> IntMatrix:
        regular = self.regular_vertices()
        rows = [[0] * len(regular) for _ in range(self.vertex_count)]
        for j, v in enumerate(regular):
            for (w, target), m in self.edges.items():
                if target == v:
                    rows[w][j] += m
            rows[v][j] -= 1
        return IntMatrix.from_rows(rows, cols=len(regular),
                                   row_labels=tuple(range(self.vertex_count)), col_labels=tuple(regular))

    def to_json(self) -> dict:
        return {"vertices": self.vertex_count,
                "edges": [[v, w, m] for (v, w), m in sorted(self.edges.items())],
                "infinite_emitters": sorted(self.infinite_emitters)}

    @classmethod
    def from_json(cls, data: Mapping) -> "DirectedGraph":
        try:
            edges: dict[tuple[int, int], int] = {}
            for item in data.get("edges", ()):
                v, w = int(item[0]), int(item[1])
                m = int(item[2]) if len(item) > 2 else 1
                edges[v, w] = edges.get((v, w), 0) + m
            return cls(int(data["vertices"]), edges, frozenset(int(v) for v in data.get("infinite_emitters", ())))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            if isinstance(exc, SpecValidationError):
                raise
            raise SpecValidationError(f"malformed graph: {exc}") from None


@dataclass(frozen=True)
class GraphKTheory:
    k0: FgAbGroup
    k1: FgAbGroup
    matrix: IntMatrix

    def to_json(self) -> dict:
        return {"k0": self.k0.to_json(), "k1": self.k1.to_json(), "matrix": self.matrix.tolist()}


def graph_k_theory(g: DirectedGraph) -> GraphKTheory:
    m = g.relation_matrix()
    k0 = cokernel(m, [1] * g.vertex_count)
    k1_rank, _ = kernel(m)
    return GraphKTheory(k0, FgAbGroup(k1_rank), m)


@dataclass(frozen=True)
class TableRow:
    region: str
    algebra: str
    case: str
    graph: DirectedGraph


def builtin_table() -> list[TableRow]:
    """The four graphs of the quadratic family, one per case, keyed by parameter region."""
    o2 = DirectedGraph(1, {(0, 0): 2})
    q2 = DirectedGraph(2, {(0, 0): 2, (1, 1): 2, (0, 1): 1, (1, 0): 1})
    oinf = DirectedGraph(1, {(0, 0): 1}, frozenset({0}))
    q2inf = DirectedGraph(3, {
        (0, 0): 2, (0, 1): 1, (0, 2): 1,
        (1, 1): 1, (1, 0): 1, (1, 2): 1,
        (2, 2): 1, (2, 1): 1,
    }, frozenset({1}))
    return [
        TableRow("outside_M", "O2", "Case0", o2),
        TableRow("hyperbolic_or_parabolic", "Q2", "Case1", q2),
        TableRow("no_interior", "Oinf", "Case3", oinf),
        TableRow("siegel", "Q2inf", "Case2", q2inf),
    ]
