"""Edge-weighted digraphs over F_q and an exact isomorphism solver.

The solver is colour refinement plus individualization with backtracking.
Both graphs are refined jointly: new colours are indices into the sorted
list of signatures seen in either graph, so a colour means the same thing
on both sides and can be compared directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .code import Permutation
from .field import FieldSpec
from .matrix import MatrixFq, ShapeError


@dataclass(frozen=True)
class WeightedDigraph:
    """adj[i][j] is the weight of the arc i -> j (self-loops allowed)."""

    adj: MatrixFq

    def __post_init__(self) -> None:
        if not self.adj.is_square():
            raise ShapeError("adjacency matrix must be square")

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence[int]]) -> WeightedDigraph:
        return cls(MatrixFq(field, rows))

    @property
    def n(self) -> int:
        return self.adj.rows

    @property
    def field(self) -> FieldSpec:
        return self.adj.field

    def permuted(self, pi: Permutation) -> WeightedDigraph:
        """P^T A P."""
        idx = pi.column_order()
        return WeightedDigraph(MatrixFq._wrap(self.field, self.adj.array[np.ix_(idx, idx)]))

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "n": self.n, "adj": self.adj.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> WeightedDigraph:
        field = FieldSpec.from_json(data["field"])
        adj = data["adj"]
        n = int(data.get("n", len(adj)))
        if len(adj) != n or any(len(r) != n for r in adj):
            raise ShapeError(f"adjacency is not {n}x{n}")
        return cls(MatrixFq(field, adj))


@dataclass(frozen=True)
class ColorRefinementState:
    colors: tuple[int, ...]
    stable: bool

    @property
    def num_classes(self) -> int:
        return len(set(self.colors))

    def histogram(self) -> list[int]:
        counts: dict[int, int] = {}
        for c in self.colors:
            counts[c] = counts.get(c, 0) + 1
        return sorted(counts.values())


def _signature(A: list[list[int]], colors: list[int], v: int) -> tuple:
    n = len(A)
    row = A[v]
    out_ms = sorted((row[u], colors[u]) for u in range(n) if u != v)
    in_ms = sorted((A[u][v], colors[u]) for u in range(n) if u != v)
    return (colors[v], row[v], tuple(out_ms), tuple(in_ms))


def _refine_joint(adjs: list[list[list[int]]], colorings: list[list[int]]) -> list[list[int]] | None:
    """Refine every coloring to the coarsest equitable one, jointly.

    Returns None as soon as the colour histograms of the graphs diverge.
    """
    current = [list(c) for c in colorings]
    num = len({c for col in current for c in col})
    while True:
        sigs = [[_signature(A, col, v) for v in range(len(A))] for A, col in zip(adjs, current)]
        ordered = sorted({s for g in sigs for s in g})
        index = {s: i for i, s in enumerate(ordered)}
        current = [[index[s] for s in g] for g in sigs]
        hists = [sorted(c) for c in current]
        if any(h != hists[0] for h in hists[1:]):
            return None
        if len(ordered) == num:
            return current
        num = len(ordered)


def refine(A: WeightedDigraph, initial: Sequence[int] | None = None) -> ColorRefinementState:
    """1-dimensional refinement of one graph; classes numbered by first occurrence."""
    colors = list(initial) if initial is not None else [0] * A.n
    refined = _refine_joint([A.adj.tolist()], [colors])
    assert refined is not None
    renumber: dict[int, int] = {}
    out = tuple(renumber.setdefault(c, len(renumber)) for c in refined[0])
    return ColorRefinementState(out, True)


def _search(A1: list[list[int]], A2: list[list[int]], c1: list[int], c2: list[int]) -> list[int] | None:
    refined = _refine_joint([A1, A2], [c1, c2])
    if refined is None:
        return None
    c1, c2 = refined
    n = len(A1)
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(c1):
        cells.setdefault(c, []).append(v)
    if all(len(cell) == 1 for cell in cells.values()):
        where = {c: v for v, c in enumerate(c2)}
        image = [where[c1[v]] for v in range(n)]
        for i in range(n):
            pi_i = image[i]
            r1, r2 = A1[i], A2[pi_i]
            for j in range(n):
                if r2[image[j]] != r1[j]:
                    return None
        return image
    # smallest non-singleton cell; ties broken by smallest vertex
    target = min((len(cell), cell[0], c) for c, cell in cells.items() if len(cell) > 1)[2]
    v = cells[target][0]
    fresh = -1
    c1_ind = list(c1)
    c1_ind[v] = fresh
    for w in range(n):
        if c2[w] != target:
            continue
        c2_ind = list(c2)
        c2_ind[w] = fresh
        found = _search(A1, A2, c1_ind, c2_ind)
        if found is not None:
            return found
    return None


def wdg_iso(A1: WeightedDigraph, A2: WeightedDigraph) -> Permutation | None:
    """A permutation pi with A2 = P_pi^T A1 P_pi, or None if none exists."""
    if A1.n != A2.n or A1.field != A2.field:
        return None
    n = A1.n
    if n == 0:
        return Permutation(())
    a1, a2 = A1.adj.tolist(), A2.adj.tolist()
    if sorted(x for r in a1 for x in r) != sorted(x for r in a2 for x in r):
        return None
    image = _search(a1, a2, [0] * n, [0] * n)
    if image is None:
        return None
    pi = Permutation(tuple(image))
    if A1.permuted(pi).adj != A2.adj:
        raise AssertionError("solver returned a non-isomorphism")
    return pi


def wdg_iso_exhaustive(A1: WeightedDigraph, A2: WeightedDigraph) -> Permutation | None:
    """First pi in lexicographic order with A2 = P^T A1 P; brute force over S_n."""
    from itertools import permutations

    if A1.n != A2.n:
        return None
    for img in permutations(range(A1.n)):
        pi = Permutation(img)
        if A1.permuted(pi).adj == A2.adj:
            return pi
    return None


# -- unweighted export -------------------------------------------------------


@dataclass(frozen=True)
class PlainGraph:
    """A simple undirected graph on vertices 0..num_vertices-1."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def to_edge_list(self) -> str:
        lines = [f"{self.num_vertices} {len(self.edges)}"]
        lines.extend(f"{u} {v}" for u, v in self.edges)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text: str) -> PlainGraph:
        lines = [ln.split() for ln in text.strip().splitlines()]
        nv, m = int(lines[0][0]), int(lines[0][1])
        edges = tuple((int(u), int(v)) for u, v in lines[1:])
        if len(edges) != m:
            raise ValueError(f"header announces {m} edges, found {len(edges)}")
        return cls(nv, edges)

    def to_json(self) -> dict:
        return {"num_vertices": self.num_vertices, "edges": [list(e) for e in self.edges]}


def export_layers(q: int) -> int:
    """Top ladder index L; bits of weight codes use layers 0..ceil(log2 q) - 1."""
    return max(1, math.ceil(math.log2(q))) + 1


def export_unweighted(A: WeightedDigraph) -> PlainGraph:
    """Encode A as a plain undirected graph preserving and reflecting isomorphism.

    Each vertex v becomes a ladder path v^0 - v^1 - ... - v^L.  v^0 carries
    two pendant leaves and v^L three, which pins down the ladder ends and
    hence the layers.  For every arc i -> j whose weight code has bit l set,
    a gadget g - h is added with g adjacent to i^l, h adjacent to j^l and a
    single pendant leaf on g marking the source side.
    """
    n = A.n
    L = export_layers(A.field.q)
    edges: list[tuple[int, int]] = []

    def ladder(v: int, layer: int) -> int:
        return v * (L + 1) + layer

    nxt = n * (L + 1)

    def fresh() -> int:
        nonlocal nxt
        nxt += 1
        return nxt - 1

    for v in range(n):
        for layer in range(L):
            edges.append((ladder(v, layer), ladder(v, layer + 1)))
        for _ in range(2):
            edges.append((ladder(v, 0), fresh()))
        for _ in range(3):
            edges.append((ladder(v, L), fresh()))
    adj = A.adj.tolist()
    for i in range(n):
        for j in range(n):
            w = adj[i][j]
            layer = 0
            while w:
                if w & 1:
                    g, h, leaf = fresh(), fresh(), fresh()
                    edges.extend([(ladder(i, layer), g), (g, h), (h, ladder(j, layer)), (g, leaf)])
                w >>= 1
                layer += 1
    return PlainGraph(nxt, tuple(edges))
