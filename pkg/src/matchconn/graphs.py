"""Graph containers, path decompositions, and the on-disk graph format.

AnnotatedGraph is a simple undirected graph with stable integer vertex ids.
Vertices may carry a label-gadget annotation: a map from incident edges to
labels 1..4, consumed by the reduction machinery when gadgets are expanded.
A graph may also carry a path decomposition of itself.

File format ("hcgraph v1"), plain ASCII text:

    hcgraph v1
    n <vertex-count>
    e <u> <v>          (one line per edge, 1-based contiguous ids)
    bag <v1> <v2> ...  (one line per decomposition bag, in order)

An optional JSON sidecar next to the graph records reduction metadata.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .exactalg import ValidationError

__all__ = [
    "AnnotatedGraph",
    "PathDecomposition",
    "DecompositionError",
    "write_hcgraph",
    "read_hcgraph",
    "write_sidecar",
    "read_sidecar",
]


def edge_key(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise ValidationError(f"loop edge at vertex {u}")
    return (u, v) if u < v else (v, u)


class DecompositionError(ValidationError):
    """A bag list fails the path decomposition axioms for its graph."""

    def __init__(self, violations: list[str]) -> None:
        super().__init__("; ".join(violations))
        self.violations = violations


@dataclass
class PathDecomposition:
    """Ordered bags of vertex ids."""

    bags: list[tuple[int, ...]]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def violations(self, graph: "AnnotatedGraph") -> list[str]:
        """Empty list iff this is a valid path decomposition of the graph.

        Checks: every bag vertex belongs to the graph, every vertex occurs in
        a nonempty contiguous run of bags, and every edge fits inside some bag.
        """
        probs: list[str] = []
        first: dict[int, int] = {}
        last: dict[int, int] = {}
        vset = graph.vertices
        for i, bag in enumerate(self.bags):
            for v in bag:
                if v not in vset:
                    probs.append(f"bag {i} contains unknown vertex {v}")
                first.setdefault(v, i)
                last[v] = i
        for v in vset:
            if v not in first:
                probs.append(f"vertex {v} appears in no bag")
        for v, f in first.items():
            for i in range(f, last[v] + 1):
                if v not in self.bags[i]:
                    probs.append(f"vertex {v} missing from bag {i} inside its run")
                    break
        bag_sets = [frozenset(b) for b in self.bags]
        for u, v in graph.edges:
            if not any(u in b and v in b for b in bag_sets):
                probs.append(f"edge {u}-{v} fits in no bag")
        return probs

    def validate(self, graph: "AnnotatedGraph") -> None:
        probs = self.violations(graph)
        if probs:
            raise DecompositionError(probs[:20])

    def relabel(self, mapping: dict[int, int]) -> "PathDecomposition":
        return PathDecomposition([tuple(mapping[v] for v in bag) for bag in self.bags])


class AnnotatedGraph:
    """Simple undirected graph; optional per-vertex edge-label annotations."""

    def __init__(self) -> None:
        self.vertices: set[int] = set()
        self.edges: set[tuple[int, int]] = set()
        self._adj: dict[int, set[int]] = {}
        # annotations[v][edge_key] = label in 1..4; v is a label-gadget site
        self.annotations: dict[int, dict[tuple[int, int], int]] = {}
        self.decomposition: PathDecomposition | None = None

    # -- construction --------------------------------------------------------

    def add_vertex(self, v: int) -> None:
        if v in self.vertices:
            return
        self.vertices.add(v)
        self._adj[v] = set()

    def add_edge(self, u: int, v: int) -> None:
        k = edge_key(u, v)
        self.add_vertex(u)
        self.add_vertex(v)
        if k in self.edges:
            raise ValidationError(f"duplicate edge {k}")
        self.edges.add(k)
        self._adj[u].add(v)
        self._adj[v].add(u)

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edges

    def neighbors(self, v: int) -> set[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def annotate(self, v: int, labels: dict[tuple[int, int], int]) -> None:
        """Mark v as a label-gadget site with the given incident-edge labels."""
        if v not in self.vertices:
            raise ValidationError(f"annotating unknown vertex {v}")
        canon = {}
        for e, lab in labels.items():
            k = edge_key(*e)
            if k not in self.edges or v not in k:
                raise ValidationError(f"annotation on non-incident edge {e} at {v}")
            if lab not in (1, 2, 3, 4):
                raise ValidationError(f"label {lab} outside 1..4")
            canon[k] = lab
        missing = [e for e in self.edges if v in e and e not in canon]
        if missing:
            raise ValidationError(f"vertex {v} leaves incident edges unlabeled: {missing}")
        self.annotations[v] = canon

    def copy(self) -> "AnnotatedGraph":
        g = AnnotatedGraph()
        g.vertices = set(self.vertices)
        g.edges = set(self.edges)
        g._adj = {v: set(a) for v, a in self._adj.items()}
        g.annotations = {v: dict(a) for v, a in self.annotations.items()}
        if self.decomposition is not None:
            g.decomposition = PathDecomposition([tuple(b) for b in self.decomposition.bags])
        return g

    def fresh_id(self) -> int:
        return max(self.vertices, default=0) + 1

    def union_into(self, other: "AnnotatedGraph") -> None:
        """Add all vertices, edges and annotations of `other` (ids must mesh)."""
        for v in other.vertices:
            self.add_vertex(v)
        for u, v in other.edges:
            if not self.has_edge(u, v):
                self.add_edge(u, v)
        for v, labs in other.annotations.items():
            merged = dict(self.annotations.get(v, {}))
            merged.update(labs)
            self.annotations[v] = merged

    def __repr__(self) -> str:
        return f"AnnotatedGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


# ---------------------------------------------------------------------------
# serialization


def write_hcgraph(path, graph: AnnotatedGraph, decomposition: PathDecomposition | None = None) -> None:
    """Write graph (and bags) with vertices renumbered to 1..n in sorted order."""
    if graph.annotations:
        raise ValidationError("cannot serialize a graph with unexpanded annotations")
    order = sorted(graph.vertices)
    renum = {v: i + 1 for i, v in enumerate(order)}
    decomp = decomposition if decomposition is not None else graph.decomposition
    with open(path, "w", encoding="ascii") as fh:
        fh.write("hcgraph v1\n")
        fh.write(f"n {len(order)}\n")
        for u, v in sorted(edge_key(renum[u], renum[v]) for u, v in graph.edges):
            fh.write(f"e {u} {v}\n")
        if decomp is not None:
            for bag in decomp.bags:
                fh.write("bag " + " ".join(str(renum[v]) for v in bag) + "\n")


def read_hcgraph(path) -> AnnotatedGraph:
    g = AnnotatedGraph()
    bags: list[tuple[int, ...]] = []
    declared = None
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != "hcgraph v1":
            raise ValidationError(f"bad header {header!r}, expected 'hcgraph v1'")
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts:
                continue
            tag = parts[0]
            if tag == "n":
                declared = int(parts[1])
                for v in range(1, declared + 1):
                    g.add_vertex(v)
            elif tag == "e":
                if len(parts) != 3:
                    raise ValidationError(f"line {lineno}: bad edge line")
                g.add_edge(int(parts[1]), int(parts[2]))
            elif tag == "bag":
                bags.append(tuple(int(x) for x in parts[1:]))
            else:
                raise ValidationError(f"line {lineno}: unknown tag {tag!r}")
    if declared is None:
        raise ValidationError("missing 'n' line")
    if any(v < 1 or v > declared for v in g.vertices):
        raise ValidationError("edge endpoint outside 1..n")
    if bags:
        g.decomposition = PathDecomposition(bags)
    return g


def write_sidecar(path, meta: dict) -> None:
    with open(path, "w", encoding="ascii") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_sidecar(path) -> dict:
    with open(path, "r", encoding="ascii") as fh:
        return json.load(fh)
