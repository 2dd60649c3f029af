"""Perfect matchings of complete graphs and their connectivity matrices.

The central object is the 0/1 matrix indexed by perfect matchings of an
even-size vertex set, with a 1 exactly where the union of the two matchings
(as a multigraph) is a single cycle. Two matched copies of one edge count as
a 2-cycle, so the order-2 matrix is [[1]], and the empty vertex set gets the
convention [[1]] as well.

Fingerprints extend this to boundaried graphs: a degree vector over the
boundary (values 0, 1, 2, with evenly many 1s) plus a perfect matching of
the degree-1 vertices. The fingerprint combine matrix is block structured,
pairing each degree vector only with its pointwise complement to 2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .exactalg import (
    RATIONALS,
    CapacityError,
    ExactMatrix,
    ValidationError,
)
from .graphs import AnnotatedGraph

__all__ = [
    "Matching",
    "Fingerprint",
    "CycleType",
    "enumerate_matchings",
    "enumerate_matchings_of",
    "matching_count",
    "union_cycle_type",
    "is_single_cycle",
    "build_M",
    "enumerate_fingerprints",
    "fingerprint_count",
    "fingerprints_combine",
    "build_H",
    "boundaried_graph_for_fingerprint",
    "glue_boundaried",
    "GraphConstructionError",
    "MAX_PLAIN_ORDER",
    "MAX_LARGE_ORDER",
]

# build_M works routinely up to order 10 (945 matchings); order 12 (10395)
# is allowed only when the caller opts into the large tier.
MAX_PLAIN_ORDER = 10
MAX_LARGE_ORDER = 12

MAX_H_ORDER = 8


class GraphConstructionError(ValidationError):
    """A fingerprint admits no boundaried-graph realization."""


@dataclass(frozen=True, order=True)
class Matching:
    """Perfect matching stored as sorted (low, high) pairs, sorted by low end."""

    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]]) -> "Matching":
        canon = []
        seen = set()
        for p in pairs:
            u, v = p
            if u == v:
                raise ValidationError(f"matching pair ({u},{v}) is a loop")
            lo, hi = (u, v) if u < v else (v, u)
            canon.append((lo, hi))
            for x in (lo, hi):
                if x in seen:
                    raise ValidationError(f"vertex {x} matched twice")
                seen.add(x)
        return cls(tuple(sorted(canon)))

    @classmethod
    def parse(cls, text: str) -> "Matching":
        """Parse the text form '1-2|3-4|5-6'; empty string is the empty matching."""
        text = text.strip()
        if not text:
            return cls(())
        pairs = []
        for chunk in text.split("|"):
            bits = chunk.split("-")
            if len(bits) != 2:
                raise ValidationError(f"bad matching chunk {chunk!r}")
            pairs.append((int(bits[0]), int(bits[1])))
        return cls.from_pairs(pairs)

    def text(self) -> str:
        return "|".join(f"{u}-{v}" for u, v in self.pairs)

    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(v for p in self.pairs for v in p))

    def partner(self) -> dict[int, int]:
        d = {}
        for u, v in self.pairs:
            d[u] = v
            d[v] = u
        return d

    def __len__(self) -> int:
        return len(self.pairs)

    def __str__(self) -> str:
        return self.text() or "(empty)"


@dataclass(frozen=True, order=True)
class CycleType:
    """Multiset of cycle lengths (in matched-pair units), as a sorted-desc tuple."""

    parts: tuple[int, ...]

    def total(self) -> int:
        return sum(self.parts)

    def __str__(self) -> str:
        return "+".join(str(p) for p in self.parts) if self.parts else "0"


def enumerate_matchings_of(vertices: Sequence[int]) -> list[Matching]:
    """All perfect matchings of the given vertex set, canonical order.

    Canonical order: recursively match the smallest unmatched vertex with
    each larger partner in increasing order. The first matching is the
    consecutive-pairs one; the count is (n-1)!! for n vertices.
    """
    vs = sorted(vertices)
    if len(vs) != len(set(vs)):
        raise ValidationError("duplicate vertices")
    if len(vs) % 2:
        raise ValidationError(f"odd vertex set of size {len(vs)} has no perfect matching")
    out: list[Matching] = []

    def rec(remaining: tuple[int, ...], acc: list[tuple[int, int]]) -> None:
        if not remaining:
            out.append(Matching(tuple(acc)))
            return
        first = remaining[0]
        rest = remaining[1:]
        for idx, mate in enumerate(rest):
            acc.append((first, mate))
            rec(rest[:idx] + rest[idx + 1 :], acc)
            acc.pop()

    rec(tuple(vs), [])
    return out


@lru_cache(maxsize=None)
def _matchings_cached(k: int) -> tuple[Matching, ...]:
    return tuple(enumerate_matchings_of(range(1, k + 1)))


def enumerate_matchings(k: int) -> list[Matching]:
    """Perfect matchings of {1, ..., k} in canonical order (k even)."""
    if k < 0 or k % 2:
        raise ValidationError(f"order {k} must be even and nonnegative")
    return list(_matchings_cached(k))


def matching_count(k: int) -> int:
    """(k-1)!! for even k, the number of perfect matchings of k points."""
    if k < 0 or k % 2:
        raise ValidationError(f"order {k} must be even and nonnegative")
    out = 1
    for i in range(1, k, 2):
        out *= i
    return out


def union_cycle_type(a: Matching, b: Matching) -> CycleType:
    """Cycle type of the multigraph union, lengths counted in pairs of edges.

    Both matchings must cover the same vertex set. A doubled edge is a cycle
    of length 1 in these units; the parts sum to half the vertex count.
    """
    va, vb = a.vertices(), b.vertices()
    if va != vb:
        raise ValidationError("cycle type of matchings on different vertex sets")
    pa, pb = a.partner(), b.partner()
    seen: set[int] = set()
    parts = []
    for start in va:
        if start in seen:
            continue
        length = 0
        v = start
        while True:
            w = pa[v]
            v = pb[w]
            seen.add(w)
            seen.add(v)
            length += 1
            if v == start:
                break
        parts.append(length)
    return CycleType(tuple(sorted(parts, reverse=True)))


def is_single_cycle(a: Matching, b: Matching) -> bool:
    """True iff the union multigraph is one cycle through every vertex."""
    va = a.vertices()
    if va != b.vertices():
        raise ValidationError("single-cycle test on different vertex sets")
    if not va:
        return False
    pa, pb = a.partner(), b.partner()
    start = va[0]
    v = start
    length = 0
    while True:
        v = pb[pa[v]]
        length += 1
        if v == start:
            break
    return length == len(va) // 2


def build_M(k: int, large: bool = False) -> ExactMatrix:
    """The matchings connectivity matrix of order k over Q, entries 0/1.

    Indexed by canonical matching order both ways. Built with a vectorized
    orbit walk: for matchings a, b with partner arrays pa, pb, the union is
    one cycle exactly when the orbit of the first vertex under pa after pb
    has size k/2. Order 0 yields [[1]] by convention.
    """
    if k < 0 or k % 2:
        raise ValidationError(f"order {k} must be even and nonnegative")
    limit = MAX_LARGE_ORDER if large else MAX_PLAIN_ORDER
    if k > limit:
        raise CapacityError(
            f"order {k} exceeds the ceiling {limit}"
            + ("" if large else " (pass large=True / --large for order 12)")
        )
    ms = enumerate_matchings(k)
    if k == 0:
        return ExactMatrix(RATIONALS, np.ones((1, 1), dtype=np.int8), ms, ms)
    n = len(ms)
    half = k // 2
    partners = np.empty((n, k), dtype=np.int16)
    for i, m in enumerate(ms):
        p = m.partner()
        partners[i] = [p[v] - 1 for v in range(1, k + 1)]
    out = np.zeros((n, n), dtype=np.int8)
    rows_idx = np.arange(n)
    for i in range(n):
        pa = partners[i]
        x = pa[partners[:, 0]]
        first = np.zeros(n, dtype=np.int32)
        for step in range(1, half + 1):
            hit = (x == 0) & (first == 0)
            first[hit] = step
            if step < half:
                x = pa[partners[rows_idx, x]]
        out[i] = (first == half).astype(np.int8)
    return ExactMatrix(RATIONALS, out, ms, ms)


# ---------------------------------------------------------------------------
# fingerprints


@dataclass(frozen=True, order=True)
class Fingerprint:
    """Boundary degree data: vertex ids, their degrees, matching on degree-1 set."""

    boundary: tuple[int, ...]
    degrees: tuple[int, ...]
    matching: Matching

    def __post_init__(self) -> None:
        if tuple(sorted(self.boundary)) != self.boundary:
            raise ValidationError("fingerprint boundary must be sorted")
        if len(self.boundary) != len(self.degrees):
            raise ValidationError("boundary and degree vector lengths differ")
        if any(d not in (0, 1, 2) for d in self.degrees):
            raise ValidationError("degrees must be 0, 1 or 2")
        ones = self.degree_set(1)
        if self.matching.vertices() != ones:
            raise ValidationError("matching must pair exactly the degree-1 vertices")

    def degree_of(self, v: int) -> int:
        return self.degrees[self.boundary.index(v)]

    def degree_set(self, d: int) -> tuple[int, ...]:
        return tuple(v for v, dv in zip(self.boundary, self.degrees) if dv == d)

    def text(self) -> str:
        """Text form 'd=<digits>;M=<matching>' with digits in boundary order."""
        return "d=" + "".join(str(d) for d in self.degrees) + ";M=" + self.matching.text()

    @classmethod
    def parse(cls, text: str, boundary: Sequence[int]) -> "Fingerprint":
        text = text.strip()
        if not text.startswith("d=") or ";M=" not in text:
            raise ValidationError(f"bad fingerprint text {text!r}")
        dpart, mpart = text[2:].split(";M=", 1)
        degrees = tuple(int(c) for c in dpart)
        return cls(tuple(sorted(boundary)), degrees, Matching.parse(mpart))

    def relabel(self, mapping: dict[int, int]) -> "Fingerprint":
        """Push the fingerprint along an injective vertex-id mapping."""
        new_b = tuple(sorted(mapping[v] for v in self.boundary))
        deg = {mapping[v]: d for v, d in zip(self.boundary, self.degrees)}
        new_d = tuple(deg[v] for v in new_b)
        new_m = Matching.from_pairs(
            (mapping[u], mapping[v]) for u, v in self.matching.pairs
        )
        return Fingerprint(new_b, new_d, new_m)

    def __str__(self) -> str:
        return self.text()


def enumerate_fingerprints(boundary: Sequence[int]) -> list[Fingerprint]:
    """All fingerprints on the boundary, canonical order.

    Degree vectors run as a ternary counter (last position fastest), keeping
    those with an even number of 1s; for each, matchings of the degree-1
    vertices in canonical matching order.
    """
    b = tuple(sorted(boundary))
    if len(b) != len(set(b)):
        raise ValidationError("duplicate boundary vertices")
    out = []
    for degs in itertools.product((0, 1, 2), repeat=len(b)):
        ones = [v for v, d in zip(b, degs) if d == 1]
        if len(ones) % 2:
            continue
        for m in enumerate_matchings_of(ones):
            out.append(Fingerprint(b, degs, m))
    return out


def fingerprint_count(k: int) -> int:
    """Closed-form count: sum over even i of C(k,i) * (i-1)!! * 2^(k-i)."""
    from math import comb

    return sum(comb(k, i) * matching_count(i) * 2 ** (k - i) for i in range(0, k + 1, 2))


def fingerprints_combine(a: Fingerprint, b: Fingerprint) -> bool:
    """True iff two partial solutions with these fingerprints glue to one cycle.

    Degrees must sum to 2 at every boundary vertex; the matchings must then
    union to a single cycle, or both be empty.
    """
    if a.boundary != b.boundary:
        raise ValidationError("combining fingerprints on different boundaries")
    if any(da + db != 2 for da, db in zip(a.degrees, b.degrees)):
        return False
    if not a.matching.pairs and not b.matching.pairs:
        return True
    return is_single_cycle(a.matching, b.matching)


def build_H(k: int) -> ExactMatrix:
    """Fingerprint combine matrix of order k over Q, canonical order both ways.

    Block permutation structure: the rows with degree vector d can only meet
    the columns with the complementary vector 2-d, so only those blocks are
    scanned; each nonzero block is a copy of the single-cycle predicate on
    the matchings of the shared degree-1 set.
    """
    if k < 0 or k > MAX_H_ORDER:
        raise CapacityError(f"fingerprint order {k} outside 0..{MAX_H_ORDER}")
    fps = enumerate_fingerprints(range(1, k + 1))
    index: dict[Fingerprint, int] = {f: i for i, f in enumerate(fps)}
    by_deg: dict[tuple[int, ...], list[Fingerprint]] = {}
    for f in fps:
        by_deg.setdefault(f.degrees, []).append(f)
    n = len(fps)
    out = np.zeros((n, n), dtype=np.int8)
    for degs, rows in by_deg.items():
        comp = tuple(2 - d for d in degs)
        cols = by_deg.get(comp)
        if not cols:
            continue
        for fr in rows:
            i = index[fr]
            for fc in cols:
                if not fr.matching.pairs and not fc.matching.pairs:
                    out[i, index[fc]] = 1
                elif fr.matching.pairs and fc.matching.pairs:
                    if is_single_cycle(fr.matching, fc.matching):
                        out[i, index[fc]] = 1
    return ExactMatrix(RATIONALS, out, fps, fps)


# ---------------------------------------------------------------------------
# boundaried realizations


def boundaried_graph_for_fingerprint(fp: Fingerprint) -> AnnotatedGraph:
    """A boundaried graph whose single partial solution has this fingerprint.

    Construction: take the matching's first pair (lexicographically) and
    replace that edge by a path threading the degree-2 vertices in
    increasing id order; keep the other pairs as direct edges; with an empty
    matching put a cycle on the degree-2 vertices instead. Finally subdivide
    every edge once so the two sides never interfere after gluing.
    """
    two = sorted(fp.degree_set(2))
    base_edges: list[tuple[int, int]] = []
    if fp.matching.pairs:
        (u0, v0), *rest = fp.matching.pairs
        chain = [u0, *two, v0]
        base_edges.extend(zip(chain, chain[1:]))
        base_edges.extend(rest)
    else:
        if 1 <= len(two) <= 2:
            raise GraphConstructionError(
                f"no simple cycle through {len(two)} degree-2 vertices "
                f"(fingerprint {fp.text()})"
            )
        if len(two) >= 3:
            base_edges.extend(zip(two, two[1:]))
            base_edges.append((two[-1], two[0]))
    g = AnnotatedGraph()
    for v in fp.boundary:
        g.add_vertex(v)
    next_id = (max(fp.boundary) if fp.boundary else 0) + 1
    for u, v in base_edges:
        g.add_vertex(next_id)
        g.add_edge(u, next_id)
        g.add_edge(next_id, v)
        next_id += 1
    return g


def glue_boundaried(g1: AnnotatedGraph, g2: AnnotatedGraph, boundary: Sequence[int]) -> AnnotatedGraph:
    """Identify the two graphs along shared boundary ids; other ids of g2 shift."""
    b = set(boundary)
    out = AnnotatedGraph()
    for v in g1.vertices:
        out.add_vertex(v)
    for e in g1.edges:
        out.add_edge(*e)
    offset = (max(g1.vertices, default=0) + max(g2.vertices, default=0)) + 1
    remap = {v: (v if v in b else v + offset) for v in g2.vertices}
    for v in g2.vertices:
        out.add_vertex(remap[v])
    for u, v in g2.edges:
        out.add_edge(remap[u], remap[v])
    return out
