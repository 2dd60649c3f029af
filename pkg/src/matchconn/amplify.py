"""Kronecker self-similarity inside big matchings connectivity matrices.

Take t stacked copies of the complete graph on B vertices and patch them
into a ring: copy i keeps all its clique edges, and every vertex of copy i
except the first gains an edge to the first vertex of copy i+1 (indices
wrap). Perfect matchings of this product graph restrict nicely: from a set
I of matchings of one copy, the plain family takes disjoint unions across
copies, and the detoured family reroutes, in each copy, the edge at the
first vertex through the patch into the next copy. The connectivity matrix
entries between the two families factor as the t-fold Kronecker power of
the base family's connectivity pattern, which is how low-order rank data
amplifies to high order.

Entries of the big matrix are evaluated pairwise through the single-cycle
predicate (by definition the same values as indexing into the fully built
matrix, which at order 12 would be a 10395^2 array).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .exactalg import (
    RATIONALS,
    CapacityError,
    ExactMatrix,
    PrimeField,
    ValidationError,
    kronecker,
    rank,
)
from .graphs import AnnotatedGraph
from .matchings import (
    Matching,
    build_M,
    enumerate_matchings,
    is_single_cycle,
)

__all__ = [
    "ProductGraph",
    "build_product_graph",
    "TensorFamily",
    "tensor_matchings",
    "verify_tensor_identity",
    "TensorCheck",
    "mod_rank_report",
    "ModRankRow",
]


@dataclass
class ProductGraph:
    copies: int
    base_size: int
    graph: AnnotatedGraph
    patch_edges: list[tuple[int, int]]

    def vertex(self, copy: int, j: int) -> int:
        """Stable id of vertex j (1-based) in copy i (1-based): (i-1)*B + j."""
        return (copy - 1) * self.base_size + j


def build_product_graph(base_size: int, copies: int) -> ProductGraph:
    """t copies of K_B in a ring; patch edges j -> next copy's vertex 1, j != 1."""
    if base_size < 2 or copies < 1:
        raise ValidationError("need base size >= 2 and at least one copy")
    g = AnnotatedGraph()
    pg = ProductGraph(copies, base_size, g, [])
    for i in range(1, copies + 1):
        for j in range(1, base_size + 1):
            g.add_vertex(pg.vertex(i, j))
    for i in range(1, copies + 1):
        for j in range(1, base_size + 1):
            for jj in range(j + 1, base_size + 1):
                g.add_edge(pg.vertex(i, j), pg.vertex(i, jj))
    for i in range(1, copies + 1):
        nxt = i % copies + 1
        for j in range(2, base_size + 1):
            u, v = pg.vertex(i, j), pg.vertex(nxt, 1)
            if not g.has_edge(u, v):
                g.add_edge(u, v)
                pg.patch_edges.append((u, v) if u < v else (v, u))
    pg.patch_edges.sort()
    return pg


@dataclass
class TensorFamily:
    """Matchings of the product graph formed from t-tuples over a base family.

    Members align with the lexicographic order of index tuples (last index
    fastest), so member number sum(a_i * |I|^(t-i)) corresponds to the tuple
    (a_1, ..., a_t).
    """

    base: list[Matching]
    copies: int
    base_size: int
    detoured: bool
    members: list[Matching]


def _shift(m: Matching, offset: int) -> list[tuple[int, int]]:
    return [(u + offset, v + offset) for u, v in m.pairs]


def tensor_matchings(base: list[Matching], copies: int, detoured: bool) -> TensorFamily:
    """Build the plain (disjoint union) or detoured tensor family.

    The base matchings must all be perfect matchings of {1..B}. Detoured:
    in copy i the pair (1, r) of the chosen base matching loses its edge at
    vertex 1 and instead connects r to vertex 1 of copy i+1 (wrapping), so
    every member stays a perfect matching of the product graph using one
    patch edge per copy.
    """
    if not base:
        raise ValidationError("empty base family")
    verts = base[0].vertices()
    if verts[0] != 1:
        raise ValidationError("base matchings must cover {1..B}")
    B = len(verts)
    if any(m.vertices() != tuple(range(1, B + 1)) for m in base):
        raise ValidationError("base matchings must all cover {1..B}")
    pg = build_product_graph(B, copies)
    members = []
    for combo in itertools.product(range(len(base)), repeat=copies):
        pairs: list[tuple[int, int]] = []
        if not detoured:
            for i, a in enumerate(combo, start=1):
                pairs.extend(_shift(base[a], (i - 1) * B))
        else:
            for i, a in enumerate(combo, start=1):
                m = base[a]
                partner = m.partner()
                r = partner[1]
                nxt = i % copies + 1
                for u, v in m.pairs:
                    if 1 in (u, v):
                        continue
                    pairs.append((u + (i - 1) * B, v + (i - 1) * B))
                pairs.append((pg.vertex(i, r), pg.vertex(nxt, 1)))
        member = Matching.from_pairs(pairs)
        for u, v in member.pairs:
            if not pg.graph.has_edge(u, v):
                raise AssertionError(f"member uses non-edge {u}-{v} of the product graph")
        members.append(member)
    return TensorFamily(list(base), copies, B, detoured, members)


@dataclass
class TensorCheck:
    base_size: int
    copies: int
    family_size: int
    identity_holds: bool
    base_matrix: ExactMatrix
    big_block: ExactMatrix
    kron_power: ExactMatrix


def verify_tensor_identity(
    base_size: int, copies: int, base: list[Matching] | None = None
) -> TensorCheck:
    """Compare the plain-vs-detoured block against the Kronecker power.

    Default base family: all matchings of {1..B}. The block of the order
    t*B connectivity matrix at rows = plain family, cols = detoured family
    must equal the t-fold Kronecker power of the base family's own
    connectivity matrix (and the plain-vs-plain block is zero for t >= 2,
    since unions decompose per copy).
    """
    if base is None:
        base = enumerate_matchings(base_size)
    plain = tensor_matchings(base, copies, detoured=False)
    detoured = tensor_matchings(base, copies, detoured=True)
    F_rows = [[1 if is_single_cycle(a, b) else 0 for b in base] for a in base]
    F = ExactMatrix(RATIONALS, F_rows, base, base)
    big_rows = [
        [1 if is_single_cycle(a, b) else 0 for b in detoured.members]
        for a in plain.members
    ]
    big = ExactMatrix(
        RATIONALS, np.array(big_rows, dtype=np.int8), plain.members, detoured.members
    )
    power = F
    for _ in range(copies - 1):
        power = kronecker(power, F)
    holds = np.array_equal(big.numpy(), power.numpy())
    if copies >= 2:
        # unions of two plain members split into per-copy components, so the
        # plain-vs-plain block must vanish identically
        zero_ok = not any(
            is_single_cycle(a, b) for a in plain.members for b in plain.members
        )
        holds = holds and zero_ok
    return TensorCheck(
        base_size=base_size,
        copies=copies,
        family_size=len(plain.members),
        identity_holds=bool(holds),
        base_matrix=F,
        big_block=big,
        kron_power=power,
    )


@dataclass(frozen=True)
class ModRankRow:
    order: int
    dimension: int
    rank_mod_p: int
    rank_root: float


def mod_rank_report(p: int, large: bool = False) -> list[ModRankRow]:
    """Rank of the connectivity matrices mod p for orders 4..10 (12 if large).

    rank_root is rank^(1/order), the per-boundary-vertex growth base that
    the amplification argument turns into asymptotic lower bounds.
    """
    orders = [4, 6, 8, 10] + ([12] if large else [])
    out = []
    for k in orders:
        M = build_M(k, large=large).with_field(PrimeField(p))
        r = rank(M)
        out.append(
            ModRankRow(
                order=k,
                dimension=M.nrows,
                rank_mod_p=r,
                rank_root=round(r ** (1.0 / k), 6),
            )
        )
    return out
