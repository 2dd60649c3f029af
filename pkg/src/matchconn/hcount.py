"""Hamiltonian cycle counting: brute-force oracles and the bag-sweep DP.

Three counters with deliberately different mechanics so they can check each
other:

  * count_hc_bruteforce: sparse frontier walk over (visited-mask, endpoint)
    states, each cycle found twice and halved at the end. Capacity 20
    vertices.
  * count_partial_solutions without a decomposition: backtracking over edge
    subsets with degree pruning and an explicit path/cycle shape check at
    the leaves. Capacity 24 edges.
  * count_hc_pathdp / count_partial_solutions with a decomposition: dynamic
    programming along the bags with states (degrees, endpoint pairing,
    closed flag), closing a cycle only on the take that would empty the
    pairing. Optional modulus for residue counting.

Conventions: the empty graph has exactly one Hamiltonian cycle; graphs on
one or two vertices have none.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from .exactalg import CapacityError, ValidationError
from .graphs import AnnotatedGraph, PathDecomposition
from .matchings import Fingerprint, Matching

__all__ = [
    "CountResult",
    "count_hc_bruteforce",
    "count_hc_pathdp",
    "count_partial_solutions",
    "partial_solution_spectrum",
    "enumerate_hamiltonian_cycles",
    "layered_decomposition",
    "MAX_BRUTEFORCE_VERTICES",
    "MAX_SUBSET_EDGES",
]

MAX_BRUTEFORCE_VERTICES = 20
MAX_SUBSET_EDGES = 24


@dataclass
class CountResult:
    """Counter outcome. value is an exact count, or a residue if modulus set."""

    value: int
    modulus: int | None = None
    states_peak: int = 0
    runtime_ms: float = 0.0

    def to_json_dict(self) -> dict:
        key = "residue" if self.modulus is not None else "count"
        return {
            key: self.value,
            "modulus": self.modulus,
            "states_peak": self.states_peak,
            "runtime_ms": round(self.runtime_ms, 3),
        }


def count_hc_bruteforce(graph: AnnotatedGraph) -> CountResult:
    """Exact Hamiltonian cycle count by frontier walk; capacity 20 vertices."""
    t0 = time.perf_counter()
    n = len(graph.vertices)
    if n > MAX_BRUTEFORCE_VERTICES:
        raise CapacityError(f"{n} vertices exceed the brute-force ceiling {MAX_BRUTEFORCE_VERTICES}")
    if n == 0:
        return CountResult(1, runtime_ms=(time.perf_counter() - t0) * 1e3)
    if n < 3 or any(graph.degree(v) < 2 for v in graph.vertices):
        return CountResult(0, runtime_ms=(time.perf_counter() - t0) * 1e3)
    order = sorted(graph.vertices)
    idx = {v: i for i, v in enumerate(order)}
    adj = [0] * n
    for u, v in graph.edges:
        adj[idx[u]] |= 1 << idx[v]
        adj[idx[v]] |= 1 << idx[u]
    full = (1 << n) - 1
    start = 0
    frontier: dict[tuple[int, int], int] = {(1 << start, start): 1}
    total = 0
    peak = 1
    for _ in range(n - 1):
        nxt: dict[tuple[int, int], int] = {}
        for (mask, last), cnt in frontier.items():
            nbrs = adj[last] & ~mask
            while nbrs:
                b = nbrs & -nbrs
                nbrs ^= b
                w = b.bit_length() - 1
                key = (mask | b, w)
                nxt[key] = nxt.get(key, 0) + cnt
        frontier = nxt
        peak = max(peak, len(frontier))
    start_bit = 1 << start
    for (mask, last), cnt in frontier.items():
        if mask == full and adj[last] & start_bit:
            total += cnt
    return CountResult(total // 2, states_peak=peak, runtime_ms=(time.perf_counter() - t0) * 1e3)


def enumerate_hamiltonian_cycles(graph: AnnotatedGraph):
    """Yield each Hamiltonian cycle once, as a tuple of sorted edge pairs.

    Backtracking walk anchored at the smallest vertex; the orientation is
    fixed by requiring the second vertex on the walk to be smaller than the
    final one, so each undirected cycle appears exactly once. Same capacity
    ceiling as the brute-force counter.
    """
    n = len(graph.vertices)
    if n > MAX_BRUTEFORCE_VERTICES:
        raise CapacityError(f"{n} vertices exceed the brute-force ceiling {MAX_BRUTEFORCE_VERTICES}")
    if n < 3 or any(graph.degree(v) < 2 for v in graph.vertices):
        return
    order = sorted(graph.vertices)
    start = order[0]
    adj = {v: sorted(graph.neighbors(v)) for v in order}
    path = [start]
    visited = {start}

    def walk():
        last = path[-1]
        if len(path) == n:
            if start in adj[last] and path[1] < path[-1]:
                yield tuple(
                    (min(a, b), max(a, b))
                    for a, b in zip(path, path[1:] + [start])
                )
            return
        for w in adj[last]:
            if w in visited:
                continue
            path.append(w)
            visited.add(w)
            yield from walk()
            path.pop()
            visited.remove(w)

    yield from walk()


# ---------------------------------------------------------------------------
# subset backtracking oracle for partial solutions


def _shape_ok(chosen: list[tuple[int, int]], fp: Fingerprint) -> bool:
    """Do the chosen edges form the paths/cycle pattern the fingerprint demands?

    Callers guarantee the degree profile already matches (every covered
    vertex has degree 1 or 2, degree-1 exactly at the matching's vertices),
    so components are paths or cycles and only the component structure is
    left to check.
    """
    adj: dict[int, list[int]] = {}
    for u, v in chosen:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen: set[int] = set()
    found_pairs: set[tuple[int, int]] = set()
    for s in sorted(v for v in adj if len(adj[v]) == 1):
        if s in seen:
            continue
        prev, cur = None, s
        seen.add(s)
        while True:
            nxts = [w for w in adj[cur] if w != prev]
            if not nxts:
                break
            prev, cur = cur, nxts[0]
            seen.add(cur)
        found_pairs.add((s, cur) if s < cur else (cur, s))
    cycles = 0
    for s in sorted(adj):
        if s in seen:
            continue
        cycles += 1
        prev, cur = None, s
        while True:
            seen.add(cur)
            nxts = [w for w in adj[cur] if w != prev]
            prev, cur = cur, nxts[0]
            if cur == s:
                break
    want_pairs = set(fp.matching.pairs)
    if want_pairs:
        return cycles == 0 and found_pairs == want_pairs
    return cycles == (1 if chosen else 0) and not found_pairs


def _count_partial_bruteforce(
    graph: AnnotatedGraph, boundary: Sequence[int], fp: Fingerprint
) -> int:
    edges = sorted(graph.edges)
    if len(edges) > MAX_SUBSET_EDGES:
        raise CapacityError(
            f"{len(edges)} edges exceed the subset oracle ceiling {MAX_SUBSET_EDGES}"
        )
    bset = set(boundary)
    internal = set(graph.vertices) - bset
    target = {v: 2 for v in internal}
    for v in boundary:
        target[v] = fp.degree_of(v)
    # remaining degree capacity per vertex as edges are scanned in order
    remaining: dict[int, int] = {v: 0 for v in graph.vertices}
    for u, v in edges:
        remaining[u] += 1
        remaining[v] += 1
    deg = {v: 0 for v in graph.vertices}
    hits = 0

    def rec(i: int, chosen: list[tuple[int, int]]) -> None:
        nonlocal hits
        if i == len(edges):
            if all(deg[v] == target[v] for v in graph.vertices):
                if _shape_ok(chosen, fp):
                    hits += 1
            return
        u, v = edges[i]
        # prune: even taking every remaining edge cannot reach the target
        if any(deg[w] + remaining[w] < target[w] for w in (u, v)):
            return
        remaining[u] -= 1
        remaining[v] -= 1
        # branch: take the edge if both endpoints have capacity
        if deg[u] < target[u] and deg[v] < target[v]:
            deg[u] += 1
            deg[v] += 1
            chosen.append((u, v))
            rec(i + 1, chosen)
            chosen.pop()
            deg[u] -= 1
            deg[v] -= 1
        rec(i + 1, chosen)
        remaining[u] += 1
        remaining[v] += 1

    rec(0, [])
    return hits


# ---------------------------------------------------------------------------
# bag sweep DP


def _bag_schedule(graph: AnnotatedGraph, bags: list[tuple[int, ...]]):
    """Per-bag introduce/edge/forget lists from a validated bag sequence."""
    first: dict[int, int] = {}
    last: dict[int, int] = {}
    for i, bag in enumerate(bags):
        for v in bag:
            first.setdefault(v, i)
            last[v] = i
    intro = [[] for _ in bags]
    forget = [[] for _ in bags]
    edges_at = [[] for _ in bags]
    for v in graph.vertices:
        intro[first[v]].append(v)
        forget[last[v]].append(v)
    bag_sets = [frozenset(b) for b in bags]
    for e in sorted(graph.edges):
        u, v = e
        home = next(i for i, b in enumerate(bag_sets) if u in b and v in b)
        edges_at[home].append(e)
    for lst in intro:
        lst.sort()
    for lst in forget:
        lst.sort()
    return intro, edges_at, forget


def _sweep(
    graph: AnnotatedGraph,
    bags: list[tuple[int, ...]],
    keep: set[int],
    modulus: int | None,
) -> tuple[dict, int]:
    """Run the DP; returns (final states, states_peak).

    Internally vertices are remapped to dense slots (freed on forget and
    reused) so a state is (degree-1 bitmask, degree-2 bitmask, sorted slot
    pairing, closed) and hashing stays cheap; the final states are decoded
    back to (sorted degree items, sorted vertex pairing, closed) -> count.
    Vertices in `keep` are never forgotten even at their last bag. The skip
    branch of an edge is a wholesale dict copy; only takes allocate.
    """
    intro, edges_at, forget = _bag_schedule(graph, bags)
    slot_of: dict[int, int] = {}
    free_slots: list[int] = []
    next_slot = 0
    states: dict[tuple, int] = {(0, 0, (), False): 1}
    peak = 1
    # a vertex is forgotten eagerly once its last incident edge is processed
    remaining = {v: graph.degree(v) for v in graph.vertices}

    def forget_now(verts: list[int]) -> None:
        nonlocal states, peak
        mask = 0
        for w in verts:
            mask |= 1 << slot_of[w]
        nxt = {}
        for key, cnt in states.items():
            d1, d2, pairing, closed = key
            # every dropped vertex must have degree exactly 2
            if d1 & mask or (d2 & mask) != mask:
                continue
            nk = (d1, d2 & ~mask, pairing, closed)
            cur = nxt.get(nk, 0) + cnt
            if modulus is not None:
                cur %= modulus
            nxt[nk] = cur
        states = nxt
        if len(states) > peak:
            peak = len(states)
        for w in verts:
            heapq.heappush(free_slots, slot_of.pop(w))

    for i in range(len(bags)):
        for v in intro[i]:
            if free_slots:
                slot_of[v] = heapq.heappop(free_slots)
            else:
                slot_of[v] = next_slot
                next_slot += 1
            if remaining[v] == 0 and v not in keep:
                # an isolated vertex can never reach degree 2
                states = {}
        for u, v in edges_at[i]:
            su, sv = slot_of[u], slot_of[v]
            bu, bv = 1 << su, 1 << sv
            both = bu | bv
            nxt = dict(states)  # skip branch for every state
            for key, cnt in states.items():
                d1, d2, pairing, closed = key
                if closed or d2 & both:
                    continue
                u1, v1 = d1 & bu, d1 & bv
                if not u1 and not v1:
                    extra = (su, sv) if su < sv else (sv, su)
                    newpair = tuple(sorted(pairing + (extra,)))
                    nk = (d1 | both, d2, newpair, False)
                elif u1 and v1:
                    pu = pv = -1
                    for a, b in pairing:
                        if a == su:
                            pu = b
                        elif b == su:
                            pu = a
                        if a == sv:
                            pv = b
                        elif b == sv:
                            pv = a
                    if pu == sv:
                        # taking u-v closes the cycle; legal only if it is
                        # the last open path
                        if len(pairing) > 1:
                            continue
                        nk = (0, d2 | both, (), True)
                    else:
                        rest = [
                            pr
                            for pr in pairing
                            if su not in pr and sv not in pr
                        ]
                        rest.append((pu, pv) if pu < pv else (pv, pu))
                        nk = (d1 & ~both, d2 | both, tuple(sorted(rest)), False)
                else:
                    # one endpoint extends an open path onto a fresh vertex
                    sold, sfresh = (su, sv) if u1 else (sv, su)
                    po = -1
                    for a, b in pairing:
                        if a == sold:
                            po = b
                        elif b == sold:
                            po = a
                    rest = [pr for pr in pairing if sold not in pr]
                    rest.append((po, sfresh) if po < sfresh else (sfresh, po))
                    nk = (
                        (d1 & ~(1 << sold)) | (1 << sfresh),
                        d2 | (1 << sold),
                        tuple(sorted(rest)),
                        False,
                    )
                cur = nxt.get(nk, 0) + cnt
                if modulus is not None:
                    cur %= modulus
                nxt[nk] = cur
            states = nxt
            if len(states) > peak:
                peak = len(states)
            done = []
            for w in (u, v):
                remaining[w] -= 1
                if remaining[w] == 0 and w not in keep:
                    done.append(w)
            if done:
                forget_now(done)

    vertex_of = {s: v for v, s in slot_of.items()}
    decoded: dict[tuple, int] = {}
    for (d1, d2, pairing, closed), cnt in states.items():
        degs = []
        for s, v in vertex_of.items():
            if (d1 >> s) & 1:
                degs.append((v, 1))
            elif (d2 >> s) & 1:
                degs.append((v, 2))
        pairs = tuple(
            sorted(
                (vertex_of[a], vertex_of[b])
                if vertex_of[a] < vertex_of[b]
                else (vertex_of[b], vertex_of[a])
                for a, b in pairing
            )
        )
        key = (tuple(sorted(degs)), pairs, closed)
        cur = decoded.get(key, 0) + cnt
        if modulus is not None:
            cur %= modulus
        decoded[key] = cur
    return decoded, peak


def count_hc_pathdp(
    graph: AnnotatedGraph,
    decomposition: PathDecomposition | None = None,
    modulus: int | None = None,
) -> CountResult:
    """Hamiltonian cycle count (or residue) along a path decomposition."""
    t0 = time.perf_counter()
    if modulus is not None and modulus < 2:
        raise ValidationError(f"modulus {modulus} must be at least 2")
    decomp = decomposition if decomposition is not None else graph.decomposition
    if decomp is None:
        decomp = layered_decomposition(graph)
    decomp.validate(graph)
    n = len(graph.vertices)
    if n == 0:
        return CountResult(1 % modulus if modulus else 1, modulus, 0, (time.perf_counter() - t0) * 1e3)
    states, peak = _sweep(graph, list(decomp.bags), keep=set(), modulus=modulus)
    total = 0
    for (degs, pairing, closed), cnt in states.items():
        if closed and not degs and not pairing:
            total += cnt
    if modulus is not None:
        total %= modulus
    return CountResult(total, modulus, peak, (time.perf_counter() - t0) * 1e3)


def count_partial_solutions(
    graph: AnnotatedGraph,
    boundary: Sequence[int],
    fp: Fingerprint,
    modulus: int | None = None,
    decomposition: PathDecomposition | None = None,
) -> CountResult:
    """Count edge subsets realizing the fingerprint over the boundary.

    Every vertex off the boundary must end with degree exactly 2; boundary
    vertices end with the prescribed degree; degree-1 boundary vertices are
    joined by disjoint paths according to the fingerprint's matching; no
    cycle may appear unless the matching is empty, in which case the subset
    is one cycle through all covered vertices (or empty when nothing needs
    covering).

    With a decomposition, the boundary is appended to every bag and the bag
    sweep runs; without one, the edge-subset backtracking oracle runs.
    """
    t0 = time.perf_counter()
    b = tuple(sorted(boundary))
    if b != fp.boundary:
        raise ValidationError("fingerprint boundary does not match the given boundary")
    missing = [v for v in b if v not in graph.vertices]
    if missing:
        raise ValidationError(f"boundary vertices {missing} not in graph")
    if decomposition is None and graph.decomposition is not None:
        decomposition = graph.decomposition
    if decomposition is None:
        val = _count_partial_bruteforce(graph, b, fp)
        if modulus is not None:
            val %= modulus
        return CountResult(val, modulus, 0, (time.perf_counter() - t0) * 1e3)
    bags = [tuple(bag) + tuple(v for v in b if v not in bag) for bag in decomposition.bags]
    if not bags:
        bags = [b]
    PathDecomposition(bags).validate(graph)
    states, peak = _sweep(graph, bags, keep=set(b), modulus=modulus)
    want_deg = tuple(sorted((v, fp.degree_of(v)) for v in b if fp.degree_of(v)))
    want_pairs = fp.matching.pairs
    internal = set(graph.vertices) - set(b)
    covered_needed = bool(fp.degree_set(2)) or bool(internal)
    if want_pairs:
        want_closed = False
    else:
        want_closed = covered_needed
    total = 0
    for (degs, pairing, closed), cnt in states.items():
        if degs == want_deg and pairing == want_pairs and closed == want_closed:
            total += cnt
    if modulus is not None:
        total %= modulus
    return CountResult(total, modulus, peak, (time.perf_counter() - t0) * 1e3)


def partial_solution_spectrum(
    graph: AnnotatedGraph,
    boundary: Sequence[int],
    modulus: int | None = None,
    decomposition: PathDecomposition | None = None,
) -> dict[Fingerprint, int]:
    """Partial-solution counts for every realizable fingerprint in one sweep.

    Runs the bag DP once with the boundary pinned and reads the fingerprint of
    each surviving final state, so checking a gadget against its whole support
    costs one pass instead of one pass per fingerprint. Fingerprints with
    count 0 are omitted.
    """
    b = tuple(sorted(boundary))
    missing = [v for v in b if v not in graph.vertices]
    if missing:
        raise ValidationError(f"boundary vertices {missing} not in graph")
    if decomposition is None:
        decomposition = graph.decomposition
    if decomposition is None:
        decomposition = layered_decomposition(graph)
    bags = [tuple(bag) + tuple(v for v in b if v not in bag) for bag in decomposition.bags]
    if not bags:
        bags = [b]
    PathDecomposition(bags).validate(graph)
    states, _ = _sweep(graph, bags, keep=set(b), modulus=modulus)
    internal = set(graph.vertices) - set(b)
    out: dict[Fingerprint, int] = {}
    for (degs, pairing, closed), cnt in states.items():
        if cnt == 0:
            continue
        dmap = dict(degs)
        degrees = tuple(dmap.get(v, 0) for v in b)
        if closed:
            if pairing:
                continue
            fp = Fingerprint(b, degrees, Matching(()))
        else:
            # an open state with no paths is the empty selection; it only
            # realizes the all-zero fingerprint when nothing needed covering
            if not pairing and (internal or any(degrees)):
                continue
            fp = Fingerprint(b, degrees, Matching(tuple(sorted(pairing))))
        out[fp] = out.get(fp, 0) + cnt
        if modulus is not None:
            out[fp] %= modulus
    return {fp: c for fp, c in out.items() if c != 0}


def layered_decomposition(graph: AnnotatedGraph) -> PathDecomposition:
    """Simple valid decomposition: BFS layers, bags of consecutive layer pairs.

    Meant for small test graphs; the width is whatever the layering gives.
    """
    if not graph.vertices:
        return PathDecomposition([])
    remaining = set(graph.vertices)
    layers: list[list[int]] = []
    while remaining:
        start = min(remaining)
        comp_layers = [[start]]
        seen = {start}
        while True:
            nxt = sorted(
                w
                for v in comp_layers[-1]
                for w in graph.neighbors(v)
                if w not in seen and w in remaining
            )
            if not nxt:
                break
            comp_layers.append(nxt)
            seen.update(nxt)
        layers.extend(comp_layers)
        remaining -= seen
    if len(layers) == 1:
        return PathDecomposition([tuple(layers[0])])
    bags = [tuple(layers[i] + layers[i + 1]) for i in range(len(layers) - 1)]
    return PathDecomposition(bags)
