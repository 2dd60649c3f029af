"""Cycle counters: published small cases, oracle equivalence, DP discipline.

The three counting routes (frontier brute force, subset backtracking, bag
DP) are deliberately independent; most tests here pit them against each
other on random inputs.
"""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matchconn.exactalg import CapacityError
from matchconn.graphs import AnnotatedGraph, DecompositionError, PathDecomposition
from matchconn.hcount import (
    count_hc_bruteforce,
    count_hc_pathdp,
    count_partial_solutions,
    enumerate_hamiltonian_cycles,
    layered_decomposition,
    partial_solution_spectrum,
)
from matchconn.matchings import (
    Fingerprint,
    Matching,
    enumerate_fingerprints,
    fingerprints_combine,
    glue_boundaried,
)


def complete_graph(n):
    g = AnnotatedGraph()
    for v in range(1, n + 1):
        g.add_vertex(v)
    for u, v in itertools.combinations(range(1, n + 1), 2):
        g.add_edge(u, v)
    return g


def cycle_graph(n):
    g = AnnotatedGraph()
    for v in range(1, n + 1):
        g.add_vertex(v)
    for v in range(1, n):
        g.add_edge(v, v + 1)
    g.add_edge(n, 1)
    return g


def random_graph(rng, n, p=0.5):
    g = AnnotatedGraph()
    for v in range(1, n + 1):
        g.add_vertex(v)
    for u, v in itertools.combinations(range(1, n + 1), 2):
        if rng.random() < p:
            g.add_edge(u, v)
    return g


# -- published small cases ---------------------------------------------------


def test_complete_graph_on_four_vertices():
    assert count_hc_bruteforce(complete_graph(4)).value == 3


def test_five_cycle():
    assert count_hc_bruteforce(cycle_graph(5)).value == 1


def test_complete_bipartite_three_three():
    g = AnnotatedGraph()
    for v in range(1, 7):
        g.add_vertex(v)
    for u in (1, 2, 3):
        for v in (4, 5, 6):
            g.add_edge(u, v)
    assert count_hc_bruteforce(g).value == 6
    # cross-check with the explicit enumerator
    assert sum(1 for _ in enumerate_hamiltonian_cycles(g)) == 6


def test_empty_graph_counts_one():
    assert count_hc_bruteforce(AnnotatedGraph()).value == 1


@pytest.mark.parametrize("n", [1, 2])
def test_tiny_graphs_count_zero(n):
    assert count_hc_bruteforce(complete_graph(n)).value == 0


def test_capacity_ceiling():
    with pytest.raises(CapacityError):
        count_hc_bruteforce(complete_graph(21))


def test_six_cycle_with_natural_decomposition():
    g = cycle_graph(6)
    bags = [(1, 2, 6), (2, 3, 6), (3, 4, 6), (4, 5, 6)]
    assert count_hc_pathdp(g, PathDecomposition(bags)).value == 1


def test_invalid_decomposition_names_the_violation():
    g = cycle_graph(4)
    with pytest.raises(DecompositionError) as err:
        count_hc_pathdp(g, PathDecomposition([(1, 2), (3, 4)]))
    assert "fits in no bag" in str(err.value)


# -- oracle equivalence ------------------------------------------------------


def test_dp_matches_bruteforce_on_random_graphs():
    rng = random.Random(1234)
    for trial in range(100):
        g = random_graph(rng, rng.randint(3, 12), rng.uniform(0.2, 0.9))
        want = count_hc_bruteforce(g).value
        got = count_hc_pathdp(g, layered_decomposition(g)).value
        assert got == want, f"trial {trial}"


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_modular_consistency(p):
    rng = random.Random(99 + p)
    for _ in range(25):
        g = random_graph(rng, rng.randint(4, 10))
        d = layered_decomposition(g)
        exact = count_hc_pathdp(g, d).value
        residue = count_hc_pathdp(g, d, modulus=p).value
        assert residue == exact % p


@given(st.integers(min_value=3, max_value=8), st.integers(min_value=0, max_value=2**28 - 1))
@settings(max_examples=50, deadline=None)
def test_enumerator_agrees_with_counter(n, seed):
    g = random_graph(random.Random(seed), n)
    cycles = list(enumerate_hamiltonian_cycles(g))
    assert len(cycles) == count_hc_bruteforce(g).value
    for cyc in cycles:
        # each cycle is a set of n distinct edges covering every vertex twice
        assert len(set(cyc)) == n
        degree = {}
        for u, v in cyc:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        assert set(degree.values()) == {2} and len(degree) == n


# -- partial solutions -------------------------------------------------------


def test_single_edge_single_path():
    g = AnnotatedGraph()
    g.add_edge(1, 2)
    fp = Fingerprint((1, 2), (1, 1), Matching(((1, 2),)))
    assert count_partial_solutions(g, (1, 2), fp).value == 1


def test_isolated_vertex_cannot_reach_degree_two():
    g = AnnotatedGraph()
    g.add_vertex(1)
    g.add_vertex(2)
    g.add_edge(1, 2)
    g.add_vertex(3)
    fp = Fingerprint((3,), (2,), Matching(()))
    assert count_partial_solutions(g, (3,), fp).value == 0


def test_partial_solutions_exclude_closed_cycles_with_paths():
    # a triangle hanging off the boundary cannot appear next to an open path
    g = AnnotatedGraph()
    g.add_edge(1, 2)
    g.add_edge(3, 4)
    g.add_edge(4, 5)
    g.add_edge(5, 3)
    fp = Fingerprint((1, 2), (1, 1), Matching(((1, 2),)))
    assert count_partial_solutions(g, (1, 2), fp).value == 0


def test_spectrum_matches_per_fingerprint_counts():
    rng = random.Random(42)
    for _ in range(20):
        n = rng.randint(4, 8)
        g = random_graph(rng, n, 0.6)
        boundary = tuple(sorted(rng.sample(sorted(g.vertices), rng.choice([2, 4]))))
        spectrum = partial_solution_spectrum(g, boundary)
        assert all(c > 0 for c in spectrum.values())
        for fp in enumerate_fingerprints(boundary):
            want = count_partial_solutions(g, boundary, fp).value
            assert spectrum.get(fp, 0) == want


def test_spectrum_respects_modulus():
    rng = random.Random(7)
    g = random_graph(rng, 8, 0.7)
    boundary = (1, 2)
    exact = partial_solution_spectrum(g, boundary)
    mod = partial_solution_spectrum(g, boundary, modulus=3)
    for fp, c in exact.items():
        assert mod.get(fp, 0) == c % 3


def _random_side(rng, boundary, internals, density, with_boundary_edges):
    g = AnnotatedGraph()
    for v in boundary + internals:
        g.add_vertex(v)
    verts = sorted(g.vertices)
    bset = set(boundary)
    for i, u in enumerate(verts):
        for v in verts[i + 1 :]:
            if u in bset and v in bset and not with_boundary_edges:
                continue
            if rng.random() < density:
                g.add_edge(u, v)
    return g


def test_split_identity_combining_pairs_give_the_cycle_count():
    # Glue two random boundaried graphs and recover the Hamiltonian cycle
    # count from their partial-solution spectra. Pairs whose matchings are
    # both nonempty and whose union closes a single cycle are the ones that
    # glue to a Hamiltonian cycle. Pairs with two empty matchings glue to one
    # closed cycle per side, two disjoint cycles in total, so they stay out
    # of the sum even though the pairing rule accepts them.
    rng = random.Random(2718)
    saw_nonzero = saw_both_closed = False
    for _ in range(25):
        k = rng.choice([2, 4])
        boundary = tuple(range(1, k + 1))
        na, nb = rng.randint(1, 3), rng.randint(1, 3)
        side_a = _random_side(
            rng, boundary, tuple(range(k + 1, k + 1 + na)), 0.7, False
        )
        side_b = _random_side(
            rng, boundary, tuple(range(k + 1 + na, k + 1 + na + nb)), 0.7, True
        )
        g = glue_boundaried(side_a, side_b, boundary)
        spec_a = partial_solution_spectrum(side_a, boundary)
        spec_b = partial_solution_spectrum(side_b, boundary)
        total = 0
        for fa, ca in spec_a.items():
            for fb, cb in spec_b.items():
                if not fingerprints_combine(fa, fb):
                    continue
                if fa.matching.pairs and fb.matching.pairs:
                    total += ca * cb
                else:
                    saw_both_closed = True
        assert total == count_hc_bruteforce(g).value
        saw_nonzero = saw_nonzero or total > 0
    assert saw_nonzero
    assert saw_both_closed


def test_split_identity_with_an_edgeless_side():
    # Degenerate split: one side carries the whole graph, the other is just
    # the bare boundary vertices. The edgeless side realizes only the
    # all-zero fingerprint via the empty selection, which combines with the
    # closed all-degree-two fingerprint on the full side, so the plain sum
    # over all combining pairs gives the cycle count.
    g = complete_graph(5)
    boundary = (1, 2)
    bare = AnnotatedGraph()
    bare.add_vertex(1)
    bare.add_vertex(2)
    spec_bare = partial_solution_spectrum(bare, boundary)
    assert spec_bare == {Fingerprint(boundary, (0, 0), Matching(())): 1}
    spec_full = partial_solution_spectrum(g, boundary)
    total = 0
    for fa, ca in spec_bare.items():
        for fb, cb in spec_full.items():
            if fingerprints_combine(fa, fb):
                total += ca * cb
    assert total == count_hc_bruteforce(g).value == 12


def test_boundary_must_be_known():
    g = cycle_graph(4)
    fp = Fingerprint((9,), (0,), Matching(()))
    with pytest.raises(Exception):
        count_partial_solutions(g, (9,), fp)
