import itertools
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matchconn.exactalg import ValidationError, rank
from matchconn.hcount import count_hc_bruteforce
from matchconn.matchings import (
    Fingerprint,
    GraphConstructionError,
    Matching,
    boundaried_graph_for_fingerprint,
    build_H,
    build_M,
    enumerate_fingerprints,
    enumerate_matchings,
    fingerprint_count,
    fingerprints_combine,
    glue_boundaried,
    is_single_cycle,
    matching_count,
    union_cycle_type,
)


def double_fact(k):
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


@pytest.mark.parametrize("k", [0, 2, 4, 6, 8, 10])
def test_matching_enumeration_count_and_canonical_form(k):
    ms = enumerate_matchings(k)
    assert len(ms) == matching_count(k) == double_fact(k - 1)
    seen = set()
    for m in ms:
        assert m not in seen
        seen.add(m)
        covered = [v for pair in m.pairs for v in pair]
        assert sorted(covered) == list(range(1, k + 1))
        assert all(a < b for a, b in m.pairs)
        assert list(m.pairs) == sorted(m.pairs)


@given(st.integers(min_value=1, max_value=4), st.data())
@settings(max_examples=60, deadline=None)
def test_union_cycle_type_is_even_partition(half, data):
    k = 2 * half
    ms = enumerate_matchings(k)
    a = data.draw(st.sampled_from(ms))
    b = data.draw(st.sampled_from(ms))
    ct = union_cycle_type(a, b)
    # type 2*lambda: the doubled parts are the actual cycle lengths
    assert sum(ct.parts) == half
    assert all(p >= 1 for p in ct.parts)
    assert is_single_cycle(a, b) == (ct.parts == (half,))


def test_doubled_edge_is_a_two_cycle():
    m = Matching(((1, 2),))
    assert is_single_cycle(m, m)
    M2 = build_M(2)
    assert M2.shape == (1, 1) and M2[0, 0] == 1


@pytest.mark.parametrize("k", [4, 6, 8])
def test_connectivity_matrix_symmetry_and_row_sums(k):
    M = build_M(k)
    n = M.nrows
    want_row_sum = 2 ** (k // 2 - 1) * factorial(k // 2 - 1)
    for i in range(n):
        assert M[i, i] == 0
        assert sum(M[i, j] for j in range(n)) == want_row_sum
    for i in range(n):
        for j in range(i):
            assert M[i, j] == M[j, i]


@pytest.mark.parametrize("k,count", [(0, 1), (2, 5), (4, 43), (6, 499)])
def test_fingerprint_enumeration_count(k, count):
    fps = enumerate_fingerprints(range(1, k + 1))
    assert len(fps) == len(set(fps)) == count == fingerprint_count(k)
    formula = sum(
        comb(k, i) * double_fact(i - 1) * 2 ** (k - i) for i in range(0, k + 1, 2)
    )
    assert count == formula
    for f in fps:
        ones = f.degree_set(1)
        assert len(ones) % 2 == 0
        covered = sorted(v for pair in f.matching.pairs for v in pair)
        assert covered == sorted(ones)


def test_combine_requires_complementary_degrees():
    fps = enumerate_fingerprints(range(1, 5))
    for f, g in itertools.product(fps, repeat=2):
        c = fingerprints_combine(f, g)
        assert c == fingerprints_combine(g, f)
        if c:
            assert all(df + dg == 2 for df, dg in zip(f.degrees, g.degrees))


def test_combine_rejects_mismatched_boundaries():
    f = enumerate_fingerprints(range(1, 3))[0]
    g = enumerate_fingerprints(range(2, 4))[0]
    with pytest.raises(ValidationError):
        fingerprints_combine(f, g)


@pytest.mark.parametrize("k", [0, 1, 2, 3, 4])
def test_fingerprint_matrix_block_structure(k):
    H = build_H(k)
    fps = H.row_labels
    assert H.shape == (len(fps), len(fps))
    for i, f in enumerate(fps):
        for j, g in enumerate(fps):
            assert H[i, j] == H[j, i]
            if any(df + dg != 2 for df, dg in zip(f.degrees, g.degrees)):
                assert H[i, j] == 0


def test_fingerprint_matrix_order_zero():
    H = build_H(0)
    assert H.shape == (1, 1) and H[0, 0] == 1


@pytest.mark.parametrize(
    "k,want",
    [(1, 2), (2, 5), (3, 14), (4, 43)],
)
def test_fingerprint_matrix_rank_block_sum(k, want):
    # block sum with the order-0 rank taken as 1
    ranks = {0: 1, 2: 1, 4: 3}
    formula = sum(
        comb(k, i) * 2 ** (k - i) * ranks[i] for i in range(0, k + 1, 2)
    )
    assert formula == want
    assert rank(build_H(k)) == want


def test_boundaried_realization_degrees():
    fps = enumerate_fingerprints(range(1, 5))
    for f in fps:
        try:
            g = boundaried_graph_for_fingerprint(f)
        except GraphConstructionError:
            # only the empty-matching shapes needing a 1- or 2-vertex cycle
            assert not f.matching.pairs
            assert 1 <= len(f.degree_set(2)) <= 2
            continue
        for v, d in zip(f.boundary, f.degrees):
            assert g.degree(v) == d


def test_unconstructible_fingerprint_raises():
    f = Fingerprint((1, 2), (0, 2), Matching(()))
    with pytest.raises(GraphConstructionError):
        boundaried_graph_for_fingerprint(f)


@given(st.data())
@settings(max_examples=30, deadline=None)
def test_glued_realizations_sample_the_fingerprint_matrix(data):
    k = data.draw(st.sampled_from([2, 4]))
    H = build_H(k)
    fps = H.row_labels
    constructible = []
    for f in fps:
        try:
            boundaried_graph_for_fingerprint(f)
            constructible.append(f)
        except GraphConstructionError:
            pass
    f = data.draw(st.sampled_from(constructible))
    g = data.draw(st.sampled_from(constructible))
    glued = glue_boundaried(
        boundaried_graph_for_fingerprint(f),
        boundaried_graph_for_fingerprint(g),
        f.boundary,
    )
    got = count_hc_bruteforce(glued).value
    assert got == H[fps.index(f), fps.index(g)]


def test_fingerprint_text_is_stable():
    f = Fingerprint((1, 2, 3, 4), (1, 1, 2, 0), Matching(((1, 2),)))
    assert f.text() == "d=1120;M=1-2"
