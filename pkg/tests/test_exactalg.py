"""Exact linear algebra against independent fraction-arithmetic oracles."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matchconn.exactalg import (
    RATIONALS,
    ExactMatrix,
    PrimeField,
    ValidationError,
    det,
    full_rank_submatrix,
    identity,
    inverse,
    kronecker,
    nullity_shift,
    rank,
)

small_entries = st.integers(min_value=-6, max_value=6)


def square(rows, field=RATIONALS):
    return ExactMatrix(field, rows)


def oracle_rank(rows) -> int:
    """Plain Gaussian elimination over Fraction, written independently."""
    m = [[Fraction(x) for x in row] for row in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    r = 0
    for c in range(nc):
        pivot = next((i for i in range(r, nr) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nr):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == nr:
            break
    return r


def oracle_det(rows) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m = [[Fraction(x) for x in row] for row in rows]
    sign = 1
    out = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            sign = -sign
        out *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return sign * out


@given(st.lists(st.lists(small_entries, min_size=4, max_size=4), min_size=1, max_size=5))
@settings(max_examples=120, deadline=None)
def test_rank_matches_fraction_elimination(rows):
    assert rank(square(rows)) == oracle_rank(rows)


@given(st.integers(min_value=1, max_value=5).flatmap(
    lambda n: st.lists(st.lists(small_entries, min_size=n, max_size=n), min_size=n, max_size=n)
))
@settings(max_examples=120, deadline=None)
def test_det_matches_fraction_elimination(rows):
    got = det(square(rows))
    assert Fraction(got) == oracle_det(rows)


@given(st.lists(st.lists(small_entries, min_size=3, max_size=3), min_size=3, max_size=3))
@settings(max_examples=80, deadline=None)
def test_rank_mod_p_never_exceeds_rational_rank(rows):
    rq = rank(square(rows))
    for p in (2, 3, 5):
        rp = rank(square(rows).with_field(PrimeField(p)))
        assert rp <= rq


def test_identity_and_inverse_round_trip():
    rows = [[2, 1, 0], [1, 3, 1], [0, 1, 1]]
    for field in (RATIONALS, PrimeField(7)):
        m = square(rows, field)
        inv = inverse(m)
        prod_rows = [
            [
                sum(m[i, k] * inv[k, j] for k in range(3)) % (7 if field is not RATIONALS else 10**9)
                for j in range(3)
            ]
            for i in range(3)
        ]
        expect = identity(3, field)
        assert [[expect[i, j] for j in range(3)] for i in range(3)] == prod_rows


def test_inverse_swaps_labels():
    m = ExactMatrix(PrimeField(5), [[0, 1], [1, 0]], ["r0", "r1"], ["c0", "c1"])
    inv = inverse(m)
    assert inv.row_labels == ["c0", "c1"]
    assert inv.col_labels == ["r0", "r1"]


def test_singular_inverse_rejected():
    with pytest.raises(ValidationError):
        inverse(square([[1, 2], [2, 4]]))


def test_kronecker_shape_and_entries():
    a = square([[1, 2], [3, 4]])
    b = square([[0, 1], [1, 0]])
    k = kronecker(a, b)
    assert k.shape == (4, 4)
    # top-left 2x2 block is a[0,0] * b
    assert [k[0, 0], k[0, 1], k[1, 0], k[1, 1]] == [0, 1, 1, 0]
    assert [k[2, 2], k[2, 3], k[3, 2], k[3, 3]] == [0, 4, 4, 0]


@given(
    st.lists(st.lists(small_entries, min_size=2, max_size=2), min_size=2, max_size=2),
    st.lists(st.lists(small_entries, min_size=2, max_size=2), min_size=2, max_size=2),
)
@settings(max_examples=40, deadline=None)
def test_kronecker_rank_multiplicative_over_prime_field(ra, rb):
    p = PrimeField(11)
    a = square(ra, p)
    b = square(rb, p)
    assert rank(kronecker(a, b)) == rank(a) * rank(b)


def test_nullity_shift_counts_eigenspace():
    # [[2,0],[0,3]] loses rank 1 exactly at shifts 2 and 3
    m = square([[2, 0], [0, 3]])
    assert nullity_shift(m, 2) == 1
    assert nullity_shift(m, 3) == 1
    assert nullity_shift(m, 5) == 0


def test_full_rank_submatrix_extracts_invertible_block():
    rows = [[1, 1, 0], [2, 2, 0], [0, 1, 1]]
    m = square(rows, PrimeField(5))
    ridx, cidx = full_rank_submatrix(m)
    assert len(ridx) == len(cidx) == rank(m) == 2
    block = m.submatrix(ridx, cidx)
    assert rank(block) == 2


def test_full_rank_submatrix_respects_filters():
    m = ExactMatrix(
        PrimeField(3),
        [[1, 0, 1], [0, 1, 1], [1, 1, 2]],
        ["a", "b", "c"],
        ["x", "y", "z"],
    )
    ridx, cidx = full_rank_submatrix(
        m, row_filter=lambda lab: lab != "a", col_filter=lambda lab: lab != "z"
    )
    assert all(m.row_labels[i] != "a" for i in ridx)
    assert all(m.col_labels[j] != "z" for j in cidx)
    assert rank(m.submatrix(ridx, cidx)) == len(ridx)


def test_prime_field_rejects_composites():
    with pytest.raises(ValidationError):
        PrimeField(6)


def test_ragged_rows_rejected():
    with pytest.raises(ValidationError):
        square([[1, 2], [3]])
