import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stronglie.linalg import mat_inverse, rank_mod_p, rref, solve_left


def naive_rank(rows, p):
    """Textbook elimination on lists, kept separate from the numpy code."""
    m = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], p - 2, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


matrices = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 100), min_size=n, max_size=n), min_size=1, max_size=7)
)


@settings(max_examples=150, deadline=None)
@given(matrices, st.sampled_from([2, 3, 5, 7, 2147483647]))
def test_rank_matches_naive(rows, p):
    assert rank_mod_p(rows, p) == naive_rank(rows, p)


@settings(max_examples=100, deadline=None)
@given(matrices, st.sampled_from([2, 3, 7]))
def test_transform_reproduces_rows(rows, p):
    a = np.array(rows) % p
    ech = rref(a, p, track=True)
    assert np.array_equal(ech.transform @ a % p, ech.rows)
    for i, c in enumerate(ech.pivots):
        col = ech.rows[:, c]
        assert col[i] == 1 and np.count_nonzero(col) == 1


def test_large_prime_no_overflow():
    p = 2147483647
    a = np.array([[p - 1, p - 2], [p - 3, p - 5]])
    inv = mat_inverse(a, p)
    prod = [[sum(int(a[i, k]) * int(inv[k, j]) for k in range(2)) % p for j in range(2)] for i in range(2)]
    assert prod == [[1, 0], [0, 1]]


def test_solve_left():
    a = np.array([[1, 0, 1], [0, 1, 1]])
    x = solve_left(a, [2, 1, 0], 3)
    assert (x @ a % 3).tolist() == [2, 1, 0]
    assert solve_left(a, [1, 0, 0], 3) is None
    assert solve_left(np.zeros((0, 3)), [0, 0, 0], 3).size == 0


def test_reduce_normal_form():
    ech = rref([[1, 1, 0]], 5)
    nf, mults = ech.reduce([3, 4, 2])
    assert nf.tolist() == [0, 1, 2]
    assert mults.tolist() == [3]


def test_singular_inverse():
    with pytest.raises(ZeroDivisionError):
        mat_inverse([[1, 2], [2, 4]], 7)
    with pytest.raises(ValueError):
        mat_inverse([[1, 2, 3]], 7)
