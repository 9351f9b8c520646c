import numpy as np
import pytest

from mdsarray import linalg
from mdsarray.errors import SingularSystem

Q = 101


def _random_invertible(rng, n, q=Q):
    while True:
        a = rng.integers(0, q, size=(n, n))
        if linalg.rank(a, q) == n:
            return a


def test_matmul_exact_near_overflow():
    q = 4294967291
    rng = np.random.default_rng(1)
    a = rng.integers(0, q, size=(7, 9))
    b = rng.integers(0, q, size=(9, 4))
    got = linalg.matmul(a, b, q)
    expect = np.array([[sum(int(a[i, t]) * int(b[t, j]) for t in range(9)) % q
                        for j in range(4)] for i in range(7)])
    assert np.array_equal(got, expect)


def test_inv_and_solve():
    rng = np.random.default_rng(2)
    for n in (1, 2, 5, 12):
        a = _random_invertible(rng, n)
        ai = linalg.inv(a, Q)
        assert np.array_equal(linalg.matmul(a, ai, Q), np.eye(n, dtype=np.int64))
        b = rng.integers(0, Q, size=(n, 3))
        x = linalg.solve(a, b, Q)
        assert np.array_equal(linalg.matmul(a, x, Q), b % Q)


def test_singular_raises():
    a = np.array([[1, 2], [2, 4]])
    with pytest.raises(SingularSystem):
        linalg.inv(a, Q)
    with pytest.raises(SingularSystem):
        linalg.solve(a, np.array([1, 0]), Q)


def test_rank_of_products():
    rng = np.random.default_rng(3)
    for r in range(0, 5):
        a = rng.integers(0, Q, size=(6, r))
        b = rng.integers(0, Q, size=(r, 7))
        prod = linalg.matmul(a, b, Q) if r else np.zeros((6, 7), dtype=np.int64)
        assert linalg.rank(prod, Q) <= r


def test_solve_overdetermined_detects_inconsistency():
    rng = np.random.default_rng(4)
    a = rng.integers(0, Q, size=(8, 3))
    while linalg.rank(a, Q) < 3:
        a = rng.integers(0, Q, size=(8, 3))
    x = rng.integers(0, Q, size=3)
    b = linalg.matmul(a, x, Q)
    got, consistent = linalg.solve_overdetermined(a, b, Q)
    assert consistent and np.array_equal(got, x)
    b2 = b.copy()
    b2[7] = (b2[7] + 1) % Q
    _, consistent = linalg.solve_overdetermined(a, b2, Q)
    assert not consistent


def test_solver_for_matches_solve():
    rng = np.random.default_rng(5)
    a = rng.integers(0, Q, size=(10, 4))
    while linalg.rank(a, Q) < 4:
        a = rng.integers(0, Q, size=(10, 4))
    apply_fn, sel = linalg.solver_for(a, Q)
    assert len(sel) == 4
    x = rng.integers(0, Q, size=(4, 6))
    b = linalg.matmul(a, x, Q)
    assert np.array_equal(apply_fn(b), x)


def test_nullspace_vector():
    rng = np.random.default_rng(6)
    a = rng.integers(0, Q, size=(3, 5))
    x = linalg.nullspace_vector(a, Q)
    assert x is not None and np.any(x)
    assert not np.any(linalg.matmul(a, x, Q))
    full = _random_invertible(rng, 4)
    assert linalg.nullspace_vector(full, Q) is None
