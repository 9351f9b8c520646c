import numpy as np
import pytest

from mdsarray import grsa, linalg
from mdsarray.codespec import build
from mdsarray.errors import SingularDifference


def test_operators_commute(instance):
    spec, _msg, _cw = instance
    ops = grsa.ops_for_spec(spec)
    for a in range(spec.n):
        for b in range(a + 1, spec.n):
            assert grsa.commute_check(ops[a], ops[b])


def test_pairwise_differences_invertible(instance):
    spec, _msg, _cw = instance
    ops = grsa.ops_for_spec(spec)
    for a in range(spec.n):
        for b in range(a + 1, spec.n):
            assert grsa.difference_invertible(ops[a], ops[b])


def test_apply_matches_materialize(instance):
    spec, _msg, _cw = instance
    ops = grsa.ops_for_spec(spec)
    rng = np.random.default_rng(7)
    x = rng.integers(0, spec.q, size=spec.l)
    for op in ops:
        for t in (0, 1, 2, spec.s):
            dense = op.materialize(t)
            assert np.array_equal(op.apply(x, t),
                                  linalg.matmul(dense, x, spec.q))


def test_shift_power_s_is_scalar():
    spec = build("C5", 5, 3, d=4)
    ops = grsa.ops_for_spec(spec)
    gamma = spec.field.primitive_element()
    for i, op in enumerate(ops, start=1):
        dense = op.materialize(spec.s)
        expect = pow(gamma, i, spec.q) * np.eye(spec.l, dtype=np.int64) % spec.q
        assert np.array_equal(dense, expect)


def test_beta_wraps():
    spec = build("C5", 5, 3, d=4)
    for i in range(1, 5):
        whole_row = 1
        for u in range(spec.s):
            whole_row = whole_row * spec.lam_of(i, u) % spec.q
        for u in range(spec.s):
            assert grsa.beta(spec, i, u, spec.s) == whole_row
            assert grsa.beta(spec, i, u, 0) == 1


def _diag_ops(columns, q):
    """Commuting diagonal operators from explicit eigenvalue columns."""
    l = len(columns[0])
    ops = []
    for col in columns:
        op = grsa.StructuredOp("diagonal", l, q, s=l, pos=1,
                               lam_row=tuple(col),
                               digit_table=np.arange(l)[:, None])
        ops.append(op)
    return ops


def test_block_vandermonde_invertible_direction():
    # distinct eigenvalues coordinatewise -> full block Vandermonde rank
    q = 13
    ops = _diag_ops([[1, 2], [3, 4], [5, 6]], q)
    m = grsa.block_vandermonde(ops, 3)
    assert linalg.rank(m.data, q) == m.data.shape[0]


def test_block_vandermonde_singular_counterexample():
    # shared eigenvalue in coordinate 0: the difference A1 - A2 is singular
    # and the square block Vandermonde drops rank
    q = 13
    ops = _diag_ops([[1, 2], [1, 5], [7, 8]], q)
    assert not grsa.difference_invertible(ops[0], ops[1])
    m = grsa.block_vandermonde(ops, 3)
    assert linalg.rank(m.data, q) < m.data.shape[0]
    with pytest.raises(SingularDifference):
        grsa.dual_coefficients(ops)


def test_cramer_identity_on_random_vectors():
    spec = build("C7", 5, 3, d=4)
    ops = grsa.ops_for_spec(spec)
    bs = grsa.dual_coefficients(ops)
    rng = np.random.default_rng(8)
    for _ in range(20):
        x = rng.integers(0, spec.q, size=spec.l)
        for t in range(spec.n - 1):
            acc = np.zeros(spec.l, dtype=np.int64)
            for op, b in zip(ops, bs):
                acc = (acc + op.apply(linalg.matmul(b, x, spec.q), t)) % spec.q
            assert not np.any(acc)


def test_generator_parity_pair_annihilate():
    spec = build("C7", 4, 2, d=3)
    ops = grsa.ops_for_spec(spec)
    vs = grsa.dual_coefficients(ops)  # generator multipliers
    ws = grsa.restricted_dual(ops, vs)
    g = grsa.generator_matrix(ops, vs, spec.k)
    h = grsa.parity_matrix(ops, ws, spec.r)
    assert not np.any(grsa.pair_product(h, g))
    # dual coefficients are invertible and commute with every operator
    for w in ws:
        linalg.inv(w, spec.q)
        for op in ops:
            a = op.materialize(1)
            assert np.array_equal(linalg.matmul(w, a, spec.q),
                                  linalg.matmul(a, w, spec.q))
