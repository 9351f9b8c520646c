"""Operators behind the parity checks, and block-matrix algebra over them.

Every construction's parity-check rows are powers of n pairwise-commuting
l x l operators.  The operators are never stored densely on hot paths:
each one is either diagonal in the standard basis or a weighted cyclic
shift of one base-s digit, so applying a power costs O(l).  Dense
materialization is used for the block Vandermonde / dual-coefficient
algebra and inside tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .codespec import CodeSpec
from .errors import SingularDifference
from .gf import mulmod_vec, powmod_vec


@dataclass
class StructuredOp:
    """One parity operator: diagonal, digit shift-scale, or identity."""

    kind: str          # "diagonal" | "shift" | "identity"
    l: int
    q: int
    s: int = 1
    pos: int = 0       # 1-based digit position (diagonal/shift)
    lam_row: tuple[int, ...] = ()
    digit_table: np.ndarray | None = field(default=None, repr=False)

    def coord_map(self, t: int):
        """Arrays (coeff, src) with (A^t x)[a] = coeff[a] * x[src[a]]."""
        l, q = self.l, self.q
        if self.kind == "identity" or t == 0:
            return np.ones(l, dtype=np.int64), np.arange(l, dtype=np.int64)
        dig = self.digit_table[:, self.pos - 1]
        if self.kind == "diagonal":
            lam = np.asarray(self.lam_row, dtype=np.int64)[dig]
            return powmod_vec(lam, t, q), np.arange(l, dtype=np.int64)
        # shift-scale: coeff is the wrapped product of t consecutive weights
        beta = self._beta_table(t)
        step = self.s ** (self.pos - 1)
        src = np.arange(l, dtype=np.int64) + ((dig + t) % self.s - dig) * step
        return beta[dig], src

    def _beta_table(self, t: int) -> np.ndarray:
        """beta[u] = product of lam_row over the t slots starting at u (mod s)."""
        s, q = self.s, self.q
        beta = np.ones(s, dtype=np.int64)
        lam = np.asarray(self.lam_row, dtype=np.int64)
        for c in range(t):
            beta = mulmod_vec(beta, lam[(np.arange(s) + c) % s], q)
        return beta

    def apply(self, x: np.ndarray, t: int) -> np.ndarray:
        coeff, src = self.coord_map(t)
        return mulmod_vec(coeff, np.asarray(x, dtype=np.int64)[src], self.q)

    def materialize(self, t: int = 1) -> np.ndarray:
        coeff, src = self.coord_map(t)
        out = np.zeros((self.l, self.l), dtype=np.int64)
        out[np.arange(self.l), src] = coeff
        return out


def beta(spec: CodeSpec, i: int, u: int, t: int) -> int:
    """Wrapped product of t consecutive coefficients of node i starting at u."""
    out = 1
    for c in range(t):
        out = out * spec.lam_of(i, (u + c) % spec.s) % spec.q
    return out


def ops_for_spec(spec: CodeSpec) -> list[StructuredOp]:
    """The n parity operators of a spec (1-based node i at index i-1)."""
    table = spec.digit_table()
    ops = []
    for i in range(1, spec.n + 1):
        if i == spec.identity_node:
            ops.append(StructuredOp("identity", spec.l, spec.q))
        elif spec.diagonal:
            ops.append(StructuredOp("diagonal", spec.l, spec.q, spec.s, i,
                                    spec.lam[i - 1], table))
        else:
            ops.append(StructuredOp("shift", spec.l, spec.q, spec.s, i,
                                    spec.lam[i - 1], table))
    return ops


def compose_maps(outer, inner, q: int):
    """Coordinate map of (Outer @ Inner) from the two factor maps."""
    co, so = outer
    ci, si = inner
    return mulmod_vec(co, ci[so], q), si[so]


def commute_check(op1: StructuredOp, op2: StructuredOp) -> bool:
    """Exact check A1 A2 == A2 A1 (exhaustive over the standard basis)."""
    m12 = compose_maps(op1.coord_map(1), op2.coord_map(1), op1.q)
    m21 = compose_maps(op2.coord_map(1), op1.coord_map(1), op1.q)
    return bool(np.array_equal(m12[0] % op1.q, m21[0] % op1.q)
                and np.array_equal(m12[1], m21[1]))


def difference_invertible(op1: StructuredOp, op2: StructuredOp) -> bool:
    q = op1.q
    diff = (op1.materialize(1) - op2.materialize(1)) % q
    return linalg.rank(diff, q) == op1.l


@dataclass
class BlockMatrix:
    """Dense matrix of l x l blocks over GF(q)."""

    data: np.ndarray  # (rows*l, cols*l)
    l: int
    q: int

    @property
    def block_shape(self):
        return self.data.shape[0] // self.l, self.data.shape[1] // self.l

    def block(self, i: int, j: int) -> np.ndarray:
        l = self.l
        return self.data[i * l:(i + 1) * l, j * l:(j + 1) * l]


def block_vandermonde(ops: list[StructuredOp], rows: int) -> BlockMatrix:
    """Block matrix whose block row t holds the t-th powers of each operator."""
    l, q = ops[0].l, ops[0].q
    data = np.zeros((rows * l, len(ops) * l), dtype=np.int64)
    for j, op in enumerate(ops):
        for t in range(rows):
            data[t * l:(t + 1) * l, j * l:(j + 1) * l] = op.materialize(t)
    return BlockMatrix(data, l, q)


def generator_matrix(ops: list[StructuredOp], multipliers: list[np.ndarray],
                     k: int) -> BlockMatrix:
    """Generator of the array code: block (t, i) = A_i^t V_i, t = 0..k-1."""
    l, q = ops[0].l, ops[0].q
    data = np.zeros((k * l, len(ops) * l), dtype=np.int64)
    for i, (op, v) in enumerate(zip(ops, multipliers)):
        for t in range(k):
            data[t * l:(t + 1) * l, i * l:(i + 1) * l] = linalg.matmul(
                op.materialize(t), v, q)
    return BlockMatrix(data, l, q)


def parity_matrix(ops: list[StructuredOp], duals: list[np.ndarray],
                  r: int) -> BlockMatrix:
    """Parity checks of the array code: block (m, i) = A_i^m W_i."""
    l, q = ops[0].l, ops[0].q
    data = np.zeros((r * l, len(ops) * l), dtype=np.int64)
    for i, (op, w) in enumerate(zip(ops, duals)):
        for m in range(r):
            data[m * l:(m + 1) * l, i * l:(i + 1) * l] = linalg.matmul(
                op.materialize(m), w, q)
    return BlockMatrix(data, l, q)


def pair_product(h: BlockMatrix, g: BlockMatrix) -> np.ndarray:
    """Blockwise product sum_i H_(m,i) G_(t,i); all-zero for a dual pair.

    The entries of a matching pair commute, so this blockwise form is the
    array analogue of the scalar parity-times-generator-transpose product.
    """
    l, q = h.l, h.q
    hr, n = h.block_shape
    gr, _ = g.block_shape
    out = np.zeros((hr * l, gr * l), dtype=np.int64)
    for m in range(hr):
        for t in range(gr):
            acc = np.zeros((l, l), dtype=np.int64)
            for i in range(n):
                acc = (acc + linalg.matmul(h.block(m, i), g.block(t, i), q)) % q
            out[m * l:(m + 1) * l, t * l:(t + 1) * l] = acc
    return out


def _difference_products(mats: list[np.ndarray], q: int) -> list[np.ndarray]:
    """For each i: inverse of prod_{j != i} (A_j - A_i), ascending j."""
    out = []
    l = mats[0].shape[0]
    for i, ai in enumerate(mats):
        prod = np.eye(l, dtype=np.int64)
        for j, aj in enumerate(mats):
            if j == i:
                continue
            prod = linalg.matmul(prod, (aj - ai) % q, q)
        try:
            out.append(linalg.inv(prod, q))
        except Exception as exc:
            raise SingularDifference(
                f"difference product for operator {i} is singular") from exc
    return out


def dual_coefficients(ops: list[StructuredOp],
                      multipliers: list[np.ndarray] | None = None) -> list[np.ndarray]:
    """Dense parity multipliers W_i of the dual code.

    With generator multipliers V_i, W_i = V_i^{-1} (prod_{j != i}(A_j - A_i))^{-1}.
    multipliers=None means V_i = I for all i.
    """
    q = ops[0].q
    mats = [op.materialize(1) for op in ops]
    bs = _difference_products(mats, q)
    if multipliers is None:
        return bs
    return [linalg.matmul(linalg.inv(v, q), b, q) for v, b in zip(multipliers, bs)]


def restricted_dual(ops_subset: list[StructuredOp],
                    multipliers_subset: list[np.ndarray]) -> list[np.ndarray]:
    """Dual multipliers of the code restricted to a node subset."""
    return dual_coefficients(ops_subset, multipliers_subset)
