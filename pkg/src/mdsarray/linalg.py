"""Exact dense linear algebra over GF(q) on numpy int64 matrices.

Used for the small per-coordinate / per-orbit systems and for the dense
block-matrix work in :mod:`mdsarray.grsa`.  Entries are residues in [0, q);
multiplications go through uint64 so any q < 2^32 is safe.
"""

from __future__ import annotations

import numpy as np

from .errors import SingularSystem
from .gf import mulmod_vec


def matmul(a, b, q: int):
    """Exact (a @ b) mod q without overflow, chunked over the inner axis."""
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    inner = a.shape[-1]
    # accumulate in uint64: chunk so that chunk * (q-1)^2 < 2^64
    max_chunk = max(1, int((2**64 - 1) // max(1, (q - 1) ** 2)))
    out = np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.uint64)
    for lo in range(0, inner, max_chunk):
        hi = min(inner, lo + max_chunk)
        out = (out + np.tensordot(a[..., lo:hi], b[lo:hi], axes=1)) % q
    return out.astype(np.int64)


def _eliminate(m, q: int):
    """Row-reduce m in place (int64, mod q).  Returns list of pivot columns."""
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        inv = pow(int(m[r, c]), q - 2, q)
        m[r] = mulmod_vec(m[r], inv, q)
        other = np.nonzero(m[:, c])[0]
        other = other[other != r]
        if other.size:
            m[other] = (m[other] - mulmod_vec(m[other, c][:, None], m[r][None, :], q)) % q
        pivots.append(c)
        r += 1
    return pivots


def inv(a, q: int):
    a = np.asarray(a, dtype=np.int64) % q
    n = a.shape[0]
    aug = np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1)
    pivots = _eliminate(aug, q)
    if pivots != list(range(n)):
        raise SingularSystem("matrix not invertible")
    return aug[:, n:]


def rank(a, q: int) -> int:
    a = np.asarray(a, dtype=np.int64).copy() % q
    return len(_eliminate(a, q))


def solve(a, b, q: int):
    """Solve a @ x = b for square invertible a; b may have multiple columns."""
    a = np.asarray(a, dtype=np.int64) % q
    b = np.asarray(b, dtype=np.int64) % q
    one_d = b.ndim == 1
    if one_d:
        b = b[:, None]
    n = a.shape[0]
    aug = np.concatenate([a, b], axis=1)
    pivots = _eliminate(aug, q)
    if pivots != list(range(n)):
        raise SingularSystem("matrix not invertible")
    x = aug[:, n:]
    return x[:, 0] if one_d else x


def solve_overdetermined(a, b, q: int):
    """Solve a consistent overdetermined system a @ x = b exactly.

    Returns (x, consistent).  a has full column rank (raises SingularSystem
    otherwise); consistent is False when the extra rows contradict the
    solution.  b may have multiple columns; consistency is checked jointly.
    """
    a = np.asarray(a, dtype=np.int64) % q
    b = np.asarray(b, dtype=np.int64) % q
    one_d = b.ndim == 1
    if one_d:
        b = b[:, None]
    rows, cols = a.shape
    aug = np.concatenate([a, b], axis=1)
    pivots = _eliminate(aug, q)
    if pivots[:cols] != list(range(cols)):
        raise SingularSystem("coefficient matrix is column-rank-deficient")
    x = aug[:cols, cols:]
    consistent = not np.any(aug[cols:, cols:])
    return (x[:, 0] if one_d else x), consistent


def solver_for(a, q: int):
    """Precompute a reusable solver for a full-column-rank matrix a.

    Returns (apply_fn, sel): apply_fn(b) solves using the selected independent
    rows sel; the caller may verify consistency of the remaining rows.
    """
    a = np.asarray(a, dtype=np.int64) % q
    rows, cols = a.shape
    sel = _independent_rows(a, cols, q)
    if len(sel) < cols:
        raise SingularSystem("coefficient matrix is column-rank-deficient")
    core = inv(a[sel], q)

    def apply_fn(b):
        return matmul(core, np.asarray(b)[sel], q)

    return apply_fn, sel


def _independent_rows(a, need: int, q: int):
    """Greedy selection of `need` linearly independent rows of a."""
    rows, cols = a.shape
    basis = {}  # pivot column -> reduced row
    sel = []
    for i in range(rows):
        row = a[i].copy()
        for c, brow in basis.items():
            if row[c]:
                row = (row - mulmod_vec(row[c], brow, q)) % q
        nz = np.nonzero(row)[0]
        if nz.size == 0:
            continue
        c = int(nz[0])
        row = mulmod_vec(row, pow(int(row[c]), q - 2, q), q)
        basis[c] = row
        sel.append(i)
        if len(sel) == need:
            break
    return sel


def nullspace_vector(a, q: int):
    """One nonzero vector x with a @ x = 0, or None if a has full column rank."""
    a = np.asarray(a, dtype=np.int64).copy() % q
    rows, cols = a.shape
    pivots = _eliminate(a, q)
    if len(pivots) == cols:
        return None
    free = next(c for c in range(cols) if c not in pivots)
    x = np.zeros(cols, dtype=np.int64)
    x[free] = 1
    for r, c in enumerate(pivots):
        x[c] = (-a[r, free]) % q
    return x
