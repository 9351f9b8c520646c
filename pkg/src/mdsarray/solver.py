"""Solving parity-check systems for missing node columns.

Never builds the full rl x rl block system.  Diagonal constructions split
into l independent e x e Vandermonde systems, batched by the digit pattern
of the erased nodes.  Shift-scale constructions group coordinates into
orbits whose digits at the erased positions vary; the orbit coefficient
matrix is identical for every orbit, so it is factored once and applied to
all orbit right-hand sides at once.
"""

from __future__ import annotations

import numpy as np

from . import grsa, linalg
from .codespec import CodeSpec
from .errors import SingularSystem
from .gf import mulmod_vec, powmod_vec


def solve_parity(spec: CodeSpec, known: dict[int, np.ndarray], unknown: list[int]):
    """Solve the parity checks for the columns of `unknown` given `known`.

    known maps node -> full column.  Requires len(known) >= k.  Returns
    (columns, consistent): columns maps each unknown node to its column;
    consistent is False when the known columns violate the parity checks
    they are jointly involved in (possible only when len(known) > k).
    """
    if not unknown:
        return {}, True
    if spec.diagonal:
        return _solve_diagonal(spec, known, unknown)
    return _solve_orbits(spec, known, unknown)


def _solve_diagonal(spec, known, unknown):
    q, s, r, l = spec.q, spec.s, spec.r, spec.l
    e = len(unknown)
    dt = spec.digit_table()

    # rhs[t] = - sum over known nodes of lam_{j,a_j}^t c_{j,a}, vectorized in a
    rhs = np.zeros((r, l), dtype=np.int64)
    for j, col in known.items():
        lam_j = np.asarray(spec.lam[j - 1], dtype=np.int64)[dt[:, j - 1]]
        term = np.asarray(col, dtype=np.int64) % q
        for t in range(r):
            rhs[t] = (rhs[t] - term) % q
            if t + 1 < r:
                term = mulmod_vec(term, lam_j, q)

    # batch coordinates by the digit pattern of the unknown nodes
    pid = np.zeros(l, dtype=np.int64)
    for idx, j in enumerate(unknown):
        pid += dt[:, j - 1] * s**idx

    out = {j: np.zeros(l, dtype=np.int64) for j in unknown}
    consistent = True
    inv_cache = _diag_cache(spec, tuple(unknown))
    for p in np.unique(pid):
        key = int(p)
        if key not in inv_cache:
            lams = [spec.lam_of(j, (key // s**idx) % s)
                    for idx, j in enumerate(unknown)]
            vand = np.array([[pow(lam, t, q) for lam in lams] for t in range(r)],
                            dtype=np.int64)
            inv_cache[key] = (linalg.inv(vand[:e], q), vand[e:])
        top_inv, lower = inv_cache[key]
        sel = np.nonzero(pid == p)[0]
        x = linalg.matmul(top_inv, rhs[:e, sel], q)
        if lower.size and np.any((linalg.matmul(lower, x, q) - rhs[e:, sel]) % q):
            consistent = False
        for idx, j in enumerate(unknown):
            out[j][sel] = x[idx]
    return out, consistent


_diag_caches: dict = {}


def _diag_cache(spec, unknown_key):
    return _diag_caches.setdefault((spec, unknown_key), {})


def _solve_orbits(spec, known, unknown):
    q, s, r, l = spec.q, spec.s, spec.r, spec.l
    dt = spec.digit_table()
    ops = grsa.ops_for_spec(spec)
    e = len(unknown)
    # digit positions owned by the unknown nodes (identity node owns none)
    positions = [spec.digit_pos(j) for j in unknown if spec.digit_pos(j) is not None]
    np_ = len(positions)
    sp = s**np_

    matrix, solver = _orbit_solver(spec, tuple(unknown), positions, sp)

    # right-hand sides: - sum over known nodes of (A_j^t C_j)[a]
    rhs = np.zeros((r, l), dtype=np.int64)
    for j, col in known.items():
        col = np.asarray(col, dtype=np.int64) % q
        for t in range(r):
            rhs[t] = (rhs[t] - ops[j - 1].apply(col, t)) % q

    # orbit decomposition: local pattern = digits at `positions`
    pat = np.zeros(l, dtype=np.int64)
    base = np.arange(l, dtype=np.int64)
    for idx, p in enumerate(positions):
        dig = dt[:, p - 1]
        pat += dig * s**idx
        base = base - dig * s ** (p - 1)
    _, orb = np.unique(base, return_inverse=True)
    norb = l // sp

    big = np.zeros((r * sp, norb), dtype=np.int64)
    for t in range(r):
        big[pat * r + t, orb] = rhs[t]

    apply_fn, _sel = solver
    x = apply_fn(big)
    consistent = not np.any((linalg.matmul(matrix, x, q) - big) % q)

    out = {}
    for ui, j in enumerate(unknown):
        col = np.zeros(l, dtype=np.int64)
        col[:] = x[ui * sp + pat, orb]
        out[j] = col
    return out, consistent


_orbit_caches: dict = {}


def _orbit_solver(spec, unknown_key, positions, sp):
    key = (spec, unknown_key)
    if key in _orbit_caches:
        return _orbit_caches[key]
    q, s, r = spec.q, spec.s, spec.r
    e = len(unknown_key)
    matrix = np.zeros((r * sp, e * sp), dtype=np.int64)
    pos_index = {p: idx for idx, p in enumerate(positions)}
    for pat in range(sp):
        digs = {p: (pat // s**pos_index[p]) % s for p in positions}
        for t in range(r):
            row = pat * r + t
            for ui, j in enumerate(unknown_key):
                p = spec.digit_pos(j)
                if p is None:
                    matrix[row, ui * sp + pat] = (matrix[row, ui * sp + pat] + 1) % q
                else:
                    u = digs[p]
                    coeff = grsa.beta(spec, j, u, t)
                    pat2 = pat + ((u + t) % s - u) * s**pos_index[p]
                    matrix[row, ui * sp + pat2] = (matrix[row, ui * sp + pat2]
                                                   + coeff) % q
    try:
        solver = linalg.solver_for(matrix, q)
    except SingularSystem as exc:
        raise SingularSystem(
            f"orbit system for erased nodes {unknown_key} is singular") from exc
    _orbit_caches[key] = (matrix, solver)
    return matrix, solver
