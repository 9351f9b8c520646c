"""Node repair engines with optimal download, and their metering.

Three families of engines:

* diagonal constructions (C1-C3): helpers send block sums of their column;
  each repair group is a scalar generalized Reed-Solomon codeword across
  helpers, decoded (with optional error correction) and then inverted
  through a small Vandermonde system.  Multi-node repair proceeds in
  stages; later stages derive most of their block sums from earlier ones
  instead of downloading them again.
* shift-scale constructions (C4-C6): helpers send raw symbols whose index
  has a distinguished digit in a coset; the missing column follows by
  back-substitution through the parity rows, after an optional projected
  decode when fewer than n-1 helpers participate.
* C7: helpers premultiply their column by a dual coefficient matrix of the
  code restricted to the repair group and send a digit-coset slice.

Every engine returns a :class:`RepairTrace` with exact per-helper meters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import grs, grsa, linalg, solver
from .codespec import CodeSpec
from .errors import (BadParameters, DecodingFailure, NotIntegral,
                     SingularSystem, TooFewHelpers, TooManyFailures,
                     UnsupportedSpec)
from .gf import mulmod_vec, powmod_vec

__all__ = ["RepairTrace", "bound_bandwidth", "repair_single", "repair_d",
           "repair_access", "repair_multi"]


@dataclass
class RepairTrace:
    """Outcome and exact meters of one repair operation."""

    failed: tuple[int, ...]
    helpers: tuple[int, ...]
    d: int
    t: int
    recovered: dict  # node -> column
    transmitted: dict  # helper -> symbol count sent
    accessed: dict  # helper -> sorted array of coordinates read
    errors_found: set = field(default_factory=set)
    optimal: bool = True

    @property
    def total_transmitted(self) -> int:
        return sum(self.transmitted.values())

    @property
    def total_accessed(self) -> int:
        return sum(len(v) for v in self.accessed.values())


def bound_bandwidth(spec: CodeSpec, d: int, h: int = 1, t: int = 0) -> int:
    """Information-theoretic minimum download for h failures, d helpers,
    t corrupt helpers (so d + 2t transmitting nodes)."""
    num = h * (d + 2 * t) * spec.l
    den = h + d - spec.k
    if den <= 0:
        raise BadParameters(f"d={d}, h={h} leave no information margin")
    if num % den:
        raise NotIntegral(
            f"bound {num}/{den} is not an integer for this geometry")
    return num // den


def _validate(spec, failed, helpers, t):
    failed = tuple(sorted(set(int(i) for i in failed)))
    helpers = tuple(sorted(set(int(v) for v in helpers)))
    for i in failed + helpers:
        if not 1 <= i <= spec.n:
            raise BadParameters(f"node {i} outside [1, {spec.n}]")
    if set(failed) & set(helpers):
        raise BadParameters("failed nodes cannot be helpers")
    if t < 0:
        raise BadParameters("error budget t must be >= 0")
    h = len(failed)
    if h == 0:
        raise BadParameters("nothing to repair")
    if h > spec.r:
        raise TooManyFailures(f"{h} failures exceed redundancy {spec.r}")
    d = len(helpers) - 2 * t
    if d < spec.k:
        raise TooFewHelpers(
            f"{len(helpers)} helpers with t={t} leave d={d} < k={spec.k}")
    if d > spec.n - h:
        raise BadParameters(f"d={d} exceeds surviving node count {spec.n - h}")
    return failed, helpers, d


def repair_single(spec: CodeSpec, cw, i: int) -> RepairTrace:
    """Repair one node from all n-1 survivors."""
    helpers = [v for v in range(1, spec.n + 1) if v != i]
    return repair_d(spec, cw, i, helpers, 0)


def repair_d(spec: CodeSpec, cw, i: int, helpers, t: int = 0) -> RepairTrace:
    """Repair node i from a chosen helper set, tolerating t corrupt helpers."""
    (i,), helpers, d = _validate(spec, [i], helpers, t)
    for v in helpers:
        if cw.column(v) is None:
            raise BadParameters(f"helper {v} has no column")
    s_d = d + 1 - spec.k
    if spec.s % s_d:
        raise UnsupportedSpec(
            f"d={d} not supported: group arity {s_d} does not divide s={spec.s}")
    if s_d == 1:
        return _repair_full_download(spec, cw, (i,), helpers, t, d)
    if spec.diagonal:
        return _repair_diag_single(spec, cw, i, helpers, t, d)
    if spec.construction == "C7":
        return _repair_c7(spec, cw, i, helpers, t, d)
    if spec.construction == "C4":
        if d != spec.n - 1 or t != 0:
            raise UnsupportedSpec(
                "this construction repairs only from all n-1 survivors")
        return _repair_c4(spec, cw, i, helpers, d)
    return _repair_access_single(spec, cw, i, helpers, t, d)


def repair_access(spec: CodeSpec, cw, i: int, helpers, t: int = 0) -> RepairTrace:
    """Access-optimal repair (constructions C4, C5, C6)."""
    if spec.diagonal or spec.construction == "C7":
        raise UnsupportedSpec(
            f"{spec.construction} does not read exactly what it sends")
    return repair_d(spec, cw, i, helpers, t)


def repair_multi(spec: CodeSpec, cw, failed, helpers, t: int = 0) -> RepairTrace:
    """Repair several nodes at once, stage by stage."""
    failed, helpers, d = _validate(spec, failed, helpers, t)
    for v in helpers:
        if cw.column(v) is None:
            raise BadParameters(f"helper {v} has no column")
    if len(failed) == 1:
        return repair_d(spec, cw, failed[0], helpers, t)
    for stage in range(1, len(failed) + 1):
        if spec.s % (d - spec.k + stage):
            raise UnsupportedSpec(
                f"stage {stage} needs group arity {d - spec.k + stage} "
                f"dividing s={spec.s}")
    if spec.diagonal:
        return _repair_multi_diag(spec, cw, failed, helpers, t, d)
    if spec.construction in ("C5", "C6"):
        return _repair_multi_access(spec, cw, failed, helpers, t, d)
    raise UnsupportedSpec(
        f"{spec.construction} has no multi-node repair schedule")


# ---------------------------------------------------------------- fallback

def _repair_full_download(spec, cw, failed, helpers, t, d):
    """Download whole helper columns and decode; optimal only when the
    repair group arity is 1."""
    q = spec.q
    cols = {v: cw.column(v) for v in helpers}
    for esize in range(t + 1):
        for bad in combinations(helpers, esize):
            known = {v: cols[v] for v in helpers if v not in bad}
            if len(known) < spec.k:
                continue
            unknown = [j for j in range(1, spec.n + 1) if j not in known]
            if len(unknown) > spec.r:
                continue
            try:
                sol, consistent = solver.solve_parity(spec, known, unknown)
            except SingularSystem:
                continue
            if consistent:
                trace = RepairTrace(
                    failed=failed, helpers=helpers, d=d, t=t,
                    recovered={i: sol[i] for i in failed},
                    transmitted={v: spec.l for v in helpers},
                    accessed={v: np.arange(spec.l) for v in helpers},
                    errors_found=set(bad))
                trace.optimal = _is_optimal(spec, trace, len(failed))
                return trace
    raise DecodingFailure("no consistent codeword within the error budget")


def _is_optimal(spec, trace, h):
    try:
        return trace.total_transmitted == bound_bandwidth(
            spec, trace.d, h, trace.t)
    except NotIntegral:
        return False


# ------------------------------------------------------- diagonal family

_group_code_cache: dict = {}
_diag_map_cache: dict = {}
_vand_inv_cache: dict = {}


def _group_code(spec, i, digs, j, s_d):
    """Evaluation points and multipliers of the helper-sum code of a group.

    digs are the coordinate digits of the n-1 nodes other than i (in node
    order); j is the 0-based block index inside a column digit.
    """
    key = (spec, i, digs, j, s_d)
    hit = _group_code_cache.get(key)
    if hit is not None:
        return hit
    q = spec.q
    others = [v for v in range(1, spec.n + 1) if v != i]
    alphas = [spec.lam_of(v, digs[p]) for p, v in enumerate(others)]
    block = [spec.lam_of(i, j * s_d + u) for u in range(s_d)]
    weights = []
    for a in alphas:
        w = 1
        for lam in block:
            w = w * (a - lam) % q
        weights.append(w)
    vmult = grs.dual_multipliers(alphas, weights, q)
    out = (alphas, vmult)
    _group_code_cache[key] = out
    return out


def _block_vand_inv(spec, i, j, s_d):
    key = (spec, i, j, s_d)
    hit = _vand_inv_cache.get(key)
    if hit is None:
        q = spec.q
        vand = np.array([[pow(spec.lam_of(i, j * s_d + u), tau, q)
                          for u in range(s_d)] for tau in range(s_d)],
                        dtype=np.int64)
        hit = linalg.inv(vand, q)
        _vand_inv_cache[key] = hit
    return hit


def _diag_map(spec, i, mu_nodes, digs, j, s_d):
    """Linear map: helper sums of a group -> the s_d repaired symbols.

    Valid only in the error-free case with exactly dim known positions.
    """
    q = spec.q
    others = [v for v in range(1, spec.n + 1) if v != i]
    pos_of = {v: p for p, v in enumerate(others)}
    alphas, vmult = _group_code(spec, i, digs, j, s_d)
    dim = s_d + spec.k - 1
    pts = [pos_of[v] for v in mu_nodes]
    if len(pts) != dim:
        raise BadParameters(
            f"error-free repair needs exactly {dim} helpers, got {len(pts)}")
    ext = np.zeros((len(others), dim), dtype=np.int64)
    for m in range(len(others)):
        for jj, p in enumerate(pts):
            num, den = 1, 1
            for p2 in pts:
                if p2 != p:
                    num = num * (alphas[m] - alphas[p2]) % q
                    den = den * (alphas[p] - alphas[p2]) % q
            ext[m, jj] = (vmult[m] * pow(vmult[p], q - 2, q) * num
                          * pow(den, q - 2, q)) % q
    neg_pow = np.array([[(-pow(alphas[p], tau, q)) % q
                         for p in range(len(others))]
                        for tau in range(s_d)], dtype=np.int64)
    vinv = _block_vand_inv(spec, i, j, s_d)
    return linalg.matmul(vinv, linalg.matmul(neg_pow, ext, q), q)


def _diag_engine(spec, i, mu_nodes, get_mu, t, s_d):
    """Repair node i from helper block sums.  Returns (column, errors)."""
    q, s, l = spec.q, spec.s, spec.l
    dim = s_d + spec.k - 1
    others = [v for v in range(1, spec.n + 1) if v != i]
    pos_of = {v: p for p, v in enumerate(others)}
    dt = spec.digit_table()
    bases = np.nonzero(dt[:, spec.digit_pos(i) - 1] == 0)[0]
    nblocks = s // s_d
    col = np.zeros(l, dtype=np.int64)
    errors: set = set()
    cache_key = (spec, i, tuple(mu_nodes), s_d)
    cache = _diag_map_cache.setdefault(cache_key, {})
    for a0 in bases:
        a0 = int(a0)
        digs = tuple(int(dt[a0, v - 1]) for v in others)
        for j in range(nblocks):
            mu = np.array([get_mu(v, a0, j) for v in mu_nodes], dtype=np.int64)
            if t == 0:
                mc = cache.get((digs, j))
                if mc is None:
                    mc = _diag_map(spec, i, mu_nodes, digs, j, s_d)
                    cache[(digs, j)] = mc
                vals = linalg.matmul(mc, mu, q)
            else:
                alphas, vmult = _group_code(spec, i, digs, j, s_d)
                known = {pos_of[v]: int(mu[idx])
                         for idx, v in enumerate(mu_nodes)}
                full, errs = grs.decode(alphas, vmult, known, dim, t, q)
                errors |= {others[p] for p in errs}
                rhs = np.array(
                    [(-sum(pow(alphas[p], tau, q) * full[p]
                           for p in range(len(others)))) % q
                     for tau in range(s_d)], dtype=np.int64)
                vals = linalg.matmul(_block_vand_inv(spec, i, j, s_d), rhs, q)
            for u in range(s_d):
                col[spec.substitute(a0, i, j * s_d + u)] = vals[u]
    return col, errors


def _repair_diag_single(spec, cw, i, helpers, t, d):
    q, l = spec.q, spec.l
    s_d = d + 1 - spec.k
    cols = {v: cw.column(v) for v in helpers}
    transmitted = {v: 0 for v in helpers}

    def get_mu(v, a0, j):
        transmitted[v] += 1
        coords = [spec.substitute(a0, i, j * s_d + u) for u in range(s_d)]
        return int(cols[v][coords].sum() % q)

    col, errors = _diag_engine(spec, i, list(helpers), get_mu, t, s_d)
    trace = RepairTrace(
        failed=(i,), helpers=helpers, d=d, t=t, recovered={i: col},
        transmitted=transmitted,
        accessed={v: np.arange(l) for v in helpers}, errors_found=errors)
    trace.optimal = _is_optimal(spec, trace, 1)
    return trace


def _repair_multi_diag(spec, cw, failed, helpers, t, d):
    """Staged multi-node repair; later stages reuse earlier block sums."""
    q, s, l = spec.q, spec.s, spec.l
    h = len(failed)
    dt = spec.digit_table()
    cols = {v: cw.column(v) for v in helpers}
    s_list = [d - spec.k + stage for stage in range(1, h + 1)]
    tables: dict = {}
    transmitted = {v: 0 for v in helpers}
    access = {v: np.zeros(l, dtype=bool) for v in helpers}
    recovered: dict = {}
    errors: set = set()

    def derive(stage, v, a0, j):
        tab = tables[(stage, v)]
        val = tab.get((a0, j))
        if val is not None:
            return val
        psi = [w for w in range(1, stage)
               if dt[a0, failed[w - 1] - 1] % s_list[w - 1] == 0]
        w = psi[0]
        fw, sw = failed[w - 1], s_list[w - 1]
        fi, s_i = failed[stage - 1], s_list[stage - 1]
        aw = int(dt[a0, fw - 1])
        jw = aw // sw
        total = 0
        for u2 in range(j * s_i, (j + 1) * s_i):
            b0 = spec.substitute(spec.substitute(a0, fi, u2), fw, 0)
            total += tables[(w, v)][(b0, jw)]
        for u1 in range(1, sw):
            total -= derive(stage, v, spec.substitute(a0, fw, aw + u1), j)
        val = total % q
        tab[(a0, j)] = val
        return val

    for stage in range(1, h + 1):
        fi, s_i = failed[stage - 1], s_list[stage - 1]
        for v in helpers:
            tables[(stage, v)] = {}
        bases = np.nonzero(dt[:, fi - 1] == 0)[0]
        nblocks = s // s_i
        for a0 in bases:
            a0 = int(a0)
            fresh = not any(dt[a0, failed[w - 1] - 1] % s_list[w - 1] == 0
                            for w in range(1, stage))
            for j in range(nblocks):
                coords = [spec.substitute(a0, fi, j * s_i + u)
                          for u in range(s_i)]
                for v in helpers:
                    if fresh:
                        tables[(stage, v)][(a0, j)] = int(
                            cols[v][coords].sum() % q)
                        transmitted[v] += 1
                        access[v][coords] = True
                    else:
                        derive(stage, v, a0, j)

        mu_nodes = list(helpers) + list(failed[:stage - 1])

        def get_mu(v, a0, j, _stage=stage, _fi=fi, _si=s_i):
            if (_stage, v) in tables and v in cols:
                return tables[(_stage, v)][(a0, j)]
            coords = [spec.substitute(a0, _fi, j * _si + u)
                      for u in range(_si)]
            return int(recovered[v][coords].sum() % q)

        col, errs = _diag_engine(spec, fi, mu_nodes, get_mu, t, s_i)
        recovered[fi] = col
        errors |= errs

    trace = RepairTrace(
        failed=failed, helpers=helpers, d=d, t=t, recovered=recovered,
        transmitted=transmitted,
        accessed={v: np.nonzero(access[v])[0] for v in helpers},
        errors_found=errors)
    trace.optimal = _is_optimal(spec, trace, h)
    return trace


# ----------------------------------------------------- shift-scale family

def _restricted_indices(spec, i0, s_i):
    dt = spec.digit_table()
    mask = (dt[:, spec.digit_pos(i0) - 1] % s_i) == 0
    ridx = np.nonzero(mask)[0]
    rpos = np.full(spec.l, -1, dtype=np.int64)
    rpos[ridx] = np.arange(len(ridx))
    return ridx, rpos


def _projected_solve(spec, i0, s_i, known_cols, unknown_nodes, ridx, rpos):
    """Solve the columns of unknown_nodes on the digit-i0 coset lattice.

    Uses the r - s_i parity combinations that eliminate node i0 and stay
    inside the restricted coordinate set.  Returns (columns, consistent);
    the solved columns are full-length arrays valid on ridx only.
    """
    q, r, l = spec.q, spec.r, spec.l
    ops = grsa.ops_for_spec(spec)
    nr = len(ridx)
    nrows = (r - s_i) * nr
    e = len(unknown_nodes)
    others = [j for j in range(1, spec.n + 1) if j != i0]
    shift_map = ops[i0 - 1].coord_map(s_i)
    uidx = {j: p for p, j in enumerate(unknown_nodes)}
    mat = np.zeros((nrows, e * nr), dtype=np.int64)
    rhs = np.zeros(nrows, dtype=np.int64)
    for m in range(r - s_i):
        rows = m * nr + np.arange(nr)
        for j in others:
            c1, s1 = ops[j - 1].coord_map(m + s_i)
            c2, s2 = grsa.compose_maps(shift_map, ops[j - 1].coord_map(m), q)
            c1r, c2r = c1[ridx], c2[ridx]
            s1r, s2r = s1[ridx], s2[ridx]
            if j in uidx:
                base = uidx[j] * nr
                np.add.at(mat, (rows, base + rpos[s1r]), c1r)
                np.add.at(mat, (rows, base + rpos[s2r]), -c2r)
            else:
                colj = known_cols[j]
                contrib = (mulmod_vec(c1r, colj[s1r], q)
                           - mulmod_vec(c2r, colj[s2r], q)) % q
                rhs[rows] = (rhs[rows] - contrib) % q
    mat %= q
    if e == 0:
        return {}, not np.any(rhs)
    x, consistent = linalg.solve_overdetermined(mat, rhs, q)
    out = {}
    for p, j in enumerate(unknown_nodes):
        colf = np.zeros(l, dtype=np.int64)
        colf[ridx] = x[p * nr:(p + 1) * nr]
        out[j] = colf
    return out, consistent


def _projected_decode(spec, i0, s_i, helper_cols, trusted_cols, t, ridx, rpos):
    """All restricted columns except i0's, correcting up to t corrupt helpers."""
    helpers = sorted(helper_cols)
    others = [j for j in range(1, spec.n + 1) if j != i0]
    for esize in range(t + 1):
        for bad in combinations(helpers, esize):
            known = {v: helper_cols[v] for v in helpers if v not in bad}
            known.update(trusted_cols)
            unknown = [j for j in others if j not in known]
            if len(unknown) > spec.r - s_i:
                continue
            try:
                sol, consistent = _projected_solve(
                    spec, i0, s_i, known, unknown, ridx, rpos)
            except SingularSystem:
                continue
            if consistent:
                known.update(sol)
                return known, set(bad)
    raise DecodingFailure("no consistent repair within the error budget")


def _back_substitute(spec, i0, s_i, cols_others, ridx):
    """Full column of i0 from every other column on the restricted set."""
    q, l = spec.q, spec.l
    ops = grsa.ops_for_spec(spec)
    col = np.zeros(l, dtype=np.int64)
    for tau in range(s_i):
        ci, si = ops[i0 - 1].coord_map(tau)
        acc = np.zeros(len(ridx), dtype=np.int64)
        for j in range(1, spec.n + 1):
            if j == i0:
                continue
            cj, sj = ops[j - 1].coord_map(tau)
            acc = (acc + mulmod_vec(cj[ridx], cols_others[j][sj[ridx]], q)) % q
        inv = powmod_vec(ci[ridx], q - 2, q)
        col[si[ridx]] = mulmod_vec((-acc) % q, inv, q)
    return col


def _repair_access_single(spec, cw, i, helpers, t, d):
    s_i = d + 1 - spec.k
    ridx, rpos = _restricted_indices(spec, i, s_i)
    helper_cols = {v: cw.column(v) for v in helpers}
    cols, errors = _projected_decode(spec, i, s_i, helper_cols, {}, t,
                                     ridx, rpos)
    col = _back_substitute(spec, i, s_i, cols, ridx)
    trace = RepairTrace(
        failed=(i,), helpers=helpers, d=d, t=t, recovered={i: col},
        transmitted={v: len(ridx) for v in helpers},
        accessed={v: ridx.copy() for v in helpers}, errors_found=errors)
    trace.optimal = _is_optimal(spec, trace, 1)
    return trace


def _repair_multi_access(spec, cw, failed, helpers, t, d):
    q, l = spec.q, spec.l
    h = len(failed)
    have = {v: np.zeros(l, dtype=bool) for v in helpers}
    transmitted = {v: 0 for v in helpers}
    recovered: dict = {}
    errors: set = set()
    for stage in range(1, h + 1):
        fi = failed[stage - 1]
        s_i = d - spec.k + stage
        ridx, rpos = _restricted_indices(spec, fi, s_i)
        mask = np.zeros(l, dtype=bool)
        mask[ridx] = True
        for v in helpers:
            transmitted[v] += int((mask & ~have[v]).sum())
            have[v] |= mask
        helper_cols = {v: cw.column(v) for v in helpers}
        trusted = {f: recovered[f] for f in failed[:stage - 1]}
        cols, errs = _projected_decode(spec, fi, s_i, helper_cols, trusted,
                                       t, ridx, rpos)
        errors |= errs
        recovered[fi] = _back_substitute(spec, fi, s_i, cols, ridx)
    trace = RepairTrace(
        failed=failed, helpers=helpers, d=d, t=t, recovered=recovered,
        transmitted=transmitted,
        accessed={v: np.nonzero(have[v])[0] for v in helpers},
        errors_found=errors)
    trace.optimal = _is_optimal(spec, trace, h)
    return trace


def _repair_c4(spec, cw, i, helpers, d):
    q, l, r = spec.q, spec.l, spec.r
    cols = {v: cw.column(v) for v in helpers}
    ops = grsa.ops_for_spec(spec)
    if i != spec.identity_node:
        ridx, _ = _restricted_indices(spec, i, spec.s)
        col = _back_substitute(spec, i, spec.s, cols, ridx)
        accessed = {v: ridx.copy() for v in helpers}
    else:
        # access the coordinates whose digits sum to 0 mod r
        dt = spec.digit_table()
        sigma = dt.sum(axis=1) % r
        col = np.zeros(l, dtype=np.int64)
        for s0 in range(r):
            tau = (-s0) % r
            idx = np.nonzero(sigma == s0)[0]
            acc = np.zeros(len(idx), dtype=np.int64)
            for j in helpers:
                cj, sj = ops[j - 1].coord_map(tau)
                acc = (acc + mulmod_vec(cj[idx], cols[j][sj[idx]], q)) % q
            col[idx] = (-acc) % q
        accessed = {v: np.nonzero(sigma == 0)[0] for v in helpers}
    trace = RepairTrace(
        failed=(i,), helpers=helpers, d=d, t=0, recovered={i: col},
        transmitted={v: len(accessed[v]) for v in helpers},
        accessed=accessed)
    trace.optimal = _is_optimal(spec, trace, 1)
    return trace


# ------------------------------------------------------------------- C7

_c7_global_cache: dict = {}
_c7_dual_cache: dict = {}


def _c7_dual(spec, delta):
    """Dual coefficient matrices of the code restricted to the node
    tuple delta (repaired node first)."""
    key = (spec, delta)
    hit = _c7_dual_cache.get(key)
    if hit is not None:
        return hit
    ops = grsa.ops_for_spec(spec)
    vs = _c7_global_cache.get(spec)
    if vs is None:
        vs = grsa.dual_coefficients(ops)
        _c7_global_cache[spec] = vs
    w = grsa.restricted_dual([ops[j - 1] for j in delta],
                             [vs[j - 1] for j in delta])
    _c7_dual_cache[key] = w
    return w


def _repair_c7(spec, cw, i1, helpers, t, d):
    if t > 0 or i1 == spec.identity_node:
        # no bandwidth-optimal schedule here; decode from whole columns
        trace = _repair_full_download(spec, cw, (i1,), helpers, t, d)
        trace.optimal = False
        return trace
    q, l = spec.q, spec.l
    s_i = d + 1 - spec.k
    delta = (i1,) + helpers
    w = _c7_dual(spec, delta)
    ops = grsa.ops_for_spec(spec)
    ridx, _ = _restricted_indices(spec, i1, s_i)
    # helpers premultiply locally and send only the restricted slice
    cprime = {v: linalg.matmul(w[m], cw.column(v), q)
              for m, v in enumerate(delta[1:], start=1)}
    colp = np.zeros(l, dtype=np.int64)
    for tau in range(s_i):
        ci, si = ops[i1 - 1].coord_map(tau)
        acc = np.zeros(len(ridx), dtype=np.int64)
        for v in delta[1:]:
            cj, sj = ops[v - 1].coord_map(tau)
            acc = (acc + mulmod_vec(cj[ridx], cprime[v][sj[ridx]], q)) % q
        inv = powmod_vec(ci[ridx], q - 2, q)
        colp[si[ridx]] = mulmod_vec((-acc) % q, inv, q)
    col = linalg.matmul(linalg.inv(w[0], q), colp, q)
    trace = RepairTrace(
        failed=(i1,), helpers=helpers, d=d, t=0, recovered={i1: col},
        transmitted={v: len(ridx) for v in helpers},
        accessed={v: np.arange(l) for v in helpers})
    trace.optimal = _is_optimal(spec, trace, 1)
    return trace
