"""Encoding, verification, erasure decoding, and single-symbol updates.

A codeword is n node columns of l field symbols each; the first k nodes
hold the message verbatim (systematic form) and every set of k columns
determines the rest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import grsa, solver
from .codespec import CodeSpec
from .errors import BadParameters, DecodingFailure, TooManyErasures

__all__ = ["Codeword", "encode_systematic", "verify", "decode_erasures",
           "update_symbol", "random_message"]


@dataclass
class Codeword:
    """n node columns; None marks an erased node.  Nodes are 1-based."""

    spec: CodeSpec
    nodes: list  # length n, each an int64 array of length l or None

    def __post_init__(self):
        if len(self.nodes) != self.spec.n:
            raise BadParameters(
                f"expected {self.spec.n} node columns, got {len(self.nodes)}")
        cleaned = []
        for col in self.nodes:
            if col is None:
                cleaned.append(None)
                continue
            col = np.asarray(col, dtype=np.int64) % self.spec.q
            if col.shape != (self.spec.l,):
                raise BadParameters(
                    f"node column must have length {self.spec.l}")
            cleaned.append(col)
        self.nodes = cleaned

    def column(self, i: int) -> np.ndarray:
        return self.nodes[i - 1]

    def erased(self) -> list[int]:
        return [i for i, col in enumerate(self.nodes, start=1) if col is None]

    def present(self) -> dict[int, np.ndarray]:
        return {i: col for i, col in enumerate(self.nodes, start=1)
                if col is not None}

    def copy(self) -> "Codeword":
        return Codeword(self.spec,
                        [None if c is None else c.copy() for c in self.nodes])

    def message(self) -> list[np.ndarray]:
        """The k systematic columns (requires them to be present)."""
        cols = self.nodes[:self.spec.k]
        if any(c is None for c in cols):
            raise BadParameters("systematic node erased; decode first")
        return [c.copy() for c in cols]


def random_message(spec: CodeSpec, rng) -> list[np.ndarray]:
    """k uniform columns drawn from a numpy Generator."""
    return [rng.integers(0, spec.q, size=spec.l, dtype=np.int64)
            for _ in range(spec.k)]


def encode_systematic(spec: CodeSpec, message) -> Codeword:
    """Extend k message columns to a full codeword."""
    if len(message) != spec.k:
        raise BadParameters(f"expected {spec.k} message columns")
    known = {i: np.asarray(col, dtype=np.int64) % spec.q
             for i, col in enumerate(message, start=1)}
    parity = list(range(spec.k + 1, spec.n + 1))
    cols, _ = solver.solve_parity(spec, known, parity)
    nodes = [known[i] for i in range(1, spec.k + 1)] + [cols[i] for i in parity]
    return Codeword(spec, nodes)


def verify(spec: CodeSpec, cw: Codeword):
    """Check all parity rows.  Returns (ok, first_violation).

    first_violation is None when ok, else a (row, coordinate) pair.
    Requires a complete codeword.
    """
    if cw.erased():
        raise BadParameters(f"cannot verify with erased nodes {cw.erased()}")
    ops = grsa.ops_for_spec(spec)
    for t in range(spec.r):
        acc = np.zeros(spec.l, dtype=np.int64)
        for i in range(1, spec.n + 1):
            acc = (acc + ops[i - 1].apply(cw.column(i), t)) % spec.q
        bad = np.nonzero(acc)[0]
        if bad.size:
            return False, (t, int(bad[0]))
    return True, None


def decode_erasures(spec: CodeSpec, cw: Codeword) -> Codeword:
    """Fill in up to r erased node columns from the surviving ones."""
    erased = cw.erased()
    if len(erased) > spec.r:
        raise TooManyErasures(
            f"{len(erased)} erasures exceed the correction radius {spec.r}")
    if not erased:
        return cw.copy()
    cols, consistent = solver.solve_parity(spec, cw.present(), erased)
    if not consistent:
        raise DecodingFailure(
            "surviving columns are inconsistent; not an erasure pattern")
    nodes = [cols[i] if i in cols else cw.column(i).copy()
             for i in range(1, spec.n + 1)]
    return Codeword(spec, nodes)


def update_symbol(spec: CodeSpec, cw: Codeword, i: int, a: int,
                  value: int) -> Codeword:
    """Rewrite one data symbol, touching only coordinate a of each parity node.

    Available on the diagonal constructions, whose parity operators leave
    every coordinate in place.
    """
    if not spec.diagonal:
        raise BadParameters(
            "in-place symbol update needs coordinate-preserving parities "
            "(constructions C1, C2, C3)")
    if not 1 <= i <= spec.k:
        raise BadParameters(f"node {i} is not a data node")
    if cw.erased():
        raise BadParameters("update requires a complete codeword")
    q, r = spec.q, spec.r
    delta = (int(value) - int(cw.column(i)[a])) % q
    out = cw.copy()
    out.nodes[i - 1][a] = int(value) % q
    if delta == 0:
        return out
    digs = spec.digits(a)
    parity = list(range(spec.k + 1, spec.n + 1))
    # r x r system: parity deltas at coordinate a absorb the data delta
    mat = np.array([[pow(spec.lam_of(p, digs[p - 1]), t, q) for p in parity]
                    for t in range(r)], dtype=np.int64)
    rhs = np.array([(-delta * pow(spec.lam_of(i, digs[i - 1]), t, q)) % q
                    for t in range(r)], dtype=np.int64)
    from . import linalg
    deltas = linalg.solve(mat, rhs, q)
    for idx, p in enumerate(parity):
        out.nodes[p - 1][a] = (out.nodes[p - 1][a] + deltas[idx]) % q
    return out
