"""Scalar generalized Reed-Solomon decoding over GF(q).

Codewords are (v_p * f(alpha_p)) for a polynomial f of degree < dim.  The
decoder recovers f from values at a subset of positions, correcting up to
t errors via the Berlekamp-Welch linearization Q(x) = f(x) E(x).
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .errors import BadParameters, DecodingFailure

__all__ = ["dual_multipliers", "extend", "decode"]


def polyval(coeffs, x: int, q: int) -> int:
    """Evaluate sum coeffs[m] x^m at x (Horner)."""
    out = 0
    for c in reversed(coeffs):
        out = (out * x + c) % q
    return out


def _polydiv(num, den, q: int):
    """Exact polynomial division; returns (quotient, remainder_is_zero)."""
    num = [c % q for c in num]
    while num and num[-1] == 0:
        num.pop()
    den = [c % q for c in den]
    while den and den[-1] == 0:
        den.pop()
    if not den:
        raise BadParameters("division by zero polynomial")
    inv_lead = pow(den[-1], q - 2, q)
    quot = [0] * max(0, len(num) - len(den) + 1)
    while len(num) >= len(den):
        shift = len(num) - len(den)
        factor = num[-1] * inv_lead % q
        quot[shift] = factor
        for i, c in enumerate(den):
            num[shift + i] = (num[shift + i] - factor * c) % q
        while num and num[-1] == 0:
            num.pop()
    return quot, not num


def dual_multipliers(alphas, multipliers, q: int):
    """Column multipliers of the dual code on the same evaluation points."""
    out = []
    for p, (a, v) in enumerate(zip(alphas, multipliers)):
        prod = 1
        for p2, a2 in enumerate(alphas):
            if p2 != p:
                prod = prod * (a - a2) % q
        out.append(pow(v * prod % q, q - 2, q))
    return out


def extend(alphas, multipliers, known: dict[int, int], dim: int, q: int):
    """Values at all positions from exactly dim error-free known positions.

    known maps position index (into alphas) -> received value.
    """
    if len(known) < dim:
        raise BadParameters(f"need {dim} values, got {len(known)}")
    pts = sorted(known)[:dim]
    ys = [known[p] * pow(multipliers[p], q - 2, q) % q for p in pts]
    out = []
    for m, (a, v) in enumerate(zip(alphas, multipliers)):
        # Lagrange evaluation of f at alpha_m
        acc = 0
        for j, p in enumerate(pts):
            num, den = 1, 1
            for p2 in pts:
                if p2 != p:
                    num = num * (a - alphas[p2]) % q
                    den = den * (alphas[p] - alphas[p2]) % q
            acc = (acc + ys[j] * num * pow(den, q - 2, q)) % q
        out.append(acc * v % q)
    return out


def decode(alphas, multipliers, known: dict[int, int], dim: int, t: int,
           q: int):
    """Correct up to t errors among the known positions.

    Returns (values at all positions, set of error positions).  Needs
    len(known) >= dim + 2t.  Raises DecodingFailure when no codeword of the
    stated dimension lies within t errors of the received values.
    """
    if len(known) < dim + 2 * t:
        raise BadParameters(
            f"need {dim + 2 * t} positions for {t} errors, got {len(known)}")
    if t == 0:
        vals = extend(alphas, multipliers, known, dim, q)
        if any(vals[p] != known[p] % q for p in known):
            raise DecodingFailure("received values are not a codeword")
        return vals, set()

    pts = sorted(known)
    ys = {p: known[p] * pow(multipliers[p], q - 2, q) % q for p in pts}
    # rows: Q(alpha_p) - y_p E(alpha_p) = 0, deg Q < dim + t, deg E <= t
    nq, ne = dim + t, t + 1
    mat = np.zeros((len(pts), nq + ne), dtype=np.int64)
    for row, p in enumerate(pts):
        a, power = alphas[p], 1
        for m in range(nq):
            mat[row, m] = power
            power = power * a % q
        power = 1
        for m in range(ne):
            mat[row, nq + m] = (-ys[p] * power) % q
            power = power * a % q
    null = linalg.nullspace_vector(mat, q)
    if null is None:
        raise DecodingFailure("no codeword within the error budget")
    qpoly = [int(c) for c in null[:nq]]
    epoly = [int(c) for c in null[nq:]]
    f, exact = _polydiv(qpoly, epoly, q)
    if not exact or len(f) > dim:
        raise DecodingFailure("error locator does not divide the numerator")
    vals = [multipliers[m] * polyval(f, alphas[m], q) % q
            for m in range(len(alphas))]
    errors = {p for p in pts if vals[p] != known[p] % q}
    if len(errors) > t:
        raise DecodingFailure(f"{len(errors)} disagreements exceed budget {t}")
    return vals, errors
