"""Arithmetic in a prime field GF(q).

Elements are plain integer residues in [0, q).  The :class:`Field` object
carries the modulus; scalar operations work on ints and the ``*_vec``
helpers work on numpy int64 arrays (products are taken through uint64 so
any q < 2^32 is safe).
"""

from __future__ import annotations

import numpy as np

from .errors import DivisionByZero, FieldTooSmall, NotPrime

MAX_MODULUS = 2**32  # symbols are stored as 32-bit residues on disk


def is_prime(q: int) -> bool:
    """Deterministic primality check, trial division (desk-scale moduli)."""
    if q < 2:
        return False
    if q < 4:
        return True
    if q % 2 == 0:
        return False
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def smallest_prime_at_least(bound: int) -> int:
    q = max(bound, 2)
    while not is_prime(q):
        q += 1
    return q


def mulmod_vec(a, b, q: int):
    """Elementwise a*b mod q on int64 arrays without overflow."""
    return (np.asarray(a, dtype=np.uint64) * np.asarray(b, dtype=np.uint64) % q).astype(np.int64)


def powmod_vec(a, t: int, q: int):
    """Elementwise a**t mod q by square-and-multiply; a**0 == 1 including 0**0."""
    base = np.asarray(a, dtype=np.int64) % q
    out = np.ones_like(base)
    while t > 0:
        if t & 1:
            out = mulmod_vec(out, base, q)
        base = mulmod_vec(base, base, q)
        t >>= 1
    return out


class Field:
    """Prime field context GF(q)."""

    def __init__(self, q: int):
        if q < 2 or not is_prime(q):
            raise NotPrime(q)
        if q >= MAX_MODULUS:
            raise FieldTooSmall(q, MAX_MODULUS)  # modulus must fit 32-bit symbols
        self.q = q

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.q == self.q

    def __hash__(self):
        return hash(("Field", self.q))

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.q

    def neg(self, a: int) -> int:
        return (-a) % self.q

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return pow(a, self.q - 2, self.q)

    def pow(self, a: int, t: int) -> int:
        if t == 0:
            return 1  # convention: a^0 = 1 even for a = 0
        return pow(a % self.q, t, self.q)

    def primitive_element(self) -> int:
        """Smallest residue with multiplicative order q-1 (canonical choice)."""
        if self.q == 2:
            return 1
        order = self.q - 1
        factors = _prime_factors(order)
        for g in range(2, self.q):
            if all(pow(g, order // p, self.q) != 1 for p in factors):
                return g
        raise AssertionError("no primitive element found")  # unreachable for prime q

    def elements(self, m: int) -> list[int]:
        """Canonical list of m distinct elements: the residues 0, 1, ..., m-1."""
        if m > self.q:
            raise FieldTooSmall(m, self.q)
        return list(range(m))


def field_new(q: int) -> Field:
    return Field(q)


def _prime_factors(x: int) -> list[int]:
    out = []
    f = 2
    while f * f <= x:
        if x % f == 0:
            out.append(f)
            while x % f == 0:
                x //= f
        f += 1
    if x > 1:
        out.append(x)
    return out
