"""Construction instances: parameter validation, field choice, coefficient tables.

A :class:`CodeSpec` fully describes one code: node count n, data nodes k,
group arity s, subpacketization l, field modulus q, and the coefficient
table used by the parity-check operators.  Seven constructions are
supported:

==  =============  ======== =========  ==============================
id  operators      s        l          minimum field size
==  =============  ======== =========  ==============================
C1  diagonal       r        r^n        r*n
C2  diagonal       d+1-k    s^n        s*n
C3  diagonal       lcm(1..r) s^n       s*n
C4  cyclic shifts  r        r^(n-1)    n+1   (node n holds identity)
C5  cyclic shifts  d+1-k    s^n        n+1
C6  cyclic shifts  lcm(1..r) s^n       n+1
C7  cyclic shifts  d+1-k    s^(n-1)    n+1   (node n holds identity)
==  =============  ======== =========  ==============================

Indices into a column are read through their base-s digit expansion;
digit i (1-based, from the right) belongs to node i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BadParameters, OutOfRange
from .gf import Field, smallest_prime_at_least

CONSTRUCTIONS = ("C1", "C2", "C3", "C4", "C5", "C6", "C7")

# Refuse specs whose total symbol count would blow up test runs.
MAX_TOTAL_SYMBOLS = 2**26

DIAGONAL = {"C1", "C2", "C3"}
NEEDS_D = {"C2", "C5", "C7"}
# constructions where node n carries the identity operator (and no digit)
IDENTITY_LAST = {"C4", "C7"}


def digits(a: int, s: int, m: int) -> tuple[int, ...]:
    """Base-s expansion of a, little-endian (digit 1 first), length m."""
    if not 0 <= a < s**m:
        raise OutOfRange(f"index {a} not in [0, {s}^{m})")
    out = []
    for _ in range(m):
        out.append(a % s)
        a //= s
    return tuple(out)


def substitute(a: int, i: int, u: int, s: int, m: int) -> int:
    """Index obtained from a by replacing digit i (1-based) with u."""
    if not 1 <= i <= m:
        raise OutOfRange(f"digit position {i} not in [1, {m}]")
    if not 0 <= u < s:
        raise OutOfRange(f"digit value {u} not in [0, {s})")
    step = s ** (i - 1)
    cur = (a // step) % s
    return a + (u - cur) * step


def lcm_s(d_set, k: int) -> int:
    """Group arity covering every helper count in d_set simultaneously."""
    vals = []
    for d in d_set:
        if d < k:
            raise BadParameters(f"helper count d={d} below k={k}")
        vals.append(d + 1 - k)
    if not vals:
        raise BadParameters("empty d_set")
    return math.lcm(*vals)


@dataclass(frozen=True)
class CodeSpec:
    construction: str
    n: int
    k: int
    r: int
    s: int
    l: int
    q: int
    d_set: tuple[int, ...]
    lam: tuple[tuple[int, ...], ...]  # 1-based via lam[i-1]; s entries per node

    @property
    def field(self) -> Field:
        return Field(self.q)

    @property
    def diagonal(self) -> bool:
        return self.construction in DIAGONAL

    @property
    def identity_node(self) -> int | None:
        """Node whose operator is the identity (no digit of its own), or None."""
        return self.n if self.construction in IDENTITY_LAST else None

    @property
    def m(self) -> int:
        """Number of base-s digits in a coordinate index."""
        return self.n - 1 if self.construction in IDENTITY_LAST else self.n

    def lam_of(self, i: int, u: int) -> int:
        return self.lam[i - 1][u]

    def digit_pos(self, node: int) -> int | None:
        """Digit position owned by a node (1-based), None for the identity node."""
        if node == self.identity_node:
            return None
        return node

    def digits(self, a: int) -> tuple[int, ...]:
        return digits(a, self.s, self.m)

    def substitute(self, a: int, i: int, u: int) -> int:
        return substitute(a, i, u, self.s, self.m)

    def digit_table(self) -> np.ndarray:
        """(l, m) array; entry [a, i-1] is digit i of index a."""
        return _digit_table(self.l, self.s, self.m)

    def supported_d(self) -> list[int]:
        """All helper counts d whose group arity divides s."""
        return [d for d in range(self.k, self.n)
                if self.s % (d + 1 - self.k) == 0]

    def __str__(self):
        return (f"{self.construction}(n={self.n}, k={self.k}, s={self.s}, "
                f"l={self.l}, q={self.q})")


@lru_cache(maxsize=64)
def _digit_table(l: int, s: int, m: int) -> np.ndarray:
    a = np.arange(l, dtype=np.int64)
    cols = []
    for i in range(m):
        cols.append((a // s**i) % s)
    table = np.stack(cols, axis=1)
    table.setflags(write=False)
    return table


def supported_d(spec: CodeSpec) -> list[int]:
    return spec.supported_d()


def build(construction: str, n: int, k: int, d=None, q: int | None = None,
          force_large_l: bool = False) -> CodeSpec:
    """Materialize a CodeSpec.

    d is a single helper count or an iterable of them (constructions C2, C5,
    C7; an iterable also works for those and widens s to the lcm of the group
    arities).  When q is omitted the smallest admissible prime is chosen.
    """
    if construction not in CONSTRUCTIONS:
        raise BadParameters(f"unknown construction {construction!r}")
    if not 1 <= k < n:
        raise BadParameters(f"need 1 <= k < n, got n={n}, k={k}")
    r = n - k

    d_set: tuple[int, ...] = ()
    if construction in NEEDS_D:
        if d is None:
            raise BadParameters(f"{construction} requires a helper count d")
        d_set = tuple(sorted({d} if isinstance(d, int) else set(d)))
        for dv in d_set:
            if not k <= dv <= n - 1:
                raise BadParameters(f"helper count d={dv} not in [{k}, {n - 1}]")
        s = lcm_s(d_set, k)
    elif construction in ("C1", "C4"):
        s = r
    else:  # C3, C6
        s = math.lcm(*range(1, r + 1))

    m = n - 1 if construction in IDENTITY_LAST else n
    l = s**m
    if l * n > MAX_TOTAL_SYMBOLS and not force_large_l:
        raise BadParameters(
            f"l*n = {l * n} symbols exceeds the desk-scale guard "
            f"({MAX_TOTAL_SYMBOLS}); pass force_large_l=True to override")

    q_bound = s * n if construction in DIAGONAL else n + 1
    if q is None:
        q = smallest_prime_at_least(q_bound)
    field = Field(q)  # raises NotPrime for composite q
    if q < q_bound:
        raise BadParameters(f"field size {q} below the construction bound {q_bound}")

    if construction in DIAGONAL:
        elems = field.elements(s * n)
        lam = tuple(tuple(elems[(i - 1) * s + u] for u in range(s))
                    for i in range(1, n + 1))
    else:
        gamma = field.primitive_element()
        rows = []
        shifted = n - 1 if construction in IDENTITY_LAST else n
        for i in range(1, n + 1):
            if i <= shifted:
                rows.append(tuple([pow(gamma, i, q)] + [1] * (s - 1)))
            else:
                rows.append(tuple([1] * s))  # identity node: row unused
        lam = tuple(rows)

    return CodeSpec(construction=construction, n=n, k=k, r=r, s=s, l=l, q=q,
                    d_set=d_set, lam=lam)
