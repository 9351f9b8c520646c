import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdsarray import codespec, errors
from mdsarray.codespec import build, digits, substitute


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=2, max_value=7),
       st.integers(min_value=1, max_value=6),
       st.data())
def test_digits_substitute_roundtrip(s, m, data):
    a = data.draw(st.integers(min_value=0, max_value=s**m - 1))
    d = digits(a, s, m)
    assert len(d) == m and all(0 <= x < s for x in d)
    assert sum(x * s**i for i, x in enumerate(d)) == a
    i = data.draw(st.integers(min_value=1, max_value=m))
    u = data.draw(st.integers(min_value=0, max_value=s - 1))
    b = substitute(a, i, u, s, m)
    db = digits(b, s, m)
    assert db[i - 1] == u
    assert all(db[j] == d[j] for j in range(m) if j != i - 1)


def test_digits_range_checks():
    with pytest.raises(errors.OutOfRange):
        digits(8, 2, 3)
    with pytest.raises(errors.OutOfRange):
        substitute(0, 4, 0, 2, 3)
    with pytest.raises(errors.OutOfRange):
        substitute(0, 1, 2, 2, 3)


@pytest.mark.parametrize("cons,n,k,d,s,l,q", [
    ("C1", 4, 2, None, 2, 16, 11),     # smallest prime >= r*n = 8
    ("C1", 5, 3, None, 2, 32, 11),
    ("C2", 5, 2, 3, 2, 32, 11),
    ("C3", 5, 2, None, 6, 7776, 31),   # s = lcm(1,2,3)
    ("C4", 5, 3, None, 2, 16, 7),      # l = s^(n-1), q >= n+1
    ("C5", 5, 3, 4, 2, 32, 7),
    ("C6", 4, 2, None, 2, 16, 5),
    ("C7", 5, 3, 4, 2, 16, 7),
])
def test_build_geometry(cons, n, k, d, s, l, q):
    spec = build(cons, n, k, d=d)
    assert (spec.s, spec.l, spec.q) == (s, l, q)
    assert spec.r == n - k
    assert spec.m == (n - 1 if cons in ("C4", "C7") else n)


def test_diagonal_coefficients_pairwise_distinct():
    spec = build("C3", 5, 2)
    flat = [spec.lam_of(i, u) for i in range(1, 6) for u in range(spec.s)]
    assert len(set(flat)) == len(flat) == spec.s * spec.n


def test_shift_coefficients_shape():
    spec = build("C5", 5, 3, d=4)
    gamma = spec.field.primitive_element()
    for i in range(1, 6):
        row = spec.lam[i - 1]
        assert row[0] == pow(gamma, i, spec.q)
        assert all(x == 1 for x in row[1:])
    spec4 = build("C4", 5, 3)
    assert spec4.identity_node == 5
    assert spec4.digit_pos(5) is None


def test_supported_d_divisibility():
    spec = build("C1", 6, 2)  # r = 4, s = 4
    assert spec.supported_d() == [2, 3, 5]
    spec = build("C3", 5, 2)  # s = 6
    assert spec.supported_d() == [2, 3, 4]
    spec = build("C2", 5, 2, d=[2, 3])
    assert spec.s == 2 and spec.supported_d() == [2, 3]


def test_d_set_widens_s():
    spec = build("C2", 7, 2, d=[3, 4])
    assert spec.s == 6  # lcm(2, 3)


def test_build_validation():
    with pytest.raises(errors.BadParameters):
        build("C9", 4, 2)
    with pytest.raises(errors.BadParameters):
        build("C1", 4, 4)
    with pytest.raises(errors.BadParameters):
        build("C2", 4, 2)  # missing d
    with pytest.raises(errors.BadParameters):
        build("C2", 4, 2, d=4)  # d > n-1
    with pytest.raises(errors.NotPrime):
        build("C1", 4, 2, q=12)
    with pytest.raises(errors.BadParameters):
        build("C1", 4, 2, q=7)  # below the r*n bound


def test_desk_scale_guard():
    with pytest.raises(errors.BadParameters):
        build("C3", 8, 2)  # l = 720^8
    spec = build("C3", 8, 2, force_large_l=True)
    assert spec.l == 60**8  # lcm(1..6) = 60


def test_digit_table_matches_scalar():
    spec = build("C2", 5, 2, d=3)
    table = spec.digit_table()
    assert table.shape == (spec.l, spec.n)
    for a in range(0, spec.l, 7):
        assert tuple(table[a]) == spec.digits(a)
    with pytest.raises(ValueError):
        table[0, 0] = 1  # table is shared and must stay read-only
