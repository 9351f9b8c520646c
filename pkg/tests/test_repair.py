from itertools import combinations

import numpy as np
import pytest

from mdsarray import codec, repair
from mdsarray.codec import Codeword, encode_systematic, random_message
from mdsarray.codespec import build
from mdsarray.errors import (BadParameters, NotIntegral, TooFewHelpers,
                             TooManyFailures, UnsupportedSpec)
from mdsarray.sim import corrupt_column


def _erase(cw, nodes):
    spec = cw.spec
    return Codeword(spec, [None if i in nodes else cw.column(i)
                           for i in range(1, spec.n + 1)])


def test_single_repair_all_nodes_all_helper_sets(instance):
    spec, _message, cw = instance
    for d in spec.supported_d():
        for i in range(1, spec.n + 1):
            if i == spec.identity_node and spec.construction == "C7" \
                    and d + 1 - spec.k > 1:
                continue  # repaired by full decode; meter checked elsewhere
            survivors = [v for v in range(1, spec.n + 1) if v != i]
            for helpers in combinations(survivors, d):
                if spec.construction == "C4" and d < spec.n - 1 \
                        and d + 1 - spec.k > 1:
                    continue  # no partial-helper schedule for C4
                trace = repair.repair_d(spec, _erase(cw, [i]), i,
                                        list(helpers), 0)
                assert np.array_equal(trace.recovered[i], cw.column(i))
                assert trace.total_transmitted == d * spec.l // (d + 1 - spec.k)
                assert trace.errors_found == set()


def test_access_meters(instance):
    spec, _message, cw = instance
    for d in spec.supported_d():
        i = 1
        survivors = [v for v in range(2, spec.n + 1)]
        helpers = survivors[:d]
        if spec.construction == "C4" and d < spec.n - 1 \
                and d + 1 - spec.k > 1:
            return
        trace = repair.repair_d(spec, _erase(cw, [i]), i, helpers, 0)
        s_d = d + 1 - spec.k
        if spec.construction in ("C4", "C5", "C6") or s_d == 1:
            assert trace.total_accessed == trace.total_transmitted
        elif spec.diagonal:
            assert trace.total_accessed == s_d * trace.total_transmitted
        for v in helpers:
            assert len(trace.accessed[v]) == len(set(trace.accessed[v]))


def test_optimal_flag_and_bound(instance):
    spec, _message, cw = instance
    if spec.s % (spec.n - spec.k):
        # d = n-1 has no repair schedule under this group arity
        with pytest.raises(UnsupportedSpec):
            repair.repair_single(spec, _erase(cw, [1]), 1)
        return
    trace = repair.repair_single(spec, _erase(cw, [1]), 1)
    assert np.array_equal(trace.recovered[1], cw.column(1))
    b = repair.bound_bandwidth(spec, spec.n - 1, 1, 0)
    assert trace.total_transmitted == b and trace.optimal


def test_c7_identity_node_fallback():
    spec = build("C7", 5, 3, d=4)
    rng = np.random.default_rng(30)
    cw = encode_systematic(spec, random_message(spec, rng))
    trace = repair.repair_d(spec, _erase(cw, [5]), 5, [1, 2, 3, 4], 0)
    assert np.array_equal(trace.recovered[5], cw.column(5))
    assert not trace.optimal  # full decode, not the bandwidth-optimal path


def test_uer_diagonal_localizes_corrupt_helper():
    spec = build("C2", 6, 2, d=3)
    rng = np.random.default_rng(31)
    cw = encode_systematic(spec, random_message(spec, rng))
    i = 2
    helpers = [1, 3, 4, 5, 6]
    for bad in (3, 6):
        nodes = [c.copy() for c in cw.nodes]
        nodes[bad - 1] = corrupt_column(nodes[bad - 1], 42, spec.q)
        nodes[i - 1] = None
        trace = repair.repair_d(spec, Codeword(spec, nodes), i, helpers, 1)
        assert np.array_equal(trace.recovered[i], cw.column(i))
        assert trace.errors_found == {bad}
        assert trace.total_transmitted == repair.bound_bandwidth(spec, 3, 1, 1)


def test_uer_shift_localizes_corrupt_helper():
    spec = build("C5", 6, 2, d=3)
    rng = np.random.default_rng(32)
    cw = encode_systematic(spec, random_message(spec, rng))
    i = 4
    helpers = [1, 2, 3, 5, 6]
    for bad in (1, 5):
        nodes = [c.copy() for c in cw.nodes]
        nodes[bad - 1] = corrupt_column(nodes[bad - 1], 43, spec.q)
        nodes[i - 1] = None
        trace = repair.repair_d(spec, Codeword(spec, nodes), i, helpers, 1)
        assert np.array_equal(trace.recovered[i], cw.column(i))
        assert trace.errors_found == {bad}
        assert trace.total_transmitted == repair.bound_bandwidth(spec, 3, 1, 1)
        assert trace.total_accessed == trace.total_transmitted


def test_multi_repair_diagonal():
    spec = build("C3", 5, 2)
    rng = np.random.default_rng(33)
    cw = encode_systematic(spec, random_message(spec, rng))
    failed = (2, 4)
    helpers = [1, 3]
    trace = repair.repair_multi(spec, _erase(cw, failed), failed, helpers, 0)
    for i in failed:
        assert np.array_equal(trace.recovered[i], cw.column(i))
    assert trace.total_transmitted == repair.bound_bandwidth(spec, 2, 2, 0)
    assert trace.optimal


def test_multi_repair_shift():
    spec = build("C6", 6, 4)
    rng = np.random.default_rng(34)
    cw = encode_systematic(spec, random_message(spec, rng))
    for failed in [(1, 2), (3, 6), (5, 6)]:
        helpers = [v for v in range(1, 7) if v not in failed]
        trace = repair.repair_multi(spec, _erase(cw, failed), failed,
                                    helpers, 0)
        for i in failed:
            assert np.array_equal(trace.recovered[i], cw.column(i))
        assert trace.total_transmitted == repair.bound_bandwidth(spec, 4, 2, 0)


def test_multi_delegates_single():
    spec = build("C1", 5, 3)
    rng = np.random.default_rng(35)
    cw = encode_systematic(spec, random_message(spec, rng))
    trace = repair.repair_multi(spec, _erase(cw, [2]), [2], [1, 3, 4, 5], 0)
    assert np.array_equal(trace.recovered[2], cw.column(2))


def test_degenerate_group_full_download():
    spec = build("C2", 5, 2, d=2)
    rng = np.random.default_rng(36)
    cw = encode_systematic(spec, random_message(spec, rng))
    trace = repair.repair_d(spec, _erase(cw, [1]), 1, [2, 4], 0)
    assert np.array_equal(trace.recovered[1], cw.column(1))
    assert trace.total_transmitted == 2 * spec.l  # = d*l/1, still optimal
    assert trace.optimal


def test_validation_errors():
    spec = build("C1", 5, 3)
    rng = np.random.default_rng(37)
    cw = encode_systematic(spec, random_message(spec, rng))
    cwx = _erase(cw, [1])
    with pytest.raises(TooFewHelpers):
        repair.repair_d(spec, cwx, 1, [2, 3], 0)
    with pytest.raises(BadParameters):
        repair.repair_d(spec, cwx, 1, [1, 2, 3, 4], 0)  # helper == failed
    with pytest.raises(TooManyFailures):
        repair.repair_multi(spec, _erase(cw, [1, 2, 3]), [1, 2, 3], [4, 5], 0)
    with pytest.raises(BadParameters):
        repair.repair_d(spec, cwx, 9, [2, 3, 4], 0)
    with pytest.raises(BadParameters):
        repair.repair_d(spec, cwx, 2, [1, 3, 4], 0)  # helper 1 is erased
    with pytest.raises(NotIntegral):
        repair.bound_bandwidth(build("C1", 5, 2), 3, 1, 1)


def test_repair_after_decode_agree(instance):
    """Repair engines and the erasure decoder are independent paths to the
    same column."""
    spec, _message, cw = instance
    i = spec.n
    d = max(spec.supported_d())
    helpers = [v for v in range(1, spec.n) if v != i][:d]
    dec = codec.decode_erasures(spec, _erase(cw, [i]))
    tr = repair.repair_d(spec, _erase(cw, [i]), i, helpers, 0)
    assert np.array_equal(dec.column(i), tr.recovered[i])
