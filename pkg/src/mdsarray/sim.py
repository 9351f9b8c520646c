"""Cluster simulation: node lifecycles, adversarial corruption, repair runs.

A cluster holds one codeword across n simulated nodes.  Failures erase a
column; corruptions replace one deterministically from a seed (so a replay
of the event log reproduces the cluster exactly).  Repairs go through
:mod:`mdsarray.repair` and accumulate per-node download meters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import codec, repair
from .codespec import CodeSpec
from .errors import BadParameters

__all__ = ["NodeState", "Cluster", "cluster_new", "fail", "corrupt",
           "run_repair", "serialize_log", "replay", "corrupt_column"]

HEALTHY, FAILED, CORRUPT = "healthy", "failed", "corrupt"

_MASK = (1 << 64) - 1


def _splitmix64(seed: int):
    """Deterministic 64-bit stream; the standard splitmix64 scramble."""
    x = seed & _MASK
    while True:
        x = (x + 0x9E3779B97F4A7C15) & _MASK
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        yield z ^ (z >> 31)


def corrupt_column(column: np.ndarray, seed: int, q: int) -> np.ndarray:
    """A seeded adversarial replacement, guaranteed to differ."""
    stream = _splitmix64(seed)
    while True:
        out = np.array([next(stream) % q for _ in range(len(column))],
                       dtype=np.int64)
        if not np.array_equal(out, np.asarray(column) % q):
            return out


@dataclass
class NodeState:
    status: str
    column: np.ndarray | None


@dataclass
class Cluster:
    spec: CodeSpec
    nodes: list  # NodeState, 1-based via nodes[i-1]
    log: list = field(default_factory=list)
    transmitted: dict = field(default_factory=dict)  # node -> symbols sent
    accessed: dict = field(default_factory=dict)  # node -> symbols read
    traces: list = field(default_factory=list)

    def node(self, i: int) -> NodeState:
        return self.nodes[i - 1]

    def codeword(self) -> codec.Codeword:
        """Current cluster contents; failed nodes appear erased.  Corrupt
        nodes contribute their (wrong) stored column."""
        return codec.Codeword(
            self.spec,
            [st.column if st.status != FAILED else None for st in self.nodes])

    def statuses(self) -> list[str]:
        return [st.status for st in self.nodes]


def cluster_new(spec: CodeSpec, message) -> Cluster:
    cw = codec.encode_systematic(spec, message)
    nodes = [NodeState(HEALTHY, cw.column(i)) for i in range(1, spec.n + 1)]
    cluster = Cluster(spec, nodes,
                      transmitted={i: 0 for i in range(1, spec.n + 1)},
                      accessed={i: 0 for i in range(1, spec.n + 1)})
    return cluster


def fail(cluster: Cluster, i: int) -> Cluster:
    st = cluster.node(i)
    st.status = FAILED
    st.column = None
    cluster.log.append(f"FAIL {i}")
    return cluster


def corrupt(cluster: Cluster, i: int, seed: int) -> Cluster:
    st = cluster.node(i)
    if st.status == FAILED:
        raise BadParameters(f"node {i} is failed; nothing to corrupt")
    st.column = corrupt_column(st.column, seed, cluster.spec.q)
    st.status = CORRUPT
    cluster.log.append(f"CORRUPT {i} {seed}")
    return cluster


def run_repair(cluster: Cluster, failed, helpers, t: int = 0,
               strategy: str = "auto") -> repair.RepairTrace:
    """Repair the failed nodes from the helper set and update the cluster.

    strategy "auto" uses the construction's optimal engine; "full"
    downloads whole helper columns and decodes.
    """
    spec = cluster.spec
    failed = tuple(sorted(set(int(i) for i in failed)))
    helpers = tuple(sorted(set(int(v) for v in helpers)))
    for i in failed:
        if cluster.node(i).status != FAILED:
            raise BadParameters(f"node {i} is not failed")
    for v in helpers:
        if cluster.node(v).status == FAILED:
            raise BadParameters(f"helper {v} is failed")
    cw = cluster.codeword()
    if strategy == "full":
        d = len(helpers) - 2 * t
        trace = repair._repair_full_download(spec, cw, failed, helpers, t, d)
    elif strategy == "auto":
        if len(failed) == 1:
            trace = repair.repair_d(spec, cw, failed[0], helpers, t)
        else:
            trace = repair.repair_multi(spec, cw, failed, helpers, t)
    else:
        raise BadParameters(f"unknown strategy {strategy!r}")
    for i, col in trace.recovered.items():
        st = cluster.node(i)
        st.status = HEALTHY
        st.column = col
    for v in helpers:
        cluster.transmitted[v] += trace.transmitted.get(v, 0)
        cluster.accessed[v] += len(trace.accessed.get(v, ()))
    cluster.traces.append(trace)
    cluster.log.append(
        "REPAIR F={} R={} t={} strategy={}".format(
            ",".join(map(str, failed)), ",".join(map(str, helpers)),
            t, strategy))
    return trace


def serialize_log(cluster: Cluster) -> str:
    return "\n".join(cluster.log) + ("\n" if cluster.log else "")


def replay(spec: CodeSpec, message, lines) -> Cluster:
    """Rebuild a cluster by replaying an event log over a fresh encode."""
    cluster = cluster_new(spec, message)
    if isinstance(lines, str):
        lines = lines.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "FAIL" and len(parts) == 2:
                fail(cluster, int(parts[1]))
            elif parts[0] == "CORRUPT" and len(parts) == 3:
                corrupt(cluster, int(parts[1]), int(parts[2]))
            elif parts[0] == "REPAIR":
                kv = dict(p.split("=", 1) for p in parts[1:])
                failed = [int(x) for x in kv["F"].split(",")]
                helpers = [int(x) for x in kv["R"].split(",")]
                run_repair(cluster, failed, helpers, int(kv.get("t", 0)),
                           kv.get("strategy", "auto"))
            else:
                raise BadParameters(f"unrecognized event {parts[0]!r}")
        except (KeyError, ValueError) as exc:
            raise BadParameters(
                f"malformed event log line {lineno}: {line!r}") from exc
    return cluster
