"""Command-line front end.

Subcommands: encode, decode, repair, verify, corrupt, bench, replay.
Exit codes: 0 success, 2 parameter error, 3 decode/repair failure,
4 file format or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from pathlib import Path

import numpy as np

from . import codec, codespec, repair, shard, sim
from .errors import (BadParameters, DecodingFailure, MdsArrayError,
                     NotIntegral, NotPrime, OutOfRange, ShardFormatError,
                     SingularDifference, SingularSystem, TooFewHelpers,
                     TooManyErasures, TooManyFailures, UnsupportedSpec)
from .gf import smallest_prime_at_least

EXIT_OK, EXIT_PARAMS, EXIT_DECODE, EXIT_IO = 0, 2, 3, 4

_PARAM_ERRORS = (BadParameters, UnsupportedSpec, NotPrime, OutOfRange,
                 TooFewHelpers, TooManyFailures, NotIntegral)
_DECODE_ERRORS = (DecodingFailure, TooManyErasures, SingularSystem,
                  SingularDifference)


def _add_spec_args(p):
    p.add_argument("--construction", required=True,
                   choices=codespec.CONSTRUCTIONS)
    p.add_argument("-n", type=int, required=True, help="total node count")
    p.add_argument("-k", type=int, required=True, help="data node count")
    p.add_argument("-d", type=int, action="append", default=None,
                   help="helper count (repeatable)")
    p.add_argument("--field", type=int, default=None,
                   help="field modulus (prime); default: smallest admissible")
    p.add_argument("--force-large-l", action="store_true",
                   help="override the column-size guard")


def _build_spec(args, for_files=False):
    d = args.d if args.d else None
    if d is not None and len(d) == 1:
        d = d[0]
    spec = codespec.build(args.construction, args.n, args.k, d=d,
                          q=args.field, force_large_l=args.force_large_l)
    if for_files and args.field is None and spec.q < 257:
        # shard payloads carry whole bytes, which needs q >= 257
        spec = codespec.build(args.construction, args.n, args.k, d=d,
                              q=smallest_prime_at_least(257),
                              force_large_l=args.force_large_l)
    return spec


def _parse_nodes(text):
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise BadParameters(f"bad node list {text!r}")


def _shard_path(outdir: Path, i: int) -> Path:
    return outdir / f"node_{i:03d}.shard"


def _load_shards(indir: Path):
    """All shards in a directory keyed by node index, plus their CodeSpec."""
    paths = sorted(Path(indir).glob("node_*.shard"))
    if not paths:
        raise ShardFormatError(f"no shard files in {indir}")
    headers = {}
    bodies = {}
    for p in paths:
        h, symbols = shard.read_shard(p)
        headers[h.node_index] = h
        bodies[h.node_index] = symbols
    first = next(iter(headers.values()))
    for h in headers.values():
        if (h.construction, h.q, h.n, h.k, h.s, h.d_set, h.l,
                h.payload_bytes) != (first.construction, first.q, first.n,
                                     first.k, first.s, first.d_set, first.l,
                                     first.payload_bytes):
            raise ShardFormatError("shards disagree on code parameters")
    spec = shard.spec_from_header(first)
    return spec, first, bodies


def _stripes(spec, bodies):
    sizes = {len(b) // spec.l for b in bodies.values()}
    if len(sizes) != 1:
        raise ShardFormatError("shards hold different stripe counts")
    return sizes.pop()


def cmd_encode(args):
    spec = _build_spec(args, for_files=True)
    data = Path(args.input).read_bytes()
    symbols = shard.bytes_to_symbols(data, spec.q)
    stripe_syms = spec.k * spec.l
    if len(symbols) % stripe_syms:
        pad = stripe_syms - len(symbols) % stripe_syms
        symbols = np.concatenate([symbols, np.zeros(pad, dtype=np.int64)])
    nstripes = len(symbols) // stripe_syms
    buffers = [[] for _ in range(spec.n)]
    for st in range(nstripes):
        chunk = symbols[st * stripe_syms:(st + 1) * stripe_syms]
        message = list(chunk.reshape(spec.k, spec.l))
        cw = codec.encode_systematic(spec, message)
        for i in range(1, spec.n + 1):
            buffers[i - 1].append(cw.column(i))
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for i in range(1, spec.n + 1):
        header = shard.ShardHeader(spec.construction, spec.q, spec.n, spec.k,
                                   spec.s, spec.d_set, i, spec.l, len(data))
        shard.write_shard(_shard_path(outdir, i), header,
                          np.concatenate(buffers[i - 1]))
    print(f"encoded {len(data)} bytes into {spec.n} shards "
          f"({nstripes} stripes of {spec.l} symbols) under {spec}")
    return EXIT_OK


def cmd_decode(args):
    spec, first, bodies = _load_shards(Path(args.shards))
    nstripes = _stripes(spec, bodies)
    data_cols = []
    for st in range(nstripes):
        nodes = []
        for i in range(1, spec.n + 1):
            if i in bodies:
                nodes.append(bodies[i][st * spec.l:(st + 1) * spec.l])
            else:
                nodes.append(None)
        cw = codec.decode_erasures(spec, codec.Codeword(spec, nodes))
        data_cols.extend(cw.message())
    symbols = np.concatenate(data_cols)
    Path(args.out).write_bytes(
        shard.symbols_to_bytes(symbols, spec.q, first.payload_bytes))
    print(f"decoded {first.payload_bytes} bytes from "
          f"{len(bodies)}/{spec.n} shards")
    return EXIT_OK


def cmd_verify(args):
    spec, _first, bodies = _load_shards(Path(args.shards))
    missing = [i for i in range(1, spec.n + 1) if i not in bodies]
    if missing:
        raise DecodingFailure(f"cannot verify with missing shards {missing}")
    nstripes = _stripes(spec, bodies)
    for st in range(nstripes):
        cw = codec.Codeword(
            spec, [bodies[i][st * spec.l:(st + 1) * spec.l]
                   for i in range(1, spec.n + 1)])
        ok, where = codec.verify(spec, cw)
        if not ok:
            row, coord = where
            print(f"FAIL stripe {st} parity row {row} coordinate {coord}")
            return EXIT_DECODE
    print(f"OK {nstripes} stripes")
    return EXIT_OK


def cmd_corrupt(args):
    path = _shard_path(Path(args.shards), args.node)
    header, symbols = shard.read_shard(path)
    bad = sim.corrupt_column(symbols, args.seed, header.q)
    shard.write_shard(path, header, bad)
    print(f"corrupted node {args.node} with seed {args.seed}")
    return EXIT_OK


def cmd_repair(args):
    indir = Path(args.shards)
    spec, first, bodies = _load_shards(indir)
    failed = (_parse_nodes(args.failed) if args.failed
              else [i for i in range(1, spec.n + 1) if i not in bodies])
    if not failed:
        raise BadParameters("nothing to repair: no failed nodes")
    helpers = (_parse_nodes(args.helpers) if args.helpers
               else [i for i in bodies if i not in failed])
    nstripes = _stripes(spec, bodies)
    recovered = {i: [] for i in failed}
    totals_tx = {v: 0 for v in helpers}
    totals_ax = {v: 0 for v in helpers}
    errors = set()
    for st in range(nstripes):
        nodes = []
        for i in range(1, spec.n + 1):
            if i in failed or i not in bodies:
                nodes.append(None)
            else:
                nodes.append(bodies[i][st * spec.l:(st + 1) * spec.l])
        cw = codec.Codeword(spec, nodes)
        if len(failed) == 1:
            trace = repair.repair_d(spec, cw, failed[0], helpers, args.t)
        else:
            trace = repair.repair_multi(spec, cw, failed, helpers, args.t)
        for i in failed:
            recovered[i].append(trace.recovered[i])
        for v in helpers:
            totals_tx[v] += trace.transmitted.get(v, 0)
            totals_ax[v] += len(trace.accessed.get(v, ()))
        errors |= trace.errors_found
    for i in failed:
        header = shard.ShardHeader(spec.construction, spec.q, spec.n, spec.k,
                                   spec.s, spec.d_set, i, spec.l,
                                   first.payload_bytes)
        shard.write_shard(_shard_path(indir, i), header,
                          np.concatenate(recovered[i]))
    d = len(helpers) - 2 * args.t
    try:
        bound = repair.bound_bandwidth(spec, d, len(failed), args.t) * nstripes
    except (NotIntegral, BadParameters):
        bound = None
    rows = [{"helper": v, "transmitted": totals_tx[v],
             "accessed": totals_ax[v]} for v in helpers]
    print(f"repaired nodes {failed} from helpers {helpers} "
          f"({nstripes} stripes)")
    total = sum(totals_tx.values())
    print(f"total transmitted {total} symbols"
          + (f" (bound {bound})" if bound is not None else ""))
    if errors:
        print(f"corrupt helpers detected: {sorted(errors)}")
    if args.out:
        _write_repair_report(Path(args.out), rows, total, bound)
    return EXIT_OK


def _write_repair_report(outdir: Path, rows, total, bound):
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / "repair_report.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, ["helper", "transmitted", "accessed"])
        writer.writeheader()
        writer.writerows(rows)
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [str(r["helper"]) for r in rows]
    ax.bar(xs, [r["transmitted"] for r in rows], label="transmitted")
    ax.bar(xs, [r["accessed"] for r in rows],
           fill=False, edgecolor="gray", label="accessed")
    if bound is not None and rows:
        ax.axhline(bound / len(rows), color="red", linestyle="--",
                   label="bound / helper")
    ax.set_xlabel("helper node")
    ax.set_ylabel("symbols")
    ax.legend()
    fig.tight_layout()
    fig.savefig(outdir / "repair_report.png")
    plt.close(fig)
    print(f"report written to {csv_path} and {outdir / 'repair_report.png'}")


_BENCH_GRID = (
    ("C1", 4, 2, None),
    ("C2", 5, 3, 4),
    ("C3", 4, 2, None),
    ("C4", 5, 3, None),
    ("C5", 5, 3, 4),
    ("C6", 4, 2, None),
    ("C7", 5, 3, 4),
)


def cmd_bench(args):
    wanted = set(args.construction) if args.construction else None
    rows = []
    for cons, n, k, d in _BENCH_GRID:
        if wanted is not None and cons not in wanted:
            continue
        spec = codespec.build(cons, n, k, d=d)
        rng = np.random.default_rng(0)
        message = codec.random_message(spec, rng)
        t0 = time.perf_counter()
        cw = codec.encode_systematic(spec, message)
        t1 = time.perf_counter()
        d_use = max(spec.supported_d(), default=spec.n - 1)
        helpers = [v for v in range(2, spec.n + 1)][:d_use]
        t2 = time.perf_counter()
        trace = repair.repair_d(spec, cw, 1, helpers, 0)
        t3 = time.perf_counter()
        try:
            bound = repair.bound_bandwidth(spec, d_use, 1, 0)
        except NotIntegral:
            bound = ""
        rows.append({
            "construction": cons, "n": n, "k": k, "d": d_use, "t": 0,
            "l": spec.l, "q": spec.q,
            "transmitted": trace.total_transmitted, "bound": bound,
            "optimal": int(trace.optimal),
            "encode_seconds": round(t1 - t0, 6),
            "repair_seconds": round(t3 - t2, 6),
        })
    fields = ["construction", "n", "k", "d", "t", "l", "q", "transmitted",
              "bound", "optimal", "encode_seconds", "repair_seconds"]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fields)
    writer.writeheader()
    writer.writerows(rows)
    sys.stdout.write(buf.getvalue())
    if args.out:
        _write_bench_report(Path(args.out), rows, buf.getvalue())
    return EXIT_OK


def _write_bench_report(outdir: Path, rows, csv_text):
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "bench.csv").write_text(csv_text)
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(7, 4))
    xs = np.arange(len(rows))
    ax.bar(xs - 0.2, [r["transmitted"] for r in rows], width=0.4,
           label="transmitted")
    ax.bar(xs + 0.2, [r["bound"] or 0 for r in rows], width=0.4,
           label="bound")
    ax.set_xticks(xs)
    ax.set_xticklabels([r["construction"] for r in rows])
    ax.set_ylabel("repair download (symbols)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(outdir / "bench.png")
    plt.close(fig)
    print(f"report written to {outdir / 'bench.csv'} and "
          f"{outdir / 'bench.png'}", file=sys.stderr)


def cmd_replay(args):
    spec = _build_spec(args)
    rng = np.random.default_rng(args.seed)
    message = codec.random_message(spec, rng)
    lines = Path(args.log).read_text()
    cluster = sim.replay(spec, message, lines)
    for i, status in enumerate(cluster.statuses(), start=1):
        print(f"node {i}: {status} transmitted={cluster.transmitted[i]} "
              f"accessed={cluster.accessed[i]}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mdsarray",
        description="MDS array codes with repair-optimal download")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="split a file into n shards")
    p.add_argument("input")
    p.add_argument("--out", required=True, help="output shard directory")
    _add_spec_args(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="rebuild the file from >= k shards")
    p.add_argument("shards")
    p.add_argument("--out", required=True, help="output file")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("verify", help="check the parity rows of all shards")
    p.add_argument("shards")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("corrupt", help="deterministically corrupt one shard")
    p.add_argument("shards")
    p.add_argument("--node", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("repair", help="regenerate failed shards")
    p.add_argument("shards")
    p.add_argument("--failed", default=None,
                   help="comma-separated nodes (default: missing shards)")
    p.add_argument("--helpers", default=None,
                   help="comma-separated helper nodes (default: all others)")
    p.add_argument("-t", type=int, default=0,
                   help="tolerated corrupt helper count")
    p.add_argument("--out", default=None,
                   help="directory for the repair report (csv + figure)")
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("bench", help="timing and meter grid, CSV on stdout")
    p.add_argument("--construction", action="append", default=None,
                   choices=codespec.CONSTRUCTIONS)
    p.add_argument("--out", default=None,
                   help="directory for bench.csv and bench.png")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("replay", help="replay an event log over a seeded encode")
    p.add_argument("log")
    p.add_argument("--seed", type=int, default=0)
    _add_spec_args(p)
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _PARAM_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except _DECODE_ERRORS as exc:
        print(f"decode error: {exc}", file=sys.stderr)
        return EXIT_DECODE
    except (ShardFormatError, OSError) as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except MdsArrayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
