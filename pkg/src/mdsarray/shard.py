"""Shard files: one node's column(s) plus a self-describing header.

Layout (all integers little-endian):

====================  ======
magic ``MDSA``        4 bytes
version               u8 (=1)
construction          u8 (1..7)
q                     u32
n, k, s               u16 each
len(d_set)            u16
d_set entries         u16 each
node_index (1-based)  u16
l                     u64
payload_bytes         u64
====================  ======

The body holds the node's symbols as u32 values, one codeword column of
length l per stripe.  payload_bytes is the original file size, used to
strip the padding after decoding.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from . import codespec
from .codespec import CONSTRUCTIONS, CodeSpec
from .errors import BadParameters, ShardFormatError

MAGIC = b"MDSA"
VERSION = 1

__all__ = ["ShardHeader", "pack_header", "unpack_header", "write_shard",
           "read_shard", "spec_from_header", "symbol_bytes",
           "bytes_to_symbols", "symbols_to_bytes"]


@dataclass(frozen=True)
class ShardHeader:
    construction: str
    q: int
    n: int
    k: int
    s: int
    d_set: tuple[int, ...]
    node_index: int
    l: int
    payload_bytes: int


def pack_header(h: ShardHeader) -> bytes:
    cid = CONSTRUCTIONS.index(h.construction) + 1
    out = struct.pack("<4sBBIHHH", MAGIC, VERSION, cid, h.q, h.n, h.k, h.s)
    out += struct.pack("<H", len(h.d_set))
    out += struct.pack(f"<{len(h.d_set)}H", *h.d_set)
    out += struct.pack("<HQQ", h.node_index, h.l, h.payload_bytes)
    return out


def unpack_header(data: bytes) -> tuple[ShardHeader, int]:
    """Parse a header from the front of data; returns (header, length)."""
    fixed = struct.calcsize("<4sBBIHHH")
    if len(data) < fixed + 2:
        raise ShardFormatError("truncated shard header")
    magic, version, cid, q, n, k, s = struct.unpack_from("<4sBBIHHH", data)
    if magic != MAGIC:
        raise ShardFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise ShardFormatError(f"unsupported shard version {version}")
    if not 1 <= cid <= len(CONSTRUCTIONS):
        raise ShardFormatError(f"unknown construction id {cid}")
    (nd,) = struct.unpack_from("<H", data, fixed)
    off = fixed + 2
    if len(data) < off + 2 * nd + struct.calcsize("<HQQ"):
        raise ShardFormatError("truncated shard header")
    d_set = struct.unpack_from(f"<{nd}H", data, off)
    off += 2 * nd
    node_index, l, payload = struct.unpack_from("<HQQ", data, off)
    off += struct.calcsize("<HQQ")
    return ShardHeader(CONSTRUCTIONS[cid - 1], q, n, k, s, tuple(d_set),
                       node_index, l, payload), off


def spec_from_header(h: ShardHeader) -> CodeSpec:
    """Rebuild the CodeSpec a shard was written under, and cross-check it."""
    d = list(h.d_set) or None
    spec = codespec.build(h.construction, h.n, h.k, d=d, q=h.q)
    if (spec.s, spec.l) != (h.s, h.l):
        raise ShardFormatError(
            f"header geometry s={h.s}, l={h.l} does not match the "
            f"construction's s={spec.s}, l={spec.l}")
    return spec


def write_shard(path, header: ShardHeader, symbols: np.ndarray) -> None:
    symbols = np.asarray(symbols, dtype=np.int64)
    if len(symbols) % header.l:
        raise BadParameters(
            f"body length {len(symbols)} is not a multiple of l={header.l}")
    with open(path, "wb") as fh:
        fh.write(pack_header(header))
        fh.write(symbols.astype("<u4").tobytes())


def read_shard(path) -> tuple[ShardHeader, np.ndarray]:
    with open(path, "rb") as fh:
        data = fh.read()
    header, off = unpack_header(data)
    body = data[off:]
    if len(body) % 4:
        raise ShardFormatError("shard body is not a whole number of symbols")
    symbols = np.frombuffer(body, dtype="<u4").astype(np.int64)
    if header.l == 0 or len(symbols) % header.l:
        raise ShardFormatError(
            f"body holds {len(symbols)} symbols, not a multiple of l={header.l}")
    if symbols.size and int(symbols.max()) >= header.q:
        raise ShardFormatError("symbol value outside the field")
    return header, symbols


def symbol_bytes(q: int) -> int:
    """Bytes of raw data carried per symbol: largest b with 256^b <= q."""
    b = 0
    while 256 ** (b + 1) <= q:
        b += 1
    if b == 0:
        raise BadParameters(
            f"field size {q} below 257 cannot carry whole bytes")
    return b


def bytes_to_symbols(data: bytes, q: int) -> np.ndarray:
    """Pack raw bytes into field symbols, b bytes per symbol."""
    b = symbol_bytes(q)
    if len(data) % b:
        data = data + b"\x00" * (b - len(data) % b)
    arr = np.frombuffer(data, dtype=np.uint8).reshape(-1, b).astype(np.int64)
    out = np.zeros(arr.shape[0], dtype=np.int64)
    for i in range(b):  # little-endian within each symbol
        out += arr[:, i] << (8 * i)
    return out


def symbols_to_bytes(symbols: np.ndarray, q: int, nbytes: int) -> bytes:
    b = symbol_bytes(q)
    symbols = np.asarray(symbols, dtype=np.int64)
    out = np.zeros((len(symbols), b), dtype=np.uint8)
    for i in range(b):
        out[:, i] = (symbols >> (8 * i)) & 0xFF
    return out.tobytes()[:nbytes]
