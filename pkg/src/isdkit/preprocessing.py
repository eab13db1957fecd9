"""Offline/online split of the decoder.

The offline phase fixes T_P permutations and, for each, stores the systematic
form, the four base lists and the syndrome-independent first join L12. The
online phase consumes a syndrome and runs only the syndrome-dependent joins
(L34, final) against each stored context. The offline API never sees a
syndrome, so the split is structural.
"""

from __future__ import annotations

import math
import os
import random
import struct
import time
import zlib
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .f2la import F2Matrix, F2Vector, Permutation, SystematicForm, mat_vec_mul
from .isd_core import (
    ConfigError,
    Counters,
    IsdParams,
    JoinSpec,
    ListEntry,
    build_base_lists,
    mitm_join,
    run_trial,
    systematize,
)

MAGIC = b"ISDPRE1"
FORMAT_VERSION = 1


class BundleFormatError(ValueError):
    """Corrupt, truncated or version-mismatched bundle file."""


@dataclass(frozen=True)
class PrecomputedContext:
    """One permutation's offline product."""

    sf: SystematicForm
    base_lists: Tuple[List[ListEntry], List[ListEntry], List[ListEntry], List[ListEntry]]
    l12: List[ListEntry]
    params: IsdParams
    index: int


@dataclass(frozen=True)
class PrecomputationBundle:
    contexts: Tuple[PrecomputedContext, ...]
    n: int
    k: int
    omega: int
    params: IsdParams
    seed: int

    @property
    def t_p(self) -> int:
        return len(self.contexts)


def default_t_p(n: int, k: int, omega: int, params: IsdParams, safety: float = 4.0) -> int:
    """Permutation count giving ~1 - e^-safety success probability."""
    from .estimator import success_probability

    eps, p_iters = success_probability(n, k, omega, params)
    return max(1, math.ceil(safety * p_iters))


def precompute(
    h: F2Matrix,
    omega: int,
    params: IsdParams,
    t_p: int,
    seed: int = 0,
    counters: Optional[Counters] = None,
) -> PrecomputationBundle:
    """Offline phase: t_p contexts of (systematic form, base lists, L12)."""
    n = h.ncols
    k = n - h.nrows
    params.validate(n, k, omega)
    if t_p < 1:
        raise ConfigError("t_p must be at least 1")
    if counters is None:
        counters = Counters()
    rng = random.Random(seed)
    zero_r = F2Vector.zero(h.nrows)
    contexts = []
    for j in range(t_p):
        sf = systematize(h, params.l1, params.l2, rng, counters)
        base_lists = build_base_lists(sf, params, rng)
        counters.l12_joins += 1
        l12 = mitm_join(
            base_lists[0],
            base_lists[1],
            JoinSpec(0, params.l1, zero_r, params.w11),
            counters=counters,
        )
        contexts.append(PrecomputedContext(sf, base_lists, l12, params, j))
    return PrecomputationBundle(tuple(contexts), n, k, omega, params, seed)


def online_decode(
    bundle: PrecomputationBundle,
    s: F2Vector,
    counters: Optional[Counters] = None,
) -> Optional[F2Vector]:
    """Online phase: syndrome-dependent joins over the stored contexts.

    Performs no Gaussian elimination and no L12 joins; returns the first valid
    error vector, or None when every context misses.
    """
    r = bundle.n - bundle.k
    if s.n != r:
        raise ConfigError(f"syndrome length {s.n} != n-k = {r}")
    if counters is None:
        counters = Counters()
    for ctx in bundle.contexts:
        counters.permutations += 1
        s_tilde = mat_vec_mul(ctx.sf.q, s)
        e = run_trial(
            ctx.sf,
            s_tilde,
            ctx.params,
            bundle.omega,
            counters,
            l12=ctx.l12,
            base_lists=ctx.base_lists,
        )
        if e is not None:
            return e
    return None


@dataclass(frozen=True)
class BatchResult:
    result: Optional[F2Vector]
    counters: Counters
    wall_time: float


def amortized_batch(
    bundle: PrecomputationBundle, syndromes: Sequence[F2Vector]
) -> List[BatchResult]:
    """online_decode per syndrome against the one shared bundle, instrumented."""
    out = []
    for s in syndromes:
        counters = Counters()
        t0 = time.perf_counter()
        e = online_decode(bundle, s, counters)
        out.append(BatchResult(e, counters, time.perf_counter() - t0))
    return out


# ---------------------------------------------------------------------------
# Persistence: magic, version, header, then CRC-protected contexts.
# hx caches are not stored; they are recomputed on load.

def _pack_vec(bits: int, nbits: int) -> bytes:
    return bits.to_bytes((nbits + 7) // 8, "little")


def _params_tuple(p: IsdParams) -> Tuple[int, ...]:
    sizes = p.list_sizes if p.list_sizes is not None else (0, 0, 0, 0)
    flag = 1 if p.list_sizes is not None else 0
    return (p.p, p.p1, p.l1, p.l2, p.w1, p.w2, p.w11, flag, *sizes)


def _params_from_tuple(t: Sequence[int]) -> IsdParams:
    sizes = tuple(t[8:12]) if t[7] else None
    return IsdParams(p=t[0], p1=t[1], l1=t[2], l2=t[3], w1=t[4], w2=t[5], w11=t[6], list_sizes=sizes)


def _serialize_context(ctx: PrecomputedContext, n: int, k: int) -> bytes:
    r = n - k
    parts = [struct.pack("<I", ctx.index)]
    parts.append(struct.pack(f"<{n}I", *ctx.sf.perm.map))
    for row in ctx.sf.h_tilde.rows:
        parts.append(_pack_vec(row, k))
    for row in ctx.sf.q.rows:
        parts.append(_pack_vec(row, r))
    for lst in (*ctx.base_lists, ctx.l12):
        parts.append(struct.pack("<I", len(lst)))
        for entry in lst:
            parts.append(_pack_vec(entry.x.bits, k))
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes, offset: int = 0):
        self.data = data
        self.pos = offset

    def take(self, size: int) -> bytes:
        if self.pos + size > len(self.data):
            raise BundleFormatError(
                f"truncated file: wanted {size} bytes at offset {self.pos}"
            )
        out = self.data[self.pos:self.pos + size]
        self.pos += size
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]


def save_bundle(bundle: PrecomputationBundle, path) -> None:
    """Atomic write (temp + rename) of the versioned binary format."""
    header = struct.pack(
        "<BIIIIq12I",
        FORMAT_VERSION,
        bundle.n,
        bundle.k,
        bundle.omega,
        bundle.t_p,
        bundle.seed,
        *_params_tuple(bundle.params),
    )
    chunks = [MAGIC, header]
    for ctx in bundle.contexts:
        payload = _serialize_context(ctx, bundle.n, bundle.k)
        chunks.append(struct.pack("<II", len(payload), zlib.crc32(payload)))
        chunks.append(payload)
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as f:
        f.write(b"".join(chunks))
    os.replace(tmp, path)


def _deserialize_context(
    payload: bytes, n: int, k: int, params: IsdParams
) -> PrecomputedContext:
    r = n - k
    kbytes = (k + 7) // 8
    rd = _Reader(payload)
    index = rd.u32()
    perm = Permutation(struct.unpack(f"<{n}I", rd.take(4 * n)))
    h_rows = tuple(int.from_bytes(rd.take(kbytes), "little") for _ in range(r))
    rbytes = (r + 7) // 8
    q_rows = tuple(int.from_bytes(rd.take(rbytes), "little") for _ in range(r))
    h_tilde = F2Matrix(h_rows, r, k)
    sf = SystematicForm(h_tilde, F2Matrix(q_rows, r, r), perm, params.l1, params.l2)
    lists: List[List[ListEntry]] = []
    for _ in range(5):
        count = rd.u32()
        entries = []
        for _ in range(count):
            x = F2Vector(int.from_bytes(rd.take(kbytes), "little"), k)
            entries.append(ListEntry(x, mat_vec_mul(h_tilde, x)))
        lists.append(entries)
    if rd.pos != len(payload):
        raise BundleFormatError("trailing bytes in context payload")
    return PrecomputedContext(sf, (lists[0], lists[1], lists[2], lists[3]), lists[4], params, index)


def load_bundle(path) -> PrecomputationBundle:
    with open(path, "rb") as f:
        data = f.read()
    rd = _Reader(data)
    if rd.take(len(MAGIC)) != MAGIC:
        raise BundleFormatError("bad magic; not a bundle file")
    header_size = struct.calcsize("<BIIIIq12I")
    fields = struct.unpack("<BIIIIq12I", rd.take(header_size))
    version, n, k, omega, t_p, seed = fields[:6]
    if version != FORMAT_VERSION:
        raise BundleFormatError(f"unsupported format version {version}")
    params = _params_from_tuple(fields[6:])
    contexts = []
    for _ in range(t_p):
        size = rd.u32()
        crc = rd.u32()
        payload = rd.take(size)
        if zlib.crc32(payload) != crc:
            raise BundleFormatError("context checksum mismatch")
        contexts.append(_deserialize_context(payload, n, k, params))
    if rd.pos != len(data):
        raise BundleFormatError("trailing bytes after last context")
    return PrecomputationBundle(tuple(contexts), n, k, omega, params, seed)
