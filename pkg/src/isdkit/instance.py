"""Syndrome-decoding instances: planted generation and file round trips."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import List, Tuple

from .f2la import F2Matrix, F2Vector, mat_vec_mul


class InstanceError(ValueError):
    """Invalid instance dimensions or contents."""


class ParseError(ValueError):
    """Malformed instance file; message names the offending line."""


@dataclass(frozen=True)
class DecodingInstance:
    """Parity-check matrix, syndrome set and target weight.

    Single-instance problems carry exactly one syndrome; decode-one-out-of-many
    problems carry N >= 2 syndromes under the same matrix.
    """

    h: F2Matrix
    syndromes: Tuple[F2Vector, ...]
    omega: int

    def __post_init__(self) -> None:
        r = self.h.nrows
        if not self.syndromes:
            raise InstanceError("at least one syndrome required")
        for s in self.syndromes:
            if s.n != r:
                raise InstanceError(f"syndrome length {s.n} != n-k = {r}")
        if not 0 <= self.omega <= self.n:
            raise InstanceError(f"omega {self.omega} out of range")

    @property
    def n(self) -> int:
        return self.h.ncols

    @property
    def k(self) -> int:
        return self.h.ncols - self.h.nrows

    @property
    def n_syndromes(self) -> int:
        return len(self.syndromes)

    @property
    def syndrome(self) -> F2Vector:
        if len(self.syndromes) != 1:
            raise InstanceError("instance has multiple syndromes; pick one by index")
        return self.syndromes[0]

    def check(self, e: F2Vector, index: int = 0) -> bool:
        """True iff h @ e == syndromes[index] and wt(e) == omega."""
        return (
            e.n == self.n
            and e.weight() == self.omega
            and mat_vec_mul(self.h, e) == self.syndromes[index]
        )

    def digest(self) -> str:
        """Stable hex digest of (h, omega) for bundle/instance pairing."""
        import hashlib

        hsh = hashlib.sha256()
        hsh.update(f"{self.h.nrows},{self.h.ncols},{self.omega}:".encode())
        for r in self.h.rows:
            hsh.update(r.to_bytes((self.n + 7) // 8, "little"))
        return hsh.hexdigest()[:16]


@dataclass(frozen=True)
class PlantedSolution:
    """Known error vector for a generated instance, for test fixtures."""

    e: F2Vector
    index: int = 0


def _random_weight_vector(n: int, w: int, rng: random.Random) -> F2Vector:
    support = rng.sample(range(n), w)
    bits = 0
    for i in support:
        bits |= 1 << i
    return F2Vector(bits, n)


def generate_planted(
    n: int, k: int, omega: int, n_syndromes: int = 1, seed: int = 0
) -> Tuple[DecodingInstance, PlantedSolution]:
    """Uniform random parity-check matrix with every syndrome planted solvable.

    Syndrome 0 belongs to the returned solution; the remaining syndromes come
    from independent fresh weight-omega errors.
    """
    if not 0 < k < n:
        raise InstanceError(f"need 0 < k < n, got k={k}, n={n}")
    if not 0 <= omega <= n:
        raise InstanceError(f"omega {omega} out of range")
    if n_syndromes < 1:
        raise InstanceError("need at least one syndrome")
    rng = random.Random(seed)
    rows = tuple(rng.getrandbits(n) for _ in range(n - k))
    h = F2Matrix(rows, n - k, n)
    e0 = _random_weight_vector(n, omega, rng)
    syndromes = [mat_vec_mul(h, e0)]
    for _ in range(n_syndromes - 1):
        ei = _random_weight_vector(n, omega, rng)
        syndromes.append(mat_vec_mul(h, ei))
    inst = DecodingInstance(h, tuple(syndromes), omega)
    return inst, PlantedSolution(e0, 0)


def _hex_of(v: F2Vector) -> str:
    nbytes = (v.n + 7) // 8
    return v.bits.to_bytes(nbytes, "little").hex()


def _vector_from_hex(hx: str, n: int, lineno: int) -> F2Vector:
    nbytes = (n + 7) // 8
    try:
        raw = bytes.fromhex(hx)
    except ValueError:
        raise ParseError(f"line {lineno}: invalid hex payload")
    if len(raw) != nbytes:
        raise ParseError(
            f"line {lineno}: expected {nbytes} payload bytes for {n} bits, got {len(raw)}"
        )
    bits = int.from_bytes(raw, "little")
    if bits >> n:
        raise ParseError(f"line {lineno}: padding bits beyond length {n} are set")
    return F2Vector(bits, n)


def write_instance(inst: DecodingInstance, path) -> None:
    """Write the text format: SDP v1 header, hex H rows, hex syndromes."""
    lines = [
        f"SDP v1 n={inst.n} k={inst.k} w={inst.omega} N={inst.n_syndromes}"
    ]
    for i in range(inst.h.nrows):
        lines.append(f"H {i} {_hex_of(inst.h.row(i))}")
    for i, s in enumerate(inst.syndromes):
        lines.append(f"S {i} {_hex_of(s)}")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def read_instance(path) -> DecodingInstance:
    with open(path) as f:
        lines = f.read().splitlines()
    if not lines:
        raise ParseError("line 1: empty file")
    header = lines[0].split()
    if len(header) != 6 or header[0] != "SDP" or header[1] != "v1":
        raise ParseError("line 1: expected 'SDP v1 n=.. k=.. w=.. N=..'")
    vals = {}
    for tok in header[2:]:
        key, _, num = tok.partition("=")
        if key not in ("n", "k", "w", "N") or not num.isdigit():
            raise ParseError(f"line 1: bad header token {tok!r}")
        vals[key] = int(num)
    if set(vals) != {"n", "k", "w", "N"}:
        raise ParseError("line 1: missing header fields")
    n, k, w, nsyn = vals["n"], vals["k"], vals["w"], vals["N"]
    r = n - k
    h_rows: List[int] = [-1] * r
    syndromes: List[F2Vector] = [None] * nsyn  # type: ignore[list-item]
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] not in ("H", "S"):
            raise ParseError(f"line {lineno}: unknown line {line!r}")
        try:
            idx = int(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: bad index {parts[1]!r}")
        if parts[0] == "H":
            if not 0 <= idx < r:
                raise ParseError(f"line {lineno}: H row index {idx} out of range")
            h_rows[idx] = _vector_from_hex(parts[2], n, lineno).bits
        else:
            if not 0 <= idx < nsyn:
                raise ParseError(f"line {lineno}: syndrome index {idx} out of range")
            syndromes[idx] = _vector_from_hex(parts[2], r, lineno)
    missing = [i for i, row in enumerate(h_rows) if row < 0]
    if missing:
        raise ParseError(f"missing H row(s) {missing}")
    missing_s = [i for i, s in enumerate(syndromes) if s is None]
    if missing_s:
        raise ParseError(f"missing syndrome(s) {missing_s}")
    return DecodingInstance(F2Matrix(tuple(h_rows), r, n), tuple(syndromes), w)
