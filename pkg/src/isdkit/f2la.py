"""Bit-packed linear algebra over GF(2).

Vectors and matrices are stored as Python ints used as bitsets, little-endian:
bit i of the packed int is coordinate i. Bits above the declared length are
always zero, so equality and hashing are structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple


class DimensionError(ValueError):
    """Operands have incompatible dimensions."""


class SingularBlockError(Exception):
    """The right (n-k)x(n-k) block is singular for this permutation.

    Recoverable: the caller resamples a fresh permutation.
    """


def _mask(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True)
class F2Vector:
    """A length-`n` vector over GF(2), packed into an int."""

    bits: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DimensionError(f"negative length {self.n}")
        if self.bits >> self.n:
            raise DimensionError(f"bits set beyond length {self.n}")

    @classmethod
    def zero(cls, n: int) -> "F2Vector":
        return cls(0, n)

    @classmethod
    def from_bits(cls, seq: Sequence[int]) -> "F2Vector":
        bits = 0
        for i, b in enumerate(seq):
            if b & 1:
                bits |= 1 << i
        return cls(bits, len(seq))

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __xor__(self, other: "F2Vector") -> "F2Vector":
        if self.n != other.n:
            raise DimensionError(f"xor of lengths {self.n} and {other.n}")
        return F2Vector(self.bits ^ other.bits, self.n)

    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> List[int]:
        bits, out = self.bits, []
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return out

    def slice(self, start: int, length: int) -> "F2Vector":
        if start < 0 or length < 0 or start + length > self.n:
            raise DimensionError(f"window [{start},{start + length}) outside length {self.n}")
        return F2Vector((self.bits >> start) & _mask(length), length)

    def concat(self, other: "F2Vector") -> "F2Vector":
        return F2Vector(self.bits | (other.bits << self.n), self.n + other.n)

    def to_bits(self) -> List[int]:
        return [(self.bits >> i) & 1 for i in range(self.n)]

    def __str__(self) -> str:
        return "".join(str(b) for b in self.to_bits())


def windowed_weight(v: F2Vector, start: int, length: int) -> int:
    """Hamming weight of v restricted to coordinates [start, start+length)."""
    if start < 0 or length < 0 or start + length > v.n:
        raise DimensionError(f"window [{start},{start + length}) outside length {v.n}")
    return ((v.bits >> start) & _mask(length)).bit_count()


@dataclass(frozen=True)
class F2Matrix:
    """An nrows x ncols matrix over GF(2), rows packed as ints."""

    rows: Tuple[int, ...]
    nrows: int
    ncols: int

    def __post_init__(self) -> None:
        if len(self.rows) != self.nrows:
            raise DimensionError("row count mismatch")
        m = _mask(self.ncols)
        for r in self.rows:
            if r & ~m:
                raise DimensionError("row has bits beyond ncols")

    @classmethod
    def from_rows(cls, rows: Sequence[int], ncols: int) -> "F2Matrix":
        return cls(tuple(rows), len(rows), ncols)

    @classmethod
    def from_bit_rows(cls, rows: Sequence[Sequence[int]]) -> "F2Matrix":
        ncols = len(rows[0]) if rows else 0
        packed = []
        for row in rows:
            if len(row) != ncols:
                raise DimensionError("ragged rows")
            packed.append(F2Vector.from_bits(row).bits)
        return cls(tuple(packed), len(packed), ncols)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(tuple(1 << i for i in range(n)), n, n)

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "F2Matrix":
        return cls((0,) * nrows, nrows, ncols)

    def row(self, i: int) -> F2Vector:
        return F2Vector(self.rows[i], self.ncols)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def column(self, j: int) -> F2Vector:
        bits = 0
        for i, r in enumerate(self.rows):
            bits |= ((r >> j) & 1) << i
        return F2Vector(bits, self.nrows)

    def columns(self) -> List[F2Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "F2Matrix":
        return F2Matrix(tuple(c.bits for c in self.columns()), self.ncols, self.nrows)

    def mat_mul(self, other: "F2Matrix") -> "F2Matrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"{self.ncols} cols vs {other.nrows} rows")
        out = []
        for r in self.rows:
            acc = 0
            rr = r
            while rr:
                low = rr & -rr
                acc ^= other.rows[low.bit_length() - 1]
                rr ^= low
            out.append(acc)
        return F2Matrix(tuple(out), self.nrows, other.ncols)

    def hstack(self, other: "F2Matrix") -> "F2Matrix":
        if self.nrows != other.nrows:
            raise DimensionError("hstack row mismatch")
        rows = tuple(a | (b << self.ncols) for a, b in zip(self.rows, other.rows))
        return F2Matrix(rows, self.nrows, self.ncols + other.ncols)

    def submatrix_rows(self, start: int, count: int) -> "F2Matrix":
        return F2Matrix(self.rows[start:start + count], count, self.ncols)


def mat_vec_mul(m: F2Matrix, v: F2Vector) -> F2Vector:
    """m @ v over GF(2): result[i] = parity(row_i AND v)."""
    if v.n != m.ncols:
        raise DimensionError(f"matrix has {m.ncols} cols, vector length {v.n}")
    bits = 0
    for i, r in enumerate(m.rows):
        bits |= ((r & v.bits).bit_count() & 1) << i
    return F2Vector(bits, m.nrows)


@dataclass(frozen=True)
class Permutation:
    """A bijection on [0, n). ``map[i] = j`` sends coordinate i to position j."""

    map: Tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.map)
        if sorted(self.map) != list(range(n)):
            raise ValueError("not a bijection on [0, n)")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def random(cls, n: int, rng) -> "Permutation":
        idx = list(range(n))
        rng.shuffle(idx)
        return cls(tuple(idx))

    @property
    def n(self) -> int:
        return len(self.map)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.map):
            inv[j] = i
        return Permutation(tuple(inv))

    def apply(self, v: F2Vector) -> F2Vector:
        """Permuted vector u with u[map[i]] = v[i]."""
        if v.n != self.n:
            raise DimensionError(f"permutation on {self.n}, vector length {v.n}")
        bits = 0
        vb = v.bits
        while vb:
            low = vb & -vb
            bits |= 1 << self.map[low.bit_length() - 1]
            vb ^= low
        return F2Vector(bits, self.n)

    def permute_columns(self, m: F2Matrix) -> F2Matrix:
        """Matrix whose column map[j] is m's column j (i.e. m @ P)."""
        if m.ncols != self.n:
            raise DimensionError("column count mismatch")
        rows = tuple(self.apply(F2Vector(r, self.n)).bits for r in m.rows)
        return F2Matrix(rows, m.nrows, m.ncols)


@dataclass(frozen=True)
class SystematicForm:
    """Result of q @ (h @ perm) == [h_tilde | I_{n-k}] with row split (l1, l2, l3)."""

    h_tilde: F2Matrix
    q: F2Matrix
    perm: Permutation
    l1: int
    l2: int

    @property
    def r(self) -> int:
        return self.h_tilde.nrows  # n - k

    @property
    def k(self) -> int:
        return self.h_tilde.ncols

    @property
    def n(self) -> int:
        return self.r + self.k

    @property
    def l3(self) -> int:
        return self.r - self.l1 - self.l2

    def block(self, i: int) -> F2Matrix:
        """Row block i (1, 2 or 3) of h_tilde."""
        starts = {1: 0, 2: self.l1, 3: self.l1 + self.l2}
        lens = {1: self.l1, 2: self.l2, 3: self.l3}
        return self.h_tilde.submatrix_rows(starts[i], lens[i])

    def full_matrix(self) -> F2Matrix:
        """The [h_tilde | I_{n-k}] layout as one (n-k) x n matrix."""
        return self.h_tilde.hstack(F2Matrix.identity(self.r))


def gauss_systematic(h: F2Matrix, perm: Permutation, l1: int, l2: int) -> SystematicForm:
    """Reduce h @ perm to [h_tilde | I_{n-k}] form, tracking the transform q.

    Raises SingularBlockError when the last n-k permuted columns do not have
    full rank; the caller is expected to resample the permutation.
    """
    r = h.nrows
    n = h.ncols
    k = n - r
    if l1 < 0 or l2 < 0 or l1 + l2 > r:
        raise DimensionError(f"row split ({l1},{l2}) exceeds n-k={r}")
    if perm.n != n:
        raise DimensionError("permutation size mismatch")

    hp = perm.permute_columns(h)
    # Augmented rows [hp | I_r]; eliminate on columns k..n-1.
    aug = [hp.rows[i] | (1 << (n + i)) for i in range(r)]
    for piv in range(r):
        col = k + piv
        sel = None
        for i in range(piv, r):
            if (aug[i] >> col) & 1:
                sel = i
                break
        if sel is None:
            raise SingularBlockError(f"column {col} has no pivot")
        aug[piv], aug[sel] = aug[sel], aug[piv]
        for i in range(r):
            if i != piv and ((aug[i] >> col) & 1):
                aug[i] ^= aug[piv]

    mk = _mask(k)
    h_rows = tuple(a & mk for a in aug)
    q_rows = tuple(a >> n for a in aug)
    # The middle block must now be exactly the identity.
    for i, a in enumerate(aug):
        assert (a >> k) & _mask(r) == 1 << i
    return SystematicForm(
        h_tilde=F2Matrix(h_rows, r, k),
        q=F2Matrix(q_rows, r, r),
        perm=perm,
        l1=l1,
        l2=l2,
    )


def _revolving_door(n: int, k: int, forward: bool) -> Iterator[int]:
    """Yield all weight-k bitmasks on n coordinates in revolving-door order.

    Successive masks differ in exactly two bit positions, so H-column caches
    can be updated with one XOR per step.
    """
    if k == 0:
        yield 0
        return
    if k == n:
        yield _mask(n)
        return
    top = 1 << (n - 1)
    if forward:
        yield from _revolving_door(n - 1, k, True)
        for m in _revolving_door(n - 1, k - 1, False):
            yield m | top
    else:
        for m in _revolving_door(n - 1, k - 1, True):
            yield m | top
        yield from _revolving_door(n - 1, k, False)


def enumerate_weight_masks(n: int, w: int) -> Iterator[int]:
    """All C(n, w) weight-w bitmasks, minimal-change (revolving-door) order."""
    if w < 0 or w > n:
        raise DimensionError(f"weight {w} out of range for length {n}")
    return _revolving_door(n, w, True)


def enumerate_weight_vectors(n: int, w: int) -> Iterator[F2Vector]:
    """All C(n, w) weight-w vectors of length n, deterministic order."""
    for m in enumerate_weight_masks(n, w):
        yield F2Vector(m, n)
