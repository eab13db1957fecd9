"""Depth-2 tree decoder for syndrome decoding, with Prange and Dumer-like
configurations as degenerate cases.

Each permutation trial reduces H to systematic form, builds four base lists
of cached (x, h_tilde @ x) pairs, and runs three approximate-match list joins
(weight w11 on the first l1 coordinates, then weight w2 on the next l2) before
the final full-weight check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from .f2la import (
    DimensionError,
    F2Matrix,
    F2Vector,
    Permutation,
    SingularBlockError,
    SystematicForm,
    enumerate_weight_masks,
    gauss_systematic,
    mat_vec_mul,
    windowed_weight,
    _mask,
)
from .instance import DecodingInstance

DEFAULT_LIST_CAP = 1 << 26
GAUSS_RESAMPLE_CAP = 1000


class ConfigError(ValueError):
    """Infeasible decoder parameters."""


@dataclass(frozen=True)
class IsdParams:
    """Search parameters of the depth-2 tree.

    p: weight of the solution part on the k information coordinates.
    p1: weight of a level-1 summand (base lists enumerate weight p1/2 halves).
    l1, l2: lengths of the first two windows of the redundancy part.
    w1, w2: solution weights allowed on those windows (w3 is implied).
    w11: window weight of the level-1 joins.
    list_sizes: optional per-list truncation; None means full enumeration.
    """

    p: int = 0
    p1: int = 0
    l1: int = 0
    l2: int = 0
    w1: int = 0
    w2: int = 0
    w11: int = 0
    list_sizes: Optional[Tuple[int, int, int, int]] = None

    def validate(self, n: int, k: int, omega: int) -> None:
        r = n - k
        if min(self.p, self.p1, self.l1, self.l2, self.w1, self.w2, self.w11) < 0:
            raise ConfigError("negative parameter")
        if self.l1 + self.l2 > r:
            raise ConfigError(f"l1+l2 = {self.l1 + self.l2} exceeds n-k = {r}")
        if self.p1 % 2:
            raise ConfigError("p1 must be even (base lists use weight p1/2 halves)")
        if self.p1 // 2 > k // 2:
            raise ConfigError("p1/2 exceeds half-block size")
        if self.p > min(k, omega):
            raise ConfigError(f"p = {self.p} exceeds min(k, omega)")
        if self.p > 2 * self.p1:
            raise ConfigError("p exceeds 2*p1; no representation exists")
        if self.w1 > self.l1 or self.w2 > self.l2 or self.w11 > self.l1:
            raise ConfigError("window weight exceeds window length")
        l3 = r - self.l1 - self.l2
        w3 = omega - self.p - self.w1 - self.w2
        if w3 < 0 or w3 > l3:
            raise ConfigError(f"implied third-window weight {w3} infeasible (l3={l3})")

    def omega3(self, omega: int) -> int:
        return omega - self.p - self.w1 - self.w2


PRANGE_PARAMS = IsdParams()


@dataclass(frozen=True)
class ListEntry:
    """Candidate k-part x with its cached product hx = h_tilde @ x.

    After a join folds a target in, hx additionally carries that target.
    index tags the source syndrome for decode-one-out-of-many lists.
    """

    x: F2Vector
    hx: F2Vector
    index: int = 0


@dataclass(frozen=True)
class JoinSpec:
    """Approximate-match condition: the XOR of the two cached vectors and the
    target must attain exactly `weight` on window [start, start+length)."""

    start: int
    length: int
    target: F2Vector  # full redundancy length; XORed into every output hx
    weight: int

    def __post_init__(self) -> None:
        if self.weight > self.length:
            raise ConfigError(f"join weight {self.weight} > window length {self.length}")
        if self.start < 0 or self.start + self.length > self.target.n:
            raise DimensionError("join window outside redundancy part")

    @classmethod
    def from_window_target(
        cls, start: int, length: int, window_target: F2Vector, weight: int, r: int
    ) -> "JoinSpec":
        """Zero-extend a window-length target to the full redundancy length."""
        if window_target.n != length:
            raise DimensionError("window target length mismatch")
        return cls(start, length, F2Vector(window_target.bits << start, r), weight)


@dataclass
class Counters:
    """Instrumentation shared by the decoders and the preprocessing split."""

    permutations: int = 0
    gauss_failures: int = 0
    gauss_eliminations: int = 0
    l12_joins: int = 0
    l34_joins: int = 0
    final_joins: int = 0
    half_window_enums: int = 0
    candidates_checked: int = 0
    peak_list_size: int = 0

    def note_list(self, size: int) -> None:
        self.peak_list_size = max(self.peak_list_size, size)


def build_base_lists(
    sf: SystematicForm,
    params: IsdParams,
    rng: Optional[random.Random] = None,
    list_cap: int = DEFAULT_LIST_CAP,
) -> Tuple[List[ListEntry], List[ListEntry], List[ListEntry], List[ListEntry]]:
    """Four lists of weight-(p1/2) half-support candidates with cached hx.

    L1 and L3 live on the first ceil(k/2) coordinates, L2 and L4 on the rest.
    When params.list_sizes truncates a list, a seeded random subset of the full
    enumeration is kept (rng required in that case).
    """
    k = sf.k
    half = params.p1 // 2
    k_first = (k + 1) // 2
    k_second = k - k_first
    if half > k_second and half > 0:
        raise ConfigError("p1/2 exceeds second-half block size")
    cols = [c.bits for c in sf.h_tilde.columns()]

    def enumerate_block(offset: int, width: int) -> List[ListEntry]:
        import math

        if math.comb(width, half) > list_cap:
            raise ConfigError(
                f"base list size C({width},{half}) exceeds cap {list_cap}"
            )
        entries = []
        prev = 0
        hx = 0
        for m in enumerate_weight_masks(width, half):
            diff = (m ^ prev) << offset
            while diff:
                low = diff & -diff
                hx ^= cols[low.bit_length() - 1]
                diff ^= low
            prev = m
            entries.append(ListEntry(F2Vector(m << offset, k), F2Vector(hx, sf.r)))
        return entries

    first = enumerate_block(0, k_first)
    second = enumerate_block(k_first, k_second)
    lists = [first, list(second), list(first), list(second)]
    if params.list_sizes is not None:
        if rng is None:
            raise ConfigError("truncated lists need an rng")
        out = []
        for lst, size in zip(lists, params.list_sizes):
            if size >= len(lst):
                out.append(lst)
            else:
                out.append(rng.sample(lst, size))
        lists = out
    return lists[0], lists[1], lists[2], lists[3]


def quadratic_join(
    a_list: List[ListEntry], b_list: List[ListEntry], spec: JoinSpec, tag: int = 0
) -> List[ListEntry]:
    """Brute-force all-pairs reference join; the oracle side of the dual route."""
    seen: Dict[Tuple[int, int], ListEntry] = {}
    for a in a_list:
        for b in b_list:
            hx = a.hx.bits ^ b.hx.bits ^ spec.target.bits
            if ((hx >> spec.start) & _mask(spec.length)).bit_count() == spec.weight:
                idx = a.index | b.index | tag
                key = (a.x.bits ^ b.x.bits, idx)
                if key not in seen:
                    seen[key] = ListEntry(
                        F2Vector(key[0], a.x.n), F2Vector(hx, a.hx.n), idx
                    )
    return list(seen.values())


def mitm_join(
    a_list: List[ListEntry],
    b_list: List[ListEntry],
    spec: JoinSpec,
    tag: int = 0,
    counters: Optional[Counters] = None,
    list_cap: int = DEFAULT_LIST_CAP,
) -> List[ListEntry]:
    """Meet-in-the-middle realization of the approximate-match join.

    B is bucketed on the first half-window; for each A entry every feasible
    first-half weight pattern is enumerated, and bucket hits are verified on
    the full window. Output equals the quadratic all-pairs filter as a set;
    entries with identical (x, index) collapse.
    """
    if not a_list or not b_list:
        return []
    len_a = spec.length // 2
    len_b = spec.length - len_a
    mask_a = _mask(len_a)
    mask_full = _mask(spec.length)
    start = spec.start
    tbits = spec.target.bits

    buckets: Dict[int, List[ListEntry]] = {}
    for b in b_list:
        buckets.setdefault((b.hx.bits >> start) & mask_a, []).append(b)

    out: Dict[Tuple[int, int], ListEntry] = {}
    w_lo = max(0, spec.weight - len_b)
    w_hi = min(spec.weight, len_a)
    enums = 0
    for a in a_list:
        base = (a.hx.bits ^ tbits) >> start
        key_base = base & mask_a
        for w_first in range(w_lo, w_hi + 1):
            for pat in enumerate_weight_masks(len_a, w_first):
                enums += 1
                bucket = buckets.get(key_base ^ pat)
                if not bucket:
                    continue
                for b in bucket:
                    hx = a.hx.bits ^ b.hx.bits ^ tbits
                    if ((hx >> start) & mask_full).bit_count() != spec.weight:
                        continue
                    idx = a.index | b.index | tag
                    key = (a.x.bits ^ b.x.bits, idx)
                    if key not in out:
                        out[key] = ListEntry(
                            F2Vector(key[0], a.x.n), F2Vector(hx, a.hx.n), idx
                        )
                        if len(out) > list_cap:
                            raise ConfigError(f"join output exceeds cap {list_cap}")
    if counters is not None:
        counters.half_window_enums += enums
        counters.note_list(len(out))
    return list(out.values())


def split_syndrome(s_tilde: F2Vector, l1: int, l2: int) -> Tuple[F2Vector, F2Vector, F2Vector]:
    l3 = s_tilde.n - l1 - l2
    return s_tilde.slice(0, l1), s_tilde.slice(l1, l2), s_tilde.slice(l1 + l2, l3)


def _finish(sf: SystematicForm, x: F2Vector, e2: F2Vector) -> F2Vector:
    """Map the permuted candidate (x || e2) back through the permutation."""
    e_tilde = x.concat(e2)
    return sf.perm.inverse().apply(e_tilde)


def run_trial(
    sf: SystematicForm,
    s_tilde: F2Vector,
    params: IsdParams,
    omega: int,
    counters: Counters,
    rng: Optional[random.Random] = None,
    list_cap: int = DEFAULT_LIST_CAP,
    l12: Optional[List[ListEntry]] = None,
    base_lists=None,
) -> Optional[F2Vector]:
    """One permutation trial: tree joins plus final weight check.

    Passing precomputed l12/base_lists skips their construction (the
    preprocessing module's online phase relies on this).
    """
    r = sf.r
    if base_lists is None:
        base_lists = build_base_lists(sf, params, rng, list_cap)
    l1_list, l2_list, l3_list, l4_list = base_lists
    for lst in base_lists:
        counters.note_list(len(lst))
    zero_r = F2Vector.zero(r)

    if l12 is None:
        counters.l12_joins += 1
        l12 = mitm_join(
            l1_list,
            l2_list,
            JoinSpec(0, params.l1, zero_r, params.w11),
            counters=counters,
            list_cap=list_cap,
        )
    counters.l34_joins += 1
    l34 = mitm_join(
        l3_list,
        l4_list,
        JoinSpec(0, params.l1, s_tilde, params.w11),
        counters=counters,
        list_cap=list_cap,
    )
    counters.final_joins += 1
    final = mitm_join(
        l12,
        l34,
        JoinSpec(params.l1, params.l2, zero_r, params.w2),
        counters=counters,
        list_cap=list_cap,
    )
    for cand in final:
        counters.candidates_checked += 1
        # cand.hx == h_tilde @ x + s_tilde, i.e. the redundancy part of the error
        if cand.x.weight() + cand.hx.weight() == omega:
            return _finish(sf, cand.x, cand.hx)
    return None


def systematize(
    h: F2Matrix, l1: int, l2: int, rng: random.Random, counters: Counters
) -> SystematicForm:
    """Sample permutations until Gaussian elimination succeeds."""
    for _ in range(GAUSS_RESAMPLE_CAP):
        perm = Permutation.random(h.ncols, rng)
        try:
            counters.gauss_eliminations += 1
            return gauss_systematic(h, perm, l1, l2)
        except SingularBlockError:
            counters.gauss_failures += 1
    raise RuntimeError(f"no systematizable permutation in {GAUSS_RESAMPLE_CAP} tries")


def isd_decode(
    inst: DecodingInstance,
    params: IsdParams,
    budget: int = 10000,
    seed: int = 0,
    counters: Optional[Counters] = None,
    list_cap: int = DEFAULT_LIST_CAP,
) -> Optional[F2Vector]:
    """Decode a single-syndrome instance; returns e with h@e == s, wt(e) == omega,
    or None when the permutation budget runs out."""
    if inst.n_syndromes != 1:
        raise ConfigError("isd_decode expects a single-syndrome instance")
    params.validate(inst.n, inst.k, inst.omega)
    if counters is None:
        counters = Counters()
    s = inst.syndrome
    rng = random.Random(seed)
    for _ in range(budget):
        counters.permutations += 1
        sf = systematize(inst.h, params.l1, params.l2, rng, counters)
        s_tilde = mat_vec_mul(sf.q, s)
        e = run_trial(sf, s_tilde, params, inst.omega, counters, rng, list_cap)
        if e is not None:
            assert inst.check(e)
            return e
    return None


def prange_decode(
    inst: DecodingInstance,
    budget: int = 10000,
    seed: int = 0,
    counters: Optional[Counters] = None,
) -> Optional[F2Vector]:
    """Plain information-set decoding: p = 0, no windows, no lists."""
    return isd_decode(inst, PRANGE_PARAMS, budget, seed, counters)


def auto_params(n: int, k: int, omega: int, variant: str = "bjmm") -> IsdParams:
    """Small feasible parameters for desk-scale instances.

    prange: empty configuration. dumer: exact match (w11 = 0) on a short l1
    window. bjmm: adds a nonzero join weight when the window allows it.
    """
    r = n - k
    if variant == "prange":
        return PRANGE_PARAMS
    p = min(2, omega - (omega % 2), 2 * (k // 2))
    if omega >= 4 and k >= 8:
        p = 4
    p1 = p // 2 + (p // 2) % 2
    l1 = min(4, r)
    l2 = min(4, r - l1)
    params = IsdParams(p=p, p1=p1, l1=l1, l2=l2, w1=0, w2=0, w11=0)
    if variant == "bjmm" and l1 >= 2:
        params = replace(params, w11=2 if p >= 4 else 0)
    try:
        params.validate(n, k, omega)
    except ConfigError:
        params = IsdParams(p=0, p1=0, l1=0, l2=0)
        params.validate(n, k, omega)
    return params
