"""Decode one out of N syndromes over a shared code.

The level-1 right-hand list L34 is built once per permutation for every
syndrome in the set (entries tagged with their source index), so a single
tree pass can hit any of the N targets. List sizes follow the asymmetric
optimum |L1|=|L2|=|L3|=(N*C(k,p))^(1/4), |L4|=C(k,p)/|L1|^3.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

from .f2la import F2Vector, mat_vec_mul
from .instance import DecodingInstance
from .isd_core import (
    ConfigError,
    Counters,
    IsdParams,
    JoinSpec,
    build_base_lists,
    mitm_join,
    split_syndrome,
    systematize,
)


@dataclass(frozen=True)
class DoomParams:
    base: IsdParams
    n_instances: int
    size_l1: int
    size_l4: int

    def with_sizes(self) -> IsdParams:
        s1, s4 = self.size_l1, self.size_l4
        return replace(self.base, list_sizes=(s1, s1, s1, s4))


def doom_optimal_sizes(k: int, p: int, n_instances: int) -> Tuple[int, int]:
    """Integer list sizes nearest the asymmetric optimum, product restored.

    size_l4 is floored at 1; past that point the sqrt(N) gain saturates.
    """
    if p > k:
        raise ConfigError(f"p = {p} exceeds k = {k}")
    if n_instances < 1:
        raise ConfigError("need at least one instance")
    total = math.comb(k, p)
    size_l1 = max(1, round((n_instances * total) ** 0.25))
    size_l4 = max(1, round(total / size_l1**3))
    return size_l1, size_l4


def make_doom_params(base: IsdParams, k: int, n_instances: int) -> DoomParams:
    s1, s4 = doom_optimal_sizes(k, base.p, n_instances)
    return DoomParams(base, n_instances, s1, s4)


def doom_decode(
    inst: DecodingInstance,
    dparams: DoomParams,
    budget: int = 10000,
    seed: int = 0,
    counters: Optional[Counters] = None,
) -> Optional[Tuple[F2Vector, int]]:
    """Return (e, index) with h@e == syndromes[index] and wt(e) == omega,
    or None when the budget runs out."""
    params = dparams.with_sizes()
    params.validate(inst.n, inst.k, inst.omega)
    if counters is None:
        counters = Counters()
    rng = random.Random(seed)
    zero_r = F2Vector.zero(inst.h.nrows)
    for _ in range(budget):
        counters.permutations += 1
        sf = systematize(inst.h, params.l1, params.l2, rng, counters)
        base_lists = build_base_lists(sf, params, rng)
        for lst in base_lists:
            counters.note_list(len(lst))
        counters.l12_joins += 1
        l12 = mitm_join(
            base_lists[0],
            base_lists[1],
            JoinSpec(0, params.l1, zero_r, params.w11),
            counters=counters,
        )
        s_tildes = [mat_vec_mul(sf.q, s) for s in inst.syndromes]
        l34 = []
        for i, s_tilde in enumerate(s_tildes):
            counters.l34_joins += 1
            # The full transformed syndrome is folded into hx here, so the
            # final join's window condition and output are per-index correct.
            l34.extend(
                mitm_join(
                    base_lists[2],
                    base_lists[3],
                    JoinSpec(0, params.l1, s_tilde, params.w11),
                    tag=i,
                    counters=counters,
                )
            )
        counters.note_list(len(l34))
        counters.final_joins += 1
        final = mitm_join(
            l12,
            l34,
            JoinSpec(params.l1, params.l2, zero_r, params.w2),
            counters=counters,
        )
        for cand in final:
            counters.candidates_checked += 1
            if cand.x.weight() + cand.hx.weight() == inst.omega:
                e = sf.perm.inverse().apply(cand.x.concat(cand.hx))
                assert inst.check(e, cand.index)
                return e, cand.index
    return None


def doom_iteration_model(
    params: IsdParams, n: int, k: int, omega: int, n_instances: int,
    list_product: Optional[float] = None,
) -> float:
    """Closed-form predicted permutations-to-success P_N.

    1/P_N = 1 - (1 - eps)^(N * |L1||L2||L3||L4|), with the list product
    capped at C(k, p) since that bounds the distinct candidates one tree
    pass can cover.
    """
    from .estimator import per_candidate_probability, trial_success

    if n_instances < 1:
        raise ConfigError("need at least one instance")
    eps = per_candidate_probability(n, k, omega, params)
    total = math.comb(k, params.p)
    if list_product is None:
        if params.list_sizes is not None:
            list_product = math.prod(params.list_sizes)
        else:
            list_product = total
    coverage = min(float(list_product), float(total))
    inv_p = trial_success(eps, n_instances * coverage)
    return 1.0 / inv_p
