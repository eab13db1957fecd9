"""Exhaustive ground-truth solver and run-statistics checks.

The solver stays deliberately dumb: enumerate every weight-omega vector and
test it against every syndrome. Trustworthiness over speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .f2la import F2Vector, enumerate_weight_masks, mat_vec_mul
from .instance import DecodingInstance

ENUMERATION_GUARD = 1 << 28


class GuardExceeded(ValueError):
    """The enumeration would exceed the candidate-test budget."""


@dataclass(frozen=True)
class SolutionSet:
    """All weight-omega solutions, overall and grouped by syndrome index."""

    solutions: Tuple[F2Vector, ...]
    per_syndrome: Dict[int, Tuple[F2Vector, ...]]

    def contains(self, e: F2Vector, index: int = 0) -> bool:
        return e in self.per_syndrome.get(index, ())


def brute_force_solve(inst: DecodingInstance) -> SolutionSet:
    """Enumerate B_omega^n against every syndrome of the instance."""
    total = math.comb(inst.n, inst.omega) * inst.n_syndromes
    if total > ENUMERATION_GUARD:
        raise GuardExceeded(
            f"C({inst.n},{inst.omega})*{inst.n_syndromes} = {total} exceeds "
            f"guard {ENUMERATION_GUARD}"
        )
    targets = {i: s.bits for i, s in enumerate(inst.syndromes)}
    per: Dict[int, List[F2Vector]] = {i: [] for i in targets}
    all_solutions: List[F2Vector] = []
    for mask in enumerate_weight_masks(inst.n, inst.omega):
        e = F2Vector(mask, inst.n)
        he = mat_vec_mul(inst.h, e).bits
        hit = False
        for i, t in targets.items():
            if he == t:
                per[i].append(e)
                hit = True
        if hit:
            all_solutions.append(e)
    return SolutionSet(
        tuple(all_solutions), {i: tuple(v) for i, v in per.items()}
    )


@dataclass(frozen=True)
class IterationStats:
    """Summary of permutation counts over repeated decoder runs."""

    runs: int
    mean: float
    variance: float
    predicted_mean: float
    z_score: float

    @property
    def within_3_sigma(self) -> bool:
        return abs(self.z_score) <= 3.0


def iteration_statistics(
    permutation_counts: Sequence[int], success_probability: float
) -> IterationStats:
    """Compare observed permutations-to-success against a geometric model.

    success_probability is the predicted per-permutation success chance; the
    geometric mean is 1/pi with variance (1-pi)/pi^2.
    """
    m = len(permutation_counts)
    if m < 30:
        raise ValueError(f"need at least 30 runs, got {m}")
    if not 0 < success_probability <= 1:
        raise ValueError("success probability must be in (0, 1]")
    mean = sum(permutation_counts) / m
    variance = sum((c - mean) ** 2 for c in permutation_counts) / m
    pi = success_probability
    predicted_mean = 1.0 / pi
    predicted_var = (1.0 - pi) / (pi * pi)
    if predicted_var == 0.0:
        z = 0.0 if mean == predicted_mean else float("inf")
    else:
        z = (mean - predicted_mean) / math.sqrt(predicted_var / m)
    return IterationStats(m, mean, variance, predicted_mean, z)
