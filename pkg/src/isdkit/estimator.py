"""Closed-form bit-operation costs for the depth-2 tree decoder.

Everything is evaluated in log2 space via log-gamma, so parameter sets of
cryptographic size (n up to 2^20 and beyond) never overflow. The model
counts bit operations: Gaussian elimination costs (n-k)^2 * n and every
list operation inside a join is charged the length-n vector cost.

Cost of one permutation trial, success chance, and the preprocessing /
online split all come out of a single evaluation so the variants stay
consistent with each other (a Prange configuration is just p = l1 = l2 = 0
fed through the same formula).
"""

from __future__ import annotations

import math
import re
import shlex
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .isd_core import ConfigError, IsdParams

NEG_INF = float("-inf")
_LOG2E = math.log2(math.e)

VARIANTS = ("prange", "dumer", "bjmm")

# Grid ceilings for the parameter search. The p ceiling sits above every
# optimum seen on the NIST-scale schemes; l2 is capped because the l2-window
# collision term decays too fast for wider windows to ever win.
MAX_P = 40
MAX_L1 = 170
MAX_L2 = 400
MAX_W1 = 4
MAX_W2 = 16
MAX_W11 = 12


@dataclass(frozen=True)
class SchemeParams:
    """One (n, k, omega) row of a scheme's security table."""

    name: str
    n: int
    k: int
    omega: int
    security_category: int = 0
    target_kind: str = "message"
    source: str = ""
    rotations: int = 1
    rotation_gain: str = "none"

    def __post_init__(self) -> None:
        if not 0 < self.k < self.n:
            raise ConfigError(f"{self.name}: need 0 < k < n, got k={self.k} n={self.n}")
        if self.omega > self.n:
            raise ConfigError(f"{self.name}: omega={self.omega} exceeds n={self.n}")
        if self.target_kind not in ("message", "key"):
            raise ConfigError(f"{self.name}: bad kind {self.target_kind!r}")
        if self.rotation_gain not in ("none", "solutions", "syndromes"):
            raise ConfigError(
                f"{self.name}: bad rotation gain {self.rotation_gain!r}"
            )
        if self.rotations < 1:
            raise ConfigError(f"{self.name}: rotations must be positive")
        if (self.rotations > 1) != (self.rotation_gain != "none"):
            raise ConfigError(
                f"{self.name}: rot and rotgain must be given together"
            )


@dataclass(frozen=True)
class CostEstimate:
    """log2 costs of one parameter point, with the per-term breakdown."""

    log2_total: float
    log2_pre: float
    log2_online: float
    best_params: IsdParams
    log2_doom: Optional[float] = None
    breakdown: Dict[str, float] = field(default_factory=dict)


def log2_binomial(n: float, k: float) -> float:
    """log2 C(n, k); -inf outside the Pascal triangle."""
    if k < 0 or n < 0 or k > n:
        return NEG_INF
    return (
        math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    ) * _LOG2E


def log2_sum(*terms: float) -> float:
    """log2 of a sum given the summands' log2 values."""
    m = max(terms)
    if m == NEG_INF:
        return NEG_INF
    return m + math.log2(sum(2.0 ** (t - m) for t in terms))


def trial_success(eps: float, attempts: float) -> float:
    """1 - (1 - eps)^attempts without cancellation for small eps."""
    if not 0.0 <= eps <= 1.0:
        raise ConfigError(f"eps = {eps} outside [0, 1]")
    if attempts < 0:
        raise ConfigError("attempts must be nonnegative")
    if eps == 0.0 or attempts == 0.0:
        return 0.0
    if eps == 1.0:
        return 1.0
    return -math.expm1(attempts * math.log1p(-eps))


def log2_trial_success(lg_eps: float, lg_attempts: float) -> float:
    """log2(1 - (1 - 2^lg_eps)^(2^lg_attempts)), stable at any scale."""
    if lg_eps == NEG_INF or lg_attempts == NEG_INF:
        return NEG_INF
    if lg_eps >= 0.0:
        return 0.0
    if lg_eps > -900.0 and lg_attempts < 900.0:
        v = trial_success(2.0**lg_eps, 2.0**lg_attempts)
        if v > 0.0:
            return math.log2(v)
    x = lg_eps + lg_attempts
    if x >= 10.0:
        return 0.0
    if x <= -10.0:
        # 1 - (1-eps)^m = eps*m * (1 + O(eps*m + eps))
        return x
    return math.log2(-math.expm1(-(2.0**x)))


def representation_terms(k: int, p: int, p1: int) -> Tuple[float, float]:
    """log2 of (R, q): representation count of e' = e1 xor e2 with
    wt(e1) = wt(e2) = p1, and the chance both summands are balanced
    across the two half-blocks the base lists enumerate."""
    if p % 2 or p1 % 2:
        raise ConfigError(f"p = {p} and p1 = {p1} must be even")
    if p > 2 * p1:
        raise ConfigError(f"p = {p} exceeds 2*p1 = {2 * p1}; no representation")
    if p1 > k:
        raise ConfigError(f"p1 = {p1} exceeds k = {k}")
    lg_r = log2_binomial(p, p // 2) + log2_binomial(k - p, p1 - p // 2)
    if lg_r == NEG_INF:
        raise ConfigError(f"no representation for k={k} p={p} p1={p1}")
    lg_q = 2.0 * (2.0 * log2_binomial(k // 2, p1 // 2) - log2_binomial(k, p1))
    return lg_r, lg_q


def window_survival(l1: int, w1: int, w11: int) -> float:
    """log2 chance a representation meets the level-1 window condition.

    The two summands must each carry weight w11 on the l1-window with the
    solution's window weight w1 split evenly between them; the window
    values themselves behave as uniform l1-bit strings.
    """
    if w1 % 2:
        raise ConfigError(f"window weight w1 = {w1} must be even to split")
    if w1 > l1 or w11 > l1:
        raise ConfigError("window weight exceeds window length")
    lg = log2_binomial(w1, w1 // 2) + log2_binomial(l1 - w1, w11 - w1 // 2) - l1
    if lg == NEG_INF:
        raise ConfigError(
            f"window split infeasible: l1={l1} w1={w1} w11={w11}"
        )
    return lg


def nn_cost(list_size: float, window: int, weight: int) -> float:
    """log2 operations of the half-window approximate-match join:
    C(l/2, w/2) * 2L enumeration plus L^2 * C(l, w) / 2^l output."""
    if weight > window:
        raise ConfigError(f"join weight {weight} > window {window}")
    if list_size <= 0:
        raise ConfigError("list size must be positive")
    lg_l = math.log2(list_size)
    return _nn_cost_pair(lg_l, lg_l, window, weight)


def _nn_cost_pair(lg_a: float, lg_b: float, window: int, weight: int) -> float:
    enum = log2_binomial(window // 2, weight // 2) + log2_sum(lg_a, lg_b)
    out = lg_a + lg_b + log2_binomial(window, weight) - window
    return log2_sum(enum, out)


def log2_epsilon(n: int, k: int, omega: int, params: IsdParams) -> float:
    """log2 of the chance one weight-p candidate is the solution's
    information part with the prescribed window weights."""
    r = n - k
    w3 = omega - params.p - params.w1 - params.w2
    pieces = (
        log2_binomial(params.l1, params.w1),
        log2_binomial(params.l2, params.w2),
        log2_binomial(r - params.l1 - params.l2, w3),
    )
    if NEG_INF in pieces:
        raise ConfigError(
            f"infeasible weight split (l1={params.l1},w1={params.w1}) "
            f"(l2={params.l2},w2={params.w2}) (l3={r - params.l1 - params.l2},w3={w3})"
        )
    return sum(pieces) - log2_binomial(n, omega)


def per_candidate_probability(n: int, k: int, omega: int, params: IsdParams) -> float:
    """Linear-scale epsilon; underflows to 0.0 only beyond 2^-1074."""
    return 2.0 ** log2_epsilon(n, k, omega, params)


def _log2_coverage(k: int, params: IsdParams) -> float:
    """log2 distinct information-part candidates one trial can reach."""
    lg_total = log2_binomial(k, params.p)
    if params.list_sizes is not None:
        lg_sizes = sum(math.log2(max(1, s)) for s in params.list_sizes)
        return min(lg_total, lg_sizes)
    return lg_total


def success_probability(
    n: int, k: int, omega: int, params: IsdParams
) -> Tuple[float, float]:
    """(eps, P): per-candidate chance and expected permutations to success,
    1/P = 1 - (1 - eps)^(number of candidates covered)."""
    lg_eps = log2_epsilon(n, k, omega, params)
    lg_p = -log2_trial_success(lg_eps, _log2_coverage(k, params))
    return 2.0**lg_eps, 2.0**lg_p


def _evaluate(
    n: int, k: int, omega: int, params: IsdParams, n_instances: int = 1
) -> Dict[str, float]:
    """Every log2 term of the cost model at one parameter point.

    n_instances > 1 prices the one-out-of-many tree: the left lists grow by
    N^(1/4), the fourth shrinks by N^(3/4), and the right join runs once per
    syndrome against a shared hash of the third list.
    """
    p, p1, l1, l2 = params.p, params.p1, params.l1, params.l2
    w1, w2, w11 = params.w1, params.w2, params.w11
    r = n - k
    if l1 + l2 > r:
        raise ConfigError(f"l1+l2 = {l1 + l2} exceeds n-k = {r}")
    if p > min(k, omega):
        raise ConfigError(f"p = {p} exceeds min(k, omega)")
    if n_instances < 1:
        raise ConfigError("need at least one instance")
    lg_n = math.log2(n_instances)

    lg_tg = 2.0 * math.log2(r) + math.log2(n)
    lg_ops = math.log2(n)  # bit cost of touching one length-n list entry
    lg_eps = log2_epsilon(n, k, omega, params)
    lg_p = -log2_trial_success(lg_eps, lg_n + _log2_coverage(k, params))

    if p == 0:
        if w11 != 0 or w1 != 0:
            raise ConfigError("p = 0 forces w1 = w11 = 0")
        lg_r_, lg_q, lg_qwin = 0.0, 0.0, 0.0
        lg_base = 0.0
    else:
        lg_r_, lg_q = representation_terms(k, p, p1)
        lg_qwin = window_survival(l1, w1, w11)
        lg_base = log2_binomial(k // 2, p1 // 2)
        if lg_base == NEG_INF:
            raise ConfigError(f"p1/2 = {p1 // 2} exceeds half-block k/2 = {k // 2}")
    rep_pen = max(0.0, -(lg_r_ + lg_q + lg_qwin))

    lg_s1 = lg_base + lg_n / 4.0  # |L1| = |L2| = |L3|
    lg_s4 = max(0.0, lg_base - 3.0 * lg_n / 4.0)
    lg_t12 = _nn_cost_pair(lg_s1, lg_s1, l1, w11)
    lg_t34 = log2_sum(
        log2_binomial(l1 // 2, w11 // 2) + log2_sum(lg_s1, lg_n + lg_s4),
        lg_n + lg_s1 + lg_s4 + log2_binomial(l1, w11) - l1,
    )
    lg_l12 = 2.0 * lg_s1 + log2_binomial(l1, w11) - l1
    lg_l34 = lg_n + lg_s1 + lg_s4 + log2_binomial(l1, w11) - l1
    lg_t1234 = _nn_cost_pair(lg_l12, lg_l34, l2, w2)
    # Building the four base lists writes that many n-bit entries; the work
    # is syndrome-free so it sits with the offline share.
    lg_build = log2_sum(math.log2(3.0) + lg_s1, lg_s4)

    lg_total = lg_p + log2_sum(
        lg_tg,
        lg_build + lg_ops,
        rep_pen + log2_sum(lg_t12, lg_t34, lg_t1234) + lg_ops,
    )
    lg_online = lg_p + rep_pen + log2_sum(lg_t34, lg_t1234) + lg_ops
    lg_pre = lg_p + log2_sum(
        lg_tg, lg_build + lg_ops, rep_pen + lg_t12 + lg_ops
    )
    return {
        "total": lg_total,
        "pre": lg_pre,
        "online": lg_online,
        "t_gauss": lg_tg,
        "t_build": lg_build,
        "t12": lg_t12,
        "t34": lg_t34,
        "t1234": lg_t1234,
        "p": lg_p,
        "epsilon": lg_eps,
        "r": lg_r_,
        "q": lg_q,
        "q_window": lg_qwin,
        "rep_penalty": rep_pen,
        "base_list": lg_base,
        "l12_size": lg_l12,
        "l34_size": lg_l34,
        "list_op_bits": lg_ops,
    }


def estimate_total(scheme: SchemeParams, params: IsdParams) -> CostEstimate:
    """Full cost breakdown of one parameter point on one scheme row."""
    d = _evaluate(scheme.n, scheme.k, scheme.omega, params)
    return CostEstimate(
        log2_total=d["total"],
        log2_pre=d["pre"],
        log2_online=d["online"],
        best_params=params,
        breakdown=d,
    )


def estimate_split(
    scheme: SchemeParams, params: IsdParams, t_p: Optional[float] = None
) -> Tuple[float, float]:
    """(log2 T_pre, log2 T_online). t_p overrides the permutation count;
    by default the expected count from success_probability is used."""
    d = _evaluate(scheme.n, scheme.k, scheme.omega, params)
    lg_tp = d["p"] if t_p is None else math.log2(t_p)
    lg_pre = lg_tp + log2_sum(
        d["t_gauss"], d["rep_penalty"] + d["t12"] + d["list_op_bits"]
    )
    lg_online = (
        lg_tp
        + d["rep_penalty"]
        + log2_sum(d["t34"], d["t1234"])
        + d["list_op_bits"]
    )
    return lg_pre, lg_online


def estimate_doom(
    scheme: SchemeParams, params: IsdParams, n_instances: int
) -> Tuple[float, float]:
    """(log2 T_N, speedup): one-out-of-many cost and its gain over the
    single-instance cost at the same (p, p1, w11) point.

    For N > 1 the window lengths are re-balanced, because the grown lists
    move the collision-term optimum; the N = 1 cost is the plain total.
    """
    if n_instances < 1:
        raise ConfigError("need at least one instance")
    lg_t = _evaluate(scheme.n, scheme.k, scheme.omega, params)["total"]
    if n_instances == 1:
        return lg_t, 0.0
    # Past saturation (batch success probability ~1) extra syndromes only
    # bloat the lists, so surplus instances are left unused. The candidates
    # below the clamp smooth the knee where the success term flattens.
    lg_eps = log2_epsilon(scheme.n, scheme.k, scheme.omega, params)
    lg_sat = max(0.0, -(lg_eps + log2_binomial(scheme.k, params.p)))
    best = lg_t
    if lg_sat >= math.log2(n_instances):
        d, _ = _doom_window_opt(scheme, params, n_instances)
        best = min(best, d["total"])
    else:
        # Power-of-two candidates below the clamp keep the candidate sets
        # nested across different N, so the reported cost stays monotone.
        n_try = 2 ** int(min(lg_sat, math.log2(n_instances)))
        while n_try > 1:
            d, _ = _doom_window_opt(scheme, params, n_try)
            best = min(best, d["total"])
            n_try //= 2
    return best, lg_t - best


def _doom_window_opt(
    scheme: SchemeParams, params: IsdParams, n_instances: int
) -> Tuple[Dict[str, float], IsdParams]:
    """Re-balance (l1, l2) at fixed weights for the batched list sizes and
    return the winning breakdown together with its parameter point."""
    r = scheme.n - scheme.k
    best: Optional[Dict[str, float]] = None
    best_point = params
    l1_hi = min(r, max(params.l1 + 80, 120))
    for l1 in range(0, l1_hi + 1):
        l2_hi = min(r - l1, max(params.l2 + 120, 160))
        for l2 in range(0, l2_hi + 1):
            point = replace(params, l1=l1, l2=l2)
            try:
                d = _evaluate(
                    scheme.n, scheme.k, scheme.omega, point, n_instances
                )
            except ConfigError:
                continue
            if best is None or d["total"] < best["total"]:
                best = d
                best_point = point
    if best is None:
        raise ConfigError("no feasible window split for the DOOM evaluation")
    return best, best_point


def _p1_choices(p: int, variant: str) -> List[int]:
    if p == 0:
        return [0]
    lo = p // 2 + (p // 2) % 2  # smallest even p1 with 2*p1 >= p
    if variant == "dumer":
        return [lo]
    return [lo + 2 * i for i in range(7)]


def optimize_params(
    scheme: SchemeParams, variant: str = "bjmm", depth: int = 2
) -> CostEstimate:
    """Exhaustive integer grid search minimizing log2 T.

    variant restricts the family: prange pins p = l1 = l2 = 0, dumer pins
    w11 = 0 with disjoint splits, bjmm searches the full depth-2 space.
    depth=3 keeps the same total but re-apportions the online share: of the
    seven joins in a three-level tree four are syndrome-free, against one
    of three in the two-level tree.
    """
    if variant not in VARIANTS:
        raise ConfigError(f"unknown variant {variant!r}; pick from {VARIANTS}")
    if depth not in (2, 3):
        raise ConfigError("depth must be 2 or 3")
    import numpy as np
    from scipy.special import gammaln

    n, k, w = scheme.n, scheme.k, scheme.omega
    r = n - k

    # One gammaln table covers every binomial the grid touches; indexing it
    # is far cheaper than re-evaluating gammaln inside the hot loops.
    gl = gammaln(np.arange(n + 2, dtype=float))

    def lgc(nn, kk):
        nn = np.asarray(nn, dtype=np.int64)
        kk = np.asarray(kk, dtype=np.int64)
        valid = (kk >= 0) & (kk <= nn) & (nn >= 0)
        nn_c = np.where(valid, nn, 0)
        kk_c = np.where(valid, kk, 0)
        out = (gl[nn_c + 1] - gl[kk_c + 1] - gl[nn_c - kk_c + 1]) * _LOG2E
        return np.where(valid, out, -np.inf)

    def lse2(a, b):
        m = np.maximum(a, b)
        with np.errstate(invalid="ignore"):
            out = m + np.log2(
                2.0 ** np.clip(a - m, -60, 0) + 2.0 ** np.clip(b - m, -60, 0)
            )
        return np.where(np.isneginf(m), -np.inf, out)

    lg_tg = 2.0 * math.log2(r) + math.log2(n)
    lg_ops = math.log2(n)
    lg_cnw = float(lgc(n, w))
    l2_grid = np.arange(0, min(r, MAX_L2) + 1)
    w2_grid = np.arange(0, MAX_W2 + 1, 2)
    L2, W2 = np.meshgrid(l2_grid, w2_grid, indexing="ij")
    lgc_l2w2 = lgc(L2, W2)
    lgc_l2w2_half = lgc(L2 // 2, W2 // 2)

    best_cost = math.inf
    best_point: Optional[IsdParams] = None
    p_hi = 0 if variant == "prange" else min(MAX_P, k, w)
    for p in range(0, p_hi + 1, 2):
        lg_ckp = float(lgc(k, p))
        for p1 in _p1_choices(p, variant):
            if p1 > k:
                continue
            lg_base = float(lgc(k // 2, p1 // 2))
            if math.isinf(lg_base):
                continue
            lg_r_ = float(lgc(p, p // 2) + lgc(k - p, p1 - p // 2))
            if math.isinf(lg_r_):
                continue
            lg_q = 2.0 * (2.0 * float(lgc(k // 2, p1 // 2)) - float(lgc(k, p1)))
            l1_hi = 0 if p == 0 else min(r, MAX_L1)
            for l1 in range(0, l1_hi + 1):
                w11_hi = 0 if variant == "dumer" or p == 0 else min(l1, MAX_W11)
                for w11 in range(0, w11_hi + 1, 2):
                    for w1 in range(0, min(l1, MAX_W1, 2 * w11) + 1, 2):
                        if p == 0:
                            lg_qwin = 0.0
                        else:
                            lg_qwin = (
                                float(lgc(w1, w1 // 2))
                                + float(lgc(l1 - w1, w11 - w1 // 2))
                                - l1
                            )
                        if math.isinf(lg_qwin):
                            continue
                        rep_pen = max(0.0, -(lg_r_ + lg_q + lg_qwin))
                        lg_t12 = float(
                            log2_sum(
                                log2_binomial(l1 // 2, w11 // 2) + 1.0 + lg_base,
                                2.0 * lg_base + log2_binomial(l1, w11) - l1,
                            )
                        )
                        lg_l12 = 2.0 * lg_base + log2_binomial(l1, w11) - l1
                        w3 = w - p - w1 - W2
                        lg_eps = (
                            float(lgc(l1, w1))
                            + lgc_l2w2
                            + lgc(r - l1 - L2, w3)
                            - lg_cnw
                        )
                        lg_p = -np.minimum(0.0, lg_eps + lg_ckp)
                        lg_t1234 = lse2(
                            lgc_l2w2_half + 1.0 + lg_l12,
                            2.0 * lg_l12 + lgc_l2w2 - L2,
                        )
                        lg_join = lse2(lg_t12 + 1.0, lg_t1234) + lg_ops
                        cost = lse2(
                            lse2(lg_p + lg_tg, lg_p + 2.0 + lg_base + lg_ops),
                            lg_p + rep_pen + lg_join,
                        )
                        cost = np.where(
                            np.isnan(cost) | np.isneginf(lg_eps), np.inf, cost
                        )
                        idx = np.unravel_index(np.argmin(cost), cost.shape)
                        if cost[idx] < best_cost - 1e-9:
                            best_cost = float(cost[idx])
                            best_point = IsdParams(
                                p=p,
                                p1=p1,
                                l1=l1,
                                l2=int(L2[idx]),
                                w1=w1,
                                w2=int(W2[idx]),
                                w11=w11,
                            )
    if best_point is None:
        raise ConfigError(
            f"no feasible parameter point for {scheme.name} / {variant}"
        )
    est = estimate_total(scheme, best_point)
    if depth == 3:
        return replace(est, log2_online=_depth3_online(est.breakdown))
    return est


def estimate_scheme(
    scheme: SchemeParams, variant: str = "bjmm", depth: int = 2
) -> CostEstimate:
    """Best-attack estimate for one scheme row, structure gains included.

    Plain rows are a straight grid search. Quasi-cyclic rows first optimize
    the single-target cost, then apply the rotation gain declared in the
    config: r interchangeable solutions divide the expected attempt count
    by r, while r rotated syndromes are priced as a one-out-of-many batch
    at the same weights with the windows re-balanced.
    """
    est = optimize_params(scheme, variant, depth)
    if scheme.rotation_gain == "none":
        return est
    if scheme.rotation_gain == "solutions":
        gain = math.log2(scheme.rotations)
        d = dict(est.breakdown)
        for key in ("total", "pre", "online", "p"):
            d[key] = d[key] - gain
        return CostEstimate(
            log2_total=est.log2_total - gain,
            log2_pre=est.log2_pre - gain,
            log2_online=est.log2_online - gain,
            best_params=est.best_params,
            breakdown=d,
        )
    d, point = _doom_window_opt(scheme, est.best_params, scheme.rotations)
    online = _depth3_online(d) if depth == 3 else d["online"]
    return CostEstimate(
        log2_total=d["total"],
        log2_pre=d["pre"],
        log2_online=online,
        best_params=point,
        log2_doom=d["total"],
        breakdown=d,
    )


def _depth3_online(d: Dict[str, float]) -> float:
    """Online share of a three-level tree at the same total join work.

    Two levels run three approximate-match searches, one precomputable;
    three levels run seven, four precomputable. The online cost is the
    3/7 slice of the same search block instead of the 2/3 slice.
    """
    block = log2_sum(d["t12"], d["t34"], d["t1234"])
    return (
        d["p"]
        + d["rep_penalty"]
        + block
        + math.log2(3.0 / 7.0)
        + d["list_op_bits"]
    )


_SCHEME_LINE = re.compile(r"^scheme\s+(\S+)\s+(.*)$")


def read_scheme_config(path: Path | str) -> List[SchemeParams]:
    """Parse `scheme <name> cat=<c> kind=<k> n=<n> k=<k> w=<w> src="..."` lines.

    Blank lines and #-comments are skipped; the listed fields are mandatory
    so a half-filled row fails loudly instead of estimating garbage. Rows
    for quasi-cyclic codes may add `rot=<r> rotgain=<solutions|syndromes>`:
    blockwise rotation by each of r offsets maps the target either to r
    valid solutions of the same instance (gain on the attempt count) or to
    r syndromes sharing one parity-check matrix (a one-out-of-many batch).
    """
    text = Path(path).read_text(encoding="utf-8")
    schemes: List[SchemeParams] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _SCHEME_LINE.match(line)
        if m is None:
            raise ConfigError(f"line {lineno}: expected a 'scheme ...' record")
        name, rest = m.group(1), m.group(2)
        fields: Dict[str, str] = {}
        try:
            for token in shlex.split(rest):
                key, _, value = token.partition("=")
                if not value:
                    raise ValueError(f"bad field {token!r}")
                fields[key] = value
            missing = {"cat", "kind", "n", "k", "w", "src"} - fields.keys()
            if missing:
                raise ValueError(
                    f"missing {sorted(missing)}; fill k and w from the "
                    "scheme's NIST round-4 submission and cite it in src"
                )
            scheme = SchemeParams(
                name=name,
                n=int(fields["n"]),
                k=int(fields["k"]),
                omega=int(fields["w"]),
                security_category=int(fields["cat"]),
                target_kind=fields["kind"],
                source=fields["src"],
                rotations=int(fields.get("rot", "1")),
                rotation_gain=fields.get("rotgain", "none"),
            )
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"line {lineno} ({name}): {exc}") from exc
        schemes.append(scheme)
    if not schemes:
        raise ConfigError(f"no scheme records in {path}")
    return schemes


def builtin_scheme_path() -> Path:
    """The scheme table shipped with the package."""
    return Path(__file__).resolve().parent / "data" / "schemes.cfg"


def load_builtin_schemes() -> List[SchemeParams]:
    return read_scheme_config(builtin_scheme_path())
