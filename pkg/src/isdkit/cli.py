"""Command-line front end for the decoding toolkit.

Subcommands: gen, decode, doom, precompute, online, estimate, verify,
oracle. Every randomized subcommand takes an explicit --seed, so any report
can be reproduced by re-running the echoed command line. Exit codes follow
a fixed discipline: 0 for a solution or a passing check, 2 for an honest
not-found, 1 for any error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time
from pathlib import Path
from typing import List, Optional, Sequence

from .doom import doom_decode, make_doom_params
from .estimator import (
    SchemeParams,
    builtin_scheme_path,
    estimate_doom,
    estimate_scheme,
    read_scheme_config,
)
from .f2la import F2Vector
from .instance import (
    DecodingInstance,
    generate_planted,
    read_instance,
    write_instance,
)
from .isd_core import (
    ConfigError,
    Counters,
    IsdParams,
    auto_params,
    isd_decode,
)
from .oracle import brute_force_solve
from .preprocessing import (
    amortized_batch,
    default_t_p,
    load_bundle,
    online_decode,
    precompute,
    save_bundle,
)

EXIT_SOLVED = 0
EXIT_ERROR = 1
EXIT_NOT_FOUND = 2

VARIANT_CHOICES = ("prange", "dumer", "bjmm")


def _hex_of(v: F2Vector) -> str:
    return v.bits.to_bytes((v.n + 7) // 8, "little").hex()


def _vector_from_hex(hx: str, n: int) -> F2Vector:
    raw = bytes.fromhex(hx)
    if len(raw) != (n + 7) // 8:
        raise ConfigError(
            f"solution hex encodes {len(raw)} bytes, expected {(n + 7) // 8}"
        )
    bits = int.from_bytes(raw, "little")
    if bits >> n:
        raise ConfigError(f"padding bits beyond length {n} are set")
    return F2Vector(bits, n)


@dataclasses.dataclass(frozen=True)
class RunReport:
    """Reproducible run summary: echoing the command and seed pins the rest."""

    command: str
    seed: int
    digest: str
    outcome: str
    counters: Counters
    wall_time: float

    def human_table(self) -> str:
        rows = [
            ("command", self.command),
            ("seed", str(self.seed)),
            ("instance", self.digest),
            ("outcome", self.outcome),
        ]
        for f in dataclasses.fields(Counters):
            rows.append((f.name, str(getattr(self.counters, f.name))))
        width = max(len(name) for name, _ in rows)
        return "\n".join(f"{name:<{width}}  {value}" for name, value in rows)

    def record(self, kind: str) -> str:
        fields = [f"record={kind}", f"seed={self.seed}", f"digest={self.digest}",
                  f"outcome={self.outcome}"]
        for f in dataclasses.fields(Counters):
            fields.append(f"{f.name}={getattr(self.counters, f.name)}")
        return " ".join(fields)


def _emit(report: RunReport, kind: str, emit_path: Optional[str]) -> None:
    # Wall time goes to stderr only, keeping stdout byte-stable across runs.
    print(report.human_table())
    print(f"wall_time {report.wall_time:.3f}s", file=sys.stderr)
    if emit_path:
        with open(emit_path, "a") as f:
            f.write(report.record(kind) + "\n")


def _echo(args: argparse.Namespace) -> str:
    return "isdkit " + " ".join(args.raw_argv)


def _parse_params(text: str) -> IsdParams:
    """Parse 'p=4,p1=2,l1=4,l2=4,w1=0,w2=0,w11=0' (missing keys default 0)."""
    allowed = {"p", "p1", "l1", "l2", "w1", "w2", "w11"}
    values = {}
    for item in text.split(","):
        key, sep, val = item.partition("=")
        key = key.strip()
        if not sep or key not in allowed:
            raise ConfigError(
                f"bad parameter token {item!r}; use key=value with keys "
                f"{sorted(allowed)}"
            )
        values[key] = int(val)
    return IsdParams(**values)


def _resolve_params(
    args: argparse.Namespace, inst: DecodingInstance
) -> IsdParams:
    if args.auto:
        return auto_params(inst.n, inst.k, inst.omega, args.variant)
    if args.params is None:
        raise ConfigError("give --params key=value,... or --auto")
    params = _parse_params(args.params)
    params.validate(inst.n, inst.k, inst.omega)
    return params


def cmd_gen(args: argparse.Namespace) -> int:
    inst, sol = generate_planted(
        args.n, args.k, args.w, n_syndromes=args.N, seed=args.seed
    )
    inst_path = Path(f"{args.out}.sdp")
    sol_path = Path(f"{args.out}.sol")
    write_instance(inst, inst_path)
    # The planted solution lives in a separate file so decoding tests can
    # read the instance without being able to peek at the answer.
    sol_path.write_text(
        f"SOL v1 n={inst.n} index={sol.index} e={_hex_of(sol.e)}\n"
    )
    print(f"instance {inst_path} digest={inst.digest()}")
    print(f"solution {sol_path}")
    return EXIT_SOLVED


def _decode_single(
    inst: DecodingInstance, params: IsdParams, budget: int, seed: int,
    threads: int,
) -> tuple[Optional[F2Vector], Counters]:
    if threads <= 1:
        counters = Counters()
        e = isd_decode(inst, params, budget=budget, seed=seed, counters=counters)
        return e, counters
    # Each worker decodes an independent permutation stream; the first hit
    # wins. Totals are summed, so only the winning stream is seed-dependent.
    from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait

    share = max(1, budget // threads)
    counter_set = [Counters() for _ in range(threads)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {
            pool.submit(
                isd_decode, inst, params, share, seed + i, counter_set[i]
            )
            for i in range(threads)
        }
        result: Optional[F2Vector] = None
        while futures:
            done, futures = wait(futures, return_when=FIRST_COMPLETED)
            for fut in done:
                if result is None and fut.result() is not None:
                    result = fut.result()
    total = Counters()
    for c in counter_set:
        for f in dataclasses.fields(Counters):
            setattr(total, f.name, getattr(total, f.name) + getattr(c, f.name))
    total.peak_list_size = max(c.peak_list_size for c in counter_set)
    return result, total


def cmd_decode(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    params = _resolve_params(args, inst)
    t0 = time.perf_counter()
    e, counters = _decode_single(
        inst, params, args.budget, args.seed, args.threads
    )
    wall = time.perf_counter() - t0
    outcome = f"solution={_hex_of(e)}" if e is not None else "not-found"
    report = RunReport(
        _echo(args), args.seed, inst.digest(), outcome, counters, wall
    )
    _emit(report, "decode", args.emit_records)
    return EXIT_SOLVED if e is not None else EXIT_NOT_FOUND


def cmd_doom(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    params = _resolve_params(args, inst)
    dparams = make_doom_params(params, inst.k, inst.n_syndromes)
    counters = Counters()
    t0 = time.perf_counter()
    hit = doom_decode(
        inst, dparams, budget=args.budget, seed=args.seed, counters=counters
    )
    wall = time.perf_counter() - t0
    if hit is None:
        outcome = "not-found"
    else:
        e, index = hit
        outcome = f"solution={_hex_of(e)} index={index}"
    report = RunReport(
        _echo(args), args.seed, inst.digest(), outcome, counters, wall
    )
    _emit(report, "doom", args.emit_records)
    return EXIT_SOLVED if hit is not None else EXIT_NOT_FOUND


def cmd_precompute(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    params = _resolve_params(args, inst)
    t_p = args.tp
    if t_p is None:
        t_p = default_t_p(inst.n, inst.k, inst.omega, params)
    counters = Counters()
    t0 = time.perf_counter()
    bundle = precompute(
        inst.h, inst.omega, params, t_p, seed=args.seed, counters=counters
    )
    save_bundle(bundle, args.out)
    wall = time.perf_counter() - t0
    report = RunReport(
        _echo(args), args.seed, inst.digest(), f"bundle={args.out} t_p={t_p}",
        counters, wall,
    )
    _emit(report, "precompute", args.emit_records)
    return EXIT_SOLVED


def _check_bundle_pairing(bundle, inst: DecodingInstance) -> None:
    """Fail when the bundle was built from a different matrix."""
    if (bundle.n, bundle.k, bundle.omega) != (inst.n, inst.k, inst.omega):
        raise ConfigError(
            f"bundle is for (n={bundle.n}, k={bundle.k}, w={bundle.omega}), "
            f"instance has (n={inst.n}, k={inst.k}, w={inst.omega})"
        )
    sf = bundle.contexts[0].sf
    hp = sf.perm.permute_columns(inst.h)
    if sf.q.mat_mul(hp) != sf.full_matrix():
        raise ConfigError(
            f"bundle does not match instance digest {inst.digest()}; "
            "it was precomputed from a different parity-check matrix"
        )


def cmd_online(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    bundle = load_bundle(args.bundle)
    _check_bundle_pairing(bundle, inst)
    t0 = time.perf_counter()
    if args.batch:
        results = amortized_batch(bundle, list(inst.syndromes))
        wall = time.perf_counter() - t0
        counters = Counters()
        solved = 0
        for i, res in enumerate(results):
            if res.result is not None:
                solved += 1
                print(f"syndrome {i}: solution={_hex_of(res.result)}")
            else:
                print(f"syndrome {i}: not-found")
            for f in dataclasses.fields(Counters):
                setattr(
                    counters, f.name,
                    getattr(counters, f.name) + getattr(res.counters, f.name),
                )
        outcome = f"batch {solved}/{len(results)} solved"
        report = RunReport(
            _echo(args), bundle.seed, inst.digest(), outcome, counters, wall
        )
        _emit(report, "online-batch", args.emit_records)
        return EXIT_SOLVED if solved == len(results) else EXIT_NOT_FOUND
    counters = Counters()
    s = inst.syndromes[args.syndrome_index]
    e = online_decode(bundle, s, counters)
    wall = time.perf_counter() - t0
    outcome = f"solution={_hex_of(e)}" if e is not None else "not-found"
    report = RunReport(
        _echo(args), bundle.seed, inst.digest(), outcome, counters, wall
    )
    _emit(report, "online", args.emit_records)
    return EXIT_SOLVED if e is not None else EXIT_NOT_FOUND


def _select_schemes(args: argparse.Namespace) -> List[SchemeParams]:
    path = args.config if args.config else builtin_scheme_path()
    schemes = read_scheme_config(path)
    if args.schemes:
        wanted = [w.strip() for w in args.schemes.split(",")]
        schemes = [
            s for s in schemes if any(w in s.name for w in wanted)
        ]
        if not schemes:
            raise ConfigError(f"no scheme row matches {args.schemes!r}")
    return schemes


def cmd_estimate(args: argparse.Namespace) -> int:
    schemes = _select_schemes(args)
    variants = [v.strip() for v in args.variants.split(",")]
    for v in variants:
        if v not in VARIANT_CHOICES:
            raise ConfigError(
                f"unknown variant {v!r}; pick from {VARIANT_CHOICES}"
            )
    header = (
        f"{'scheme':<22} {'cat':>3} {'kind':<8} {'variant':<7} "
        f"{'T':>7} {'T_online':>8} {'T_pre':>7}"
    )
    if args.doom is not None:
        header += f" {'T_N':>7}"
    print(header)
    records = []
    for scheme in schemes:
        for variant in variants:
            est = estimate_scheme(scheme, variant, depth=args.depth)
            line = (
                f"{scheme.name:<22} {scheme.security_category:>3} "
                f"{scheme.target_kind:<8} {variant:<7} "
                f"{est.log2_total:>7.1f} {est.log2_online:>8.1f} "
                f"{est.log2_pre:>7.1f}"
            )
            rec = (
                f"record=estimate scheme={scheme.name} "
                f"cat={scheme.security_category} kind={scheme.target_kind} "
                f"variant={variant} depth={args.depth} "
                f"T={est.log2_total:.4f} Ton={est.log2_online:.4f} "
                f"Tpre={est.log2_pre:.4f}"
            )
            rec += " " + " ".join(
                f"{key}={getattr(est.best_params, key)}"
                for key in ("p", "p1", "l1", "l2", "w1", "w2", "w11")
            )
            if args.doom is not None:
                lg_tn, speedup = estimate_doom(
                    scheme, est.best_params, args.doom
                )
                line += f" {lg_tn:>7.1f}"
                rec += f" TN={lg_tn:.4f} speedup={speedup:.4f}"
            print(line)
            records.append(rec)
    if args.emit_records:
        with open(args.emit_records, "a") as f:
            f.write("\n".join(records) + "\n")
    return EXIT_SOLVED


def cmd_verify(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    e = _vector_from_hex(args.solution, inst.n)
    if args.index >= inst.n_syndromes:
        raise ConfigError(
            f"index {args.index} out of range for {inst.n_syndromes} syndromes"
        )
    if inst.check(e, args.index):
        print(f"pass: weight {inst.omega} solution for syndrome {args.index}")
        return EXIT_SOLVED
    print("fail: not a valid solution")
    return EXIT_NOT_FOUND


def cmd_oracle(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    solutions = brute_force_solve(inst)
    total = 0
    for i in range(inst.n_syndromes):
        group = solutions.per_syndrome.get(i, ())
        total += len(group)
        for e in group:
            print(f"syndrome {i}: solution={_hex_of(e)}")
    print(f"total {total} solutions over {inst.n_syndromes} syndromes")
    return EXIT_SOLVED if total else EXIT_NOT_FOUND


def _add_decode_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("instance", help="instance file from the gen subcommand")
    sub.add_argument(
        "--variant", choices=VARIANT_CHOICES, default="bjmm",
        help="search family used to pick --auto parameters",
    )
    sub.add_argument("--params", help="explicit p=..,p1=..,l1=..,... point")
    sub.add_argument(
        "--auto", action="store_true",
        help="derive small feasible parameters from the instance shape",
    )
    sub.add_argument("--budget", type=int, default=10000,
                     help="permutation budget before giving up")
    sub.add_argument("--seed", type=int, required=True)
    sub.add_argument("--emit-records", help="append machine-readable rows here")
    sub.add_argument("--threads", type=int, default=1,
                     help="worker count; 1 keeps counters deterministic")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isdkit",
        description="syndrome decoding toolkit: planted instances, tree "
        "decoders, offline/online split, batched targets, cost estimates",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sub = subs.add_parser("gen", help="generate a planted instance")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--k", type=int, required=True)
    sub.add_argument("--w", type=int, required=True)
    sub.add_argument("--N", type=int, default=1, help="syndrome count")
    sub.add_argument("--seed", type=int, required=True)
    sub.add_argument("--out", default="instance",
                     help="path prefix for the .sdp/.sol pair")
    sub.set_defaults(func=cmd_gen)

    sub = subs.add_parser("decode", help="decode a single-syndrome instance")
    _add_decode_flags(sub)
    sub.set_defaults(func=cmd_decode)

    sub = subs.add_parser("doom", help="decode any one of many syndromes")
    _add_decode_flags(sub)
    sub.set_defaults(func=cmd_doom)

    sub = subs.add_parser(
        "precompute", help="run the syndrome-free offline phase"
    )
    _add_decode_flags(sub)
    sub.add_argument("--tp", type=int,
                     help="stored permutation count (default auto)")
    sub.add_argument("--out", default="bundle.pre", help="bundle output path")
    sub.set_defaults(func=cmd_precompute)

    sub = subs.add_parser("online", help="consume a bundle for one syndrome")
    sub.add_argument("bundle", help="bundle from the precompute subcommand")
    sub.add_argument("instance", help="instance supplying the syndromes")
    sub.add_argument("--syndrome-index", type=int, default=0)
    sub.add_argument("--batch", action="store_true",
                     help="decode every syndrome against the one bundle")
    sub.add_argument("--emit-records", help="append machine-readable rows here")
    sub.set_defaults(func=cmd_online)

    sub = subs.add_parser("estimate", help="bit-security estimates")
    sub.add_argument("--config", help="scheme table (default: built-in)")
    sub.add_argument("--schemes", help="comma list of name substrings")
    sub.add_argument("--variants", default="bjmm",
                     help="comma list from prange,dumer,bjmm")
    sub.add_argument("--depth", type=int, choices=(2, 3), default=2)
    sub.add_argument("--doom", type=int,
                     help="add a T_N column for N batched syndromes")
    sub.add_argument("--emit-records", help="append machine-readable rows here")
    sub.set_defaults(func=cmd_estimate)

    sub = subs.add_parser("verify", help="check a claimed solution")
    sub.add_argument("instance")
    sub.add_argument("--solution", required=True, help="error vector hex")
    sub.add_argument("--index", type=int, default=0)
    sub.set_defaults(func=cmd_verify)

    sub = subs.add_parser("oracle", help="brute-force all solutions")
    sub.add_argument("instance")
    sub.set_defaults(func=cmd_oracle)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    raw = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(raw)
        args.raw_argv = raw
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
