"""Command-line front door: generate, run, solve, verify, report.

Reports are JSON with every rational as a 'p/q' string next to a decimal
column; given identical inputs they are byte-for-byte reproducible (timing
is opt-in via --timing for that reason).  All randomized suites take
explicit seeds, echo them in the report, and default to fixed values.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import analysis, generators
from .algorithms import first_fit, next_fit, server_type_partition
from .model import (
    InfeasibleScheduleError,
    Instance,
    active_count,
    cost,
    event_times,
    format_rational,
    mu,
    parse_rational,
    read_instance,
    scale_time,
    span,
    utilization,
    validate,
    write_instance,
    write_schedule,
)
from .optimal import active_ceil_bound, brute_force_opt

_ALGORITHMS = {"nextfit": next_fit, "firstfit": first_fit}

_REQUIRED_PARAMS = {
    "ggu": ("k", "t"),
    "long-uniform": ("k", "l"),
    "nf-nemesis": ("N",),
    "random-two-arrival": ("n", "t", "seed"),
    "random-equal-duration": ("n", "seed"),
}

_SUITE_DEFAULTS = {
    "nextfit-2t": {"trials": 500, "max_jobs": 40, "seed": 20240601},
    "strict-ff-2": {"trials": 500, "max_jobs": 8, "seed": 7},
    "weights": {"trials": 200, "seed": 104729},
    "layers": {},
    "recurrence": {"n": 200},
}


def _emit(report: dict, out_path) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


def _rational_pair(value: Fraction) -> dict:
    return {"exact": format_rational(value), "decimal": float(value)}


def _instance_digest(instance: Instance) -> dict:
    digest = {
        "jobs": len(instance.jobs),
        "utilization": _rational_pair(utilization(instance)),
        "span": _rational_pair(span(instance)),
    }
    digest["mu"] = _rational_pair(mu(instance)) if instance.jobs else None
    return digest


def cmd_gen(args) -> int:
    missing = [
        p for p in _REQUIRED_PARAMS[args.family] if getattr(args, p, None) is None
    ]
    if missing:
        flags = ", ".join(f"--{p}" for p in missing)
        raise ValueError(f"family {args.family} requires {flags}")
    params = {}
    for name in ("k", "l", "N", "n", "seed", "size_grid", "start_grid", "horizon"):
        value = getattr(args, name, None)
        if value is not None:
            params[name] = value
    for name in ("t", "delta"):
        value = getattr(args, name, None)
        if value is not None:
            params[name] = parse_rational(value)
    spec = generators.GeneratorSpec(family=args.family, parameters=params)
    instance, certificate = spec.build()
    shown = ", ".join(
        f"{key}={format_rational(v) if isinstance(v, Fraction) else v}"
        for key, v in sorted(params.items())
    )
    write_instance(args.out, instance, header=f"family {args.family}: {shown}")
    print(f"wrote {len(instance.jobs)} jobs to {args.out}")
    if certificate is not None:
        cert_path = args.cert_out or f"{args.out}.cert.json"
        write_schedule(cert_path, certificate)
        print(
            f"wrote certificate ({len(certificate.servers)} servers, "
            f"cost {format_rational(cost(certificate))}) to {cert_path}"
        )
    return 0


def cmd_run(args) -> int:
    started = time.perf_counter()
    instance = read_instance(args.input)
    violations = validate(instance)
    if violations:
        for v in violations:
            print(f"invalid instance: {v}", file=sys.stderr)
        return 2
    trace = _ALGORITHMS[args.alg](instance)
    schedule = trace.schedule
    report = {
        "command": "run",
        "algorithm": args.alg,
        "input": str(args.input),
        "instance": _instance_digest(instance),
        "cost": _rational_pair(cost(schedule)),
        "servers_opened": len(schedule.servers),
        "active_counts": [
            {"time": format_rational(tau), "count": active_count(schedule, tau)}
            for tau in event_times(instance)
        ],
    }
    if args.timing:
        report["wall_time_s"] = time.perf_counter() - started
    if args.schedule_out:
        write_schedule(args.schedule_out, schedule)
        report["schedule"] = str(args.schedule_out)
    _emit(report, args.out)
    return 0


def cmd_opt(args) -> int:
    started = time.perf_counter()
    instance = read_instance(args.input)
    violations = validate(instance)
    if violations:
        for v in violations:
            print(f"invalid instance: {v}", file=sys.stderr)
        return 2
    result = brute_force_opt(instance, max_jobs=args.max_jobs)
    report = {
        "command": "opt",
        "input": str(args.input),
        "instance": _instance_digest(instance),
        "cost": _rational_pair(result.cost),
        "servers": len(result.schedule.servers),
        "partitions_examined": result.partitions_examined,
        "lower_bounds": {
            "utilization": _rational_pair(result.util_bound),
            "span": _rational_pair(result.span_bound),
        },
    }
    if args.timing:
        report["wall_time_s"] = time.perf_counter() - started
    if args.schedule_out:
        write_schedule(args.schedule_out, result.schedule)
        report["schedule"] = str(args.schedule_out)
    _emit(report, args.out)
    return 0


def cmd_ratio(args) -> int:
    report = analysis.ratio_report(
        parse_rational(args.alg_cost), parse_rational(args.opt), args.kind
    )
    payload = {"command": "ratio", "alg_cost": args.alg_cost, "reference": args.opt}
    payload.update(report.as_dict())
    _emit(payload, args.out)
    return 0


# ---------------------------------------------------------------------------
# Verification suites.  Each returns (passed, details, counterexample or None);
# a counterexample is an Instance that deterministically re-fails its check.
# ---------------------------------------------------------------------------

def _suite_recurrence(n: int):
    seqs = analysis.multiplier_sequences(n)
    agree = seqs.partial_sums == seqs.closed_form
    details = {
        "n": n,
        "closed_form_matches": agree,
        "last_term": format_rational(seqs.partial_sums[-1]),
    }
    return agree, details, None


def _suite_nextfit_2t(trials: int, max_jobs: int, seed: int):
    for trial in range(trials):
        trial_seed = seed * 1_000_003 + trial
        n = random.Random(trial_seed).randint(1, max_jobs)
        instance = generators.random_equal_duration(n=n, seed=trial_seed)
        trace = next_fit(instance)
        for tau in event_times(instance):
            bound = active_ceil_bound(instance, tau)
            got = active_count(trace.schedule, tau)
            if got > 2 * bound:
                details = {
                    "trial": trial,
                    "seed": trial_seed,
                    "time": format_rational(tau),
                    "active": got,
                    "arrival_ceiling": bound,
                }
                return False, details, instance
    return True, {"trials": trials, "max_jobs": max_jobs, "seed": seed}, None


def _suite_strict_ff_2(trials: int, max_jobs: int, seed: int):
    for trial in range(trials):
        trial_seed = seed * 1_000_003 + trial
        n = random.Random(trial_seed).randint(2, max_jobs)
        base = generators.random_two_arrival(
            n=n, t=Fraction(1, 2), seed=trial_seed, size_grid=12
        )
        instance = scale_time(base, 2)  # duration 2, arrivals {0, 1}
        trace = first_fit(instance)
        ff_cost = cost(trace.schedule)
        opt = brute_force_opt(instance, max_jobs=max_jobs)

        def fail(reason: str):
            return (
                False,
                {"trial": trial, "seed": trial_seed, "reason": reason},
                instance,
            )

        if ff_cost > 2 * opt.cost:
            return fail(
                f"firstfit cost {format_rational(ff_cost)} exceeds twice the "
                f"optimum {format_rational(opt.cost)}"
            )
        part = server_type_partition(trace)
        k1, k2, k3 = part.counts
        if ff_cost != 2 * k1 + 3 * k2 + 2 * k3:
            return fail("cost does not decompose as 2*k1 + 3*k2 + 2*k3")
        if k1 >= 2 and not 2 * part.start0_mass_type1 > k1:
            return fail("type-1 first-arrival mass fails 2*A > k")
        if k2 >= 2 and not 2 * part.start0_mass_type2 > k2:
            return fail("type-2 first-arrival mass fails 2*A > k")
    return True, {"trials": trials, "max_jobs": max_jobs, "seed": seed}, None


_WEIGHT_T_VALUES = (Fraction(1, 28), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


def _check_weight_report(report) -> str | None:
    if len(report.ff_violations) > report.ignored_budget:
        return (
            f"{len(report.ff_violations)} servers below weight 1+t "
            f"(budget {report.ignored_budget})"
        )
    for chk in report.opt_checks:
        if not chk.ok:
            return (
                f"reference server {chk.server_id} weight "
                f"{format_rational(chk.weight)} exceeds {format_rational(chk.bound)}"
            )
    if report.ff_total != report.item_total or report.opt_total != report.item_total:
        return "weight totals do not balance"
    return None


def _suite_weights(trials: int, seed: int):
    instance, certificate = generators.ggu_extended(6, Fraction(1, 2))
    trace = first_fit(instance)
    report = analysis.verify_weights(trace, certificate, Fraction(1, 2))
    reason = _check_weight_report(report)
    if reason is not None:
        return False, {"case": "ggu k=6 t=1/2", "reason": reason}, instance
    for trial in range(trials):
        t = _WEIGHT_T_VALUES[trial % len(_WEIGHT_T_VALUES)]
        instance, trace, used_seed = analysis.find_uniform_two_arrival(
            t, seed * 1_000_003 + trial * 10_007
        )
        opt = brute_force_opt(instance, max_jobs=8)
        report = analysis.verify_weights(trace, opt.schedule, t)
        reason = _check_weight_report(report)
        if reason is not None:
            details = {
                "trial": trial,
                "seed": used_seed,
                "t": format_rational(t),
                "reason": reason,
            }
            return False, details, instance
    return True, {"trials": trials, "seed": seed}, None


def _suite_layers(_args=None):
    for k in (2, 4, 8):
        for level_count in (2, 4, 10):
            instance = generators.long_uniform(k, level_count)
            trace = first_fit(instance)
            profile = analysis.layer_profile(trace, k, level_count)
            failures = analysis.check_layer_inequalities(profile, k)
            bound = analysis.util_ratio_bound(trace, k, level_count)
            expected = Fraction(2, 3) + Fraction(1, k * (level_count + 2))
            if bound.ratio != expected:
                failures.append("utilization/cost misses its exact value")
            if not bound.passed:
                failures.append("utilization/cost not above its floor")
            if failures:
                details = {"k": k, "l": level_count, "failures": failures}
                return False, details, instance
    return True, {"k": [2, 4, 8], "l": [2, 4, 10]}, None


def cmd_verify(args) -> int:
    defaults = _SUITE_DEFAULTS[args.suite]
    trials = args.trials if args.trials is not None else defaults.get("trials")
    seed = args.seed if args.seed is not None else defaults.get("seed")
    max_jobs = args.max_jobs if args.max_jobs is not None else defaults.get("max_jobs")
    n = args.n if args.n is not None else defaults.get("n")
    if args.suite == "recurrence":
        passed, details, counterexample = _suite_recurrence(n)
    elif args.suite == "nextfit-2t":
        passed, details, counterexample = _suite_nextfit_2t(trials, max_jobs, seed)
    elif args.suite == "strict-ff-2":
        passed, details, counterexample = _suite_strict_ff_2(trials, max_jobs, seed)
    elif args.suite == "weights":
        passed, details, counterexample = _suite_weights(trials, seed)
    else:
        passed, details, counterexample = _suite_layers()
    report = {
        "command": "verify",
        "suite": args.suite,
        "passed": passed,
        "details": details,
    }
    if not passed and counterexample is not None:
        dump_dir = Path(args.counterexample_dir)
        dump_dir.mkdir(parents=True, exist_ok=True)
        dump = dump_dir / f"counterexample-{args.suite}.jobs"
        header = f"suite {args.suite} failed: " + json.dumps(details, sort_keys=True)
        write_instance(dump, counterexample, header=header)
        report["counterexample"] = str(dump)
    _emit(report, args.out)
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rentlab",
        description="Exact lab for online server rental: generators, "
        "algorithms, optima and verification suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance file")
    gen.add_argument("--family", required=True, choices=generators.FAMILIES)
    gen.add_argument("--k", type=int)
    gen.add_argument("--l", type=int)
    gen.add_argument("--N", type=int)
    gen.add_argument("--n", type=int)
    gen.add_argument("--t", help="second arrival time, rational like 1/2")
    gen.add_argument("--delta", help="perturbation scale, rational")
    gen.add_argument("--seed", type=int)
    gen.add_argument("--size-grid", dest="size_grid", type=int)
    gen.add_argument("--start-grid", dest="start_grid", type=int)
    gen.add_argument("--horizon", type=int)
    gen.add_argument("--out", required=True)
    gen.add_argument("--cert-out", dest="cert_out")
    gen.set_defaults(func=cmd_gen)

    run = sub.add_parser("run", help="run an online algorithm on an instance")
    run.add_argument("--alg", required=True, choices=sorted(_ALGORITHMS))
    run.add_argument("--in", dest="input", required=True)
    run.add_argument("--out")
    run.add_argument("--schedule-out", dest="schedule_out")
    run.add_argument("--timing", action="store_true")
    run.set_defaults(func=cmd_run)

    opt = sub.add_parser("opt", help="brute-force optimum for a small instance")
    opt.add_argument("--in", dest="input", required=True)
    opt.add_argument("--max-jobs", dest="max_jobs", type=int, default=10)
    opt.add_argument("--out")
    opt.add_argument("--schedule-out", dest="schedule_out")
    opt.add_argument("--timing", action="store_true")
    opt.set_defaults(func=cmd_opt)

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("--suite", required=True, choices=sorted(_SUITE_DEFAULTS))
    verify.add_argument("--trials", type=int)
    verify.add_argument("--seed", type=int)
    verify.add_argument("--max-jobs", dest="max_jobs", type=int)
    verify.add_argument("--n", type=int)
    verify.add_argument("--out")
    verify.add_argument(
        "--counterexample-dir", dest="counterexample_dir", default="."
    )
    verify.set_defaults(func=cmd_verify)

    ratio = sub.add_parser("ratio", help="label an algorithm-to-reference ratio")
    ratio.add_argument("--alg-cost", dest="alg_cost", required=True)
    ratio.add_argument("--opt", required=True)
    ratio.add_argument("--kind", required=True, choices=analysis.RATIO_KINDS)
    ratio.add_argument("--out")
    ratio.set_defaults(func=cmd_ratio)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse has already printed usage
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError, InfeasibleScheduleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
