"""Command-line entry point: ``mpmabsa {run,scenarios,sample-complexity,ci-compare,bounds}``."""
from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import replace

from .bounds import theoretical_curves
from .capest import WIDTHS
from .env import ArmSpec, InfeasibleEnvironmentError, expected_reward, optimal_action
from .harness import (
    SCENARIOS,
    ConfigError,
    ExperimentConfig,
    PolicySpec,
    builtin_scenario,
    ci_width_table,
    load_config,
    run_experiment,
    sample_complexity_experiment,
    serialize_results,
)
from .policies import UnknownPolicyError, policy_parameters

# Flags that become policy parameters when the policy accepts them.
POLICY_FLAGS = ("gamma", "xi", "width", "delta", "action_cap")


class CliError(Exception):
    pass


def _emit(rows, header, out=None):
    """Write TSV to stdout, or CSV when ``out`` is given."""
    if out:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        return
    writer = csv.writer(sys.stdout, delimiter="\t", lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _fmt(x):
    return repr(x) if isinstance(x, float) else x


def _warn(msg):
    print(f"warning: {msg}", file=sys.stderr)


def _build_config(args) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig(scenario=None)
    if args.scenario:
        if args.scenario not in SCENARIOS:
            raise CliError(f"unknown scenario {args.scenario!r}; available: {', '.join(SCENARIOS)}")
        config = replace(config, scenario=args.scenario, arms=None, plays=None)
    if config.scenario is None and not config.arms:
        raise CliError("either --config or --scenario is required")

    if args.policies:
        names = [p.strip() for p in args.policies.split(",") if p.strip()]
        policies = []
        for name in names:
            try:
                policy_parameters(name)
            except UnknownPolicyError as exc:
                raise CliError(str(exc)) from None
            policies.append(PolicySpec(name))
        config = replace(config, policies=policies)
    if not config.policies:
        raise CliError("no policies given; use --policies or a config `policies` list")

    overrides = {k: getattr(args, k) for k in POLICY_FLAGS if getattr(args, k) is not None}
    if overrides:
        specs = []
        for spec in config.policies:
            accepted = policy_parameters(spec.name)
            params = dict(spec.params, **{k: v for k, v in overrides.items() if k in accepted})
            specs.append(PolicySpec(spec.name, spec.label, params))
        config = replace(config, policies=specs)

    for key in ("horizon", "reps", "seed", "stride", "threads", "out"):
        value = getattr(args, key)
        if value is not None:
            config = replace(config, **{key: value})
    return config


def cmd_run(args) -> int:
    config = _build_config(args)
    if args.threads is None and not args.config:
        config = replace(config, threads=os.cpu_count() or 1)
    traces = run_experiment(config)
    failed = [tr for tr in traces if not tr.ok]
    for tr in failed:
        _warn(f"skipping {tr.label}: {tr.error}")
    out = config.out or "results.csv"
    csv_path, side_path = serialize_results(traces, out, config)
    for tr in traces:
        if tr.ok:
            freq = float(tr.optimal_action_freq[-1]) if len(tr.t) else float("nan")
            print(f"{tr.label}\tfinal_mean_regret={tr.final_mean!r}\toptimal_action_freq={freq!r}")
    print(f"wrote {csv_path} and {side_path}", file=sys.stderr)
    if failed and len(failed) == len(traces):
        return 1
    return 0


def cmd_scenarios(args) -> int:
    rows = []
    for name in SCENARIOS:
        env = builtin_scenario(name)
        best, L = optimal_action(env)
        rows.append((name, env.n_arms, env.plays, _fmt(expected_reward(env, best)), env.family[0]))
    _emit(rows, ("scenario", "K", "N", "f_star", "distribution"), args.out)
    return 0


def cmd_sample_complexity(args) -> int:
    try:
        arm = ArmSpec(args.mean, args.capacity, args.distribution, args.variance)
    except InfeasibleEnvironmentError as exc:
        raise CliError(str(exc)) from None
    res = sample_complexity_experiment(arm, args.delta, args.reps, n_plays=args.plays, seed=args.seed,
                                       max_slots=args.max_slots, width=args.width or "uci")
    rows = [(r, int(res.tau[r]), int(res.iota[r]), int(res.slots[r]), int(res.estimate[r]), bool(res.censored[r]))
            for r in range(args.reps)]
    _emit(rows, ("rep", "tau", "iota", "slots", "estimate", "censored"), args.out)
    print(
        f"median_tau={res.median_tau!r}\tcorrect_rate={res.correct_rate!r}\t"
        f"censored={int(res.censored.sum())}\tbound={res.theoretical_bound()!r}",
        file=sys.stderr,
    )
    return 0


def cmd_ci_compare(args) -> int:
    rows = [(t, _fmt(u), _fmt(h)) for t, u, h in ci_width_table(args.horizon)]
    _emit(rows, ("t", "uci_phi", "hfd_rho"), args.out)
    return 0


def cmd_bounds(args) -> int:
    env = builtin_scenario(args.scenario)
    curves = theoretical_curves(env, args.variance, args.horizons)
    c = curves["coefficients"]
    if args.horizons:
        rows = [(int(T), _fmt(float(lo)), _fmt(float(up))) for T, lo, up in zip(curves["T"], curves["lower"], curves["upper"])]
        _emit(rows, ("T", "lower", "upper"), args.out)
    else:
        rows = [(k, _fmt(float(getattr(c, k)))) for k in
                ("suboptimal", "lower_capacity", "lower_boundary", "upper_capacity", "upper_boundary", "lower", "upper")]
        _emit(rows, ("term", "coefficient"), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mpmabsa", description="Multiple-play bandits with shareable arms.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a regret experiment and write CSV + JSON results")
    run.add_argument("--config", help="YAML experiment config; flags override its fields")
    run.add_argument("--scenario", help=f"built-in scenario: {', '.join(SCENARIOS)}")
    run.add_argument("--policies", help="comma-separated policy names")
    run.add_argument("--horizon", type=int, help="number of slots T")
    run.add_argument("--reps", type=int, help="replications (default 200)")
    run.add_argument("--seed", type=int, help="base seed")
    run.add_argument("--gamma", type=float, help="elimination aggressiveness for SE-type policies")
    run.add_argument("--xi", type=float, help="confidence scaling for MP-SE-SA / ETC-UCB")
    run.add_argument("--width", choices=WIDTHS, help="confidence width for capacity bounds")
    run.add_argument("--delta", type=float, help="override the confidence level")
    run.add_argument("--action-cap", dest="action_cap", type=int, help="largest action space flat baselines accept")
    run.add_argument("--stride", type=int, help="log every s-th slot (default max(1, T/1000))")
    run.add_argument("--threads", type=int, help="worker processes for replications (default: CPU count)")
    run.add_argument("--out", help="CSV output path (default results.csv)")
    run.set_defaults(func=cmd_run)

    sc = sub.add_parser("scenarios", help="list built-in scenarios (TSV)")
    sc.add_argument("--out", help="write CSV instead of TSV to stdout")
    sc.set_defaults(func=cmd_scenarios)

    cx = sub.add_parser("sample-complexity", help="single-arm capacity estimation study")
    cx.add_argument("--mean", type=float, required=True, help="per-load mean of the arm")
    cx.add_argument("--capacity", type=int, required=True, help="true capacity of the arm")
    cx.add_argument("--delta", type=float, default=0.05, help="confidence parameter (default 0.05)")
    cx.add_argument("--reps", type=int, default=500, help="replications (default 500)")
    cx.add_argument("--plays", type=int, help="plays N for united pulls (default 2 x capacity)")
    cx.add_argument("--distribution", choices=("bernoulli", "gaussian"), default="bernoulli")
    cx.add_argument("--variance", type=float, help="Gaussian variance")
    cx.add_argument("--width", choices=WIDTHS, help="confidence width (default uci)")
    cx.add_argument("--seed", type=int, default=0, help="base seed")
    cx.add_argument("--max-slots", dest="max_slots", type=int, default=10**7, help="censoring cap per replication")
    cx.add_argument("--out", help="write CSV instead of TSV to stdout")
    cx.set_defaults(func=cmd_sample_complexity)

    ci = sub.add_parser("ci-compare", help="UCI vs Hoeffding widths on a log grid")
    ci.add_argument("--horizon", type=int, default=10**6, help="horizon T (default 1e6)")
    ci.add_argument("--out", help="write CSV instead of TSV to stdout")
    ci.set_defaults(func=cmd_ci_compare)

    bd = sub.add_parser("bounds", help="regret lower/upper bound coefficients")
    bd.add_argument("--scenario", required=True, help=f"built-in scenario: {', '.join(SCENARIOS)}")
    bd.add_argument("--variance", type=float, help="Gaussian variance (defaults to the scenario's)")
    bd.add_argument("--horizons", type=lambda s: [int(float(x)) for x in s.split(",")],
                    help="comma-separated horizons; prints curve values instead of coefficients")
    bd.add_argument("--out", help="write CSV instead of TSV to stdout")
    bd.set_defaults(func=cmd_bounds)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ConfigError, InfeasibleEnvironmentError, KeyError, ValueError) as exc:
        msg = str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
