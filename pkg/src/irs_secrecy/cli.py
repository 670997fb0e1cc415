"""Command-line entry point: ``irs-secrecy {single,power-sweep,elements-sweep,oracle-check}``.

Exit codes: 0 success, 1 oracle check below its pass threshold, 2 usage or
configuration error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .config import FIELDS, ConfigError, ScenarioConfig, build_config, load_config
from .channel import draw_realization
from .montecarlo import (
    BASELINES,
    SweepSpec,
    fmt,
    run_sweep,
    run_trial,
    run_trials,
    summarize,
    trial_streams,
)
from .optimizer import ORACLE_MAX_ELEMENTS, alternate_optimize, oracle_grid_search

TRIAL_COLUMNS = ("trial", "baseline", "power", "secrecy", "rate_user", "max_eve_rate", "active_eve")

ORACLE_RATIO = 0.98
ORACLE_PASS_FRACTION = 0.95

DEFAULTS_EPILOG = (
    "defaults: transmit power 3 W, 10 IRS elements, 8 non-colluding eavesdroppers, "
    "path-loss exponent 3, UAV height 80 m, noise variance 0.01, 10000 trials"
)

SUBCOMMAND_BASES = {
    "single": ScenarioConfig(),
    "power-sweep": ScenarioConfig(m_elements=10, k_eves=3),
    "elements-sweep": ScenarioConfig(power_max=3.0, k_eves=3),
    "oracle-check": ScenarioConfig(k_eves=3),
}


class UsageError(Exception):
    pass


def _add_common(parser: argparse.ArgumentParser, subcommand_defaults: ScenarioConfig):
    parser.add_argument("--config", type=Path, help="INI scenario file")
    parser.add_argument("--out", type=Path, help="CSV output path (default: stdout)")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes (output is identical for any value)")
    parser.add_argument("--verbose-trace", action="store_true",
                        help="also dump optimizer traces and phase profiles next to --out")
    group = parser.add_argument_group("scenario overrides")
    group.add_argument("--seed", dest="master_seed", help=f"master seed (default {subcommand_defaults.master_seed})")
    for key in FIELDS:
        if key == "master_seed":
            continue
        group.add_argument(f"--{key.replace('_', '-')}", dest=key,
                           help=f"(default {_default_text(subcommand_defaults, key)})")


def _default_text(config: ScenarioConfig, key: str) -> str:
    for holder in (config, config.topology, config.fading, config.optimizer):
        if hasattr(holder, key):
            value = getattr(holder, key)
            if hasattr(value, "as_array"):
                return ",".join(fmt(v) for v in value.as_array())
            return str(value)
    return "?"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irs-secrecy",
        description="Secrecy capacity of an IRS-assisted UAV-to-vehicle link with multiple eavesdroppers.",
        epilog=DEFAULTS_EPILOG,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    single = sub.add_parser("single", help="paired per-trial runs of every baseline",
                            epilog=DEFAULTS_EPILOG)
    _add_common(single, SUBCOMMAND_BASES["single"])

    power = sub.add_parser("power-sweep", help="sweep the UAV power cap (10 elements, 3 eves)",
                           epilog=DEFAULTS_EPILOG)
    _add_common(power, SUBCOMMAND_BASES["power-sweep"])
    power.add_argument("--powers", default="0.5,1,2,3,4", help="comma-separated powers in W (default %(default)s)")

    elements = sub.add_parser("elements-sweep", help="sweep the IRS element count (3 W, 3 eves)",
                              epilog=DEFAULTS_EPILOG)
    _add_common(elements, SUBCOMMAND_BASES["elements-sweep"])
    elements.add_argument("--elements", default="0,2,4,6,8,10", help="comma-separated element counts (default %(default)s)")

    oracle = sub.add_parser("oracle-check", help="optimizer vs exhaustive phase grid",
                            epilog=DEFAULTS_EPILOG)
    _add_common(oracle, SUBCOMMAND_BASES["oracle-check"])
    oracle.add_argument("--instances", type=int, default=100, help="random realizations (default %(default)s)")
    oracle.add_argument("--m", type=int, default=2, help=f"IRS elements, at most {ORACLE_MAX_ELEMENTS} (default %(default)s)")
    oracle.add_argument("--levels", type=int, default=64, help="grid points per phase (default %(default)s)")
    return parser


def scenario_from_args(args) -> ScenarioConfig:
    base = SUBCOMMAND_BASES[args.command]
    if args.config is not None:
        try:
            base = load_config(args.config, base)
        except OSError as exc:
            raise ConfigError("config", f"cannot read {args.config}: {exc.strerror}") from None
    overrides = {key: getattr(args, key) for key in FIELDS if getattr(args, key, None) is not None}
    return build_config(overrides, base)


def _parse_list(text: str, kind, name: str) -> tuple:
    try:
        values = tuple(kind(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"--{name}: cannot parse {text!r}") from None
    if not values:
        raise UsageError(f"--{name}: empty list")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise UsageError(f"--{name}: values must be strictly increasing")
    return values


def _open_out(path):
    return open(path, "w", newline="") if path is not None else sys.stdout


def _side_path(out: Path | None, suffix: str) -> Path:
    if out is None:
        raise UsageError("--verbose-trace needs --out")
    return out.with_name(out.name + suffix)


def cmd_single(args, config: ScenarioConfig) -> int:
    if args.verbose_trace:
        trace_path = _side_path(args.out, ".trace.csv")
        profile_path = _side_path(args.out, ".profiles.jsonl")
    traces = []
    if args.verbose_trace:
        outcomes = [run_trial(config, i, BASELINES, traces) for i in range(config.trials)]
    else:
        outcomes = run_trials(config, BASELINES, jobs=args.jobs)
    stream = _open_out(args.out)
    try:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(TRIAL_COLUMNS)
        for trial, per_baseline in enumerate(outcomes):
            for baseline, outcome in per_baseline.items():
                record = outcome.record()
                writer.writerow([trial, baseline] + [fmt(record[c]) for c in TRIAL_COLUMNS[2:]])
    finally:
        if stream is not sys.stdout:
            stream.close()
    if args.verbose_trace:
        _dump_traces(outcomes, traces, trace_path, profile_path)
    summary = sys.stderr if args.out is None else sys.stdout
    for baseline in BASELINES:
        mean, stderr, zeros = summarize(np.array([o[baseline].secrecy_capacity for o in outcomes]))
        print(f"{baseline}: mean secrecy {fmt(mean)} +/- {fmt(stderr)} bits/s/Hz "
              f"(zero fraction {fmt(zeros)}, {len(outcomes)} trials)", file=summary)
    return 0


def _dump_traces(outcomes, traces, trace_path, profile_path):
    with open(trace_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("trial", "restart", "iteration", "objective"))
        for trial, trace in enumerate(traces):
            counters = {}
            for restart, value in zip(trace.restart_index, trace.objective_per_iter):
                iteration = counters.get(int(restart), 0)
                counters[int(restart)] = iteration + 1
                writer.writerow((trial, int(restart), iteration, fmt(value)))
    with open(profile_path, "w") as fh:
        for trial, per_baseline in enumerate(outcomes):
            for baseline, outcome in per_baseline.items():
                fh.write(json.dumps({
                    "trial": trial,
                    "baseline": baseline,
                    "amplitudes": [float(fmt(a)) for a in outcome.profile.amplitudes],
                    "phases": [float(fmt(p)) for p in outcome.profile.phases],
                }) + "\n")


def _cmd_sweep(args, config: ScenarioConfig, swept: str, values) -> int:
    spec = SweepSpec(swept, values, config.trials)
    result = run_sweep(config, spec, jobs=args.jobs)
    stream = _open_out(args.out)
    try:
        result.to_csv(stream)
    finally:
        if stream is not sys.stdout:
            stream.close()
    return 0


def cmd_power_sweep(args, config):
    return _cmd_sweep(args, config, "power_max", _parse_list(args.powers, float, "powers"))


def cmd_elements_sweep(args, config):
    return _cmd_sweep(args, config, "m_elements", _parse_list(args.elements, int, "elements"))


def oracle_ratio(achieved: float, oracle: float) -> float:
    """achieved / oracle, with 0/0 counted as a perfect match."""
    if oracle <= 0.0:
        return 1.0 if achieved <= 0.0 else float("inf")
    return achieved / oracle


def run_oracle_check(config: ScenarioConfig, instances: int, m: int, levels: int):
    """Per-instance (achieved, oracle, ratio) for random realizations with ``m`` elements."""
    if not 0 <= m <= ORACLE_MAX_ELEMENTS:
        raise UsageError(f"--m must be in [0, {ORACLE_MAX_ELEMENTS}]")
    if levels < 2:
        raise UsageError("--levels must be >= 2")
    if instances < 1:
        raise UsageError("--instances must be >= 1")
    scenario = config.replace(m_elements=m)
    rows = []
    for i in range(instances):
        geometry_rng, fading_rng, optimizer_rng, _ = trial_streams(scenario.master_seed, i)
        topology = scenario.topology.sample(scenario.k_eves, geometry_rng)
        realization = draw_realization(topology, scenario.fading, m, fading_rng)
        achieved, _ = alternate_optimize(realization, scenario.fading, scenario.optimizer, optimizer_rng)
        oracle = oracle_grid_search(realization, scenario.fading, scenario.power_max, levels)
        rows.append((achieved.secrecy_capacity, oracle.secrecy_capacity,
                     oracle_ratio(achieved.secrecy_capacity, oracle.secrecy_capacity)))
    return rows


def cmd_oracle_check(args, config) -> int:
    rows = run_oracle_check(config, args.instances, args.m, args.levels)
    stream = _open_out(args.out)
    try:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(("instance", "achieved", "oracle", "ratio", "pass"))
        for i, (achieved, oracle, ratio) in enumerate(rows):
            writer.writerow((i, fmt(achieved), fmt(oracle), fmt(ratio), int(ratio >= ORACLE_RATIO)))
    finally:
        if stream is not sys.stdout:
            stream.close()
    fraction = float(np.mean([r >= ORACLE_RATIO for _, _, r in rows]))
    verdict = "PASS" if fraction >= ORACLE_PASS_FRACTION else "FAIL"
    summary = sys.stderr if args.out is None else sys.stdout
    print(f"oracle-check m={args.m} levels={args.levels}: pass fraction {fmt(fraction)} "
          f"at ratio >= {ORACLE_RATIO} ({verdict}, threshold {ORACLE_PASS_FRACTION})", file=summary)
    return 0 if fraction >= ORACLE_PASS_FRACTION else 1


COMMANDS = {
    "single": cmd_single,
    "power-sweep": cmd_power_sweep,
    "elements-sweep": cmd_elements_sweep,
    "oracle-check": cmd_oracle_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        config = scenario_from_args(args)
        return COMMANDS[args.command](args, config)
    except (ConfigError, UsageError, ValueError) as exc:
        print(f"irs-secrecy: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
