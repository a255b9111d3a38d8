"""Command line entry point: ``lbrs run`` and ``lbrs sweep``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .core import AGENT_KINDS, ConfigurationError, SimConfig
from .harness import (
    SWEEPABLE_PARAMETERS,
    SweepSpec,
    load_config_file,
    run_experiment,
    run_sweep,
    write_manifest,
    write_summary_csv,
    write_trace_csv,
)


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="flat key = value config file")
    parser.add_argument("--seed", type=int, help="master RNG seed")
    parser.add_argument("--agent", choices=AGENT_KINDS, help="recommendation policy")
    parser.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    parser.add_argument("--users", type=int, help="number of simulated sessions (N)")
    parser.add_argument("--items", type=int, help="catalog size (M)")
    parser.add_argument("--k", type=int, help="slate size")
    parser.add_argument("--p", type=float, help="per-item recommendation probability")
    parser.add_argument("--lambda", dest="lambda_", type=float,
                        help="heterogeneity coefficient")
    parser.add_argument("--q-threshold", type=float, help="high-pool quality cutoff")
    parser.add_argument("--trace", action="store_true", help="also write per-step records")
    parser.add_argument("--sequential", action="store_true",
                        help="run sessions on a single worker")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lbrs",
        description="Simulation workbench for load-balanced slate recommendation")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="simulate one configuration")
    _add_common_options(run_p)

    sweep_p = sub.add_parser("sweep", help="rerun a configuration across parameter values")
    _add_common_options(sweep_p)
    sweep_p.add_argument("--param", required=True, choices=sorted(SWEEPABLE_PARAMETERS),
                         help="parameter to sweep")
    sweep_p.add_argument("--values", required=True,
                         help="comma-separated list of parameter values")
    sweep_p.add_argument("--replicates", type=int, default=1,
                         help="independent repeats per value")
    return parser


def _resolve_config(args) -> SimConfig:
    config = SimConfig()
    if args.config is not None:
        config = load_config_file(args.config, base=config)
    overrides = {}
    for flag, name in (("seed", "seed"), ("agent", "agent_kind"), ("users", "N"),
                       ("items", "M"), ("k", "k"), ("p", "p"),
                       ("lambda_", "lambda_"), ("q_threshold", "q_threshold")):
        value = getattr(args, flag)
        if value is not None:
            overrides[name] = value
    return config.replace(**overrides) if overrides else config


def _parse_values(parameter: str, text: str) -> tuple:
    caster = SWEEPABLE_PARAMETERS[parameter]
    items = [part.strip() for part in text.split(",") if part.strip()]
    if not items:
        raise ConfigurationError("--values must list at least one value")
    return tuple(caster(item) for item in items)


def _print_summary(label: str, s) -> None:
    print(f"{label}: users={s.n_users} steps={s.n_steps} "
          f"reward/session={s.avg_reward_session:.3f}±{s.ci_reward_session:.3f} "
          f"reward/step={s.avg_reward_step:.3f} "
          f"diversity={s.avg_diversity:.4f} (lower is more diverse) "
          f"session_len={s.mean_session_len:.1f}")


def cmd_run(args) -> int:
    config = _resolve_config(args)
    jobs = 1 if args.sequential else None
    summary, records = run_experiment(config, collect_trace=args.trace, n_jobs=jobs)
    out = args.out
    write_manifest(out / "manifest.txt", config)
    write_summary_csv(out / "summary.csv",
                      [("", "", 0, config.agent_kind, summary)])
    if args.trace:
        write_trace_csv(out / "trace.csv", records)
    _print_summary(config.agent_kind, summary)
    print(f"wrote {out / 'summary.csv'}")
    return 0


def cmd_sweep(args) -> int:
    base = _resolve_config(args)
    values = _parse_values(args.param, args.values)
    spec = SweepSpec(parameter=args.param, values=values, base=base,
                     replicates=args.replicates)
    jobs = 1 if args.sequential else None
    results = run_sweep(spec, n_jobs=jobs)
    out = args.out
    write_manifest(out / "manifest.txt", base)
    entries = [(args.param, value, rep, cfg.agent_kind, summary)
               for value, rep, cfg, summary in results]
    write_summary_csv(out / "sweep.csv", entries)
    for value, rep, cfg, summary in results:
        _print_summary(f"{args.param}={value} rep={rep} {cfg.agent_kind}", summary)
    print(f"wrote {out / 'sweep.csv'}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        return cmd_sweep(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
