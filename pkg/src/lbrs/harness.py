"""Experiment driver: sessions, runs, parameter sweeps, and file output.

A run simulates N independent user sessions.  All randomness is derived
from (seed, user id), so sessions can execute in parallel and the output
is byte-identical regardless of worker count.  The EpsGreedy agent
shares its value estimates across sessions and therefore always runs
sequentially, in user order.

Output files:
  summary.csv  one row per run (sweeps: one row per parameter value and
               replicate), floats printed with six decimals
  trace.csv    optional per-step records
  manifest.txt resolved configuration, one ``key = value`` line per field
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional, Sequence

from .agents import make_agent
from .core import (
    ConfigurationError,
    Corpus,
    SimConfig,
    agent_rng,
    build_corpus,
    spawn_user,
    sweep_seed,
    user_rng,
)
from .environment import step as env_step
from .metrics import (
    RunSummary,
    StepRecord,
    UserAccumulator,
    bls,
    diversity_score,
    ils,
    summarize_user_rows,
)

MAX_SESSION_STEPS = 1_000_000

SWEEPABLE_PARAMETERS = {
    "p": float,
    "k": int,
    "lambda": float,
    "q_threshold": float,
    "M": int,
    "agent_kind": str,
}

SUMMARY_COLUMNS = (
    "parameter", "value", "replicate", "agent",
    "avg_reward_step", "avg_reward_session", "avg_diversity",
    "avg_ils", "avg_bls", "mean_session_len",
    "ci_reward_step", "ci_reward_session", "ci_diversity",
    "ci_ils", "ci_bls", "ci_session_len",
)

TRACE_COLUMNS = ("user_id", "step", "slate", "chosen", "reward", "ils", "bls", "d_score")


def run_session(config: SimConfig, corpus: Corpus, agent, user_id: int,
                collect: bool = False):
    """Simulate one user session; returns (accumulator row, records or None)."""
    env = user_rng(config, user_id)
    arng = agent_rng(config, user_id)
    user = spawn_user(config, user_id, env)
    agent.begin_session()
    acc = UserAccumulator(user_id)
    records: Optional[list[StepRecord]] = [] if collect else None
    prev_slate = None
    t = 0
    while user.budget >= config.len_doc:
        t += 1
        if t > MAX_SESSION_STEPS:
            raise RuntimeError(f"session for user {user_id} exceeded {MAX_SESSION_STEPS} steps")
        slate = agent.next_slate(arng)
        if len(slate) == 0:
            # probabilistic election may come up empty; the user sees nothing
            user.budget -= config.len_null
            chosen, reward = None, 0.0
            ils_v = bls_v = d_v = None
        else:
            outcome = env_step(user, slate, corpus, config, env)
            chosen, reward = outcome.chosen, outcome.reward
            ils_v = ils(slate, corpus)
            bls_v = bls(prev_slate, slate, corpus, config.k) if prev_slate else None
            d_v = diversity_score(ils_v, bls_v, config)
            prev_slate = slate
        agent.observe(slate, chosen)
        acc.add(reward, ils_v, bls_v, d_v)
        if records is not None:
            records.append(StepRecord(
                user_id=user_id, step=t, slate=slate.items, chosen=chosen,
                reward=reward, ils=ils_v, bls=bls_v, d_score=d_v))
    return acc.as_row(), records


def _run_block(config: SimConfig, lo: int, hi: int, collect: bool):
    corpus = build_corpus(config)
    agent = make_agent(config, corpus)
    rows, records = [], ([] if collect else None)
    for user_id in range(lo, hi):
        row, recs = run_session(config, corpus, agent, user_id, collect)
        rows.append(row)
        if collect:
            records.extend(recs)
    return rows, records


def run_experiment(config: SimConfig, collect_trace: bool = False,
                   n_jobs: Optional[int] = None):
    """Simulate all N sessions; returns (RunSummary, trace records or None).

    ``n_jobs=None`` picks the CPU count; the EpsGreedy agent is always
    run on a single worker because its estimates are shared state.
    """
    config.validate()
    if config.agent_kind == "EpsGreedy":
        jobs = 1
    else:
        jobs = n_jobs if n_jobs is not None else (os.cpu_count() or 1)
    jobs = max(1, min(jobs, config.N))

    if jobs == 1:
        rows, records = _run_block(config, 0, config.N, collect_trace)
    else:
        block = math.ceil(config.N / (jobs * 4))
        bounds = [(lo, min(lo + block, config.N)) for lo in range(0, config.N, block)]
        rows, records = [], ([] if collect_trace else None)
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            parts = executor.map(_run_block, *zip(*[(config, lo, hi, collect_trace)
                                                    for lo, hi in bounds]))
            for part_rows, part_records in parts:
                rows.extend(part_rows)
                if collect_trace:
                    records.extend(part_records)
    return summarize_user_rows(rows), records


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter sweep: rerun the base config at each value."""

    parameter: str
    values: tuple
    base: SimConfig
    replicates: int = 1

    def __post_init__(self):
        if self.parameter not in SWEEPABLE_PARAMETERS:
            raise ConfigurationError(
                f"parameter must be one of {', '.join(SWEEPABLE_PARAMETERS)}"
                f" (got {self.parameter!r})")
        if not self.values:
            raise ConfigurationError("values must be non-empty")
        if self.replicates < 1:
            raise ConfigurationError("replicates must be >= 1")

    def configs(self):
        """Yield (value, replicate, config) in sweep order."""
        attr = "lambda_" if self.parameter == "lambda" else self.parameter
        for vi, value in enumerate(self.values):
            for rep in range(self.replicates):
                seed = sweep_seed(self.base.seed, vi, rep)
                yield value, rep, self.base.replace(**{attr: value, "seed": seed})


def run_sweep(spec: SweepSpec, collect_trace: bool = False,
              n_jobs: Optional[int] = None):
    """Run every sweep cell; returns list of (value, replicate, config, summary)."""
    out = []
    for value, rep, config in spec.configs():
        summary, _ = run_experiment(config, collect_trace=False, n_jobs=n_jobs)
        out.append((value, rep, config, summary))
    return out


# -- serialization ----------------------------------------------------------

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "" if math.isnan(x) else f"{x:.6f}"
    return str(x)


def summary_csv_rows(entries) -> list[list[str]]:
    """entries: iterable of (parameter, value, replicate, agent, RunSummary)."""
    rows = [list(SUMMARY_COLUMNS)]
    for parameter, value, replicate, agent, s in entries:
        rows.append([
            parameter, _fmt(value), str(replicate), agent,
            _fmt(s.avg_reward_step), _fmt(s.avg_reward_session), _fmt(s.avg_diversity),
            _fmt(s.avg_ils), _fmt(s.avg_bls), _fmt(s.mean_session_len),
            _fmt(s.ci_reward_step), _fmt(s.ci_reward_session), _fmt(s.ci_diversity),
            _fmt(s.ci_ils), _fmt(s.ci_bls), _fmt(s.ci_session_len),
        ])
    return rows


def write_csv(path: Path, rows: Sequence[Sequence[str]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)


def write_summary_csv(path: Path, entries) -> None:
    write_csv(path, summary_csv_rows(entries))


def write_trace_csv(path: Path, records: Sequence[StepRecord]) -> None:
    rows = [list(TRACE_COLUMNS)]
    for r in records:
        rows.append([
            str(r.user_id), str(r.step), ";".join(str(i) for i in r.slate),
            "" if r.chosen is None else str(r.chosen),
            _fmt(float(r.reward)), _fmt(r.ils), _fmt(r.bls), _fmt(r.d_score),
        ])
    write_csv(path, rows)


def _file_key(field_name: str) -> str:
    return "lambda" if field_name == "lambda_" else field_name


def config_to_manifest(config: SimConfig) -> str:
    lines = []
    for f in fields(config):
        if not f.init:
            continue
        value = getattr(config, f.name)
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = repr(value)
        else:
            text = str(value)
        lines.append(f"{_file_key(f.name)} = {text}")
    return "\n".join(lines) + "\n"


def write_manifest(path: Path, config: SimConfig) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(config_to_manifest(config))


def parse_config_text(text: str, base: Optional[SimConfig] = None) -> SimConfig:
    """Parse ``key = value`` lines (``#`` comments allowed) into a SimConfig."""
    field_by_key = {_file_key(f.name): f for f in fields(SimConfig) if f.init}
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in field_by_key:
            raise ConfigurationError(f"line {lineno}: unknown config key {key!r}")
        overrides[field_by_key[key].name] = _parse_value(key, value)
    base = base if base is not None else SimConfig()
    return base.replace(**overrides) if overrides else base


def _parse_value(key: str, value: str):
    if key in ("N", "M", "T", "k", "seed"):
        return int(value)
    if key == "agent_kind":
        return value
    if key == "deterministic_k":
        low = value.lower()
        if low not in ("true", "false"):
            raise ConfigurationError(f"{key} must be true or false (got {value!r})")
        return low == "true"
    try:
        return float(value)
    except ValueError as exc:
        raise ConfigurationError(f"{key}: cannot parse {value!r} as a number") from exc


def load_config_file(path: Path, base: Optional[SimConfig] = None) -> SimConfig:
    return parse_config_text(Path(path).read_text(), base)
