"""Replicated simulation runs, policy comparisons and their CSV outputs."""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from env.arms import sample_round
from env.rng import replication_seed
from harness.config import RunConfig
from harness.scenarios import Experiment, build_experiment, with_policy
from oracle.problems import enumerate_strategies
from oracle.strategy import Strategy
from policy.selector import naive_moss_select, select_strategy
from policy.stats import PolicyKind, PolicyState, update_stats
from regret.ledger import RegretLedger, TraceRow, record_round, static_optimum
from utils.errors import BanditError, ConfigError, SimulationError
from utils.logger import logger

TRACE_COLUMNS = ["replication", "t", "strategy", "reward", "cum_reward", "avg_regret", "avg_beta_regret"]
SUMMARY_COLUMNS = ["t", "mean_avg_regret", "mean_avg_beta_regret"]
UNIT_COLUMNS = ["reward", "cum_reward", "avg_regret", "avg_beta_regret", "mean_avg_regret", "mean_avg_beta_regret"]
FLOAT_FORMAT = "%.9g"
REFERENCE_TOLERANCE = 5e-3


@dataclass
class RunSummary:
    """Per-round means across replications plus the run's anchors."""

    frame: pd.DataFrame
    lambda1: float
    beta: float
    scale: float
    policy: str
    oracle: str
    optimum: Strategy
    empirical_regrets: List[float] = field(default_factory=list)

    def metadata_line(self) -> str:
        return (
            f"# lambda1={FLOAT_FORMAT % self.lambda1},beta={FLOAT_FORMAT % self.beta},"
            f"scale={FLOAT_FORMAT % self.scale},policy={self.policy},oracle={self.oracle}"
        )


def _workers() -> int:
    try:
        return max(1, int(os.getenv("SIM_WORKERS", "1")))
    except ValueError:
        logger.warning("SIM_WORKERS is not an integer, running replications sequentially")
        return 1


def _oracle_label(config: RunConfig, experiment: Experiment) -> str:
    return f"{experiment.problem.variant}-{config.oracle_mode.value}"


def check_reference(config: RunConfig, lambda1: float, scale: float):
    if config.reference_optimum is None:
        return
    raw = lambda1 * scale
    if abs(raw - config.reference_optimum) > REFERENCE_TOLERANCE:
        logger.warning(
            f"Static optimum {raw:.6f} differs from the reference {config.reference_optimum:.6f}"
        )


def _run_replication(config: RunConfig, experiment: Experiment, lambda1: float,
                     strategies: Optional[List[Strategy]], replication: int) -> RegretLedger:
    seed = replication_seed(config.seed, replication)
    env = experiment.environment(seed)
    problem = experiment.problem
    state = PolicyState.fresh(config.policy, env.num_arms, config.horizon)
    beta = problem.beta if strategies is None else 1.0
    ledger = RegretLedger(lambda1=lambda1, beta=beta, scale=experiment.scale, replication=replication)
    logger.log_replication_start(replication, seed, config.policy.value)

    t = 0
    try:
        for t in range(1, config.horizon + 1):
            if strategies is not None:
                strategy = naive_moss_select(state, strategies, t)
            else:
                strategy = select_strategy(state, problem, t)
            observations = sample_round(env, strategy.arms)
            reward = sum(r for _, r in observations)
            if experiment.loss_feedback and strategies is None:
                feedback = [(arm, 1.0 - r) for arm, r in observations]
            else:
                feedback = observations
            update_stats(state, feedback, strategy)
            record_round(ledger, t, strategy, reward)
            logger.log_round(replication, t, strategy, reward)
    except BanditError as exc:
        logger.error(f"Replication {replication} aborted at round {t}: {exc}")
        raise SimulationError(replication, t, exc) from exc

    logger.log_replication_end(replication, ledger.per_round[-1].avg_regret)
    return ledger


def run(config: RunConfig) -> Tuple[List[TraceRow], RunSummary]:
    """All replications of one config; rows ordered by replication, then t."""
    experiment = build_experiment(config)
    optimum, lambda1 = static_optimum(experiment.template, experiment.problem)
    strategies = enumerate_strategies(experiment.problem) if config.policy == PolicyKind.MOSS else None
    check_reference(config, lambda1, experiment.scale)

    replications = range(config.replications)
    workers = min(_workers(), config.replications)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            ledgers = list(pool.map(
                lambda r: _run_replication(config, experiment, lambda1, strategies, r), replications
            ))
    else:
        ledgers = [_run_replication(config, experiment, lambda1, strategies, r) for r in replications]

    traces = [row for ledger in ledgers for row in ledger.per_round]
    frame = traces_frame(traces)
    means = (
        frame.groupby("t", sort=True)[["avg_regret", "avg_beta_regret"]]
        .mean()
        .reset_index()
        .rename(columns={"avg_regret": "mean_avg_regret", "avg_beta_regret": "mean_avg_beta_regret"})
    )
    summary = RunSummary(
        frame=means[SUMMARY_COLUMNS],
        lambda1=lambda1,
        beta=ledgers[0].beta,
        scale=experiment.scale,
        policy=config.policy.value,
        oracle=_oracle_label(config, experiment),
        optimum=optimum,
        empirical_regrets=[ledger.empirical_regret() for ledger in ledgers],
    )
    logger.info(
        f"Run finished - policy: {summary.policy}, oracle: {summary.oracle}, "
        f"replications: {config.replications}, final mean avg regret: {means['mean_avg_regret'].iloc[-1]:.6g}"
    )
    return traces, summary


def run_compare(config: RunConfig, policies: Sequence[str], raw_units: bool = False) -> pd.DataFrame:
    """Run each policy on the same instance and seeds; one column pair per policy."""
    names = [p.strip() for p in policies if p.strip()]
    if len(names) < 2:
        raise ConfigError("policies", "compare needs at least two policies")
    if len(set(names)) != len(names):
        raise ConfigError("policies", "policy names must be distinct")
    try:
        kinds = [PolicyKind(name) for name in names]
    except ValueError:
        raise ConfigError("policies", f"unknown policy in {','.join(names)} (expected dfl, llr, moss)")

    joined = None
    for kind in kinds:
        _, summary = run(with_policy(config, kind))
        frame = summary.frame.rename(columns={
            "mean_avg_regret": f"mean_avg_regret_{kind.value}",
            "mean_avg_beta_regret": f"mean_avg_beta_regret_{kind.value}",
        })
        if raw_units:
            value_columns = [c for c in frame.columns if c != "t"]
            frame[value_columns] = frame[value_columns] * summary.scale
        joined = frame if joined is None else joined.merge(frame, on="t", how="outer")
    return joined.sort_values("t").reset_index(drop=True)


def traces_frame(traces: Sequence[TraceRow], scale: float = 1.0) -> pd.DataFrame:
    frame = pd.DataFrame(
        [
            (row.replication, row.t, row.strategy.label(), row.reward, row.cum_reward,
             row.avg_regret, row.avg_beta_regret)
            for row in traces
        ],
        columns=TRACE_COLUMNS,
    )
    if scale != 1.0:
        frame = _to_raw_units(frame, scale)
    return frame


def _to_raw_units(frame: pd.DataFrame, scale: float) -> pd.DataFrame:
    frame = frame.copy()
    columns = [c for c in UNIT_COLUMNS if c in frame.columns]
    frame[columns] = frame[columns] * scale
    return frame


def write_trace_csv(traces: Sequence[TraceRow], path, scale: float = 1.0):
    traces_frame(traces, scale).to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_summary_csv(summary: RunSummary, path, raw_units: bool = False):
    frame = _to_raw_units(summary.frame, summary.scale) if raw_units else summary.frame
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(summary.metadata_line() + "\n")
        frame.to_csv(handle, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_compare_csv(frame: pd.DataFrame, path):
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
