"""Built-in experiment instances and the bridge from a RunConfig to runnable objects."""

from dataclasses import dataclass, replace
from typing import Optional

import networkx as nx
import numpy as np

from env.arms import Environment, make_environment, normalize_environment
from harness.config import InstanceKind, RunConfig, ScenarioName
from oracle.conflict import ConflictGraph, build_extended_conflict_graph
from oracle.paths import PathDirection, enumerate_paths
from oracle.problems import (
    ExhaustiveProblem,
    MWISProblem,
    OracleMode,
    OracleProblem,
    PathProblem,
    ThresholdSubsetProblem,
)
from oracle.strategy import Strategy
from policy.stats import PolicyKind
from utils.errors import ConfigError, InvalidGraphError, UnsupportedInstanceError

# Ad categories: (mean click-through rate, bid). The printed table labels the two
# columns the other way round; only this reading makes the 3000 threshold reachable.
AD_CATEGORIES = (
    (0.4506, 640.9853),
    (0.7279, 173.41842),
    (0.8377, 924.09434),
    (0.1662, 601.3466),
    (0.8055, 705.72878),
    (0.7732, 759.04837),
    (0.2179, 302.2392),
    (0.2688, 809.4084),
    (0.3722, 421.9816),
    (0.6971, 771.5156),
)
AD_THRESHOLD = 3000.0
AD_MAX_ARMS = 5
AD_OPTIMUM = 3.8414

CHANNEL_CONFLICTS = (
    (1, 1, 1, 1, 0),
    (1, 1, 1, 0, 1),
    (1, 1, 1, 1, 0),
    (1, 0, 1, 1, 0),
    (0, 1, 0, 0, 1),
)
# Average data rate of user i (row) on channel j (column).
CHANNEL_RATES = (
    (631.98, 369.81, 128.43, 191.70, 155.64),
    (432.00, 53.93, 598.08, 30.93, 551.52),
    (199.55, 26.00, 1175.17, 524.34, 147.69),
    (127.38, 53.73, 68.34, 937.44, 117.62),
    (311.04, 101.28, 171.95, 436.45, 62.19),
)
CHANNEL_OPTIMUM = 3732.56

# Demo network: s=0 -> {a=1, b=2} -> {c=3, d=4} -> t=5, every route three hops.
# Arm k is edge k; delays are mean link delays in [0, 1].
DEMO_EDGES = ((0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5))
DEMO_DELAYS = (0.30, 0.45, 0.40, 0.15, 0.35, 0.60, 0.50, 0.20)
DEMO_SOURCE = 0
DEMO_SINK = 5


@dataclass
class Experiment:
    """Everything one replication needs besides its seed."""

    template: Environment
    problem: OracleProblem
    scale: float
    # policy is fed 1 - reward (delays) and the oracle minimises
    loss_feedback: bool = False

    @property
    def num_arms(self) -> int:
        return self.template.num_arms

    def environment(self, seed: int) -> Environment:
        return Environment(arms=list(self.template.arms), seed=seed)


def _ad_instance() -> dict:
    return {
        "kind": InstanceKind.THRESHOLD_SUBSET.value,
        "means": [mean for mean, _ in AD_CATEGORIES],
        "bids": [bid for _, bid in AD_CATEGORIES],
        "threshold": AD_THRESHOLD,
        "max_arms": AD_MAX_ARMS,
    }


def _channel_instance() -> dict:
    return {
        "kind": InstanceKind.CHANNEL_ACCESS.value,
        "conflict": [list(row) for row in CHANNEL_CONFLICTS],
        "rates": [list(row) for row in CHANNEL_RATES],
    }


def _demo_path_instance() -> dict:
    return {
        "kind": InstanceKind.PATH.value,
        "edges": [list(edge) for edge in DEMO_EDGES],
        "source": DEMO_SOURCE,
        "sink": DEMO_SINK,
        "delays": list(DEMO_DELAYS),
    }


def enumerated_path_optimum(instance: dict) -> float:
    """Largest total gain (1 - delay) over every source-sink path, by enumeration."""
    problem = PathProblem(instance["edges"], instance["source"], instance["sink"], PathDirection.GAIN)
    gains = 1.0 - np.asarray(instance["delays"], dtype=float)
    return max(float(gains[list(path.arms)].sum()) for path in enumerate_paths(problem.graph))


def builtin_scenario(name: str) -> RunConfig:
    try:
        scenario = ScenarioName(name)
    except ValueError:
        scenario = None
    if scenario == ScenarioName.AD_PLACEMENT:
        return RunConfig(scenario=scenario, instance=_ad_instance(), reference_optimum=AD_OPTIMUM)
    if scenario == ScenarioName.CHANNEL_ACCESS:
        return RunConfig(scenario=scenario, instance=_channel_instance(), reference_optimum=CHANNEL_OPTIMUM)
    if scenario == ScenarioName.SHORTEST_PATH:
        instance = _demo_path_instance()
        return RunConfig(scenario=scenario, instance=instance, reference_optimum=enumerated_path_optimum(instance))

    names = ", ".join(s.value for s in ScenarioName if s != ScenarioName.CUSTOM)
    raise ConfigError("scenario", f"unknown built-in scenario {name!r} (expected one of {names})")


def _means_environment(instance: dict, config: RunConfig):
    if "raw_means" in instance:
        return normalize_environment(instance["raw_means"], config.family, config.halfwidth)
    scale = instance.get("scale", 1.0)
    return make_environment(instance["means"], config.family, config.halfwidth, scale=scale), scale


def _check_arm_count(problem: OracleProblem, env: Environment):
    if problem.num_arms != env.num_arms:
        raise UnsupportedInstanceError(
            f"instance has {env.num_arms} arm means but its feasible set spans {problem.num_arms} arms"
        )


def _independent_set_graph(num_nodes: int, edges) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(num_nodes))
    for u, v in edges:
        if u == v:
            raise InvalidGraphError(f"self-loop at node {u}")
        if u >= num_nodes or v >= num_nodes:
            raise InvalidGraphError(f"edge ({u}, {v}) leaves nodes 0..{num_nodes - 1}")
        graph.add_edge(u, v)
    return graph


def build_experiment(config: RunConfig, mode: Optional[OracleMode] = None) -> Experiment:
    """Environment template and oracle problem for a validated config."""
    instance = config.instance
    kind = InstanceKind(instance["kind"])
    mode = OracleMode(mode if mode is not None else config.oracle_mode)

    if kind == InstanceKind.EXHAUSTIVE:
        env, scale = _means_environment(instance, config)
        problem = ExhaustiveProblem([Strategy.of(s) for s in instance["strategies"]], num_arms=env.num_arms)
        return Experiment(env, problem, scale)

    if kind == InstanceKind.THRESHOLD_SUBSET:
        env, scale = _means_environment(instance, config)
        problem = ThresholdSubsetProblem(instance["bids"], instance["threshold"], instance["max_arms"])
        _check_arm_count(problem, env)
        return Experiment(env, problem, scale)

    if kind == InstanceKind.PATH:
        direction = PathDirection(config.path_direction)
        problem = PathProblem(instance["edges"], instance["source"], instance["sink"], direction)
        gains = 1.0 - np.asarray(instance["delays"], dtype=float)
        env = make_environment(gains, config.family, config.halfwidth)
        _check_arm_count(problem, env)
        return Experiment(env, problem, 1.0, loss_feedback=direction == PathDirection.LITERAL)

    if kind == InstanceKind.MWIS:
        env, scale = _means_environment(instance, config)
        graph = _independent_set_graph(env.num_arms, instance["edges"])
        return Experiment(env, MWISProblem(graph, mode, instance.get("max_size")), scale)

    conflicts = ConflictGraph.from_rows(instance["conflict"], channels=len(instance["rates"][0]))
    if len(instance["rates"]) != conflicts.users:
        raise InvalidGraphError(
            f"rate matrix has {len(instance['rates'])} users but the conflict matrix has {conflicts.users}"
        )
    env, scale = normalize_environment(instance["rates"], config.family, config.halfwidth)
    graph = build_extended_conflict_graph(conflicts)
    return Experiment(env, MWISProblem(graph, mode, max_size=conflicts.users), scale)


def with_policy(config: RunConfig, policy) -> RunConfig:
    """Copy of the config running a different policy (same instance and seeds)."""
    return replace(config, policy=PolicyKind(policy))
