"""Run configuration: the JSON document accepted by `run` and `compare`.

Every validation failure raises ConfigError carrying the JSON path of the
offending value, e.g. ``instance.bids[3]``.
"""

import json
import numbers
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

from env.arms import RewardFamily
from oracle.paths import PathDirection
from oracle.problems import OracleMode
from policy.stats import PolicyKind
from utils.errors import BanditError, ConfigError

SEED_MIN = -(1 << 63)
SEED_MAX = (1 << 64) - 1

DEFAULT_HORIZON = 2000
DEFAULT_REPLICATIONS = 20
DEFAULT_SEED = 20130
DEFAULT_HALFWIDTH = 0.1


class ScenarioName(str, Enum):
    AD_PLACEMENT = "ad_placement"
    SHORTEST_PATH = "shortest_path_demo"
    CHANNEL_ACCESS = "channel_access"
    CUSTOM = "custom"


class InstanceKind(str, Enum):
    EXHAUSTIVE = "exhaustive"
    THRESHOLD_SUBSET = "threshold_subset"
    PATH = "path"
    MWIS = "mwis"
    CHANNEL_ACCESS = "channel_access"


@dataclass
class RunConfig:
    scenario: ScenarioName
    policy: PolicyKind = PolicyKind.DFL
    oracle_mode: OracleMode = OracleMode.EXACT
    horizon: int = DEFAULT_HORIZON
    replications: int = DEFAULT_REPLICATIONS
    seed: int = DEFAULT_SEED
    family: RewardFamily = RewardFamily.BERNOULLI
    halfwidth: float = DEFAULT_HALFWIDTH
    path_direction: PathDirection = PathDirection.GAIN
    instance: Dict[str, Any] = field(default_factory=dict)
    # published optimum in raw units, when one exists
    reference_optimum: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario.value,
            "policy": self.policy.value,
            "oracle_mode": self.oracle_mode.value,
            "horizon": self.horizon,
            "replications": self.replications,
            "seed": self.seed,
            "family": self.family.value,
            "halfwidth": self.halfwidth,
            "path_direction": self.path_direction.value,
            "instance": self.instance,
            "reference_optimum": self.reference_optimum,
        }


def _enum(enum_cls, data, key, default):
    if key not in data:
        return default
    try:
        return enum_cls(data[key])
    except ValueError:
        choices = ", ".join(member.value for member in enum_cls)
        raise ConfigError(key, f"expected one of {choices}, got {data[key]!r}")


def _integer(value, path, minimum=None, maximum=None) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(path, f"must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ConfigError(path, f"must be <= {maximum}, got {value}")
    return int(value)


def _real(value, path, minimum=None, maximum=None) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ConfigError(path, f"expected a number, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(path, f"must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ConfigError(path, f"must be <= {maximum}, got {value}")
    return float(value)


def _list(value, path, allow_empty=False) -> list:
    if not isinstance(value, list):
        raise ConfigError(path, f"expected a list, got {type(value).__name__}")
    if not value and not allow_empty:
        raise ConfigError(path, "must not be empty")
    return value


def _reals(data, key, path, minimum=None, maximum=None) -> list:
    values = _list(data.get(key), f"{path}.{key}")
    return [_real(v, f"{path}.{key}[{i}]", minimum, maximum) for i, v in enumerate(values)]


def _matrix(data, key, path, minimum=None, maximum=None) -> list:
    rows = _list(data.get(key), f"{path}.{key}")
    width = None
    result = []
    for i, row in enumerate(rows):
        row_path = f"{path}.{key}[{i}]"
        row = _list(row, row_path)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ConfigError(row_path, f"expected {width} entries, got {len(row)}")
        result.append([_real(v, f"{row_path}[{j}]", minimum, maximum) for j, v in enumerate(row)])
    return result


def _pairs(data, key, path) -> list:
    pairs = _list(data.get(key), f"{path}.{key}", allow_empty=True)
    result = []
    for i, pair in enumerate(pairs):
        pair_path = f"{path}.{key}[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError(pair_path, "expected a [u, v] pair")
        result.append([_integer(v, f"{pair_path}[{j}]", minimum=0) for j, v in enumerate(pair)])
    return result


def _arm_means(data, path) -> Dict[str, Any]:
    if "means" in data and "raw_means" in data:
        raise ConfigError(path, "give either means or raw_means, not both")
    if "means" in data:
        checked = {"means": _reals(data, "means", path, 0.0, 1.0)}
        if "scale" in data:
            checked["scale"] = _real(data["scale"], f"{path}.scale")
            if checked["scale"] <= 0:
                raise ConfigError(f"{path}.scale", "must be positive")
        return checked
    if "raw_means" in data:
        return {"raw_means": _reals(data, "raw_means", path, 0.0)}
    raise ConfigError(f"{path}.means", "missing (or give raw_means)")


def validate_instance(instance: Dict[str, Any], path: str = "instance") -> Dict[str, Any]:
    """Type and range checks of an instance payload; returns a normalised copy."""
    if not isinstance(instance, dict):
        raise ConfigError(path, "expected an object")
    kind = _enum(InstanceKind, instance, "kind", None)
    if kind is None:
        raise ConfigError(f"{path}.kind", "missing")

    checked: Dict[str, Any] = {"kind": kind.value}
    if kind == InstanceKind.EXHAUSTIVE:
        checked.update(_arm_means(instance, path))
        strategies = _list(instance.get("strategies"), f"{path}.strategies")
        checked["strategies"] = [
            [_integer(a, f"{path}.strategies[{i}][{j}]", minimum=0) for j, a in enumerate(_list(s, f"{path}.strategies[{i}]"))]
            for i, s in enumerate(strategies)
        ]
    elif kind == InstanceKind.THRESHOLD_SUBSET:
        checked.update(_arm_means(instance, path))
        checked["bids"] = _reals(instance, "bids", path, 0.0)
        checked["threshold"] = _real(instance.get("threshold"), f"{path}.threshold")
        checked["max_arms"] = _integer(instance.get("max_arms"), f"{path}.max_arms", minimum=1)
    elif kind == InstanceKind.PATH:
        checked["edges"] = _pairs(instance, "edges", path)
        if not checked["edges"]:
            raise ConfigError(f"{path}.edges", "must not be empty")
        checked["source"] = _integer(instance.get("source"), f"{path}.source", minimum=0)
        checked["sink"] = _integer(instance.get("sink"), f"{path}.sink", minimum=0)
        checked["delays"] = _reals(instance, "delays", path, 0.0, 1.0)
    elif kind == InstanceKind.MWIS:
        checked.update(_arm_means(instance, path))
        checked["edges"] = _pairs(instance, "edges", path)
        if "max_size" in instance:
            checked["max_size"] = _integer(instance["max_size"], f"{path}.max_size", minimum=1)
    else:
        checked["conflict"] = _matrix(instance, "conflict", path, 0.0, 1.0)
        checked["rates"] = _matrix(instance, "rates", path, 0.0)

    return checked


def parse_run_config(data: Dict[str, Any]) -> RunConfig:
    """Validate a decoded JSON document and build the RunConfig."""
    from harness.scenarios import build_experiment, builtin_scenario

    if not isinstance(data, dict):
        raise ConfigError("<root>", "expected a JSON object")
    if "scenario" not in data:
        raise ConfigError("scenario", "missing")
    scenario = _enum(ScenarioName, data, "scenario", None)

    if scenario == ScenarioName.CUSTOM:
        if "instance" not in data:
            raise ConfigError("instance", "required for the custom scenario")
        config = RunConfig(scenario=scenario, instance=validate_instance(data["instance"]))
    else:
        config = builtin_scenario(scenario.value)
        if "instance" in data:
            if not isinstance(data["instance"], dict):
                raise ConfigError("instance", "expected an object")
            merged = dict(config.instance)
            merged.update(data["instance"])
            config.instance = validate_instance(merged)

    config.policy = _enum(PolicyKind, data, "policy", config.policy)
    config.oracle_mode = _enum(OracleMode, data, "oracle_mode", config.oracle_mode)
    config.family = _enum(RewardFamily, data, "family", config.family)
    config.path_direction = _enum(PathDirection, data, "path_direction", config.path_direction)
    if "horizon" in data:
        config.horizon = _integer(data["horizon"], "horizon", minimum=1)
    if "replications" in data:
        config.replications = _integer(data["replications"], "replications", minimum=1)
    if "seed" in data:
        config.seed = _integer(data["seed"], "seed", SEED_MIN, SEED_MAX)
    if "halfwidth" in data:
        config.halfwidth = _real(data["halfwidth"], "halfwidth", 0.0, 0.5)
    if "reference_optimum" in data:
        config.reference_optimum = (
            None if data["reference_optimum"] is None else _real(data["reference_optimum"], "reference_optimum")
        )

    if config.oracle_mode == OracleMode.GREEDY and config.instance["kind"] not in (
        InstanceKind.MWIS.value,
        InstanceKind.CHANNEL_ACCESS.value,
    ):
        raise ConfigError("oracle_mode", "greedy is only available for independent-set instances")

    try:
        build_experiment(config)
    except ConfigError:
        raise
    except BanditError as exc:
        raise ConfigError("instance", str(exc)) from exc
    return config


def load_run_config(path) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("<root>", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_run_config(data)
