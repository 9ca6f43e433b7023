from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from env.rng import uniform_draw
from utils.errors import DegenerateEnvironmentError, InvalidArmError, InvalidStrategyError

# round-off allowed when a clipped half-width touches 0 or 1
SUPPORT_SLACK = 1e-12


class RewardFamily(str, Enum):
    BERNOULLI = "bernoulli"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class ArmModel:
    """One stochastic arm: i.i.d. rewards on [0, 1] with the given mean.

    `scale` maps a normalised value back to application units (e.g. data rate).
    """

    mean: float
    family: RewardFamily = RewardFamily.BERNOULLI
    halfwidth: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.mean <= 1.0:
            raise InvalidArmError(f"arm mean {self.mean} outside [0, 1]")
        if self.scale <= 0:
            raise InvalidArmError(f"arm scale must be positive, got {self.scale}")
        if self.family == RewardFamily.UNIFORM:
            if self.halfwidth < 0:
                raise InvalidArmError(f"negative halfwidth {self.halfwidth}")
            if self.mean - self.halfwidth < -SUPPORT_SLACK or self.mean + self.halfwidth > 1.0 + SUPPORT_SLACK:
                raise InvalidArmError(
                    f"support [{self.mean - self.halfwidth}, {self.mean + self.halfwidth}] leaves [0, 1]"
                )

    def expected_value(self) -> float:
        return self.mean

    def sample(self, u: float) -> float:
        """Map a uniform draw u in [0, 1) to a reward."""
        if self.family == RewardFamily.BERNOULLI:
            return 1.0 if u < self.mean else 0.0
        value = self.mean + self.halfwidth * (2.0 * u - 1.0)
        return min(1.0, max(0.0, value))


@dataclass
class Environment:
    """K arms, fixed order, sampled deterministically from (seed, round, arm)."""

    arms: List[ArmModel]
    seed: int = 0
    round: int = 0

    def __post_init__(self):
        if not self.arms:
            raise DegenerateEnvironmentError("an environment needs at least one arm")

    @property
    def num_arms(self) -> int:
        return len(self.arms)

    @property
    def scale(self) -> float:
        return self.arms[0].scale

    def means(self) -> np.ndarray:
        return np.array([arm.mean for arm in self.arms], dtype=float)

    def reset(self, seed: Optional[int] = None) -> "Environment":
        if seed is not None:
            self.seed = seed
        self.round = 0
        return self


def sample_round(env: Environment, selected: Sequence[int]) -> List[Tuple[int, float]]:
    """Advance one round and draw one reward per selected arm (semi-bandit feedback)."""
    arms = list(selected)
    for arm in arms:
        if not 0 <= arm < env.num_arms:
            raise InvalidStrategyError(f"arm index {arm} outside 0..{env.num_arms - 1}")
    env.round += 1
    return [
        (arm, env.arms[arm].sample(uniform_draw(env.seed, env.round, arm)))
        for arm in arms
    ]


def make_environment(means, family=RewardFamily.BERNOULLI, halfwidth: float = 0.0,
                     scale: float = 1.0, seed: int = 0) -> Environment:
    """Environment over already normalised means.

    Uniform half-widths are clipped per arm to min(halfwidth, mean, 1 - mean).
    """
    family = RewardFamily(family)
    arms = []
    for value in np.asarray(means, dtype=float).ravel():
        mean = float(value)
        width = min(halfwidth, mean, 1.0 - mean) if family == RewardFamily.UNIFORM else 0.0
        arms.append(ArmModel(mean=mean, family=family, halfwidth=max(width, 0.0), scale=scale))
    return Environment(arms=arms, seed=seed)


def normalize_environment(raw_means, family=RewardFamily.BERNOULLI, halfwidth: float = 0.0,
                          seed: int = 0) -> Tuple[Environment, float]:
    """Divide raw (nonnegative) means by their maximum.

    Matrices are flattened row-major, so entry (i, j) of an N x M matrix becomes arm i*M + j.
    """
    raw = np.asarray(raw_means, dtype=float).ravel()
    if raw.size == 0 or np.any(raw < 0):
        raise DegenerateEnvironmentError("raw means must be a nonempty list of nonnegative values")
    scale = float(raw.max())
    if scale <= 0:
        raise DegenerateEnvironmentError("all raw means are zero")
    return make_environment(raw / scale, family, halfwidth, scale=scale, seed=seed), scale
