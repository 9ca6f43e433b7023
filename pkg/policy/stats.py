from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from oracle.strategy import Strategy
from utils.errors import InvalidObservationError


class PolicyKind(str, Enum):
    DFL = "dfl"
    LLR = "llr"
    MOSS = "moss"


@dataclass(frozen=True)
class ArmStats:
    """Observation summary of one arm; `empirical_mean` is None while the arm is cold."""

    plays: int = 0
    reward_sum: float = 0.0

    @property
    def is_cold(self) -> bool:
        """True until the arm is first observed."""
        return self.plays == 0

    @property
    def empirical_mean(self) -> Optional[float]:
        if self.plays == 0:
            return None
        return self.reward_sum / self.plays


@dataclass
class PolicyState:
    """Per-arm counts and reward sums.

    DFL and LLR keep exactly two length-K arrays. Only the naive MOSS baseline
    adds per-strategy counters, keyed by strategy.
    """

    kind: PolicyKind
    plays: np.ndarray
    reward_sums: np.ndarray
    round: int = 0
    horizon: Optional[int] = None
    strategy_stats: Optional[Dict[Strategy, List[float]]] = None

    @classmethod
    def fresh(cls, kind, num_arms: int, horizon: Optional[int] = None) -> "PolicyState":
        """Zeroed state; MOSS also gets an empty strategy table. `horizon` is the n naive MOSS reads."""
        kind = PolicyKind(kind)
        return cls(
            kind=kind,
            plays=np.zeros(num_arms, dtype=np.int64),
            reward_sums=np.zeros(num_arms, dtype=float),
            horizon=horizon,
            strategy_stats={} if kind == PolicyKind.MOSS else None,
        )

    @property
    def num_arms(self) -> int:
        """K, the number of tracked arms."""
        return int(self.plays.size)

    def arm(self, k: int) -> ArmStats:
        """Snapshot of arm k."""
        return ArmStats(plays=int(self.plays[k]), reward_sum=float(self.reward_sums[k]))

    @property
    def stats(self) -> List[ArmStats]:
        """Snapshots of every arm, in index order."""
        return [self.arm(k) for k in range(self.num_arms)]

    def empirical_means(self) -> np.ndarray:
        """Means of warm arms; cold entries are NaN."""
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(self.plays > 0, self.reward_sums / np.maximum(self.plays, 1), np.nan)

    def to_dict(self) -> dict:
        """JSON-ready dump of the counters."""
        state = {
            "kind": self.kind.value,
            "round": self.round,
            "plays": [int(p) for p in self.plays],
            "reward_sums": [float(r) for r in self.reward_sums],
        }
        if self.strategy_stats is not None:
            state["strategy_stats"] = {
                s.label(): [int(plays), float(total)] for s, (plays, total) in sorted(self.strategy_stats.items())
            }
        return state


def update_stats(state: PolicyState, observations: Iterable[Tuple[int, float]],
                 strategy: Optional[Strategy] = None) -> PolicyState:
    """Fold one round of semi-bandit feedback into the state."""
    observed = [(int(arm), float(reward)) for arm, reward in observations]
    for arm, reward in observed:
        if not 0 <= arm < state.num_arms:
            raise InvalidObservationError(f"arm index {arm} outside 0..{state.num_arms - 1}")
        if not 0.0 <= reward <= 1.0:
            raise InvalidObservationError(f"reward {reward} for arm {arm} outside [0, 1]")

    for arm, reward in observed:
        state.plays[arm] += 1
        state.reward_sums[arm] += reward

    if state.strategy_stats is not None:
        played = strategy if strategy is not None else Strategy.of(arm for arm, _ in observed)
        entry = state.strategy_stats.setdefault(played, [0, 0.0])
        entry[0] += 1
        entry[1] += sum(reward for _, reward in observed)

    state.round += 1
    return state
