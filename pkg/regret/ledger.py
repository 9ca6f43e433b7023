from dataclasses import dataclass, field
from typing import List, Tuple

from env.arms import Environment
from oracle.problems import OracleProblem, maximize
from oracle.strategy import Strategy
from utils.errors import BoundDomainError, SequencingError


@dataclass(frozen=True)
class TraceRow:
    """One row of trace.csv: the round played and the running averages after it."""

    replication: int
    t: int
    strategy: Strategy
    reward: float
    cum_reward: float
    avg_regret: float
    avg_beta_regret: float


@dataclass
class RegretLedger:
    """Running regret of one replication, in normalised units.

    avg_regret(t) = lambda1 - cum_reward / t and
    avg_beta_regret(t) = lambda1 / beta - cum_reward / t.
    """

    lambda1: float
    beta: float = 1.0
    scale: float = 1.0
    replication: int = 0
    cum_reward: float = 0.0
    per_round: List[TraceRow] = field(default_factory=list)

    def __post_init__(self):
        if self.beta < 1.0:
            raise BoundDomainError(f"beta must be >= 1, got {self.beta}")

    @property
    def last_t(self) -> int:
        """Last recorded round, 0 before the first."""
        return self.per_round[-1].t if self.per_round else 0

    def empirical_regret(self) -> float:
        """t * avg_regret at the last recorded round (realised regret)."""
        if not self.per_round:
            return 0.0
        last = self.per_round[-1]
        return last.t * last.avg_regret


def static_optimum(env: Environment, problem: OracleProblem) -> Tuple[Strategy, float]:
    """Best fixed strategy under the true means, solved exactly."""
    result = maximize(problem.optimum_problem(), env.means())
    return result.strategy, result.value


def record_round(ledger: RegretLedger, t: int, strategy: Strategy, reward: float) -> RegretLedger:
    """Append round t; rounds must arrive in strictly increasing order."""
    if t <= ledger.last_t:
        raise SequencingError(f"round {t} recorded after round {ledger.last_t}")
    ledger.cum_reward += reward
    average = ledger.cum_reward / t
    ledger.per_round.append(
        TraceRow(
            replication=ledger.replication,
            t=t,
            strategy=strategy,
            reward=reward,
            cum_reward=ledger.cum_reward,
            avg_regret=ledger.lambda1 - average,
            avg_beta_regret=ledger.lambda1 / ledger.beta - average,
        )
    )
    return ledger
