"""Per-arm optimistic indices. A cold arm (no observations) always gets +inf."""

import math

import numpy as np

from policy.stats import ArmStats, PolicyState

INF = float("inf")


def dfl_bonus(plays: int, t: float, K: int) -> float:
    """sqrt(max(ln(t^(2/3) / (K m)), 0) / m); zero exactly when t^(2/3) <= K m."""
    t23 = t ** (2.0 / 3.0)
    if t23 <= K * plays:
        return 0.0
    return math.sqrt(math.log(t23 / (K * plays)) / plays)


def dfl_index(stats: ArmStats, t: float, K: int) -> float:
    """Empirical mean plus the horizon-free DFL bonus."""
    if stats.plays == 0:
        return INF
    return stats.empirical_mean + dfl_bonus(stats.plays, t, K)


def llr_index(stats: ArmStats, t: float, N: int) -> float:
    """Empirical mean plus sqrt((N + 1) ln t / m)."""
    if stats.plays == 0:
        return INF
    return stats.empirical_mean + math.sqrt((N + 1) * math.log(t) / stats.plays)


def moss_index(plays: int, mean: float, n: int, kappa: int) -> float:
    """Strategy-level MOSS index with known horizon n over kappa strategies."""
    if plays == 0:
        return INF
    ratio = n / (kappa * plays)
    bonus = math.sqrt(math.log(ratio) / plays) if ratio > 1.0 else 0.0
    return mean + bonus


def dfl_indices(state: PolicyState, t: float, K: int) -> np.ndarray:
    """Vectorised dfl_index over every arm of the state."""
    plays = state.plays.astype(float)
    warm = plays > 0
    safe = np.where(warm, plays, 1.0)
    t23 = t ** (2.0 / 3.0)
    explore = warm & (t23 > K * plays)
    with np.errstate(divide="ignore", invalid="ignore"):
        bonus = np.where(explore, np.sqrt(np.log(np.where(explore, t23 / (K * safe), 1.0)) / safe), 0.0)
    return np.where(warm, state.reward_sums / safe + bonus, np.inf)


def llr_indices(state: PolicyState, t: float, N: int) -> np.ndarray:
    """Vectorised llr_index over every arm of the state."""
    plays = state.plays.astype(float)
    warm = plays > 0
    safe = np.where(warm, plays, 1.0)
    bonus = np.sqrt((N + 1) * math.log(t) / safe)
    return np.where(warm, state.reward_sums / safe + bonus, np.inf)
