"""Closed-form regret bounds of the DFL policy and its beta-approximation variant.

Each expression is written term by term in the order it is printed, constants
included. `lemma1_terms` and `lemma3_terms` expose the individual summands.
"""

import math
from typing import NamedTuple

from utils.errors import BoundDomainError

E = math.e


class BoundTerms(NamedTuple):
    constant: float
    n_two_thirds: float
    n_three_quarters: float
    n_five_sixths: float

    @property
    def total(self) -> float:
        return self.constant + self.n_two_thirds + self.n_three_quarters + self.n_five_sixths


def _positive(**values):
    for name, value in values.items():
        if not value > 0:
            raise BoundDomainError(f"{name} must be positive, got {value}")


def _gap(name, delta, N):
    if not 0 < delta <= N:
        raise BoundDomainError(f"{name} must lie in (0, N={N}], got {delta}")


def lemma1_terms(n: float, K: float, N: float) -> BoundTerms:
    _positive(n=n, K=K, N=N)
    return BoundTerms(
        constant=N * K,
        n_two_thirds=math.sqrt(K * E) * n ** (2.0 / 3.0),
        n_three_quarters=16 * N ** 3 * n ** (3.0 / 4.0),
        n_five_sixths=(K / E ** 2 + (1 + 4 * math.sqrt(K) * N ** 2) * N) * N * K * n ** (5.0 / 6.0),
    )


def bound_lemma1(n: float, K: float, N: float) -> float:
    """Distribution-free regret bound of DFL."""
    return lemma1_terms(n, K, N).total


def bound_lemma2(n: float, K: float, N: float, delta_min: float) -> float:
    """Distribution-dependent regret bound of DFL."""
    _positive(n=n, K=K, N=N)
    _gap("delta_min", delta_min, N)
    d2 = delta_min ** 2
    return (
        E ** 3 * K ** 3 / delta_min ** 5
        + N * K * (
            1
            + 16 * N ** 2 * math.log(n ** (2.0 / 3.0) / K * N ** 2) / d2
            + K * n ** (1.0 / 3.0) / E ** 2
            + 8 * N ** 3 * K * math.log(n / K * N ** 2) / d2 * n ** (1.0 / 3.0)
            + K * N / ((1 - 1 / E) * d2)
        )
    )


def lemma3_terms(n: float, K: float, N: float, beta: float) -> BoundTerms:
    _positive(n=n, K=K, N=N)
    if beta < 1:
        raise BoundDomainError(f"beta must be >= 1, got {beta}")
    return BoundTerms(
        constant=N * K / beta,
        n_two_thirds=math.sqrt(E * K) * n ** (2.0 / 3.0),
        n_three_quarters=16 * N ** 3 * n ** (3.0 / 4.0) / beta,
        n_five_sixths=(1 + 4 * math.sqrt(K) * N ** 2 / beta ** 2 + K / (E ** 2 * N))
        * N ** 2 * K / beta * n ** (5.0 / 6.0),
    )


def bound_lemma3(n: float, K: float, N: float, beta: float) -> float:
    """Distribution-free beta-regret bound of beta-approximation DFL."""
    return lemma3_terms(n, K, N, beta).total


def bound_lemma4(n: float, K: float, N: float, beta: float, delta_beta_min: float) -> float:
    """Distribution-dependent beta-regret bound of beta-approximation DFL."""
    _positive(n=n, K=K, N=N)
    if beta < 1:
        raise BoundDomainError(f"beta must be >= 1, got {beta}")
    _gap("delta_beta_min", delta_beta_min, N)
    d2 = delta_beta_min ** 2
    return (
        E ** 3 * K ** 3 / delta_beta_min ** 5
        + N * K / beta * (
            1
            + 16 * N ** 2 * math.log(n ** (2.0 / 3.0) / K * N ** 2) / d2
            + K * n ** (1.0 / 3.0) / E ** 2
            + 8 * N ** 3 * K * n ** (1.0 / 3.0) * math.log(n / K * N ** 2) / (beta ** 2 * d2)
            + N * K / ((1 - 1 / E) * d2)
        )
    )


def theorem_dfl(n: float, K: float, N: float, delta_min: float) -> float:
    return min(bound_lemma1(n, K, N), bound_lemma2(n, K, N, delta_min))


def theorem_beta(n: float, K: float, N: float, beta: float, delta_beta_min: float) -> float:
    return min(bound_lemma3(n, K, N, beta), bound_lemma4(n, K, N, beta, delta_beta_min))


def moss_bound(n: float, kappa: float) -> float:
    """Minimax regret guarantee of MOSS over kappa strategies."""
    _positive(n=n, kappa=kappa)
    return 49 * math.sqrt(n * kappa)
