from dataclasses import dataclass
from typing import Iterable, Iterator, Tuple

from utils.errors import InvalidStrategyError


@dataclass(frozen=True, order=True)
class Strategy:
    """A set of arms played together, stored as a strictly increasing tuple.

    Ordering is lexicographic on the arm tuple, which is the tie-break every oracle uses.
    """

    arms: Tuple[int, ...]

    def __post_init__(self):
        if not self.arms:
            raise InvalidStrategyError("a strategy needs at least one arm")
        if any(a < 0 for a in self.arms):
            raise InvalidStrategyError(f"negative arm index in {self.arms}")
        if any(b <= a for a, b in zip(self.arms, self.arms[1:])):
            raise InvalidStrategyError(f"arms must be strictly increasing: {self.arms}")

    @classmethod
    def of(cls, arms: Iterable[int]) -> "Strategy":
        """Build from any iterable of distinct indices."""
        values = [int(a) for a in arms]
        if len(set(values)) != len(values):
            raise InvalidStrategyError(f"duplicate arm index in {values}")
        return cls(tuple(sorted(values)))

    def __iter__(self) -> Iterator[int]:
        return iter(self.arms)

    def __len__(self) -> int:
        return len(self.arms)

    def __contains__(self, arm) -> bool:
        return arm in self.arms

    def label(self) -> str:
        """CSV form, e.g. `1|2|4`."""
        return "|".join(str(a) for a in self.arms)

    def __str__(self) -> str:
        return "{" + ",".join(str(a) for a in self.arms) + "}"

    def validate(self, num_arms: int, max_size: int = None) -> "Strategy":
        if self.arms[-1] >= num_arms:
            raise InvalidStrategyError(f"arm {self.arms[-1]} outside 0..{num_arms - 1}")
        if max_size is not None and len(self.arms) > max_size:
            raise InvalidStrategyError(f"{self} has more than {max_size} arms")
        return self
