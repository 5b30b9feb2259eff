"""Weights with a unique balanced bipartition, the input to the Knudsen dual divisors."""
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Tuple

import numpy as np

from ..errors import InvalidArgumentError, SearchBudgetExceeded

logger = logging.getLogger(__name__)

DEFAULT_MAX_ATTEMPTS = 4096
KEEP_CANDIDATES = 4


@dataclass(frozen=True)
class WeightAssignment:
    """Positive integer weights on a finite label set."""
    weights: Dict[int, int]

    @property
    def labels(self) -> Tuple[int, ...]:
        return tuple(sorted(self.weights))

    def as_tuple(self) -> Tuple[int, ...]:
        """Weights listed in increasing label order."""
        return tuple(self.weights[label] for label in self.labels)

    def total(self, subset: Iterable[int]) -> int:
        return sum(self.weights[label] for label in subset)

    def balanced_bipartitions(self) -> List[FrozenSet[int]]:
        """
        All unordered bipartitions {B, B^c} with equal weight on both sides.

        Each bipartition is reported by the side containing the smallest label.
        """
        return [side for side in _bipartition_sides(self.labels) if 2 * self.total(side) == self.total(self.labels)]

    def is_uniquely_balanced(self, subset: Iterable[int]) -> bool:
        """True iff {subset, complement} is the one and only balanced bipartition."""
        side = _canonical_side(self.labels, frozenset(subset))
        return self.balanced_bipartitions() == [side]


def _bipartition_sides(labels: Tuple[int, ...]) -> Iterator[FrozenSet[int]]:
    first, rest = labels[0], labels[1:]
    for size in range(len(rest) + 1):
        for chosen in combinations(rest, size):
            yield frozenset((first,) + chosen)


def _canonical_side(labels: Tuple[int, ...], subset: FrozenSet[int]) -> FrozenSet[int]:
    return subset if labels[0] in subset else frozenset(labels) - subset


def _seed_weights(labels: Tuple[int, ...], side: FrozenSet[int]) -> Dict[int, int]:
    other = [label for label in labels if label not in side]
    inside = sorted(side)
    weights = {label: len(inside) for label in other}
    for label in inside[1:]:
        weights[label] = 1
    weights[inside[0]] = len(inside) * len(other) - (len(inside) - 1)
    return weights


def _random_weights(
    rng: np.random.Generator,
    labels: Tuple[int, ...],
    side: FrozenSet[int],
    bound: int,
) -> Dict[int, int]:
    draws = rng.integers(1, bound + 1, size=len(labels))
    weights = {label: int(value) for label, value in zip(labels, draws)}
    inside = sorted(side)
    outside = [label for label in labels if label not in side]
    gap = sum(weights[label] for label in inside) - sum(weights[label] for label in outside)
    # top up the lighter side on one randomly chosen label
    lighter = outside if gap > 0 else inside
    target = lighter[int(rng.integers(len(lighter)))]
    weights[target] += abs(gap)
    return weights


def balanced_weights(
    X: Iterable[int],
    A: Iterable[int],
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    seed: int = 0,
) -> WeightAssignment:
    """
    Find positive weights on X whose only balanced bipartition is {A, X \\ A}.

    A deterministic seed candidate is tried first. When it admits another
    balanced bipartition, a seeded generator draws bounded candidates, and the
    lexicographically smallest of the first few verified ones is returned.

    Args:
        X: Finite label set with at least two elements
        A: Nonempty proper subset of X
        max_attempts: Number of random candidates tried before giving up
        seed: Seed of the random candidate stream

    Returns:
        Verified WeightAssignment

    Raises:
        InvalidArgumentError: If A is not a nonempty proper subset of X
        SearchBudgetExceeded: If no verified assignment is found within the budget
    """
    labels = tuple(sorted(set(X)))
    side = frozenset(A)
    if len(labels) < 2:
        raise InvalidArgumentError(f"X needs at least two labels, got {labels!r}")
    if not side or not side < set(labels):
        raise InvalidArgumentError(f"A must be a nonempty proper subset of X, got A={sorted(side)!r}, X={labels!r}")

    candidate = WeightAssignment(_seed_weights(labels, side))
    if candidate.is_uniquely_balanced(side):
        return candidate

    logger.debug("Seed weights %s fail for A=%s; starting randomized search", candidate.as_tuple(), sorted(side))
    rng = np.random.default_rng(seed)
    found: List[WeightAssignment] = []
    for attempt in range(max_attempts):
        bound = 2 * len(labels) + attempt // 64
        candidate = WeightAssignment(_random_weights(rng, labels, side, bound))
        if candidate.is_uniquely_balanced(side):
            found.append(candidate)
            if len(found) == KEEP_CANDIDATES:
                break

    if not found:
        raise SearchBudgetExceeded(
            f"No uniquely balanced weights for A={sorted(side)} in X={list(labels)} after {max_attempts} attempts"
        )
    return min(found, key=WeightAssignment.as_tuple)
