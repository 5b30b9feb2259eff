"""The index set A_n of the sl_2 level-1 basis of Pic(M_{0,n})."""
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb
from typing import Dict, List, Mapping, Sequence, Tuple

from ..errors import InvalidArgumentError
from .fcurves import check_ambient, check_permutation


@dataclass(frozen=True, order=True)
class BasisVector:
    """A 0/1 weight vector with an even number (at least four) of ones."""
    bits: Tuple[int, ...]

    def __post_init__(self):
        if any(bit not in (0, 1) for bit in self.bits):
            raise InvalidArgumentError(f"Basis vector entries must be 0 or 1, got {self.bits!r}")
        weight = sum(self.bits)
        if weight < 4 or weight % 2:
            raise InvalidArgumentError(f"Basis vector needs an even number >= 4 of ones, got {self.bits!r}")

    @classmethod
    def parse(cls, text: str) -> "BasisVector":
        """Parse a bitstring such as `11110`."""
        if not text or set(text) - {"0", "1"}:
            raise InvalidArgumentError(f"Malformed bitstring: {text!r}")
        return cls(tuple(int(ch) for ch in text))

    def encode(self) -> str:
        return "".join(str(bit) for bit in self.bits)

    def __str__(self) -> str:
        return self.encode()

    @property
    def n(self) -> int:
        return len(self.bits)

    def support(self) -> Tuple[int, ...]:
        """Labels (1-based) carrying a one."""
        return tuple(position for position, bit in enumerate(self.bits, start=1) if bit)

    def insert_zero(self, position: int) -> "BasisVector":
        """Insert a zero weight so that it sits at `position` (1-based) of the result."""
        if not 1 <= position <= self.n + 1:
            raise InvalidArgumentError(f"Insert position must be in 1..{self.n + 1}, got {position}")
        bits = list(self.bits)
        bits.insert(position - 1, 0)
        return BasisVector(tuple(bits))

    def relabel(self, sigma: Mapping[int, int]) -> "BasisVector":
        """Move the weight at label i to label sigma(i)."""
        check_permutation(sigma, self.n)
        bits = [0] * self.n
        for label, bit in enumerate(self.bits, start=1):
            bits[sigma[label] - 1] = bit
        return BasisVector(tuple(bits))


def rank_pic(k: int) -> int:
    """Rank of Pic(M_{0,k}): 2^(k-1) - C(k,2) - 1 for k >= 4, and 0 below."""
    if k <= 3:
        return 0
    return 2 ** (k - 1) - comb(k, 2) - 1


@lru_cache(maxsize=None)
def _enum_basis(n: int) -> Tuple[BasisVector, ...]:
    vectors = [
        BasisVector(bits)
        for bits in product((0, 1), repeat=n)
        if sum(bits) >= 4 and sum(bits) % 2 == 0
    ]
    vectors.sort(key=BasisVector.encode)
    return tuple(vectors)


def enum_basis(n: int) -> List[BasisVector]:
    """
    Enumerate A_n.

    Args:
        n: Number of marked points (>= 4)

    Returns:
        All even-weight 0/1 vectors with at least four ones, sorted by bitstring
    """
    return list(_enum_basis(check_ambient(n)))


def basis_index(n: int) -> Dict[BasisVector, int]:
    """Map each basis vector to its coordinate position."""
    return {vector: position for position, vector in enumerate(_enum_basis(check_ambient(n)))}


def supported_on(vectors: Sequence[BasisVector], labels) -> List[int]:
    """Positions of the vectors whose support lies inside `labels`."""
    allowed = set(labels)
    return [position for position, vector in enumerate(vectors) if set(vector.support()) <= allowed]
