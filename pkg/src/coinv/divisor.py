"""Type-A level-1 coinvariant divisors D^m(a_1..a_n) and their intersection numbers."""
import re
from dataclasses import dataclass, field
from typing import Dict, Mapping, Sequence, Tuple

from ..combinat.fcurves import FCurve, check_ambient, check_permutation, enum_fcurves, label_set
from ..errors import AmbientMismatchError, InvalidArgumentError

_DIVISOR_PATTERN = re.compile(r"^D\[(\d+)\]:(\d+(?:,\d+)*)$")


@dataclass(frozen=True)
class CoinvariantDivisor:
    """
    The divisor D^m_{0,n}(a_1..a_n) of sl_m coinvariants at level 1.

    Weights index the fundamental weights, 0 being the vacuum. A divisor whose
    weights do not sum to 0 mod m has rank-zero bundle and is trivial; it is
    kept as a value and intersects every curve in 0.
    """
    m: int
    weights: Tuple[int, ...]
    trivial: bool = field(init=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 2:
            raise InvalidArgumentError(f"Rank m must be an integer >= 2, got {self.m!r}")
        object.__setattr__(self, "weights", tuple(int(a) for a in self.weights))
        for position, a in enumerate(self.weights, start=1):
            if not 0 <= a < self.m:
                raise InvalidArgumentError(f"Weight a_{position}={a} is outside [0, {self.m})")
        object.__setattr__(self, "trivial", sum(self.weights) % self.m != 0)

    @classmethod
    def parse(cls, text: str) -> "CoinvariantDivisor":
        """Parse `D[m]:a1,a2,...,an`."""
        match = _DIVISOR_PATTERN.match(text.strip())
        if not match:
            raise InvalidArgumentError(f"Malformed divisor: {text!r} (expected D[m]:a1,...,an)")
        return cls(int(match.group(1)), tuple(int(a) for a in match.group(2).split(",")))

    def encode(self) -> str:
        return f"D[{self.m}]:" + ",".join(str(a) for a in self.weights)

    def __str__(self) -> str:
        return self.encode()

    @property
    def n(self) -> int:
        return len(self.weights)

    def relabel(self, sigma: Mapping[int, int]) -> "CoinvariantDivisor":
        """Move the weight at label i to label sigma(i)."""
        check_permutation(sigma, self.n)
        weights = [0] * self.n
        for label, a in enumerate(self.weights, start=1):
            weights[sigma[label] - 1] = a
        return CoinvariantDivisor(self.m, tuple(weights))


def rank0(divisor: CoinvariantDivisor) -> int:
    """Rank of the coinvariant bundle in genus 0: 1 iff the weights sum to 0 mod m."""
    return 0 if divisor.trivial else 1


def deg_m04(m: int, weights: Sequence[int]) -> int:
    """
    Degree of D^m_{0,4}(a_1..a_4) on M_{0,4}.

    Args:
        m: Rank of sl_m (>= 2)
        weights: Four weights in [0, m)

    Returns:
        a_1 if the sorted weights sum to 2m and a_2+a_3 >= a_1+a_4,
        m - a_4 if they sum to 2m otherwise, and 0 when the sum differs from 2m
    """
    if m < 2:
        raise InvalidArgumentError(f"Rank m must be >= 2, got {m}")
    if len(weights) != 4:
        raise InvalidArgumentError(f"M_0,4 takes exactly four weights, got {len(weights)}")
    if any(not 0 <= a < m for a in weights):
        raise InvalidArgumentError(f"Weights {tuple(weights)} are outside [0, {m})")

    a1, a2, a3, a4 = sorted(weights)
    if a1 + a2 + a3 + a4 != 2 * m:
        return 0
    if a2 + a3 >= a1 + a4:
        return a1
    return m - a4


def check_same_ambient(divisor: CoinvariantDivisor, curve: FCurve) -> None:
    if divisor.n != curve.n:
        raise AmbientMismatchError(f"Divisor {divisor} lives on M_0,{divisor.n}, curve {curve} on M_0,{curve.n}")


def block_sums(divisor: CoinvariantDivisor, curve: FCurve) -> Tuple[int, int, int, int]:
    """Weight sums over the four blocks, reduced mod m."""
    return tuple(sum(divisor.weights[label - 1] for label in block) % divisor.m for block in curve.blocks)


def intersect_fcurve(divisor: CoinvariantDivisor, curve: FCurve) -> int:
    """
    Intersection number D . F(I,J,K,L).

    Raises:
        AmbientMismatchError: If the divisor and curve have different n
    """
    check_same_ambient(divisor, curve)
    if divisor.trivial:
        return 0
    return deg_m04(divisor.m, block_sums(divisor, curve))


def pullback_projection(divisor: CoinvariantDivisor, position: int) -> CoinvariantDivisor:
    """Pullback along the map forgetting a new point: a zero weight lands at `position` (1-based)."""
    if not 1 <= position <= divisor.n + 1:
        raise InvalidArgumentError(f"Insert position must be in 1..{divisor.n + 1}, got {position}")
    weights = list(divisor.weights)
    weights.insert(position - 1, 0)
    return CoinvariantDivisor(divisor.m, tuple(weights))


def remove_point(divisor: CoinvariantDivisor, position: int) -> CoinvariantDivisor:
    """Inverse of pullback_projection: drop a zero weight."""
    if not 1 <= position <= divisor.n:
        raise InvalidArgumentError(f"Position must be in 1..{divisor.n}, got {position}")
    if divisor.weights[position - 1] != 0:
        raise InvalidArgumentError(f"Weight a_{position}={divisor.weights[position - 1]} is not the vacuum")
    weights = list(divisor.weights)
    del weights[position - 1]
    return CoinvariantDivisor(divisor.m, tuple(weights))


def pullback_section(divisor: CoinvariantDivisor, i: int) -> CoinvariantDivisor:
    """
    Pullback along the section s_i: M_{0,n-1} -> M_{0,n} gluing point n onto point i.

    Level-1 fusion adds weights in Z/mZ, so a_i becomes a_i + a_n mod m and a_n is dropped.
    """
    n = divisor.n
    if not 1 <= i <= n - 1:
        raise InvalidArgumentError(f"Section index must be in 1..{n - 1}, got {i}")
    weights = list(divisor.weights[:-1])
    weights[i - 1] = (weights[i - 1] + divisor.weights[-1]) % divisor.m
    return CoinvariantDivisor(divisor.m, tuple(weights))


def psi_value(curve: FCurve, i: int) -> int:
    return 1 if curve.is_singleton(i) else 0


def psi_functional(n: int, i: int) -> Dict[FCurve, int]:
    """
    psi_i as a functional on F-curves: 1 on curves where {i} is a singleton block, 0 elsewhere.

    Returns:
        Dict keyed by every curve of enum_fcurves(n), in enumeration order
    """
    check_ambient(n)
    (label,) = label_set([i], n, "i")
    return {curve: psi_value(curve, label) for curve in enum_fcurves(n)}
