"""F-curves on M_{0,n}: canonical partitions, enumeration and contracted-curve families."""
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache, total_ordering
from itertools import permutations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy.utilities.iterables import multiset_partitions

from ..errors import InvalidAmbientError, InvalidArgumentError

Label = int
Block = Tuple[Label, ...]


class FamilyKind(Enum):
    """Named families of F-curves contracted by the classical constructions."""
    KAP = "kap"
    KEEL = "keel"
    KNU = "knu"
    ST = "st"
    PROJ = "proj"
    PAIR = "pair"


def check_ambient(n: int) -> int:
    """Validate the number of marked points for curve and basis enumeration."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 4:
        raise InvalidAmbientError(f"Number of marked points must be an integer >= 4, got {n!r}")
    return n


def label_set(values: Iterable[int], n: int, name: str = "labels") -> FrozenSet[Label]:
    """
    Convert an iterable of labels to a frozenset, checking 1 <= label <= n.

    Args:
        values: Candidate labels
        n: Number of marked points
        name: Argument name used in error messages

    Returns:
        Frozenset of labels
    """
    result = set()
    for value in values:
        if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= n:
            raise InvalidArgumentError(f"{name} must contain labels in 1..{n}, got {value!r}")
        result.add(value)
    return frozenset(result)


def check_permutation(sigma: Mapping[int, int], n: int) -> Mapping[int, int]:
    """Validate that `sigma` is a bijection of {1..n}."""
    labels = set(range(1, n + 1))
    if set(sigma) != labels or set(sigma.values()) != labels:
        raise InvalidArgumentError(f"Not a permutation of 1..{n}: {dict(sigma)!r}")
    return sigma


@total_ordering
@dataclass(frozen=True)
class FCurve:
    """
    The F-curve F(I,J,K,L) of a partition of {1..n} into four nonempty blocks.

    Blocks are stored canonically: sorted by minimum element, elements ascending.
    Equality is that of the canonical block tuple; curves are ordered by
    their text encoding, so `1,2|3|4|5` sorts before `1|2,3|4|5`.
    """
    blocks: Tuple[Block, Block, Block, Block]

    @classmethod
    def from_blocks(cls, blocks: Sequence[Iterable[int]], n: Optional[int] = None) -> "FCurve":
        """
        Build a curve from four blocks given in any order.

        Args:
            blocks: Four iterables of labels
            n: Ambient number of points (defaults to the largest label)

        Returns:
            Canonical FCurve
        """
        parts = [tuple(sorted(set(block))) for block in blocks]
        if len(parts) != 4 or any(len(part) == 0 for part in parts):
            raise InvalidArgumentError(f"An F-curve needs exactly four nonempty blocks, got {list(blocks)!r}")

        flat = [label for part in parts for label in part]
        if n is None:
            n = max(flat)
        check_ambient(n)
        if len(flat) != len(set(flat)):
            raise InvalidArgumentError(f"Blocks of an F-curve must be disjoint, got {parts!r}")
        if sorted(flat) != list(range(1, n + 1)):
            raise InvalidArgumentError(f"Blocks must cover exactly 1..{n}, got {parts!r}")

        parts.sort(key=lambda part: part[0])
        return cls(tuple(parts))

    @classmethod
    def parse(cls, text: str, n: Optional[int] = None) -> "FCurve":
        """Parse the `1|2,3|4|5` text encoding."""
        try:
            blocks = [[int(item) for item in chunk.split(",")] for chunk in text.strip().split("|")]
        except ValueError:
            raise InvalidArgumentError(f"Malformed F-curve encoding: {text!r}")
        return cls.from_blocks(blocks, n)

    def encode(self) -> str:
        """Canonical text encoding, e.g. `1|2,3|4|5`."""
        return "|".join(",".join(str(label) for label in block) for block in self.blocks)

    def __str__(self) -> str:
        return self.encode()

    def __lt__(self, other: "FCurve") -> bool:
        if not isinstance(other, FCurve):
            return NotImplemented
        return self.encode() < other.encode()

    @property
    def n(self) -> int:
        return sum(len(block) for block in self.blocks)

    def block_of(self, label: Label) -> Block:
        """Return the block containing `label`."""
        for block in self.blocks:
            if label in block:
                return block
        raise InvalidArgumentError(f"Label {label} does not occur in {self.encode()}")

    def is_singleton(self, label: Label) -> bool:
        return len(self.block_of(label)) == 1

    def relabel(self, sigma: Mapping[int, int]) -> "FCurve":
        """Apply a permutation of {1..n} to every label."""
        check_permutation(sigma, self.n)
        return FCurve.from_blocks([[sigma[label] for label in block] for block in self.blocks], self.n)

    def forget(self, label: Label) -> Optional["FCurve"]:
        """
        Image of the curve under the projection forgetting `label`.

        Labels above `label` shift down by one. Returns None when {label} is a
        singleton block, in which case the projection contracts the curve.
        """
        if self.is_singleton(label):
            return None
        blocks = [
            [x - 1 if x > label else x for x in block if x != label]
            for block in self.blocks
        ]
        return FCurve.from_blocks(blocks, self.n - 1)


@lru_cache(maxsize=None)
def _enum_fcurves(n: int) -> Tuple[FCurve, ...]:
    curves = [FCurve.from_blocks(blocks, n) for blocks in multiset_partitions(list(range(1, n + 1)), 4)]
    curves.sort(key=FCurve.encode)
    return tuple(curves)


def enum_fcurves(n: int) -> List[FCurve]:
    """
    Enumerate all F-curves on M_{0,n}.

    Args:
        n: Number of marked points (>= 4)

    Returns:
        List of S(n,4) canonical curves, sorted by text encoding
    """
    return list(_enum_fcurves(check_ambient(n)))


def curve_index(n: int) -> Dict[FCurve, int]:
    """Map each F-curve to its column position in enum_fcurves(n)."""
    return {curve: position for position, curve in enumerate(_enum_fcurves(check_ambient(n)))}


def _is_kap(curve: FCurve, n: int) -> bool:
    return len(curve.block_of(n)) > 1


def _is_keel(curve: FCurve, n: int) -> bool:
    if not curve.is_singleton(n):
        return False
    return any(
        block != (n,) and not {1, 2, 3} & set(block)
        for block in curve.blocks
    )


def _is_knu(curve: FCurve, n: int) -> bool:
    return curve.is_singleton(n) and curve.is_singleton(n - 1)


def _is_st(curve: FCurve, s_comp: FrozenSet[int], t_comp: FrozenSet[int]) -> bool:
    both = s_comp & t_comp
    for first, second in permutations(curve.blocks, 2):
        if set(first) <= both:
            return True
        if set(first) <= s_comp and set(second) <= t_comp:
            return True
    return False


def check_st(n: int, S: Iterable[int], T: Iterable[int]) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """Validate a pair of label subsets with |S|, |T| >= 3."""
    s_set = label_set(S, n, "S")
    t_set = label_set(T, n, "T")
    if len(s_set) < 3 or len(t_set) < 3:
        raise InvalidArgumentError(f"S and T need at least 3 labels each, got |S|={len(s_set)}, |T|={len(t_set)}")
    return s_set, t_set


def curve_family(
    n: int,
    kind,
    S: Optional[Iterable[int]] = None,
    T: Optional[Iterable[int]] = None,
    i: Optional[int] = None,
    s: Optional[int] = None,
    t: Optional[int] = None,
) -> List[FCurve]:
    """
    Select the F-curves of a named family.

    Args:
        n: Number of marked points
        kind: FamilyKind or its string value ('kap', 'keel', 'knu', 'st', 'proj', 'pair')
        S, T: Label subsets for 'st' (|S|, |T| >= 3)
        i: Label for 'proj' (curves with {i} a singleton block)
        s, t: Distinct labels for 'pair' (curves with {s} and {t} singleton blocks)

    Returns:
        Sublist of enum_fcurves(n), in the same order
    """
    check_ambient(n)
    try:
        kind = FamilyKind(kind)
    except ValueError:
        raise InvalidArgumentError(f"Unknown curve family {kind!r}")

    curves = _enum_fcurves(n)

    if kind is FamilyKind.KAP:
        return [curve for curve in curves if _is_kap(curve, n)]
    if kind is FamilyKind.KEEL:
        return [curve for curve in curves if _is_keel(curve, n)]
    if kind is FamilyKind.KNU:
        return [curve for curve in curves if _is_knu(curve, n)]
    if kind is FamilyKind.PROJ:
        if i is None:
            raise InvalidArgumentError("Family 'proj' requires a label i")
        (label,) = label_set([i], n, "i")
        return [curve for curve in curves if curve.is_singleton(label)]
    if kind is FamilyKind.PAIR:
        if s is None or t is None or s == t:
            raise InvalidArgumentError(f"Family 'pair' requires two distinct labels, got s={s!r}, t={t!r}")
        label_set([s, t], n, "s,t")
        return [curve for curve in curves if curve.is_singleton(s) and curve.is_singleton(t)]

    if S is None or T is None:
        raise InvalidArgumentError("Family 'st' requires label subsets S and T")
    s_set, t_set = check_st(n, S, T)
    everything = frozenset(range(1, n + 1))
    s_comp, t_comp = everything - s_set, everything - t_set
    return [curve for curve in curves if _is_st(curve, s_comp, t_comp)]
