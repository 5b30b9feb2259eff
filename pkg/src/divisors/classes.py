"""
Divisor classes as exact coordinates in the sl_2 level-1 basis, and curve functionals.

Classes and functionals are exchanged through the pairing matrix: a class x
pairs with the F-curves as M^T x, and a functional is realizable when it lies
in the row space of M.
"""
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..combinat.basis import BasisVector, basis_index, enum_basis, rank_pic
from ..combinat.fcurves import FCurve, check_ambient, check_permutation, curve_index, enum_fcurves, label_set
from ..errors import AmbientMismatchError, CertificateError, InvalidArgumentError
from ..exactlin.matrix_io import format_rational, parse_rational
from ..exactlin.rational import Vector, kernel, rank
from .pairing import PairingMatrix, pairing_matrix

BASIS_NAME = "sl2-level1"


@dataclass(frozen=True)
class DivisorClass:
    """A rational class on M_{0,n}, coordinates indexed by enum_basis(n)."""
    n: int
    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        check_ambient(self.n)
        object.__setattr__(self, "coords", tuple(Fraction(x) for x in self.coords))
        if len(self.coords) != rank_pic(self.n):
            raise InvalidArgumentError(f"A class on M_0,{self.n} needs {rank_pic(self.n)} coordinates, got {len(self.coords)}")

    @classmethod
    def zero(cls, n: int) -> "DivisorClass":
        return cls(n, (Fraction(0),) * rank_pic(n))

    @classmethod
    def basis_class(cls, vector: BasisVector) -> "DivisorClass":
        """The class of D^2(a) for a in A_n."""
        coords = [Fraction(0)] * rank_pic(vector.n)
        coords[basis_index(vector.n)[vector]] = Fraction(1)
        return cls(vector.n, tuple(coords))

    def coefficient(self, vector: BasisVector) -> Fraction:
        return self.coords[basis_index(self.n)[vector]]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        if other.n != self.n:
            raise AmbientMismatchError(f"Cannot add classes on M_0,{self.n} and M_0,{other.n}")
        return DivisorClass(self.n, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scaled(self, factor) -> "DivisorClass":
        return DivisorClass(self.n, tuple(Fraction(factor) * x for x in self.coords))

    def to_json(self) -> Dict:
        return {
            "n": self.n,
            "basis": BASIS_NAME,
            "coords": [
                {"bits": vector.encode(), "value": format_rational(value)}
                for vector, value in zip(enum_basis(self.n), self.coords)
            ],
        }

    @classmethod
    def from_json(cls, payload: Mapping) -> "DivisorClass":
        """Inverse of to_json; basis vectors left out have coefficient 0."""
        try:
            n = int(payload["n"])
            if payload.get("basis", BASIS_NAME) != BASIS_NAME:
                raise InvalidArgumentError(f"Unsupported basis {payload['basis']!r}")
            coords = [Fraction(0)] * rank_pic(check_ambient(n))
            index = basis_index(n)
            for entry in payload["coords"]:
                vector = BasisVector.parse(entry["bits"])
                if vector not in index:
                    raise InvalidArgumentError(f"Bitstring {entry['bits']} is not in A_{n}")
                coords[index[vector]] = parse_rational(str(entry["value"]))
        except (KeyError, TypeError) as exc:
            raise InvalidArgumentError(f"Malformed divisor-class JSON: {exc}")
        return cls(n, tuple(coords))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


@dataclass(frozen=True)
class CurveFunctional:
    """Rational values on enum_fcurves(n); `realizable` marks values known to come from a class."""
    n: int
    values: Tuple[Fraction, ...]
    realizable: bool = False

    def __post_init__(self):
        check_ambient(self.n)
        object.__setattr__(self, "values", tuple(Fraction(x) for x in self.values))
        expected = len(enum_fcurves(self.n))
        if len(self.values) != expected:
            raise InvalidArgumentError(f"A functional on M_0,{self.n} needs {expected} values, got {len(self.values)}")

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[FCurve, object]) -> "CurveFunctional":
        """Build from a partial map; curves left out take the value 0."""
        index = curve_index(n)
        values = [Fraction(0)] * len(index)
        for curve, value in mapping.items():
            if curve not in index:
                raise AmbientMismatchError(f"Curve {curve} is not an F-curve on M_0,{n}")
            values[index[curve]] = Fraction(value)
        return cls(n, tuple(values))

    def value(self, curve: FCurve) -> Fraction:
        index = curve_index(self.n)
        if curve not in index:
            raise AmbientMismatchError(f"Curve {curve} is not an F-curve on M_0,{self.n}")
        return self.values[index[curve]]

    def as_dict(self) -> Dict[FCurve, Fraction]:
        return dict(zip(enum_fcurves(self.n), self.values))

    @classmethod
    def from_json(cls, payload: Mapping) -> "CurveFunctional":
        """Parse {"n": n, "values": [{"curve": "1|2,3|4|5", "value": "1"}, ...]}."""
        try:
            n = check_ambient(int(payload["n"]))
            mapping = {
                FCurve.parse(entry["curve"], n): parse_rational(str(entry["value"]))
                for entry in payload["values"]
            }
        except (KeyError, TypeError) as exc:
            raise InvalidArgumentError(f"Malformed functional JSON: {exc}")
        return cls.from_mapping(n, mapping)


def _pairing_for(n: int, pairing: Optional[PairingMatrix]) -> PairingMatrix:
    if pairing is None:
        return pairing_matrix(n)
    if pairing.n != n:
        raise AmbientMismatchError(f"Pairing matrix is for n={pairing.n}, needed n={n}")
    return pairing


def class_to_functional(x: DivisorClass, pairing: Optional[PairingMatrix] = None) -> CurveFunctional:
    """Pair a class with every F-curve: values = M^T coords."""
    pairing = _pairing_for(x.n, pairing)
    coords = np.array(x.coords, dtype=object)
    values = coords.dot(pairing.matrix.astype(object)) if len(coords) else np.zeros(pairing.shape[1], dtype=object)
    return CurveFunctional(x.n, tuple(values), realizable=True)


def expand(v: CurveFunctional, pairing: Optional[PairingMatrix] = None) -> Optional[DivisorClass]:
    """
    Coordinates of the class pairing to `v`, or None when v is not realizable.

    The solution is unique because M has full row rank.
    """
    pairing = _pairing_for(v.n, pairing)
    solution = pairing.solver.solve(v.values)
    if solution is None:
        return None
    return DivisorClass(v.n, solution)


def psi_in_basis(n: int, i: int) -> DivisorClass:
    """psi_i = 2^(4-n) * sum over A_n of (-1)^(a_i + 1) D^2(a)."""
    check_ambient(n)
    (label,) = label_set([i], n, "i")
    scale = Fraction(1, 2 ** (n - 4))
    return DivisorClass(n, tuple(scale * (-1) ** (vector.bits[label - 1] + 1) for vector in enum_basis(n)))


def check_boundary_subset(n: int, S: Iterable[int]) -> frozenset:
    subset = label_set(S, n, "S")
    if len(subset) < 2 or n - len(subset) < 2:
        raise InvalidArgumentError(f"Boundary subsets need |S| >= 2 and |S^c| >= 2, got |S|={len(subset)} for n={n}")
    return subset


def boundary_value(curve: FCurve, subset: frozenset) -> int:
    """delta_S . F: +1 if S splits the blocks two and two, -1 if it is one block or three, else 0."""
    inside = 0
    for block in curve.blocks:
        hits = len(subset.intersection(block))
        if 0 < hits < len(block):
            return 0
        inside += hits == len(block)
    if inside == 2:
        return 1
    if inside in (1, 3):
        return -1
    return 0


def boundary_delta(n: int, S: Iterable[int], pairing: Optional[PairingMatrix] = None) -> CurveFunctional:
    """
    The boundary divisor delta_{0,S} as a functional on F-curves.

    Raises:
        InvalidArgumentError: If |S| < 2 or |S^c| < 2
        CertificateError: If the functional is not realizable
    """
    subset = check_boundary_subset(n, S)
    pairing = _pairing_for(n, pairing)
    values = tuple(boundary_value(curve, subset) for curve in pairing.curves)
    functional = CurveFunctional(n, values)
    if expand(functional, pairing) is None:
        raise CertificateError(f"Boundary functional for S={sorted(subset)} on M_0,{n} is not realizable")
    return CurveFunctional(n, values, realizable=True)


def pullback_class(x: DivisorClass, position: int) -> DivisorClass:
    """Pull back along the map forgetting a new point inserted at `position`."""
    if not 1 <= position <= x.n + 1:
        raise InvalidArgumentError(f"Insert position must be in 1..{x.n + 1}, got {position}")
    coords = [Fraction(0)] * rank_pic(x.n + 1)
    index = basis_index(x.n + 1)
    for vector, value in zip(enum_basis(x.n), x.coords):
        if value:
            coords[index[vector.insert_zero(position)]] = value
    return DivisorClass(x.n + 1, tuple(coords))


def relabel(x: DivisorClass, sigma: Mapping[int, int]) -> DivisorClass:
    """Transport a class along a permutation of the marked points."""
    check_permutation(sigma, x.n)
    coords = [Fraction(0)] * len(x.coords)
    index = basis_index(x.n)
    for vector, value in zip(enum_basis(x.n), x.coords):
        coords[index[vector.relabel(sigma)]] = value
    return DivisorClass(x.n, tuple(coords))


def restriction_gram(pairing: PairingMatrix, curves: Sequence[FCurve]) -> np.ndarray:
    """M_K M_K^T for the curve set K, an r x r integer matrix with the same kernel as M_K^T."""
    block = pairing.columns(curves).astype(object)
    return block.dot(block.T)


def restriction_kernel(pairing: PairingMatrix, curves: Sequence[FCurve]) -> List[Vector]:
    """Basis (in coordinates) of the classes that pair to zero with every curve in `curves`."""
    if not curves:
        return kernel(np.zeros((0, len(pairing.basis)), dtype=np.int64))
    return kernel(restriction_gram(pairing, curves))


def restriction_rank(pairing: PairingMatrix, curves: Sequence[FCurve]) -> int:
    """Rank of Pic -> Q^K, i.e. dim Span of the curves in K."""
    if not curves:
        return 0
    return rank(restriction_gram(pairing, curves))


def supported_span(pairing: PairingMatrix, label_sets: Sequence[Iterable[int]]) -> List[int]:
    """Positions of basis vectors whose support lies in at least one of the label sets."""
    allowed = [set(labels) for labels in label_sets]
    return [
        position for position, vector in enumerate(pairing.basis)
        if any(set(vector.support()) <= labels for labels in allowed)
    ]
