"""Smith normal form with unimodular certificates."""
import logging
from dataclasses import dataclass
from typing import List

import numpy as np
from sympy.polys.matrices.normalforms import smith_normal_decomp

from ..errors import CertificateError
from .lattice import ColumnLattice, as_integer_array, from_domain, to_domain

logger = logging.getLogger(__name__)


def identity(size: int) -> np.ndarray:
    matrix = np.zeros((size, size), dtype=object)
    for i in range(size):
        matrix[i, i] = 1
    return matrix


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ M @ V == D with U, V unimodular and D diagonal with d_1 | d_2 | ..."""
    U: np.ndarray
    V: np.ndarray
    D: np.ndarray

    @property
    def divisors(self) -> List[int]:
        """Nonzero elementary divisors, in divisibility order."""
        size = min(self.D.shape)
        return [int(self.D[i, i]) for i in range(size) if self.D[i, i] != 0]

    @property
    def rank(self) -> int:
        return len(self.divisors)

    def check(self, matrix: np.ndarray) -> None:
        """Raise CertificateError unless the decomposition reproduces `matrix`."""
        rows, cols = matrix.shape
        if self.U.shape != (rows, rows) or self.V.shape != (cols, cols) or self.D.shape != (rows, cols):
            raise CertificateError("Smith certificate has inconsistent shapes")
        if rows and cols and not np.array_equal(self.U.dot(matrix).dot(self.V), self.D):
            raise CertificateError("Smith certificate does not recompose: U*M*V != D")
        for (i, j), value in np.ndenumerate(self.D):
            if i != j and value != 0:
                raise CertificateError(f"Smith form has off-diagonal entry {value} at ({i}, {j})")
        divisors = self.divisors
        if any(d < 0 for d in divisors):
            raise CertificateError("Smith form has a negative elementary divisor")
        for d in range(len(divisors), min(self.D.shape)):
            if self.D[d, d] != 0:
                raise CertificateError("Zero elementary divisors must trail the nonzero ones")
        for small, large in zip(divisors, divisors[1:]):
            if large % small:
                raise CertificateError(f"Divisibility chain broken: {small} does not divide {large}")


def smith(matrix) -> SmithDecomposition:
    """
    Smith normal form of an integer matrix.

    The decomposition comes from sympy over ZZ; diagonal signs are moved into
    U and the recomposition U*M*V == D is checked before returning.

    Args:
        matrix: Integer matrix (nested sequence or numpy array)

    Returns:
        SmithDecomposition
    """
    M = as_integer_array(matrix)
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        decomposition = SmithDecomposition(U=identity(rows), V=identity(cols), D=M.copy())
    else:
        D, U, V = (from_domain(part) for part in smith_normal_decomp(to_domain(M)))
        for i in range(min(rows, cols)):
            if D[i, i] < 0:
                D[i, :] = -D[i, :]
                U[i, :] = -U[i, :]
        decomposition = SmithDecomposition(U=U, V=V, D=D)
    decomposition.check(M)
    return decomposition


def elementary_divisors(matrix) -> List[int]:
    """
    Nonzero elementary divisors of an integer matrix.

    The vectors along the longer side are first folded into a Hermite basis
    in the shorter dimension; only that small basis goes through smith().
    """
    M = as_integer_array(matrix)
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        return []
    generators = M if cols >= rows else M.T
    lattice = ColumnLattice(generators.shape[0])
    lattice.add_columns(generators)
    if lattice.rank == 0:
        return []
    return smith(lattice.basis_matrix()).divisors
