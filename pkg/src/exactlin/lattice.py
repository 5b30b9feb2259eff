"""Integer lattices spanned by columns, kept in Hermite normal form."""
import logging
from typing import List, Optional, Sequence

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form

from ..errors import InvalidArgumentError
from .rational import GramSolver

logger = logging.getLogger(__name__)

FOLD_CHUNK = 128


def as_integer_array(matrix) -> np.ndarray:
    """Copy a nested sequence or array into a 2-d numpy array of Python ints."""
    array = np.array(matrix, dtype=object)
    if array.ndim == 1 and array.size == 0:
        array = array.reshape(0, 0)
    if array.ndim != 2:
        raise InvalidArgumentError(f"Expected a 2-d integer matrix, got shape {array.shape}")
    result = np.empty(array.shape, dtype=object)
    for index, value in np.ndenumerate(array):
        if int(value) != value:
            raise InvalidArgumentError(f"Entry {value!r} at {index} is not an integer")
        result[index] = int(value)
    return result


def to_domain(array: np.ndarray) -> DomainMatrix:
    rows, cols = array.shape
    return DomainMatrix([[ZZ(int(x)) for x in row] for row in array.tolist()], (rows, cols), ZZ)


def from_domain(matrix: DomainMatrix) -> np.ndarray:
    rows, cols = matrix.shape
    result = np.zeros((rows, cols), dtype=object)
    for i, row in enumerate(matrix.to_list()):
        for j, value in enumerate(row):
            result[i, j] = int(value)
    return result


class ColumnLattice:
    """
    Sublattice of Z^N spanned by the columns added so far.

    The basis is the Hermite normal form of every generator, one column per
    basis vector. Generators are folded in chunks of FOLD_CHUNK columns, so
    sympy never sees more than N x (rank + FOLD_CHUNK) entries at once.
    """

    def __init__(self, ambient_dimension: int):
        if ambient_dimension < 0:
            raise InvalidArgumentError(f"Ambient dimension must be >= 0, got {ambient_dimension}")
        self.ambient_dimension = ambient_dimension
        self._basis = np.zeros((ambient_dimension, 0), dtype=object)
        self._solver: Optional[GramSolver] = None

    @property
    def rank(self) -> int:
        return self._basis.shape[1]

    def add_columns(self, columns) -> bool:
        """
        Add every column of an N x k integer matrix as a generator.

        Returns:
            True if the lattice changed
        """
        block = as_integer_array(columns)
        if block.shape[0] != self.ambient_dimension:
            raise InvalidArgumentError(
                f"Columns have length {block.shape[0]}, lattice lives in dimension {self.ambient_dimension}"
            )
        if self.ambient_dimension == 0:
            return False

        before = self._basis
        for start in range(0, block.shape[1], FOLD_CHUNK):
            chunk = block[:, start:start + FOLD_CHUNK]
            if not chunk.any():
                continue
            stacked = np.hstack([self._basis, chunk])
            self._basis = from_domain(hermite_normal_form(to_domain(stacked)))

        # the Hermite form is unique, so equal bases mean equal lattices
        changed = before.shape != self._basis.shape or not np.array_equal(before, self._basis)
        if changed:
            self._solver = None
            logger.debug("Column lattice in Z^%d now has rank %d", self.ambient_dimension, self.rank)
        return changed

    def add_vector(self, vector: Sequence[int]) -> bool:
        return self.add_columns(np.array([int(x) for x in vector], dtype=object).reshape(-1, 1))

    def coordinates(self, vector: Sequence[int]) -> Optional[List[int]]:
        """
        Integer coordinates of `vector` in the basis columns, or None if it is not in the lattice.
        """
        if len(vector) != self.ambient_dimension:
            raise InvalidArgumentError(
                f"Vector has length {len(vector)}, lattice lives in dimension {self.ambient_dimension}"
            )
        if self.rank == 0:
            return [] if not any(vector) else None
        if self._solver is None:
            self._solver = GramSolver(self._basis)
        solution = self._solver.solve([int(x) for x in vector])
        if solution is None or any(x.denominator != 1 for x in solution):
            return None
        return [int(x) for x in solution]

    def __contains__(self, vector: Sequence[int]) -> bool:
        return self.coordinates(vector) is not None

    def basis_matrix(self) -> np.ndarray:
        """Basis as an N x rank object-dtype integer matrix, one column per basis vector."""
        return self._basis.copy()
