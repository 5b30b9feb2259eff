"""Exact rank, kernel and solve over the rationals.

Rows are cleared of denominators and reduced fraction-free over ZZ with
sympy's DomainMatrix, so no floating point is ever involved.
"""
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from ..errors import CertificateError, InvalidArgumentError

Vector = Tuple[Fraction, ...]


def as_fraction_rows(matrix) -> List[List[Fraction]]:
    """Convert a nested sequence or numpy array to rows of Fractions."""
    if isinstance(matrix, np.ndarray):
        if matrix.ndim != 2:
            raise InvalidArgumentError(f"Expected a 2-d matrix, got shape {matrix.shape}")
        if matrix.dtype.kind in "iu":
            return [[Fraction(int(x)) for x in row] for row in matrix.tolist()]
        return [[Fraction(x) for x in row] for row in matrix.tolist()]
    rows = [[Fraction(x) for x in row] for row in matrix]
    if rows and any(len(row) != len(rows[0]) for row in rows):
        raise InvalidArgumentError("Matrix rows have different lengths")
    return rows


def shape(matrix) -> Tuple[int, int]:
    if isinstance(matrix, np.ndarray):
        return matrix.shape
    rows = list(matrix)
    return len(rows), (len(rows[0]) if rows else 0)


def _integer_rows(rows: List[List[Fraction]]) -> List[List[int]]:
    # scaling a row by a nonzero constant changes neither rank nor null space
    result = []
    for row in rows:
        scale = lcm(1, *(x.denominator for x in row))
        result.append([int(x * scale) for x in row])
    return result


def _domain(rows: List[List[int]], ncols: int) -> DomainMatrix:
    return DomainMatrix([[ZZ(x) for x in row] for row in rows], (len(rows), ncols), ZZ)


def _rref(rows: List[List[Fraction]], ncols: int) -> Tuple[List[List[int]], int, Tuple[int, ...]]:
    """Fraction-free reduced row echelon form: (numerators, common denominator, pivot columns)."""
    if not rows or ncols == 0:
        return [], 1, ()
    reduced, den, pivots = _domain(_integer_rows(rows), ncols).rref_den()
    return [[int(x) for x in row] for row in reduced.to_list()], int(den), tuple(pivots)


def rank(matrix) -> int:
    """Exact rank of a rational matrix."""
    nrows, ncols = shape(matrix)
    if nrows == 0 or ncols == 0:
        return 0
    return len(_rref(as_fraction_rows(matrix), ncols)[2])


def kernel(matrix) -> List[Vector]:
    """
    Basis of the right null space.

    One vector per free column, in increasing column order; the free
    coordinate is 1 and the other free coordinates are 0.

    Args:
        matrix: Rational matrix (nested sequence or numpy array)

    Returns:
        List of cols - rank(matrix) exact vectors
    """
    nrows, ncols = shape(matrix)
    reduced, den, pivots = _rref(as_fraction_rows(matrix), ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector = [Fraction(0)] * ncols
        vector[free] = Fraction(1)
        for row, pivot in zip(reduced, pivots):
            vector[pivot] = Fraction(-row[free], den)
        basis.append(tuple(vector))
    return basis


def solve(matrix, rhs: Sequence) -> Optional[Vector]:
    """
    Solve M x = b exactly.

    Args:
        matrix: Rational matrix with r rows
        rhs: Vector of length r

    Returns:
        A solution (free variables set to 0), or None when b is outside the column space

    Raises:
        InvalidArgumentError: If the dimensions do not match
    """
    nrows, ncols = shape(matrix)
    rhs = [Fraction(x) for x in rhs]
    if len(rhs) != nrows:
        raise InvalidArgumentError(f"Right-hand side has length {len(rhs)}, matrix has {nrows} rows")
    if nrows == 0:
        return tuple([Fraction(0)] * ncols)

    rows = [row + [b] for row, b in zip(as_fraction_rows(matrix), rhs)]
    reduced, den, pivots = _rref(rows, ncols + 1)
    if ncols in pivots:
        return None

    solution = [Fraction(0)] * ncols
    for row, pivot in zip(reduced, pivots):
        solution[pivot] = Fraction(row[ncols], den)
    return tuple(solution)


def matvec(matrix, vector: Sequence) -> Vector:
    """Exact matrix-vector product."""
    return tuple(sum((a * x for a, x in zip(row, vector)), Fraction(0)) for row in as_fraction_rows(matrix))


def determinant(matrix) -> Fraction:
    """Exact determinant of a square rational matrix (1 for the empty matrix)."""
    rows = as_fraction_rows(matrix)
    size = len(rows)
    if any(len(row) != size for row in rows):
        raise InvalidArgumentError("Determinant needs a square matrix")
    if size == 0:
        return Fraction(1)
    dm = DomainMatrix([[QQ(x.numerator, x.denominator) for x in row] for row in rows], (size, size), QQ)
    det = dm.det()
    return Fraction(int(QQ.numer(det)), int(QQ.denom(det)))


def inverse(matrix) -> List[List[Fraction]]:
    """Exact inverse of a nonsingular square rational matrix."""
    rows = as_fraction_rows(matrix)
    size = len(rows)
    if size == 0:
        return []
    dm = DomainMatrix([[QQ(x.numerator, x.denominator) for x in row] for row in rows], (size, size), QQ)
    try:
        inv = dm.inv()
    except DMNonInvertibleMatrixError:
        raise InvalidArgumentError("Matrix is singular")
    return [[Fraction(int(QQ.numer(x)), int(QQ.denom(x))) for x in row] for row in inv.to_list()]


class GramSolver:
    """
    Repeated exact solves of A x = b for one matrix A of full column rank.

    The unique candidate x = (A^T A)^{-1} A^T b is checked against A x = b,
    so an inconsistent b is reported rather than projected.
    """

    def __init__(self, matrix: np.ndarray):
        """
        Args:
            matrix: Integer matrix A (rows >= cols) of full column rank
        """
        self.matrix = np.asarray(matrix, dtype=object)
        nrows, ncols = self.matrix.shape
        gram = self.matrix.T.dot(self.matrix)
        try:
            self.gram_inverse = inverse(gram)
        except InvalidArgumentError:
            raise CertificateError(f"Matrix of shape {nrows}x{ncols} does not have full column rank")

    def solve(self, rhs: Sequence) -> Optional[Vector]:
        rhs = [Fraction(x) for x in rhs]
        nrows, ncols = self.matrix.shape
        if len(rhs) != nrows:
            raise InvalidArgumentError(f"Right-hand side has length {len(rhs)}, matrix has {nrows} rows")
        projected = [sum((Fraction(a) * b for a, b in zip(column, rhs) if a), Fraction(0)) for column in self.matrix.T]
        solution = tuple(
            sum((g * p for g, p in zip(row, projected)), Fraction(0))
            for row in self.gram_inverse
        )
        residual = matvec(self.matrix, solution)
        if residual != tuple(rhs):
            return None
        return solution
