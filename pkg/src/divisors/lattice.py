"""The integral Picard lattice, modelled through the columns of the pairing matrix.

Integral classes are the rational classes pairing integrally with every
F-curve. Dually they are the homomorphisms L -> Z, where L is the lattice in
Z^r spanned by the pairing-matrix columns, so all integral questions reduce to
coordinates in the Hermite basis of L.
"""
import logging
from functools import cached_property
from typing import List, Sequence

import numpy as np

from ..combinat.fcurves import FCurve
from ..errors import CertificateError
from ..exactlin.lattice import ColumnLattice
from ..exactlin.smith import SmithDecomposition, smith
from .pairing import PairingMatrix

logger = logging.getLogger(__name__)


class PicardLattice:
    """Integral structure of Pic(M_{0,n}) attached to one pairing matrix."""

    def __init__(self, pairing: PairingMatrix):
        self.pairing = pairing
        self.columns = ColumnLattice(len(pairing.basis))
        self.columns.add_columns(np.unique(pairing.matrix, axis=1))
        logger.debug("Column lattice for n=%d has rank %d", pairing.n, self.columns.rank)

    @property
    def rank(self) -> int:
        return self.columns.rank

    @cached_property
    def smith_form(self) -> SmithDecomposition:
        """Smith form of the Hermite basis of L; its divisors are those of the pairing matrix."""
        return smith(self.columns.basis_matrix())

    def elementary_divisors(self) -> List[int]:
        return self.smith_form.divisors

    def restriction_matrix(self, curves: Sequence[FCurve]) -> np.ndarray:
        """
        Matrix of restriction Pic -> Z^K in the dual basis, one row per curve in K.

        Row F holds the coordinates of column F of the pairing matrix in the Hermite basis of L.
        """
        block = self.pairing.columns(curves)
        rows = np.zeros((len(curves), self.rank), dtype=object)
        for position, column in enumerate(block.T):
            coords = self.columns.coordinates(column.tolist())
            if coords is None:
                raise CertificateError(f"Column of {curves[position]} fell outside its own column lattice")
            rows[position, :] = coords
        return rows

    def restriction_smith(self, curves: Sequence[FCurve]) -> SmithDecomposition:
        return smith(self.restriction_matrix(curves))

    def restriction_surjective(self, curves: Sequence[FCurve]) -> bool:
        """True iff restriction of integral classes onto Z^K is onto."""
        if not curves:
            return True
        divisors = self.restriction_smith(curves).divisors
        return len(divisors) == len(curves) and all(d == 1 for d in divisors)
