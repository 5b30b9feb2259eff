"""Integrality of the coinvariant divisors inside Pic(M_{0,n})."""
import logging

import numpy as np

from ..coinv.batch import curve_incidence, intersection_rows, nontrivial_weights
from ..combinat.basis import rank_pic
from ..exactlin.lattice import ColumnLattice
from ..exactlin.smith import smith
from ..errors import InvalidArgumentError, ResourceLimitError
from .base import Verifier
from .report import VerificationReport

logger = logging.getLogger(__name__)

DEFAULT_M_MAX = 6
WEIGHT_BUDGET = 2_000_000


def is_power_of_two(value: int) -> bool:
    return value > 0 and value & (value - 1) == 0


class CDIntVerifier(Verifier):
    """
    Part 1: level-1 coinvariant divisors of all ranks generate the integral Picard group.
    Part 2: the sl_2 basis divisors give a basis after inverting 2.
    """

    def __init__(self):
        super().__init__("cdint")

    def verify(self, report: VerificationReport, n: int, part: int = 2, m_max: int = DEFAULT_M_MAX, **params) -> None:
        if part == 2:
            self._basis_after_inverting_two(report, n)
        elif part == 1:
            if m_max < 2:
                raise InvalidArgumentError(f"m_max must be >= 2, got {m_max}")
            self._generation(report, n, m_max)
        else:
            raise InvalidArgumentError(f"part must be 1 or 2, got {part}")

    def _basis_after_inverting_two(self, report: VerificationReport, n: int) -> None:
        divisors = self.picard(n).elementary_divisors()
        report.check("rank", rank_pic(n), len(divisors))
        report.check("powers_of_two", True, all(is_power_of_two(d) for d in divisors))
        report.witness("elementary_divisors", divisors)

    def _generation(self, report: VerificationReport, n: int, m_max: int) -> None:
        if sum(m ** (n - 1) for m in range(2, m_max + 1)) > WEIGHT_BUDGET:
            raise ResourceLimitError(f"Weights up to m={m_max} on {n} points exceed the budget of {WEIGHT_BUDGET}")
        curves = self.pairing(n).curves
        incidence = curve_incidence(curves, n)
        lattice = ColumnLattice(len(curves))
        seen = set()
        history = []
        saturated_at = None

        for m in range(2, m_max + 1):
            fresh = []
            for weights in nontrivial_weights(m, n):
                for row in intersection_rows(m, weights, incidence):
                    key = row.tobytes()
                    if key in seen or not row.any():
                        continue
                    seen.add(key)
                    fresh.append(row)
            if fresh:
                lattice.add_columns(np.array(fresh, dtype=object).T)
            divisors = smith(lattice.basis_matrix()).divisors if lattice.rank else []
            history.append({"m": m, "rank": lattice.rank, "divisors": divisors})
            logger.debug("cdint n=%d m=%d: rank %d, divisors %s", n, m, lattice.rank, divisors)
            if lattice.rank == rank_pic(n) and all(d == 1 for d in divisors):
                saturated_at = m
                break

        report.check("saturated", True, saturated_at is not None)
        report.witness("minimal_m", saturated_at)
        report.witness("history", history)


def verify_cdint(n: int, part: int, m_max: int = DEFAULT_M_MAX, session=None) -> VerificationReport:
    verifier = CDIntVerifier()
    verifier.set_session(session)
    return verifier.run(n, part=part, m_max=m_max)
