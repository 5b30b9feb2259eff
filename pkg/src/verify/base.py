"""Base verifier interface for the theorem checks."""
import logging
import time
from abc import ABC, abstractmethod

from ..combinat.fcurves import check_ambient
from ..divisors.lattice import PicardLattice
from ..divisors.pairing import PairingMatrix, pairing_matrix
from ..errors import InvalidAmbientError
from .report import VerificationReport

logger = logging.getLogger(__name__)


class Verifier(ABC):
    """Abstract base class for theorem verifiers."""

    min_n = 4

    def __init__(self, name: str):
        """
        Initialize the verifier.

        Args:
            name: Theorem id used in reports and on the command line
        """
        self.name = name
        self.session = None

    def set_session(self, session):
        """
        Set the verification session supplying shared pairing matrices.

        Args:
            session: VerificationSession instance
        """
        self.session = session

    def pairing(self, n: int) -> PairingMatrix:
        if self.session is not None:
            return self.session.pairing(n)
        return pairing_matrix(n)

    def picard(self, n: int) -> PicardLattice:
        if self.session is not None:
            return self.session.picard(n)
        return PicardLattice(self.pairing(n))

    def run(self, n: int, **params) -> VerificationReport:
        """
        Verify the theorem for one ambient n.

        Invalid arguments raise; a mathematical failure is a report with status fail.

        Returns:
            VerificationReport with wall time filled in
        """
        check_ambient(n)
        if n < self.min_n:
            raise InvalidAmbientError(f"{self.name} needs n >= {self.min_n}, got {n}")

        report = VerificationReport(theorem=self.name, n=n, params=dict(params))
        start = time.perf_counter()
        self.verify(report, n, **params)
        report.millis = int((time.perf_counter() - start) * 1000)
        logger.info("%s n=%d %s: %s in %d ms", self.name, n, params or "", report.status.value, report.millis)
        if not report.passed:
            logger.warning("%s n=%d failed claims: %s", self.name, n, report.mismatches())
        return report

    @abstractmethod
    def verify(self, report: VerificationReport, n: int, **params) -> None:
        """
        Record expected/computed claims and witnesses on `report`.

        Args:
            report: Report to fill in
            n: Number of marked points
            params: Verifier-specific parameters
        """
        pass
