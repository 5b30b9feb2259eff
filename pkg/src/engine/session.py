"""Verification sessions: shared pairing matrices and batches of verifier runs."""
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Type

import pandas as pd

from ..analysis.summary import summarize_reports
from ..divisors.lattice import PicardLattice
from ..divisors.pairing import PairingCache, PairingMatrix, pairing_matrix
from ..errors import InvalidArgumentError
from ..verify.base import Verifier
from ..verify.integrality import CDIntVerifier
from ..verify.kapranov import CharKapVerifier, PsiExtremalVerifier, PsiIdentityVerifier
from ..verify.knudsen import CharKnuVerifier, KnudsenDualVerifier, KnuRankVerifier, QknuVerifier, TripleVerifier
from ..verify.products import CharGenVerifier, CharProjCertificateVerifier
from ..verify.report import VerificationReport
from .config import Config

logger = logging.getLogger(__name__)

VERIFIERS: Dict[str, Type[Verifier]] = {
    "charkap": CharKapVerifier,
    "charknu": CharKnuVerifier,
    "chargen": CharGenVerifier,
    "knudual": KnudsenDualVerifier,
    "charproj-cert": CharProjCertificateVerifier,
    "cdint": CDIntVerifier,
    "psi-extremal": PsiExtremalVerifier,
    "psi-identity": PsiIdentityVerifier,
    "knu-rank": KnuRankVerifier,
    "triple": TripleVerifier,
    "qknu": QknuVerifier,
}

Job = Tuple[str, int, Mapping]


class VerificationSession:
    """Runs verifiers against one configuration, sharing pairing matrices and Picard lattices."""

    def __init__(self, config: Optional[Config] = None):
        """
        Initialize the session.

        Args:
            config: Runtime configuration (defaults to Config())
        """
        self.config = config or Config()
        self.cache = PairingCache(self.config.cache_dir) if self.config.use_cache else None
        self._lattices: Dict[int, PicardLattice] = {}
        self._lock = threading.Lock()

    def pairing(self, n: int) -> PairingMatrix:
        return pairing_matrix(n, self.config.n_ceiling, self.cache, self.config.threads)

    def picard(self, n: int) -> PicardLattice:
        pairing = self.pairing(n)
        with self._lock:
            if n not in self._lattices:
                self._lattices[n] = PicardLattice(pairing)
            return self._lattices[n]

    def verifier(self, theorem: str) -> Verifier:
        """
        Instantiate a registered verifier bound to this session.

        Raises:
            InvalidArgumentError: If the theorem id is unknown
        """
        if theorem not in VERIFIERS:
            raise InvalidArgumentError(f"Unknown theorem {theorem!r}; choose from {', '.join(VERIFIERS)}")
        verifier = VERIFIERS[theorem]()
        verifier.set_session(self)
        return verifier

    def run(self, theorem: str, n: int, **params) -> VerificationReport:
        return self.verifier(theorem).run(n, **params)

    def run_many(self, jobs: Iterable[Job]) -> List[VerificationReport]:
        """
        Run a batch of (theorem, n, params) jobs.

        Jobs run on config.threads workers; reports come back in job order.
        """
        jobs = list(jobs)
        if self.config.threads > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=self.config.threads) as executor:
                return list(executor.map(lambda job: self.run(job[0], job[1], **job[2]), jobs))
        return [self.run(theorem, n, **params) for theorem, n, params in jobs]

    def summary(self, reports: Iterable[VerificationReport]) -> pd.DataFrame:
        return summarize_reports(reports)


def default_suite(n_values: Iterable[int]) -> List[Job]:
    """Parameter-free checks for each n, with the canonical parameters of the others."""
    jobs: List[Job] = []
    for n in n_values:
        jobs.append(("psi-identity", n, {"i": n}))
        jobs.append(("psi-extremal", n, {"i": n}))
        jobs.append(("cdint", n, {"part": 2}))
        if n >= 5:
            jobs.append(("charkap", n, {}))
            jobs.append(("charknu", n, {}))
            jobs.append(("knudual", n, {}))
            jobs.append(("knu-rank", n, {"curves": []}))
            jobs.append(("triple", n, {"i": 1}))
            jobs.append(("charproj-cert", n, {"i": n, "j": n - 1}))
            jobs.append(("chargen", n, {"S": list(range(1, n)), "T": [1, 2, 3, n]}))
    return jobs
