"""The pairing matrix of sl_2 basis divisors against F-curves, and its on-disk cache."""
import io
import logging
import os
import tempfile
import threading
from concurrent.futures import ThreadPoolExecutor
from functools import cached_property
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..coinv.batch import curve_incidence, parity_pairing
from ..combinat.basis import BasisVector, enum_basis
from ..combinat.fcurves import FCurve, check_ambient, enum_fcurves
from ..errors import InvalidArgumentError, ResourceLimitError
from ..exactlin.rational import GramSolver

logger = logging.getLogger(__name__)

DEFAULT_N_CEILING = 10
FORMAT_VERSION = "v1"
PAIRING_HEADER = "# mzn-pairing {version} n={n}"
COLUMN_CHUNK = 512


class PairingMatrix:
    """
    Integer matrix with rows enum_basis(n), columns enum_fcurves(n), entry D^2(a).F.

    The matrix is read-only once built.
    """

    def __init__(self, n: int, basis: Sequence[BasisVector], curves: Sequence[FCurve], matrix: np.ndarray):
        self.n = n
        self.basis: Tuple[BasisVector, ...] = tuple(basis)
        self.curves: Tuple[FCurve, ...] = tuple(curves)
        if matrix.shape != (len(self.basis), len(self.curves)):
            raise InvalidArgumentError(
                f"Pairing matrix shape {matrix.shape} does not match {len(self.basis)} basis vectors x {len(self.curves)} curves"
            )
        self.matrix = np.asarray(matrix, dtype=np.int64)
        self.matrix.setflags(write=False)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    @cached_property
    def row_index(self) -> Dict[BasisVector, int]:
        return {vector: position for position, vector in enumerate(self.basis)}

    @cached_property
    def column_index(self) -> Dict[FCurve, int]:
        return {curve: position for position, curve in enumerate(self.curves)}

    def columns(self, curves: Sequence[FCurve]) -> np.ndarray:
        """Submatrix restricted to the given curves, in the given order."""
        try:
            positions = [self.column_index[curve] for curve in curves]
        except KeyError as missing:
            raise InvalidArgumentError(f"Curve {missing.args[0]} is not an F-curve on M_0,{self.n}")
        return self.matrix[:, positions]

    @cached_property
    def solver(self) -> GramSolver:
        """Exact solver for M^T x = v (functional to class)."""
        return GramSolver(self.matrix.T)

    def __repr__(self) -> str:
        return f"PairingMatrix(n={self.n}, shape={self.shape})"


def _build(n: int, workers: int) -> PairingMatrix:
    basis = enum_basis(n)
    curves = enum_fcurves(n)
    bits = np.array([vector.bits for vector in basis], dtype=np.int64).reshape(len(basis), n)
    incidence = curve_incidence(curves, n)

    chunks = [slice(start, start + COLUMN_CHUNK) for start in range(0, len(curves), COLUMN_CHUNK)]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            blocks = list(executor.map(lambda cols: parity_pairing(bits, incidence[:, cols, :]), chunks))
    else:
        blocks = [parity_pairing(bits, incidence[:, cols, :]) for cols in chunks]
    return PairingMatrix(n, basis, curves, np.hstack(blocks))


def dumps_pairing(pairing: PairingMatrix) -> str:
    """Serialize to the cache format: header line, curve header row, one row per basis bitstring."""
    frame = pd.DataFrame(
        pairing.matrix,
        index=pd.Index([vector.encode() for vector in pairing.basis], name="basis"),
        columns=[curve.encode() for curve in pairing.curves],
    )
    return PAIRING_HEADER.format(version=FORMAT_VERSION, n=pairing.n) + "\n" + frame.to_csv()


def loads_pairing(text: str, n: int) -> PairingMatrix:
    """
    Parse the cache format for ambient n.

    Raises:
        InvalidArgumentError: If the header, labels or entries do not describe pairing_matrix(n)
    """
    header, _, body = text.partition("\n")
    if header.strip() != PAIRING_HEADER.format(version=FORMAT_VERSION, n=n):
        raise InvalidArgumentError(f"Unexpected pairing header {header!r} for n={n}")
    frame = pd.read_csv(io.StringIO(body), dtype=str, keep_default_na=False)
    if frame.columns.empty or frame.columns[0] != "basis":
        raise InvalidArgumentError("Pairing table must start with a basis column")
    # bitstrings keep their leading zeros only when read as text
    frame = frame.set_index("basis")

    basis = enum_basis(n)
    curves = enum_fcurves(n)
    if list(frame.index) != [vector.encode() for vector in basis]:
        raise InvalidArgumentError("Pairing rows do not list enum_basis(n) in order")
    if list(frame.columns) != [curve.encode() for curve in curves]:
        raise InvalidArgumentError("Pairing columns do not list enum_fcurves(n) in order")
    values = frame.to_numpy()
    if not np.isin(values, ["0", "1"]).all():
        raise InvalidArgumentError("Pairing entries must be 0 or 1")
    return PairingMatrix(n, basis, curves, (values == "1").astype(np.int64))


class PairingCache:
    """Directory of pairing matrices keyed by n and format version; writes are atomic."""

    def __init__(self, directory):
        self.directory = Path(directory).expanduser()

    def path(self, n: int) -> Path:
        return self.directory / f"pairing-{FORMAT_VERSION}-n{n}.csv"

    def load(self, n: int) -> Optional[PairingMatrix]:
        path = self.path(n)
        if not path.exists():
            logger.debug("Pairing cache miss: %s", path)
            return None
        try:
            pairing = loads_pairing(path.read_text(), n)
        except (InvalidArgumentError, ValueError) as exc:
            logger.warning("Ignoring unreadable pairing cache %s: %s", path, exc)
            return None
        logger.info("Loaded pairing matrix n=%d from %s", n, path)
        return pairing

    def store(self, pairing: PairingMatrix) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        target = self.path(pairing.n)
        handle = tempfile.NamedTemporaryFile("w", dir=self.directory, suffix=".tmp", delete=False)
        try:
            with handle:
                handle.write(dumps_pairing(pairing))
            os.replace(handle.name, target)
        except BaseException:
            Path(handle.name).unlink(missing_ok=True)
            raise
        logger.debug("Stored pairing matrix n=%d at %s", pairing.n, target)
        return target


_memo: Dict[int, PairingMatrix] = {}
_memo_lock = threading.Lock()
_build_locks: Dict[int, threading.Lock] = {}


def _build_lock(n: int) -> threading.Lock:
    with _memo_lock:
        return _build_locks.setdefault(n, threading.Lock())


def pairing_matrix(
    n: int,
    n_ceiling: int = DEFAULT_N_CEILING,
    cache: Optional[PairingCache] = None,
    workers: int = 1,
) -> PairingMatrix:
    """
    The pairing matrix of M_{0,n}: entry 1 iff all four block sums of a over F's blocks are odd.

    Args:
        n: Number of marked points
        n_ceiling: Largest n allowed
        cache: Optional on-disk cache consulted before building and filled afterwards
        workers: Threads used to build column chunks

    Returns:
        PairingMatrix (memoised per process)

    Raises:
        ResourceLimitError: If n exceeds n_ceiling
    """
    check_ambient(n)
    if n > n_ceiling:
        raise ResourceLimitError(f"n={n} exceeds the configured ceiling {n_ceiling}")

    # one lock per n: builds for different n run side by side
    with _build_lock(n):
        with _memo_lock:
            pairing = _memo.get(n)
        if pairing is not None:
            if cache is not None and not cache.path(n).exists():
                cache.store(pairing)
            return pairing

        pairing = cache.load(n) if cache is not None else None
        if pairing is None:
            pairing = _build(n, workers)
            logger.info("Built pairing matrix n=%d of shape %s", n, pairing.shape)
            if cache is not None:
                cache.store(pairing)
        with _memo_lock:
            _memo[n] = pairing
        return pairing


def clear_pairing_memo() -> None:
    """Forget in-process pairing matrices (the disk cache is untouched)."""
    with _memo_lock:
        _memo.clear()
