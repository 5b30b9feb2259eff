"""Vectorised block-sum intersections of many divisors with many F-curves at once."""
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from ..combinat.fcurves import FCurve
from ..errors import AmbientMismatchError, InvalidArgumentError

ROW_CHUNK = 2048


def curve_incidence(curves: Sequence[FCurve], n: int) -> np.ndarray:
    """
    Block membership of every label.

    Returns:
        int64 array of shape (4, len(curves), n); entry [b, f, l-1] is 1 iff label l is in block b of curve f
    """
    incidence = np.zeros((4, len(curves), n), dtype=np.int64)
    for f, curve in enumerate(curves):
        if curve.n != n:
            raise AmbientMismatchError(f"Curve {curve} does not live on M_0,{n}")
        for b, block in enumerate(curve.blocks):
            incidence[b, f, [label - 1 for label in block]] = 1
    return incidence


def block_sums(weights: np.ndarray, incidence: np.ndarray) -> np.ndarray:
    """Raw (unreduced) block sums, shape (4, rows, curves)."""
    weights = np.asarray(weights, dtype=np.int64)
    if weights.ndim != 2 or weights.shape[1] != incidence.shape[2]:
        raise InvalidArgumentError(f"Weight matrix of shape {weights.shape} does not fit curves on {incidence.shape[2]} points")
    return np.einsum("rn,bfn->brf", weights, incidence)


def parity_pairing(bits: np.ndarray, incidence: np.ndarray) -> np.ndarray:
    """m = 2 intersections: 1 exactly where all four block sums are odd."""
    sums = block_sums(bits, incidence)
    return np.all(sums % 2 == 1, axis=0).astype(np.int64)


def deg_m04_array(m: int, sums: np.ndarray) -> np.ndarray:
    """deg_m04 applied along axis 0 of an array of four weights in [0, m)."""
    ordered = np.sort(sums, axis=0)
    a1, a2, a3, a4 = ordered
    degree = np.where(a2 + a3 >= a1 + a4, a1, m - a4)
    return np.where(ordered.sum(axis=0) == 2 * m, degree, 0).astype(np.int64)


def intersection_rows(m: int, weights: np.ndarray, incidence: np.ndarray) -> np.ndarray:
    """
    Intersection numbers of D^m(a) with every curve, one row per weight vector.

    Rows whose weights do not sum to 0 mod m are trivial divisors and come out zero.
    """
    weights = np.asarray(weights, dtype=np.int64)
    sums = block_sums(weights, incidence) % m
    rows = deg_m04_array(m, sums)
    rows[weights.sum(axis=1) % m != 0] = 0
    return rows


def nontrivial_weights(m: int, n: int) -> Iterator[np.ndarray]:
    """
    All weight vectors in [0, m)^n summing to 0 mod m, in lexicographic order, in chunks.

    Yields:
        int64 arrays of shape (<= ROW_CHUNK, n)
    """
    chunk = []
    for head in product(range(m), repeat=n - 1):
        chunk.append(head + ((-sum(head)) % m,))
        if len(chunk) == ROW_CHUNK:
            yield np.array(chunk, dtype=np.int64)
            chunk = []
    if chunk:
        yield np.array(chunk, dtype=np.int64)
