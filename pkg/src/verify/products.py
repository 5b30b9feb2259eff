"""Fiber products of projections: the F_{S,T} kernel characterization and the projection certificate."""
from itertools import combinations
from typing import Iterable, List, Tuple

from ..combinat.basis import rank_pic
from ..combinat.fcurves import FamilyKind, FCurve, check_st, curve_family, label_set
from ..divisors.classes import boundary_delta, boundary_value, restriction_kernel, restriction_rank, supported_span
from ..errors import InvalidArgumentError
from ..exactlin.rational import determinant
from .base import Verifier
from .report import VerificationReport


class CharGenVerifier(Verifier):
    """Classes vanishing on F_{S,T} are exactly Im(pi_S^*) + Im(pi_T^*)."""

    def __init__(self):
        super().__init__("chargen")

    def verify(self, report: VerificationReport, n: int, S: Iterable[int] = (), T: Iterable[int] = (), **params) -> None:
        s_set, t_set = check_st(n, S, T)
        report.params.update(S=s_set, T=t_set)
        pairing = self.pairing(n)
        curves = curve_family(n, FamilyKind.ST, S=s_set, T=t_set)
        kernel_basis = restriction_kernel(pairing, curves)
        image = supported_span(pairing, [s_set, t_set])
        vanishes = not curves or not pairing.columns(curves)[image, :].any()

        both = len(s_set & t_set)
        report.check("image_dim", rank_pic(len(s_set)) + rank_pic(len(t_set)) - rank_pic(both), len(image))
        report.check("image_in_kernel", True, vanishes)
        report.check("kernel_equals_image", True, vanishes and len(kernel_basis) == len(image))
        report.check(
            "span_dim",
            rank_pic(n) - rank_pic(len(s_set)) - rank_pic(len(t_set)) + rank_pic(both),
            restriction_rank(pairing, curves),
        )
        report.witness("family_size", len(curves))


def projection_subsets(n: int, i: int, j: int) -> List[Tuple[int, ...]]:
    """Subsets A of {1..n} minus {i,j} with |A| >= 2, by non-increasing size then lexicographically."""
    rest = [label for label in range(1, n + 1) if label not in (i, j)]
    return [subset for size in range(len(rest), 1, -1) for subset in combinations(rest, size)]


def projection_curve(n: int, i: int, subset: Tuple[int, ...]) -> FCurve:
    """F({i}, {min A}, A minus min A, complement of A and i)."""
    head, tail = subset[0], subset[1:]
    rest = [label for label in range(1, n + 1) if label != i and label not in subset]
    return FCurve.from_blocks([[i], [head], tail, rest], n)


class CharProjCertificateVerifier(Verifier):
    """The boundary classes delta_A pair unitriangularly with curves F_A, so the cokernel of pi_i^* is torsion free."""

    def __init__(self):
        super().__init__("charproj-cert")

    def verify(self, report: VerificationReport, n: int, i: int = 0, j: int = 0, **params) -> None:
        label_set([i, j], n, "i,j")
        if i == j:
            raise InvalidArgumentError(f"i and j must differ, got i=j={i}")
        pairing = self.pairing(n)
        subsets = projection_subsets(n, i, j)
        curves = [projection_curve(n, i, subset) for subset in subsets]
        for subset in subsets:
            # realizability self-check of every boundary functional
            boundary_delta(n, subset, pairing)

        table = [[boundary_value(curve, frozenset(subset)) for subset in subsets] for curve in curves]
        size = len(subsets)
        report.check("size", 2 ** (n - 2) - (n - 2) - 1, size)
        report.check("unit_diagonal", True, all(table[k][k] == 1 for k in range(size)))
        report.check("upper_triangular", True, all(table[k][l] == 0 for k in range(size) for l in range(k)))
        report.check("determinant", 1, int(determinant(table)))
        report.witness("curves", curves)
        report.witness("subsets", [list(subset) for subset in subsets])
        report.witness("table", table)


def verify_chargen(n: int, S: Iterable[int], T: Iterable[int], session=None) -> VerificationReport:
    verifier = CharGenVerifier()
    verifier.set_session(session)
    return verifier.run(n, S=sorted(S), T=sorted(T))


def verify_charproj_certificate(n: int, i: int, j: int, session=None) -> VerificationReport:
    verifier = CharProjCertificateVerifier()
    verifier.set_session(session)
    return verifier.run(n, i=i, j=j)
