"""Checks around psi classes: the Kapranov contraction, psi extremality and the psi expansion."""
from typing import Optional

from ..coinv.divisor import psi_functional, psi_value
from ..combinat.basis import rank_pic
from ..combinat.fcurves import FamilyKind, curve_family, label_set
from ..divisors.classes import (
    CurveFunctional,
    class_to_functional,
    expand,
    psi_in_basis,
    restriction_kernel,
    restriction_rank,
)
from ..exactlin.rational import rank
from .base import Verifier
from .report import VerificationReport


def _spans_with(kernel_basis, coords) -> bool:
    """True iff `coords` is a nonzero vector in the span of a one-dimensional kernel."""
    return any(coords) and rank(list(kernel_basis) + [coords]) == len(kernel_basis)


class CharKapVerifier(Verifier):
    """The classes vanishing on every curve with n in a block of size > 1 are the multiples of psi_n."""

    min_n = 5

    def __init__(self):
        super().__init__("charkap")

    def verify(self, report: VerificationReport, n: int, **params) -> None:
        pairing = self.pairing(n)
        curves = curve_family(n, FamilyKind.KAP)
        kernel_basis = restriction_kernel(pairing, curves)
        psi = psi_in_basis(n, n)

        report.check("kernel_dim", 1, len(kernel_basis))
        report.check("psi_spans_kernel", True, len(kernel_basis) == 1 and _spans_with(kernel_basis, psi.coords))
        report.check("span_rank", rank_pic(n) - 1, restriction_rank(pairing, curves))

        # psi_n pairs to 1 with every curve outside the family, so none lies in its span
        outside = [curve for curve in pairing.curves if psi_value(curve, n) == 1]
        report.check("curves_outside_family", len(pairing.curves) - len(curves), len(outside))
        report.witness("family_size", len(curves))
        report.witness("kernel_basis", kernel_basis)


class PsiExtremalVerifier(Verifier):
    """The curves psi_i vanishes on cut out a codimension-1 subspace spanned by psi_i."""

    def __init__(self):
        super().__init__("psi-extremal")

    def verify(self, report: VerificationReport, n: int, i: Optional[int] = None, **params) -> None:
        (label,) = label_set([n if i is None else i], n, "i")
        pairing = self.pairing(n)
        psi = psi_in_basis(n, label)
        vanishing = [curve for curve in pairing.curves if psi_value(curve, label) == 0]
        kernel_basis = restriction_kernel(pairing, vanishing)
        functional = class_to_functional(psi, pairing)

        report.check("constraint_rank", rank_pic(n) - 1, restriction_rank(pairing, vanishing))
        report.check("psi_in_kernel", True, all(functional.value(curve) == 0 for curve in vanishing))
        report.check("psi_spans_kernel", True, len(kernel_basis) == 1 and _spans_with(kernel_basis, psi.coords))
        report.witness("vanishing_curves", len(vanishing))


class PsiIdentityVerifier(Verifier):
    """The signed sum 2^(4-n) * sum (-1)^(a_i+1) D^2(a) pairs with F-curves exactly like psi_i."""

    def __init__(self):
        super().__init__("psi-identity")

    def verify(self, report: VerificationReport, n: int, i: Optional[int] = None, **params) -> None:
        (label,) = label_set([n if i is None else i], n, "i")
        pairing = self.pairing(n)
        psi = psi_in_basis(n, label)
        rule = CurveFunctional.from_mapping(n, psi_functional(n, label))

        report.check("functional_matches_rule", True, class_to_functional(psi, pairing).values == rule.values)
        expanded = expand(rule, pairing)
        report.check("rule_expands_to_psi", True, expanded is not None and expanded.coords == psi.coords)
        report.witness("coefficient", psi.coords[-1])


def verify_charkap(n: int, session=None) -> VerificationReport:
    verifier = CharKapVerifier()
    verifier.set_session(session)
    return verifier.run(n)


def verify_psi_extremal(n: int, i: int, session=None) -> VerificationReport:
    verifier = PsiExtremalVerifier()
    verifier.set_session(session)
    return verifier.run(n, i=i)


def verify_psi_identity(n: int, i: Optional[int] = None, session=None) -> VerificationReport:
    verifier = PsiIdentityVerifier()
    verifier.set_session(session)
    return verifier.run(n, i=n if i is None else i)
