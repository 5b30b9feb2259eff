"""Tabular summaries of verification report batches."""
from typing import Dict, Iterable

import pandas as pd

from ..verify.report import VerificationReport, to_jsonable

SUMMARY_COLUMNS = ["theorem", "n", "params", "status", "claims", "failed", "millis"]


class ReportSummary:
    """Summary statistics for a batch of verification reports."""

    @staticmethod
    def to_frame(reports: Iterable[VerificationReport]) -> pd.DataFrame:
        """
        One row per report.

        Args:
            reports: Verification reports

        Returns:
            DataFrame with columns theorem, n, params, status, claims, failed, millis
        """
        rows = [
            {
                "theorem": report.theorem,
                "n": report.n,
                "params": ";".join(f"{key}={to_jsonable(value)}" for key, value in sorted(report.params.items())),
                "status": report.status.value,
                "claims": len(report.expected),
                "failed": ",".join(report.mismatches()),
                "millis": report.millis,
            }
            for report in reports
        ]
        return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)

    @staticmethod
    def pass_rate(frame: pd.DataFrame) -> float:
        """
        Fraction of passing reports.

        Returns:
            Pass rate in [0, 1] (0.0 for an empty batch)
        """
        if len(frame) == 0:
            return 0.0
        return float((frame["status"] == "pass").mean())

    @staticmethod
    def by_theorem(frame: pd.DataFrame) -> pd.DataFrame:
        """Runs, passes and total wall time per theorem."""
        grouped = frame.assign(passed=frame["status"] == "pass").groupby("theorem")
        return grouped.agg(runs=("n", "size"), passes=("passed", "sum"), millis=("millis", "sum"))

    @staticmethod
    def calculate_all(frame: pd.DataFrame) -> Dict[str, float]:
        return {
            "reports": len(frame),
            "passed": int((frame["status"] == "pass").sum()) if len(frame) else 0,
            "pass_rate": ReportSummary.pass_rate(frame),
            "total_millis": int(frame["millis"].sum()) if len(frame) else 0,
        }


def summarize_reports(reports: Iterable[VerificationReport]) -> pd.DataFrame:
    return ReportSummary.to_frame(reports)
