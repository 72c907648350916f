"""Report emission: key=value run reports, f(i)-i CSV data and bench summaries."""
import logging
from typing import Iterable, List

import pandas as pd

from src.DTOs.models import Permutation, SynthesisReport

logger = logging.getLogger(__name__)

# Emission order of the key=value report.
REPORT_FIELDS = (
    "method", "n", "gates", "cost", "estimate", "distance", "nop",
    "category", "verified", "seconds", "route", "standin",
)


def _format_value(key: str, value) -> str:
    if value is None:
        return "skipped" if key == "verified" else "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if key == "distance":
        return f"{value:.6f}"
    return str(value)


def format_report(report: SynthesisReport) -> str:
    """One `key=value` per line in a fixed order; block counts and warnings follow."""
    data = report.model_dump()
    lines = [f"{key}={_format_value(key, data[key])}" for key in REPORT_FIELDS]
    for kind, count in report.counts.items():
        lines.append(f"count.{kind}={count}")
    for issue in report.warnings:
        lines.append(f"warning.{issue.issue_type}={issue.message}")
    return "\n".join(lines) + "\n"


def difference_frame(p: Permutation) -> pd.DataFrame:
    """Plot-ready table of i, f(i) and f(i) - i."""
    table = p.as_array()
    inputs = pd.RangeIndex(p.size, name="i")
    return pd.DataFrame({"f_i": table, "diff": table - inputs.to_numpy()}, index=inputs).reset_index()


def write_difference_csv(p: Permutation, file_path: str) -> None:
    difference_frame(p).to_csv(file_path, index=False)
    logger.info("wrote %d difference rows to %s", p.size, file_path)


def bench_frame(rows: Iterable[dict]) -> pd.DataFrame:
    """
    Summary table of bench runs.

    Each row carries `family`, `seed` and the report fields; a `cost_per_n2n`
    column gives cost / (n * 2^n).
    """
    records: List[dict] = list(rows)
    df = pd.DataFrame.from_records(records)
    if df.empty:
        return df
    df["cost_per_n2n"] = df["cost"] / (df["n"] * (2 ** df["n"]))
    return df


def bench_row(family: str, seed: int, report: SynthesisReport) -> dict:
    row = {"family": family, "seed": seed}
    row.update({key: getattr(report, key) for key in REPORT_FIELDS})
    return row


if __name__ == '__main__':
    from src.utils.generators import gen_hwb

    print(difference_frame(gen_hwb(3)))
