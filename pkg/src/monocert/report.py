"""Summary reports over persisted run records.

Three output paths share one row model: a human-readable text table, a
stable-schema JSON document, and (optionally) a results directory with a
delimited summary (CSV) plus rendered figures.  Rows are ordered by case
id regardless of the order runs completed in.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from .catalog import CaseSpec

REPORT_SCHEMA = "monocert/report/v1"


@dataclass(frozen=True)
class CaseRow:
    case_id: str
    family: str
    alpha: str
    beta: str
    status_claim: str
    signature: str
    order: int | None
    eta: int | None
    mode: str
    presentation: str
    verdict: str  # pass | fail | no-certificate | unverified | found | exhausted | diverged
    steps_passed: int
    steps_total: int
    elapsed_s: float
    mismatches: tuple[str, ...]

    @property
    def flagged(self) -> bool:
        return bool(self.mismatches) or self.verdict == "fail"


def _row_from_record(case: CaseSpec, record: dict | None) -> CaseRow:
    alpha = "(" + ",".join(str(e) for e in case.alpha.entries) + ")"
    beta = "(" + ",".join(str(e) for e in case.beta.entries) + ")"
    if record is None:
        return CaseRow(
            case_id=case.id,
            family=case.family,
            alpha=alpha,
            beta=beta,
            status_claim=case.status_claim,
            signature="?",
            order=None,
            eta=None,
            mode="?",
            presentation="?",
            verdict="unverified" if case.has_certificate else "no-certificate",
            steps_passed=0,
            steps_total=0,
            elapsed_s=0.0,
            mismatches=(),
        )
    cls = record.get("classification", {})
    sig = cls.get("signature")
    report = record.get("report")
    search = record.get("search")
    if report is not None:
        steps = report.get("steps", [])
        verdict = report.get("verdict", "fail")
        elapsed = sum(s.get("elapsed_s", 0.0) for s in steps)
    else:
        steps = []
        verdict = "no-certificate"
        elapsed = 0.0
    if search is not None:
        verdict = search.get("status", verdict)
        elapsed = search.get("elapsed_s", elapsed)
    return CaseRow(
        case_id=case.id,
        family=case.family,
        alpha=alpha,
        beta=beta,
        status_claim=case.status_claim,
        signature=f"({sig[0]},{sig[1]})" if sig else "?",
        order=cls.get("order"),
        eta=cls.get("eta"),
        mode=cls.get("mode", "?"),
        presentation=cls.get("presentation", "?"),
        verdict=verdict,
        steps_passed=sum(1 for s in steps if s.get("passed")),
        steps_total=len(steps),
        elapsed_s=round(elapsed, 3),
        mismatches=tuple(cls.get("mismatches", ())),
    )


def build_rows(cases: list[CaseSpec], latest_records: dict[str, dict]) -> list[CaseRow]:
    return [_row_from_record(case, latest_records.get(case.id)) for case in cases]


def render_human(rows: list[CaseRow]) -> str:
    headers = ("case", "type", "sig", "order", "eta", "presentation", "verdict", "flags")
    table = []
    for row in rows:
        table.append(
            (
                row.case_id,
                row.family,
                row.signature,
                "inf" if row.order is None and row.mode == "infinite" else str(row.order or "?"),
                str(row.eta or "?"),
                row.presentation,
                row.verdict,
                "; ".join(row.mismatches) if row.mismatches else "",
            )
        )
    widths = [max(len(headers[i]), *(len(r[i]) for r in table)) if table else len(headers[i]) for i in range(len(headers))]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
    lines.append("  ".join("-" * w for w in widths))
    for r in table:
        lines.append("  ".join(r[i].ljust(widths[i]) for i in range(len(headers))))
    passed = sum(1 for row in rows if row.verdict in ("pass", "found"))
    failed = sum(1 for row in rows if row.verdict == "fail")
    missing = sum(1 for row in rows if row.verdict == "no-certificate")
    lines.append("")
    lines.append(
        f"{len(rows)} cases: {passed} pass, {failed} fail, {missing} without certificate"
    )
    return "\n".join(lines)


def render_json(rows: list[CaseRow]) -> str:
    payload = {
        "schema": REPORT_SCHEMA,
        "cases": [
            {
                "case_id": row.case_id,
                "family": row.family,
                "alpha": row.alpha,
                "beta": row.beta,
                "status_claim": row.status_claim,
                "signature": row.signature,
                "order": row.order,
                "eta": row.eta,
                "mode": row.mode,
                "presentation": row.presentation,
                "verdict": row.verdict,
                "steps_passed": row.steps_passed,
                "steps_total": row.steps_total,
                "mismatches": list(row.mismatches),
            }
            for row in rows
        ],
        "summary": {
            "total": len(rows),
            "pass": sum(1 for r in rows if r.verdict in ("pass", "found")),
            "fail": sum(1 for r in rows if r.verdict == "fail"),
            "no_certificate": sum(1 for r in rows if r.verdict == "no-certificate"),
            "flagged": sum(1 for r in rows if r.flagged),
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def write_csv(rows: list[CaseRow], path: Path) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            [
                "case_id",
                "family",
                "alpha",
                "beta",
                "status_claim",
                "signature",
                "order",
                "eta",
                "mode",
                "presentation",
                "verdict",
                "steps_passed",
                "steps_total",
                "elapsed_s",
                "mismatches",
            ]
        )
        for row in rows:
            writer.writerow(
                [
                    row.case_id,
                    row.family,
                    row.alpha,
                    row.beta,
                    row.status_claim,
                    row.signature,
                    "" if row.order is None else row.order,
                    "" if row.eta is None else row.eta,
                    row.mode,
                    row.presentation,
                    row.verdict,
                    row.steps_passed,
                    row.steps_total,
                    row.elapsed_s,
                    "; ".join(row.mismatches),
                ]
            )


def write_figures(rows: list[CaseRow], out_dir: Path) -> list[Path]:
    """Render summary figures next to the CSV; returns the written paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    written: list[Path] = []

    timed = [r for r in rows if r.elapsed_s > 0]
    if timed:
        fig, ax = plt.subplots(figsize=(7, max(2.5, 0.3 * len(timed))))
        names = [r.case_id for r in timed]
        values = [r.elapsed_s for r in timed]
        colors = ["#2a9d8f" if r.verdict in ("pass", "found") else "#e76f51" for r in timed]
        ax.barh(names, values, color=colors)
        ax.set_xlabel("verification wall time [s]")
        ax.invert_yaxis()
        ax.grid(axis="x", alpha=0.3)
        fig.tight_layout()
        path = out_dir / "verify_times.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)

    fig, ax = plt.subplots(figsize=(7, max(2.5, 0.28 * len(rows))))
    verdict_colors = {
        "pass": "#2a9d8f",
        "found": "#2a9d8f",
        "fail": "#e76f51",
        "no-certificate": "#bdbdbd",
        "unverified": "#e9c46a",
        "exhausted": "#e9c46a",
        "diverged": "#e9c46a",
    }
    names = [r.case_id for r in rows]
    ax.barh(
        names,
        [1] * len(rows),
        color=[verdict_colors.get(r.verdict, "#bdbdbd") for r in rows],
    )
    for i, r in enumerate(rows):
        ax.text(
            0.02,
            i,
            f"{r.signature}  {r.mode}  {r.presentation}  {r.verdict}",
            va="center",
            fontsize=8,
        )
    ax.set_xlim(0, 1)
    ax.set_xticks([])
    ax.invert_yaxis()
    ax.set_title("case overview")
    fig.tight_layout()
    path = out_dir / "case_overview.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)
    return written


def write_outputs(rows: list[CaseRow], out_dir: str | Path) -> list[Path]:
    """Write summary.csv plus figures into a directory."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "summary.csv"
    write_csv(rows, csv_path)
    return [csv_path] + write_figures(rows, out)
