"""Batch classification, verification, and search over catalog cases.

Run records are append-only JSON lines under a results directory: a
re-run appends a fresh record rather than overwriting, so the store is
an audit trail across toolkit versions.  Record timestamps and step
timings are the only non-deterministic fields; the mathematical payload
of a record is byte-stable for fixed inputs.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .catalog import CaseSpec
from .errors import MissingCertificateError
from .matrices import (
    Signature,
    invariant_form,
    minus_identity_power,
    order_of,
    signature,
    unipotency_index,
)
from .pingpong import (
    Mode,
    Presentation,
    VerificationReport,
    classify_presentation,
    verify_finite_order,
    verify_infinite_order,
)
from .search import SearchConfig, SearchOutcome, SearchStatus, run_case_search

RESULTS_DIR_ENV = "MONOCERT_RESULTS_DIR"
DEFAULT_RESULTS_DIR = "monocert-results"


@dataclass(frozen=True)
class Classification:
    """Computed invariants of one case, with claim mismatches flagged."""

    case_id: str
    signature: Signature
    order: int | None
    eta: int
    mode: Mode
    presentation: Presentation
    minus_identity_exponent: int | None
    mismatches: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "signature": [self.signature.plus, self.signature.minus],
            "order": self.order,
            "eta": self.eta,
            "mode": self.mode.value,
            "presentation": self.presentation.value,
            "minus_identity_exponent": self.minus_identity_exponent,
            "mismatches": list(self.mismatches),
        }


def classify_case(case: CaseSpec) -> Classification:
    """Signature, order, unipotency index, and presentation class of a case.

    Mismatches against the case file's claimed signature and claimed
    mode are recorded, not raised: a mismatch is a data problem the
    caller reports.
    """
    a, b, _t = case.generators()
    q = invariant_form(a, b)
    sig = signature(q)
    eta = unipotency_index(b)
    order = order_of(b)
    mode = Mode.FINITE if order is not None else Mode.INFINITE
    presentation = classify_presentation(b)
    mismatches = []
    if case.claimed_signature is not None and case.claimed_signature != sig:
        mismatches.append(
            f"signature: claimed {case.claimed_signature}, computed {sig}"
        )
    if case.claimed_mode is not None and case.claimed_mode != mode:
        mismatches.append(
            f"mode: claimed {case.claimed_mode.value}, computed {mode.value}"
        )
    return Classification(
        case_id=case.id,
        signature=sig,
        order=order,
        eta=eta,
        mode=mode,
        presentation=presentation,
        minus_identity_exponent=minus_identity_power(b),
        mismatches=tuple(mismatches),
    )


@dataclass(frozen=True)
class RunRecord:
    """One persisted run: classification plus a verification or search."""

    case_id: str
    timestamp: str
    version: str
    kind: str  # "verify" | "search"
    classification: dict
    report: dict | None
    search: dict | None = None

    def to_dict(self) -> dict:
        data = {
            "case_id": self.case_id,
            "timestamp": self.timestamp,
            "version": self.version,
            "kind": self.kind,
            "classification": self.classification,
            "report": self.report,
        }
        if self.search is not None:
            data["search"] = self.search
        return data


class ResultsStore:
    """Append-only line-delimited JSON record store."""

    def __init__(self, root: str | Path | None = None):
        if root is None:
            root = os.environ.get(RESULTS_DIR_ENV, DEFAULT_RESULTS_DIR)
        self.root = Path(root)
        self.records_file = self.root / "records.jsonl"

    def append(self, record: RunRecord) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        with self.records_file.open("a") as handle:
            handle.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")

    def load(self) -> list[dict]:
        if not self.records_file.exists():
            return []
        records = []
        with self.records_file.open() as handle:
            for line in handle:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
        return records

    def latest_by_case(self, kind: str | None = None) -> dict[str, dict]:
        latest: dict[str, dict] = {}
        for record in self.load():
            if kind is not None and record.get("kind") != kind:
                continue
            latest[record["case_id"]] = record
        return latest


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def run_verification(case: CaseSpec, store: ResultsStore | None = None) -> RunRecord:
    """Verify a case's shipped certificate and persist the outcome.

    Dispatches on the computed order of B, cross-checked against the
    claimed mode by `classify_case`.  Raises MissingCertificateError for
    open cases, which ship no certificate.
    """
    if not case.has_certificate:
        raise MissingCertificateError(f"case {case.id} has no certificate to verify")
    classification = classify_case(case)
    _a, b, t = case.generators()
    f = case.certificate_cone()
    if classification.mode == Mode.FINITE:
        report = verify_finite_order(b, t, f, case.id)
    else:
        report = verify_infinite_order(b, t, f, case.id)
    record = RunRecord(
        case_id=case.id,
        timestamp=_now(),
        version=__version__,
        kind="verify",
        classification=classification.to_dict(),
        report=report.to_dict(include_timings=True),
    )
    if store is not None:
        store.append(record)
    return record


def run_search(
    case: CaseSpec,
    config: SearchConfig | None = None,
    store: ResultsStore | None = None,
    certificate_dir: str | Path | None = None,
) -> RunRecord:
    """Search for a certificate for the case and persist the outcome.

    On a successful search the discovered certificate is written next to
    the case file (or to `certificate_dir` when given) as
    `<id>.found.json`, in the same schema as a case certificate.
    """
    config = config or SearchConfig()
    classification = classify_case(case)
    started = time.perf_counter()
    outcome = run_case_search(case, config)
    elapsed = time.perf_counter() - started
    search_payload: dict = {
        "status": outcome.status.value,
        "rounds_used": outcome.rounds_used,
        "elapsed_s": round(elapsed, 3),
        "detail": outcome.detail,
    }
    report_payload = None
    if outcome.status == SearchStatus.FOUND:
        assert outcome.cone is not None and outcome.report is not None
        certificate = [
            [ray[i] for ray in outcome.cone.rays] for i in range(5)
        ]
        search_payload["certificate"] = certificate
        report_payload = outcome.report.to_dict(include_timings=True)
        if certificate_dir is not None:
            target = Path(certificate_dir) / f"{case.id}.found.json"
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(
                json.dumps(
                    {"id": case.id, "certificate": certificate}, sort_keys=True
                )
                + "\n"
            )
    record = RunRecord(
        case_id=case.id,
        timestamp=_now(),
        version=__version__,
        kind="search",
        classification=classification.to_dict(),
        report=report_payload,
        search=search_payload,
    )
    if store is not None:
        store.append(record)
    return record
