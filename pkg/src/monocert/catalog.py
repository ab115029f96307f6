"""The bundled case catalog: schema, validation, loading, serialization.

A case file is one JSON object per case.  Exact values only: parameter
entries are fraction strings ("0", "1/2", "7/10") and certificates are
integer matrices given as five row arrays (one column per generating
ray).  The bundled catalog ships inside the package; `load_catalog` can
also read any directory that follows the same schema.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .cones import Cone, cone_from_rays
from .errors import (
    CoprimalityError,
    DuplicateIdError,
    MissingCertificateError,
    SchemaError,
)
from .matrices import Matrix5, Signature, companion_matrix
from .pingpong import Mode
from .polynomials import ParamVector, coprime_roots, polynomial_from_params

FAMILIES = ("o32", "o41")
_ALLOWED_KEYS = {
    "id",
    "family",
    "alpha",
    "beta",
    "claimed_signature",
    "claimed_mode",
    "status_claim",
    "certificate",
}


@dataclass(frozen=True)
class CaseSpec:
    """One catalog row: parameters, claims, and an optional certificate."""

    id: str
    family: str
    alpha: ParamVector
    beta: ParamVector
    claimed_signature: Signature | None
    claimed_mode: Mode | None
    status_claim: str
    certificate: tuple[tuple[int, ...], ...] | None

    @property
    def has_certificate(self) -> bool:
        return self.certificate is not None

    def generators(self) -> tuple[Matrix5, Matrix5, Matrix5]:
        """The matrices (A, B, T) built from the case parameters.

        Raises CoprimalityError when the two parameter polynomials share
        a root, in which case the companion pair does not generate the
        intended group.
        """
        f = polynomial_from_params(self.alpha)
        g = polynomial_from_params(self.beta)
        if not coprime_roots(f, g):
            raise CoprimalityError(f"{self.id}: parameter polynomials share a root")
        a = companion_matrix(f)
        b = companion_matrix(g)
        return a, b, b @ a.inverse()

    def certificate_cone(self) -> Cone:
        if self.certificate is None:
            raise MissingCertificateError(f"{self.id} ships no certificate")
        return cone_from_rays(self.certificate)

    def to_dict(self) -> dict:
        """JSON-ready dict; inverse of `parse_case` up to entry order."""
        data: dict = {
            "id": self.id,
            "family": self.family,
            "alpha": [str(e) for e in self.alpha.entries],
            "beta": [str(e) for e in self.beta.entries],
        }
        if self.claimed_signature is not None:
            data["claimed_signature"] = [
                self.claimed_signature.plus,
                self.claimed_signature.minus,
            ]
        if self.claimed_mode is not None:
            data["claimed_mode"] = self.claimed_mode.value
        data["status_claim"] = self.status_claim
        if self.certificate is not None:
            data["certificate"] = [list(row) for row in self.certificate]
        return data


def _parse_params(raw: object, path: str, field: str) -> ParamVector:
    if not isinstance(raw, list) or len(raw) != 5:
        raise SchemaError("expected a list of five fraction strings", path, field)
    entries = []
    for item in raw:
        if not isinstance(item, str):
            raise SchemaError(f"entry {item!r} is not a string", path, field)
        try:
            entries.append(Fraction(item))
        except (ValueError, ZeroDivisionError) as err:
            raise SchemaError(f"entry {item!r}: {err}", path, field) from err
    return ParamVector(tuple(entries))


def _parse_certificate(raw: object, path: str) -> tuple[tuple[int, ...], ...]:
    field = "certificate"
    if not isinstance(raw, list) or len(raw) != 5:
        raise SchemaError("certificate must have exactly five rows", path, field)
    rows = []
    for row in raw:
        if not isinstance(row, list) or not row:
            raise SchemaError("certificate rows must be nonempty lists", path, field)
        if any(not isinstance(x, int) or isinstance(x, bool) for x in row):
            raise SchemaError("certificate entries must be integers", path, field)
        rows.append(tuple(row))
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise SchemaError("certificate rows have differing lengths", path, field)
    for j in range(width):
        if all(rows[i][j] == 0 for i in range(5)):
            raise SchemaError(f"certificate column {j} is all zeros", path, field)
    return tuple(rows)


def parse_case(data: object, path: str = "<memory>") -> CaseSpec:
    """Validate one case object against the schema."""
    if not isinstance(data, dict):
        raise SchemaError("case file must contain a JSON object", path)
    unknown = set(data) - _ALLOWED_KEYS
    if unknown:
        raise SchemaError(f"unknown keys {sorted(unknown)}", path)
    case_id = data.get("id")
    if not isinstance(case_id, str) or not case_id:
        raise SchemaError("missing or empty id", path, "id")
    family = data.get("family")
    if family not in FAMILIES:
        raise SchemaError(f"family must be one of {FAMILIES}", path, "family")
    alpha = _parse_params(data.get("alpha"), path, "alpha")
    beta = _parse_params(data.get("beta"), path, "beta")

    claimed_signature = None
    if "claimed_signature" in data:
        raw = data["claimed_signature"]
        if (
            not isinstance(raw, list)
            or len(raw) != 2
            or any(not isinstance(x, int) or isinstance(x, bool) for x in raw)
        ):
            raise SchemaError("claimed_signature must be [plus, minus]", path, "claimed_signature")
        claimed_signature = Signature(raw[0], raw[1])

    claimed_mode = None
    if "claimed_mode" in data:
        raw = data["claimed_mode"]
        if raw not in (Mode.FINITE.value, Mode.INFINITE.value):
            raise SchemaError("claimed_mode must be 'finite' or 'infinite'", path, "claimed_mode")
        claimed_mode = Mode(raw)

    status = data.get("status_claim")
    if status not in ("thin", "open"):
        raise SchemaError("status_claim must be 'thin' or 'open'", path, "status_claim")

    certificate = None
    if "certificate" in data:
        certificate = _parse_certificate(data["certificate"], path)

    return CaseSpec(
        id=case_id,
        family=family,
        alpha=alpha,
        beta=beta,
        claimed_signature=claimed_signature,
        claimed_mode=claimed_mode,
        status_claim=status,
        certificate=certificate,
    )


def builtin_catalog_dir() -> Path:
    return Path(__file__).resolve().parent / "cases"


def load_catalog(path: str | Path | None = None) -> list[CaseSpec]:
    """Load and validate every case file (*.json) in a directory.

    Returns cases sorted by id.  Raises SchemaError on malformed files
    and DuplicateIdError when two files declare the same id.
    """
    directory = Path(path) if path is not None else builtin_catalog_dir()
    if not directory.is_dir():
        raise SchemaError(f"catalog directory {directory} does not exist")
    cases: dict[str, CaseSpec] = {}
    for file in sorted(directory.glob("*.json")):
        try:
            raw = json.loads(file.read_text())
        except json.JSONDecodeError as err:
            raise SchemaError(f"invalid JSON: {err}", str(file)) from err
        case = parse_case(raw, str(file))
        if case.id in cases:
            raise DuplicateIdError(f"case id {case.id} appears more than once")
        cases[case.id] = case
    return [cases[k] for k in sorted(cases)]


def case_by_id(cases: Iterable[CaseSpec], case_id: str) -> CaseSpec:
    for case in cases:
        if case.id == case_id:
            return case
    raise KeyError(f"no case with id {case_id!r}")
