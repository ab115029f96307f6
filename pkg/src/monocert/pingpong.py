"""Table construction and verification for the two ping-pong setups.

A certificate is a single full-dimensional cone F together with the group
generators; the two table halves are unions of images of F (closures of
open cones).  Which table is built depends on whether B has finite or
infinite order.  Every condition is checked over exact rational
arithmetic, and mathematical failures are recorded as failing report
steps rather than raised, so batch runs over searched or hand-edited
certificates never abort.

Each verifier stops at the first failing step (later checks would be
meaningless) and attaches a witness: for a disjointness failure the pair
of overlapping cones plus an interior ray of the overlap, for a
containment failure the uncovered cone and an escaping ray.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .cones import (
    Cone,
    ConeSet,
    first_overlap,
    first_uncovered,
    intersect,
    transform,
    transform_set,
)
from .errors import IndexNotFoundError, InvolutionPropertyError, NotFiniteOrderError
from .matrices import Matrix5, minus_identity_power, order_of, unipotency_index


class Mode(str, Enum):
    FINITE = "finite"
    INFINITE = "infinite"


class Presentation(str, Enum):
    FREE_PRODUCT = "free_product"
    AMALGAMATED = "amalgamated_over_pm_identity"


@dataclass(frozen=True)
class PingPongCertificate:
    """Seed cone plus the two generators it certifies."""

    case_id: str
    b: Matrix5
    t: Matrix5
    seed: Cone


@dataclass(frozen=True)
class StepResult:
    name: str
    passed: bool
    witness: dict | None = None
    elapsed: float = 0.0


@dataclass(frozen=True)
class VerificationReport:
    case_id: str
    mode: Mode
    eta: int | None
    order: int | None
    presentation: Presentation | None
    steps: tuple[StepResult, ...]

    @property
    def verdict(self) -> bool:
        return bool(self.steps) and all(step.passed for step in self.steps)

    def to_dict(self, include_timings: bool = False) -> dict:
        """JSON-ready dict; timings are excluded by default so that the
        canonical serialization of two identical runs is byte-identical."""
        steps = []
        for step in self.steps:
            entry: dict = {"name": step.name, "passed": step.passed}
            if step.witness is not None:
                entry["witness"] = step.witness
            if include_timings:
                entry["elapsed_s"] = round(step.elapsed, 6)
            steps.append(entry)
        return {
            "case_id": self.case_id,
            "mode": self.mode.value,
            "eta": self.eta,
            "order": self.order,
            "presentation": self.presentation.value if self.presentation else None,
            "verdict": "pass" if self.verdict else "fail",
            "steps": steps,
        }

    def to_json(self, include_timings: bool = False) -> str:
        return json.dumps(self.to_dict(include_timings), sort_keys=True)


def is_reflection(t: Matrix5) -> bool:
    """Order-2 with a fixed hyperplane: T^2 = I and rank(T - I) = 1."""
    return (t @ t).is_identity and (t - Matrix5.identity()).rank() == 1


def reversal_involution(b: Matrix5, t: Matrix5 | None = None) -> Matrix5:
    """E = B * J for J the coordinate-reversing permutation.

    Checks E^2 = I and E B E^-1 B = I, and additionally E T E^-1 T = I
    when T is supplied.  Violations raise InvolutionPropertyError: the
    identities are structural for the groups in scope, so a failure
    signals bad input rather than a certification failure.
    """
    e = b @ Matrix5.reversal_permutation()
    if not (e @ e).is_identity:
        raise InvolutionPropertyError("E^2 != I")
    if not (e @ b @ e @ b).is_identity:
        raise InvolutionPropertyError("E B E^-1 B != I")
    if t is not None and not (e @ t @ e @ t).is_identity:
        raise InvolutionPropertyError("E T E^-1 T != I")
    return e


def classify_presentation(b: Matrix5) -> Presentation:
    """Amalgamation over {+/-I} happens exactly when some power of B is -I."""
    k = minus_identity_power(b)
    return Presentation.FREE_PRODUCT if k is None else Presentation.AMALGAMATED


def _negated(cone_set: ConeSet) -> ConeSet:
    return transform_set(cone_set, -Matrix5.identity(), "-")


def _sign_symmetric(cone_set: ConeSet) -> bool:
    return set(cone_set.cones) == set(_negated(cone_set).cones)


def build_table_finite(b: Matrix5, t: Matrix5, f: Cone) -> tuple[ConeSet, ConeSet]:
    """Table halves X = {F, -F} and Y = {+/- B^i F : 0 < i < eta, B^i != -I}.

    Raises NotFiniteOrderError when B turns out not to have finite order;
    the callers of record (the verifier, the searcher) check the order
    first and never hit the exception.
    """
    eta = unipotency_index(b)
    if not (b ** eta).is_identity:
        raise NotFiniteOrderError("B^eta != I; use the infinite-order table")
    minus_identity = -Matrix5.identity()
    x = ConeSet((f, transform(f, minus_identity)), ("F", "-F"))
    cones: list[Cone] = []
    labels: list[str] = []
    power = Matrix5.identity()
    for i in range(1, eta):
        power = power @ b
        if power == minus_identity:
            continue
        image = transform(f, power)
        cones.append(image)
        labels.append(f"B^{i}F")
        cones.append(transform(image, minus_identity))
        labels.append(f"-B^{i}F")
    return x, ConeSet(tuple(cones), tuple(labels))


def build_table_infinite(
    b: Matrix5, t: Matrix5, f: Cone, e: Matrix5
) -> tuple[ConeSet, ConeSet, ConeSet]:
    """Table parts (X, Y+, Y-) for the infinite-order setup.

    X = {F0, -F0} with F0 = F ∩ -EF; Y+ collects the first eta forward
    images of +/-F under B; Y- = E Y+.
    """
    eta = unipotency_index(b)
    minus_identity = -Matrix5.identity()
    f0 = intersect(f, transform(f, minus_identity @ e))
    x = ConeSet((f0, transform(f0, minus_identity)), ("F0", "-F0"))
    cones: list[Cone] = []
    labels: list[str] = []
    power = Matrix5.identity()
    for i in range(1, eta + 1):
        power = power @ b
        image = transform(f, power)
        cones.append(image)
        labels.append(f"B^{i}F")
        cones.append(transform(image, minus_identity))
        labels.append(f"-B^{i}F")
    y_plus = ConeSet(tuple(cones), tuple(labels))
    y_minus = transform_set(y_plus, e, "E*")
    return x, y_plus, y_minus


class _StepRecorder:
    """Collects ordered step results; the caller stops at the first failure."""

    def __init__(self):
        self.steps: list[StepResult] = []

    def check(
        self, name: str, condition: Callable[[], tuple[bool, dict | None]]
    ) -> bool:
        start = time.perf_counter()
        passed, witness = condition()
        self.steps.append(
            StepResult(name, passed, witness, time.perf_counter() - start)
        )
        return passed

    def ok(self, name: str, condition: Callable[[], bool]) -> bool:
        return self.check(name, lambda: (condition(), None))

    def fail(self, name: str, reason: str) -> bool:
        return self.check(name, lambda: (False, {"reason": reason}))


def _disjointness(x: ConeSet, y: ConeSet) -> tuple[bool, dict | None]:
    overlap = first_overlap(x, y)
    if overlap is None:
        return True, None
    label1, label2, ray = overlap
    return False, {"pair": [label1, label2], "interior_ray": list(ray)}


def _containment(moved: ConeSet, targets: ConeSet) -> tuple[bool, dict | None]:
    uncovered = first_uncovered(moved, targets)
    if uncovered is None:
        return True, None
    label, ray = uncovered
    return False, {"cone": label, "escaping_ray": list(ray)}


def verify_finite_order(
    b: Matrix5, t: Matrix5, f: Cone, case_id: str = ""
) -> VerificationReport:
    """Certify the finite-order table built from seed cone F.

    Passing requires: T an order-2 reflection, B of finite order, F
    full-dimensional, both halves sign-symmetric with Y nonempty, the two
    halves disjoint as unions of open cones, and T mapping Y into X.
    """
    rec = _StepRecorder()
    eta: int | None = None
    order: int | None = None

    def run() -> None:
        nonlocal eta, order
        if not rec.ok("t-is-order-2-reflection", lambda: is_reflection(t)):
            return
        try:
            eta = unipotency_index(b)
        except IndexNotFoundError:
            rec.fail("b-has-finite-order", "unipotency cap exceeded")
            return
        order = eta if (b ** eta).is_identity else None
        if not rec.ok("b-has-finite-order", lambda: order is not None):
            return
        if not rec.ok("seed-cone-full-dimensional", lambda: f.dim == 5):
            return
        x, y = build_table_finite(b, t, f)
        if not rec.ok(
            "table-halves-sign-symmetric",
            lambda: _sign_symmetric(x) and _sign_symmetric(y),
        ):
            return
        if not rec.ok("b-orbit-nonempty", lambda: len(y) >= 1):
            return
        if not rec.check("table-halves-disjoint", lambda: _disjointness(x, y)):
            return
        rec.check(
            "t-maps-y-into-x",
            lambda: _containment(transform_set(y, t, "T*"), x),
        )

    run()
    verdict_pending = all(s.passed for s in rec.steps) and rec.steps
    presentation = classify_presentation(b) if verdict_pending else None
    return VerificationReport(
        case_id=case_id,
        mode=Mode.FINITE,
        eta=eta,
        order=order,
        presentation=presentation,
        steps=tuple(rec.steps),
    )


def verify_infinite_order(
    b: Matrix5, t: Matrix5, f: Cone, case_id: str = ""
) -> VerificationReport:
    """Certify the infinite-order table built from seed cone F.

    The table uses X = {F0, -F0} with F0 = F ∩ -EF for the reversal
    involution E, and Y = Y+ ∪ Y- with Y+ the first eta forward images
    of +/-F under B and Y- = E Y+.  Beyond disjointness and T Y ⊆ X,
    B must map X and Y+ into Y+, and B^-1 must map X and Y- into Y-.
    """
    rec = _StepRecorder()
    eta: int | None = None

    def run() -> None:
        nonlocal eta
        if not rec.ok("t-is-order-2-reflection", lambda: is_reflection(t)):
            return
        if not rec.ok("seed-cone-full-dimensional", lambda: f.dim == 5):
            return
        try:
            e = reversal_involution(b, t)
        except InvolutionPropertyError as err:
            rec.fail("reversal-involution-identities", str(err))
            return
        rec.ok("reversal-involution-identities", lambda: True)
        try:
            eta = unipotency_index(b)
        except IndexNotFoundError:
            rec.fail("b-power-unipotent", "unipotency cap exceeded")
            return
        x, y_plus, y_minus = build_table_infinite(b, t, f, e)
        y_all = y_plus.union(y_minus)
        if not rec.ok(
            "table-halves-sign-symmetric",
            lambda: _sign_symmetric(x) and _sign_symmetric(y_all),
        ):
            return
        if not rec.check("table-halves-disjoint", lambda: _disjointness(x, y_all)):
            return
        if not rec.check(
            "t-maps-y-into-x",
            lambda: _containment(transform_set(y_all, t, "T*"), x),
        ):
            return
        if not rec.check(
            "b-maps-x-and-y-plus-into-y-plus",
            lambda: _containment(transform_set(x.union(y_plus), b, "B*"), y_plus),
        ):
            return
        rec.check(
            "b-inverse-maps-x-and-y-minus-into-y-minus",
            lambda: _containment(
                transform_set(x.union(y_minus), b.inverse(), "B^-1*"), y_minus
            ),
        )

    run()
    verdict_pending = all(s.passed for s in rec.steps) and rec.steps
    return VerificationReport(
        case_id=case_id,
        mode=Mode.INFINITE,
        eta=eta,
        order=None,
        presentation=Presentation.FREE_PRODUCT if verdict_pending else None,
        steps=tuple(rec.steps),
    )


def verify(b: Matrix5, t: Matrix5, f: Cone, case_id: str = "") -> VerificationReport:
    """Dispatch to the finite- or infinite-order verifier by the order of B."""
    if order_of(b) is None:
        return verify_infinite_order(b, t, f, case_id)
    return verify_finite_order(b, t, f, case_id)
