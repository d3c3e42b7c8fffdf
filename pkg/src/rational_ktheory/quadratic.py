"""The four isomorphism types of Julia algebras in the family z**2 + c.

Each verdict carries the certificate that decided it. The groups per case are
tabulated here directly; tests compare them against the polynomial formula in
:mod:`k_theory`, which derives them from (c_julia, f) instead.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, validate_data

from .config import Budget, Tolerances
from .cycle_analysis import (
    ConvergedToCycle,
    CycleKind,
    Escaped,
    Preperiodic,
    _siegel_search,
    critical_orbit,
)
from .integer_linalg import Element, FgAbGroup
from .rational_map import RationalMap

__all__ = [
    "QuadCase",
    "AlgebraName",
    "EscapeCertified",
    "AttractingCycle",
    "ParabolicCycle",
    "SiegelMultiplier",
    "MisiurewiczExact",
    "QuadVerdict",
    "Membership",
    "classify_quadratic",
    "case_k_theory",
    "case_counts",
    "mandelbrot_membership_by_k",
    "QuadraticCaseClassifier",
]


class QuadCase(str, enum.Enum):
    CASE0 = "Case0"
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3 = "Case3"
    UNRESOLVED = "Unresolved"

    @property
    def index(self) -> int:
        """0..3, or -1 for an unresolved verdict."""
        return -1 if self is QuadCase.UNRESOLVED else int(self.value[-1])


class AlgebraName(str, enum.Enum):
    O2 = "O2"
    Q2 = "Q2"
    Q2INF = "Q2inf"
    OINF = "Oinf"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class EscapeCertified:
    step: int
    exact: bool

    def to_json(self) -> dict:
        return {"kind": "EscapeCertified", "step": self.step, "exact": self.exact}


@dataclass(frozen=True)
class AttractingCycle:
    period: int
    multiplier: complex

    def to_json(self) -> dict:
        return {"kind": "AttractingCycle", "period": self.period,
                "multiplier": [self.multiplier.real, self.multiplier.imag]}


@dataclass(frozen=True)
class ParabolicCycle:
    period: int
    rotation: Fraction

    def to_json(self) -> dict:
        return {"kind": "ParabolicCycle", "period": self.period,
                "rotation": f"{self.rotation.numerator}/{self.rotation.denominator}"}


@dataclass(frozen=True)
class SiegelMultiplier:
    period: int
    rotation: float
    depth: int
    hypothesis: str = "bounded_type"

    def to_json(self) -> dict:
        return {"kind": "SiegelMultiplier", "period": self.period, "rotation": self.rotation,
                "depth": self.depth, "hypothesis": self.hypothesis}


@dataclass(frozen=True)
class MisiurewiczExact:
    preperiod: int
    period: int

    def to_json(self) -> dict:
        return {"kind": "MisiurewiczExact", "preperiod": self.preperiod, "period": self.period}


Certificate = Union[EscapeCertified, AttractingCycle, ParabolicCycle, SiegelMultiplier, MisiurewiczExact]

_ALGEBRA = {
    QuadCase.CASE0: AlgebraName.O2,
    QuadCase.CASE1: AlgebraName.Q2,
    QuadCase.CASE2: AlgebraName.Q2INF,
    QuadCase.CASE3: AlgebraName.OINF,
    QuadCase.UNRESOLVED: AlgebraName.UNKNOWN,
}

# (c_julia, f) realised by each case
_COUNTS = {
    QuadCase.CASE0: (0, 1),
    QuadCase.CASE1: (0, 2),
    QuadCase.CASE2: (1, 2),
    QuadCase.CASE3: (1, 1),
}


def case_counts(case: QuadCase) -> tuple[int, int]:
    """(c_julia, f) for a certified case."""
    return _COUNTS[QuadCase(case)]


def case_k_theory(case: QuadCase) -> tuple[FgAbGroup, FgAbGroup, str]:
    """(K_0 with unit class, K_1, unit status) for one of the four cases."""
    case = QuadCase(case)
    if case is QuadCase.CASE0:
        k0, k1 = FgAbGroup.zero(pointed=True), FgAbGroup(0)
    elif case is QuadCase.CASE1:
        k0, k1 = FgAbGroup(1, (), Element((), (0,))), FgAbGroup(1)
    elif case is QuadCase.CASE2:
        k0, k1 = FgAbGroup.free(2, unit_index=0), FgAbGroup(1)
    elif case is QuadCase.CASE3:
        k0, k1 = FgAbGroup.free(1, unit_index=0), FgAbGroup(0)
    else:
        raise ValueError("an unresolved verdict has no K-theory")
    return k0, k1, k0.unit_status


@dataclass(frozen=True)
class QuadVerdict:
    c: complex
    case: QuadCase
    certificate: Certificate | None
    k0: FgAbGroup | None
    k1: FgAbGroup | None
    algebra_name: AlgebraName

    def to_json(self) -> dict:
        return {
            "c": [self.c.real, self.c.imag],
            "case": self.case.value,
            "certificate": None if self.certificate is None else self.certificate.to_json(),
            "k0": None if self.k0 is None else self.k0.to_json(),
            "k1": None if self.k1 is None else self.k1.to_json(),
            "algebra": self.algebra_name.value,
        }


def _verdict(c: complex, case: QuadCase, cert: Certificate | None) -> QuadVerdict:
    if case is QuadCase.UNRESOLVED:
        return QuadVerdict(c, case, cert, None, None, AlgebraName.UNKNOWN)
    k0, k1, _ = case_k_theory(case)
    return QuadVerdict(c, case, cert, k0, k1, _ALGEBRA[case])


def classify_quadratic(c: complex, budget: Budget = Budget(), tol: Tolerances = Tolerances()) -> QuadVerdict:
    """Decide the case of z**2 + c from the orbit of the critical point 0.

    Case 3 is only claimed from an exact preperiodic orbit; a Siegel cycle is
    only claimed under the bounded-type hypothesis. Everything else that the
    budget cannot decide is reported as unresolved.
    """
    if budget.max_iter < 100:
        raise ValueError("classify_quadratic needs max_iter >= 100")
    c = complex(c)
    r = RationalMap.quadratic(c)
    out = critical_orbit(r, 0j, budget.max_iter, 2.0, tol, budget)
    if isinstance(out, Escaped):
        return _verdict(c, QuadCase.CASE0, EscapeCertified(out.step, out.exact))
    if isinstance(out, ConvergedToCycle):
        cyc = out.cycle
        if cyc.kind is CycleKind.PARABOLIC:
            return _verdict(c, QuadCase.CASE1, ParabolicCycle(cyc.period, cyc.classification.rotation))
        return _verdict(c, QuadCase.CASE1, AttractingCycle(cyc.period, cyc.multiplier))
    if isinstance(out, Preperiodic):
        if out.exact and out.cycle.kind is CycleKind.REPELLING:
            return _verdict(c, QuadCase.CASE3, MisiurewiczExact(out.preperiod, out.cycle.period))
        return _verdict(c, QuadCase.UNRESOLVED, None)
    for cyc in _siegel_search(r, budget, tol):
        cls = cyc.classification
        cert = SiegelMultiplier(cyc.period, cls.rotation, len(cls.partial_quotients))
        return _verdict(c, QuadCase.CASE2, cert)
    return _verdict(c, QuadCase.UNRESOLVED, None)


@dataclass(frozen=True)
class Membership:
    member: bool | None
    confidence: str
    verdict: QuadVerdict

    def to_json(self) -> dict:
        return {"member": self.member, "confidence": self.confidence, "verdict": self.verdict.to_json()}


def mandelbrot_membership_by_k(c: complex, budget: Budget = Budget(),
                               tol: Tolerances = Tolerances()) -> Membership:
    """c lies in the Mandelbrot set exactly when K_0 of its Julia algebra is nonzero."""
    v = classify_quadratic(c, budget, tol)
    if v.case is QuadCase.UNRESOLVED:
        return Membership(None, "unknown", v)
    member = not v.k0.is_trivial
    confidence = "bounded_type_hypothesis" if v.case is QuadCase.CASE2 else "certified"
    return Membership(member, confidence, v)


class QuadraticCaseClassifier(ClassifierMixin, BaseEstimator):
    """Estimator wrapper: rows of X are (Re c, Im c); predictions are case
    indices 0..3, or -1 when the budget leaves the case unresolved.

    Nothing is learned from data; ``fit`` validates input and records the
    feature count so the estimator composes with pipelines and model selection.
    """

    def __init__(self, max_iter: int = 10_000):
        self.max_iter = max_iter

    def fit(self, X, y=None):
        X = validate_data(self, X, dtype=float, ensure_min_features=2)
        if X.shape[1] != 2:
            raise ValueError(f"expected 2 features (Re c, Im c), got {X.shape[1]}")
        if self.max_iter < 100:
            raise ValueError("max_iter must be at least 100")
        self.classes_ = np.array([-1, 0, 1, 2, 3])
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "classes_")
        X = validate_data(self, X, dtype=float, reset=False)
        return np.array([case.index for case in self._cases(X)], dtype=int)

    def decision_verdicts(self, X) -> list[QuadVerdict]:
        check_is_fitted(self, "classes_")
        X = check_array(X, dtype=float)
        budget = Budget(max_iter=self.max_iter)
        return [classify_quadratic(complex(a, b), budget) for a, b in X]

    def _cases(self, X):
        budget = Budget(max_iter=self.max_iter)
        return [classify_quadratic(complex(a, b), budget).case for a, b in X]
