"""K-groups of the algebras attached to a rational map.

The sphere and Fatou algebras depend only on counts. The Julia algebra needs
the Herman matrix: rows are the Julia critical points plus a unit row ``u``,
columns are the Herman cycles plus a unit column ``u``. Its cokernel (with the
class of ``e_u``) and kernel feed K_0 and K_1.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .cycle_analysis import FatouSpec, omega
from .exceptions import IncompleteSpec, MissingHValue, SpecValidationError
from .integer_linalg import Element, FgAbGroup, IntMatrix, cokernel, kernel

__all__ = [
    "AlgebraTag",
    "KTheoryResult",
    "HermanMatrix",
    "build_herman_matrix",
    "k_sphere",
    "k_fatou",
    "k_julia",
    "k_polynomial",
    "same_polynomial_algebra",
    "flip_herman",
]

UNIT = "u"


class AlgebraTag(str, enum.Enum):
    SPHERE = "sphere"
    FATOU = "fatou"
    JULIA = "julia"


@dataclass(frozen=True)
class KTheoryResult:
    k0: FgAbGroup
    k1: FgAbGroup
    algebra: AlgebraTag

    @property
    def unit_status(self) -> str | None:
        return self.k0.unit_status

    def to_json(self) -> dict:
        return {"algebra": self.algebra.value, "k0": self.k0.to_json(), "k1": self.k1.to_json()}


@dataclass(frozen=True)
class HermanMatrix:
    matrix: IntMatrix

    @property
    def row_labels(self) -> tuple:
        return self.matrix.row_labels

    @property
    def col_labels(self) -> tuple:
        return self.matrix.col_labels

    def unit_vector(self) -> list[int]:
        return [int(label == UNIT) for label in self.row_labels]

    def to_json(self) -> dict:
        return {"rows": list(self.row_labels), "cols": list(self.col_labels),
                "entries": self.matrix.tolist()}


def _cycle_name(i: int) -> str:
    return f"Q{i + 1}"


def build_herman_matrix(spec: FatouSpec) -> HermanMatrix:
    labels = spec.julia_critical_labels
    known = set(labels)
    cols = []
    for i, hd in enumerate(spec.herman):
        extra = set(hd.h_values) - known
        if extra:
            raise SpecValidationError(f"H values given for non-Julia critical points {sorted(extra)}")
        col = []
        for label in labels:
            if label not in hd.h_values:
                raise MissingHValue(label, _cycle_name(i))
            col.append(hd.h_values[label])
        col.append(hd.phi_minus_h)
        cols.append(col)
    cols.append([1] * len(labels) + [spec.degree - 1])
    rows = [[col[i] for col in cols] for i in range(len(labels) + 1)]
    return HermanMatrix(IntMatrix.from_rows(
        rows, cols=len(cols),
        row_labels=tuple(labels) + (UNIT,),
        col_labels=tuple(_cycle_name(i) for i in range(len(spec.herman))) + (UNIT,)))


def k_sphere(degree: int, c_sphere: int) -> KTheoryResult:
    """K_0 = Z^(c+1) with the unit a basis vector, K_1 = Z."""
    if degree < 2:
        raise ValueError("degree must be at least 2")
    if c_sphere < 2:
        raise ValueError("a map of degree >= 2 has at least two critical points")
    return KTheoryResult(FgAbGroup.free(c_sphere + 1, unit_index=0), FgAbGroup.free(1), AlgebraTag.SPHERE)


def k_fatou(c_fatou: int, f: int, h: int) -> KTheoryResult:
    """K_0 = Z^(c + f + h), K_1 = Z^(f + h); the Fatou ideal has no unit."""
    if min(c_fatou, f, h) < 0:
        raise ValueError("counts must be nonnegative")
    if h > f:
        raise ValueError(f"h = {h} exceeds f = {f}")
    return KTheoryResult(FgAbGroup(c_fatou + f + h), FgAbGroup(f + h), AlgebraTag.FATOU)


def _require_complete(spec: FatouSpec):
    if not spec.complete or spec.undetermined_labels:
        raise IncompleteSpec(
            f"critical points {list(spec.undetermined_labels)} have undetermined orbits")


def _k_julia_matrix(spec: FatouSpec) -> KTheoryResult:
    """Kernel/cokernel route, valid for every complete spec including f = 0."""
    hm = build_herman_matrix(spec)
    ker_rank, _ = kernel(hm.matrix)
    coker = cokernel(hm.matrix, hm.unit_vector())
    f, h = spec.f, spec.h
    k1 = FgAbGroup.from_factors(ker_rank + abs(f - 1), [omega(spec)])
    extra = abs(f + h - 1)
    k0 = coker.direct_sum(FgAbGroup(extra, (), Element((), (0,) * extra)))
    return KTheoryResult(k0, k1, AlgebraTag.JULIA)


def k_julia(spec: FatouSpec) -> KTheoryResult:
    """K-groups of the Julia algebra, with the unit class in K_0.

    When the Fatou set is empty the Julia set is the whole sphere and the
    sphere formula applies.
    """
    _require_complete(spec)
    spec.validate()
    if spec.f == 0:
        sphere = k_sphere(spec.degree, spec.c_julia)
        return KTheoryResult(sphere.k0, sphere.k1, AlgebraTag.JULIA)
    return _k_julia_matrix(spec)


def k_polynomial(degree: int, c_julia: int, f: int) -> KTheoryResult:
    """Julia-algebra K-groups of a polynomial, from counts alone."""
    if degree < 2:
        raise ValueError("degree must be at least 2")
    if f < 1:
        raise ValueError("a polynomial always has the basin of infinity, so f >= 1")
    if c_julia < 0:
        raise ValueError("c_julia must be nonnegative")
    k1 = FgAbGroup(f - 1)
    if c_julia == 0:
        unit = Element((1,), (0,) * (f - 1))
        k0 = FgAbGroup.from_factors(f - 1, [degree - 1], unit)
    else:
        k0 = FgAbGroup.free(c_julia + f - 1, unit_index=0)
    return KTheoryResult(k0, k1, AlgebraTag.JULIA)


def same_polynomial_algebra(a: tuple[int, int, int], b: tuple[int, int, int]) -> bool:
    """Whether two polynomials, given as (degree, c_julia, f), have isomorphic Julia algebras."""
    (da, ca, fa), (db, cb, fb) = a, b
    if fa < 1 or fb < 1:
        raise ValueError("polynomials have f >= 1")
    if ca == 0 and cb == 0:
        return da == db and fa == fb
    return ca == cb and fa == fb


def flip_herman(spec: FatouSpec, index: int) -> FatouSpec:
    """The spec with the orientation of one Herman cycle reversed."""
    herman = list(spec.herman)
    herman[index] = herman[index].flipped(spec.degree)
    return replace(spec, herman=tuple(herman))

