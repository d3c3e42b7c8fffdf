"""Cylinder-function model of the transfer operator on a Cantor Julia set.

A Cantor Julia set of a quadratic map is conjugate to the full one-sided
2-shift, and every point has local index 1. Level k of the model is the free
abelian group on the 2**k cylinders [w_1 ... w_k]; a cylinder is encoded by
the integer whose binary digits are w_1 ... w_k, most significant first.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import BudgetExceeded
from .integer_linalg import FgAbGroup, IntMatrix, cokernel, smith_summary

__all__ = [
    "MAX_LEVEL",
    "cylinder_labels",
    "phi_matrix",
    "refinement",
    "ShiftInvariants",
    "id_minus_phi_invariants",
    "connected_julia_scalar_check",
]

MAX_LEVEL = 12


def _check_level(k: int, cap: int = MAX_LEVEL):
    if k < 1:
        raise ValueError("level must be at least 1")
    if k > min(cap, MAX_LEVEL):
        raise BudgetExceeded(f"level {k} exceeds the cap {min(cap, MAX_LEVEL)}")


def cylinder_labels(k: int) -> list[str]:
    return [format(i, f"0{k}b") for i in range(2 ** k)]


def _phi_array(k: int) -> np.ndarray:
    n = 2 ** k
    out = np.zeros((n, n), dtype=np.int64)
    cols = np.arange(n)
    shifted = (cols << 1) & (n - 1)
    # dropping the first letter leaves a cylinder of level k-1; re-expand it
    out[shifted, cols] += 1
    out[shifted | 1, cols] += 1
    return out


def phi_matrix(k: int, cap: int = MAX_LEVEL) -> IntMatrix:
    """Transfer operator at level k: e_{w1...wk} -> e_{w2...wk 0} + e_{w2...wk 1}."""
    _check_level(k, cap)
    labels = cylinder_labels(k)
    return IntMatrix.from_array(_phi_array(k), labels, labels)


def refinement(k: int, cap: int = MAX_LEVEL) -> IntMatrix:
    """Inclusion of level k into level k+1: e_w -> e_{w0} + e_{w1}."""
    _check_level(k, cap)
    n = 2 ** k
    out = np.zeros((2 * n, n), dtype=np.int64)
    cols = np.arange(n)
    out[2 * cols, cols] = 1
    out[2 * cols + 1, cols] = 1
    return IntMatrix.from_array(out, cylinder_labels(k + 1), cylinder_labels(k))


@dataclass(frozen=True)
class ShiftInvariants:
    level: int
    det: int
    kernel_rank: int
    cokernel: FgAbGroup

    def to_json(self) -> dict:
        return {"k": self.level, "det": self.det, "kernel_rank": self.kernel_rank,
                "cokernel": self.cokernel.to_json()}


def id_minus_phi_invariants(k: int, cap: int = MAX_LEVEL) -> ShiftInvariants:
    """Determinant, kernel rank and cokernel of I - Phi_k, computed exactly."""
    _check_level(k, cap)
    m = np.eye(2 ** k, dtype=np.int64) - _phi_array(k)
    summary = smith_summary(m)
    return ShiftInvariants(k, summary.determinant, summary.kernel_rank, summary.cokernel())


def connected_julia_scalar_check(d: int) -> FgAbGroup:
    """On a connected Julia set without critical points the locally constant
    integer functions are the constants, and Phi(1) = d * 1; the cokernel of
    1 - d is Z/(d - 1), with the class of 1 generating it."""
    if d < 2:
        raise ValueError("degree must be at least 2")
    return cokernel(IntMatrix.from_rows([[1 - d]]), [1])
