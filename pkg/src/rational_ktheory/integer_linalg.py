"""Exact integer matrix algebra.

Smith normal form with unimodular transforms, integer kernels and cokernels,
and finitely generated abelian groups carrying an optional distinguished
element (used for the class of the unit in K_0).

Elimination runs on numpy ``int64`` arrays while every update provably stays
below 2**62 in magnitude; the moment a bound would be exceeded all working
arrays are promoted to ``object`` dtype (Python integers), so results are
always exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "IntMatrix",
    "Element",
    "FgAbGroup",
    "SmithForm",
    "smith_normal_form",
    "invariant_factors",
    "determinant",
    "SmithSummary",
    "smith_summary",
    "kernel",
    "cokernel",
    "group_iso",
    "same_pointed_group",
]

_INT64_SAFE = 2**62


@dataclass(frozen=True)
class IntMatrix:
    """Integer matrix stored as a tuple of row tuples, with optional labels.

    ``rows`` and ``cols`` are explicit so that 0 x n and n x 0 shapes keep
    their dimensions.
    """

    entries: tuple[tuple[int, ...], ...]
    rows: int
    cols: int
    row_labels: tuple | None = None
    col_labels: tuple | None = None

    def __post_init__(self):
        if len(self.entries) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.entries)}")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError(f"ragged row: expected {self.cols} columns, got {len(row)}")
        for name, labels, n in (("row", self.row_labels, self.rows), ("col", self.col_labels, self.cols)):
            if labels is None:
                continue
            if len(labels) != n:
                raise ValueError(f"{name} label count {len(labels)} does not match dimension {n}")
            if len(set(labels)) != len(labels):
                raise ValueError(f"{name} labels are not unique")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None,
                  row_labels: Sequence | None = None, col_labels: Sequence | None = None) -> "IntMatrix":
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        if cols is None:
            if not entries:
                raise ValueError("cols must be given for a matrix with no rows")
            cols = len(entries[0])
        return cls(entries, len(entries), cols,
                   None if row_labels is None else tuple(row_labels),
                   None if col_labels is None else tuple(col_labels))

    @classmethod
    def from_array(cls, arr, row_labels=None, col_labels=None) -> "IntMatrix":
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError("expected a 2-D array")
        r, c = arr.shape
        return cls(tuple(tuple(int(x) for x in arr[i]) for i in range(r)), r, c,
                   None if row_labels is None else tuple(row_labels),
                   None if col_labels is None else tuple(col_labels))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(tuple((0,) * cols for _ in range(rows)), rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_array(self) -> np.ndarray:
        out = np.empty((self.rows, self.cols), dtype=object)
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                out[i, j] = x
        return out

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)),
                         self.cols, self.rows, self.col_labels, self.row_labels)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols_b = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols_b) for row in self.entries),
            self.rows, other.cols)

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(a * int(b) for a, b in zip(row, vec)) for row in self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]


# --------------------------------------------------------------------------
# elimination engine
# --------------------------------------------------------------------------

def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(np.max(np.abs(a)))


class _Eliminator:
    """Row/column operations on A, mirrored onto U (rows) and V (columns)."""

    def __init__(self, a: np.ndarray, transforms: bool):
        r, c = a.shape
        self.exact = a.dtype == object
        self.A = a
        self.transforms = transforms
        self.U = np.eye(r, dtype=a.dtype) if transforms else None
        self.V = np.eye(c, dtype=a.dtype) if transforms else None
        if transforms and self.exact:
            self.U = _object_identity(r)
            self.V = _object_identity(c)
        self.sign_u = 1
        self.sign_v = 1

    def _promote(self):
        self.exact = True
        self.A = self.A.astype(object)
        if self.transforms:
            self.U = self.U.astype(object)
            self.V = self.V.astype(object)
        # astype(object) yields numpy scalars boxed as Python ints already

    def _guard(self, target: np.ndarray, q: np.ndarray, src: np.ndarray):
        if self.exact:
            return
        if _maxabs(target) + _maxabs(q) * _maxabs(src) >= _INT64_SAFE:
            self._promote()

    def swap_rows(self, i: int, j: int):
        if i == j:
            return
        self.A[[i, j]] = self.A[[j, i]]
        if self.transforms:
            self.U[[i, j]] = self.U[[j, i]]
        self.sign_u = -self.sign_u

    def swap_cols(self, i: int, j: int):
        if i == j:
            return
        self.A[:, [i, j]] = self.A[:, [j, i]]
        if self.transforms:
            self.V[:, [i, j]] = self.V[:, [j, i]]
        self.sign_v = -self.sign_v

    def negate_row(self, i: int):
        self.A[i] = -self.A[i]
        if self.transforms:
            self.U[i] = -self.U[i]
        self.sign_u = -self.sign_u

    def sub_rows(self, targets: np.ndarray, q: np.ndarray, src: int, start: int):
        """rows[targets] -= q * row[src] (A restricted to columns >= start)."""
        self._guard(self.A[targets, start:], q, self.A[src, start:])
        if self.transforms:
            self._guard(self.U[targets], q, self.U[src])
        q = q.astype(self.A.dtype)
        self.A[targets, start:] -= q[:, None] * self.A[src, start:][None, :]
        if self.transforms:
            self.U[targets] -= q[:, None] * self.U[src][None, :]

    def sub_cols(self, targets: np.ndarray, q: np.ndarray, src: int, start: int):
        """cols[targets] -= q * col[src] (A restricted to rows >= start)."""
        self._guard(self.A[start:, targets], q, self.A[start:, src])
        if self.transforms:
            self._guard(self.V[:, targets], q, self.V[:, src])
        q = q.astype(self.A.dtype)
        self.A[start:, targets] -= self.A[start:, src][:, None] * q[None, :]
        if self.transforms:
            self.V[:, targets] -= self.V[:, src][:, None] * q[None, :]


def _object_identity(n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def _as_work_array(m) -> np.ndarray:
    if isinstance(m, IntMatrix):
        arr = m.to_array()
    else:
        arr = np.asarray(m)
        if arr.ndim != 2:
            raise ValueError("expected a 2-D integer matrix")
        if arr.dtype != object and not np.issubdtype(arr.dtype, np.integer):
            raise TypeError(f"integer matrix required, got dtype {arr.dtype}")
    if arr.size and _maxabs(arr.astype(object)) < 2**31:
        return arr.astype(np.int64)
    out = arr.astype(object)
    return np.vectorize(int, otypes=[object])(out) if out.size else out


def _snf(m, transforms: bool = True) -> _Eliminator:
    """Diagonalize in place; the smallest-magnitude nonzero entry is pivoted first."""
    el = _Eliminator(_as_work_array(m), transforms)
    r, c = el.A.shape
    t = 0
    while t < min(r, c):
        sub = el.A[t:, t:]
        nz_i, nz_j = np.nonzero(sub)
        if nz_i.size == 0:
            break
        k = int(np.argmin(np.abs(sub[nz_i, nz_j])))
        el.swap_rows(t, int(nz_i[k]) + t)
        el.swap_cols(t, int(nz_j[k]) + t)
        while True:
            # clear the pivot column
            while True:
                col = el.A[t + 1:, t]
                idx = np.nonzero(col)[0]
                if idx.size == 0:
                    break
                p = el.A[t, t]
                el.sub_rows(idx + t + 1, col[idx] // p, t, t)
                col = el.A[t + 1:, t]
                idx = np.nonzero(col)[0]
                if idx.size == 0:
                    break
                k = int(np.argmin(np.abs(col[idx])))
                el.swap_rows(t, int(idx[k]) + t + 1)
            row = el.A[t, t + 1:]
            idx = np.nonzero(row)[0]
            if idx.size:
                p = el.A[t, t]
                el.sub_cols(idx + t + 1, row[idx] // p, t, t)
                row = el.A[t, t + 1:]
                idx = np.nonzero(row)[0]
                if idx.size:
                    k = int(np.argmin(np.abs(row[idx])))
                    el.swap_cols(t, int(idx[k]) + t + 1)
                continue
            # pivot isolated: enforce divisibility of the remaining block
            p = el.A[t, t]
            bad = np.nonzero(el.A[t + 1:, t + 1:] % p)[0]
            if bad.size == 0:
                break
            src = int(bad[0]) + t + 1
            el.sub_rows(np.array([t]), np.array([-1]), src, t)
        if el.A[t, t] < 0:
            el.negate_row(t)
        t += 1
    return el


def _diagonal(el: _Eliminator) -> list[int]:
    r, c = el.A.shape
    return [int(el.A[i, i]) for i in range(min(r, c))]


class SmithForm(NamedTuple):
    """``U @ m @ V == D`` with U, V unimodular."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.shape)) if self.D[i, i] != 0)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(m) -> SmithForm:
    el = _snf(m, transforms=True)
    return SmithForm(IntMatrix.from_array(el.U), IntMatrix.from_array(el.A), IntMatrix.from_array(el.V))


def invariant_factors(m) -> tuple[int, ...]:
    """Nonzero diagonal of the Smith form, units included."""
    return tuple(d for d in _diagonal(_snf(m, transforms=False)) if d)


def determinant(m) -> int:
    """Exact determinant of a square integer matrix."""
    arr = _as_work_array(m)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError("determinant of a non-square matrix")
    if arr.shape[0] == 0:
        return 1
    el = _snf(arr, transforms=False)
    return el.sign_u * el.sign_v * math.prod(_diagonal(el))


class SmithSummary(NamedTuple):
    """Diagonal of the Smith form with rank, cokernel and (square case) determinant."""

    diagonal: tuple[int, ...]
    rows: int
    cols: int
    determinant: int | None

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    @property
    def kernel_rank(self) -> int:
        return self.cols - self.rank

    def cokernel(self) -> "FgAbGroup":
        return FgAbGroup(self.rows - self.rank, tuple(d for d in self.diagonal if d > 1))


def smith_summary(m) -> SmithSummary:
    """One transform-free elimination; cheaper than :func:`smith_normal_form`."""
    arr = _as_work_array(m)
    r, c = arr.shape
    el = _snf(arr, transforms=False)
    diag = _diagonal(el)
    det = None
    if r == c:
        det = el.sign_u * el.sign_v * math.prod(diag) if r else 1
    return SmithSummary(tuple(diag), r, c, det)


def kernel(m) -> tuple[int, list[tuple[int, ...]]]:
    """Integer kernel: rank and a Z-basis of ``{x : m x = 0}``."""
    el = _snf(m, transforms=True)
    cols = el.A.shape[1]
    rank = sum(1 for d in _diagonal(el) if d)
    basis = [tuple(int(x) for x in el.V[:, j]) for j in range(rank, cols)]
    return cols - rank, basis


def cokernel(m, distinguished: Sequence[int] | None = None) -> "FgAbGroup":
    """``Z^rows / image(m)`` as free rank plus invariant factors.

    If ``distinguished`` is given, its class is carried into the returned
    presentation.
    """
    el = _snf(m, transforms=True)
    rows = el.A.shape[0]
    diag = _diagonal(el)
    diag = diag + [0] * (rows - len(diag))
    if distinguished is not None:
        if len(distinguished) != rows:
            raise ValueError(f"distinguished vector has length {len(distinguished)}, expected {rows}")
        y = [sum(int(el.U[i, j]) * int(distinguished[j]) for j in range(rows)) for i in range(rows)]
    torsion, tcoords, fcoords = [], [], []
    for i, d in enumerate(diag):
        if d == 1:
            continue
        if d == 0:
            if distinguished is not None:
                fcoords.append(y[i])
            continue
        torsion.append(d)
        if distinguished is not None:
            tcoords.append(y[i] % d)
    free_rank = sum(1 for d in diag if d == 0)
    elem = Element(tuple(tcoords), tuple(fcoords)) if distinguished is not None else None
    return FgAbGroup(free_rank, tuple(torsion), elem)


# --------------------------------------------------------------------------
# finitely generated abelian groups
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Element:
    """Coordinates in the (torsion, free) presentation of an FgAbGroup."""

    torsion_coords: tuple[int, ...] = ()
    free_coords: tuple[int, ...] = ()


@dataclass(frozen=True)
class FgAbGroup:
    """Z^free_rank + Z/d_1 + ... + Z/d_k with d_1 | d_2 | ... and every d_i >= 2."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()
    distinguished: Element | None = field(default=None, compare=True)

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factors must be >= 2, got {d}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"divisibility chain broken: {a} does not divide {b}")
        e = self.distinguished
        if e is not None:
            if len(e.torsion_coords) != len(self.torsion) or len(e.free_coords) != self.free_rank:
                raise ValueError("distinguished element does not fit the presentation")
            reduced = tuple(int(x) % d for x, d in zip(e.torsion_coords, self.torsion))
            object.__setattr__(self, "distinguished",
                               Element(reduced, tuple(int(x) for x in e.free_coords)))

    @classmethod
    def from_factors(cls, free_rank: int, factors: Iterable[int],
                     distinguished: Element | None = None) -> "FgAbGroup":
        """Normalize arbitrary cyclic factors (e.g. Z/2 + Z/3 -> Z/6)."""
        factors = [int(f) for f in factors]
        if any(f < 0 for f in factors):
            raise ValueError("cyclic orders must be nonnegative")
        n = len(factors) + free_rank
        diag = [[0] * n for _ in range(n)]
        for i, f in enumerate(factors):
            diag[i][i] = f
        vec = None
        if distinguished is not None:
            vec = list(distinguished.torsion_coords) + list(distinguished.free_coords)
        return cokernel(IntMatrix.from_rows(diag, cols=n), vec)

    @classmethod
    def free(cls, rank: int, unit_index: int | None = None) -> "FgAbGroup":
        unit = None
        if unit_index is not None:
            unit = Element((), tuple(int(i == unit_index) for i in range(rank)))
        return cls(rank, (), unit)

    @classmethod
    def zero(cls, pointed: bool = False) -> "FgAbGroup":
        return cls(0, (), Element() if pointed else None)

    @property
    def order(self) -> int | None:
        """Group order, or None when infinite."""
        return None if self.free_rank else math.prod(self.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def forget_unit(self) -> "FgAbGroup":
        return FgAbGroup(self.free_rank, self.torsion)

    def direct_sum(self, *others: "FgAbGroup") -> "FgAbGroup":
        """Direct sum; the distinguished element is kept only if every summand has one."""
        groups = (self,) + others
        factors = [d for g in groups for d in g.torsion]
        free = sum(g.free_rank for g in groups)
        elem = None
        if all(g.distinguished is not None for g in groups):
            elem = Element(tuple(x for g in groups for x in g.distinguished.torsion_coords),
                           tuple(x for g in groups for x in g.distinguished.free_coords))
        return FgAbGroup.from_factors(free, factors, elem)

    @property
    def unit_status(self) -> str | None:
        """Classify the distinguished element up to automorphism.

        ``"zero"``, ``"generator"`` (part of a minimal generating set, i.e.
        primitive image in the free quotient), ``"torsion_generator"``
        (generates a cyclic torsion subgroup) or ``"other"``.
        """
        e = self.distinguished
        if e is None:
            return None
        if not any(e.torsion_coords) and not any(e.free_coords):
            return "zero"
        if any(e.free_coords):
            return "generator" if reduce(math.gcd, e.free_coords, 0) == 1 else "other"
        if len(self.torsion) == 1 and math.gcd(e.torsion_coords[0], self.torsion[0]) == 1:
            return "torsion_generator"
        return "other"

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        out: dict = {"free_rank": self.free_rank, "torsion": list(self.torsion)}
        if self.distinguished is not None:
            out["unit"] = {"torsion_coords": list(self.distinguished.torsion_coords),
                           "free_coords": list(self.distinguished.free_coords)}
            out["unit_status"] = self.unit_status
        out["pretty"] = str(self)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "FgAbGroup":
        unit = data.get("unit")
        elem = None
        if unit is not None:
            elem = Element(tuple(unit.get("torsion_coords", ())), tuple(unit.get("free_coords", ())))
        return cls(int(data["free_rank"]), tuple(data.get("torsion", ())), elem)


def group_iso(a: FgAbGroup, b: FgAbGroup) -> bool:
    """Isomorphism of the underlying groups (distinguished elements ignored)."""
    return a.free_rank == b.free_rank and a.torsion == b.torsion


def same_pointed_group(a: FgAbGroup, b: FgAbGroup) -> bool:
    """Isomorphism carrying one distinguished element to the other.

    Decided by unit status for the statuses where status determines the
    automorphism orbit; falls back to coordinate equality for ``"other"``.
    """
    if not group_iso(a, b):
        return False
    sa, sb = a.unit_status, b.unit_status
    if sa != sb:
        return False
    if sa == "other":
        return a.distinguished == b.distinguished
    return True
