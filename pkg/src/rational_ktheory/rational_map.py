"""Rational maps of the Riemann sphere.

Points of the sphere are Python ``complex`` numbers or the singleton
:data:`INFINITY`. Polynomials store coefficients lowest degree first.
Evaluation near infinity switches to the chart ``w = 1/z``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

from .exceptions import CoprimalityViolation, DegreeError, Indeterminate, NonConvergence

__all__ = [
    "INFINITY",
    "SpherePoint",
    "is_infinite",
    "chordal_distance",
    "Poly",
    "RationalMap",
    "CriticalPoint",
    "poly_roots",
    "relative_residual",
    "evaluate",
    "derivative",
    "iterate",
    "critical_points",
    "CHART_SWITCH_RADIUS",
    "ROOT_TOL",
]

EPS = np.finfo(float).eps
CHART_SWITCH_RADIUS = 1e8
ROOT_TOL = 1e-8
LEADING_TOL = 1e-14
# clusters wider than this (relative) are never merged into one multiple root
_CLUSTER_CAP = 1e-3
_ROOT_SEED = 0x5EED


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()
SpherePoint = Union[complex, _Infinity]


def is_infinite(z) -> bool:
    return z is INFINITY


def chordal_distance(z: SpherePoint, w: SpherePoint) -> float:
    """Chordal metric on the sphere (diameter 2)."""
    if z is INFINITY and w is INFINITY:
        return 0.0
    if z is INFINITY:
        return 2.0 / math.sqrt(1.0 + abs(w) ** 2)
    if w is INFINITY:
        return 2.0 / math.sqrt(1.0 + abs(z) ** 2)
    return 2.0 * abs(z - w) / math.sqrt((1.0 + abs(z) ** 2) * (1.0 + abs(w) ** 2))


def _check_finite(z: complex) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex value {z!r}")
    return z


# --------------------------------------------------------------------------
# polynomials
# --------------------------------------------------------------------------

class Poly:
    """Complex polynomial, coefficients lowest degree first.

    Trailing coefficients whose magnitude is at most ``tol`` times the largest
    coefficient are dropped; the zero polynomial has no coefficients and
    degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = (), tol: float = LEADING_TOL):
        cs = [_check_finite(c) for c in coeffs]
        if cs:
            scale = max(abs(c) for c in cs)
            while cs and (cs[-1] == 0 or abs(cs[-1]) <= tol * scale):
                cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def abs_eval(self, r: float) -> float:
        """sum |a_k| r^k, the scale for rounding-error bounds."""
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * r + abs(c)
        return acc

    def padded(self, n: int) -> np.ndarray:
        out = np.zeros(n + 1, dtype=complex)
        out[: len(self.coeffs)] = self.coeffs
        return out

    def reversed(self, n: int) -> "Poly":
        """``w^n p(1/w)``; requires ``n >= degree``."""
        if n < self.degree:
            raise ValueError("reversal length below degree")
        return Poly(self.padded(n)[::-1], tol=0.0)

    def derivative(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:], tol=0.0)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero or other.is_zero:
            return Poly()
        return Poly(np.convolve(self.coeffs, other.coeffs), tol=0.0)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=complex)
        a[: len(self.coeffs)] += self.coeffs
        a[: len(other.coeffs)] += other.coeffs
        return Poly(a, tol=0.0)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs], tol=0.0)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)


# --------------------------------------------------------------------------
# root finding
# --------------------------------------------------------------------------

def _horner_jet(a: np.ndarray, z: np.ndarray):
    """p(z), p'(z) and sum |a_k||z|^k for coefficient array ``a`` (lowest first)."""
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    s = np.zeros(z.shape)
    az = np.abs(z)
    for c in a[::-1]:
        dp = dp * z + p
        p = p * z + c
        s = s * az + abs(c)
    return p, dp, s


def _log_residuals(a: np.ndarray, z: np.ndarray):
    """log|p(z)| (with the rounding floor applied) and the logarithmic
    derivative p'/p, computed in the reversed chart where |z| > 1."""
    n = len(a) - 1
    inner = np.abs(z) <= 1
    g = np.empty_like(z)
    logres = np.empty(z.shape)
    small = np.empty(z.shape, dtype=bool)
    floor_factor = 4 * (n + 1) * EPS
    if inner.any():
        p, dp, s = _horner_jet(a, z[inner])
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            g[inner] = dp / p
        bound = floor_factor * s
        small[inner] = np.abs(p) <= bound
        with np.errstate(divide="ignore"):
            logres[inner] = np.log(np.maximum(np.abs(p), bound))
    outer = ~inner
    if outer.any():
        zo = z[outer]
        w = 1.0 / zo
        r, dr, s = _horner_jet(a[::-1], w)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            g[outer] = (n - w * dr / r) * w
        bound = floor_factor * s
        small[outer] = np.abs(r) <= bound
        with np.errstate(divide="ignore"):
            logres[outer] = n * np.log(np.abs(zo)) + np.log(np.maximum(np.abs(r), bound))
    return g, logres, small


def _aberth(a: np.ndarray, max_iter: int, rng: np.random.Generator) -> np.ndarray:
    """Simultaneous Aberth-Ehrlich iteration for a monic polynomial."""
    n = len(a) - 1
    radius = abs(a[0]) ** (1.0 / n)
    if not radius > 0:
        radius = 1.0
    angles = 2 * np.pi * np.arange(n) / n + 0.7 + rng.uniform(-0.25, 0.25, n) * (2 * np.pi / n)
    z = radius * (1.0 + 0.1 * rng.uniform(-1, 1, n)) * np.exp(1j * angles)
    done = np.zeros(n, dtype=bool)
    eye = np.eye(n, dtype=bool)
    for it in range(max_iter):
        g, _, small = _log_residuals(a, z)
        done |= small
        if done.all():
            return z
        diff = z[:, None] - z[None, :]
        diff[eye] = 1.0
        inv = 1.0 / diff
        inv[eye] = 0.0
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = 1.0 / (g - s)
        w = np.where(np.isfinite(w), w, 0.0)
        step = np.where(done, 0.0, w)
        z = z - step
        if np.all(np.abs(step) <= 2 * EPS * np.maximum(np.abs(z), 1e-300)):
            return z
    raise NonConvergence(f"Aberth iteration did not converge in {max_iter} iterations", max_iter)


def _cluster(a: np.ndarray, z: np.ndarray, tol: float) -> list[tuple[complex, int]]:
    """Merge approximations whose inclusion discs overlap (or lie within ``tol``)."""
    n = len(z)
    if n == 1:
        return [(complex(z[0]), 1)]
    _, logres, _ = _log_residuals(a, z)
    diff = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(diff, 1.0)
    with np.errstate(divide="ignore"):
        logprod = np.log(diff).sum(axis=1)
    rho = np.exp(np.clip(np.log(n) + logres - logprod, -745, 700))
    scale = np.maximum(1.0, np.abs(z))
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    np.fill_diagonal(diff, np.inf)
    for i in range(n):
        for j in range(i + 1, n):
            s = max(scale[i], scale[j])
            radius = max(tol * s, min(rho[i] + rho[j], _CLUSTER_CAP * s))
            if diff[i, j] <= radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [(complex(np.mean(z[idx])), len(idx)) for idx in groups.values()]


def _polish(a: np.ndarray, z: complex, mult: int = 1, steps: int = 4) -> complex:
    """Newton polish on the (mult-1)-th derivative, where an m-fold root is
    simple; keeps the iterate with least residual."""
    for _ in range(mult - 1):
        a = (a * np.arange(len(a)))[1:]
    start = z
    best, best_res = z, abs(np.polyval(a[::-1], z))
    for _ in range(steps):
        p, dp, _ = _horner_jet(a, np.array([best]))
        if dp[0] == 0:
            break
        cand = complex(best - p[0] / dp[0])
        res = abs(np.polyval(a[::-1], cand))
        if not res < best_res or abs(cand - start) > _CLUSTER_CAP * max(1.0, abs(start)):
            break
        best, best_res = cand, res
    return best


def poly_roots(p: Poly, tol: float = ROOT_TOL, max_iter: int = 2000) -> list[tuple[complex, int]]:
    """Roots of ``p`` with multiplicities.

    Exact zero roots are split off first; the rest come from Aberth-Ehrlich
    iteration started on a randomly perturbed circle (fixed seed, so results
    are reproducible). Approximations whose inclusion discs overlap, or that
    lie within ``tol`` (relative to ``max(1, |z|)``), are merged and reported
    at their centroid with the summed multiplicity.
    """
    if p.degree < 1:
        raise ValueError("poly_roots needs a polynomial of degree >= 1")
    a = np.array(p.coeffs, dtype=complex)
    k0 = 0
    while a[k0] == 0:
        k0 += 1
    out: list[tuple[complex, int]] = [(0j, k0)] if k0 else []
    a = a[k0:]
    a = a / a[-1]
    n = len(a) - 1
    if n == 0:
        return out
    if n == 1:
        return out + [(complex(-a[0]), 1)]
    rng = np.random.default_rng(_ROOT_SEED)
    z = _aberth(a, max_iter, rng)
    for root, mult in _cluster(a, z, tol):
        out.append((_polish(a, root, mult), mult))
    return out


def relative_residual(p: Poly, z: complex) -> float:
    """|p(z)| / (max_k |a_k| * max(1, |z|)^deg)."""
    scale = max(abs(c) for c in p.coeffs) * max(1.0, abs(z)) ** p.degree
    return abs(p(z)) / scale


# --------------------------------------------------------------------------
# rational maps
# --------------------------------------------------------------------------

class _ChartJets:
    """The map written in the four charts (z or 1/z on each side), with the
    first two derivatives of numerator and denominator precomputed."""

    def __init__(self, num: Poly, den: Poly, d: int):
        self._tables = {}
        for src_inf in (False, True):
            p, q = (num.reversed(d), den.reversed(d)) if src_inf else (num, den)
            for dst_inf in (False, True):
                n_, d_ = (q, p) if dst_inf else (p, q)
                self._tables[src_inf, dst_inf] = (
                    n_, n_.derivative(), n_.derivative().derivative(),
                    d_, d_.derivative(), d_.derivative().derivative())

    def value(self, src_inf: bool, dst_inf: bool, w: complex):
        n_, _, _, d_, _, _ = self._tables[src_inf, dst_inf]
        return n_(w), d_(w)

    def jet(self, src_inf: bool, dst_inf: bool, w: complex) -> tuple[complex, complex, complex]:
        """f, f', f'' of the chart map at ``w``; raises ZeroDivisionError at a pole."""
        n0, n1, n2, d0, d1, d2 = (t(w) for t in self._tables[src_inf, dst_inf])
        if d0 == 0:
            raise ZeroDivisionError("chart map has a pole here")
        f = n0 / d0
        f1 = (n1 - f * d1) / d0
        f2 = (n2 - 2 * f1 * d1 - f * d2) / d0
        return f, f1, f2


def chart_of(z: SpherePoint) -> bool:
    """True when ``z`` is represented in the chart at infinity (|z| > 1)."""
    return z is INFINITY or abs(z) > 1.0


def to_chart(z: SpherePoint, inf: bool) -> complex:
    if z is INFINITY:
        if not inf:
            raise ValueError("infinity has no affine coordinate")
        return 0j
    return 1.0 / z if inf else complex(z)


def from_chart(w: complex, inf: bool) -> SpherePoint:
    if inf:
        return INFINITY if w == 0 else 1.0 / w
    return w


@dataclass(frozen=True, eq=False)
class RationalMap:
    """R = numerator / denominator acting on the Riemann sphere."""

    numerator: Poly
    denominator: Poly

    def __post_init__(self):
        if self.denominator.is_zero:
            raise ValueError("denominator is the zero polynomial")

    @classmethod
    def from_coeffs(cls, num: Sequence, den: Sequence = (1,)) -> "RationalMap":
        return cls(Poly(num), Poly(den))

    @classmethod
    def polynomial(cls, coeffs: Sequence) -> "RationalMap":
        return cls(Poly(coeffs), Poly([1]))

    @classmethod
    def quadratic(cls, c: complex) -> "RationalMap":
        """z**2 + c."""
        return cls(Poly([c, 0, 1], tol=0.0), Poly([1]))

    @property
    def degree(self) -> int:
        return max(self.numerator.degree, self.denominator.degree, 0)

    @property
    def is_polynomial(self) -> bool:
        return self.denominator.degree == 0

    @cached_property
    def charts(self) -> _ChartJets:
        return _ChartJets(self.numerator, self.denominator, max(self.degree, 1))

    @cached_property
    def quadratic_parameter(self) -> complex | None:
        """c when the map is exactly z**2 + c, else None."""
        if not self.is_polynomial or self.numerator.degree != 2:
            return None
        q0 = self.denominator.coeffs[0]
        c0, c1, c2 = (x / q0 for x in self.numerator.coeffs)
        if c1 == 0 and c2 == 1:
            return c0
        return None

    def __call__(self, z: SpherePoint) -> SpherePoint:
        return evaluate(self, z)

    def require_dynamics(self):
        """Raise unless the map is usable for dynamics (degree >= 2, coprime)."""
        if self.degree < 2:
            raise DegreeError(f"dynamics needs degree >= 2, got {self.degree}")
        self.check_coprime()

    def check_coprime(self, tol: float = ROOT_TOL):
        p, q = self.numerator, self.denominator
        if p.degree < 1 or q.degree < 1:
            if p.is_zero:
                raise CoprimalityViolation("numerator is zero")
            return
        for zq, _ in poly_roots(q, tol):
            for zp, _ in poly_roots(p, tol):
                if abs(zp - zq) <= tol * max(1.0, abs(zq)):
                    raise CoprimalityViolation(
                        f"numerator and denominator share the root {zq:.6g}")

    def __repr__(self):
        return f"RationalMap(num={list(self.numerator.coeffs)}, den={list(self.denominator.coeffs)})"


@dataclass(frozen=True)
class CriticalPoint:
    location: SpherePoint
    index: int

    @property
    def multiplicity(self) -> int:
        return self.index - 1


def _divide(num: complex, den: complex, num_err: float, den_err: float) -> SpherePoint:
    if den == 0 or abs(den) <= den_err:
        if num == 0 or abs(num) <= num_err:
            raise Indeterminate("numerator and denominator both vanish")
        return INFINITY
    y = num / den
    if not (math.isfinite(y.real) and math.isfinite(y.imag)):
        return INFINITY
    return y


def _evaluate_affine(r: RationalMap, z: complex) -> SpherePoint:
    p, q = r.numerator, r.denominator
    az = abs(z)
    k = 4 * (r.degree + 1) * EPS
    return _divide(p(z), q(z), k * p.abs_eval(az), k * q.abs_eval(az))


def _evaluate_infinity_chart(r: RationalMap, z: SpherePoint) -> SpherePoint:
    w = 0j if z is INFINITY else 1.0 / z
    num, den = r.charts.value(True, False, w)
    d = r.degree
    k = 4 * (d + 1) * EPS
    aw = abs(w)
    return _divide(num, den, k * r.numerator.reversed(d).abs_eval(aw),
                   k * r.denominator.reversed(d).abs_eval(aw))


def evaluate(r: RationalMap, z: SpherePoint) -> SpherePoint:
    """R(z) on the sphere, using the chart at infinity beyond the switch radius."""
    if z is INFINITY or abs(z) > CHART_SWITCH_RADIUS:
        return _evaluate_infinity_chart(r, z)
    return _evaluate_affine(r, z)


def iterate(r: RationalMap, z: SpherePoint, n: int) -> SpherePoint:
    if n < 0:
        raise ValueError("iteration count must be nonnegative")
    for _ in range(n):
        z = evaluate(r, z)
    return z


def derivative(r: RationalMap) -> RationalMap:
    """(P'Q - PQ') / Q**2, formed coefficient-wise without cancellation."""
    p, q = r.numerator, r.denominator
    return RationalMap(Poly(_wronskian(p, q), tol=0.0), q * q)


def _wronskian(p: Poly, q: Poly) -> np.ndarray:
    """Coefficients of P'Q - PQ', with the i == j terms left out so the
    top coefficient cancels exactly when deg P == deg Q."""
    a, b = p.coeffs, q.coeffs
    if not a or not b:
        return np.zeros(0, dtype=complex)
    out = np.zeros(len(a) + len(b), dtype=complex)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            if i != j and i + j >= 1:
                out[i + j - 1] += (i - j) * ai * bj
    return out


def critical_points(r: RationalMap, tol: float = ROOT_TOL) -> list[CriticalPoint]:
    """All points of the sphere with local degree > 1, with their indices.

    Finite critical points (including multiple poles) are the roots of
    P'Q - PQ'; the index at infinity is whatever remains of 2d - 2.
    """
    r.require_dynamics()
    d = r.degree
    w = Poly(_wronskian(r.numerator, r.denominator))
    roots = poly_roots(w, tol) if w.degree >= 1 else []
    out = [CriticalPoint(z, m + 1) for z, m in roots]
    at_inf = 2 * d - 2 - max(w.degree, 0)
    if at_inf > 0:
        out.append(CriticalPoint(INFINITY, at_inf + 1))
    total = sum(c.multiplicity for c in out)
    if total != 2 * d - 2:
        raise NonConvergence(f"critical multiplicities sum to {total}, expected {2 * d - 2}")
    return sort_points(out)


def sort_points(points):
    """Deterministic order: finite points by (re, im), infinity last."""
    def key(item):
        z = item.location if isinstance(item, CriticalPoint) else item
        if z is INFINITY:
            return (1, 0.0, 0.0)
        return (0, round(z.real, 9), round(z.imag, 9))
    return sorted(points, key=key)


def point_to_json(z: SpherePoint):
    if z is INFINITY:
        return "inf"
    return [float(z.real), float(z.imag)]


def point_from_json(v) -> SpherePoint:
    if v == "inf":
        return INFINITY
    re, im = v
    return complex(float(re), float(im))


def phase_of(z: complex) -> float:
    """Argument divided by 2 pi, in [0, 1)."""
    t = cmath.phase(z) / (2 * math.pi)
    return t + 1.0 if t < 0 else t
