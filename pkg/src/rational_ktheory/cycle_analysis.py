"""Periodic orbits, multipliers, cycle classification and the Fatou census.

Critical orbits are followed exactly (Gaussian rationals) when the map and the
starting point allow it, otherwise in floating point with a tail-recurrence
detector. A detected cycle is only reported after Newton refinement and a
multiplier check, so ``ConvergedToCycle`` and ``Preperiodic`` outcomes carry a
genuine cycle rather than an orbit snapshot.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

import numpy as np

from ._exact import GaussQ, derivative_coeffs, horner
from .config import Budget, Tolerances
from .exceptions import BudgetExceeded, NonConvergence, NotACycle, SpecValidationError
from .rational_map import (
    INFINITY,
    Poly,
    RationalMap,
    SpherePoint,
    chart_of,
    chordal_distance,
    critical_points,
    evaluate,
    from_chart,
    iterate,
    phase_of,
    point_to_json,
    poly_roots,
    to_chart,
)

__all__ = [
    "CycleKind",
    "CycleClass",
    "CycleRecord",
    "Escaped",
    "ConvergedToCycle",
    "Preperiodic",
    "Undetermined",
    "FatouKind",
    "FatouCycle",
    "HermanDescriptor",
    "Provenance",
    "FatouSpec",
    "CensusReport",
    "periodic_points",
    "multiplier",
    "classify_cycle",
    "rotation_certificate",
    "escape_bailout",
    "critical_orbit",
    "fatou_census",
    "omega",
]


# --------------------------------------------------------------------------
# classification
# --------------------------------------------------------------------------

class CycleKind(str, enum.Enum):
    SUPERATTRACTING = "superattracting"
    ATTRACTING = "attracting"
    PARABOLIC = "parabolic"
    SIEGEL_CANDIDATE = "siegel_candidate"
    CREMER_CANDIDATE = "cremer_candidate"
    REPELLING = "repelling"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class CycleClass:
    kind: CycleKind
    # Fraction for parabolic cycles, float for Siegel candidates
    rotation: Fraction | float | None = None
    partial_quotients: tuple[int, ...] = ()

    @property
    def is_attracting(self) -> bool:
        """|multiplier| <= 1 with a basin: attracting, superattracting or parabolic."""
        return self.kind in (CycleKind.SUPERATTRACTING, CycleKind.ATTRACTING, CycleKind.PARABOLIC)

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind.value}
        if isinstance(self.rotation, Fraction):
            out["rotation"] = f"{self.rotation.numerator}/{self.rotation.denominator}"
        elif self.rotation is not None:
            out["rotation"] = self.rotation
        if self.partial_quotients:
            out["partial_quotients"] = list(self.partial_quotients)
        return out


def rotation_certificate(theta: float, depth: int = 20, bound: int = 10,
                         angle_tol: float = 1e-12) -> tuple[str, tuple[int, ...]]:
    """Continued-fraction check of a rotation number in [0, 1).

    Returns ``("bounded", quotients)`` when ``depth`` partial quotients are all
    at most ``bound``; ``"unbounded"`` as soon as one exceeds it; ``"rational"``
    if the expansion terminates; ``"precision"`` when a convergent denominator
    q satisfies q**2 * angle_tol >= 1, beyond which the float no longer
    determines the quotient.
    """
    x = Fraction(theta) % 1
    quotients: list[int] = []
    q_prev, q = 0, 1
    for _ in range(depth):
        if x == 0:
            return "rational", tuple(quotients)
        y = 1 / x
        a = math.floor(y)
        x = y - a
        q_prev, q = q, a * q + q_prev
        if q * q * angle_tol >= 1:
            return "precision", tuple(quotients)
        quotients.append(a)
        if a > bound:
            return "unbounded", tuple(quotients)
    return "bounded", tuple(quotients)


def _snap_rational(theta: float, max_den: int, tol: float) -> Fraction | None:
    frac = Fraction(theta).limit_denominator(max_den)
    if abs(float(frac) - theta) > tol:
        return None
    return frac % 1


def classify_cycle(mult: complex, tol: Tolerances = Tolerances()) -> CycleClass:
    a = abs(mult)
    if a < tol.superattracting:
        return CycleClass(CycleKind.SUPERATTRACTING)
    if a < 1 - tol.unit_circle:
        return CycleClass(CycleKind.ATTRACTING)
    if a > 1 + tol.unit_circle:
        return CycleClass(CycleKind.REPELLING)
    theta = phase_of(mult)
    snapped = _snap_rational(theta, tol.max_snap_denominator, tol.rational_snap)
    if snapped is not None:
        return CycleClass(CycleKind.PARABOLIC, snapped)
    status, quotients = rotation_certificate(theta, tol.cf_depth, tol.cf_bound, tol.rotation_angle)
    if status == "bounded":
        return CycleClass(CycleKind.SIEGEL_CANDIDATE, theta, quotients)
    if status == "unbounded":
        return CycleClass(CycleKind.CREMER_CANDIDATE, theta, quotients)
    return CycleClass(CycleKind.UNRESOLVED, theta, quotients)


# --------------------------------------------------------------------------
# cycles
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CycleRecord:
    points: tuple[SpherePoint, ...]
    multiplier: complex
    classification: CycleClass
    multiplicity: int = 1

    def __post_init__(self):
        if not self.points:
            raise ValueError("a cycle has at least one point")

    @property
    def period(self) -> int:
        return len(self.points)

    @property
    def kind(self) -> CycleKind:
        return self.classification.kind

    def contains(self, z: SpherePoint, tol: float) -> bool:
        return any(chordal_distance(z, p) <= tol for p in self.points)

    def same_cycle(self, other: "CycleRecord", tol: float) -> bool:
        return self.period == other.period and all(other.contains(p, tol) for p in self.points)

    def to_json(self) -> dict:
        return {
            "points": [point_to_json(p) for p in self.points],
            "period": self.period,
            "multiplier": [self.multiplier.real, self.multiplier.imag],
            "class": self.classification.to_json(),
            "multiplicity": self.multiplicity,
        }


def _cycle_multiplier(r: RationalMap, points: Sequence[SpherePoint]) -> complex:
    """Product of chart derivatives around the cycle, no closure check."""
    lam = 1 + 0j
    n = len(points)
    for i, z in enumerate(points):
        src, dst = chart_of(z), chart_of(points[(i + 1) % n])
        _, d1, _ = r.charts.jet(src, dst, to_chart(z, src))
        lam *= d1
    return lam


def multiplier(r: RationalMap, cycle: Sequence[SpherePoint], tol: Tolerances = Tolerances()) -> complex:
    """Multiplier of a cycle, i.e. the derivative of the return map in local charts."""
    points = list(cycle)
    if not points:
        raise NotACycle("empty cycle")
    n = len(points)
    for i, z in enumerate(points):
        image = evaluate(r, z)
        if chordal_distance(image, points[(i + 1) % n]) > tol.orbit:
            raise NotACycle(f"point {i} does not map to point {(i + 1) % n}")
    try:
        return _cycle_multiplier(r, points)
    except ZeroDivisionError:
        raise NotACycle("chart map has a pole on the cycle") from None


def _make_cycle(r: RationalMap, z: SpherePoint, period: int, tol: Tolerances,
                multiplicity: int = 1) -> CycleRecord:
    points = [z]
    for _ in range(period - 1):
        points.append(evaluate(r, points[-1]))
    lam = _cycle_multiplier(r, points)
    return CycleRecord(tuple(_canonical_rotation(points)), lam, classify_cycle(lam, tol), multiplicity)


def _sort_key(z: SpherePoint):
    if z is INFINITY:
        return (1, 0.0, 0.0)
    return (0, round(z.real, 9), round(z.imag, 9))


def _canonical_rotation(points: Sequence[SpherePoint]) -> list[SpherePoint]:
    """Rotate the cycle to start at its smallest point."""
    start = min(range(len(points)), key=lambda i: _sort_key(points[i]))
    return list(points[start:]) + list(points[:start])


# --------------------------------------------------------------------------
# periodic points
# --------------------------------------------------------------------------

def _homogeneous_iterate(r: RationalMap, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients of P_n, Q_n with R^n = P_n / Q_n, both padded to degree d^n."""
    d = r.degree
    p = r.numerator.padded(d)
    q = r.denominator.padded(d)
    P, Q = p.copy(), q.copy()
    for _ in range(n - 1):
        p_pow = [np.ones(1, dtype=complex)]
        q_pow = [np.ones(1, dtype=complex)]
        for _ in range(d):
            p_pow.append(np.convolve(p_pow[-1], P))
            q_pow.append(np.convolve(q_pow[-1], Q))
        size = (len(P) - 1) * d + 1
        newP = np.zeros(size, dtype=complex)
        newQ = np.zeros(size, dtype=complex)
        for j in range(d + 1):
            term = np.convolve(p_pow[j], q_pow[d - j])
            newP[: len(term)] += p[j] * term
            newQ[: len(term)] += q[j] * term
        P, Q = newP, newQ
    return P, Q


def periodic_points(r: RationalMap, n: int, tol: Tolerances = Tolerances(),
                    budget: Budget = Budget()) -> list[CycleRecord]:
    """All solutions of R^n(z) = z on the sphere, grouped into cycles.

    Points whose exact period is a proper divisor of ``n`` come out as their
    own shorter cycles. Multiplicities are those of the fixed-point equation,
    so they sum to d**n + 1.
    """
    if n < 1:
        raise ValueError("period must be at least 1")
    r.require_dynamics()
    d = r.degree
    if d ** n > budget.periodic_points_cap:
        raise BudgetExceeded(f"d**n = {d ** n} exceeds the cap {budget.periodic_points_cap}")
    P, Q = _homogeneous_iterate(r, n)
    D = d ** n
    F = np.zeros(D + 2, dtype=complex)
    F[1:] += Q
    F[: D + 1] -= P
    f = Poly(F)
    points: list[tuple[SpherePoint, int]] = list(poly_roots(f, tol.root)) if f.degree >= 1 else []
    at_inf = D + 1 - max(f.degree, 0)
    if at_inf > 0:
        points.append((INFINITY, at_inf))
    return _group_cycles(r, points, n, tol)


def _group_cycles(r: RationalMap, points: list[tuple[SpherePoint, int]], n: int,
                  tol: Tolerances) -> list[CycleRecord]:
    locs = [z for z, _ in points]
    succ = []
    for z in locs:
        image = evaluate(r, z)
        succ.append(min(range(len(locs)), key=lambda j: chordal_distance(image, locs[j])))
    if sorted(succ) != list(range(len(locs))):
        raise NonConvergence("periodic points are not permuted by the map; roots too inaccurate")
    seen = [False] * len(locs)
    cycles = []
    for i in range(len(locs)):
        if seen[i]:
            continue
        orbit = []
        j = i
        while not seen[j]:
            seen[j] = True
            orbit.append(j)
            j = succ[j]
        if j != i or n % len(orbit):
            raise NonConvergence("periodic points do not close into cycles of period dividing n")
        pts = [locs[k] for k in orbit]
        lam = _cycle_multiplier(r, pts)
        cycles.append(CycleRecord(tuple(_canonical_rotation(pts)), lam, classify_cycle(lam, tol),
                                  points[i][1]))
    cycles.sort(key=lambda c: (c.period, _sort_key(c.points[0])))
    return cycles


# --------------------------------------------------------------------------
# Newton refinement of cycles
# --------------------------------------------------------------------------

def _return_jet(r: RationalMap, w: complex, chart: bool, p: int) -> tuple[complex, complex, complex]:
    """Value and first two derivatives of R^p written in ``chart`` at both ends."""
    g, g1, g2 = w, 1 + 0j, 0j
    src = chart
    for i in range(p):
        if i == p - 1:
            dst = chart
        else:
            dst = chart_of(evaluate(r, from_chart(g, src)))
        f, f1, f2 = r.charts.jet(src, dst, g)
        g2 = f2 * g1 * g1 + f1 * g2
        g1 = f1 * g1
        g = f
        src = dst
    return g, g1, g2


def _newton_periodic(r: RationalMap, z: SpherePoint, p: int, steps: int = 80) -> SpherePoint | None:
    """Solve R^p(z) = z near z; linear convergence at multiple roots is accepted."""
    chart = chart_of(z)
    w = to_chart(z, chart)
    try:
        for _ in range(steps):
            g, g1, _ = _return_jet(r, w, chart, p)
            if g1 == 1:
                break
            step = (g - w) / (g1 - 1)
            w -= step
            if not abs(w) <= 2.0:
                return None
            if abs(step) <= 4 * np.finfo(float).eps * max(1.0, abs(w)):
                break
    except ZeroDivisionError:
        return None
    return from_chart(w, chart)


def _newton_multiplier(r: RationalMap, z: SpherePoint, p: int, target: complex,
                       steps: int = 60) -> SpherePoint | None:
    """Solve (R^p)'(z) = target near z."""
    chart = chart_of(z)
    w = to_chart(z, chart)
    try:
        for _ in range(steps):
            _, g1, g2 = _return_jet(r, w, chart, p)
            if g2 == 0:
                break
            step = (g1 - target) / g2
            w -= step
            if not abs(w) <= 2.0:
                return None
            if abs(step) <= 4 * np.finfo(float).eps * max(1.0, abs(w)):
                break
    except ZeroDivisionError:
        return None
    return from_chart(w, chart)


def _minimal_period(r: RationalMap, z: SpherePoint, p: int, tol: float) -> int:
    for k in range(1, p):
        if p % k == 0 and chordal_distance(iterate(r, z, k), z) <= tol:
            return k
    return p


def _rational_candidates(theta: float, max_den: int, radius: float, limit: int = 6) -> list[Fraction]:
    cands = set()
    for q in range(1, max_den + 1):
        for k in (math.floor(theta * q), math.ceil(theta * q)):
            if abs(k / q - theta) <= radius:
                cands.add(Fraction(k, q) % 1)
    return sorted(cands, key=lambda f: (min(abs(float(f) - theta), abs(float(f) + 1 - theta),
                                            abs(float(f) - 1 - theta)), f.denominator))[:limit]


def _certify_parabolic(r: RationalMap, z: SpherePoint, p: int, tol: Tolerances,
                       depth: int = 0) -> CycleRecord | None:
    """Locate a parabolic cycle of period dividing ``p`` near z, or None."""
    if depth > 4:
        return None
    z_star = _newton_periodic(r, z, p)
    if z_star is None:
        return None
    try:
        _, lam, _ = _return_jet(r, to_chart(z_star, chart_of(z_star)), chart_of(z_star), p)
    except ZeroDivisionError:
        return None
    if abs(abs(lam) - 1) > tol.tail_trigger:
        return None
    for frac in _rational_candidates(phase_of(lam), tol.max_snap_denominator, 2 * tol.tail_trigger):
        target = complex(math.cos(2 * math.pi * frac), math.sin(2 * math.pi * frac))
        w = _newton_multiplier(r, z_star, p, target)
        if w is None or chordal_distance(iterate(r, w, p), w) > tol.cycle_merge:
            continue
        k = _minimal_period(r, w, p, tol.cycle_merge)
        if k < p:
            found = _certify_parabolic(r, w, k, tol, depth + 1)
            if found is not None:
                return found
            continue
        cycle = _make_cycle(r, w, p, tol)
        if cycle.kind is CycleKind.PARABOLIC:
            return cycle
    return None


def _certify_attracting(r: RationalMap, z: SpherePoint, p: int, tol: Tolerances) -> CycleRecord | None:
    z_star = _newton_periodic(r, z, p)
    if z_star is None:
        return None
    k = _minimal_period(r, z_star, p, tol.cycle_merge)
    if chordal_distance(iterate(r, z_star, k), z_star) > tol.cycle_merge:
        return None
    try:
        cycle = _make_cycle(r, z_star, k, tol)
    except ZeroDivisionError:
        return None
    return cycle if cycle.classification.is_attracting else None


# --------------------------------------------------------------------------
# critical orbits
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Escaped:
    step: int
    exact: bool = False

    def to_json(self) -> dict:
        return {"outcome": "escaped", "step": self.step, "exact": self.exact}


@dataclass(frozen=True)
class ConvergedToCycle:
    cycle: CycleRecord
    step: int
    exact: bool = False

    def to_json(self) -> dict:
        return {"outcome": "converged", "step": self.step, "exact": self.exact,
                "cycle": self.cycle.to_json()}


@dataclass(frozen=True)
class Preperiodic:
    cycle: CycleRecord
    preperiod: int
    exact: bool = False

    def to_json(self) -> dict:
        return {"outcome": "preperiodic", "preperiod": self.preperiod, "exact": self.exact,
                "cycle": self.cycle.to_json()}


@dataclass(frozen=True)
class Undetermined:
    reason: str

    def to_json(self) -> dict:
        return {"outcome": "undetermined", "reason": self.reason}


OrbitOutcome = Union[Escaped, ConvergedToCycle, Preperiodic, Undetermined]


def escape_bailout(r: RationalMap) -> float | None:
    """Radius beyond which a polynomial orbit provably tends to infinity.

    z**2 + c uses max(2, |c|). A general polynomial uses
    max(1, (sum_{k<d} |a_k| + 2) / |a_d|), where |R(z)| >= 2|z| holds.
    None for non-polynomial maps.
    """
    if not r.is_polynomial:
        return None
    c = r.quadratic_parameter
    if c is not None:
        return max(2.0, abs(c))
    q0 = r.denominator.coeffs[0]
    a = [x / q0 for x in r.numerator.coeffs]
    lead = abs(a[-1])
    return max(1.0, (sum(abs(x) for x in a[:-1]) + 2.0) / lead) * (1 + 1e-12)


def _exact_coeffs(r: RationalMap) -> list[GaussQ] | None:
    if not r.is_polynomial:
        return None
    q0 = GaussQ.from_complex(r.denominator.coeffs[0])
    return [GaussQ.from_complex(c) / q0 for c in r.numerator.coeffs]


def _exact_start(r: RationalMap, coeffs: list[GaussQ], c: complex, max_den: int = 1 << 20) -> GaussQ | None:
    """An exact Gaussian rational for the start point, when one is justified.

    Accepted if the float is already a short dyadic (small denominator) or if
    the snapped value is an exact root of the critical-point equation.
    """
    exact = GaussQ.from_complex(c)
    if exact.denominator_bits() <= 20:
        return exact
    snapped = GaussQ.from_complex(c, max_den)
    if abs(complex(snapped) - c) > 1e-9 * max(1.0, abs(c)):
        return None
    if horner(derivative_coeffs(coeffs), snapped).is_zero():
        return snapped
    return None


def _exact_orbit(r: RationalMap, c: SpherePoint, max_iter: int, tol: Tolerances,
                 budget: Budget) -> OrbitOutcome | None:
    """Exact Gaussian-rational orbit; None once exactness cannot be kept."""
    if c is INFINITY:
        return None
    coeffs = _exact_coeffs(r)
    if coeffs is None or any(x.denominator_bits() > budget.exact_bits for x in coeffs):
        return None
    z = _exact_start(r, coeffs, complex(c))
    if z is None:
        return None
    qc = r.quadratic_parameter
    if qc is not None:
        bail2 = max(Fraction(4), coeffs[0].abs2())
    else:
        bail2 = Fraction(escape_bailout(r)) ** 2
    seen = {z: 0}
    orbit = [z]
    for step in range(1, max_iter + 1):
        z = horner(coeffs, z)
        if z.abs2() > bail2:
            return Escaped(step, exact=True)
        if z.denominator_bits() > budget.exact_bits or z.numerator_bits() > 4 * budget.exact_bits:
            return None
        if z in seen:
            start = seen[z]
            cyc = orbit[start:]
            deriv = derivative_coeffs(coeffs)
            lam = GaussQ(1)
            for x in cyc:
                lam = lam * horner(deriv, x)
            lam2 = lam.abs2()
            cls = classify_cycle(complex(lam), tol)
            # exact modulus overrides the float classification when it decides
            if lam2 == 0:
                cls = CycleClass(CycleKind.SUPERATTRACTING)
            elif lam2 > 1 and cls.kind is not CycleKind.REPELLING:
                cls = CycleClass(CycleKind.REPELLING)
            elif lam2 < 1 and cls.kind in (CycleKind.REPELLING, CycleKind.PARABOLIC):
                cls = CycleClass(CycleKind.ATTRACTING)
            pts = [complex(x) for x in cyc]
            record = CycleRecord(tuple(_canonical_rotation(pts)), complex(lam), cls)
            if start == 0:
                return ConvergedToCycle(record, step, exact=True)
            return Preperiodic(record, start, exact=True)
        seen[z] = step
        orbit.append(z)
    return None


class _TailBuffer:
    """Last few orbit points embedded in R^3 for chordal distances."""

    def __init__(self, size: int):
        self.size = size
        self.data = np.zeros((size, 3))
        self.count = 0

    @staticmethod
    def embed(z: SpherePoint) -> np.ndarray:
        if z is INFINITY:
            return np.array([0.0, 0.0, 1.0])
        a = abs(z) ** 2
        return np.array([2 * z.real, 2 * z.imag, a - 1]) / (a + 1)

    def push(self, z: SpherePoint):
        self.data[self.count % self.size] = self.embed(z)
        self.count += 1

    def recurrence(self, z: SpherePoint, threshold: float) -> tuple[int, float, int | None] | None:
        """Smallest lag p whose point lies within threshold of z (chordal), its
        distance, and the smallest lag of an exact repeat if there is one."""
        n = min(self.count, self.size)
        if n == 0:
            return None
        x = self.embed(z)
        idx = (self.count - 1 - np.arange(n)) % self.size
        dist = np.linalg.norm(self.data[idx] - x, axis=1)
        hits = np.nonzero(dist <= threshold)[0]
        if hits.size == 0:
            return None
        exact = np.nonzero(dist == 0.0)[0]
        return int(hits[0]) + 1, float(dist[hits[0]]), int(exact[0]) + 1 if exact.size else None


def critical_orbit(r: RationalMap, c: SpherePoint, max_iter: int = 10_000, escape_radius: float = 2.0,
                   tol: Tolerances = Tolerances(), budget: Budget = Budget()) -> OrbitOutcome:
    """Follow the forward orbit of ``c`` until it is certified to escape, to land
    on a cycle, or the iteration budget runs out."""
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if r.degree < 2:
        raise ValueError("dynamics needs degree >= 2")
    bailout = escape_bailout(r)
    if r.is_polynomial and c is INFINITY:
        return ConvergedToCycle(_make_cycle(r, INFINITY, 1, tol), 0)
    exact = _exact_orbit(r, c, max_iter, tol, budget)
    if exact is not None:
        return exact
    radius = None if bailout is None else max(escape_radius, bailout)
    tail = _TailBuffer(budget.max_period)
    z = c
    tail.push(z)
    next_attempt = 0
    next_parabolic = 16
    for step in range(1, max_iter + 1):
        z = evaluate(r, z)
        if radius is not None and (z is INFINITY or abs(z) > radius):
            return Escaped(step)
        hit = tail.recurrence(z, tol.tail_trigger)
        tail.push(z)
        if hit is None:
            continue
        p, dist, exact_lag = hit
        if exact_lag is not None:
            # floating-point orbit is exactly periodic from step - exact_lag on
            landing = _exact_landing(r, z, exact_lag, step, tol)
            if landing is not None:
                return landing
        if dist <= tol.cycle_merge and step >= next_attempt:
            cycle = _certify_attracting(r, z, p, tol)
            if cycle is not None and cycle.contains(z, tol.cycle_merge):
                return ConvergedToCycle(cycle, step)
            next_attempt = step + 16
        elif step >= next_parabolic:
            next_parabolic = 2 * step
            cycle = _certify_parabolic(r, z, p, tol)
            if cycle is not None and cycle.contains(z, 0.05) and _approaching(r, z, cycle):
                return ConvergedToCycle(cycle, step)
    return Undetermined(f"no certificate within {max_iter} iterations")


def _exact_landing(r: RationalMap, z: SpherePoint, p: int, step: int,
                   tol: Tolerances) -> OrbitOutcome | None:
    """Outcome for an orbit whose float values repeat bit for bit.

    Only repelling landings are reported here; attracting ones go through the
    usual refinement so that the reported cycle is the refined one.
    """
    refined = _newton_periodic(r, z, p)
    if refined is None or chordal_distance(refined, z) > 1e-12:
        return None
    k = _minimal_period(r, z, p, 0.0)
    try:
        cycle = _make_cycle(r, z, k, tol)
    except ZeroDivisionError:
        return None
    if cycle.kind is not CycleKind.REPELLING:
        return None
    return Preperiodic(cycle, step - p)


def _approaching(r: RationalMap, z: SpherePoint, cycle: CycleRecord) -> bool:
    """The orbit of z moves closer to the cycle over one full period."""
    def dist(x):
        return min(chordal_distance(x, p) for p in cycle.points)
    return dist(iterate(r, z, cycle.period)) < dist(z)


# --------------------------------------------------------------------------
# Fatou data
# --------------------------------------------------------------------------

class FatouKind(str, enum.Enum):
    ATTRACTING = "attracting"
    PARABOLIC = "parabolic"
    SIEGEL = "siegel"
    HERMAN = "herman"


class Provenance(str, enum.Enum):
    COMPUTED = "computed"
    DECLARED = "declared"
    MIXED = "mixed"


@dataclass(frozen=True)
class FatouCycle:
    length: int
    kind: FatouKind
    confidence: str = "certified"
    critical_labels: tuple[str, ...] = ()
    cycle: CycleRecord | None = None

    def to_json(self) -> dict:
        out = {"length": self.length, "kind": self.kind.value, "confidence": self.confidence}
        if self.critical_labels:
            out["critical_labels"] = list(self.critical_labels)
        if self.cycle is not None:
            out["cycle"] = self.cycle.to_json()
        return out


@dataclass(frozen=True)
class HermanDescriptor:
    length: int
    h_values: Mapping[str, int]
    phi_minus_h: int
    orientation: str = "+"

    def flipped(self, degree: int) -> "HermanDescriptor":
        """The same cycle with the other orientation.

        Reversing inner and outer boundaries replaces H by length - H, and the
        constant Phi(H) - H by length * (d - 1) - (Phi(H) - H).
        """
        n = self.length
        return HermanDescriptor(
            n,
            {k: n - v for k, v in self.h_values.items()},
            n * (degree - 1) - self.phi_minus_h,
            "-" if self.orientation == "+" else "+",
        )

    def to_json(self) -> dict:
        return {"length": self.length, "h_values": dict(sorted(self.h_values.items())),
                "phi_minus_h": self.phi_minus_h, "orientation": self.orientation}


@dataclass(frozen=True)
class FatouSpec:
    degree: int
    julia_critical_labels: tuple[str, ...]
    c_fatou: int
    fatou_cycles: tuple[FatouCycle, ...] = ()
    herman: tuple[HermanDescriptor, ...] = ()
    provenance: Provenance = Provenance.DECLARED
    complete: bool = True
    undetermined_labels: tuple[str, ...] = ()

    @property
    def c_julia(self) -> int:
        return len(self.julia_critical_labels)

    @property
    def c_sphere(self) -> int:
        return self.c_julia + self.c_fatou + len(self.undetermined_labels)

    @property
    def f(self) -> int:
        return len(self.fatou_cycles)

    @property
    def h(self) -> int:
        return len(self.herman)

    def validate(self) -> "FatouSpec":
        if self.degree < 2:
            raise SpecValidationError("degree must be at least 2")
        if self.c_fatou < 0:
            raise SpecValidationError("c_fatou must be nonnegative")
        if len(set(self.julia_critical_labels)) != self.c_julia:
            raise SpecValidationError("duplicate Julia critical labels")
        if self.c_sphere > 2 * self.degree - 2:
            raise SpecValidationError("more critical points than 2d - 2")
        if self.f > 2 * self.degree - 2:
            raise SpecValidationError(f"f = {self.f} exceeds the bound 2d - 2 = {2 * self.degree - 2}")
        if self.h > self.f:
            raise SpecValidationError(f"h = {self.h} exceeds f = {self.f}")
        for fc in self.fatou_cycles:
            if fc.length < 1:
                raise SpecValidationError("Fatou cycle lengths must be positive")
        declared = sorted(fc.length for fc in self.fatou_cycles if fc.kind is FatouKind.HERMAN)
        if declared != sorted(hd.length for hd in self.herman):
            raise SpecValidationError("every Herman descriptor needs a matching Herman Fatou cycle")
        for hd in self.herman:
            if hd.length < 1:
                raise SpecValidationError("Herman cycle length must be positive")
            for label, v in hd.h_values.items():
                if not 0 <= v <= hd.length:
                    raise SpecValidationError(f"H value {v} for {label!r} outside [0, {hd.length}]")
        return self

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "c_julia": self.c_julia,
            "c_fatou": self.c_fatou,
            "julia_critical_labels": list(self.julia_critical_labels),
            "fatou_cycles": [fc.to_json() for fc in self.fatou_cycles],
            "herman": [hd.to_json() for hd in self.herman],
            "provenance": self.provenance.value,
            "complete": self.complete,
            "undetermined_labels": list(self.undetermined_labels),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FatouSpec":
        try:
            degree = int(data["degree"])
            herman = tuple(
                HermanDescriptor(int(h["length"]), {str(k): int(v) for k, v in h.get("h_values", {}).items()},
                                 int(h.get("phi_minus_h", 0)), str(h.get("orientation", "+")))
                for h in data.get("herman", ()))
            labels = data.get("julia_critical_labels")
            if labels is None:
                c_julia = int(data.get("c_julia", 0))
                named = sorted({k for h in herman for k in h.h_values})
                labels = named if named else [f"c{i + 1}" for i in range(c_julia)]
                if len(labels) != c_julia:
                    raise SpecValidationError(
                        f"c_julia = {c_julia} but Herman data names {len(labels)} critical points")
            elif "c_julia" in data and int(data["c_julia"]) != len(labels):
                raise SpecValidationError("c_julia disagrees with julia_critical_labels")
            cycles = tuple(
                FatouCycle(int(fc["length"]), FatouKind(str(fc["kind"]).lower()),
                           str(fc.get("confidence", "certified")),
                           tuple(fc.get("critical_labels", ())))
                for fc in data.get("fatou_cycles", ()))
            spec = cls(
                degree=degree,
                julia_critical_labels=tuple(str(x) for x in labels),
                c_fatou=int(data.get("c_fatou", 0)),
                fatou_cycles=cycles,
                herman=herman,
                provenance=Provenance(str(data.get("provenance", "declared")).lower()),
                complete=bool(data.get("complete", True)),
                undetermined_labels=tuple(data.get("undetermined_labels", ())),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SpecValidationError):
                raise
            raise SpecValidationError(f"malformed Fatou spec: {exc}") from None
        return spec.validate()


def omega(spec: FatouSpec | Sequence[int]) -> int:
    """gcd of the Fatou cycle lengths, 1 when there are none."""
    lengths = [fc.length for fc in spec.fatou_cycles] if isinstance(spec, FatouSpec) else list(spec)
    g = 0
    for n in lengths:
        g = math.gcd(g, n)
    return g or 1


@dataclass
class CensusReport:
    spec: FatouSpec
    critical: list = field(default_factory=list)
    outcomes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "critical_points": [
                {"label": label, "location": point_to_json(cp.location), "index": cp.index}
                for label, cp in self.critical],
            "orbits": {label: out.to_json() for label, out in self.outcomes.items()},
            "fatou_spec": self.spec.to_json(),
        }


def _fatou_length(cycle: CycleRecord) -> int:
    if cycle.kind is CycleKind.PARABOLIC:
        return cycle.period * cycle.classification.rotation.denominator
    return cycle.period


def fatou_census(r: RationalMap, budget: Budget = Budget(), tol: Tolerances = Tolerances(),
                 escape_radius: float = 2.0) -> CensusReport:
    """Classify every critical point as Fatou or Julia from its orbit.

    A critical orbit attracted to an attracting or parabolic cycle puts the
    critical point in the Fatou set; one landing exactly on a repelling or
    parabolic cycle puts it in the Julia set. Undecided orbits leave the spec
    incomplete, except for a quadratic polynomial with a Siegel candidate
    cycle, where the single free critical point must lie on the Julia set.
    """
    r.require_dynamics()
    crits = critical_points(r, tol.root)
    labelled = [(f"c{i + 1}", cp) for i, cp in enumerate(crits)]
    cycles: list[tuple[CycleRecord, list[str]]] = []
    julia, fatou, undetermined = [], [], []
    outcomes = {}

    def attach(cycle: CycleRecord, label: str):
        for known, labels in cycles:
            if known.same_cycle(cycle, tol.cycle_merge):
                labels.append(label)
                return
        cycles.append((cycle, [label]))

    infinity_cycle = _make_cycle(r, INFINITY, 1, tol) if r.is_polynomial else None
    for label, cp in labelled:
        out = critical_orbit(r, cp.location, budget.max_iter, escape_radius, tol, budget)
        outcomes[label] = out
        if isinstance(out, Escaped):
            fatou.append(label)
            attach(infinity_cycle, label)
        elif isinstance(out, ConvergedToCycle):
            fatou.append(label)
            attach(out.cycle, label)
        elif isinstance(out, Preperiodic):
            if out.cycle.kind in (CycleKind.SUPERATTRACTING, CycleKind.ATTRACTING):
                fatou.append(label)
                attach(out.cycle, label)
            elif out.cycle.kind in (CycleKind.REPELLING, CycleKind.PARABOLIC):
                julia.append(label)
            else:
                undetermined.append(label)
        else:
            undetermined.append(label)

    fatou_cycles = []
    for cycle, labels in cycles:
        if cycle.kind is CycleKind.PARABOLIC:
            confidence = "petal_count_unverified" if len(labels) > 1 else "certified"
            fatou_cycles.append(FatouCycle(_fatou_length(cycle), FatouKind.PARABOLIC, confidence,
                                           tuple(labels), cycle))
        else:
            fatou_cycles.append(FatouCycle(cycle.period, FatouKind.ATTRACTING, "certified",
                                           tuple(labels), cycle))

    if undetermined:
        siegel = _siegel_search(r, budget, tol)
        for cycle in siegel:
            fatou_cycles.append(FatouCycle(cycle.period, FatouKind.SIEGEL, "bounded_type_hypothesis",
                                           (), cycle))
        if siegel and r.quadratic_parameter is not None:
            julia.extend(undetermined)
            undetermined = []

    spec = FatouSpec(
        degree=r.degree,
        julia_critical_labels=tuple(julia),
        c_fatou=len(fatou),
        fatou_cycles=tuple(fatou_cycles),
        provenance=Provenance.COMPUTED,
        complete=not undetermined,
        undetermined_labels=tuple(undetermined),
    )
    return CensusReport(spec, labelled, outcomes)


def _siegel_search(r: RationalMap, budget: Budget, tol: Tolerances) -> list[CycleRecord]:
    found: list[CycleRecord] = []
    for n in range(1, budget.siegel_search_period + 1):
        if r.degree ** n > budget.periodic_points_cap:
            break
        try:
            cycles = periodic_points(r, n, tol, budget)
        except NonConvergence:
            continue
        for cyc in cycles:
            if cyc.period == n and cyc.kind is CycleKind.SIEGEL_CANDIDATE:
                found.append(cyc)
    return found
