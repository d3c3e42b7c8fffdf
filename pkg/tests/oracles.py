"""Reference computations that share no code with the package.

Each oracle uses sympy or plain enumeration. ``python3 tests/oracles.py``
rewrites tests/data/frozen_oracles.json; the tests compare the package
against the frozen values and check that the oracles still reproduce them.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import sympy

FROZEN_PATH = Path(__file__).parent / "data" / "frozen_oracles.json"


def bareiss_det(rows: list[list[int]]) -> int:
    """Fraction-free elimination; exact for integer input."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def matmul(a, b):
    return [[sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(len(b[0]) if b else 0)]
            for i in range(len(a))]


def rank(rows: list[list[int]]) -> int:
    if not rows or not rows[0]:
        return 0
    return sympy.Matrix(rows).rank()


def lattice_quotient(rows: list[list[int]], unit: list[int] | None = None) -> dict:
    """Z^n / M Z^n for square nonsingular M, by enumerating residues.

    v lies in the column lattice exactly when adj(M) v = 0 mod det(M), so
    v -> adj(M) v mod |det| embeds the quotient in (Z/|det|)^n. The quotient
    is generated from the images of the basis vectors by breadth-first closure.
    Returns the group order, the counts #{x : k x = 0} for every divisor k of
    the order, and (if ``unit`` is given) the order of its class.
    """
    m = sympy.Matrix(rows)
    det = int(m.det())
    if det == 0:
        raise ValueError("singular matrix")
    mod = abs(det)
    adj = [[int(x) for x in m.adjugate().row(i)] for i in range(m.rows)]
    n = m.rows

    def image(v):
        return tuple(sum(adj[i][j] * v[j] for j in range(n)) % mod for i in range(n))

    gens = [image([int(i == j) for j in range(n)]) for i in range(n)]
    zero = (0,) * n
    seen, frontier = {zero}, [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % mod for a, b in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt

    def order_of(x):
        k, y = 1, x
        while y != zero:
            y = tuple((a + b) % mod for a, b in zip(y, x))
            k += 1
        return k

    size = len(seen)
    counts = {k: sum(1 for x in seen if order_of(x) <= k and k % order_of(x) == 0)
              for k in sympy.divisors(size)}
    out = {"order": size, "counts": counts}
    if unit is not None:
        out["unit_order"] = order_of(image(unit))
    return out


def counts_from_factors(torsion, size: int) -> dict:
    """#{x : k x = 0} in Z/d_1 + ... + Z/d_r for each divisor k of ``size``."""
    return {k: math.prod(math.gcd(k, d) for d in torsion) for k in sympy.divisors(size)}


def sympy_invariant_factors(rows) -> list[int]:
    from sympy.polys.matrices import DomainMatrix
    from sympy.polys.matrices.normalforms import invariant_factors
    from sympy import ZZ
    dm = DomainMatrix([[ZZ(int(x)) for x in r] for r in rows], (len(rows), len(rows[0])), ZZ)
    return [abs(int(x)) for x in invariant_factors(dm) if x]


def shift_phi(k: int) -> list[list[int]]:
    """Cylinder words of length k; e_w -> e_{tail(w) 0} + e_{tail(w) 1}."""
    words = [format(i, f"0{k}b") for i in range(2 ** k)]
    index = {w: i for i, w in enumerate(words)}
    m = [[0] * len(words) for _ in words]
    for j, w in enumerate(words):
        for bit in "01":
            m[index[w[1:] + bit]][j] += 1
    return m


def gcd_sequence(lengths, n_max):
    return [sum(math.gcd(a, n) for a in lengths) for n in range(1, n_max + 1)]


def golden_partial_quotients(depth: int) -> list[int]:
    it = sympy.continued_fraction_iterator((sympy.sqrt(5) - 1) / 2)
    return [int(next(it)) for _ in range(depth + 1)][1:]


def gaussian_orbit(c: complex, steps: int) -> list[list[str]]:
    cc = sympy.Rational(Fraction(c.real)) + sympy.I * sympy.Rational(Fraction(c.imag))
    z, out = sympy.Integer(0), []
    for _ in range(steps):
        out.append([str(sympy.re(z)), str(sympy.im(z))])
        z = sympy.expand(z ** 2 + cc)
    return out


def periodic_point_count(d: int, n: int) -> int:
    """Distinct fixed points of the n-th iterate of z -> z**d, infinity included.

    z**(d**n) - z is coprime to its derivative, so distinct roots = multiplicity count.
    """
    z = sympy.symbols("z")
    poly = sympy.Poly(z ** (d ** n) - z, z)
    assert sympy.gcd(poly, poly.diff(z)).degree() == 0
    return len(sympy.roots(poly)) + 1


def critical_points_z3_minus_3z():
    z = sympy.symbols("z")
    finite = sorted(int(r) for r in sympy.solve(sympy.diff(z ** 3 - 3 * z, z), z))
    return {"finite": finite, "index_at_infinity": 3}


def fixed_point_multipliers(c: complex) -> list[list[float]]:
    cc = sympy.nsimplify(c.real) + sympy.I * sympy.nsimplify(c.imag)
    z = sympy.symbols("z")
    roots = sympy.solve(z ** 2 + cc - z, z)
    return sorted([[float(sympy.re(2 * r)), float(sympy.im(2 * r))] for r in roots])


SNF_CASES = [
    [[2, 4], [6, 8]],
    [[1, 1], [0, 2]],
    [[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]],
    [[0, -1], [-1, 0]],
    [[2, 0], [0, 3]],
]


def freeze() -> dict:
    toy = [[1, 1], [0, 2]]
    return {
        "snf": [{"matrix": m, "invariant_factors": sympy_invariant_factors(m)} for m in SNF_CASES],
        "herman_toy_quotient": {k: v for k, v in lattice_quotient(toy, [0, 1]).items()},
        "shift_det": {str(k): bareiss_det([[int(i == j) - x for j, x in enumerate(row)]
                                           for i, row in enumerate(shift_phi(k))]) for k in range(1, 7)},
        "shift_phi": {str(k): shift_phi(k) for k in (1, 2)},
        "gcd_sequences": [
            {"tuple": [1, 2], "n_max": 4, "sequence": gcd_sequence([1, 2], 4)},
            {"tuple": [3], "n_max": 6, "sequence": gcd_sequence([3], 6)},
            {"tuple": [1, 6], "n_max": 6, "sequence": gcd_sequence([1, 6], 6)},
            {"tuple": [2, 3], "n_max": 6, "sequence": gcd_sequence([2, 3], 6)},
        ],
        "golden_partial_quotients": golden_partial_quotients(20),
        "gaussian_orbit_i": gaussian_orbit(1j, 6),
        "gaussian_orbit_minus2": gaussian_orbit(-2 + 0j, 5),
        "periodic_counts_z2": {str(n): periodic_point_count(2, n) for n in (1, 2, 3)},
        "critical_z3_minus_3z": critical_points_z3_minus_3z(),
        "fixed_multipliers": {str(c): fixed_point_multipliers(c) for c in (0.25, -1.0, 0.3 + 0.2j)},
    }


def load_frozen() -> dict:
    return json.loads(FROZEN_PATH.read_text())


def _normalise(obj):
    """JSON round trip so freshly computed values compare equal to frozen ones."""
    return json.loads(json.dumps(obj, sort_keys=True))


if __name__ == "__main__":
    FROZEN_PATH.write_text(json.dumps(_normalise(freeze()), indent=1, sort_keys=True) + "\n")
    print(f"wrote {FROZEN_PATH}")
