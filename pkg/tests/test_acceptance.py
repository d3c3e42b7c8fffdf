"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line (shown in the pytest terminal summary,
or printed directly by ``python3 tests/test_acceptance.py``) and then asserts.
"""
from __future__ import annotations

import json
import math
import subprocess
import sys
import time
from functools import reduce
from pathlib import Path

import numpy as np
import pytest
from scipy.sparse import csr_matrix

import conftest
from oracles import bareiss_det, counts_from_factors, lattice_quotient, load_frozen, matmul
from rational_ktheory.config import Budget
from rational_ktheory.cycle_analysis import FatouCycle, FatouKind, FatouSpec, HermanDescriptor, periodic_points
from rational_ktheory.graph_algebra import builtin_table, graph_k_theory
from rational_ktheory.integer_linalg import (
    Element,
    FgAbGroup,
    cokernel,
    invariant_factors,
    same_pointed_group,
    smith_normal_form,
)
from rational_ktheory.invariants import fatou_count_sequence, lemma_number_bruteforce, recover_tuple
from rational_ktheory.k_theory import k_julia, k_polynomial
from rational_ktheory.quadratic import QuadCase, classify_quadratic
from rational_ktheory.rational_map import RationalMap, critical_points, poly_roots, relative_residual
from rational_ktheory.shift_model import (
    connected_julia_scalar_check,
    id_minus_phi_invariants,
    phi_matrix,
    refinement,
)
from test_k_theory import _empty_herman_formula, herman_toy, polynomial_spec

DATA = Path(__file__).parent / "data"

Z, ZERO = FgAbGroup.free(1), FgAbGroup.zero()


def verdict(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}" + (f" ({detail})" if detail else "")
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def same(a: FgAbGroup, b: FgAbGroup) -> bool:
    """Equal presentations, unit classes related by an automorphism."""
    return a.forget_unit() == b.forget_unit() and same_pointed_group(a, b)


# the four bullets of the quadratic classification, unit status included
CASE_GROUPS = {
    QuadCase.CASE0: (FgAbGroup.zero(pointed=True), ZERO),
    QuadCase.CASE1: (FgAbGroup(1, (), Element((), (0,))), Z),
    QuadCase.CASE2: (FgAbGroup.free(2, unit_index=0), Z),
    QuadCase.CASE3: (FgAbGroup.free(1, unit_index=0), ZERO),
}


def test_01_quadratic_table():
    expected = [(1, QuadCase.CASE0), (0, QuadCase.CASE1), (-1, QuadCase.CASE1),
                (0.25, QuadCase.CASE1), (-2, QuadCase.CASE3), (1j, QuadCase.CASE3)]
    start = time.perf_counter()
    verdicts = [classify_quadratic(c, Budget(max_iter=10_000)) for c, _ in expected]
    elapsed = time.perf_counter() - start
    ok = elapsed < 1.0
    for (c, case), v in zip(expected, verdicts):
        k0, k1 = CASE_GROUPS[case]
        ok &= v.case is case and v.certificate is not None
        ok &= same(v.k0, k0) and v.k1 == k1 and v.k0.unit_status == k0.unit_status
    verdict(1, "quadratic table reproduction", ok, f"{elapsed:.2f}s")


def test_02_polynomial_consistency():
    start = time.perf_counter()
    ok, checked = True, 0
    for d in range(2, 6):
        for c in range(0, d):
            for f in range(1, 2 * d - 1):
                spec = polynomial_spec(d, c, [1 + (i % 3) for i in range(f - 1)])
                got, want = k_julia(spec), k_polynomial(d, c, f)
                k0, k1 = _empty_herman_formula(d, c, [fc.length for fc in spec.fatou_cycles])
                ok &= same(got.k0, want.k0) and same(got.k1, want.k1)
                ok &= same(got.k0, k0) and same(got.k1, k1)
                checked += 1
    elapsed = time.perf_counter() - start
    verdict(2, "consistency with the polynomial formula", ok and elapsed < 1.0,
            f"{checked} triples, {elapsed:.2f}s")


def random_complete_spec(rng: np.random.Generator) -> FatouSpec:
    h = int(rng.integers(0, 4))
    f = int(rng.integers(max(h, 1), 7))
    c_julia = int(rng.integers(0, 5))
    d = int(rng.integers(max(2, (c_julia + 3) // 2, (f + 3) // 2), 7))
    c_fatou = int(rng.integers(0, 2 * d - 2 - c_julia + 1))
    labels = tuple(f"c{i}" for i in range(c_julia))
    lengths = [int(x) for x in rng.integers(1, 7, size=f)]
    herman = tuple(HermanDescriptor(n, {lab: int(rng.integers(0, n + 1)) for lab in labels},
                                    int(rng.integers(-8, 9))) for n in lengths[:h])
    cycles = tuple(FatouCycle(n, FatouKind.HERMAN) for n in lengths[:h]) + \
        tuple(FatouCycle(n, FatouKind.ATTRACTING) for n in lengths[h:])
    return FatouSpec(d, labels, c_fatou, cycles, herman).validate()


def test_03_rank_identity():
    rng = np.random.default_rng(3)
    specs = [random_complete_spec(rng) for _ in range(300)]
    bad = [s for s in specs if k_julia(s).k0.free_rank - k_julia(s).k1.free_rank != s.c_julia]
    with_herman = sum(1 for s in specs if s.h)
    verdict(3, "rank identity", not bad, f"{len(specs)} specs, {with_herman} with Herman cycles")


def test_04_herman_toy():
    r = k_julia(herman_toy())
    brute = lattice_quotient([[1, 1], [0, 2]], [0, 1])
    ok = r.k1.is_trivial and r.k0.free_rank == 1 and r.k0.torsion == (2,)
    ok &= r.unit_status == "torsion_generator"
    ok &= brute["order"] == 2 and brute["unit_order"] == 2
    ok &= brute["counts"] == counts_from_factors(r.k0.torsion, brute["order"])
    verdict(4, "Herman toy case", ok, f"K0 = {r.k0}, K1 = {r.k1}")


def test_05_graph_table():
    ok = True
    rows = builtin_table()
    for row in rows:
        kt = graph_k_theory(row.graph)
        k0, k1 = CASE_GROUPS[QuadCase(row.case)]
        ok &= same(kt.k0, k0) and kt.k1 == k1 and kt.k0.unit_status == k0.unit_status
    verdict(5, "graph table", ok and len(rows) == 4,
            ", ".join(f"{r.algebra}: {graph_k_theory(r.graph).k0}" for r in rows))


def _sparse(m):
    # entries stay below 2**(k+2): int64 products are exact
    return csr_matrix(np.array(m.tolist(), dtype=np.int64))


def test_06_shift_model():
    start = time.perf_counter()
    ok = True
    for k in range(1, 11):
        inv = id_minus_phi_invariants(k)
        ok &= inv.kernel_rank == 0 and inv.cokernel.is_trivial
        rho = _sparse(refinement(k))
        ok &= (rho @ _sparse(phi_matrix(k)) != _sparse(phi_matrix(k + 1)) @ rho).nnz == 0
    for d in range(2, 13):
        g = connected_julia_scalar_check(d)
        want = FgAbGroup(0, (d - 1,), Element((1,), ())) if d > 2 else FgAbGroup.zero(pointed=True)
        ok &= same(g, want)
    elapsed = time.perf_counter() - start
    verdict(6, "shift model", ok and elapsed < 60, f"{elapsed:.1f}s")


def test_07_smith_normal_form_suite():
    rng = np.random.default_rng(7)
    ok, enumerated = True, 0
    for _ in range(1000):
        r, c = (int(x) for x in rng.integers(1, 7, size=2))
        a = rng.integers(-9, 10, size=(r, c)).tolist()
        u, d, v = smith_normal_form(a)
        ok &= matmul(matmul(u.tolist(), a), v.tolist()) == d.tolist()
        ok &= abs(bareiss_det(u.tolist())) == 1 and abs(bareiss_det(v.tolist())) == 1
        if r == c:
            det = bareiss_det(a)
            if det:
                ok &= math.prod(invariant_factors(a)) == abs(det)
                if abs(det) <= 64:
                    g = cokernel(a)
                    brute = lattice_quotient(a)
                    ok &= brute["order"] == g.order
                    ok &= brute["counts"] == counts_from_factors(g.torsion, g.order)
                    enumerated += 1
    verdict(7, "Smith normal form suite", ok, f"1000 matrices, {enumerated} enumerated")


def test_08_lemma_number():
    start = time.perf_counter()
    rep = lemma_number_bruteforce(3, 8)
    elapsed = time.perf_counter() - start
    rng = np.random.default_rng(8)
    trips = 0
    for _ in range(100):
        t = tuple(sorted(int(x) for x in rng.integers(1, 9, size=int(rng.integers(1, 4)))))
        seq = fatou_count_sequence(t, reduce(math.lcm, t, 1))
        trips += recover_tuple(seq) == t
    ok = rep.injective and not rep.collisions and rep.n_max == 840 and elapsed < 10 and trips == 100
    verdict(8, "lemma-number exhaustive check", ok,
            f"{rep.tuple_count} tuples in {elapsed:.2f}s, {trips}/100 round trips")


def test_09_dynamics_plumbing():
    rng = np.random.default_rng(9)
    ok, worst = True, 0.0
    for _ in range(50):
        d = int(rng.integers(2, 7))
        num = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
        dd = int(rng.integers(0, d + 1))
        den = rng.normal(size=dd + 1) + 1j * rng.normal(size=dd + 1)
        r = RationalMap.from_coeffs(num, den)
        ok &= sum(c.multiplicity for c in critical_points(r)) == 2 * d - 2
        for poly in (r.numerator, r.denominator):
            if poly.degree < 1:
                continue
            for z, _ in poly_roots(poly):
                worst = max(worst, relative_residual(poly, z))
    for d, ns in ((2, range(1, 6)), (3, range(1, 4))):
        for n in ns:
            ok &= _count_periodic(d, n) == d ** n + 1
    verdict(9, "dynamics plumbing", ok and worst < 1e-10, f"worst residual {worst:.1e}")


def _count_periodic(d: int, n: int) -> int:
    r = RationalMap.polynomial([0.1 + 0.05j] + [0] * (d - 1) + [1])
    return sum(c.period * c.multiplicity for c in periodic_points(r, n))


def _analyze_once(path: Path) -> bytes:
    return subprocess.run([sys.executable, "-m", "rational_ktheory.cli", "--json", "analyze", str(path)],
                          capture_output=True, check=True).stdout


def test_10_determinism(tmp_path):
    f = tmp_path / "map.json"
    f.write_text(json.dumps({"num": [[-0.12, 0.75], 0, 1], "den": [1]}))
    first, second = _analyze_once(f), _analyze_once(f)
    out = tmp_path / "r.ppm"
    subprocess.run([sys.executable, "-m", "rational_ktheory.cli", "render", "--rect", "-2,0.5,-1.25,1.25",
                    "--size", "64x64", "--mode", "parameter", "--max-iter", "256", "-o", str(out)], check=True)
    ok = first == second and bool(first) and out.read_bytes() == (DATA / "render_64.ppm").read_bytes()
    verdict(10, "determinism", ok, f"{len(first)} bytes of JSON")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
