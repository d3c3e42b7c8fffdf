from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import lattice_quotient, load_frozen
from rational_ktheory.cycle_analysis import FatouCycle, FatouKind, FatouSpec, HermanDescriptor, Provenance
from rational_ktheory.exceptions import IncompleteSpec, MissingHValue
from rational_ktheory.integer_linalg import Element, FgAbGroup, group_iso, same_pointed_group
from rational_ktheory.k_theory import (
    build_herman_matrix,
    flip_herman,
    k_fatou,
    k_julia,
    k_polynomial,
    k_sphere,
    same_polynomial_algebra,
)


def herman_toy() -> FatouSpec:
    return FatouSpec(
        degree=3, julia_critical_labels=("c1",), c_fatou=0,
        fatou_cycles=(FatouCycle(1, FatouKind.HERMAN),),
        herman=(HermanDescriptor(1, {"c1": 1}, 0),))


def polynomial_spec(d: int, c_julia: int, lengths) -> FatouSpec:
    """Spec of a polynomial: the basin of infinity is a fixed cycle."""
    cycles = (FatouCycle(1, FatouKind.ATTRACTING),) + tuple(FatouCycle(n, FatouKind.ATTRACTING) for n in lengths)
    return FatouSpec(d, tuple(f"c{i}" for i in range(c_julia)), 0, cycles)


def test_matrix_shapes():
    hm = build_herman_matrix(FatouSpec(2, (), 0, (FatouCycle(1, FatouKind.ATTRACTING),)))
    assert hm.matrix.tolist() == [[1]]
    hm = build_herman_matrix(FatouSpec(3, ("c1", "c2"), 0, (FatouCycle(1, FatouKind.ATTRACTING),)))
    assert hm.matrix.tolist() == [[1], [1], [2]]
    assert hm.row_labels == ("c1", "c2", "u") and hm.col_labels == ("u",)
    hm = build_herman_matrix(herman_toy())
    assert hm.matrix.tolist() == [[1, 1], [0, 2]]
    assert hm.row_labels == ("c1", "u") and hm.col_labels == ("Q1", "u")


def test_missing_h_value():
    spec = FatouSpec(3, ("c1", "c2"), 0, (FatouCycle(1, FatouKind.HERMAN),),
                     (HermanDescriptor(1, {"c1": 1}, 0),))
    with pytest.raises(MissingHValue) as info:
        build_herman_matrix(spec)
    assert info.value.label == "c2"


def test_sphere_examples():
    r = k_sphere(2, 2)
    assert (r.k0.free_rank, r.k1.free_rank, r.unit_status) == (3, 1, "generator")
    r = k_sphere(3, 4)
    assert (r.k0.free_rank, r.k1.free_rank) == (5, 1)
    with pytest.raises(ValueError):
        k_sphere(2, 1)


def test_fatou_examples():
    assert (k_fatou(2, 2, 0).k0.free_rank, k_fatou(2, 2, 0).k1.free_rank) == (4, 2)
    assert (k_fatou(0, 1, 0).k0.free_rank, k_fatou(0, 1, 0).k1.free_rank) == (1, 1)
    z = k_fatou(0, 0, 0)
    assert z.k0.is_trivial and z.k1.is_trivial and z.k0.distinguished is None
    with pytest.raises(ValueError):
        k_fatou(0, 1, 2)


def test_julia_examples():
    # escaping critical point: nothing in the Julia set
    r = k_julia(polynomial_spec(2, 0, []))
    assert r.k0.is_trivial and r.k1.is_trivial
    r = k_julia(polynomial_spec(2, 1, []))
    assert (r.k0.free_rank, r.k0.torsion, r.k1.is_trivial, r.unit_status) == (1, (), True, "generator")


def test_herman_toy_against_lattice_oracle():
    r = k_julia(herman_toy())
    assert r.k1.is_trivial
    assert (r.k0.free_rank, r.k0.torsion) == (1, (2,))
    assert r.unit_status == "torsion_generator"
    frozen = load_frozen()["herman_toy_quotient"]
    assert lattice_quotient([[1, 1], [0, 2]], [0, 1]) == {
        "order": frozen["order"], "counts": {int(k): v for k, v in frozen["counts"].items()},
        "unit_order": frozen["unit_order"]}
    # the finite part is the lattice quotient and the unit class has full order
    assert r.k0.torsion == (frozen["order"],) and frozen["unit_order"] == frozen["order"]


def test_flipped_toy_agrees():
    a, b = k_julia(herman_toy()), k_julia(flip_herman(herman_toy(), 0))
    assert group_iso(a.k0, b.k0) and group_iso(a.k1, b.k1) and a.unit_status == b.unit_status


def test_incomplete_spec_rejected():
    spec = FatouSpec(2, (), 1, (FatouCycle(1, FatouKind.ATTRACTING),), provenance=Provenance.COMPUTED,
                     complete=False, undetermined_labels=("c1",))
    with pytest.raises(IncompleteSpec):
        k_julia(spec)


def test_empty_fatou_set_uses_sphere_formula():
    spec = FatouSpec(2, ("c1", "c2"), 0, ())
    r = k_julia(spec)
    s = k_sphere(2, 2)
    assert _same(r.k0, s.k0) and _same(r.k1, s.k1)


def test_polynomial_examples():
    r = k_polynomial(2, 0, 2)
    assert (str(r.k0), str(r.k1), r.unit_status) == ("Z", "Z", "zero")
    r = k_polynomial(2, 1, 2)
    assert (str(r.k0), str(r.k1), r.unit_status) == ("Z^2", "Z", "generator")
    r = k_polynomial(3, 0, 1)
    assert (str(r.k0), str(r.k1), r.unit_status) == ("Z/2", "0", "torsion_generator")


def test_same_polynomial_algebra_examples():
    assert same_polynomial_algebra((2, 0, 2), (2, 0, 2))
    assert not same_polynomial_algebra((2, 0, 1), (3, 0, 1))
    assert same_polynomial_algebra((2, 1, 1), (5, 1, 1))


def _empty_herman_formula(d: int, c_julia: int, lengths) -> tuple[FgAbGroup, FgAbGroup]:
    """Groups with no Herman cycles, written out from the closed form."""
    import math
    f = len(lengths)
    w = 0
    for n in lengths:
        w = math.gcd(w, n)
    if c_julia:
        coker = FgAbGroup.free(c_julia, unit_index=0)
    else:
        coker = FgAbGroup.from_factors(0, [d - 1], Element((1,), ()))
    extra = FgAbGroup(abs(f - 1), (), Element((), (0,) * abs(f - 1)))
    return coker.direct_sum(extra), FgAbGroup.from_factors(abs(f - 1), [w or 1])


def _same(a: FgAbGroup, b: FgAbGroup) -> bool:
    """Equal presentations, with unit classes related by an automorphism."""
    return a.forget_unit() == b.forget_unit() and same_pointed_group(a, b)


def _all_polynomial_counts():
    for d in range(2, 6):
        for c in range(0, d):
            for f in range(1, 2 * d - 1):
                yield d, c, f


def test_consistency_with_polynomial_formula():
    for d, c, f in _all_polynomial_counts():
        spec = polynomial_spec(d, c, [1 + (i % 3) for i in range(f - 1)])
        got = k_julia(spec)
        want = k_polynomial(d, c, f)
        assert _same(got.k0, want.k0) and _same(got.k1, want.k1), (d, c, f)
        k0, k1 = _empty_herman_formula(d, c, [fc.length for fc in spec.fatou_cycles])
        assert _same(got.k0, k0) and _same(got.k1, k1)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 5), st.integers(0, 4), st.lists(st.integers(1, 12), min_size=1, max_size=6))
def test_consistency_without_unit_length_cycle(d, c, lengths):
    # omega may exceed 1 here, which the polynomial formula does not cover
    if c > 2 * d - 2 or len(lengths) > 2 * d - 2:
        return
    spec = FatouSpec(d, tuple(f"c{i}" for i in range(c)), 0,
                     tuple(FatouCycle(n, FatouKind.ATTRACTING) for n in lengths))
    got = k_julia(spec)
    k0, k1 = _empty_herman_formula(d, c, lengths)
    assert _same(got.k0, k0) and _same(got.k1, k1)


def test_predicate_matches_groups():
    triples = list(_all_polynomial_counts())
    results = {t: k_polynomial(*t) for t in triples}
    for a in triples:
        for b in triples:
            ra, rb = results[a], results[b]
            iso = (group_iso(ra.k0, rb.k0) and group_iso(ra.k1, rb.k1)
                   and ra.unit_status == rb.unit_status)
            assert same_polynomial_algebra(a, b) == iso, (a, b)


@st.composite
def complete_specs(draw):
    h = draw(st.integers(0, 3))
    f = draw(st.integers(h, 6))
    if f == 0:
        # empty Fatou set: every critical point is in the Julia set
        d = draw(st.integers(2, 3))
        c_julia, c_fatou = 2 * d - 2, 0
    else:
        c_julia = draw(st.integers(0, 4))
        d = draw(st.integers(max(2, (c_julia + 3) // 2, (f + 3) // 2), 6))
        c_fatou = draw(st.integers(0, 2 * d - 2 - c_julia))
    labels = tuple(f"c{i}" for i in range(c_julia))
    herman_lengths = draw(st.lists(st.integers(1, 6), min_size=h, max_size=h))
    other = draw(st.lists(st.integers(1, 6), min_size=f - h, max_size=f - h))
    herman = tuple(
        HermanDescriptor(n, {lab: draw(st.integers(0, n)) for lab in labels}, draw(st.integers(-8, 8)))
        for n in herman_lengths)
    cycles = tuple(FatouCycle(n, FatouKind.HERMAN) for n in herman_lengths) + \
        tuple(FatouCycle(n, FatouKind.ATTRACTING) for n in other)
    return FatouSpec(d, labels, c_fatou, cycles, herman).validate()


@settings(max_examples=250, deadline=None)
@given(complete_specs())
def test_rank_identity(spec):
    r = k_julia(spec)
    assert r.k0.free_rank - r.k1.free_rank == spec.c_julia


@settings(max_examples=150, deadline=None)
@given(complete_specs(), st.data())
def test_orientation_does_not_matter(spec, data):
    if not spec.h:
        return
    i = data.draw(st.integers(0, spec.h - 1))
    a, b = k_julia(spec), k_julia(flip_herman(spec, i))
    assert group_iso(a.k0, b.k0) and group_iso(a.k1, b.k1)
    assert a.unit_status == b.unit_status


def test_result_json_shape():
    out = k_julia(herman_toy()).to_json()
    assert out["algebra"] == "julia"
    assert out["k0"]["torsion"] == [2] and out["k0"]["unit_status"] == "torsion_generator"
