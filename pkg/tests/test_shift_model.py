from __future__ import annotations

import numpy as np
import pytest
from scipy.sparse import csr_matrix

from oracles import bareiss_det, load_frozen, shift_phi
from rational_ktheory.exceptions import BudgetExceeded
from rational_ktheory.integer_linalg import Element, FgAbGroup, same_pointed_group
from rational_ktheory.shift_model import (
    connected_julia_scalar_check,
    cylinder_labels,
    id_minus_phi_invariants,
    phi_matrix,
    refinement,
)


def test_small_levels_match_hand_expansion():
    frozen = load_frozen()["shift_phi"]
    assert phi_matrix(1).tolist() == [[1, 1], [1, 1]] == frozen["1"]
    assert phi_matrix(2).tolist() == frozen["2"]
    assert cylinder_labels(2) == ["00", "01", "10", "11"]


@pytest.mark.parametrize("k", range(1, 9))
def test_phi_matches_word_oracle(k):
    assert phi_matrix(k).tolist() == shift_phi(k)


@pytest.mark.parametrize("k", range(1, 11))
def test_column_sums_are_two(k):
    assert set(phi_matrix(k).to_array().sum(axis=0)) == {2}


def sparse(m):
    # entries stay below 2**(k+2), so int64 products are exact
    return csr_matrix(np.array(m.tolist(), dtype=np.int64))


def intertwines(k: int) -> bool:
    rho = sparse(refinement(k))
    return (rho @ sparse(phi_matrix(k)) != sparse(phi_matrix(k + 1)) @ rho).nnz == 0


@pytest.mark.parametrize("k", range(1, 11))
def test_refinement_intertwines(k):
    assert intertwines(k)


def test_wrong_refinement_is_detected():
    rho = sparse(refinement(3))
    assert (rho @ sparse(phi_matrix(3)) != sparse(phi_matrix(4)) @ rho.multiply(2)).nnz


def test_determinants_match_oracle():
    for k, det in load_frozen()["shift_det"].items():
        inv = id_minus_phi_invariants(int(k))
        assert inv.det == det
        n = 2 ** int(k)
        assert bareiss_det((np.eye(n, dtype=int) - np.array(shift_phi(int(k)))).tolist()) == det


@pytest.mark.parametrize("k", [1, 2, 5, 8])
def test_kernel_and_cokernel_vanish(k):
    inv = id_minus_phi_invariants(k)
    assert inv.kernel_rank == 0 and inv.cokernel.is_trivial


def test_level_cap():
    with pytest.raises(BudgetExceeded):
        phi_matrix(13)
    with pytest.raises(BudgetExceeded):
        id_minus_phi_invariants(5, cap=4)


def test_scalar_check():
    assert connected_julia_scalar_check(2).is_trivial
    g = connected_julia_scalar_check(3)
    assert g.torsion == (2,) and g.unit_status == "torsion_generator"
    assert connected_julia_scalar_check(5).torsion == (4,)
    for d in range(3, 13):
        g = connected_julia_scalar_check(d)
        want = FgAbGroup(0, (d - 1,), Element((1,), ()))
        assert g.forget_unit() == want.forget_unit() and same_pointed_group(g, want)
