import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quiverkit.decomp import end_dim, is_indecomposable
from quiverkit.kronecker import preprojective
from quiverkit.linalg import Field
from quiverkit.quiver import Quiver, random_rep
from quiverkit.strata import (
    CURVES, END_DIMENSION_TABLE, FAMILIES, AccessStep, AccessibilityWitness, StrataError, accessibility_search,
    canonical_form, check_counterexamples, check_empty_strata, check_stratum_family, check_tree_triples,
    degeneration_curve, h_action, orbit_parameter_consistency, sample_family, simple_extension_witness,
    table_representative, verify_end_dimension_table, verify_witness,
)

QQ, F2, F7, F11 = Field(0), Field(2), Field(7), Field(11)


def _brute_force_end_dim_f2(m):
    """log2 of the number of pairs (gx, gy) over F_2 with gy m(a) = m(a) gx for every arrow."""
    dx, dy = m.dims["x"], m.dims["y"]
    mats = [m.mats[a.id].astype(np.int64) for a in m.quiver.arrows]
    gx = np.array(list(itertools.product([0, 1], repeat=dx * dx)), dtype=np.int64).reshape(-1, dx, dx)
    gy = np.array(list(itertools.product([0, 1], repeat=dy * dy)), dtype=np.int64).reshape(-1, dy, dy)
    left = np.concatenate([(a @ gx % 2).reshape(len(gx), -1) for a in mats], axis=1)
    right = np.concatenate([(gy @ a % 2).reshape(len(gy), -1) for a in mats], axis=1)
    weights = 1 << np.arange(left.shape[1], dtype=np.int64)
    lk, rk = left @ weights, right @ weights
    vals, counts = np.unique(lk, return_counts=True)
    lookup = dict(zip(vals.tolist(), counts.tolist()))
    total = sum(lookup.get(int(k), 0) for k in rk)
    return int(total).bit_length() - 1, total


@pytest.mark.parametrize("row", ["B2", "B6", "B12"])
def test_end_dimension_by_brute_force_count(row):
    typ = dict((r[0], r[1]) for r in END_DIMENSION_TABLE)[row]
    m = table_representative(typ, F2)
    e, total = _brute_force_end_dim_f2(m)
    assert total == 2 ** e
    assert end_dim(m) == e


def test_end_dimension_rows_other_than_b2():
    r = verify_end_dimension_table(F7)
    failing = [c.name for c in r.checks if not c.ok]
    assert failing == ["end-dim[B2]"]
    assert len(r.checks) == 18


def test_orbit_bookkeeping():
    assert orbit_parameter_consistency().ok


def test_table_representatives_are_3_by_3():
    for _, typ, _, _ in END_DIMENSION_TABLE:
        assert table_representative(typ, F7).dimvec == (3, 3)


def test_h_action_rejects_singular():
    m = preprojective(2, 1, F7)
    with pytest.raises(StrataError):
        h_action(F7.zeros(2, 2), m)


@pytest.mark.parametrize("fid", ["B7/U3", "B11/U2", "B12/U2", "B16/U3", "B4/U3", "B18/U1"])
def test_family_samples_over_f11(fid):
    assert check_stratum_family(fid, samples=4, seed=2, field=F11).ok


def test_families_cover_four_orbits_by_duality():
    orbits = {f.orbit for f in FAMILIES.values()}
    assert {"B4", "B10", "B14"} <= orbits


def test_b18_needs_three_eigenvalues():
    with pytest.raises(StrataError):
        sample_family("B18/U1", F2, 1, seed=0)


def test_empty_strata_small_run():
    assert check_empty_strata("B16", points=50, seed=1, field=F7).ok


def test_tree_triples_and_counterexamples_over_f7():
    assert check_tree_triples(F7, seed=1).ok
    assert check_counterexamples(F7, lams=(2, 5)).ok


@pytest.mark.parametrize("curve", CURVES)
def test_degeneration_curves(curve):
    assert degeneration_curve(curve, [0, 1, 2, 3], QQ, seed=1).ok


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_canonical_form_is_a_base_change_invariant(seed):
    rng = np.random.default_rng(seed)
    q = Quiver.kronecker(3)
    dims = {"x": int(rng.integers(1, 3)), "y": int(rng.integers(1, 3))}
    m = random_rep(q, F2, dims, rng)
    basis = {}
    for v in q.vertices:
        while True:
            g = F2.random(dims[v], dims[v], rng)
            if F2.inverse(g) is not None:
                basis[v] = g
                break
    assert canonical_form(m) == canonical_form(m.transform(basis))


def test_canonical_form_separates_non_isomorphic():
    q = Quiver.kronecker(3)
    a = random_rep(q, F2, {"x": 1, "y": 1}, np.random.default_rng(0))
    a.mats["a1"][0, 0], a.mats["a2"][0, 0], a.mats["a3"][0, 0] = 1, 0, 0
    b = random_rep(q, F2, {"x": 1, "y": 1}, np.random.default_rng(0))
    b.mats["a1"][0, 0], b.mats["a2"][0, 0], b.mats["a3"][0, 0] = 0, 1, 0
    assert canonical_form(a) != canonical_form(b)


def test_accessibility_witness_for_p1():
    m = preprojective(3, 1, F2)
    w = accessibility_search(m, seed=1)
    assert w is not None and verify_witness(w, 1)
    assert len(w.steps) == m.total_dim - 1
    assert all(is_indecomposable(s.remainder, 1, paranoid=True) for s in w.steps)


def test_tampered_witness_rejected():
    m = preprojective(3, 1, F2)
    w = accessibility_search(m, seed=1)
    bad = AccessibilityWitness(w.start, w.steps[:-1])
    assert not verify_witness(bad, 1)


def test_accessibility_requires_prime_field():
    with pytest.raises(StrataError):
        accessibility_search(preprojective(3, 1, QQ))


def test_simple_extension_witness():
    st_ = simple_extension_witness(preprojective(3, 2, F2), seed=1)
    assert isinstance(st_, AccessStep)
    assert st_.remainder.total_dim == preprojective(3, 2, F2).total_dim - 1
