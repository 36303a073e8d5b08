import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quiverkit.linalg import Field
from quiverkit.quiver import (
    Morphism, Quiver, QuiverError, Rep, direct_sum, dual_rep, euler_form, identity_morphism,
    injective_rep, projective_rep, quadratic_form, random_rep, simple_rep, sub_quotient,
)

F7 = Field(7)
A3 = Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])


def test_vertices_and_arrows_are_sorted():
    q = Quiver(["z", "a"], [("t", "a", "z"), ("s", "a", "z")])
    assert q.vertices == ("a", "z")
    assert [a.id for a in q.arrows] == ["s", "t"]
    assert q.is_source("a") and q.is_sink("z")


@pytest.mark.parametrize("verts,arrows", [
    (["1", "1"], []),
    (["1"], [("a", "1", "2")]),
    (["1", "2"], [("a", "1", "2"), ("a", "2", "1")]),
])
def test_bad_quivers_rejected(verts, arrows):
    with pytest.raises(QuiverError):
        Quiver(verts, arrows)


def test_cycle_detection():
    cyc = Quiver(["1", "2"], [("a", "1", "2"), ("b", "2", "1")])
    assert not cyc.is_acyclic() and A3.is_acyclic()


def test_rep_shape_checked():
    with pytest.raises(QuiverError):
        Rep(A3, F7, {"1": 1, "2": 2, "3": 1}, {"a": F7.zeros(1, 1), "b": F7.zeros(1, 2)})


def test_kronecker_quiver():
    q = Quiver.kronecker(3)
    assert q.vertices == ("x", "y") and len(q.arrows) == 3
    assert all(a.src == "x" and a.tgt == "y" for a in q.arrows)


def test_projective_and_injective_dims_count_paths():
    assert projective_rep(A3, F7, "1").dimvec == (1, 1, 1)
    assert projective_rep(A3, F7, "3").dimvec == (0, 0, 1)
    assert injective_rep(A3, F7, "1").dimvec == (1, 0, 0)
    assert injective_rep(A3, F7, "3").dimvec == (1, 1, 1)


def test_euler_form_on_kronecker():
    q = Quiver.kronecker(3)
    assert euler_form(q, (1, 0), (0, 1)) == -3
    assert quadratic_form(q, (1, 3)) == 1
    assert quadratic_form(q, (3, 8)) == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_dual_is_involutive(seed):
    rng = np.random.default_rng(seed)
    m = random_rep(A3, F7, [int(x) for x in rng.integers(0, 4, 3)], rng)
    d = dual_rep(m)
    assert d.quiver == A3.opposite()
    assert dual_rep(d) == m


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_sub_quotient_is_exact(seed):
    rng = np.random.default_rng(seed)
    q = Quiver.kronecker(2)
    m = random_rep(q, F7, {"x": 2, "y": 3}, rng)
    # the submodule generated by one vector at x
    v = F7.random(2, 1, rng)
    spaces = {"x": v, "y": F7.hstack([F7.mul(m.mats[a.id], v) for a in q.arrows], 3)}
    sub, quot, inc, proj = sub_quotient(m, spaces)
    assert inc.is_injective() and proj.is_surjective()
    assert proj.compose(inc).is_zero()
    assert sub.total_dim + quot.total_dim == m.total_dim


def test_direct_sum_dims_and_identity():
    s1, s3 = simple_rep(A3, F7, "1"), simple_rep(A3, F7, "3")
    m = direct_sum([s1, s3, projective_rep(A3, F7, "2")])
    assert m.dimvec == (1, 1, 2)
    assert identity_morphism(m).is_iso()


def test_morphism_commutativity_checked():
    s = simple_rep(A3, F7, "1")
    p = projective_rep(A3, F7, "1")
    top = Morphism(p, s, {"1": F7.eye(1), "2": F7.zeros(0, 1), "3": F7.zeros(0, 1)})
    assert top.is_surjective()
    with pytest.raises(QuiverError):
        Morphism(s, p, {"1": F7.eye(1), "2": F7.zeros(1, 0), "3": F7.zeros(1, 0)})
