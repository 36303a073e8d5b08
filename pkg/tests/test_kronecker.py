import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quiverkit.decomp import is_isomorphic
from quiverkit.homext import ext_dim, hom_dim
from quiverkit.kronecker import (
    INF, KroneckerType, Tag, a_seq, a_sequence, classify_q2, exceptional_index, hom_ext_formula,
    preinjective, preprojective, std_kronecker,
)
from quiverkit.linalg import Field
from quiverkit.quiver import QuiverError, Rep, Quiver, direct_sum, random_rep
from quiverkit.strata import check_mobius, h_action, mobius

QQ, F7 = Field(0), Field(7)


def test_a_sequences():
    assert a_sequence(2, 5) == (0, 1, 2, 3, 4, 5)
    assert a_sequence(3, 6) == (0, 1, 3, 8, 21, 55, 144)
    with pytest.raises(ValueError):
        a_seq(3, -1)


def test_exceptional_index_inverts_dims():
    for i in range(5):
        assert exceptional_index(3, dict(zip("xy", preprojective(3, i, F7).dimvec))) == ("P", i)
        assert exceptional_index(3, dict(zip("xy", preinjective(3, i, F7).dimvec))) == ("I", i)
    assert exceptional_index(3, {"x": 2, "y": 2}) is None


@pytest.mark.parametrize("n", [2, 3])
def test_hom_ext_formula_over_rationals(n):
    mods = {(k, i): (preprojective if k == "P" else preinjective)(n, i, QQ) for k in "PI" for i in range(4)}
    for a, ma in mods.items():
        for b, mb in mods.items():
            if ma.total_dim + mb.total_dim > 40:
                continue
            assert hom_dim(ma, mb) == hom_ext_formula(n, a, b, "hom"), (a, b)
            assert ext_dim(ma, mb) == hom_ext_formula(n, a, b, "ext"), (a, b)


def test_std_kronecker_dims():
    assert std_kronecker("P", 2, field=QQ).dimvec == (2, 3)
    assert std_kronecker("I", 2, field=QQ).dimvec == (3, 2)
    assert std_kronecker("R", 3, INF, QQ).dimvec == (3, 3)
    with pytest.raises(QuiverError):
        std_kronecker("R", 1, None, QQ)


TAGS = st.one_of(
    st.builds(lambda k: Tag("P", k), st.integers(0, 2)),
    st.builds(lambda k: Tag("I", k), st.integers(0, 2)),
    st.builds(lambda k, e: Tag("R", k, e), st.integers(1, 2), st.sampled_from([0, 1, 3, INF])),
)


def _module(tag, F):
    if tag.kind == "R":
        return std_kronecker("R", tag.size, tag.eig if tag.eig == INF else F(tag.eig), F)
    return std_kronecker(tag.kind, tag.size, field=F)


@settings(max_examples=30, deadline=None)
@given(st.lists(TAGS, min_size=1, max_size=3), st.integers(0, 10**6))
def test_classify_recovers_direct_sums(tags, seed):
    F = F7
    m = direct_sum([_module(t, F) for t in tags])
    rng = np.random.default_rng(seed)
    gx, gy = F.random(m.dims["x"], m.dims["x"], rng), F.random(m.dims["y"], m.dims["y"], rng)
    if F.inverse(gx) is None or F.inverse(gy) is None:
        return
    want = KroneckerType([Tag(t.kind, t.size, F(t.eig) if t.kind == "R" and t.eig != INF else t.eig)
                          for t in tags])
    assert classify_q2(m.transform({"x": gx, "y": gy}), seed) == want


def test_classify_irreducible_eigenvalue_over_rationals():
    q = Quiver.kronecker(2)
    rot = QQ.matrix([[0, -1], [1, 0]])
    m = Rep(q, QQ, {"x": 2, "y": 2}, {"a1": QQ.eye(2), "a2": rot})
    t = classify_q2(m)
    (tag,) = list(t.tags)
    assert tag.kind == "Rirr" and tag.dims == (2, 2)


def test_classify_requires_q2():
    with pytest.raises(QuiverError):
        classify_q2(preprojective(3, 1, QQ))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.sampled_from([0, 1, 2, 5, INF]))
def test_mobius_matches_classification(seed, k, lam):
    rng = np.random.default_rng(seed)
    h = F7.random(2, 2, rng)
    if F7.inverse(h) is None:
        return
    assert check_mobius(h, k, lam if lam == INF else F7(lam), F7, seed).ok


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_h_action_is_a_left_action(seed):
    rng = np.random.default_rng(seed)
    h1, h2 = F7.random(3, 3, rng), F7.random(3, 3, rng)
    if F7.inverse(h1) is None or F7.inverse(h2) is None:
        return
    m = random_rep(Quiver.kronecker(3), F7, {"x": 2, "y": 3}, rng)
    assert h_action(h1, h_action(h2, m)) == h_action(F7.mul(h1, h2), m)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([0, 1, 4, INF]))
def test_mobius_composes(seed, lam):
    rng = np.random.default_rng(seed)
    h1, h2 = F7.random(2, 2, rng), F7.random(2, 2, rng)
    if F7.inverse(h1) is None or F7.inverse(h2) is None:
        return
    lam = lam if lam == INF else F7(lam)
    assert mobius(F7.mul(h1, h2), lam, F7) == mobius(h1, mobius(h2, lam, F7), F7)


def test_h_action_preserves_isomorphism_class_for_scalars():
    m = preprojective(3, 2, F7)
    assert is_isomorphic(h_action(F7.scale(F7(3), F7.eye(3)), m), m)
