import pytest
from hypothesis import given, settings, strategies as st

from corpora import THREE_VERTEX, TWO_VERTEX, reflection_corpus
from quiverkit.homext import ext_dim, hom_dim
from quiverkit.kronecker import preinjective, preprojective
from quiverkit.linalg import Field
from quiverkit.quiver import simple_rep, Quiver
from quiverkit.schofield import SchofieldError, check_pair, schofield_pairs

QQ, F5 = Field(0), Field(5)


def test_simple_modules_rejected():
    with pytest.raises(SchofieldError):
        schofield_pairs(simple_rep(Quiver.kronecker(3), QQ, "x"))


@pytest.mark.parametrize("make,i", [(preprojective, 1), (preprojective, 2), (preinjective, 2)])
def test_kronecker_exceptionals_have_one_pair(make, i):
    m = make(3, i, QQ)
    r = schofield_pairs(m, 1)
    assert r.support_size == 2 and len(r.pairs) == 1
    p = r.pairs[0]
    assert p.dims_add_up
    assert hom_dim(p.X, p.Y) == hom_dim(p.Y, p.X) == ext_dim(p.Y, p.X) == 0
    assert check_pair(m, p, 1).ok


@pytest.mark.parametrize("cheap", [False, True])
def test_pairs_on_three_vertex_modules(cheap):
    for m in reflection_corpus(THREE_VERTEX, F5, 6, seed=11):
        r = schofield_pairs(m, 2, cheap_only=cheap)
        assert all(check_pair(m, p, 2).ok for p in r.pairs)
        if not cheap:
            assert r.count_matches


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_pair_count_on_random_reflection_modules(seed):
    for m in reflection_corpus({**THREE_VERTEX, **TWO_VERTEX}, F5, 2, seed=seed, max_dim=9):
        r = schofield_pairs(m, seed)
        assert len(r.pairs) == len(m.support) - 1
        assert all(check_pair(m, p, seed).ok for p in r.pairs)
