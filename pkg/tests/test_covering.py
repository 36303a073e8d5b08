import pytest

from quiverkit.covering import (
    CoverError, build_cover, lift_preprojective, lift_sequence, push_down, push_down_morphism, strip_layer,
    strip_sink,
)
from quiverkit.decomp import is_isomorphic
from quiverkit.kronecker import preprojective
from quiverkit.linalg import Field

QQ, F5 = Field(0), Field(5)


@pytest.mark.parametrize("n,depth,sizes", [(3, 3, [1, 3, 6, 12]), (2, 4, [1, 2, 2, 2, 2])])
def test_layer_sizes(n, depth, sizes):
    cov = build_cover(n, depth)
    assert [len(cov.layer_vertices(j)) for j in range(depth + 1)] == sizes


def test_cover_is_a_bipartite_tree():
    cov = build_cover(3, 3)
    q = cov.quiver
    assert len(q.arrows) == len(q.vertices) - 1 and q.is_connected()
    for v in q.vertices:
        if cov.layer[v] % 2 == 0:
            assert q.is_sink(v)
        else:
            assert q.is_source(v)
    assert sorted(cov.label[a.id] for a in q.arrows if cov.layer[a.src] == 1 and cov.layer[a.tgt] == 0) == [1, 2, 3]


def test_depth_must_cover_the_lift():
    with pytest.raises(CoverError):
        lift_preprojective(3, 3, QQ, depth=3)


@pytest.mark.parametrize("i", [1, 2, 3])
def test_stripping_the_outer_layer_restricts_the_lift(i):
    lift = lift_preprojective(3, i, F5)
    stripped = strip_layer(lift)
    inner = [v for v in lift.cover.quiver.vertices if lift.cover.layer[v] < i]
    for v in lift.cover.quiver.vertices:
        assert stripped.dims[v] == (lift.rep.dims[v] if v in inner else 0)
    assert is_isomorphic(stripped.restrict(inner), lift.rep.restrict(inner))


def test_strip_sink_rejects_sources():
    lift = lift_preprojective(3, 2, F5)
    src = lift.cover.layer_vertices(1)[0]
    with pytest.raises(CoverError):
        strip_sink(lift.rep, src)


@pytest.mark.parametrize("n", [2, 3])
def test_push_down_of_lifts(n):
    for i in range(4):
        lift = lift_preprojective(n, i, F5)
        assert is_isomorphic(push_down(lift.cover, lift.rep), preprojective(n, i, F5))


@pytest.mark.parametrize("i", [1, 2, 3])
def test_cover_sequence_side_conditions(i):
    seq = lift_sequence(3, i, F5, seed=1)
    assert seq.ok
    assert seq.pushed_inclusion.is_injective() and seq.pushed_projection.is_surjective()
    assert seq.pushed_projection.compose(seq.pushed_inclusion).is_zero()
    assert seq.pushed_sub.dimvec == (0, 1)


def test_push_down_morphism_keeps_injectivity():
    lift = lift_preprojective(3, 2, F5)
    s = lift.cover.layer_vertices(2)[0]
    st = strip_sink(lift.rep, s)
    assert push_down_morphism(lift.cover, st.inclusion).is_injective()
