import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from corpora import THREE_VERTEX, reflection_corpus
from quiverkit.decomp import is_isomorphic
from quiverkit.homext import ExtSpace
from quiverkit.kronecker import preprojective
from quiverkit.linalg import Field
from quiverkit.quiver import Quiver, direct_sum, random_rep, simple_rep, sub_quotient
from quiverkit.schofield import schofield_pairs
from quiverkit.treebasis import (
    TreeError, choose_elementary_cocycles, coefficient_quiver, exceptional_tree_basis, glue, identity_certificate,
    validate_certificate,
)

F3, F5, QQ = Field(3), Field(5), Field(0)


def _random_basis(m, rng):
    F = m.field
    out = {}
    for v in m.quiver.vertices:
        while True:
            g = F.random(m.dims[v], m.dims[v], rng)
            if F.inverse(g) is not None:
                out[v] = g
                break
    return out


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_indecomposables_have_connected_coefficient_quivers(seed):
    rng = np.random.default_rng(seed)
    m = preprojective(3, int(rng.integers(1, 4)), F5)
    assert coefficient_quiver(m, _random_basis(m, rng)).is_connected()


def test_split_module_disconnected_in_block_basis():
    q = Quiver.kronecker(2)
    m = direct_sum([simple_rep(q, F5, "x"), simple_rep(q, F5, "y")])
    assert not coefficient_quiver(m).is_connected()


@pytest.mark.parametrize("i", [1, 2, 3])
def test_tree_basis_of_preprojectives(i):
    m = preprojective(3, i, F5)
    cert = exceptional_tree_basis(m, 1)
    assert cert.is_tree and cert.normalized
    chk = validate_certificate(cert, m, 1)
    assert chk.ok and chk.edges == m.total_dim - 1


def test_tree_basis_rejects_non_exceptional():
    q = Quiver.kronecker(2)
    with pytest.raises(TreeError):
        exceptional_tree_basis(direct_sum([simple_rep(q, F5, "x")] * 2))


def _pair_with_large_ext(F):
    for m in reflection_corpus(THREE_VERTEX, F, 20, seed=5):
        for p in schofield_pairs(m, 1).pairs:
            if ExtSpace(p.X, p.Y).dim >= 2:
                return p.Y, p.X
    raise AssertionError("no pair with dim Ext >= 2 in the corpus")


def _glue_inputs(F):
    sub, quot = _pair_with_large_ext(F)
    zetas, ext = choose_elementary_cocycles(sub, quot, identity_certificate(sub), identity_certificate(quot))
    return sub, quot, zetas, ext.dim


def test_glue_is_an_extension():
    sub, quot, zetas, n = _glue_inputs(F5)
    rng = np.random.default_rng(2)
    t = random_rep(Quiver.kronecker(n), F5, {"x": 2, "y": 1}, rng)
    g = glue(t, sub, quot, zetas)
    spaces = {v: F5.vstack([F5.eye(sub.dims[v]), F5.zeros(g.dims[v] - sub.dims[v], sub.dims[v])], sub.dims[v])
              for v in g.quiver.vertices}
    s, qt, inc, proj = sub_quotient(g, spaces)
    assert is_isomorphic(s, sub) and is_isomorphic(qt, direct_sum([quot, quot]))
    assert inc.is_injective() and proj.is_surjective() and proj.compose(inc).is_zero()


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_glue_reflects_isomorphism(seed):
    sub, quot, zetas, n = _glue_inputs(F3)
    rng = np.random.default_rng(seed)
    q = Quiver.kronecker(n)
    dims = {"x": int(rng.integers(1, 3)), "y": int(rng.integers(0, 2))}
    t1, t2 = random_rep(q, F3, dims, rng), random_rep(q, F3, dims, rng)
    assert is_isomorphic(glue(t1, sub, quot, zetas), glue(t2, sub, quot, zetas), seed) == is_isomorphic(t1, t2, seed)


def test_three_vertex_corpus_certificates():
    for m in reflection_corpus(THREE_VERTEX, QQ, 5, seed=13):
        assert validate_certificate(exceptional_tree_basis(m, 3), m, 3).ok
