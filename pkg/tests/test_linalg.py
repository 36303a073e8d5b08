import numpy as np
import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from quiverkit.linalg import Field, LinalgError

FIELDS = [Field(0), Field(2), Field(5), Field(101)]


@st.composite
def matrices(draw, max_rows=7, max_cols=7, fields=FIELDS):
    F = draw(st.sampled_from(fields))
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    entries = draw(st.lists(st.integers(-3, 3), min_size=r * c, max_size=r * c))
    rows = [entries[i * c:(i + 1) * c] for i in range(r)]
    return F, F.matrix(rows, r, c)


def test_parse_and_str_round_trip():
    for spec in ("Q", "Fp:2", "Fp:7", "Fp:101"):
        assert str(Field.parse(spec)) == spec


@pytest.mark.parametrize("bad", ["Fp:4", "Fp:1", "R", "Fp:x"])
def test_parse_rejects_bad_fields(bad):
    with pytest.raises(ValueError):
        Field.parse(bad)


def test_rational_entries_stay_exact():
    F = Field(0)
    a = F.matrix([[1, 2], [3, 4]])
    inv = F.inverse(a)
    assert inv[0, 0] == mpq(-2) and inv[1, 0] == mpq(3, 2)
    assert F.equal(F.mul(a, inv), F.eye(2))


def test_rank_depends_on_characteristic():
    rows = [[1, 1], [1, -1]]
    assert Field(0).rank(Field(0).matrix(rows)) == 2
    assert Field(2).rank(Field(2).matrix(rows)) == 1


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_agrees_with_reference_elimination(fm):
    F, a = fm
    r1, p1 = F.rref(a)
    r2, p2 = F.rref_reference(a)
    assert list(p1) == list(p2)
    assert F.equal(r1, r2)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity_and_kernel(fm):
    F, a = fm
    k = F.kernel(a)
    assert k.shape == (a.shape[1], a.shape[1] - F.rank(a))
    assert F.is_zero(F.mul(a, k))
    assert F.rank(k) == k.shape[1]


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_left_kernel_annihilates(fm):
    F, a = fm
    lk = F.left_kernel(a)
    assert lk.shape[1] == a.shape[0]
    assert F.is_zero(F.mul(lk, a))
    assert lk.shape[0] == a.shape[0] - F.rank(a)


@settings(max_examples=40, deadline=None)
@given(matrices(), st.integers(0, 10**6))
def test_solve_recovers_consistent_systems(fm, seed):
    F, a = fm
    x0 = F.random(a.shape[1], 2, np.random.default_rng(seed))
    b = F.mul(a, x0)
    x = F.solve(a, b)
    assert x is not None and F.equal(F.mul(a, x), b)


def test_solve_detects_inconsistency():
    F = Field(0)
    assert F.solve(F.matrix([[1, 1], [2, 2]]), F.matrix([[1], [3]])) is None


@settings(max_examples=40, deadline=None)
@given(matrices(max_rows=5, max_cols=5), st.integers(0, 10**6))
def test_complement_completes_a_basis(fm, seed):
    F, a = fm
    basis = F.column_basis(a)
    comp = F.complement(basis, a.shape[0])
    full = F.hstack([basis, comp], a.shape[0])
    assert full.shape[1] == a.shape[0] and F.rank(full) == a.shape[0]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 6), st.integers(0, 10**6))
def test_charpoly_matches_sympy(F, n, seed):
    a = F.random(n, n, np.random.default_rng(seed))
    got = F.charpoly(a)
    t = sympy.Symbol("t")
    sm = sympy.Matrix(n, n, lambda i, j: sympy.Rational(str(a[i, j])) if not F.p else int(a[i, j]))
    want = sympy.Poly(sm.charpoly(t).as_expr(), t, **({"modulus": F.p} if F.p else {"domain": "QQ"}))
    want_coeffs = [F(int(c)) if F.p else mpq(str(c)) for c in reversed(want.all_coeffs())]
    want_coeffs += [F.zero] * (n + 1 - len(want_coeffs))
    assert got == want_coeffs
    assert F.is_zero(F.poly_eval(got, a))


def test_factor_splits_over_finite_field():
    F = Field(5)
    # t^2 + 1 = (t - 2)(t - 3) over F_5, irreducible over Q
    facs = F.factor([F(1), F(0), F(1)])
    assert sorted(tuple(int(c) for c in f) for f, _ in facs) == [(2, 1), (3, 1)]
    assert len(Field(0).factor([mpq(1), mpq(0), mpq(1)])) == 1


def test_kron_and_block_diag_shapes():
    F = Field(7)
    a, b = F.eye(2), F.matrix([[1, 2, 3]])
    assert F.kron(a, b).shape == (2, 6)
    bd = F.block_diag([a, b])
    assert bd.shape == (3, 5) and F.rank(bd) == 3


def test_large_prime_rejected():
    with pytest.raises(LinalgError):
        Field(2**31 + 11)
