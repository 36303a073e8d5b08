"""Strata of 3-Kronecker representations of dimension vector (3,3), the H_n action,
degeneration curves and brute-force accessibility search."""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from functools import lru_cache
from itertools import product

import numpy as np

from .decomp import DEFAULT_SEED, EndAlgebra, end_dim, exact_locality, is_indecomposable
from .homext import hom_dim
from .kronecker import INF, KroneckerType, Tag, classify_q2, std_kronecker
from .linalg import Field
from .quiver import Quiver, Rep, direct_sum, kronecker_arrow, simple_rep, sub_quotient
from .treebasis import coefficient_quiver


class StrataError(ValueError):
    pass


# -- reports -------------------------------------------------------------------

@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}" + (f" {self.detail}" if self.detail else "")


@dataclass
class Report:
    title: str
    checks: list = dfield(default_factory=list)
    data: list = dfield(default_factory=list)   # informational rows

    def add(self, name, ok, detail=""):
        self.checks.append(Check(name, bool(ok), detail))
        return bool(ok)

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)
        self.data.extend(other.data)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def passed(self) -> int:
        return sum(c.ok for c in self.checks)

    def lines(self):
        out = [f"# {self.title}"]
        out.extend(self.data)
        out.extend(c.line() for c in self.checks)
        return out

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(
        DEFAULT_SEED if seed is None else seed)


# -- H_n action ----------------------------------------------------------------

def h_action(h, m: Rep) -> Rep:
    """(h * m)(a_i) = sum_j h_ij m(a_j) over Q_n."""
    F = m.field
    h = F.coerce(h)
    n = h.shape[0]
    if h.shape != (n, n):
        raise StrataError("h must be square")
    if m.quiver != Quiver.kronecker(n):
        raise StrataError(f"representation is not over the Kronecker quiver with {n} arrows")
    if F.inverse(h) is None:
        raise StrataError("h is singular")
    ids = [kronecker_arrow(n, i) for i in range(1, n + 1)]
    mats = {}
    for i, a in enumerate(ids):
        acc = F.zeros(m.dims["y"], m.dims["x"])
        for j, b in enumerate(ids):
            if h[i, j] != 0:
                acc = F.add(acc, F.scale(h[i, j], m.mats[b]))
        mats[a] = acc
    return Rep(m.quiver, F, m.dims, mats, check=False)


def mobius(h, lam, field: Field):
    """Action of an invertible 2x2 matrix on eigenvalues, lam <-> [1 : lam], INF <-> [0 : 1]."""
    F = field
    h = F.coerce(h)
    x, y = (F.zero, F.one) if lam == INF else (F.one, F(lam))
    nx = F(h[0, 0] * x + h[0, 1] * y)
    ny = F(h[1, 0] * x + h[1, 1] * y)
    if nx == 0:
        return INF
    return F(ny * F.inv(nx))


def check_mobius(h, k: int, lam, field: Field, seed=None) -> Check:
    """h * R_{k,lam} should be R_{k, h*lam}."""
    r = std_kronecker("R", k, lam, field)
    got = classify_q2(h_action(h, r), seed)
    want = KroneckerType([Tag("R", k, mobius(h, lam, field))])
    return Check(f"mobius[k={k},lam={lam}]", got == want, f"got {got} want {want}")


# -- endomorphism dimensions of Q_2 reps of dimension (3,3) ----------------------

# orbit, decomposition type, H_2 x G orbit dimension, dim End.
# "P0" = (0,1), "I0" = (1,0), "R2:1" = (2,2) with eigenvalue lambda_1; "^k" = multiplicity.
END_DIMENSION_TABLE = [
    ("B1", "P0^3 I0^3", 0, 18),
    ("B2", "P0^2 R1:1 I0^2", 4, 15),
    ("B3", "P1 P0 I0^2", 8, 10),
    ("B4", "P0^2 I0 I1", 8, 10),
    ("B5", "P0 R1:1^2 I0", 9, 10),
    ("B6", "R1:1^3", 10, 9),
    ("B7", "P0 R2:1 I0", 11, 8),
    ("B8", "I0 R1:1 R1:2 P0", 12, 8),
    ("B9", "P1 R1:1 I0", 13, 6),
    ("B10", "P0 R1:1 I1", 13, 6),
    ("B11", "R1:1 R2:1", 14, 5),
    ("B12", "P1 I1", 14, 4),
    ("B13", "P2 I0", 14, 4),
    ("B14", "P0 I2", 14, 4),
    ("B15", "R1:1 R1:2^2", 15, 5),
    ("B16", "R3:1", 16, 3),
    ("B17", "R1:1 R2:2", 17, 3),
    ("B18", "R1:1 R1:2 R1:3", 18, 3),
]

G_DIM_33 = 18   # dim GL_3 x GL_3


def _parse_type(s: str):
    """[(kind, size, eigen-index or None, multiplicity)]."""
    out = []
    for tok in s.split():
        tok, _, mult = tok.partition("^")
        kind, rest = tok[0], tok[1:]
        size, _, lam = rest.partition(":")
        out.append((kind, int(size), int(lam) if lam else None, int(mult) if mult else 1))
    return out


def eigen_choices(field: Field, count: int):
    """Distinct eigenvalues 0, 1, 2, ...; over F_p needs p >= count."""
    if field.p and field.p < count:
        raise StrataError(f"F_{field.p} has fewer than {count} distinct eigenvalues")
    return [field(i) for i in range(count)]


def table_representative(row_type: str, field: Field) -> Rep:
    comps = _parse_type(row_type)
    nlam = max([c[2] for c in comps if c[2]] or [0])
    lams = eigen_choices(field, nlam)
    ms = []
    for kind, size, li, mult in comps:
        lam = lams[li - 1] if li else None
        ms.extend([std_kronecker(kind, size, lam, field)] * mult)
    return direct_sum(ms)


def parameter_count(row_type: str) -> int:
    return len({c[2] for c in _parse_type(row_type) if c[2]})


def verify_end_dimension_table(field: Field | None = None) -> Report:
    """Rebuild every row from its decomposition type and compare dim End."""
    F = field or Field(0)
    rep = Report(f"end-dimension table over {F}")
    rep.data.append("row  type                 dimEnd  G-orbit(18-End)  table-orbit  params")
    for name, typ, orbit, end in END_DIMENSION_TABLE:
        m = table_representative(typ, F)
        dims_ok = m.dims == {"x": 3, "y": 3}
        e = end_dim(m)
        params = parameter_count(typ)
        rep.data.append(f"{name:<4} {typ:<20} {e:>6}  {G_DIM_33 - e:>15}  {orbit:>11}  {params:>6}")
        rep.add(f"end-dim[{name}]", dims_ok and e == end, f"computed={e} expected={end}")
    return rep


def orbit_parameter_consistency() -> Report:
    """Tabulated H_2 x G orbit dimension = 18 - dim End + number of eigenvalue parameters."""
    rep = Report("orbit dimension bookkeeping")
    for name, typ, orbit, end in END_DIMENSION_TABLE:
        p = parameter_count(typ)
        rep.add(f"orbit-dim[{name}]", orbit == G_DIM_33 - end + p, f"{orbit} = 18 - {end} + {p}")
    return rep


# -- fibres over (3,3) orbit representatives -----------------------------------

def _E(F, *pos, n=3):
    a = F.zeros(n, n)
    for i, j in pos:
        a[i - 1, j - 1] = F.one
    return a


def orbit_representative(orbit: str, field: Field, x=2):
    """The pair (z1, z2) representing an orbit; B18 needs a scalar x not in {0, 1}."""
    F = field
    I = F.eye(3)
    z = {
        "B1": ((), ()),
        "B2": (((1, 1),), ()),
        "B3": (((1, 1),), ((2, 1),)),
        "B4": (((1, 1),), ((1, 2),)),
        "B5": (((2, 1), (3, 2)), ()),
        "B6": ("I", ()),
        "B7": (((1, 1), (2, 2)), ((2, 1),)),
        "B8": (((1, 1), (2, 2)), ((1, 1),)),
        "B9": (((1, 1), (3, 2)), ((2, 1),)),
        "B10": (((1, 1), (2, 3)), ((1, 2),)),
        "B11": ("I", ((2, 1),)),
        "B12": (((1, 1), (3, 3)), ((2, 1), (3, 2))),
        "B13": (((1, 1), (2, 2)), ((2, 1), (3, 2))),
        "B14": (((1, 1), (2, 2)), ((1, 2), (2, 3))),
        "B15": ("I", ((3, 3),)),
        "B16": ("I", ((2, 1), (3, 2))),
        "B17": ("I", ((2, 1), (3, 3))),
        "B18": ("I", None),
    }
    if orbit not in z:
        raise StrataError(f"unknown orbit {orbit}")
    a, b = z[orbit]
    z1 = I.copy() if a == "I" else _E(F, *a)
    if b is None:
        x = F(x)
        if x == 0 or x == F.one:
            raise StrataError("B18 needs x outside {0, 1}")
        z2 = _E(F, (1, 1))
        z2[2, 2] = x
    else:
        z2 = _E(F, *b)
    return z1, z2


def triple_rep(z1, z2, c, field: Field) -> Rep:
    return Rep(Quiver.kronecker(3), field, {"x": 3, "y": 3}, {"a1": z1, "a2": z2, "a3": c}, check=False)


def pair_rep(z1, z2, field: Field) -> Rep:
    return Rep(Quiver.kronecker(2), field, {"x": 3, "y": 3}, {"a1": z1, "a2": z2}, check=False)


def random_stabilizer(z1, z2, field: Field, rng, tries: int = 50):
    """A random automorphism (g_x, g_y) of the Q_2 rep (z1, z2)."""
    F = field
    end = EndAlgebra(pair_rep(z1, z2, F))
    for _ in range(tries):
        cs = [F(int(c)) for c in rng.integers(0, F.p or 5, size=end.dim)]
        g = end.element(cs)
        gxi = F.inverse(g.maps["x"])
        if gxi is not None and F.inverse(g.maps["y"]) is not None:
            return g.maps["x"], gxi, g.maps["y"]
    raise StrataError("no invertible stabilizer element found")


class _Entries:
    """1-based accessor with exact tests."""

    def __init__(self, F, c):
        self.F, self.c = F, c

    def __call__(self, i, j):
        return self.c[i - 1, j - 1]

    def nz(self, x) -> bool:
        return self.F(x) != 0

    def div(self, a, b):
        return self.F(a * self.F.inv(b))

    def rank(self) -> int:
        return self.F.rank(self.c)


def _scalar(F, rng):
    return F(int(rng.integers(0, F.p))) if F.p else F(int(rng.integers(-3, 4)))


def _entry_piece(zeros=(), cond=None):
    """Random C with the given entries forced to zero, kept if cond holds."""
    def gen(F, rng):
        c = F.random(3, 3, rng, -3, 3)
        for i, j in zeros:
            c[i - 1, j - 1] = F.zero
        return c if cond is None or cond(_Entries(F, c)) else None
    return gen


def _pattern_piece(nparams, build):
    """C = build(F, params) for random params; build returns None to reject."""
    def gen(F, rng):
        ps = [_scalar(F, rng) for _ in range(nparams)]
        rows = build(F, *ps)
        return None if rows is None else F.matrix(rows)
    return gen


def _dual_piece(gen):
    def dual(F, rng):
        c = gen(F, rng)
        return None if c is None else c.T.copy()
    return dual


def _nz(F, x):
    return F(x) != 0


@dataclass
class Family:
    fid: str            # "B11/U3"
    orbit: str
    end_dim: int
    pieces: list        # generators (F, rng) -> C or None
    saturate: bool = False
    dual_of: str | None = None


def _families():
    fams = []

    def add(fid, end, pieces, saturate=False):
        fams.append(Family(fid, fid.split("/")[0], end, pieces, saturate))

    # B3
    add("B3/U3", 3, [_entry_piece([(3, 2), (3, 3)], lambda e: e.rank() == 3)])
    # B5, B6: orbits of a single matrix (family) under the stabilizer of z
    add("B5/U3", 3, [_pattern_piece(0, lambda F: [[1, 0, 0], [0, 1, 0], [0, 0, 1]])], saturate=True)
    add("B6/U3", 3, [_pattern_piece(1, lambda F, l: [[l, 0, 0], [1, l, 0], [0, 1, l]])], saturate=True)
    # B7
    add("B7/U2", 2, [
        _entry_piece([(3, 3)], lambda e: e.nz(e(1, 3)) and (
            e.nz(e(3, 1) + e.div(e(2, 3), e(1, 3)) * e(3, 2)) or e.nz(e(3, 2)))),
        _entry_piece([(3, 3), (1, 3)], lambda e: e.nz(e(2, 3) * e(3, 2))),
    ])
    add("B7/U3", 3, [_entry_piece([(1, 3), (3, 2), (3, 3)], lambda e: e.nz(e(2, 3) * e(3, 1)))])
    # B8
    add("B8/U2", 2, [
        _entry_piece([(3, 3)], lambda e: e.nz(e(1, 3) * e(2, 3)) and (e.nz(e(3, 1)) or e.nz(e(3, 2)))),
        _entry_piece([(3, 3), (2, 3)], lambda e: e.nz(e(3, 2) * e(1, 3)) and (e.nz(e(3, 1)) or e.nz(e(2, 1)))),
        _entry_piece([(3, 3), (1, 3)], lambda e: e.nz(e(2, 3) * e(3, 1)) and (e.nz(e(3, 2)) or e.nz(e(1, 2)))),
    ])
    # B9
    b9u1 = [
        _entry_piece([], lambda e: e.nz(e(1, 3)) and (
            e.nz(e(2, 2) - e.div(e(1, 2), e(1, 3)) * e(2, 3))
            or e.nz(e(3, 1) + e.div(e(3, 3), e(1, 3)) * (e(3, 2) - e(1, 1) - e.div(e(1, 2), e(1, 3)) * e(3, 3))))),
        _entry_piece([(1, 3)], lambda e: e.nz(e(2, 3) * e(1, 2))),
        _entry_piece([(1, 2), (1, 3)], lambda e: e.nz(e(2, 3) * e(3, 3))
                     and e.nz(e(1, 1) - e(3, 2) + e.div(e(2, 2), e(2, 3)) * e(3, 3))),
        _entry_piece([(1, 3), (2, 3)], lambda e: e.nz(e(3, 3)) and (e.nz(e(2, 2)) or e.nz(e(1, 2)))),
    ]
    b9u2 = [_b9_u2_piece()]
    add("B9/U1", 1, b9u1)
    add("B9/U2", 2, b9u2)
    # B11
    add("B11/U1", 1, [
        _entry_piece([], lambda e: e.nz(e(1, 2)) and (
            e.nz(e(2, 3) + e.div(e(1, 3), e(1, 2)) * (e(3, 3) - e(2, 2) - e.div(e(1, 3), e(1, 2)) * e(3, 2)))
            or e.nz(e(3, 1) + e.div(e(3, 2), e(1, 2)) * (e(3, 3) - e(1, 1) - e.div(e(1, 3), e(1, 2)) * e(3, 2))))),
        _entry_piece([(1, 2)], lambda e: e.nz(e(1, 3) * e(3, 2))),
        _entry_piece([(1, 2), (3, 2)], lambda e: e.nz((e(1, 1) - e(2, 2)) * (e(3, 3) - e(2, 2)) - e(1, 3) * e(3, 1))
                     and e.nz(e(1, 3))),
        _entry_piece([(1, 2), (1, 3)], lambda e: e.nz((e(1, 1) - e(2, 2)) * (e(1, 1) - e(3, 3)) - e(2, 3) * e(3, 2))
                     and e.nz(e(3, 2))),
    ])
    add("B11/U2", 2, [_b11_u2_piece(first=True), _b11_u2_piece(first=False)])
    add("B11/U3", 3, [_pattern_piece(4, lambda F, a, x, y, z: [[a, 0, 0], [x, a, y], [z, 0, a]]
                                     if _nz(F, z) or _nz(F, y) else None)])
    # B12
    add("B12/U1", 1, [_entry_piece([], lambda e: _b12_rank(e) == 2)])
    add("B12/U2", 2, [_b12_u2_piece()])
    add("B12/U3", 3, [_pattern_piece(3, lambda F, x, y, z: [[x, 0, 0], [y, 0, 0], [z, y, x]]
                                     if _nz(F, z) else None)])
    # B13
    add("B13/U1", 1, [_entry_piece([], lambda e: e.nz(e(1, 3)) or e.nz(e(2, 3)) or e.nz(e(3, 3)))])
    # B15
    add("B15/U1", 1, [
        _pattern_piece(7, lambda F, l, m, x1, x2, y1, y2, t:
                       [[l, 0, y1], [0, m, y2], [x1, x2, t]]
                       if F(l - m) != 0 and (_nz(F, x1) or _nz(F, y1)) and (_nz(F, x2) or _nz(F, y2)) else None),
        _pattern_piece(6, lambda F, l, x1, x2, y1, y2, t:
                       [[l, 0, y1], [1, l, y2], [x1, x2, t]] if _nz(F, x2) or _nz(F, y1) else None),
    ], saturate=True)
    add("B15/U2", 2, [
        _pattern_piece(4, lambda F, l, x, y, t: [[l, 0, 0], [0, l, y], [x, 0, t]]
                       if _nz(F, x) and _nz(F, y) else None),
        _pattern_piece(4, lambda F, l, x, y, t: [[l, 0, 0], [1, l, y], [x, 0, t]]
                       if _nz(F, x) or _nz(F, y) else None),
    ], saturate=True)
    # B16
    add("B16/U3", 3, [_pattern_piece(3, lambda F, a, b, c: [[a, 0, 0], [b, a, 0], [c, b, a]])])
    add("B16/U2", 2, [_pattern_piece(5, lambda F, x, y, u, v, z: [[x, 0, 0], [u, y, 0], [z, v, x]]
                                     if F(x - y) != 0 or F(u - v) != 0 else None)])
    add("B16/U1", 1, [_entry_piece([], _b16_generic)])
    # B17
    add("B17/U2", 2, [_pattern_piece(5, lambda F, a, b, c, d, e: [[a, 0, 0], [b, a, d], [c, 0, e]]
                                     if _nz(F, d) or _nz(F, c) else None)])
    add("B17/U1", 1, [_entry_piece([], _b17_generic)])
    # B18
    add("B18/U1", 1, [_entry_piece([], lambda e: _pairs_nonzero(e))])

    # dual orbits: transpose the family of the partner orbit
    for src, dst in (("B3", "B4"), ("B9", "B10"), ("B13", "B14")):
        for f in list(fams):
            if f.orbit == src:
                fams.append(Family(f.fid.replace(src, dst), dst, f.end_dim,
                                   [_dual_piece(g) for g in f.pieces], f.saturate, f.fid))
    return {f.fid: f for f in fams}


def _b9_u2_piece():
    def gen(F, rng):
        c = F.random(3, 3, rng, -3, 3)
        c[0, 1] = c[0, 2] = F.zero
        if c[1, 2] == 0:
            return None
        # c11 = c32 - c22 c33 / c23
        c[0, 0] = F(c[2, 1] - c[1, 1] * c[2, 2] * F.inv(c[1, 2]))
        return c if (c[2, 2] != 0 or c[2, 0] != 0) else None
    return gen


def _b11_u2_piece(first: bool):
    def gen(F, rng):
        c = F.random(3, 3, rng, -3, 3)
        e = _Entries(F, c)
        if first:
            c[0, 1] = c[2, 1] = F.zero
            if e.nz(e(1, 3)):
                c[2, 0] = F((e(1, 1) - e(2, 2)) * (e(3, 3) - e(2, 2)) * F.inv(e(1, 3)))
            ok = F((e(1, 1) - e(2, 2)) * (e(3, 3) - e(2, 2)) - e(1, 3) * e(3, 1)) == 0 and (
                e.nz(e(1, 3)) or e.nz(e(2, 3) * (e(1, 1) - e(2, 2))))
        else:
            c[0, 1] = c[0, 2] = F.zero
            if e.nz(e(3, 2)):
                c[1, 2] = F((e(1, 1) - e(2, 2)) * (e(1, 1) - e(3, 3)) * F.inv(e(3, 2)))
            ok = F((e(1, 1) - e(2, 2)) * (e(1, 1) - e(3, 3)) - e(2, 3) * e(3, 2)) == 0 and (
                e.nz(e(3, 2)) or e.nz(e(3, 1) * (e(1, 1) - e(2, 2))))
        return c if ok else None
    return gen


def _b12_u2_piece():
    """All rows of E_C proportional to a direction (s, t)."""
    def gen(F, rng):
        c = F.random(3, 3, rng, -3, 3)
        s, t, alpha, eps = (_scalar(F, rng) for _ in range(4))
        if s == 0 and t == 0:
            return None
        beta = F(alpha * s * F.inv(t)) if t != 0 else _scalar(F, rng)
        if t == 0:
            alpha = F.zero
        c[0, 1], c[0, 2] = F(alpha * s), F(alpha * t)
        c[1, 1], c[1, 2] = F(beta * s), F(beta * t)
        c[1, 0] = F(c[2, 1] + eps * s)
        c[0, 0] = F(c[2, 2] + eps * t)
        e = _Entries(F, c)
        ok = _b12_rank(e) == 1 and any(e.nz(e(i, j)) for i, j in ((1, 2), (1, 3), (2, 2), (2, 3)))
        return c if ok else None
    return gen


def _b12_rank(e) -> int:
    F = e.F
    rows = [[e(1, 2), e(1, 3)], [e(2, 2), e(2, 3)], [e(2, 2), e(1, 2)], [e(2, 3), e(1, 3)],
            [F(e(2, 1) - e(3, 2)), F(e(1, 1) - e(3, 3))]]
    return F.rank(F.matrix(rows))


def _is_b16_u3(e) -> bool:
    F = e.F
    return (all(F(e(i, j)) == 0 for i, j in ((1, 2), (1, 3), (2, 3)))
            and F(e(1, 1) - e(2, 2)) == 0 and F(e(2, 2) - e(3, 3)) == 0 and F(e(2, 1) - e(3, 2)) == 0)


def _is_b16_u2(e) -> bool:
    F = e.F
    if any(F(e(i, j)) != 0 for i, j in ((1, 2), (1, 3), (2, 3))) or F(e(1, 1) - e(3, 3)) != 0:
        return False
    return F(e(1, 1) - e(2, 2)) != 0 or F(e(2, 1) - e(3, 2)) != 0


def _b16_generic(e) -> bool:
    return not _is_b16_u3(e) and not _is_b16_u2(e)


def _is_b17_u2(e) -> bool:
    F = e.F
    if any(F(e(i, j)) != 0 for i, j in ((1, 2), (1, 3), (3, 2))):
        return False
    if F(e(1, 1) - e(2, 2)) != 0:
        return False
    return e.nz(e(2, 3)) or e.nz(e(3, 1))


def _b17_generic(e) -> bool:
    return (e.nz(e(3, 1)) or e.nz(e(3, 2)) or e.nz(e(1, 3)) or e.nz(e(2, 3))) and not _is_b17_u2(e)


def _pairs_nonzero(e) -> bool:
    p12 = e.nz(e(1, 2)) or e.nz(e(2, 1))
    p13 = e.nz(e(1, 3)) or e.nz(e(3, 1))
    p23 = e.nz(e(2, 3)) or e.nz(e(3, 2))
    return (p12 and p13) or (p12 and p23) or (p13 and p23)


FAMILIES = _families()

# orbit -> end dims with a nonempty stratum; every other i >= 1 is claimed empty
NONEMPTY_STRATA = {
    "B1": (), "B2": (), "B3": (3,), "B4": (3,), "B5": (3,), "B6": (3,),
    "B7": (2, 3), "B8": (2,), "B9": (1, 2), "B10": (1, 2), "B11": (1, 2, 3),
    "B12": (1, 2, 3), "B13": (1,), "B14": (1,), "B15": (1, 2), "B16": (1, 2, 3),
    "B17": (1, 2), "B18": (1,),
}


def sample_family(fid: str, field: Field, count: int, seed=None, max_tries: int = 5000):
    """Up to count fibre points (as Q_3 reps), spread round-robin over the pieces."""
    if fid not in FAMILIES:
        raise StrataError(f"unknown family {fid}")
    fam = FAMILIES[fid]
    F = field
    rng = _rng(seed)
    z1, z2 = orbit_representative(fam.orbit, F, x=_b18_x(F, rng) if fam.orbit == "B18" else 2)
    out, tries, k = [], 0, 0
    while len(out) < count and tries < max_tries:
        tries += 1
        gen = fam.pieces[k % len(fam.pieces)]
        c = gen(F, rng)
        if c is None:
            continue
        k += 1
        if fam.saturate:
            c = _saturate(fam, z1, z2, c, F, rng)
        out.append(triple_rep(z1, z2, c, F))
    return out


def _b18_x(F, rng):
    if F.p and F.p <= 2:
        raise StrataError("B18 needs a field with more than two elements")
    return F(int(rng.integers(2, F.p))) if F.p else F(int(rng.integers(2, 6)))


def _saturate(fam, z1, z2, c, F, rng):
    # the dual families transpose after saturating, so the stabilizer is that of the partner orbit
    if fam.dual_of:
        w1, w2 = z1.T.copy(), z2.T.copy()
        gx, gxi, gy = random_stabilizer(w1, w2, F, rng)
        return F.mul_chain(gy, c.T.copy(), gxi).T.copy()
    gx, gxi, gy = random_stabilizer(z1, z2, F, rng)
    return F.mul_chain(gy, c, gxi)


def check_stratum_family(fid: str, samples: int = 5, seed=None, field: Field | None = None,
                         paranoid: bool = True) -> Report:
    F = field or Field(7)
    fam = FAMILIES.get(fid)
    if fam is None:
        raise StrataError(f"unknown family {fid}")
    rep = Report(f"family {fid} over {F}")
    pts = sample_family(fid, F, samples, seed)
    rep.add(f"{fid}:sampled", len(pts) >= samples, f"{len(pts)}/{samples}")
    for k, m in enumerate(pts):
        e = end_dim(m)
        ind = is_indecomposable(m, seed, paranoid=paranoid)
        rep.add(f"{fid}:sample{k}", ind and e == fam.end_dim,
                f"indecomposable={ind} end={e} expected={fam.end_dim}")
    return rep


def check_empty_strata(orbit: str, points: int = 1000, seed=None, field: Field | None = None,
                       min_end: int = 4) -> Report:
    """Random fibre points over the orbit: none may be indecomposable with dim End >= min_end
    (or with an End dimension the table marks empty)."""
    F = field or Field(7)
    rng = _rng(seed)
    z1, z2 = orbit_representative(orbit, F)
    allowed = NONEMPTY_STRATA[orbit]
    rep = Report(f"empty strata over {orbit}")
    bad, high = 0, 0
    for _ in range(points):
        m = triple_rep(z1, z2, F.random(3, 3, rng), F)
        e = end_dim(m)
        if e >= min_end:
            high += 1
            if e not in allowed and is_indecomposable(m, rng, paranoid=True):
                bad += 1
    rep.add(f"empty[{orbit},i>={min_end}]", bad == 0,
            f"points={points} with_end>={min_end}:{high} indecomposable:{bad}")
    return rep


# -- tree modules per stratum --------------------------------------------------

def tree_triples(field: Field):
    F = field
    return [
        ("U3", 3, (_E(F, (1, 1)), _E(F, (2, 1)), _E(F, (1, 2), (2, 3), (3, 1)))),
        ("U2", 2, (_E(F, (1, 1), (2, 2)), _E(F, (2, 1)), _E(F, (2, 3), (3, 2)))),
        ("U1", 1, (_E(F, (1, 1), (2, 2)), _E(F, (2, 1), (3, 2)), _E(F, (1, 3)))),
    ]


def check_tree_triples(field: Field | None = None, seed=None) -> Report:
    F = field or Field(0)
    rep = Report(f"tree modules over {F}")
    for name, end, (a, b, c) in tree_triples(F):
        m = triple_rep(a, b, c, F)
        e = end_dim(m)
        ind = is_indecomposable(m, seed, paranoid=True)
        cq = coefficient_quiver(m)
        tree = cq.n_vertices == 6 and cq.n_edges == 5 and cq.is_connected()
        rep.add(f"tree[{name}]", ind and e == end and tree,
                f"indecomposable={ind} end={e} expected={end} vertices={cq.n_vertices} edges={cq.n_edges}")
    return rep


# -- (4,4) counterexamples -------------------------------------------------------

def local_six_rep(field: Field) -> Rep:
    F = field
    return Rep(Quiver.kronecker(3), F, {"x": 4, "y": 4},
               {"a1": F.eye(4), "a2": _E(F, (1, 3), (2, 4), n=4), "a3": _E(F, (2, 3), n=4)}, check=False)


def u_lambda_rep(lam, field: Field) -> Rep:
    F = field
    lam = F(lam)
    if lam == 0 or lam == F.one:
        raise StrataError("lambda must lie outside {0, 1}")
    c = _E(F, (3, 1), n=4)
    c[3, 1] = F.inv(lam)
    return Rep(Quiver.kronecker(3), F, {"x": 4, "y": 4},
               {"a1": F.eye(4), "a2": _E(F, (2, 1), (4, 3), n=4), "a3": c}, check=False)


def check_counterexamples(field: Field | None = None, lams=(2, 3)) -> Report:
    F = field or Field(0)
    rep = Report(f"(4,4) endomorphism rings over {F}")
    m = local_six_rep(F)
    end = EndAlgebra(m)
    loc = exact_locality(m, end)
    rep.add("local-six", end.dim == 6 and loc.local is True, f"end={end.dim} local={loc.local} ({loc.method})")
    for lam in lams:
        u = u_lambda_rep(lam, F)
        e = EndAlgebra(u)
        comm = e.is_commutative()
        rep.add(f"u-lambda[{lam}]", e.dim == 4 and not comm, f"end={e.dim} commutative={comm}")
    return rep


# -- degeneration curves ---------------------------------------------------------

CURVES = ("B8_to_B7", "B11_to_B9")


def _tags_type(*tags):
    return KroneckerType(tags)


def curve_point(curve: str, eps, field: Field, mu=1) -> Rep:
    F = field
    eps = F(eps)
    if curve == "B8_to_B7":
        a1 = _E(F, (1, 1), (2, 2))
        a2 = _E(F, (2, 1))
        a2[0, 0] = eps
        return pair_rep(a1, a2, F)
    if curve == "B11_to_B9":
        seq = extension_sequence_b11(F, mu)
        x = scaled_extension(seq, eps)
        return direct_sum([std_kronecker("R", 1, F(mu), F), x])
    raise StrataError(f"unknown curve {curve}")


def expected_curve_type(curve: str, eps, field: Field, mu=1):
    F = field
    eps, mu = F(eps), F(mu)
    zero = F.zero
    if curve == "B8_to_B7":
        if eps == 0:
            return _tags_type(Tag("P", 0), Tag("R", 2, zero), Tag("I", 0))
        return _tags_type(Tag("I", 0), Tag("P", 0), Tag("R", 1, eps), Tag("R", 1, zero))
    if curve == "B11_to_B9":
        if eps == 0:
            return _tags_type(Tag("P", 1), Tag("R", 1, mu), Tag("I", 0))
        return _tags_type(Tag("R", 1, mu), Tag("R", 2, mu))
    raise StrataError(f"unknown curve {curve}")


@dataclass
class ExtensionSequence:
    middle: Rep
    sub: Rep
    quot: Rep
    inclusion: object
    projection: object
    basis: dict         # [sub basis | complement] per vertex
    sub_dims: dict


def extension_sequence_b11(field: Field, mu=1) -> ExtensionSequence:
    """0 -> P_1 -> R_{2,mu} -> I_0 -> 0, the sub spanned by the first x basis vector and all of y."""
    F = field
    r = std_kronecker("R", 2, F(mu), F)
    spaces = {"x": F.unit(2, 0), "y": F.eye(2)}
    sub, quot, inc, proj = sub_quotient(r, spaces)
    basis = {"x": F.eye(2), "y": F.eye(2)}
    return ExtensionSequence(r, sub, quot, inc, proj, basis, {"x": 1, "y": 2})


def scaled_extension(seq: ExtensionSequence, eps) -> Rep:
    """Scale the off-diagonal (cocycle) block of the middle term by eps."""
    F = seq.middle.field
    t = seq.middle.transform(seq.basis)
    mats = {}
    for a in t.quiver.arrows:
        mat = t.mats[a.id].copy()
        k, l = seq.sub_dims[a.tgt], seq.sub_dims[a.src]
        block = mat[:k, l:]
        mat[:k, l:] = F.scale(F(eps), block)
        mats[a.id] = mat
    return Rep(t.quiver, F, t.dims, mats, check=False)


def degeneration_curve(curve: str, epsilons, field: Field | None = None, seed=None, mu=1) -> Report:
    F = field or Field(0)
    if curve not in CURVES:
        raise StrataError(f"unknown curve {curve}")
    rep = Report(f"curve {curve} over {F}")
    pts = {}
    for eps in epsilons:
        m = curve_point(curve, eps, F, mu)
        got = classify_q2(m, seed)
        want = expected_curve_type(curve, eps, F, mu)
        pts[F(eps)] = m
        rep.add(f"{curve}:type[eps={F.fmt(F(eps))}]", got == want, f"got {got} want {want}")
    if curve == "B11_to_B9":
        seq = extension_sequence_b11(F, mu)
        exact = (seq.inclusion.is_injective() and seq.projection.is_surjective()
                 and seq.projection.compose(seq.inclusion).is_zero())
        ends = (classify_q2(seq.sub, seed) == _tags_type(Tag("P", 1))
                and classify_q2(seq.quot, seed) == _tags_type(Tag("I", 0))
                and classify_q2(seq.middle, seed) == _tags_type(Tag("R", 2, F(mu))))
        rep.add(f"{curve}:sequence", exact and ends, "0 -> P_1 -> R_2 -> I_0 -> 0")
    special = pts[F.zero] if F.zero in pts else curve_point(curve, 0, F, mu)
    q2 = Quiver.kronecker(2)
    tests = {"E_x": simple_rep(q2, F, "x"), "E_y": simple_rep(q2, F, "y"), "P_1": std_kronecker("P", 1, None, F)}
    for eps, m in pts.items():
        if eps == 0:
            continue
        for tname, t in tests.items():
            g, s = hom_dim(m, t), hom_dim(special, t)
            rep.add(f"{curve}:hom-monotone[eps={F.fmt(eps)},{tname}]", g <= s, f"generic={g} special={s}")
    return rep


# -- accessibility ---------------------------------------------------------------

@dataclass
class AccessStep:
    rep: Rep            # the module before the step
    direction: str      # "sub": a simple sub is removed; "quot": a simple quotient is removed
    vertex: str
    vector: object      # spanning vector (sub) or functional (quot) at the vertex
    remainder: Rep      # indecomposable of length one less


@dataclass
class AccessibilityWitness:
    start: Rep
    steps: list

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def end(self) -> Rep:
        return self.steps[-1].remainder if self.steps else self.start


def _require_prime_field(m: Rep):
    if not m.field.p:
        raise StrataError("accessibility search needs a prime field")


def _lines(F, k):
    """Normalized coefficient vectors of the lines in F^k."""
    for lead in range(k):
        for tail in product(range(F.p), repeat=k - lead - 1):
            v = [0] * lead + [1] + list(tail)
            yield np.array(v, dtype=np.int64)


def _simple_subs(m: Rep):
    F = m.field
    for v in m.quiver.vertices:
        d = m.dims[v]
        if not d:
            continue
        outs = [m.mats[a.id] for a in m.quiver.out_arrows(v) if m.dims[a.tgt]]
        ker = F.kernel(F.vstack(outs, d)) if outs else F.eye(d)
        for c in _lines(F, ker.shape[1]):
            w = F.mul(ker, c.reshape(-1, 1))
            _, quot, _, _ = sub_quotient(m, {v: w})
            yield v, w, quot


def _simple_quotients(m: Rep):
    F = m.field
    for v in m.quiver.vertices:
        d = m.dims[v]
        if not d:
            continue
        ins = [m.mats[a.id] for a in m.quiver.in_arrows(v) if m.dims[a.src]]
        img = F.hstack(ins, d) if ins else F.zeros(d, 0)
        funcs = F.left_kernel(img) if img.shape[1] else F.eye(d)
        for c in _lines(F, funcs.shape[0]):
            phi = F.mul(c.reshape(1, -1), funcs)
            spaces = {u: F.eye(m.dims[u]) for u in m.quiver.vertices}
            spaces[v] = F.kernel(phi)
            sub, _, _, _ = sub_quotient(m, spaces)
            yield v, phi, sub


@lru_cache(maxsize=None)
def _gl_group(p: int, d: int):
    """All invertible d x d matrices over F_p and their inverses, as int arrays."""
    F = Field(p)
    gs, invs = [], []
    for flat in product(range(p), repeat=d * d):
        g = np.array(flat, dtype=np.int64).reshape(d, d)
        gi = F.inverse(g) if d else g
        if gi is not None:
            gs.append(g)
            invs.append(gi)
    if d == 0:
        gs, invs = [np.zeros((0, 0), dtype=np.int64)], [np.zeros((0, 0), dtype=np.int64)]
    return np.array(gs).reshape(-1, d, d), np.array(invs).reshape(-1, d, d)


def gl_order(p: int, d: int) -> int:
    out = 1
    for i in range(d):
        out *= p ** d - p ** i
    return out


def canonical_form(m: Rep, cap: int = 20000):
    """Lexicographically least matrix tuple over all vertex base changes, or None above cap."""
    _require_prime_field(m)
    p = m.field.p
    q = m.quiver
    ds = [m.dims[v] for v in q.vertices]
    sizes = [gl_order(p, d) for d in ds]
    total = int(np.prod(sizes, dtype=object))
    if total > cap or any(p ** (d * d) > 4 * cap for d in ds):
        return None
    groups = [_gl_group(p, d) for d in ds]
    idx = np.unravel_index(np.arange(total), sizes) if sizes else ()
    vi = {v: i for i, v in enumerate(q.vertices)}
    cols = []
    for a in q.arrows:
        s, t = vi[a.src], vi[a.tgt]
        if not ds[s] or not ds[t]:
            continue
        gt = groups[t][0][idx[t]]
        gsi = groups[s][1][idx[s]]
        prod_ = np.matmul(np.matmul(gt, m.mats[a.id].astype(np.int64)) % p, gsi) % p
        cols.append(prod_.reshape(total, -1))
    if not cols:
        return (tuple(ds), b"")
    keys = np.concatenate(cols, axis=1)
    order = np.lexsort(keys.T[::-1])
    return (tuple(ds), keys[order[0]].tobytes())


class AccessibilitySearch:
    """Depth-first search for a chain of simple sub/quotient removals through indecomposables."""

    def __init__(self, seed=None, canon_cap: int = 20000, canon_max_dim: int = 5):
        self.seed = seed
        self.canon_cap = canon_cap
        self.canon_max_dim = canon_max_dim
        self.dead = set()       # keys of modules shown not accessible
        self.nodes = 0

    def key(self, m: Rep):
        if m.total_dim <= self.canon_max_dim:
            c = canonical_form(m, self.canon_cap)
            if c is not None:
                return ("canon",) + c
        # exact matrices: equality only on identical reps, so pruning stays sound
        return ("exact", m.dimvec, tuple(m.mats[a.id].tobytes() for a in m.quiver.arrows))

    def _indecomposable(self, m: Rep) -> bool:
        return m.total_dim > 0 and is_indecomposable(m, self.seed, paranoid=True)

    def search(self, m: Rep, max_depth: int):
        """Steps from m down to a simple, or None."""
        self.nodes += 1
        if m.total_dim == 1:
            return []
        if max_depth < m.total_dim - 1:
            return None
        k = self.key(m)
        if k in self.dead:
            return None
        for direction, gen in (("sub", _simple_subs), ("quot", _simple_quotients)):
            for v, vec, rest in gen(m):
                if not self._indecomposable(rest):
                    continue
                tail = self.search(rest, max_depth - 1)
                if tail is not None:
                    return [AccessStep(m, direction, v, vec, rest)] + tail
        self.dead.add(k)
        return None


def accessibility_search(m: Rep, max_depth: int | None = None, seed=None,
                         searcher: AccessibilitySearch | None = None):
    _require_prime_field(m)
    m = m.restrict_to_support() if m.total_dim else m
    if m.total_dim == 0:
        raise StrataError("zero representation")
    s = searcher or AccessibilitySearch(seed)
    if not s._indecomposable(m):
        return None
    depth = m.total_dim - 1 if max_depth is None else max_depth
    steps = s.search(m, depth)
    return None if steps is None else AccessibilityWitness(m, steps)


def verify_witness(w: AccessibilityWitness, seed=None) -> bool:
    cur = w.start
    for st in w.steps:
        if st.rep is not cur and not st.rep == cur:
            return False
        if st.remainder.total_dim != cur.total_dim - 1:
            return False
        if not is_indecomposable(st.remainder, seed, paranoid=True):
            return False
        cur = st.remainder
    return cur.total_dim == 1


def simple_extension_witness(m: Rep, seed=None):
    """One step: 0 -> U1 -> m -> U2 -> 0 with both ends indecomposable and one of them simple."""
    _require_prime_field(m)
    if m.total_dim <= 1:
        return None
    for direction, gen in (("sub", _simple_subs), ("quot", _simple_quotients)):
        for v, vec, rest in gen(m):
            if rest.total_dim and is_indecomposable(rest, seed, paranoid=True):
                return AccessStep(m, direction, v, vec, rest)
    return None


def check_one_simple_extensions(field: Field | None = None, samples: int = 3, seed=None) -> Report:
    """Indecomposable members of the encoded families are extensions of an indecomposable by a simple."""
    F = field or Field(2)
    _require_prime_field(Rep(Quiver.kronecker(3), F, {}, {}))
    rep = Report(f"one-simple extensions over {F}")
    for fid in FAMILIES:
        try:
            pts = sample_family(fid, F, samples, seed, max_tries=2000)
        except StrataError:
            rep.data.append(f"# {fid}: not realizable over {F}")
            continue
        found = 0
        for m in pts:
            if not is_indecomposable(m, seed, paranoid=True):
                continue
            found += 1
            st = simple_extension_witness(m, seed)
            rep.add(f"one-simple[{fid}]", st is not None,
                    "none found" if st is None else f"{st.direction} at {st.vertex}")
        if not found:
            rep.data.append(f"# {fid}: no indecomposable sample over {F}")
    return rep
