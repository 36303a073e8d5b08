"""Kronecker quivers Q_n: standard modules, classification for n = 2, exceptional families."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .decomp import decompose
from .linalg import Field
from .quiver import Quiver, QuiverError, Rep, injective_rep, kronecker_arrow, projective_rep, simple_rep
from .reflect import coxeter_power

INF = "inf"


def kronecker_quiver(n: int) -> Quiver:
    return Quiver.kronecker(n)


@lru_cache(maxsize=None)
def a_sequence(n: int, m: int) -> tuple:
    """a_0..a_m with a_0 = 0, a_1 = 1, a_{i+1} = n a_i - a_{i-1}."""
    out = [0, 1]
    while len(out) <= m:
        out.append(n * out[-1] - out[-2])
    return tuple(out[:m + 1])


def a_seq(n: int, i: int) -> int:
    if i < 0:
        raise ValueError("index must be non-negative")
    return a_sequence(n, i)[i]


def std_kronecker(kind: str, k: int, lam=None, field: Field | None = None) -> Rep:
    """P_k, I_k or R_{k,lam} over Q_2, with arrows a1 (alpha) and a2 (beta)."""
    F = field or Field(0)
    q = Quiver.kronecker(2)
    kind = kind.upper()
    if kind in ("P", "I"):
        if k < 0:
            raise QuiverError("P_k and I_k need k >= 0")
        alpha = F.zeros(k + 1, k)
        beta = F.zeros(k + 1, k)
        for i in range(k):
            alpha[i, i] = F.one
            beta[i + 1, i] = F.one
        if kind == "P":
            return Rep(q, F, {"x": k, "y": k + 1}, {"a1": alpha, "a2": beta}, check=False)
        return Rep(q, F, {"x": k + 1, "y": k}, {"a1": alpha.T.copy(), "a2": beta.T.copy()}, check=False)
    if kind == "R":
        if k < 1:
            raise QuiverError("R_{k,lam} needs k >= 1")
        if lam is None:
            raise QuiverError("R_{k,lam} needs an eigenvalue")
        ident = F.eye(k)
        sub = F.zeros(k, k)
        for i in range(k - 1):
            sub[i + 1, i] = F.one
        if lam == INF:
            return Rep(q, F, {"x": k, "y": k}, {"a1": sub, "a2": ident}, check=False)
        jordan = F.add(sub, F.scale(F(lam), ident))
        return Rep(q, F, {"x": k, "y": k}, {"a1": ident, "a2": jordan}, check=False)
    raise QuiverError(f"unknown Kronecker module kind {kind!r}")


def preprojective(n: int, i: int, field: Field | None = None) -> Rep:
    """P_i over Q_n, from the indecomposable projectives by the Coxeter functor."""
    F = field or Field(0)
    if i < 0:
        raise ValueError("i must be non-negative")
    q = Quiver.kronecker(n)
    base = simple_rep(q, F, "y") if i % 2 == 0 else projective_rep(q, F, "x")
    return coxeter_power(base, i // 2)


def preinjective(n: int, i: int, field: Field | None = None) -> Rep:
    """I_i over Q_n, from the indecomposable injectives by the Coxeter functor."""
    F = field or Field(0)
    if i < 0:
        raise ValueError("i must be non-negative")
    q = Quiver.kronecker(n)
    base = simple_rep(q, F, "x") if i % 2 == 0 else injective_rep(q, F, "y")
    return coxeter_power(base, -(i // 2))


def exceptional_index(n: int, dims: dict):
    """('P', i) or ('I', i) if dims = dim P_i or dim I_i over Q_n, else None."""
    dx, dy = dims["x"], dims["y"]
    i = 0
    while True:
        a, b = a_seq(n, i), a_seq(n, i + 1)
        if (dx, dy) == (a, b):
            return ("P", i)
        if (dx, dy) == (b, a):
            return ("I", i)
        if b > dx + dy or (n <= 1 and i > 2) or (n == 2 and i > dx + dy + 1):
            return None
        i += 1


def hom_ext_formula(n: int, a: tuple, b: tuple, which: str) -> int:
    """dim Hom or dim Ext^1 between exceptional Q_n modules given as ('P'|'I', index)."""
    (ka, i), (kb, j) = a, b
    if which == "hom":
        if ka == "P" and kb == "P":
            return a_seq(n, j - i + 1) if i <= j else 0
        if ka == "I" and kb == "I":
            # Hom(I_j', I_i') = Hom(P_i', P_j')
            return a_seq(n, i - j + 1) if j <= i else 0
        if ka == "I" and kb == "P":
            return 0
        return a_seq(n, i + j)
    if which == "ext":
        if ka == "P" and kb == "P":
            return a_seq(n, i - j - 1) if i >= j + 2 else 0
        if ka == "I" and kb == "I":
            return a_seq(n, j - i - 1) if j >= i + 2 else 0
        if ka == "I" and kb == "P":
            return a_seq(n, i + j + 2)
        return 0
    raise ValueError("which must be 'hom' or 'ext'")


# -- classification over Q_2 ---------------------------------------------------

@dataclass(frozen=True)
class Tag:
    kind: str          # "P", "I", "R" or "Rirr"
    size: int
    eig: object = None  # scalar or INF for "R"; tuple of monic coefficients for "Rirr"

    @property
    def dims(self) -> tuple:
        if self.kind == "P":
            return (self.size, self.size + 1)
        if self.kind == "I":
            return (self.size + 1, self.size)
        deg = 1 if self.kind == "R" else len(self.eig) - 1
        return (self.size * deg, self.size * deg)

    def __str__(self):
        x, y = self.dims
        if self.kind in ("P", "I"):
            return f"({x},{y})"
        return f"({x},{y})_{self.eig if self.kind == 'R' else 'irr' + str(list(self.eig))}"


class KroneckerType:
    """Multiset of indecomposable tags."""

    def __init__(self, tags):
        self.tags = Counter(tags)

    def __eq__(self, other):
        return isinstance(other, KroneckerType) and self.tags == other.tags

    def __hash__(self):
        return hash(frozenset(self.tags.items()))

    @property
    def dims(self) -> tuple:
        x = sum(t.dims[0] * k for t, k in self.tags.items())
        y = sum(t.dims[1] * k for t, k in self.tags.items())
        return (x, y)

    def sorted_tags(self):
        return sorted(self.tags.elements(), key=lambda t: (t.dims[1] - t.dims[0], t.dims, str(t.eig)))

    def __str__(self):
        return " + ".join(str(t) for t in self.sorted_tags()) or "0"

    __repr__ = __str__


def classify_q2(m: Rep, seed=None) -> KroneckerType:
    q = m.quiver
    if q != Quiver.kronecker(2):
        raise QuiverError("classify_q2 needs the Kronecker quiver with two arrows")
    if m.total_dim == 0:
        return KroneckerType([])
    dec = decompose(m, seed)
    tags = []
    for s, mult in dec.summands:
        tags.extend([classify_indecomposable_q2(s)] * mult)
    return KroneckerType(tags)


def classify_indecomposable_q2(s: Rep) -> Tag:
    F = s.field
    dx, dy = s.dims["x"], s.dims["y"]
    if dy == dx + 1:
        return Tag("P", dx)
    if dx == dy + 1:
        return Tag("I", dy)
    if dx != dy:
        raise QuiverError(f"dimension vector ({dx},{dy}) has no indecomposable over Q_2")
    a, b = s.mats[kronecker_arrow(2, 1)], s.mats[kronecker_arrow(2, 2)]
    ainv = F.inverse(a)
    if ainv is None:
        return Tag("R", dx, INF)
    facs = F.factor(F.charpoly(F.mul(b, ainv)))
    if len(facs) != 1:
        raise QuiverError("regular summand with several eigenvalues; decomposition incomplete")
    f, mult = facs[0]
    if len(f) == 2:
        return Tag("R", mult, F.neg(f[0]))
    return Tag("Rirr", mult, tuple(f))
