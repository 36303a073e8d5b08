"""Endomorphism algebras, Fitting and primary splittings, decomposition, isomorphism."""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from itertools import product

import numpy as np

from .homext import hom_basis, Cochains, is_exceptional
from .quiver import Morphism, Rep, direct_sum, identity_morphism, random_rep

DEFAULT_SEED = 20240601


class DecompError(ValueError):
    pass


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(
        DEFAULT_SEED if seed is None else seed)


def _coeffs(F, rng, k):
    if F.p:
        return [int(c) for c in rng.integers(0, F.p, size=k)]
    return [int(c) for c in rng.integers(-2, 3, size=k)]


# -- endomorphism algebra ------------------------------------------------------

class EndAlgebra:
    def __init__(self, rep: Rep):
        self.rep = rep
        self.space = hom_basis(rep, rep)
        self.basis = self.space.basis
        self._sc = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, coeffs) -> Morphism:
        return self.space.combine(coeffs)

    def coords(self, f: Morphism) -> np.ndarray:
        F = self.rep.field
        cc = Cochains(self.rep, self.rep)
        x = F.solve(self.space.matrix(), cc.flatten0(f.maps).reshape(-1, 1))
        if x is None:
            raise DecompError("not an endomorphism")
        return x.reshape(-1)

    @property
    def structure_constants(self) -> np.ndarray:
        """c[i, j, k] with basis_i * basis_j = sum_k c[i, j, k] basis_k."""
        if self._sc is None:
            F = self.rep.field
            cc = Cochains(self.rep, self.rep)
            d = self.dim
            rhs = [cc.flatten0(self.basis[i].compose(self.basis[j]).maps).reshape(-1, 1)
                   for i in range(d) for j in range(d)]
            sol = F.solve(self.space.matrix(), F.hstack(rhs, cc.c0_dim))
            if sol is None:
                raise DecompError("endomorphisms not closed under composition")
            self._sc = sol.T.reshape(d, d, d)
        return self._sc

    def identity_coords(self) -> np.ndarray:
        return self.coords(identity_morphism(self.rep))

    def is_commutative(self) -> bool:
        sc = self.structure_constants
        return bool(np.all(sc == sc.transpose(1, 0, 2)))


def end_algebra(m: Rep) -> EndAlgebra:
    return EndAlgebra(m)


def end_dim(m: Rep) -> int:
    return hom_basis(m, m).dim


# -- splittings ----------------------------------------------------------------

@dataclass
class Split:
    """m = first (+) second; basis[v] = [basis of first | basis of second]."""
    first: Rep
    second: Rep
    basis: dict


def _split_from_spaces(m: Rep, a: dict, b: dict) -> Split:
    F = m.field
    basis = {v: F.hstack([a[v], b[v]], m.dims[v]) for v in m.quiver.vertices}
    t = m.transform(basis)
    da = {v: a[v].shape[1] for v in m.quiver.vertices}
    first = Rep(m.quiver, F, da, {x.id: t.mats[x.id][:da[x.tgt], :da[x.src]] for x in m.quiver.arrows},
                check=False)
    db = {v: b[v].shape[1] for v in m.quiver.vertices}
    second = Rep(m.quiver, F, db, {x.id: t.mats[x.id][da[x.tgt]:, da[x.src]:] for x in m.quiver.arrows},
                 check=False)
    return Split(first, second, basis)


def _fitting_spaces(m: Rep, maps: dict):
    F = m.field
    n = max(m.total_dim, 1)
    ker, img = {}, {}
    for v in m.quiver.vertices:
        pw = F.power(maps[v], n) if m.dims[v] else maps[v]
        ker[v] = F.kernel(pw)
        img[v] = F.column_basis(pw)
    return ker, img


def fitting_split(m: Rep, e: Morphism):
    """Split m = ker(e^N) (+) im(e^N), or None if e is nilpotent or invertible."""
    if e.src.dims != m.dims or e.tgt.dims != m.dims or e.violation() is not None:
        raise DecompError("not an endomorphism")
    ker, img = _fitting_spaces(m, e.maps)
    kdim = sum(k.shape[1] for k in ker.values())
    if kdim == 0 or kdim == m.total_dim:
        return None
    return _split_from_spaces(m, ker, img)


def _charpoly_factors(m: Rep, e: Morphism):
    F = m.field
    polys = [F.charpoly(e.maps[v]) for v in m.quiver.vertices if m.dims[v]]
    prod = [F.one]
    for p in polys:
        out = [F.zero] * (len(prod) + len(p) - 1)
        for i, a in enumerate(prod):
            for j, b in enumerate(p):
                out[i + j] = F(out[i + j] + a * b)
        prod = out
    return F.factor(prod)


def primary_split(m: Rep, e: Morphism):
    """Split along the first irreducible factor of the characteristic polynomial of e.

    Succeeds exactly when that polynomial has two distinct irreducible factors.
    """
    facs = _charpoly_factors(m, e)
    if len(facs) < 2:
        return None
    F = m.field
    f = facs[0][0]
    g = {v: F.poly_eval(f, e.maps[v]) if m.dims[v] else e.maps[v] for v in m.quiver.vertices}
    ker, img = _fitting_spaces(m, g)
    return _split_from_spaces(m, ker, img)


def find_split(m: Rep, seed=None, end: EndAlgebra | None = None):
    """Search End(m) for an element with a nontrivial primary splitting."""
    end = end or EndAlgebra(m)
    if end.dim <= 1:
        return None
    for b in end.basis:
        s = primary_split(m, b)
        if s is not None:
            return s
    rng = _rng(seed)
    draws = max(3 * end.dim, 40)
    for _ in range(draws):
        s = primary_split(m, end.element(_coeffs(m.field, rng, end.dim)))
        if s is not None:
            return s
    if not m.field.p:
        return _isotypic_split(m, end, rng)
    return None


def _isotypic_split(m: Rep, end: EndAlgebra, rng, tries: int = 4):
    """Split m = X^k for an exceptional X, where End(m) = M_k(Q) resists random search.

    X is unique given its dimension vector, so a generic rep of dim(m)/k that
    turns out exceptional is X; an isomorphism X^k -> m then splits off a copy.
    """
    k = int(round(end.dim ** 0.5))
    if k < 2 or k * k != end.dim or any(d % k for d in m.dims.values()):
        return None
    dims = {v: d // k for v, d in m.dims.items()}
    for _ in range(tries):
        x = random_rep(m.quiver, m.field, dims, rng)
        if not is_exceptional(x):
            continue
        iso = find_isomorphism(direct_sum([x] * k), m, rng)
        if iso is None:
            return None
        a = {v: iso.maps[v][:, :dims[v]] for v in m.quiver.vertices}
        b = {v: iso.maps[v][:, dims[v]:] for v in m.quiver.vertices}
        return _split_from_spaces(m, a, b)
    return None


@dataclass
class LocalityCheck:
    local: bool | None      # None: inconclusive
    method: str


def exact_locality(m: Rep, end: EndAlgebra | None = None, enum_limit: int = 2**16) -> LocalityCheck:
    """Decide whether End(m) is local without randomness where possible."""
    end = end or EndAlgebra(m)
    F = m.field
    d = end.dim
    if d == 1:
        return LocalityCheck(True, "dim End = 1")
    lams, nonsplit = [], False
    for b in end.basis:
        facs = _charpoly_factors(m, b)
        if len(facs) >= 2:
            return LocalityCheck(False, "primary splitting of a basis element")
        f = facs[0][0]
        if len(f) == 2:
            lams.append(F.neg(f[0]))
        else:
            nonsplit = True
            lams.append(None)
    if not nonsplit:
        return LocalityCheck(_split_local(m, end, lams), "nilpotent complement of the identity")
    if F.p and F.p ** d <= enum_limit:
        for cs in product(range(F.p), repeat=d):
            e = end.element(cs)
            ker, _ = _fitting_spaces(m, e.maps)
            k = sum(x.shape[1] for x in ker.values())
            if 0 < k < m.total_dim:
                return LocalityCheck(False, "exhaustive enumeration")
        return LocalityCheck(True, "exhaustive enumeration")
    return LocalityCheck(None, "residue field may exceed the ground field")


def _split_local(m: Rep, end: EndAlgebra, lams) -> bool:
    """True iff span(b_i - lam_i 1) is a nilpotent ideal (then End/it = k)."""
    F = m.field
    ident = identity_morphism(m)
    ns = []
    for b, lam in zip(end.basis, lams):
        maps = {v: F.sub(b.maps[v], F.scale(lam, ident.maps[v])) for v in b.maps}
        ns.append(Morphism(m, m, maps, check=False))
    cc = Cochains(m, m)

    def span(ms):
        if not ms:
            return F.zeros(cc.c0_dim, 0)
        mat = F.hstack([cc.flatten0(x.maps).reshape(-1, 1) for x in ms], cc.c0_dim)
        return F.column_basis(mat)

    nmat = span(ns)
    nb = [Morphism(m, m, cc.unflatten0(nmat[:, j]), check=False) for j in range(nmat.shape[1])]
    power = nb
    for _ in range(m.total_dim + 1):
        prods = [x.compose(y) for x in nb for y in power]
        pm = span(prods)
        if pm.shape[1] == 0:
            return True
        if F.rank(F.hstack([nmat, pm], cc.c0_dim)) != nmat.shape[1]:
            return False
        if pm.shape[1] == len(power):
            return False
        power = [Morphism(m, m, cc.unflatten0(pm[:, j]), check=False) for j in range(pm.shape[1])]
    return False


def is_indecomposable(m: Rep, seed=None, paranoid: bool = False) -> bool:
    if m.total_dim == 0:
        raise DecompError("zero representation")
    end = EndAlgebra(m)
    if end.dim == 1:
        return True
    if paranoid:
        chk = exact_locality(m, end)
        if chk.local is not None:
            return chk.local
    return find_split(m, seed, end) is None


# -- decomposition -------------------------------------------------------------

@dataclass
class Decomposition:
    rep: Rep
    summands: list                     # [(Rep, multiplicity)]
    change_of_basis: dict              # vertex -> invertible matrix
    blocks: list = dfield(default_factory=list)   # summands in block order

    def block_rep(self) -> Rep:
        return self.rep.transform(self.change_of_basis)

    @property
    def count(self) -> int:
        return sum(k for _, k in self.summands)


def decompose(m: Rep, seed=None) -> Decomposition:
    rng = _rng(seed)
    F = m.field
    pieces = _split_all(m, rng) if m.total_dim else []
    # group isomorphic summands; conjugate copies onto the representative
    groups = []   # [rep_repr, [(rep, basis)]]
    for rep, basis in pieces:
        for g in groups:
            iso = find_isomorphism(rep, g[0], rng)
            if iso is not None:
                # rep basis composed with iso^{-1} realizes rep as g[0]
                inv = {v: F.inverse(iso.maps[v]) for v in iso.maps}
                g[1].append((g[0], {v: F.mul(basis[v], inv[v]) for v in basis}))
                break
        else:
            groups.append([rep, [(rep, basis)]])
    blocks, cols = [], {v: [] for v in m.quiver.vertices}
    for g in groups:
        for rep, basis in g[1]:
            blocks.append(rep)
            for v in cols:
                cols[v].append(basis[v])
    cob = {v: F.hstack(cols[v], m.dims[v]) if cols[v] else F.eye(0) for v in cols}
    return Decomposition(m, [(g[0], len(g[1])) for g in groups], cob, blocks)


def _split_all(m: Rep, rng):
    """List of (indecomposable, basis columns in m's coordinates)."""
    F = m.field
    s = find_split(m, rng)
    if s is None:
        return [(m, {v: F.eye(m.dims[v]) for v in m.quiver.vertices})]
    out = []
    da = s.first.dims
    for part, lo in ((s.first, True), (s.second, False)):
        for rep, basis in _split_all(part, rng):
            lifted = {}
            for v in m.quiver.vertices:
                cols = s.basis[v][:, :da[v]] if lo else s.basis[v][:, da[v]:]
                lifted[v] = F.mul(cols, basis[v])
            out.append((rep, lifted))
    return out


# -- isomorphism ---------------------------------------------------------------

def find_isomorphism(m: Rep, n: Rep, seed=None, draws: int = 20, exhaustive_limit: int = 10**5):
    """An invertible morphism m -> n, or None."""
    if m.quiver != n.quiver or m.field != n.field:
        raise DecompError("representations over different quivers or fields")
    if m.dims != n.dims:
        return None
    if m.total_dim == 0:
        return Morphism(m, n, {}, check=False)
    F = m.field
    hom = hom_basis(m, n)
    if hom.dim == 0:
        return None
    for f in hom.basis:
        if f.is_iso():
            return f
    rng = _rng(seed)
    if F.p and F.p < 5:
        draws *= 3
    for _ in range(draws):
        f = hom.combine(_coeffs(F, rng, hom.dim))
        if f.is_iso():
            return f
    if F.p and F.p ** hom.dim <= exhaustive_limit:
        for cs in product(range(F.p), repeat=hom.dim):
            f = hom.combine(cs)
            if f.is_iso():
                return f
        return None
    return _iso_via_decomposition(m, n, rng)


def _iso_via_decomposition(m: Rep, n: Rep, rng):
    F = m.field
    pm, pn = _split_all(m, rng), _split_all(n, rng)
    if len(pm) == 1 and len(pn) == 1:
        return None
    if len(pm) != len(pn):
        return None
    used = set()
    pairs = []
    for rep_a, basis_a in pm:
        for j, (rep_b, basis_b) in enumerate(pn):
            if j in used:
                continue
            iso = find_isomorphism(rep_a, rep_b, rng)
            if iso is not None:
                used.add(j)
                pairs.append((basis_a, iso, basis_b))
                break
        else:
            return None
    maps = {}
    for v in m.quiver.vertices:
        if m.dims[v] == 0:
            maps[v] = F.zeros(0, 0)
            continue
        ba = F.hstack([p[0][v] for p in pairs], m.dims[v])
        bb = F.hstack([p[2][v] for p in pairs], n.dims[v])
        mid = F.block_diag([p[1].maps[v] for p in pairs])
        maps[v] = F.mul_chain(bb, mid, F.inverse(ba))
    f = Morphism(m, n, maps, check=False)
    return f if f.violation() is None and f.is_iso() else None


def is_isomorphic(m: Rep, n: Rep, seed=None) -> bool:
    return find_isomorphism(m, n, seed) is not None
