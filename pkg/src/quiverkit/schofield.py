"""Bongartz complements, universal homomorphisms and orthogonal exceptional pairs."""

from __future__ import annotations

from dataclasses import dataclass

from .decomp import decompose, find_isomorphism, is_isomorphic
from .homext import (ext_dim, extension_from_cocycle, hom_basis, hom_dim,
                     is_exceptional, minimal_universal_extension_by)
from .quiver import (Morphism, QuiverError, Rep, direct_sum, dual_morphism, dual_rep,
                     projective_rep, zero_rep)


class SchofieldError(QuiverError):
    pass


# -- universal maps ------------------------------------------------------------

def universal_hom(n: Rep, m: Rep) -> Morphism:
    """n^d -> m assembled from a basis of Hom(n, m); needs End(n) = k."""
    if hom_dim(n, n) != 1:
        raise SchofieldError("universal hom needs a source with one-dimensional endomorphisms")
    F = n.field
    hb = hom_basis(n, m)
    d = hb.dim
    src = direct_sum([n] * d) if d else zero_rep(n.quiver, F)
    maps = {v: F.hstack([f.maps[v] for f in hb.basis], m.dims[v]) if d else F.zeros(m.dims[v], 0)
            for v in n.quiver.vertices}
    return Morphism(src, m, maps, check=False)


def universal_cohom(m: Rep, x: Rep) -> Morphism:
    """m -> x^u assembled from a basis of Hom(m, x); needs End(x) = k."""
    return dual_morphism(universal_hom(dual_rep(x), dual_rep(m)))


def factor_through(phi: Morphism, f: Morphism):
    """g with phi ∘ g = f for f: n^r -> m and a universal phi: n^d -> m; None if none exists."""
    F = phi.src.field
    hb = hom_basis(f.src, phi.src)
    comps = [phi.compose(h) for h in hb.basis]
    cols, rhs = [], []
    for v in phi.src.quiver.vertices:
        size = f.maps[v].size
        if size:
            cols.append(F.hstack([c.maps[v].reshape(-1, 1) for c in comps], size))
            rhs.append(f.maps[v].reshape(-1, 1))
    if not cols:
        return hb.combine([F.zero] * hb.dim)
    sol = F.solve(F.vstack(cols, hb.dim), F.vstack(rhs, 1))
    return None if sol is None else hb.combine(list(sol.reshape(-1)))


# -- Bongartz complement ---------------------------------------------------------

@dataclass
class ComplementPart:
    vertex: str
    rep: Rep          # middle term of 0 -> P_vertex -> rep -> m^r -> 0
    r: int


@dataclass
class BongartzComplement:
    module: Rep
    parts: list       # ComplementPart per vertex, or projectives for a projective module
    projective: str | None

    @property
    def rep(self) -> Rep:
        reps = [p.rep for p in self.parts if p.rep.total_dim]
        return direct_sum(reps) if reps else zero_rep(self.module.quiver, self.module.field)

    def summand_classes(self, seed=None, parts=None) -> list:
        """Pairwise non-isomorphic indecomposable summands (of the given parts only, if any)."""
        classes = []
        for p in self.parts if parts is None else parts:
            pieces = [p.rep] if p.r == 0 else [s for s, _ in decompose(p.rep, seed).summands]
            for s in pieces:
                if not any(is_isomorphic(s, c, seed) for c in classes):
                    classes.append(s)
        return classes


def _projective_vertex(m: Rep):
    for x in m.quiver.vertices:
        p = projective_rep(m.quiver, m.field, x)
        if p.dims == m.dims and is_isomorphic(p, m):
            return x
    return None


def bongartz_complement(m: Rep) -> BongartzComplement:
    if not is_exceptional(m):
        raise SchofieldError("Bongartz complement needs an exceptional module")
    q, F = m.quiver, m.field
    s = _projective_vertex(m)
    parts = []
    if s is not None:
        for t in q.vertices:
            if t != s:
                parts.append(ComplementPart(t, projective_rep(q, F, t), 0))
        return BongartzComplement(m, parts, s)
    for x in q.vertices:
        e, _, _, r = minimal_universal_extension_by(m, projective_rep(q, F, x))
        parts.append(ComplementPart(x, e, r))
    return BongartzComplement(m, parts, None)


# -- pairs -------------------------------------------------------------------

@dataclass
class SchofieldPair:
    X: Rep
    Y: Rep
    u: int
    v: int
    inclusion: Morphism     # Y^v -> m
    projection: Morphism    # m -> X^u
    source: Rep             # the complement summand this pair came from

    @property
    def dims_add_up(self) -> bool:
        return all(self.v * self.Y.dims[w] + self.u * self.X.dims[w] == self.inclusion.tgt.dims[w]
                   for w in self.X.quiver.vertices)


def _descend(n: Rep, m: Rep, cap: int):
    """Walk down kernels of universal maps until one is injective; returns (Y, X)."""
    for _ in range(cap + 1):
        phi = universal_hom(n, m)
        if phi.src.total_dim and phi.is_injective():
            x, _ = phi.cokernel()
            return n, x
        if phi.src.total_dim == 0:
            raise SchofieldError("universal map from the complement summand is zero")
        k, _ = phi.kernel()
        n, m = k, n
    raise SchofieldError("kernel iteration exceeded the total dimension")


def _pair_from_summand(m: Rep, n: Rep) -> tuple:
    cap = m.total_dim + n.total_dim
    if n.total_dim < m.total_dim:
        return _descend(n, m, cap)
    if n.total_dim > m.total_dim:
        y1, x1 = _descend(dual_rep(m), dual_rep(n), cap)
        return dual_rep(x1), dual_rep(y1)
    raise SchofieldError("complement summand has the dimension of the module")


def _sequence(m: Rep, x: Rep, y: Rep) -> tuple:
    inc = universal_hom(y, m)
    proj = universal_cohom(m, x)
    return inc, proj


def pair_from_summand(m: Rep, n: Rep) -> SchofieldPair:
    y, x = _pair_from_summand(m, n)
    y, x = _reindex(y, m), _reindex(x, m)
    inc, proj = _sequence(m, x, y)
    return SchofieldPair(x, y, proj.tgt.total_dim // max(x.total_dim, 1),
                         inc.src.total_dim // max(y.total_dim, 1), inc, proj, n)


def _reindex(r: Rep, like: Rep) -> Rep:
    """Put r back over like's quiver (duals come back over the doubly opposite quiver)."""
    return r if r.quiver == like.quiver else Rep(like.quiver, r.field, r.dims, r.mats, check=False)


def _extend(r: Rep, quiver) -> Rep:
    return Rep(quiver, r.field, r.dims, {a.id: r.mats[a.id] for a in quiver.arrows if a.id in r.mats})


def _extend_morphism(f: Morphism, src: Rep, tgt: Rep) -> Morphism:
    F = src.field
    maps = {v: f.maps[v] if v in f.maps else F.zeros(tgt.dims[v], src.dims[v]) for v in src.quiver.vertices}
    return Morphism(src, tgt, maps, check=False)


def _lift_pair(p: SchofieldPair, m: Rep) -> SchofieldPair:
    q = m.quiver
    x, y = _extend(p.X, q), _extend(p.Y, q)
    yv = direct_sum([y] * p.v)
    xu = direct_sum([x] * p.u)
    return SchofieldPair(x, y, p.u, p.v, _extend_morphism(p.inclusion, yv, m),
                         _extend_morphism(p.projection, m, xu), _extend(p.source, q))


@dataclass
class SchofieldResult:
    module: Rep
    pairs: list
    support_size: int

    @property
    def expected_count(self) -> int:
        return self.support_size - 1

    @property
    def count_matches(self) -> bool:
        return len(self.pairs) == self.expected_count


def _complement_cost(m: Rep, cheap_only: bool = False) -> int:
    """Size of the universal extensions a complement of m would need."""
    q, F = m.quiver, m.field
    rs = [ext_dim(m, projective_rep(q, F, x)) for x in q.vertices]
    if cheap_only:
        return min(rs) * m.total_dim
    return sum(rs) * m.total_dim


def _pairs_sincere(ms: Rep, seed, cheap_only: bool) -> list:
    comp = bongartz_complement(ms)
    if cheap_only:
        cheap = [p.rep for p in comp.parts if p.r == 0 and p.rep.total_dim]
        if not cheap:
            smallest = min((p for p in comp.parts if p.rep.total_dim), key=lambda p: p.rep.total_dim)
            cheap = comp.summand_classes(seed, [smallest])
        candidates = cheap
    else:
        candidates = comp.summand_classes(seed)
    pairs = []
    for n in candidates:
        p = pair_from_summand(ms, n)
        if any(is_isomorphic(p.X, o.X, seed) and is_isomorphic(p.Y, o.Y, seed) for o in pairs):
            continue
        pairs.append(p)
    return pairs


def _dual_pair(p: SchofieldPair, m: Rep) -> SchofieldPair:
    """0 -> Y^v -> Dm -> X^u -> 0 dualizes to 0 -> (DX)^u -> m -> (DY)^v -> 0."""
    x, y = _reindex(dual_rep(p.Y), m), _reindex(dual_rep(p.X), m)
    inc, proj = dual_morphism(p.projection), dual_morphism(p.inclusion)
    inc = Morphism(direct_sum([y] * p.u), m, inc.maps, check=False)
    proj = Morphism(m, direct_sum([x] * p.v), proj.maps, check=False)
    return SchofieldPair(x, y, p.v, p.u, inc, proj, _reindex(dual_rep(p.source), m))


def schofield_pairs(m: Rep, seed=None, cheap_only: bool = False) -> SchofieldResult:
    """One pair per class of indecomposable complement summands of the support restriction.

    The complement is taken for m or for its dual, whichever needs smaller
    universal extensions; pairs of the dual are dualized back. With
    cheap_only, projective complement summands are used when there are any,
    and otherwise only the smallest complement part is decomposed.
    """
    if m.total_dim <= 1:
        raise SchofieldError("simple modules have no pair")
    if not is_exceptional(m):
        raise SchofieldError("module is not exceptional")
    supp = m.support
    ms = m.restrict(supp)
    dm = dual_rep(ms)
    if _complement_cost(dm, cheap_only) < _complement_cost(ms, cheap_only):
        pairs = [_dual_pair(p, ms) for p in _pairs_sincere(dm, seed, cheap_only)]
    else:
        pairs = _pairs_sincere(ms, seed, cheap_only)
    if ms.quiver != m.quiver:
        pairs = [_lift_pair(p, m) for p in pairs]
    return SchofieldResult(m, pairs, len(supp))


# -- checks -------------------------------------------------------------------

def sequence_cocycle(inc: Morphism, proj: Morphism):
    """Cocycle of 0 -> A -> M -> B -> 0 in the basis [inclusion | section].

    Returns (delta, basis) with M.transform(basis) equal to the extension of
    B by A given by delta.
    """
    m = inc.tgt
    F = m.field
    q = m.quiver
    sec, basis, binv = {}, {}, {}
    for v in q.vertices:
        p = proj.maps[v]
        if p.shape[0] == 0:
            sec[v] = F.zeros(m.dims[v], 0)
        else:
            s = F.solve(p, F.eye(p.shape[0]))
            if s is None:
                raise SchofieldError(f"projection is not surjective at {v}")
            sec[v] = s
        basis[v] = F.hstack([inc.maps[v], sec[v]], m.dims[v])
        binv[v] = F.inverse(basis[v])
        if binv[v] is None:
            raise SchofieldError(f"inclusion and section do not span at {v}")
    delta = {}
    a_rep, b_rep = inc.src, proj.tgt
    for a in q.arrows:
        lhs = F.sub(F.mul(m.mats[a.id], sec[a.src]), F.mul(sec[a.tgt], b_rep.mats[a.id]))
        coords = F.mul(binv[a.tgt], lhs)
        k = a_rep.dims[a.tgt]
        if not F.is_zero(coords[k:, :]):
            raise SchofieldError("sequence is not exact")
        delta[a.id] = coords[:k, :]
    return delta, basis


@dataclass
class PairCheck:
    hom_xy: int
    hom_yx: int
    ext_yx: int
    x_exceptional: bool
    y_exceptional: bool
    exact: bool
    reconstructs: bool

    @property
    def ok(self) -> bool:
        return (self.hom_xy == 0 and self.hom_yx == 0 and self.ext_yx == 0 and self.x_exceptional
                and self.y_exceptional and self.exact and self.reconstructs)


def check_sequence(inc: Morphism, proj: Morphism) -> bool:
    """0 -> A -> M -> B -> 0 exact: injective, surjective, composite zero, dims add."""
    m = inc.tgt
    if not (inc.is_injective() and proj.is_surjective()):
        return False
    if not proj.compose(inc).is_zero():
        return False
    return all(inc.src.dims[v] + proj.tgt.dims[v] == m.dims[v] for v in m.quiver.vertices)


def check_pair(m: Rep, p: SchofieldPair, seed=None) -> PairCheck:
    exact = p.u >= 1 and p.v >= 1 and check_sequence(p.inclusion, p.projection)
    rebuilt = False
    if exact:
        delta, _ = sequence_cocycle(p.inclusion, p.projection)
        e, _, _ = extension_from_cocycle(delta, p.projection.tgt, p.inclusion.src)
        rebuilt = find_isomorphism(e, m, seed) is not None
    return PairCheck(hom_dim(p.X, p.Y), hom_dim(p.Y, p.X), ext_dim(p.Y, p.X),
                     is_exceptional(p.X), is_exceptional(p.Y), exact, rebuilt)

