"""Hom spaces, Ext^1 groups and extensions from cocycles.

For representations N, M the cochain map

    d: C0 = (+)_v Hom(N(v), M(v))  ->  C1 = (+)_arrows Hom(N(src), M(tgt)),
       d(f)_a = M(a) f_src - f_tgt N(a)

has kernel Hom(N, M) and cokernel Ext^1(N, M). Cochains are flattened
row-major, vertices (resp. arrows) in id order.
"""

from __future__ import annotations

import numpy as np

from .quiver import (Morphism, Rep, direct_sum, direct_sum_embeddings, dual_rep,
                     identity_morphism)


class HomExtError(ValueError):
    pass


def _check_pair(n: Rep, m: Rep):
    if n.quiver != m.quiver:
        raise HomExtError("representations live over different quivers")
    if n.field != m.field:
        raise HomExtError("representations live over different fields")


# -- cochain layout -----------------------------------------------------------

class Cochains:
    """Index bookkeeping for C0(N, M) and C1(N, M)."""

    def __init__(self, n: Rep, m: Rep):
        _check_pair(n, m)
        self.n, self.m = n, m
        q = n.quiver
        self.c0_off, off = {}, 0
        for v in q.vertices:
            self.c0_off[v] = off
            off += m.dims[v] * n.dims[v]
        self.c0_dim = off
        self.c1_off, off = {}, 0
        for a in q.arrows:
            self.c1_off[a.id] = off
            off += m.dims[a.tgt] * n.dims[a.src]
        self.c1_dim = off

    def flatten0(self, f: dict) -> np.ndarray:
        F = self.n.field
        parts = [f[v].reshape(-1) for v in self.n.quiver.vertices]
        return np.concatenate(parts) if parts else F.zeros(0, 0).reshape(0)

    def unflatten0(self, x) -> dict:
        out = {}
        for v in self.n.quiver.vertices:
            r, c = self.m.dims[v], self.n.dims[v]
            o = self.c0_off[v]
            out[v] = np.array(x[o:o + r * c]).reshape(r, c)
        return out

    def flatten1(self, delta: dict) -> np.ndarray:
        F = self.n.field
        parts = [delta[a.id].reshape(-1) for a in self.n.quiver.arrows]
        return np.concatenate(parts) if parts else F.zeros(0, 0).reshape(0)

    def unflatten1(self, x) -> dict:
        out = {}
        for a in self.n.quiver.arrows:
            r, c = self.m.dims[a.tgt], self.n.dims[a.src]
            o = self.c1_off[a.id]
            out[a.id] = np.array(x[o:o + r * c]).reshape(r, c)
        return out

    def differential(self) -> np.ndarray:
        """Matrix of d (rows C1, columns C0)."""
        F = self.n.field
        n, m = self.n, self.m
        d = F.zeros(self.c1_dim, self.c0_dim)
        for a in n.quiver.arrows:
            s, t = a.src, a.tgt
            r0 = self.c1_off[a.id]
            nr = m.dims[t] * n.dims[s]
            if nr == 0:
                continue
            # vec(M(a) f_s) = kron(M(a), I) vec(f_s) for row-major vec
            blk_s = F.kron(m.mats[a.id], F.eye(n.dims[s]))
            blk_t = F.negm(F.kron(F.eye(m.dims[t]), n.mats[a.id].T))
            cs = self.c0_off[s]
            ct = self.c0_off[t]
            d[r0:r0 + nr, cs:cs + blk_s.shape[1]] = F.add(d[r0:r0 + nr, cs:cs + blk_s.shape[1]], blk_s)
            d[r0:r0 + nr, ct:ct + blk_t.shape[1]] = F.add(d[r0:r0 + nr, ct:ct + blk_t.shape[1]], blk_t)
        return d

    def apply_d(self, f: dict) -> dict:
        F = self.n.field
        out = {}
        for a in self.n.quiver.arrows:
            out[a.id] = F.sub(F.mul(self.m.mats[a.id], f[a.src]), F.mul(f[a.tgt], self.n.mats[a.id]))
        return out


# -- Hom -----------------------------------------------------------------------

class HomSpace:
    """Hom(source, target) with a basis of morphisms."""

    def __init__(self, source: Rep, target: Rep, basis: list):
        self.source, self.target, self.basis = source, target, basis

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def combine(self, coeffs) -> Morphism:
        F = self.source.field
        maps = {v: F.zeros(self.target.dims[v], self.source.dims[v]) for v in self.source.quiver.vertices}
        for c, f in zip(coeffs, self.basis):
            c = F(c)
            if c == 0:
                continue
            for v in maps:
                maps[v] = F.add(maps[v], F.scale(c, f.maps[v]))
        return Morphism(self.source, self.target, maps, check=False)

    def matrix(self) -> np.ndarray:
        """Basis morphisms as columns of flattened C0 vectors."""
        F = self.source.field
        cc = Cochains(self.source, self.target)
        cols = [cc.flatten0(f.maps).reshape(-1, 1) for f in self.basis]
        return F.hstack(cols, cc.c0_dim)


def hom_basis(n: Rep, m: Rep, method: str = "auto") -> HomSpace:
    """Basis of Hom(n, m).

    ``method`` is "full" (kernel of the whole cochain differential),
    "reduced" (propagate along a topological order, acyclic quivers only)
    or "auto" (reduced when possible).
    """
    _check_pair(n, m)
    if method == "auto":
        method = "reduced" if n.quiver.is_acyclic() else "full"
    if method == "full":
        return _hom_full(n, m)
    if method == "reduced":
        return _hom_reduced(n, m)
    raise HomExtError(f"unknown method {method}")


def hom_dim(n: Rep, m: Rep) -> int:
    return hom_basis(n, m).dim


def _hom_full(n: Rep, m: Rep) -> HomSpace:
    F = n.field
    cc = Cochains(n, m)
    if cc.c0_dim == 0:
        return HomSpace(n, m, [])
    k = F.kernel(cc.differential())
    basis = [Morphism(n, m, cc.unflatten0(k[:, j]), check=False) for j in range(k.shape[1])]
    return HomSpace(n, m, basis)


def _reduced_unknowns(n: Rep, m: Rep) -> int:
    F = n.field
    q = n.quiver
    total = 0
    for v in q.vertices:
        if not m.dims[v] or not n.dims[v]:
            continue
        g = F.hstack([n.mats[a.id] for a in q.in_arrows(v)], n.dims[v])
        total += m.dims[v] * (n.dims[v] - F.rank(g))
    return total


def _hom_reduced(n: Rep, m: Rep) -> HomSpace:
    """Reduced solve on Hom(n, m) or on Hom(Dm, Dn), whichever has fewer unknowns."""
    dm, dn = dual_rep(m), dual_rep(n)
    if _reduced_unknowns(dm, dn) < _reduced_unknowns(n, m):
        dual = _hom_reduced_oriented(dm, dn)
        basis = [Morphism(n, m, {v: f.maps[v].T.copy() for v in f.maps}, check=False) for f in dual.basis]
        return HomSpace(n, m, basis)
    return _hom_reduced_oriented(n, m)


def _hom_reduced_oriented(n: Rep, m: Rep) -> HomSpace:
    """Hom via maps determined on images of incoming arrows.

    Walking sources first, f_v is fixed on the span of the images N(a) of the
    incoming arrows and free on a complement; the remaining constraints come
    from the kernel of the assembled incoming map. Each f_v is kept as a
    tensor of shape (M(v), N(v), #unknowns) that is linear in the unknowns.
    """
    F = n.field
    q = n.quiver
    order = q.topological_order()
    plans = {}
    total = 0
    for v in order:
        ins = q.in_arrows(v)
        g = F.hstack([n.mats[a.id] for a in ins], n.dims[v])
        if g.shape[1]:
            _, piv = F.rref(g)
        else:
            piv = []
        free = n.dims[v] - len(piv)
        plans[v] = (ins, g, piv, total)
        total += m.dims[v] * free
    U = total
    if U == 0:
        return HomSpace(n, m, [])
    lin = {}
    constraints = []
    for v in order:
        ins, g, piv, off = plans[v]
        mv, nv = m.dims[v], n.dims[v]
        blocks = []
        for a in ins:
            ls = lin[a.src]
            ms_, ns_ = ls.shape[0], ls.shape[1]
            prod = F.mul(m.mats[a.id], ls.reshape(ms_, ns_ * U)).reshape(mv, ns_, U)
            blocks.append(prod)
        if blocks:
            h = np.concatenate(blocks, axis=1)
        else:
            h = np.zeros((mv, 0, U), dtype=F.dtype)
        if g.shape[1] > len(piv) and mv:
            kg = F.kernel(g)
            ht = h.transpose(0, 2, 1).reshape(mv * U, g.shape[1])
            c = F.mul(ht, kg).reshape(mv, U, kg.shape[1]).transpose(0, 2, 1).reshape(-1, U)
            constraints.append(c)
        free = nv - len(piv)
        unk = np.zeros((mv, free, U), dtype=F.dtype) if F.p else _obj_zeros((mv, free, U))
        for i in range(mv):
            for j in range(free):
                unk[i, j, off + i * free + j] = F.one
        t = np.concatenate([h[:, piv, :], unk], axis=1)
        bt = F.hstack([g[:, piv], F.complement(g[:, piv], nv)], nv)
        bti = F.inverse(bt)
        tt = t.transpose(0, 2, 1).reshape(mv * U, nv)
        lin[v] = F.mul(tt, bti).reshape(mv, U, nv).transpose(0, 2, 1)
    if constraints:
        sol = F.kernel(F.vstack(constraints, U))
    else:
        sol = F.eye(U)
    basis = []
    vals = {v: F.mul(lin[v].reshape(-1, U), sol) for v in order}
    for j in range(sol.shape[1]):
        maps = {v: np.array(vals[v][:, j]).reshape(m.dims[v], n.dims[v]) for v in order}
        basis.append(Morphism(n, m, maps, check=False))
    return HomSpace(n, m, basis)


def _obj_zeros(shape):
    from gmpy2 import mpq
    a = np.empty(shape, dtype=object)
    a.fill(mpq(0))
    return a


# -- Ext -----------------------------------------------------------------------

class ExtSpace:
    """Ext^1(n, m) as C1 modulo the image of d, with unit-vector representatives."""

    def __init__(self, n: Rep, m: Rep):
        self.n, self.m = n, m
        F = n.field
        self.cochains = cc = Cochains(n, m)
        self.d = cc.differential()
        if cc.c0_dim and cc.c1_dim:
            self._rowspace, self._piv = F.rref(self.d.T)
            self._rowspace = self._rowspace[:len(self._piv)]
        else:
            self._rowspace, self._piv = F.zeros(0, cc.c1_dim), []
        pset = set(self._piv)
        self._free = [i for i in range(cc.c1_dim) if i not in pset]
        self.representatives = []
        for i in self._free:
            e = F.zeros(cc.c1_dim, 1).reshape(-1)
            e[i] = F.one
            self.representatives.append(cc.unflatten1(e))

    @property
    def dim(self) -> int:
        return len(self._free)

    @property
    def coboundary_dim(self) -> int:
        return len(self._piv)

    def coords(self, delta: dict) -> np.ndarray:
        """Coordinates of the class of delta in the representative basis."""
        F = self.n.field
        x = self.cochains.flatten1(delta)
        if self._piv:
            x = F.sub(x.reshape(1, -1), F.mul(x[self._piv].reshape(1, -1), self._rowspace)).reshape(-1)
        return x[self._free]

    def is_coboundary(self, delta: dict) -> bool:
        return self.n.field.is_zero(self.coords(delta))

    def coboundary_preimage(self, delta: dict):
        """Some f in C0 with d(f) = delta, or None."""
        F = self.n.field
        x = self.cochains.flatten1(delta)
        sol = F.solve(self.d, x.reshape(-1, 1))
        return None if sol is None else self.cochains.unflatten0(sol.reshape(-1))

    def decompose(self, delta: dict, basis: list):
        """Write delta = sum_i a_i basis_i + d(r). Returns (a, r) or None."""
        F = self.n.field
        cc = self.cochains
        cols = [cc.flatten1(b).reshape(-1, 1) for b in basis]
        a_mat = F.hstack(cols + [self.d], cc.c1_dim)
        sol = F.solve(a_mat, cc.flatten1(delta).reshape(-1, 1))
        if sol is None:
            return None
        sol = sol.reshape(-1)
        k = len(basis)
        return sol[:k], cc.unflatten0(sol[k:])


def ext_space(n: Rep, m: Rep) -> ExtSpace:
    _check_pair(n, m)
    return ExtSpace(n, m)


def ext_dim(n: Rep, m: Rep) -> int:
    """dim Ext^1 = dim C1 - rank d = dim C1 - dim C0 + dim Hom (rank-nullity)."""
    _check_pair(n, m)
    cc = Cochains(n, m)
    return cc.c1_dim - cc.c0_dim + hom_dim(n, m)


def extension_from_cocycle(delta: dict, n: Rep, m: Rep):
    """X_delta with X(a) = [[M(a), delta_a], [0, N(a)]].

    Returns (X, inclusion m -> X, projection X -> n).
    """
    _check_pair(n, m)
    F = n.field
    q = n.quiver
    mats = {}
    for a in q.arrows:
        d = delta[a.id]
        if d.shape != (m.dims[a.tgt], n.dims[a.src]):
            raise HomExtError(f"cocycle on {a.id} has shape {d.shape}")
        top = F.hstack([m.mats[a.id], d], m.dims[a.tgt])
        bot = F.hstack([F.zeros(n.dims[a.tgt], m.dims[a.src]), n.mats[a.id]], n.dims[a.tgt])
        mats[a.id] = F.vstack([top, bot], m.dims[a.src] + n.dims[a.src])
    dims = {v: m.dims[v] + n.dims[v] for v in q.vertices}
    x = Rep(q, F, dims, mats, check=False)
    inc = Morphism(m, x, {v: F.vstack([F.eye(m.dims[v]), F.zeros(n.dims[v], m.dims[v])], m.dims[v])
                          for v in q.vertices}, check=False)
    proj = Morphism(x, n, {v: F.hstack([F.zeros(n.dims[v], m.dims[v]), F.eye(n.dims[v])], n.dims[v])
                           for v in q.vertices}, check=False)
    return x, inc, proj


def is_exceptional(m: Rep) -> bool:
    return hom_dim(m, m) == 1 and ext_dim(m, m) == 0


def minimal_universal_extension_by(mex: Rep, y: Rep):
    """0 -> y -> E -> mex^r -> 0 with r = dim Ext^1(mex, y), mex exceptional.

    Returns (E, inclusion y -> E, projection E -> mex^r, r).
    """
    _check_pair(mex, y)
    if hom_dim(mex, mex) != 1 or ext_dim(mex, mex) != 0:
        raise HomExtError("not exceptional")
    F = mex.field
    ext = ext_space(mex, y)
    r = ext.dim
    if r == 0:
        return y, identity_morphism(y), Morphism(y, _zero_like(mex), {}, check=False), 0
    mr = direct_sum([mex] * r)
    delta = {}
    for a in mex.quiver.arrows:
        delta[a.id] = F.hstack([z[a.id] for z in ext.representatives], y.dims[a.tgt])
    e, inc, proj = extension_from_cocycle(delta, mr, y)
    # connecting map k^r = Hom(mex, mex^r) -> Ext^1(mex, y) must be bijective
    _, incs, _ = direct_sum_embeddings([mex] * r)
    cols = []
    for i in incs:
        pulled = {a: F.mul(delta[a], i.maps[mex.quiver.arrow[a].src]) for a in delta}
        cols.append(ext.coords(pulled).reshape(-1, 1))
    if F.rank(F.hstack(cols, r)) != r:
        raise HomExtError("connecting map is not an isomorphism")
    return e, inc, proj, r


def _zero_like(m: Rep) -> Rep:
    return Rep(m.quiver, m.field, {}, {})
