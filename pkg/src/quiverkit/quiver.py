"""Quivers, representations, morphisms and the standard constructions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .linalg import Field


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: str
    src: str
    tgt: str


class Quiver:
    """Finite quiver; vertices and arrows are kept sorted by id."""

    def __init__(self, vertices, arrows):
        vs = sorted(set(vertices))
        if len(vs) != len(list(vertices)):
            raise QuiverError("duplicate vertex ids")
        arr = []
        seen = set()
        for a in arrows:
            a = a if isinstance(a, Arrow) else Arrow(*a)
            if a.id in seen:
                raise QuiverError(f"duplicate arrow id {a.id}")
            if a.src not in vs or a.tgt not in vs:
                raise QuiverError(f"arrow {a.id} has an unknown endpoint")
            seen.add(a.id)
            arr.append(a)
        self.vertices = tuple(vs)
        self.arrows = tuple(sorted(arr, key=lambda a: a.id))

    @classmethod
    def kronecker(cls, n: int) -> "Quiver":
        """Two vertices, source ``x`` and sink ``y``, with n arrows x -> y."""
        return cls(["x", "y"], [(kronecker_arrow(n, i), "x", "y") for i in range(1, n + 1)])

    @cached_property
    def arrow(self):
        return {a.id: a for a in self.arrows}

    @cached_property
    def index(self):
        return {v: i for i, v in enumerate(self.vertices)}

    def in_arrows(self, v):
        return [a for a in self.arrows if a.tgt == v]

    def out_arrows(self, v):
        return [a for a in self.arrows if a.src == v]

    def is_sink(self, v):
        return not self.out_arrows(v)

    def is_source(self, v):
        return not self.in_arrows(v)

    @cached_property
    def _topo(self):
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.tgt] += 1
        ready = sorted(v for v in self.vertices if indeg[v] == 0)
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for a in self.out_arrows(v):
                indeg[a.tgt] -= 1
                if indeg[a.tgt] == 0:
                    ready.append(a.tgt)
                    ready.sort()
        return tuple(order) if len(order) == len(self.vertices) else None

    def is_acyclic(self) -> bool:
        return self._topo is not None

    def topological_order(self):
        """Vertices so that every arrow points forward."""
        if self._topo is None:
            raise QuiverError("quiver has an oriented cycle")
        return list(self._topo)

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [(a.id, a.tgt, a.src) for a in self.arrows])

    def reverse_at(self, v) -> "Quiver":
        """Reverse every arrow incident to v."""
        arr = []
        for a in self.arrows:
            if v in (a.src, a.tgt) and a.src != a.tgt:
                arr.append((a.id, a.tgt, a.src))
            else:
                arr.append((a.id, a.src, a.tgt))
        return Quiver(self.vertices, arr)

    def full_subquiver(self, vs) -> "Quiver":
        vs = set(vs)
        return Quiver(vs, [a for a in self.arrows if a.src in vs and a.tgt in vs])

    def relabel(self, vmap: dict) -> "Quiver":
        return Quiver([vmap.get(v, v) for v in self.vertices],
                      [(a.id, vmap.get(a.src, a.src), vmap.get(a.tgt, a.tgt)) for a in self.arrows])

    def is_connected(self, vs=None) -> bool:
        vs = set(self.vertices if vs is None else vs)
        if not vs:
            return True
        start = min(vs)
        seen, todo = {start}, [start]
        while todo:
            v = todo.pop()
            for a in self.arrows:
                for s, t in ((a.src, a.tgt), (a.tgt, a.src)):
                    if s == v and t in vs and t not in seen:
                        seen.add(t)
                        todo.append(t)
        return seen == vs

    def __eq__(self, other):
        return isinstance(other, Quiver) and self.vertices == other.vertices and self.arrows == other.arrows

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        arr = ", ".join(f"{a.id}:{a.src}->{a.tgt}" for a in self.arrows)
        return f"Quiver({list(self.vertices)}; {arr})"


def kronecker_arrow(n: int, i: int) -> str:
    width = len(str(n))
    return f"a{i:0{width}d}"


class Rep:
    """A representation: a vector space dimension per vertex and a matrix per arrow.

    The matrix of an arrow has rows indexed by the target space and columns
    by the source space.
    """

    def __init__(self, quiver: Quiver, field: Field, dims: dict, mats: dict, check=True):
        self.quiver = quiver
        self.field = field
        self.dims = {v: int(dims.get(v, 0)) for v in quiver.vertices}
        self.mats = {}
        for a in quiver.arrows:
            shape = (self.dims[a.tgt], self.dims[a.src])
            m = mats.get(a.id)
            if m is None:
                m = field.zeros(*shape)
            elif check:
                m = field.coerce(np.asarray(m, dtype=object) if not isinstance(m, np.ndarray) else m)
                if m.shape != shape:
                    if m.size == 0 and 0 in shape:
                        m = field.zeros(*shape)
                    else:
                        raise QuiverError(f"arrow {a.id}: matrix shape {m.shape}, expected {shape}")
            self.mats[a.id] = m
        if check:
            extra = set(mats) - set(self.mats)
            if extra:
                raise QuiverError(f"matrices for unknown arrows {sorted(extra)}")
            if any(d < 0 for d in self.dims.values()):
                raise QuiverError("negative dimension")

    # -- queries ----------------------------------------------------------
    @property
    def dimvec(self) -> tuple:
        return tuple(self.dims[v] for v in self.quiver.vertices)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def mat(self, a) -> np.ndarray:
        return self.mats[a]

    @property
    def support(self):
        return [v for v in self.quiver.vertices if self.dims[v]]

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def __eq__(self, other):
        return (isinstance(other, Rep) and self.quiver == other.quiver and self.field == other.field
                and self.dims == other.dims
                and all(self.field.equal(self.mats[a], other.mats[a]) for a in self.mats))

    def __repr__(self):
        return f"Rep(dims={self.dimvec}, field={self.field})"

    # -- transformations ----------------------------------------------------
    def transform(self, basis: dict) -> "Rep":
        """The rep in new bases: the columns of basis[v] are the new basis of vertex v."""
        F = self.field
        inv = {}
        for v in self.quiver.vertices:
            b = basis[v]
            i = F.inverse(b)
            if i is None:
                raise QuiverError(f"basis at {v} is singular")
            inv[v] = i
        mats = {a.id: F.mul_chain(inv[a.tgt], self.mats[a.id], basis[a.src]) for a in self.quiver.arrows}
        return Rep(self.quiver, F, self.dims, mats, check=False)

    def restrict(self, vs) -> "Rep":
        """Restriction to the full subquiver on vs."""
        q = self.quiver.full_subquiver(vs)
        return Rep(q, self.field, {v: self.dims[v] for v in q.vertices},
                   {a.id: self.mats[a.id] for a in q.arrows}, check=False)

    def restrict_to_support(self) -> "Rep":
        return self.restrict(self.support)

    def extend_to(self, quiver: Quiver) -> "Rep":
        """Extend by zero to a quiver containing this one as full subquiver."""
        mats = {a.id: self.mats[a.id] for a in quiver.arrows if a.id in self.mats}
        return Rep(quiver, self.field, self.dims, mats)

    def relabel(self, vmap: dict) -> "Rep":
        q = self.quiver.relabel(vmap)
        return Rep(q, self.field, {vmap.get(v, v): d for v, d in self.dims.items()}, self.mats, check=False)

    def with_quiver(self, quiver: Quiver) -> "Rep":
        return Rep(quiver, self.field, self.dims, self.mats)


class Morphism:
    """Per-vertex linear maps src(v) -> tgt(v) commuting with all arrows."""

    def __init__(self, src: Rep, tgt: Rep, maps: dict, check=True):
        self.src, self.tgt = src, tgt
        F = src.field
        self.maps = {}
        for v in src.quiver.vertices:
            shape = (tgt.dims[v], src.dims[v])
            m = maps.get(v)
            m = F.zeros(*shape) if m is None else m
            if m.shape != shape:
                raise QuiverError(f"vertex {v}: map shape {m.shape}, expected {shape}")
            self.maps[v] = m
        if check:
            bad = self.violation()
            if bad is not None:
                raise QuiverError(f"not a morphism: arrow {bad} does not commute")

    def violation(self):
        F = self.src.field
        for a in self.src.quiver.arrows:
            lhs = F.mul(self.tgt.mats[a.id], self.maps[a.src])
            rhs = F.mul(self.maps[a.tgt], self.src.mats[a.id])
            if not F.equal(lhs, rhs):
                return a.id
        return None

    def __getitem__(self, v):
        return self.maps[v]

    def compose(self, first: "Morphism") -> "Morphism":
        """self ∘ first."""
        F = self.src.field
        return Morphism(first.src, self.tgt, {v: F.mul(self.maps[v], first.maps[v]) for v in self.maps},
                        check=False)

    def is_zero(self) -> bool:
        return all(self.src.field.is_zero(m) for m in self.maps.values())

    def is_iso(self) -> bool:
        F = self.src.field
        return all(m.shape[0] == m.shape[1] and F.rank(m) == m.shape[0] for m in self.maps.values())

    def is_injective(self) -> bool:
        F = self.src.field
        return all(F.rank(m) == m.shape[1] for m in self.maps.values())

    def is_surjective(self) -> bool:
        F = self.src.field
        return all(F.rank(m) == m.shape[0] for m in self.maps.values())

    def rank_vector(self) -> dict:
        F = self.src.field
        return {v: F.rank(m) for v, m in self.maps.items()}

    def kernel(self):
        """(K, inclusion K -> src)."""
        F = self.src.field
        spaces = {v: F.kernel(self.maps[v]) for v in self.maps}
        sub, _, inc, _ = sub_quotient(self.src, spaces)
        return sub, inc

    def cokernel(self):
        """(C, projection tgt -> C)."""
        F = self.src.field
        spaces = {v: F.column_basis(self.maps[v]) for v in self.maps}
        _, quot, _, proj = sub_quotient(self.tgt, spaces)
        return quot, proj

    def image(self):
        F = self.src.field
        spaces = {v: F.column_basis(self.maps[v]) for v in self.maps}
        sub, _, inc, _ = sub_quotient(self.tgt, spaces)
        return sub, inc


def identity_morphism(m: Rep) -> Morphism:
    return Morphism(m, m, {v: m.field.eye(m.dims[v]) for v in m.quiver.vertices}, check=False)


# -- constructions ----------------------------------------------------------

def zero_rep(q: Quiver, F: Field) -> Rep:
    return Rep(q, F, {}, {})


def simple_rep(q: Quiver, F: Field, x: str) -> Rep:
    if x not in q.vertices:
        raise QuiverError(f"unknown vertex {x}")
    return Rep(q, F, {x: 1}, {})


def direct_sum(ms) -> Rep:
    ms = list(ms)
    if not ms:
        raise QuiverError("empty direct sum")
    q, F = ms[0].quiver, ms[0].field
    for m in ms[1:]:
        if m.quiver != q or m.field != F:
            raise QuiverError("direct sum of reps over different quivers or fields")
    dims = {v: sum(m.dims[v] for m in ms) for v in q.vertices}
    mats = {a.id: F.block_diag([m.mats[a.id] for m in ms]) for a in q.arrows}
    return Rep(q, F, dims, mats, check=False)


def direct_sum_embeddings(ms):
    """Canonical inclusions and projections of the summands of direct_sum(ms)."""
    s = direct_sum(ms)
    F = s.field
    incs, projs = [], []
    offs = {v: 0 for v in s.quiver.vertices}
    for m in ms:
        inc, proj = {}, {}
        for v in s.quiver.vertices:
            d, o = m.dims[v], offs[v]
            e = F.zeros(s.dims[v], d)
            for i in range(d):
                e[o + i, i] = F.one
            inc[v], proj[v] = e, e.T.copy()
            offs[v] += d
        incs.append(Morphism(m, s, inc, check=False))
        projs.append(Morphism(s, m, proj, check=False))
    return s, incs, projs


def dual_rep(m: Rep) -> Rep:
    """Transpose every matrix; lives over the opposite quiver (same ids)."""
    return Rep(m.quiver.opposite(), m.field, m.dims, {a: x.T.copy() for a, x in m.mats.items()}, check=False)


def dual_morphism(f: Morphism) -> Morphism:
    """D(f): D(tgt) -> D(src)."""
    return Morphism(dual_rep(f.tgt), dual_rep(f.src), {v: x.T.copy() for v, x in f.maps.items()}, check=False)


def sub_quotient(m: Rep, spaces: dict):
    """Subrep spanned by per-vertex column spaces and the matching quotient.

    Returns (sub, quot, inclusion, projection). The quotient acts on the
    span of the standard unit vectors chosen by pivoting.
    """
    F = m.field
    q = m.quiver
    sub_b, comp_b, full_inv = {}, {}, {}
    for v in q.vertices:
        d = m.dims[v]
        s = spaces.get(v)
        s = F.zeros(d, 0) if s is None else s
        if s.shape[0] != d:
            raise QuiverError(f"subspace at {v} has {s.shape[0]} rows, expected {d}")
        s = F.column_basis(s)
        c = F.complement(s, d)
        sub_b[v], comp_b[v] = s, c
        full_inv[v] = F.inverse(F.hstack([s, c], d))
    sub_mats, quot_mats = {}, {}
    for a in q.arrows:
        img = F.mul(m.mats[a.id], sub_b[a.src])
        coords = F.mul(full_inv[a.tgt], img)
        k = sub_b[a.tgt].shape[1]
        if not F.is_zero(coords[k:, :]):
            raise QuiverError(f"subspaces are not invariant under arrow {a.id}")
        sub_mats[a.id] = coords[:k, :]
        quot_mats[a.id] = F.mul(full_inv[a.tgt], F.mul(m.mats[a.id], comp_b[a.src]))[k:, :]
    sub = Rep(q, F, {v: sub_b[v].shape[1] for v in q.vertices}, sub_mats, check=False)
    quot = Rep(q, F, {v: comp_b[v].shape[1] for v in q.vertices}, quot_mats, check=False)
    inc = Morphism(sub, m, sub_b, check=False)
    proj = Morphism(m, quot, {v: full_inv[v][sub_b[v].shape[1]:, :] for v in q.vertices}, check=False)
    return sub, quot, inc, proj


def euler_form(q: Quiver, d, e) -> int:
    """<d, e> = sum_x d(x) e(x) - sum_arrows d(src) e(tgt)."""
    d, e = _as_dimdict(q, d), _as_dimdict(q, e)
    return (sum(d[v] * e[v] for v in q.vertices)
            - sum(d[a.src] * e[a.tgt] for a in q.arrows))


def quadratic_form(q: Quiver, d) -> int:
    return euler_form(q, d, d)


def _as_dimdict(q: Quiver, d) -> dict:
    if isinstance(d, dict):
        if set(d) - set(q.vertices):
            raise QuiverError("dimension vector indexed by unknown vertices")
        return {v: int(d.get(v, 0)) for v in q.vertices}
    d = tuple(d)
    if len(d) != len(q.vertices):
        raise QuiverError(f"dimension vector of length {len(d)} for {len(q.vertices)} vertices")
    return dict(zip(q.vertices, d))


def path_basis(q: Quiver, x: str) -> dict:
    """Paths starting at x, grouped by end vertex, as tuples of arrow ids."""
    order = q.topological_order()
    paths = {v: [] for v in q.vertices}
    paths[x] = [()]
    for v in order[order.index(x):]:
        for a in q.out_arrows(v):
            paths[a.tgt].extend(p + (a.id,) for p in paths[v])
    return paths


def projective_rep(q: Quiver, F: Field, x: str) -> Rep:
    """P_x: the span of paths out of x; an arrow appends itself to a path."""
    paths = path_basis(q, x)
    idx = {v: {p: i for i, p in enumerate(ps)} for v, ps in paths.items()}
    mats = {}
    for a in q.arrows:
        m = F.zeros(len(paths[a.tgt]), len(paths[a.src]))
        for j, p in enumerate(paths[a.src]):
            m[idx[a.tgt][p + (a.id,)], j] = F.one
        mats[a.id] = m
    return Rep(q, F, {v: len(ps) for v, ps in paths.items()}, mats, check=False)


def injective_rep(q: Quiver, F: Field, x: str) -> Rep:
    """I_x = D P_x over the opposite quiver."""
    return dual_rep(projective_rep(q.opposite(), F, x))


def algebra_rep(q: Quiver, F: Field) -> Rep:
    """The path algebra as a left module: the direct sum of all P_x."""
    return direct_sum([projective_rep(q, F, x) for x in q.vertices])


def random_rep(q: Quiver, F: Field, dims, rng) -> Rep:
    dims = _as_dimdict(q, dims)
    return Rep(q, F, dims, {a.id: F.random(dims[a.tgt], dims[a.src], rng) for a in q.arrows}, check=False)
