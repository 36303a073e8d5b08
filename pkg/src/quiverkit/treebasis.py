"""Coefficient quivers, tree-basis certificates, gluing along Ext bases, and the
recursive construction of tree bases for exceptional representations."""

from __future__ import annotations

from dataclasses import dataclass

from .covering import Lift, lift_preprojective, push_down
from .covering import _fibers as cover_fibers
from .decomp import find_isomorphism
from .homext import ExtSpace, is_exceptional
from .kronecker import exceptional_index
from .linalg import Field
from .quiver import Morphism, Quiver, QuiverError, Rep, dual_rep, kronecker_arrow, sub_quotient
from .schofield import schofield_pairs, sequence_cocycle


class TreeError(QuiverError):
    pass


# -- coefficient quivers -------------------------------------------------------

@dataclass
class CoefficientQuiver:
    vertices: list      # (vertex, index) basis elements
    edges: list         # (arrow, (src vertex, col), (tgt vertex, row))
    rep: Rep            # the rep in the chosen basis

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for _, s, t in self.edges:
            parent[find(s)] = find(t)
        roots = {find(v) for v in self.vertices}
        return len(roots) == 1


def coefficient_quiver(m: Rep, basis: dict | None = None) -> CoefficientQuiver:
    """Graph on the basis with an edge for every nonzero entry of the transformed matrices."""
    t = m if basis is None else m.transform(basis)
    verts = [(v, i) for v in m.quiver.vertices for i in range(m.dims[v])]
    edges = []
    for a in m.quiver.arrows:
        mat = t.mats[a.id]
        for i in range(mat.shape[0]):
            for j in range(mat.shape[1]):
                if mat[i, j] != 0:
                    edges.append((a.id, (a.src, j), (a.tgt, i)))
    return CoefficientQuiver(verts, edges, t)


def is_tree_certificate(c: CoefficientQuiver) -> bool:
    return c.n_edges == c.n_vertices - 1 and c.is_connected()


def _is_01(m: Rep) -> bool:
    F = m.field
    return all(all(x == 0 or x == F.one for x in mat.flat) for mat in m.mats.values())


@dataclass
class TreeCertificate:
    rep: Rep
    basis: dict
    quiver: CoefficientQuiver
    normalized: bool

    @property
    def transformed(self) -> Rep:
        return self.quiver.rep

    @property
    def is_tree(self) -> bool:
        return is_tree_certificate(self.quiver)


def make_certificate(m: Rep, basis: dict) -> TreeCertificate:
    cq = coefficient_quiver(m, basis)
    return TreeCertificate(m, basis, cq, _is_01(cq.rep))


def identity_certificate(m: Rep) -> TreeCertificate:
    return make_certificate(m, {v: m.field.eye(m.dims[v]) for v in m.quiver.vertices})


def _smul(F: Field, a, b):
    return a * b if F.p == 0 else (a * b) % F.p


def normalize_to_01(cert: TreeCertificate) -> TreeCertificate:
    """Rescale basis vectors along the tree so every nonzero entry becomes 1."""
    if not cert.is_tree:
        raise TreeError("normalization needs a tree certificate")
    cq = cert.quiver
    F = cert.rep.field
    if not cq.vertices:
        return cert
    adj = {v: [] for v in cq.vertices}
    for a, s, t in cq.edges:
        lam = cq.rep.mats[a][t[1], s[1]]
        adj[s].append((t, lam, True))
        adj[t].append((s, lam, False))
    # new vector = c * old; entry (t, s) becomes c_s / c_t * lam
    scale = {cq.vertices[0]: F.one}
    todo = [cq.vertices[0]]
    while todo:
        v = todo.pop()
        for w, lam, w_is_target in adj[v]:
            if w in scale:
                continue
            scale[w] = _smul(F, scale[v], lam if w_is_target else F.inv(lam))
            todo.append(w)
    basis = {}
    for v in cert.rep.quiver.vertices:
        d = cert.rep.dims[v]
        diag = F.zeros(d, d)
        for i in range(d):
            diag[i, i] = scale[(v, i)]
        basis[v] = F.mul(cert.basis[v], diag)
    out = make_certificate(cert.rep, basis)
    if not out.normalized:
        raise TreeError("normalization left entries outside {0, 1}")
    return out


def dual_certificate(cert: TreeCertificate, m: Rep) -> TreeCertificate:
    """Certificate for m from one for a rep equal to D(m) up to quiver ids: use the inverse transposes."""
    F = m.field
    return make_certificate(m, {v: F.inverse(b).T.copy() for v, b in cert.basis.items()})


# -- elementary cocycles and gluing -------------------------------------------

@dataclass
class ExtCocycle:
    arrow: str
    row: int
    col: int
    certified: dict     # cocycle with a single 1 in the certified bases
    cocycle: dict       # the same cocycle in the original coordinates


def _ext_coordinate_matrix(ext: ExtSpace):
    """Matrix sending a flattened cocycle to its coordinates in Ext."""
    F = ext.n.field
    c1 = ext.cochains.c1_dim
    cmat = F.zeros(ext.dim, c1)
    for k, j in enumerate(ext._free):
        cmat[k, j] = F.one
    for t, j in enumerate(ext._piv):
        cmat[:, j] = F.negm(ext._rowspace[t, ext._free].reshape(-1, 1)).reshape(-1)
    return cmat


def choose_elementary_cocycles(sub: Rep, quot: Rep, sub_cert: TreeCertificate, quot_cert: TreeCertificate,
                               ext: ExtSpace | None = None):
    """Ext^1(quot, sub) basis of cocycles with one entry 1 on one arrow in the certified bases.

    Candidates run over arrows in id order and entries row-major; the first
    independent ones are kept. Returns (cocycles, ext space).
    """
    F = sub.field
    ext = ext or ExtSpace(quot, sub)
    if ext.dim == 0:
        return [], ext
    cc = ext.cochains
    cmat = _ext_coordinate_matrix(ext)
    q = sub.quiver
    blocks = []
    for a in q.arrows:
        r, c = sub.dims[a.tgt], quot.dims[a.src]
        if r * c == 0:
            continue
        bt = sub_cert.basis[a.tgt]
        bs_inv_t = F.inverse(quot_cert.basis[a.src]).T
        o = cc.c1_off[a.id]
        blocks.append(F.mul(cmat[:, o:o + r * c], F.kron(bt, bs_inv_t)))
    cand = F.hstack(blocks, ext.dim)
    _, piv = F.rref(cand)
    if len(piv) != ext.dim:
        raise TreeError("elementary-basis search failed")
    # map candidate column back to (arrow, row, col)
    index = []
    for a in q.arrows:
        r, c = sub.dims[a.tgt], quot.dims[a.src]
        index.extend((a.id, i, j) for i in range(r) for j in range(c))
    out = []
    for p in piv:
        aid, i, j = index[p]
        cert = {a.id: F.zeros(sub.dims[a.tgt], quot.dims[a.src]) for a in q.arrows}
        cert[aid][i, j] = F.one
        a = q.arrow[aid]
        orig = {k: v.copy() for k, v in cert.items()}
        orig[aid] = F.mul_chain(sub_cert.basis[a.tgt], cert[aid], F.inverse(quot_cert.basis[a.src]))
        out.append(ExtCocycle(aid, i, j, cert, orig))
    return out, ext


def glue(t: Rep, sub: Rep, quot: Rep, zetas) -> Rep:
    """Representation with spaces k^{t(y)} ⊗ sub ⊕ k^{t(x)} ⊗ quot and off-diagonal sum_i t(a_i) ⊗ zeta_i.

    t lives over Q_n with n = len(zetas); the sink y carries the sub side.
    zetas are cocycle dicts (or ExtCocycle, whose original cocycle is used).
    """
    F = sub.field
    n = len(zetas)
    if t.quiver != Quiver.kronecker(n):
        raise TreeError(f"gluing needs a rep of the Kronecker quiver with {n} arrows")
    if sub.quiver != quot.quiver:
        raise TreeError("sub and quotient live over different quivers")
    zetas = [z.cocycle if isinstance(z, ExtCocycle) else z for z in zetas]
    ty, tx = t.dims["y"], t.dims["x"]
    q = sub.quiver
    dims = {v: ty * sub.dims[v] + tx * quot.dims[v] for v in q.vertices}
    mats = {}
    for a in q.arrows:
        top_l = F.kron(F.eye(ty), sub.mats[a.id])
        bot_r = F.kron(F.eye(tx), quot.mats[a.id])
        off = F.zeros(ty * sub.dims[a.tgt], tx * quot.dims[a.src])
        for i, z in enumerate(zetas):
            if z[a.id].shape != (sub.dims[a.tgt], quot.dims[a.src]):
                raise TreeError(f"cocycle {i} has the wrong shape on {a.id}")
            off = F.add(off, F.kron(t.mats[kronecker_arrow(n, i + 1)], z[a.id]))
        top = F.hstack([top_l, off], ty * sub.dims[a.tgt])
        bot = F.hstack([F.zeros(tx * quot.dims[a.tgt], ty * sub.dims[a.src]), bot_r], tx * quot.dims[a.tgt])
        mats[a.id] = F.vstack([top, bot], dims[a.src])
    return Rep(q, F, dims, mats, check=False)


def _glue_basis(tcert: TreeCertificate, sub_cert: TreeCertificate, quot_cert: TreeCertificate) -> dict:
    F = sub_cert.rep.field
    cy, cx = tcert.basis["y"], tcert.basis["x"]
    return {v: F.block_diag([F.kron(cy, sub_cert.basis[v]), F.kron(cx, quot_cert.basis[v])])
            for v in sub_cert.rep.quiver.vertices}


def glue_tree_basis(tcert: TreeCertificate, sub_cert: TreeCertificate, quot_cert: TreeCertificate,
                    zetas) -> TreeCertificate:
    """Certificate for glue(tcert.rep, sub, quot, zetas) from certificates of the three inputs."""
    for z in zetas:
        if not isinstance(z, ExtCocycle):
            raise TreeError("gluing a tree basis needs elementary cocycles")
    g = glue(tcert.rep, sub_cert.rep, quot_cert.rep, zetas)
    cert = make_certificate(g, _glue_basis(tcert, sub_cert, quot_cert))
    if not cert.is_tree:
        raise TreeError("glued coefficient quiver is not a tree")
    return cert


# -- the recursive construction -----------------------------------------------------

@dataclass
class _Context:
    seed: object
    log: list


def _restricted(m: Rep):
    supp = m.support
    return m.restrict(supp) if len(supp) != len(m.quiver.vertices) else m


def _extend_basis(cert: TreeCertificate, m: Rep) -> TreeCertificate:
    if cert.rep.quiver == m.quiver:
        return cert
    F = m.field
    basis = {v: cert.basis[v] if v in cert.basis else F.eye(m.dims[v]) for v in m.quiver.vertices}
    return make_certificate(m, basis)


def _block_cocycle(delta: dict, q, sub: Rep, quot: Rep, k: int, l: int) -> dict:
    out = {}
    for a in q.arrows:
        r, c = sub.dims[a.tgt], quot.dims[a.src]
        out[a.id] = delta[a.id][k * r:(k + 1) * r, l * c:(l + 1) * c]
    return out


def certificate_from_sequence(m: Rep, inc: Morphism, proj: Morphism, sub: Rep, quot: Rep, v: int, u: int,
                              sub_cert: TreeCertificate, quot_cert: TreeCertificate, recurse) -> TreeCertificate:
    """Tree basis of m from 0 -> sub^v -> m -> quot^u -> 0 and certificates of sub and quot.

    The middle term is rewritten as a glued rep: the block cocycles are
    expressed in an elementary Ext basis, the coefficients form a Kronecker
    rep t of dimension (u, v), and coboundary parts are absorbed by a
    unipotent change of basis.
    """
    F = m.field
    q = m.quiver
    delta, ext_basis = sequence_cocycle(inc, proj)
    zetas, ext = choose_elementary_cocycles(sub, quot, sub_cert, quot_cert)
    n = len(zetas)
    if n == 0:
        raise TreeError("the sequence splits; the middle term is decomposable")
    cc = ext.cochains
    cmat = _ext_coordinate_matrix(ext)
    zcoords = F.hstack([F.mul(cmat, cc.flatten1(z.cocycle).reshape(-1, 1)) for z in zetas], ext.dim)
    zinv = F.inverse(zcoords)
    coeffs = {}
    residuals, keys = [], []
    for k in range(v):
        for l in range(u):
            blk = _block_cocycle(delta, q, sub, quot, k, l)
            flat = cc.flatten1(blk).reshape(-1, 1)
            a = F.mul(zinv, F.mul(cmat, flat)).reshape(-1)
            coeffs[(k, l)] = a
            res = flat
            for i, z in enumerate(zetas):
                if a[i] != 0:
                    res = F.sub(res, F.scale(a[i], cc.flatten1(z.cocycle).reshape(-1, 1)))
            residuals.append(res)
            keys.append((k, l))
    if cc.c0_dim:
        sol = F.solve(ext.d, F.hstack(residuals, cc.c1_dim))
        if sol is None:
            raise TreeError("block cocycles are not in the span of the chosen basis")
    elif any(not F.is_zero(r) for r in residuals):
        raise TreeError("block cocycles are not in the span of the chosen basis")
    # unipotent correction [[I, R], [0, I]] with R = -c blockwise
    g = {}
    for w in q.vertices:
        sw, qw = sub.dims[w], quot.dims[w]
        rmat = F.zeros(v * sw, u * qw)
        if cc.c0_dim and sw * qw:
            for idx, (k, l) in enumerate(keys):
                c = cc.unflatten0(sol[:, idx])[w]
                rmat[k * sw:(k + 1) * sw, l * qw:(l + 1) * qw] = F.negm(c)
        top = F.hstack([F.eye(v * sw), rmat], v * sw)
        bot = F.hstack([F.zeros(u * qw, v * sw), F.eye(u * qw)], u * qw)
        g[w] = F.vstack([top, bot], v * sw + u * qw)
    kq = Quiver.kronecker(n)
    tmats = {}
    for i in range(n):
        a_i = F.zeros(v, u)
        for (k, l), a in coeffs.items():
            a_i[k, l] = a[i]
        tmats[kronecker_arrow(n, i + 1)] = a_i
    t = Rep(kq, F, {"x": u, "y": v}, tmats, check=False)
    tcert = recurse(t)
    gbasis = _glue_basis(tcert, sub_cert, quot_cert)
    basis = {w: F.mul_chain(ext_basis[w], g[w], gbasis[w]) for w in q.vertices}
    cert = make_certificate(m, basis)
    if not cert.is_tree:
        raise TreeError("assembled coefficient quiver is not a tree")
    return cert


def _peelable_leaf(m: Rep):
    """A vertex of dim 1 whose only arrow inside the support joins another dim-1 vertex, nonzero."""
    q = m.quiver
    F = m.field
    for z in q.vertices:
        if m.dims[z] != 1:
            continue
        arrs = [a for a in q.arrows if z in (a.src, a.tgt) and m.dims[a.tgt if a.src == z else a.src]]
        if len(arrs) != 1:
            continue
        a = arrs[0]
        other = a.tgt if a.src == z else a.src
        if a.src == a.tgt or m.dims[other] != 1 or F.is_zero(m.mats[a.id]):
            continue
        return z, a.tgt == z
    return None


def _peel(m: Rep, z: str, is_sink: bool, ctx, recurse) -> TreeCertificate:
    F = m.field
    spaces = {v: F.zeros(m.dims[v], 0) for v in m.quiver.vertices}
    if is_sink:
        spaces[z] = F.eye(1)
    else:
        spaces = {v: F.eye(m.dims[v]) for v in m.quiver.vertices}
        spaces[z] = F.zeros(1, 0)
    sub, quot, inc, proj = sub_quotient(m, spaces)
    small = quot if is_sink else sub
    ctx.log.append(("leaf", z, m.total_dim))
    rest = recurse(small)
    one = identity_certificate(sub if is_sink else quot)
    if is_sink:
        return certificate_from_sequence(m, inc, proj, sub, quot, 1, 1, one, rest, recurse)
    return certificate_from_sequence(m, inc, proj, sub, quot, 1, 1, rest, one, recurse)


def _as_kronecker(m: Rep):
    """m on a two-vertex support as a Q_n rep; returns (rep, source vertex, sink vertex)."""
    q = m.quiver
    a0 = q.arrows[0]
    src, snk = a0.src, a0.tgt
    if any(a.src != src or a.tgt != snk for a in q.arrows):
        raise TreeError("two-vertex support with arrows in both directions")
    n = len(q.arrows)
    mats = {kronecker_arrow(n, i + 1): m.mats[a.id] for i, a in enumerate(q.arrows)}
    return Rep(Quiver.kronecker(n), m.field, {"x": m.dims[src], "y": m.dims[snk]}, mats, check=False), src, snk


def _swap_dual(k: Rep) -> Rep:
    """D(k) with source and sink renamed, again a rep of Q_n."""
    d = dual_rep(k)
    return Rep(k.quiver, k.field, {"x": k.dims["y"], "y": k.dims["x"]}, d.mats, check=False)


def _push_basis(lift: Lift, cert: TreeCertificate) -> dict:
    F = lift.rep.field
    xs, ys = cover_fibers(lift.cover, lift.rep)
    out = {}
    for k, vs in (("x", xs), ("y", ys)):
        blocks = [cert.basis[v] for v in vs if lift.rep.dims[v]]
        out[k] = F.block_diag(blocks) if blocks else F.zeros(0, 0)
    return out


def _kronecker_certificate(k: Rep, ctx, recurse) -> TreeCertificate:
    n = len(k.quiver.arrows)
    idx = exceptional_index(n, k.dims)
    if idx is None:
        raise TreeError(f"dimension vector {k.dims} is not exceptional over Q_{n}")
    kind, i = idx
    if kind == "I":
        d = _swap_dual(k)
        dc = _kronecker_certificate(d, ctx, recurse)
        swapped = {"x": dc.basis["y"], "y": dc.basis["x"]}
        return make_certificate(k, {v: k.field.inverse(b).T.copy() for v, b in swapped.items()})
    ctx.log.append(("lift", n, i))
    lift = lift_preprojective(n, i, k.field)
    lc = recurse(lift.rep)
    pushed = push_down(lift.cover, lift.rep)
    pbasis = _push_basis(lift, lc)
    f = find_isomorphism(k, pushed, ctx.seed)
    if f is None:
        raise TreeError("push-down of the lifted module is not isomorphic to the input")
    F = k.field
    basis = {v: F.mul(F.inverse(f.maps[v]), pbasis[v]) for v in ("x", "y")}
    cert = make_certificate(k, basis)
    if not cert.is_tree:
        raise TreeError("pushed-down coefficient quiver is not a tree")
    return cert


def _pair_key(p):
    return (p.X.total_dim + p.Y.total_dim, p.X.dimvec, p.Y.dimvec)


def _tree_basis(m: Rep, ctx) -> TreeCertificate:
    ms = _restricted(m)

    def recurse(r):
        return _tree_basis(r, ctx)

    if ms.total_dim == 0:
        return make_certificate(m, {v: m.field.eye(0) for v in m.quiver.vertices})
    if ms.total_dim == 1:
        return _extend_basis(identity_certificate(ms), m)
    if not ms.quiver.is_acyclic():
        raise TreeError("support has an oriented cycle")
    ident = identity_certificate(ms)
    if ident.is_tree:
        return _extend_basis(ident, m)
    leaf = _peelable_leaf(ms)
    if leaf is not None:
        cert = _peel(ms, leaf[0], leaf[1], ctx, recurse)
    elif len(ms.quiver.vertices) == 2:
        k, src, snk = _as_kronecker(ms)
        kc = _kronecker_certificate(k, ctx, recurse)
        cert = make_certificate(ms, {src: kc.basis["x"], snk: kc.basis["y"]})
    else:
        res = schofield_pairs(ms, ctx.seed, cheap_only=True)
        if not res.pairs:
            raise TreeError("no orthogonal pair found")
        p = min(res.pairs, key=_pair_key)
        ctx.log.append(("pair", ms.dimvec, p.X.dimvec, p.Y.dimvec, p.u, p.v))
        xc = recurse(p.X)
        yc = recurse(p.Y)
        cert = certificate_from_sequence(ms, p.inclusion, p.projection, p.Y, p.X, p.v, p.u,
                                         yc, xc, recurse)
    if not cert.is_tree:
        raise TreeError("constructed coefficient quiver is not a tree")
    return _extend_basis(cert, m)


def exceptional_tree_basis(m: Rep, seed=None, log: list | None = None) -> TreeCertificate:
    """A basis of the exceptional rep m whose coefficient quiver is a tree, with 0/1 entries."""
    if not m.restrict_to_support().quiver.is_acyclic():
        raise TreeError("support has an oriented cycle")
    if not is_exceptional(m):
        raise TreeError("representation is not exceptional")
    ctx = _Context(seed, [] if log is None else log)
    cert = _tree_basis(m, ctx)
    return normalize_to_01(cert)


@dataclass
class CertificateCheck:
    tree: bool
    edges: int
    vertices: int
    normalizable: bool
    isomorphic: bool

    @property
    def ok(self) -> bool:
        return self.tree and self.normalizable and self.isomorphic and self.edges == self.vertices - 1


def validate_certificate(cert: TreeCertificate, original: Rep, seed=None) -> CertificateCheck:
    """Re-derive the coefficient quiver, renormalize, and compare the 0/1 rep with the input."""
    cq = coefficient_quiver(cert.rep, cert.basis)
    tree = is_tree_certificate(cq)
    normalizable, iso = False, False
    if tree:
        try:
            n = normalize_to_01(make_certificate(cert.rep, cert.basis))
            normalizable = n.normalized
            rebuilt = n.transformed
            iso = rebuilt.quiver == original.quiver and find_isomorphism(rebuilt, original, seed) is not None
        except TreeError:
            normalizable = False
    return CertificateCheck(tree, cq.n_edges, cq.n_vertices, normalizable, iso)


def field_of(cert: TreeCertificate) -> Field:
    return cert.rep.field
