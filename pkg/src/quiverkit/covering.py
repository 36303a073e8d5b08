"""Truncated universal cover of Q_n, push-down, lifted preprojectives and sink stripping."""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

from .decomp import is_indecomposable
from .homext import ext_dim, hom_dim, is_exceptional
from .linalg import Field
from .quiver import Morphism, Quiver, QuiverError, Rep, kronecker_arrow, simple_rep, sub_quotient
from .reflect import reflect_source

CENTER = "v"


class CoverError(QuiverError):
    pass


@dataclass
class TruncatedCover:
    n: int
    depth: int
    quiver: Quiver
    layer: dict           # vertex -> distance from the center
    label: dict           # arrow id -> index 1..n
    parent: dict = dfield(default_factory=dict)

    def layer_vertices(self, j: int):
        return [v for v in self.quiver.vertices if self.layer[v] == j]

    def fiber(self, v: str) -> str:
        """Kronecker vertex under v for the standard orientation (even layers are sinks)."""
        return "y" if self.layer[v] % 2 == 0 else "x"

    def neighbors(self, v: str):
        out = []
        for a in self.quiver.arrows:
            if a.src == v:
                out.append(a.tgt)
            elif a.tgt == v:
                out.append(a.src)
        return out


def _arrow_id(child: str) -> str:
    return "e" + child[len(CENTER):]


def build_cover(n: int, depth: int) -> TruncatedCover:
    """Ball of radius depth around a sink in the n-regular bipartite tree."""
    if n < 1:
        raise CoverError("n must be at least 1")
    if depth < 0:
        raise CoverError("depth must be non-negative")
    layer = {CENTER: 0}
    parent = {}
    arrows, label = [], {}
    frontier = [(CENTER, None)]
    for j in range(1, depth + 1):
        nxt = []
        for v, via in frontier:
            for i in range(1, n + 1):
                if i == via:
                    continue
                c = f"{v}.{i}"
                layer[c] = j
                parent[c] = v
                aid = _arrow_id(c)
                label[aid] = i
                # odd layers are sources
                arrows.append((aid, c, v) if j % 2 else (aid, v, c))
                nxt.append((c, i))
        frontier = nxt
    q = Quiver(list(layer), arrows)
    return TruncatedCover(n, depth, q, layer, label, parent)


def _check_margin(cover: TruncatedCover, m: Rep):
    bad = [v for v in m.support if cover.layer[v] >= cover.depth]
    if bad and cover.depth > 0:
        raise CoverError(f"support reaches the truncation boundary at {bad[0]}; increase depth")


def _fibers(cover: TruncatedCover, m: Rep):
    """Cover vertices over x and over y for the orientation of m's quiver."""
    q = m.quiver
    over = {}
    for a in q.arrows:
        over[a.src], over[a.tgt] = "x", "y"
    for v in q.vertices:
        over.setdefault(v, cover.fiber(v))
    xs = [v for v in q.vertices if over[v] == "x"]
    ys = [v for v in q.vertices if over[v] == "y"]
    return xs, ys


def _offsets(vs, dims):
    off, out = 0, {}
    for v in vs:
        out[v] = off
        off += dims[v]
    return out, off


def push_down(cover: TruncatedCover, m: Rep) -> Rep:
    """Sum a cover rep along the fibers; an arrow of label i contributes to a_i.

    The fibers follow the orientation of m's quiver, so a rep over the
    reoriented cover lands on Q_n with source and sink exchanged.
    """
    _check_margin(cover, m)
    F = m.field
    xs, ys = _fibers(cover, m)
    ox, dx = _offsets(xs, m.dims)
    oy, dy = _offsets(ys, m.dims)
    mats = {kronecker_arrow(cover.n, i): F.zeros(dy, dx) for i in range(1, cover.n + 1)}
    for a in m.quiver.arrows:
        s, t = m.dims[a.src], m.dims[a.tgt]
        if s and t:
            mats[kronecker_arrow(cover.n, cover.label[a.id])][oy[a.tgt]:oy[a.tgt] + t,
                                                              ox[a.src]:ox[a.src] + s] = m.mats[a.id]
    return Rep(Quiver.kronecker(cover.n), F, {"x": dx, "y": dy}, mats, check=False)


def push_down_morphism(cover: TruncatedCover, f: Morphism) -> Morphism:
    F = f.src.field
    xs, ys = _fibers(cover, f.src)
    out = {}
    for k, vs in (("x", xs), ("y", ys)):
        blocks = [f.maps[v] for v in vs]
        out[k] = F.block_diag(blocks) if blocks else F.zeros(0, 0)
    return Morphism(push_down(cover, f.src), push_down(cover, f.tgt), out, check=False)


@dataclass
class Lift:
    cover: TruncatedCover
    rep: Rep
    index: int


def lift_preprojective(n: int, i: int, field: Field | None = None, depth: int | None = None) -> Lift:
    """Start from the simple at the center and reflect at every source, i times."""
    F = field or Field(0)
    if i < 0:
        raise ValueError("i must be non-negative")
    depth = i + 1 if depth is None else depth
    if depth < i + 1:
        raise CoverError("depth must be at least i + 1")
    cover = build_cover(n, depth)
    m = simple_rep(cover.quiver, F, CENTER)
    for step in range(i):
        sources = [v for v in m.quiver.vertices if m.quiver.is_source(v)]
        for z in sources:
            m = reflect_source(m, z).rep
        _check_margin(cover, m)
    return Lift(cover, m, i)


def _support_in_arrows(m: Rep, s: str):
    return [a for a in m.quiver.in_arrows(s) if m.dims[a.src]]


@dataclass
class SinkStrip:
    simple: Rep
    quotient: Rep
    inclusion: Morphism     # E_s -> m
    projection: Morphism    # m -> quotient
    arrow: str


def strip_sink(m: Rep, s: str) -> SinkStrip:
    """0 -> E_s -> m -> c -> 0 for a sink s fed by a single arrow inside the support."""
    q = m.quiver
    if s not in q.vertices:
        raise CoverError(f"unknown vertex {s}")
    if not q.is_sink(s):
        raise CoverError(f"{s} is not a sink")
    ins = _support_in_arrows(m, s)
    if len(ins) != 1:
        raise CoverError(f"{s} has {len(ins)} incoming arrows inside the support, expected one")
    a = ins[0]
    if m.dims[s] != 1 or m.dims[a.src] != 1:
        raise CoverError(f"dimensions at {s} and {a.src} must both be 1")
    F = m.field
    if F.is_zero(m.mats[a.id]):
        raise CoverError(f"arrow {a.id} acts by zero")
    spaces = {v: F.zeros(m.dims[v], 0) for v in q.vertices}
    spaces[s] = F.eye(1)
    sub, quot, inc, proj = sub_quotient(m, spaces)
    return SinkStrip(sub, quot, inc, proj, a.id)


def strip_layer(lift: Lift) -> Rep:
    """Strip every vertex of the outermost layer in id order."""
    m = lift.rep
    for s in lift.cover.layer_vertices(lift.index):
        m = strip_sink(m, s).quotient
    return m


@dataclass
class CoverSequence:
    lift: Lift
    sink: str
    strip: SinkStrip
    hom_c_e: int
    hom_e_c: int
    ext_c_e: int
    c_exceptional: bool
    pushed_sub: Rep
    pushed_middle: Rep
    pushed_quotient: Rep
    pushed_inclusion: Morphism
    pushed_projection: Morphism
    quotient_indecomposable: bool

    @property
    def ok(self) -> bool:
        return (self.c_exceptional and self.hom_c_e == 0 and self.hom_e_c == 0 and self.ext_c_e == 1
                and self.quotient_indecomposable)


def lift_sequence(n: int, i: int, field: Field | None = None, lift: Lift | None = None,
                  seed=None) -> CoverSequence:
    """The nonsplit 0 -> E_s -> lifted P_i -> C -> 0 at the first outer sink, and its push-down."""
    if i < 1:
        raise CoverError("the simple P_0 admits no such sequence")
    lift = lift or lift_preprojective(n, i, field)
    s = lift.cover.layer_vertices(i)[0]
    st = strip_sink(lift.rep, s)
    c, e = st.quotient, st.simple
    cover = lift.cover
    pe = push_down(cover, e)
    pm = push_down(cover, lift.rep)
    pc = push_down(cover, c)
    pinc = push_down_morphism(cover, st.inclusion)
    pproj = push_down_morphism(cover, st.projection)
    c_small = c.restrict_to_support()
    return CoverSequence(
        lift, s, st,
        hom_dim(c, e), hom_dim(e, c), ext_dim(c, e),
        is_exceptional(c_small),
        pe, pm, pc, pinc, pproj,
        is_indecomposable(pc, seed),
    )
