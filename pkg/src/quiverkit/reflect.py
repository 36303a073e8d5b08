"""Reflection functors at sinks and sources, Coxeter functors."""

from __future__ import annotations

from dataclasses import dataclass

from .quiver import Quiver, QuiverError, Rep, dual_rep


@dataclass
class ReflectionResult:
    rep: Rep
    vertex: str
    reversed_arrows: tuple   # arrow ids whose orientation flipped


def reflect_sink(m: Rep, y: str) -> ReflectionResult:
    """sigma^+ at a sink y: the new space at y is the kernel of (+) M(src a) -> M(y)."""
    q = m.quiver
    if y not in q.vertices:
        raise QuiverError(f"unknown vertex {y}")
    if not q.is_sink(y):
        raise QuiverError(f"{y} is not a sink")
    F = m.field
    ins = q.in_arrows(y)
    src_dims = [m.dims[a.src] for a in ins]
    phi = F.hstack([m.mats[a.id] for a in ins], m.dims[y])
    k = F.kernel(phi) if phi.shape[1] else F.zeros(0, 0)
    new_q = q.reverse_at(y)
    dims = dict(m.dims)
    dims[y] = k.shape[1]
    mats = dict(m.mats)
    off = 0
    for a, d in zip(ins, src_dims):
        mats[a.id] = k[off:off + d, :]
        off += d
    return ReflectionResult(Rep(new_q, F, dims, mats, check=False), y, tuple(a.id for a in ins))


def reflect_source(m: Rep, z: str) -> ReflectionResult:
    """sigma^- at a source z, computed as D sigma^+ D."""
    q = m.quiver
    if z not in q.vertices:
        raise QuiverError(f"unknown vertex {z}")
    if not q.is_source(z):
        raise QuiverError(f"{z} is not a source")
    r = reflect_sink(dual_rep(m), z)
    return ReflectionResult(dual_rep(r.rep), z, r.reversed_arrows)


def coxeter(m: Rep, direction: str = "plus") -> Rep:
    """Phi^+ (sinks first) or Phi^- (sources first); the result lives over the same quiver."""
    q = m.quiver
    if not q.is_acyclic():
        raise QuiverError("Coxeter functor needs an acyclic quiver")
    order = q.topological_order()
    cur = m
    if direction in ("plus", "+"):
        for v in reversed(order):
            cur = reflect_sink(cur, v).rep
    elif direction in ("minus", "-"):
        for v in order:
            cur = reflect_source(cur, v).rep
    else:
        raise ValueError(f"direction must be plus or minus, not {direction!r}")
    return Rep(q, cur.field, cur.dims, cur.mats, check=False)


def coxeter_power(m: Rep, k: int) -> Rep:
    """Phi^- applied k times for k > 0, Phi^+ applied -k times for k < 0."""
    for _ in range(abs(k)):
        m = coxeter(m, "minus" if k > 0 else "plus")
    return m


def simple_reflection(q: Quiver, y: str, d) -> dict:
    """s_y(d): negate d(y) and add d at the other end of every arrow at y."""
    d = dict(zip(q.vertices, d)) if not isinstance(d, dict) else {v: d.get(v, 0) for v in q.vertices}
    out = dict(d)
    total = 0
    for a in q.arrows:
        if a.src == a.tgt:
            continue
        if a.src == y:
            total += d[a.tgt]
        elif a.tgt == y:
            total += d[a.src]
    out[y] = total - d[y]
    return out
