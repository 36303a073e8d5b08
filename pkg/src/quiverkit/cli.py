"""Command-line interface. Every command prints a report whose check lines start
with PASS or FAIL; the exit status is 0 iff every check passed, 2 on bad input."""

from __future__ import annotations

import sys

import click

from . import repfile, strata
from .covering import build_cover, lift_preprojective, push_down
from .decomp import decompose as decompose_rep, end_dim, is_indecomposable, is_isomorphic
from .homext import ext_dim, hom_dim
from .kronecker import classify_q2, preprojective
from .linalg import Field, LinalgError
from .quiver import QuiverError, Rep, euler_form
from .reflect import coxeter_power, reflect_sink, reflect_source, simple_reflection
from .schofield import check_pair, schofield_pairs
from .treebasis import exceptional_tree_basis, validate_certificate


class Ctx:
    def __init__(self, field, seed, samples, depth, paranoid, out):
        self.field_spec = field
        self.seed = seed
        self.samples = samples
        self.depth = depth
        self.paranoid = paranoid
        self.out = out

    def field(self, default="Q") -> Field:
        try:
            return Field.parse(self.field_spec or default)
        except LinalgError as e:
            raise click.UsageError(str(e))

    def load(self, path) -> Rep:
        try:
            m = repfile.read_rep(path)
        except (OSError, repfile.RepFileError) as e:
            raise click.UsageError(f"{path}: {e}")
        if self.field_spec and Field.parse(self.field_spec) != m.field:
            raise click.UsageError(f"{path} is over {m.field}, not {self.field_spec}")
        return m


def _emit(ctx: Ctx, report: strata.Report):
    text = report.text() + f"RESULT {'PASS' if report.ok else 'FAIL'} {report.passed}/{len(report.checks)}\n"
    if ctx.out:
        with open(ctx.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    click.echo(text, nl=False)
    sys.exit(0 if report.ok else 1)


def _write_rep(report: strata.Report, m: Rep, path):
    if path:
        repfile.write_rep(m, path)
        report.data.append(f"wrote {path}")
    else:
        report.data.extend(repfile.serialize(m).rstrip("\n").split("\n"))


def _dims(m: Rep) -> str:
    return "(" + ",".join(str(m.dims[v]) for v in m.quiver.vertices) + ")"


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--field", default=None, help="Q or Fp:<p>; for input files it must match the file.")
@click.option("--seed", default=None, type=int, help="Seed for every randomized step.")
@click.option("--samples", default=5, show_default=True, type=int, help="Samples per family.")
@click.option("--depth", default=None, type=int, help="Search depth or cover depth.")
@click.option("--paranoid", is_flag=True, help="Decide indecomposability exactly where possible.")
@click.option("--out", default=None, type=click.Path(dir_okay=False), help="Also write the report here.")
@click.pass_context
def main(cctx, field, seed, samples, depth, paranoid, out):
    """Exact computations with quiver representations."""
    cctx.obj = Ctx(field, seed, samples, depth, paranoid, out)


def _pair_report(kind, a: Rep, b: Rep, value: int, other: int) -> strata.Report:
    rep = strata.Report(f"{kind}({_dims(a)}, {_dims(b)}) over {a.field}")
    if a.quiver != b.quiver or a.field != b.field:
        raise click.UsageError("both representations must share quiver and field")
    rep.data.append(f"dim {kind} = {value}")
    h, e = (value, other) if kind == "Hom" else (other, value)
    chi = euler_form(a.quiver, a.dims, b.dims)
    rep.add("euler-identity", h - e == chi, f"hom={h} ext={e} euler={chi}")
    return rep


@main.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.argument("target", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def hom(ctx, source, target):
    """dim Hom(SOURCE, TARGET)."""
    a, b = ctx.load(source), ctx.load(target)
    _check_compatible(a, b)
    _emit(ctx, _pair_report("Hom", a, b, hom_dim(a, b), ext_dim(a, b)))


@main.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.argument("target", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def ext(ctx, source, target):
    """dim Ext^1(SOURCE, TARGET)."""
    a, b = ctx.load(source), ctx.load(target)
    _check_compatible(a, b)
    _emit(ctx, _pair_report("Ext", a, b, ext_dim(a, b), hom_dim(a, b)))


def _check_compatible(a, b):
    if a.quiver != b.quiver or a.field != b.field:
        raise click.UsageError("both representations must share quiver and field")


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def decompose(ctx, path):
    """Indecomposable summands with multiplicities."""
    m = ctx.load(path)
    dec = decompose_rep(m, ctx.seed)
    rep = strata.Report(f"decomposition of {_dims(m)} over {m.field}")
    for k, (s, mult) in enumerate(dec.summands):
        rep.data.append(f"summand {k}: dims={_dims(s)} multiplicity={mult} end={end_dim(s)}")
        rep.add(f"indecomposable[{k}]", is_indecomposable(s, ctx.seed, ctx.paranoid))
    total = {v: sum(s.dims[v] * k for s, k in dec.summands) for v in m.quiver.vertices}
    rep.add("dimensions-add-up", total == m.dims, _dims(m))
    _emit(ctx, rep)


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--vertex", required=True, help="A sink (sigma+) or a source (sigma-).")
@click.option("--write", default=None, type=click.Path(dir_okay=False), help="Write the result here.")
@click.pass_obj
def reflect(ctx, path, vertex, write):
    """Reflection functor at VERTEX, with a round-trip check."""
    m = ctx.load(path)
    q = m.quiver
    if vertex not in q.vertices:
        raise click.UsageError(f"unknown vertex {vertex}")
    if q.is_sink(vertex):
        r, back, sign = reflect_sink(m, vertex).rep, reflect_source, "+"
    elif q.is_source(vertex):
        r, back, sign = reflect_source(m, vertex).rep, reflect_sink, "-"
    else:
        raise click.UsageError(f"{vertex} is neither a sink nor a source")
    rep = strata.Report(f"sigma{sign} at {vertex} of {_dims(m)}")
    rep.data.append(f"result dims={_dims(r)}")
    simple_summand = _has_simple_summand(m, vertex, ctx.seed)
    if simple_summand:
        rep.data.append(f"note: simple summand at {vertex}; round trip loses it")
    else:
        want = simple_reflection(q, vertex, m.dims)
        rep.add("dimension-rule", all(r.dims[v] == want[v] for v in q.vertices), _dims(r))
        rt = back(r, vertex).rep
        rep.add("round-trip", rt.quiver == q and is_isomorphic(rt, m, ctx.seed))
    _write_rep(rep, r, write)
    _emit(ctx, rep)


def _has_simple_summand(m: Rep, v: str, seed) -> bool:
    if not m.dims[v]:
        return False
    dec = decompose_rep(m, seed)
    return any(s.total_dim == 1 and s.dims[v] == 1 for s, _ in dec.summands)


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--power", default=1, show_default=True, type=int, help="Negative for the inverse functor.")
@click.option("--write", default=None, type=click.Path(dir_okay=False))
@click.pass_obj
def coxeter(ctx, path, power, write):
    """Coxeter functor applied POWER times."""
    m = ctx.load(path)
    r = coxeter_power(m, power)
    rep = strata.Report(f"coxeter^{power} of {_dims(m)}")
    rep.data.append(f"result dims={_dims(r)}")
    rep.add("valid-rep", r.quiver == m.quiver and _valid(r))
    _write_rep(rep, r, write)
    _emit(ctx, rep)


def _valid(m: Rep) -> bool:
    try:
        Rep(m.quiver, m.field, m.dims, m.mats)
    except QuiverError:
        return False
    return True


@main.command("classify-q2")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def classify(ctx, path):
    """Kronecker type of a Q_2 representation."""
    m = ctx.load(path)
    try:
        t = classify_q2(m, ctx.seed)
    except QuiverError as e:
        raise click.UsageError(str(e))
    rep = strata.Report(f"Kronecker type of {_dims(m)} over {m.field}")
    rep.data.append(f"type = {t}")
    rep.add("dimensions-add-up", t.dims == (m.dims["x"], m.dims["y"]), str(t.dims))
    _emit(ctx, rep)


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--cheap", is_flag=True, help="Use only the cheapest complement summands.")
@click.pass_obj
def schofield(ctx, path, cheap):
    """Orthogonal exceptional pairs (X, Y) with 0 -> Y^v -> M -> X^u -> 0."""
    m = ctx.load(path)
    res = _guard(lambda: schofield_pairs(m, ctx.seed, cheap_only=cheap))
    rep = strata.Report(f"Schofield pairs of {_dims(m)} over {m.field}")
    for k, p in enumerate(res.pairs):
        chk = check_pair(m, p, ctx.seed)
        rep.data.append(f"pair {k}: X={_dims(p.X)} u={p.u} Y={_dims(p.Y)} v={p.v}")
        rep.add(f"pair[{k}]", chk.ok, f"hom(X,Y)={chk.hom_xy} hom(Y,X)={chk.hom_yx} ext(Y,X)={chk.ext_yx} "
                f"exact={chk.exact} reconstructs={chk.reconstructs}")
    if not cheap:
        rep.add("pair-count", res.count_matches, f"{len(res.pairs)} pairs, support {res.support_size}")
    _emit(ctx, rep)


def _guard(fn):
    try:
        return fn()
    except (QuiverError, LinalgError) as e:
        raise click.UsageError(str(e))


@main.command("tree-cert")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--write", default=None, type=click.Path(dir_okay=False), help="Certificate file.")
@click.pass_obj
def tree_cert(ctx, path, write):
    """Tree basis with 0/1 coefficients for an exceptional representation."""
    m = ctx.load(path)
    cert = _guard(lambda: exceptional_tree_basis(m, ctx.seed))
    chk = validate_certificate(cert, m, ctx.seed)
    rep = strata.Report(f"tree certificate for {_dims(m)} over {m.field}")
    rep.add("tree", chk.tree, f"vertices={chk.vertices} edges={chk.edges}")
    rep.add("zero-one", chk.normalizable)
    rep.add("isomorphic", chk.isomorphic)
    text = repfile.serialize_certificate(m, cert.basis)
    if write:
        with open(write, "w", encoding="utf-8") as fh:
            fh.write(text)
        rep.data.append(f"wrote {write}")
    else:
        rep.data.extend(text.rstrip("\n").split("\n"))
    _emit(ctx, rep)


@main.command()
@click.option("--n", "n", required=True, type=int, help="Number of Kronecker arrows.")
@click.option("--index", "i", required=True, type=int, help="Which preprojective.")
@click.option("--write", default=None, type=click.Path(dir_okay=False), help="Write the cover rep here.")
@click.pass_obj
def lift(ctx, n, i, write):
    """Lift of the i-th preprojective to the truncated cover; checks its push-down."""
    F = ctx.field()
    lf = _guard(lambda: lift_preprojective(n, i, F, ctx.depth))
    rep = strata.Report(f"lift of P_{i} over Q_{n}, depth {lf.cover.depth}")
    layers = {}
    for v in lf.rep.support:
        layers[lf.cover.layer[v]] = layers.get(lf.cover.layer[v], 0) + lf.rep.dims[v]
    rep.data.append("layer dims: " + " ".join(f"{j}:{layers[j]}" for j in sorted(layers)))
    rep.add("support-within-index", max(layers) <= i, f"outermost layer {max(layers)}")
    pd = push_down(lf.cover, lf.rep)
    rep.add("push-down", is_isomorphic(pd, preprojective(n, i, F), ctx.seed), f"dims={_dims(pd)}")
    if write:
        repfile.write_rep(lf.rep, write)
        rep.data.append(f"wrote {write}")
    _emit(ctx, rep)


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--n", "n", required=True, type=int, help="Number of Kronecker arrows.")
@click.option("--write", default=None, type=click.Path(dir_okay=False))
@click.pass_obj
def pushdown(ctx, path, n, write):
    """Push a representation of the truncated cover (see --depth) down to Q_n."""
    m = ctx.load(path)
    depth = ctx.depth
    if depth is None:
        depth = max(len(v.split(".")) - 1 for v in m.quiver.vertices)
    cover = build_cover(n, depth)
    if m.quiver != cover.quiver:
        # reoriented covers keep the vertex and arrow ids
        if sorted(m.quiver.vertices) != sorted(cover.quiver.vertices) or \
                sorted(a.id for a in m.quiver.arrows) != sorted(a.id for a in cover.quiver.arrows):
            raise click.UsageError("representation is not over the truncated cover of that size")
    pd = _guard(lambda: push_down(cover, m))
    rep = strata.Report(f"push-down to Q_{n}")
    rep.data.append(f"result dims={_dims(pd)}")
    rep.add("total-dimension", pd.total_dim == m.total_dim, str(pd.total_dim))
    _write_rep(rep, pd, write)
    _emit(ctx, rep)


@main.command("verify-tables")
@click.pass_obj
def verify_tables(ctx):
    """End dimensions of the 18 orbits of Q_2 reps of dimension (3,3)."""
    F = ctx.field()
    rep = strata.verify_end_dimension_table(F)
    rep.extend(strata.orbit_parameter_consistency())
    _emit(ctx, rep)


@main.command("strata-check")
@click.option("--family", "families", multiple=True, help="Family id such as B11/U3; default: all.")
@click.option("--points", default=1000, show_default=True, type=int, help="Fibre points per orbit for empty strata.")
@click.option("--trees/--no-trees", default=True, help="Also check the tree triples and (4,4) examples.")
@click.pass_obj
def strata_check(ctx, families, points, trees):
    """Sample the encoded stratum families and test the empty strata."""
    F = ctx.field("Fp:7")
    fids = families or tuple(strata.FAMILIES)
    rep = strata.Report(f"strata over {F}")
    for fid in fids:
        if fid not in strata.FAMILIES:
            raise click.UsageError(f"unknown family {fid}; known: {', '.join(strata.FAMILIES)}")
        rep.extend(strata.check_stratum_family(fid, ctx.samples, ctx.seed, F, paranoid=True))
    if points:
        orbits = sorted({strata.FAMILIES[f].orbit for f in fids}) if families else list(strata.NONEMPTY_STRATA)
        for o in orbits:
            rep.extend(strata.check_empty_strata(o, points, ctx.seed, F))
    if trees:
        rep.extend(strata.check_tree_triples(F, ctx.seed))
        rep.extend(strata.check_counterexamples(F))
    _emit(ctx, rep)


@main.command()
@click.argument("curve", type=click.Choice(strata.CURVES))
@click.option("--eps", "epsilons", default="0,1,2,3", show_default=True, help="Comma-separated parameters.")
@click.pass_obj
def curve(ctx, curve, epsilons):
    """Degeneration curve witnesses."""
    F = ctx.field()
    try:
        eps = [F(e) for e in epsilons.split(",") if e.strip()]
    except (ValueError, ZeroDivisionError, LinalgError) as e:
        raise click.UsageError(str(e))
    _emit(ctx, strata.degeneration_curve(curve, eps, F, ctx.seed))


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def access(ctx, path):
    """Chain of simple sub/quotient removals down to a simple (prime fields only)."""
    m = ctx.load(path)
    if not m.field.p:
        raise click.UsageError("accessibility search needs a prime field")
    w = strata.accessibility_search(m, ctx.depth, ctx.seed)
    rep = strata.Report(f"accessibility of {_dims(m)} over {m.field}")
    if w is not None:
        for k, st in enumerate(w.steps):
            rep.data.append(f"step {k}: remove simple {st.direction} at {st.vertex} -> {_dims(st.remainder)}")
    rep.add("witness", w is not None and strata.verify_witness(w, ctx.seed),
            "none within depth" if w is None else f"length {w.length}")
    _emit(ctx, rep)


if __name__ == "__main__":
    main()
