"""Line-oriented text format for representations.

Grammar (one item per line, keys in this order)::

    repfile: 1
    field: Q | Fp:<p>
    vertices: <id> <id> ...
    arrow: <id> <src> <tgt>          (one line per arrow, sorted by id)
    dims: <id>=<d> <id>=<d> ...      (vertex order)
    matrix: <arrow id> <rows> <cols> (one block per arrow, arrow order)
    <row entries separated by single spaces>  (no row lines if cols is 0)
    end

Rationals are written as ``p/q`` (or ``p``), F_p elements as integers in
[0, p). Blank lines and lines starting with ``#`` are ignored on input.
Ids may not contain whitespace, ``=`` or ``#``.

A tree certificate file wraps a repfile and adds the change of basis::

    certificate: 1
    <repfile block of the certified rep, through its 'end' line>
    basis: <vertex> <rows> <cols>    (one block per vertex, vertex order)
    <rows>
    end
"""

from __future__ import annotations

from .linalg import Field
from .quiver import Quiver, QuiverError, Rep

VERSION = "1"


class RepFileError(ValueError):
    pass


def _check_id(s: str):
    if not s or any(c.isspace() for c in s) or "=" in s or "#" in s:
        raise RepFileError(f"invalid id {s!r}")


def serialize(m: Rep) -> str:
    F = m.field
    q = m.quiver
    for v in q.vertices:
        _check_id(v)
    lines = [f"repfile: {VERSION}", f"field: {F}", "vertices: " + " ".join(q.vertices)]
    for a in q.arrows:
        _check_id(a.id)
        lines.append(f"arrow: {a.id} {a.src} {a.tgt}")
    lines.append("dims: " + " ".join(f"{v}={m.dims[v]}" for v in q.vertices))
    for a in q.arrows:
        mat = m.mats[a.id]
        r, c = mat.shape
        lines.append(f"matrix: {a.id} {r} {c}")
        for i in range(r if c else 0):
            lines.append(" ".join(F.fmt(x) for x in mat[i]))
    lines.append("end")
    return "\n".join(lines) + "\n"


def _content_lines(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if s and not s.startswith("#"):
            yield n, s


def _key(line: str, n: int, want: str) -> str:
    k, sep, rest = line.partition(":")
    if not sep or k.strip() != want:
        raise RepFileError(f"line {n}: expected '{want}:'")
    return rest.strip()


def _reader(text: str):
    it = iter(list(_content_lines(text)))

    def nxt(what):
        try:
            return next(it)
        except StopIteration:
            raise RepFileError(f"unexpected end of file, expected {what}") from None
    return it, nxt


def _read_rows(F, nxt, what, r, c):
    if r == 0 or c == 0:
        return F.zeros(r, c)
    rows = []
    for _ in range(r):
        n, row = nxt(f"row of {what}")
        entries = row.split()
        if len(entries) != c:
            raise RepFileError(f"line {n}: expected {c} entries")
        try:
            rows.append([F(x) for x in entries])
        except (ValueError, ZeroDivisionError) as e:
            raise RepFileError(f"line {n}: {e}") from None
    return F.matrix(rows, r, c)


def _block_header(line, n, key):
    parts = _key(line, n, key).split()
    if len(parts) != 3 or not parts[1].isdigit() or not parts[2].isdigit():
        raise RepFileError(f"line {n}: {key} needs id, rows and columns")
    return parts[0], int(parts[1]), int(parts[2])


def _no_trailing(it):
    for n, _ in it:
        raise RepFileError(f"line {n}: content after 'end'")


def parse(text: str) -> Rep:
    it, nxt = _reader(text)
    m = _parse_rep(nxt)
    _no_trailing(it)
    return m


def _parse_rep(nxt) -> Rep:
    n, line = nxt("repfile header")
    if _key(line, n, "repfile") != VERSION:
        raise RepFileError(f"line {n}: unsupported version")
    n, line = nxt("field")
    try:
        F = Field.parse(_key(line, n, "field"))
    except ValueError as e:
        raise RepFileError(f"line {n}: {e}") from None
    n, line = nxt("vertices")
    vertices = _key(line, n, "vertices").split()
    arrows = []
    n, line = nxt("arrow or dims")
    while line.startswith("arrow:"):
        parts = _key(line, n, "arrow").split()
        if len(parts) != 3:
            raise RepFileError(f"line {n}: arrow needs id, source and target")
        arrows.append(tuple(parts))
        n, line = nxt("arrow or dims")
    dims = {}
    for tok in _key(line, n, "dims").split():
        v, sep, d = tok.partition("=")
        if not sep or not d.lstrip("-").isdigit():
            raise RepFileError(f"line {n}: bad dimension entry {tok!r}")
        dims[v] = int(d)
    try:
        q = Quiver(vertices, arrows)
    except QuiverError as e:
        raise RepFileError(str(e)) from None
    if set(dims) != set(q.vertices):
        raise RepFileError("dims must list every vertex exactly once")
    mats = {}
    n, line = nxt("matrix or end")
    while line.startswith("matrix:"):
        aid, r, c = _block_header(line, n, "matrix")
        if aid not in q.arrow:
            raise RepFileError(f"line {n}: unknown arrow {aid}")
        if aid in mats:
            raise RepFileError(f"line {n}: duplicate matrix for {aid}")
        mats[aid] = _read_rows(F, nxt, aid, r, c)
        n, line = nxt("matrix or end")
    if line != "end":
        raise RepFileError(f"line {n}: expected 'end'")
    missing = [a.id for a in q.arrows if a.id not in mats]
    if missing:
        raise RepFileError(f"missing matrix for {missing[0]}")
    try:
        return Rep(q, F, dims, mats)
    except QuiverError as e:
        raise RepFileError(str(e)) from None


def read_rep(path) -> Rep:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def write_rep(m: Rep, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(m))


def serialize_certificate(m: Rep, basis: dict) -> str:
    F = m.field
    lines = [f"certificate: {VERSION}", serialize(m).rstrip("\n")]
    for v in m.quiver.vertices:
        b = basis[v]
        lines.append(f"basis: {v} {b.shape[0]} {b.shape[1]}")
        for i in range(b.shape[0]):
            lines.append(" ".join(F.fmt(x) for x in b[i]))
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str):
    """(rep, basis) from a certificate file."""
    it, nxt = _reader(text)
    n, line = nxt("certificate header")
    if _key(line, n, "certificate") != VERSION:
        raise RepFileError(f"line {n}: unsupported version")
    m = _parse_rep(nxt)
    F = m.field
    basis = {}
    n, line = nxt("basis or end")
    while line.startswith("basis:"):
        v, r, c = _block_header(line, n, "basis")
        if v not in m.quiver.vertices or v in basis:
            raise RepFileError(f"line {n}: unexpected basis block for {v}")
        if r != m.dims[v] or c != m.dims[v]:
            raise RepFileError(f"line {n}: basis at {v} must be {m.dims[v]}x{m.dims[v]}")
        basis[v] = _read_rows(F, nxt, v, r, c)
        n, line = nxt("basis or end")
    if line != "end":
        raise RepFileError(f"line {n}: expected 'end'")
    _no_trailing(it)
    if set(basis) != set(m.quiver.vertices):
        raise RepFileError("basis must be given at every vertex")
    return m, basis
