"""Deterministic test corpora shared by unit and acceptance tests."""

from __future__ import annotations

import numpy as np

from quiverkit.decomp import is_indecomposable
from quiverkit.homext import is_exceptional
from quiverkit.quiver import Quiver, random_rep, simple_rep
from quiverkit.reflect import reflect_sink, reflect_source

THREE_VERTEX = {
    "double-and-single": Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "1", "2"), ("c", "3", "2")]),
    "a3-linear": Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")]),
    "double-double": Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "1", "2"), ("c", "2", "3"), ("d", "2", "3")]),
    "triangle": Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3"), ("c", "1", "3")]),
}

TWO_VERTEX = {
    "kronecker-2": Quiver.kronecker(2),
    "kronecker-3": Quiver.kronecker(3),
}


def reflection_corpus(quivers, field, count, seed, max_dim=12, steps=40):
    """Exceptional modules reached from simples by random sink/source reflections.

    Distinct (quiver, dimension vector) pairs only; total dimension between 2 and max_dim.
    """
    rng = np.random.default_rng(seed)
    out, seen = [], set()
    names = list(quivers)
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        attempts += 1
        q = quivers[names[int(rng.integers(len(names)))]]
        m = simple_rep(q, field, q.vertices[int(rng.integers(len(q.vertices)))])
        for _ in range(int(rng.integers(1, steps))):
            moves = []
            for v in m.quiver.vertices:
                if m.quiver.is_sink(v):
                    moves.append((v, reflect_sink))
                elif m.quiver.is_source(v):
                    moves.append((v, reflect_source))
            v, fn = moves[int(rng.integers(len(moves)))]
            r = fn(m, v).rep
            if r.total_dim == 0 or r.total_dim > max_dim:
                continue
            m = r
        key = (m.quiver, m.dimvec)
        if m.total_dim >= 2 and key not in seen:
            seen.add(key)
            out.append(m)
    return out


def random_exceptional(q, field, dims, rng, tries=5):
    for _ in range(tries):
        m = random_rep(q, field, dims, rng)
        if is_exceptional(m):
            return m
    return None


def random_indecomposable(q, field, dims, rng, tries=20, paranoid=False):
    for _ in range(tries):
        m = random_rep(q, field, dims, rng)
        if m.total_dim and is_indecomposable(m, rng, paranoid=paranoid):
            return m
    return None
