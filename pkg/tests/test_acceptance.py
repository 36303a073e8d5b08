"""Acceptance criteria. Each test prints one PASS/FAIL line and asserts it.

The lines are also collected into the pytest terminal summary. Run directly
(``python tests/test_acceptance.py``) to get just the twelve lines.
"""

import time

import numpy as np
import pytest

import conftest
from corpora import THREE_VERTEX, TWO_VERTEX, random_indecomposable, reflection_corpus
from quiverkit.covering import lift_preprojective, lift_sequence, push_down
from quiverkit.decomp import end_dim, is_isomorphic
from quiverkit.homext import ExtSpace, ext_dim, hom_dim
from quiverkit.kronecker import a_sequence, hom_ext_formula, preinjective, preprojective
from quiverkit.linalg import Field
from quiverkit.quiver import Quiver, euler_form, random_rep
from quiverkit.reflect import reflect_sink, reflect_source, simple_reflection
from quiverkit.schofield import check_pair, schofield_pairs
from quiverkit.strata import (
    FAMILIES, END_DIMENSION_TABLE, AccessibilitySearch, accessibility_search, check_counterexamples,
    check_empty_strata, check_one_simple_extensions, check_stratum_family, check_tree_triples,
    orbit_parameter_consistency, verify_end_dimension_table, verify_witness,
)
from quiverkit.treebasis import exceptional_tree_basis, validate_certificate

QQ = Field(0)
SEED = 20240611


def report(number, name, ok, detail, elapsed=None, budget=None):
    timing = ""
    if elapsed is not None:
        timing = f" [{elapsed:.1f}s" + (f" < {budget}s]" if budget else "]")
        if budget is not None and elapsed >= budget:
            ok = False
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {name}: {detail}{timing}"
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    assert ok, line


def random_acyclic_quiver(rng, max_vertices=4, max_mult=2):
    k = int(rng.integers(1, max_vertices + 1))
    vs = [f"v{i}" for i in range(k)]
    arrows = []
    for i in range(k):
        for j in range(i + 1, k):
            for t in range(int(rng.integers(0, max_mult + 1))):
                arrows.append((f"a{i}{j}{t}", vs[i], vs[j]))
    return Quiver(vs, arrows)


def test_euler_identity_random_pairs():
    t = time.time()
    F = Field(5)
    rng = np.random.default_rng(SEED)
    bad = []
    for trial in range(200):
        q = random_acyclic_quiver(rng)
        dn = [int(x) for x in rng.integers(0, 5, len(q.vertices))]
        dm = [int(x) for x in rng.integers(0, 5, len(q.vertices))]
        n, m = random_rep(q, F, dn, rng), random_rep(q, F, dm, rng)
        # Hom from the reduced solver, Ext from the rank of the full differential
        lhs = hom_dim(n, m) - ExtSpace(n, m).dim
        if lhs != euler_form(q, dn, dm):
            bad.append(trial)
    report(1, "Euler identity", not bad, f"200 pairs over F_5, mismatches={len(bad)}",
           time.time() - t, 10)


def test_kronecker_hom_ext_formula_tables():
    t = time.time()
    F = Field(101)
    bad, count = [], 0
    for n in (2, 3):
        mods = {("P", i): preprojective(n, i, F) for i in range(5)}
        mods.update({("I", i): preinjective(n, i, F) for i in range(5)})
        for a, ma in mods.items():
            for b, mb in mods.items():
                count += 1
                for which, fn in (("hom", hom_dim), ("ext", ext_dim)):
                    if fn(ma, mb) != hom_ext_formula(n, a, b, which):
                        bad.append((n, a, b, which))
    report(2, "Kronecker Hom/Ext formula tables", not bad,
           f"{count} pairs over F_101, mismatches={bad[:3]}", time.time() - t, 30)


def test_preprojective_dimension_vectors():
    a = a_sequence(3, 5)
    dims = [preprojective(3, i, QQ).dimvec for i in range(5)]
    ok = all(dims[i] == (a[i], a[i + 1]) for i in range(5))
    total = sum(dims[4])
    report(3, "a-sequence dimension vectors", ok and total == 76,
           f"dims={dims} total(P_4)={total}")


def test_end_dimension_table():
    t = time.time()
    details, ok = [], True
    for F in (QQ, Field(7)):
        r = verify_end_dimension_table(F)
        ok &= r.ok
        details += [f"{F}: {c.line()}" for c in r.checks if not c.ok]
    orbit = orbit_parameter_consistency()
    ok &= orbit.ok
    details += [c.line() for c in orbit.checks if not c.ok]
    report(4, "End-dimension table", ok,
           f"{len(END_DIMENSION_TABLE)} rows over Q and F_7; failing: {details or 'none'}",
           time.time() - t, 10)


def test_stratum_families_and_empty_strata():
    t = time.time()
    F = Field(7)
    fails = []
    for fid in FAMILIES:
        r = check_stratum_family(fid, samples=5, seed=SEED, field=F)
        fails += [c.name for c in r.checks if not c.ok]
    orbits = sorted({row[0] for row in END_DIMENSION_TABLE}, key=lambda s: int(s[1:]))
    for orbit in orbits:
        r = check_empty_strata(orbit, points=1000, seed=SEED, field=F)
        fails += [c.line() for c in r.checks if not c.ok]
    report(5, "stratum families and empty strata", not fails,
           f"{len(FAMILIES)} families x 5 samples, {len(orbits)} orbits x 1000 points; failing: {fails or 'none'}",
           time.time() - t, 120)


def test_tree_module_triples():
    r = check_tree_triples(QQ, seed=SEED)
    report(6, "tree module triples", r.ok and len(r.checks) == 3, "; ".join(c.line() for c in r.checks))


def test_exceptional_tree_bases():
    t = time.time()
    mods = [(f"P{i}", preprojective(3, i, QQ)) for i in range(5)]
    mods += [(f"I{i}", preinjective(3, i, QQ)) for i in range(5)]
    assert all(m.total_dim <= 76 for _, m in mods) and preprojective(3, 5, Field(7)).total_dim > 76
    refl = reflection_corpus(THREE_VERTEX, QQ, 10, seed=SEED)
    mods += [(f"refl{m.dimvec}", m) for m in refl]
    fails = []
    for name, m in mods:
        cert = exceptional_tree_basis(m, SEED)
        if not validate_certificate(cert, m, SEED).ok:
            fails.append(name)
    report(7, "exceptional tree bases", not fails and len(refl) == 10,
           f"{len(mods)} modules (10 Kronecker, {len(refl)} reflection-generated); failing: {fails or 'none'}",
           time.time() - t, 300)


def test_reflection_roundtrips():
    F = Field(5)
    q = Quiver.kronecker(3)
    rng = np.random.default_rng(SEED)
    done, bad = 0, []
    while done < 100:
        a = int(rng.integers(1, 4))
        b = int(rng.integers(0, 3 * a + 1))
        m = random_rep(q, F, {"x": a, "y": b}, rng)
        # no simple summand at the sink: the arrows jointly span M(y)
        if F.rank(F.hstack([m.mats[x.id] for x in q.arrows], b)) != b:
            continue
        done += 1
        r = reflect_sink(m, "y").rep
        back = reflect_source(r, "y").rep
        ok = (r.dims == simple_reflection(q, "y", m.dims)
              and is_isomorphic(back, m, SEED)
              and end_dim(r) == end_dim(m)
              and ext_dim(r, r) == ext_dim(m, m))
        if not ok:
            bad.append(m.dimvec)
    report(8, "reflection roundtrips", not bad, f"100 reps over F_5, failing dims={bad[:5]}")


def test_schofield_pairs():
    t = time.time()
    mods = reflection_corpus({**THREE_VERTEX, **TWO_VERTEX}, QQ, 20, seed=SEED)
    bad = []
    for m in mods:
        res = schofield_pairs(m, SEED)
        if not res.count_matches or not all(check_pair(m, p, SEED).ok for p in res.pairs):
            bad.append(m.dimvec)
    report(9, "Schofield pairs", len(mods) == 20 and not bad,
           f"{len(mods)} exceptional modules, pair count = support - 1 and pair checks; failing: {bad or 'none'}",
           time.time() - t, 120)


def test_cover_lift_pipeline():
    n = 3
    fails = []
    for i in range(5):
        lift = lift_preprojective(n, i, QQ)
        cov, m = lift.cover, lift.rep
        sizes = [len(cov.layer_vertices(j)) for j in range(cov.depth + 1)]
        if sizes != [1] + [n * (n - 1) ** (j - 1) for j in range(1, cov.depth + 1)]:
            fails.append(f"P{i}:layers")
        support = {v for v in cov.quiver.vertices if m.dims[v]}
        if support != {v for v in cov.quiver.vertices if cov.layer[v] <= i}:
            fails.append(f"P{i}:support")
        outer = [v for v in cov.quiver.vertices if cov.layer[v] in (i - 1, i)]
        if any(m.dims[v] != 1 for v in outer):
            fails.append(f"P{i}:outer-dims")
        if not is_isomorphic(push_down(cov, m), preprojective(n, i, QQ), SEED):
            fails.append(f"P{i}:push-down")
        if i >= 1:
            seq = lift_sequence(n, i, QQ, lift=lift, seed=SEED)
            if not seq.ok:
                fails.append(f"P{i}:sequence")
    report(10, "cover and lift pipeline", not fails, f"n=3, i=0..4; failing: {fails or 'none'}")


def test_accessibility_witnesses():
    F = Field(2)
    searcher = AccessibilitySearch(SEED)
    fails = []
    for i in range(3):
        m = preprojective(3, i, F)
        w = accessibility_search(m, seed=SEED, searcher=searcher)
        if w is None or not verify_witness(w, SEED):
            fails.append(f"P{i}")
    rng = np.random.default_rng(SEED)
    q = Quiver.kronecker(3)
    sampled = 0
    for _ in range(200):
        if sampled == 15:
            break
        a = int(rng.integers(1, 6))
        b = int(rng.integers(0, 7 - a))
        m = random_indecomposable(q, F, {"x": a, "y": b}, rng, tries=3, paranoid=True)
        if m is None:
            continue
        sampled += 1
        w = accessibility_search(m, seed=SEED, searcher=searcher)
        if w is None or not verify_witness(w, SEED):
            fails.append(f"Q3{m.dimvec}")
    ext = check_one_simple_extensions(F, samples=3, seed=SEED)
    fails += [c.name for c in ext.checks if not c.ok]
    report(11, "accessibility witnesses", not fails and sampled == 15,
           f"P0-P2 over F_2, {sampled} sampled Q_3 reps of dim <= 6, "
           f"{len(ext.checks)} one-simple extension checks; failing: {fails or 'none'}")


def test_counterexamples():
    r = check_counterexamples(QQ, lams=(2, 3, -1))
    report(12, "(4,4) counterexamples", r.ok, "; ".join(c.line() for c in r.checks))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
