"""Acceptance criteria, each run at its stated tolerance (exact integers).

Every test appends one PASS/FAIL line that is printed in the terminal
summary. Criterion 10 is opt-in: set COSETFORGE_STRETCH=1.
"""

from __future__ import annotations

import math
import os
import random
import time

import networkx as nx
import pytest

import conftest
from cosetforge.atlas import load_atlas, load_example_fixture, verify_index_table
from cosetforge.cosets import build_coset_graph, coset_action, double_coset, generates
from cosetforge.feasible import FeasibilityQuery, distinct_graph_candidates, scan_feasible, verify_feasible
from cosetforge.fp import SEVENARC_ORDER, sevenarc_presentation, sevenarc_realization, todd_coxeter, verify_remark_claims
from cosetforge.graph import SimpleGraph
from cosetforge.harness import check_m11_regular
from cosetforge.symmetry import are_isomorphic, automorphism_group, count_s_arcs, is_s_arc_transitive
from cosetforge.chain import PermGroup, build_chain
from cosetforge.cosets import canonical_rep
from cosetforge.subgroups import SubgroupHandle, census, is_normal_in, iso_type
from oracles import aut_order, closure, compose, count_s_arcs as brute_s_arcs, inv, random_group

STRETCH = os.environ.get("COSETFORGE_STRETCH") == "1"


def record(n: int, ok: bool, detail: str, elapsed: float | None = None) -> None:
    t = f" [{elapsed:.1f}s]" if elapsed is not None else ""
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}{t}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)


def scans(g, t):
    c = census(g, t)
    return c, [scan_feasible(FeasibilityQuery(g, h, 4, class_index=i)) for i, h in enumerate(c.classes)]


def test_criterion_1_m12_a4_pipeline():
    t0 = time.perf_counter()
    m12 = load_atlas("M12")
    c, reports = scans(m12, "A4")
    counts = [r.feasible_count for r in reports]
    idx = counts.index(12) if 12 in counts else None
    obs = {"classes": c.class_count, "counts": sorted(counts)}
    if idx is not None:
        h = c.classes[idx]
        cs = coset_action(m12, h)
        graphs = [build_coset_graph(cs, double_coset(h, g)) for g in distinct_graph_candidates(reports[idx])]
        graph = graphs[0]
        obs["pairwise_isomorphic"] = all(are_isomorphic(graph, o) is not None for o in graphs[1:])
        image = cs.image_group()
        obs.update(vertices=graph.n, valency=graph.valency(), connected=graph.is_connected())
        obs["s2"] = is_s_arc_transitive(image, graph, 2)
        obs["s3"] = is_s_arc_transitive(image, graph, 3)
        aut = automorphism_group(graph, cap=graph.n).group
        obs["aut"] = aut.order()
        ih = SubgroupHandle(aut, image.generators, order=image.order())
        obs["normal"] = is_normal_in(ih, aut)
        obs["m11_regular"] = check_m11_regular(graph, aut, image, cs)
    want = {
        "classes": 4,
        "counts": [0, 0, 12, 24],
        "pairwise_isomorphic": True,
        "vertices": 7920,
        "valency": 4,
        "connected": True,
        "s2": True,
        "s3": False,
        "aut": 570240,
        "normal": True,
        "m11_regular": True,
    }
    ok = obs == want
    record(1, ok, f"M12/A4 pipeline {obs}", time.perf_counter() - t0)
    assert ok, obs


def test_criterion_2_m12_s4():
    t0 = time.perf_counter()
    c, reports = scans(load_atlas("M12"), "S4")
    counts = [r.feasible_count for r in reports]
    ok = c.class_count == 4 and counts == [0, 0, 0, 0]
    record(2, ok, f"M12/S4 classes={c.class_count} feasible={counts}", time.perf_counter() - t0)
    assert ok


def test_criterion_3_m11():
    t0 = time.perf_counter()
    m11 = load_atlas("M11")
    obs = {}
    for t in ("A4", "S4"):
        c, reports = scans(m11, t)
        obs[t] = (c.class_count, [r.feasible_count for r in reports])
    for t in ("Z3xA4", "Z3:S4", "S3xS4"):
        obs[t] = census(m11, t).class_count
    want = {"A4": (1, [0]), "S4": (1, [0]), "Z3xA4": 0, "Z3:S4": 0, "S3xS4": 0}
    ok = obs == want
    record(3, ok, f"M11 {obs}", time.perf_counter() - t0)
    assert ok


def test_criterion_4_psl27_natural():
    t0 = time.perf_counter()
    g = load_atlas("PSL(2,7)")
    c, reports = scans(g, "S4")
    counts = [r.feasible_count for r in reports]
    ok = g.degree == 7 and c.class_count == 2 and counts == [0, 0]
    record(4, ok, f"PSL(2,7) on 7 points, S4 classes={c.class_count} feasible={counts}", time.perf_counter() - t0)
    assert ok


def test_criterion_5_psl33():
    t0 = time.perf_counter()
    c, reports = scans(load_atlas("PSL(3,3)"), "AGL(2,3)")
    counts = [r.feasible_count for r in reports]
    ok = c.class_count == 2 and counts == [0, 0]
    record(5, ok, f"PSL(3,3)/AGL(2,3) classes={c.class_count} feasible={counts}", time.perf_counter() - t0)
    assert ok


def test_criterion_6_a9():
    t0 = time.perf_counter()
    a9 = load_atlas("A9")
    obs = {}
    for t in ("Z3:S4", "S3xS4", "AGL(2,3)"):
        c, reports = scans(a9, t)
        obs[t] = (c.class_count, [r.feasible_count for r in reports])
    want = {"Z3:S4": (2, [0, 0]), "S3xS4": (2, [0, 0]), "AGL(2,3)": (0, [])}
    ok = obs == want
    record(6, ok, f"A9 {obs}", time.perf_counter() - t0)
    assert ok


def test_criterion_7_example_fixture():
    t0 = time.perf_counter()
    fx = load_example_fixture()
    h = fx.h
    hg = h.as_group()
    h_ok = h.order() == 24 and iso_type(h).name == "S4" and hg.is_transitive()
    checks = [verify_feasible(fx.group, h, g) for g in fx.candidates]
    full = str(math.factorial(24) // 2)
    per = [
        c["two_element"] and c["square_in_h"] and c["index"] == 4 and str(c["generated_order"]) == full for c in checks
    ]
    ok = h_ok and all(per)
    detail = f"H order 24/S4/regular={h_ok}; indices={[c['index'] for c in checks]} per-candidate={per}"
    record(7, ok, detail, time.perf_counter() - t0)
    assert ok, detail


def _c8_chain() -> int:
    bad = 0
    for seed in range(30):
        n, gens, els = random_group(random.Random(seed))
        bad += build_chain(gens, n).order() != len(els)
    return bad


def _c8_aut() -> int:
    bad = 0
    for h in nx.graph_atlas_g():
        h = nx.convert_node_labels_to_integers(h)
        g = SimpleGraph.from_edges(h.number_of_nodes(), h.edges())
        if g.n <= 5:
            want = aut_order(g.n, g.edges())
        else:
            want = sum(1 for _ in nx.algorithms.isomorphism.GraphMatcher(h, h).isomorphisms_iter())
        bad += automorphism_group(g).order() != want
    for seed in range(50):
        rng = random.Random(seed)
        h = nx.gnp_random_graph(rng.randint(6, 13), rng.uniform(0.15, 0.6), seed=seed)
        g = SimpleGraph.from_edges(h.number_of_nodes(), h.edges())
        want = sum(1 for _ in nx.algorithms.isomorphism.GraphMatcher(h, h).isomorphisms_iter())
        bad += automorphism_group(g).order() != want
    return bad


def _instance(seed, max_order=2000):
    rng = random.Random(seed)
    n, gens, els = random_group(rng, max_degree=7, max_order=max_order)
    g = PermGroup(gens, degree=n)
    pool = sorted(els)
    h_gens = [rng.choice(pool) for _ in range(rng.randint(1, 2))]
    return rng, g, pool, SubgroupHandle(g, h_gens), closure(h_gens, n)


def _c8_double_cosets() -> int:
    bad = 0
    for seed in range(100):
        rng, g, pool, h, h_els = _instance(1000 + seed)
        x = rng.choice(pool)
        xi = inv(x)
        meet = sum(1 for a in h_els if compose(compose(x, a), xi) in h_els)
        bad += double_coset(h, x).size != len(h_els) * (len(h_els) // meet)
    return bad


def _c8_connectivity() -> int:
    bad = done = seed = 0
    while done < 30:
        rng, g, pool, h, h_els = _instance(5000 + seed, max_order=720)
        seed += 1
        x = rng.choice(pool)
        if len(h_els) == g.order() or x in h_els:
            continue
        d = double_coset(h, x)
        if not d.is_symmetric():
            continue
        graph = build_coset_graph(coset_action(g, h), d)
        nxg = nx.Graph()
        nxg.add_nodes_from(range(graph.n))
        nxg.add_edges_from(graph.edges())
        bad += nx.is_connected(nxg) != generates(g, [x], h)
        done += 1
    return bad


def _c8_canonical() -> int:
    bad = 0
    for seed in range(200):
        rng, g, pool, h, h_els = _instance(seed)
        x = rng.choice(pool)
        bad += canonical_rep(h, x) != min(compose(a, x) for a in h_els)
    return bad


def _c8_s_arcs() -> int:
    bad = 0
    cases = [(rng.choice([2, 3, 4, 5]), rng.choice([10, 20, 40, 60]), s) for s, rng in ((s, random.Random(s)) for s in range(20))]
    cases.append((4, 500, 7))
    for k, n, seed in cases:
        h = nx.random_regular_graph(k, n, seed=seed)
        g = SimpleGraph.from_edges(n, h.edges())
        adj = [list(g.neighbors(v)) for v in range(n)]
        bad += sum(count_s_arcs(g, s) != brute_s_arcs(adj, s) for s in range(4 if n < 500 else 3))
    return bad


def test_criterion_8_property_suites():
    t0 = time.perf_counter()
    failures = {
        "chain order, 30 groups": _c8_chain(),
        "aut order, atlas + 50 random": _c8_aut(),
        "double coset size, 100": _c8_double_cosets(),
        "connected iff generates, 30": _c8_connectivity(),
        "canonical_rep, 200": _c8_canonical(),
        "s-arc counts, up to 500 vertices": _c8_s_arcs(),
    }
    ok = not any(failures.values())
    record(8, ok, f"mismatches {failures}", time.perf_counter() - t0)
    assert ok, failures


def test_criterion_9_index_table():
    t0 = time.perf_counter()
    rows = verify_index_table()
    ok = len(rows) == 12 and all(r["ok"] for r in rows)
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed <= 1.0
    record(9, ok, f"{sum(r['ok'] for r in rows)}/{len(rows)} rows exact", elapsed)
    assert ok


@pytest.mark.slow
@pytest.mark.skipif(not STRETCH, reason="stretch criterion; set COSETFORGE_STRETCH=1")
def test_criterion_10_stretch():
    t0 = time.perf_counter()
    obs = {}
    ct = todd_coxeter(sevenarc_presentation("alternate"))
    obs["cosets"] = ct.index if ct.complete else ct.status
    g, conv = sevenarc_realization()
    obs["claims_confirmed"] = verify_remark_claims(g)["confirmed"]
    a12 = load_atlas("A12")
    c = census(a12, "A4")
    obs["a12_a4_classes"] = c.class_count
    obs["a12_a4_feasible"] = [
        scan_feasible(FeasibilityQuery(a12, h, 4, class_index=i), override_cap=True).feasible_count
        for i, h in enumerate(c.classes)
    ]
    for gname, types in (("PSp(6,2)", ("Z3:S4", "S3xS4", "AGL(2,3)")), ("M24", ("S4", "AGL(2,3)", "Z3:S4", "S3xS4"))):
        grp = load_atlas(gname)
        for t in types:
            try:
                cc, reports = scans(grp, t)
                obs[f"{gname}/{t}"] = (cc.class_count, [r.feasible_count for r in reports])
            except Exception as exc:  # reported, not hidden
                obs[f"{gname}/{t}"] = f"{type(exc).__name__}: {exc}"
    want = {
        "cosets": SEVENARC_ORDER,
        "claims_confirmed": True,
        "a12_a4_classes": 12,
        "a12_a4_feasible": [0] * 12,
    }
    ok = all(obs[k] == v for k, v in want.items()) and all(not isinstance(v, str) for v in obs.values())
    record(10, ok, f"stretch {obs}", time.perf_counter() - t0)
    assert ok, obs
