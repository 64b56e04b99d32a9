from __future__ import annotations

import pytest

from cosetforge.atlas import load_atlas
from cosetforge.feasible import FeasibilityQuery, distinct_graph_candidates, scan_feasible, verify_feasible
from cosetforge.limits import CapExceeded
from cosetforge.subgroups import SubgroupHandle, census
from oracles import closure, compose, elem_order, inv


def _brute_feasible(group, h_els, valency):
    n = group.degree
    hs = set(h_els)
    target = len(hs) // valency
    out = []
    for g in group.chain.iter_elements():
        o = elem_order(g)
        if o & (o - 1) or compose(g, g) not in hs:
            continue
        gi = inv(g)
        if sum(1 for x in hs if compose(compose(g, x), gi) in hs) != target:
            continue
        if len(closure(list(hs) + [g], n)) != group.order():
            continue
        out.append(g)
    return sorted(out)


@pytest.mark.parametrize("gname,tname", [("S5", "S4"), ("A5", "A4"), ("PSL(2,7)", "S4"), ("PSL(2,7)", "A4"), ("S6", "S4")])
def test_scan_matches_brute_force(gname, tname):
    g = load_atlas(gname)
    for i, h in enumerate(census(g, tname).classes):
        rep = scan_feasible(FeasibilityQuery(g, h, 4, class_index=i))
        assert rep.scanned_count == g.order()
        assert sorted(rep.feasible_elements) == _brute_feasible(g, h.elements(), 4)
        assert sum(len(c) for c in rep.double_coset_classes) == rep.feasible_count


def test_s5_point_stabilizer_has_sixteen_feasible_elements():
    g = load_atlas("S5")
    h = census(g, "S4").classes[0]
    rep = scan_feasible(FeasibilityQuery(g, h))
    assert rep.feasible_count == 16
    assert len(distinct_graph_candidates(rep)) == 1
    assert rep.max_feasible_order == 2 and not rep.exceeds_order_flag
    js = rep.to_json()
    assert js["feasible_count"] == 16 and js["scanned_count"] == 120


def test_verify_feasible_reports_every_condition():
    g = load_atlas("S5")
    h = SubgroupHandle(g, [(1, 2, 3, 0, 4), (1, 0, 2, 3, 4)])
    three_cycle = (1, 2, 0, 3, 4)
    r = verify_feasible(g, h, three_cycle)
    # fails early conditions yet all fields are present
    assert set(r) >= {"in_group", "two_element", "square_in_h", "index", "index_ok", "generates", "feasible"}
    assert r["two_element"] is False and r["feasible"] is False
    good = verify_feasible(g, h, (4, 1, 2, 3, 0))
    assert good["feasible"] and good["index"] == 4 and good["generated_order"] == "120"
    with pytest.raises(ValueError):
        verify_feasible(g, h, (0, 1, 2))


def test_query_validation_and_cap():
    g = load_atlas("A5")
    h = census(g, "A4").classes[0]
    with pytest.raises(ValueError):
        FeasibilityQuery(g, h, valency=5)
    with pytest.raises(CapExceeded):
        scan_feasible(FeasibilityQuery(g, h), scan_cap=10)
    assert scan_feasible(FeasibilityQuery(g, h), scan_cap=10, override_cap=True).scanned_count == 60


def test_sharded_scan_is_identical():
    g = load_atlas("PSL(2,7)")
    h = census(g, "A4").classes[0]
    one = scan_feasible(FeasibilityQuery(g, h), shards=1)
    three = scan_feasible(FeasibilityQuery(g, h), shards=3)
    assert one.feasible_elements == three.feasible_elements
    assert one.scanned_count == three.scanned_count == 168
