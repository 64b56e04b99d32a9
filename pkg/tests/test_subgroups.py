from __future__ import annotations

from collections import Counter

import pytest

from cosetforge.atlas import load_atlas
from cosetforge.models import (
    A4,
    AGL23,
    PROFILES,
    S3xS4,
    S4,
    TYPE_ORDERS,
    Z3sS4,
    Z3xA4,
    canonical_type_name,
    model_elements,
    model_fingerprint,
    model_generators,
    profile_generators,
)
from cosetforge.perm import mul, order_of
from cosetforge.subgroups import (
    NoStrategyError,
    SubgroupHandle,
    _census_scan,
    are_conjugate,
    census,
    census_natural,
    intersect,
    iso_type,
    is_normal_in,
)
from oracles import closure, compose, inv

SMALL_TYPES = [A4, S4, Z3xA4, Z3sS4, S3xS4, AGL23]


@pytest.mark.parametrize("name", SMALL_TYPES)
def test_models_have_the_stated_order(name):
    gens = model_generators(name)
    assert len(closure(gens, len(gens[0]))) == TYPE_ORDERS[name]


@pytest.mark.parametrize("name", SMALL_TYPES)
def test_profiles_generate_their_models(name):
    gens = profile_generators(name)
    prof = PROFILES[name]
    assert len(closure(gens, len(gens[0]))) == TYPE_ORDERS[name]
    if prof[0] == "pair":
        a, b = gens
        assert (order_of(a), order_of(b), order_of(mul(a, b))) == prof[1:]


def test_z3_s4_is_not_two_generated():
    els = list(model_elements(Z3sS4))
    n = len(els[0])
    assert all(len(closure([a, b], n)) < 72 for a in els for b in els)


def test_fingerprints_separate_the_types():
    fps = [model_fingerprint(t) for t in SMALL_TYPES]
    assert len(set(fps)) == len(fps)


@pytest.mark.parametrize("name", SMALL_TYPES)
def test_iso_type_recognizes_each_model(name):
    gens = model_generators(name)
    h = SubgroupHandle(None, gens)
    assert iso_type(h).name == name


def test_iso_type_rejects_same_order_impostors():
    z12 = tuple(list(range(1, 12)) + [0])
    d12 = SubgroupHandle(None, [(1, 2, 3, 4, 5, 0), (0, 5, 4, 3, 2, 1)])
    assert d12.order() == 12
    assert iso_type(SubgroupHandle(None, [z12])).name == "other"
    assert iso_type(d12).name == "other"


def test_type_aliases():
    assert canonical_type_name("z3:s4") == Z3sS4
    assert canonical_type_name("AGL(2,3)") == AGL23
    with pytest.raises(KeyError):
        canonical_type_name("Q8")


def _brute_census(group, order, signature):
    """Classes of subgroups with the given order and element-order signature, by exhaustive pairs."""
    els = list(group.chain.iter_elements())
    n = group.degree
    subs = set()
    for a in els:
        for b in els:
            s = closure([a, b], n, cap=order)
            if s is not None and len(s) == order:
                subs.add(frozenset(s))
    subs = {s for s in subs if Counter(order_of(x) for x in s) == signature}
    classes = 0
    seen = set()
    for s in subs:
        if s in seen:
            continue
        classes += 1
        for g in els:
            gi = inv(g)
            seen.add(frozenset(compose(compose(gi, x), g) for x in s))
    return classes


SIG = {
    A4: Counter({1: 1, 2: 3, 3: 8}),
    S4: Counter({1: 1, 2: 9, 3: 8, 4: 6}),
}


@pytest.mark.parametrize("gname,tname", [("PSL(2,7)", A4), ("PSL(2,7)", S4), ("S5", A4), ("S5", S4), ("A5", A4)])
def test_census_matches_exhaustive_pairs(gname, tname):
    g = load_atlas(gname)
    expected = _brute_census(g, TYPE_ORDERS[tname], SIG[tname])
    assert census(g, tname).class_count == expected


@pytest.mark.parametrize("gname,tname", [("S6", A4), ("S6", S4), ("A6", A4), ("A6", S4), ("A7", S4), ("S7", Z3xA4)])
def test_natural_action_route_agrees_with_scan(gname, tname):
    g = load_atlas(gname)
    assert len(census_natural(g, tname)) == len(_census_scan(g, tname, 1))


def test_census_reps_are_pairwise_non_conjugate_and_of_type():
    g = load_atlas("PSL(2,7)")
    c = census(g, S4)
    assert c.class_count == 2
    for h in c.classes:
        assert iso_type(h).name == S4
        assert all(g.contains(x) for x in h.generators)
    assert are_conjugate(c.classes[0], c.classes[1], g) is None


def test_census_order_shortcut_and_strategy_errors():
    g = load_atlas("M11")
    c = census(g, AGL23)  # 432 does not divide 7920
    assert c.class_count == 0 and c.strategy == "order"
    big = load_atlas("M24")
    with pytest.raises(NoStrategyError):
        census(big, S4)


def test_conjugacy_witness_and_intersection():
    g = load_atlas("S4")
    h1 = SubgroupHandle(g, [(1, 0, 2, 3)])
    h2 = SubgroupHandle(g, [(0, 1, 3, 2)])
    w = are_conjugate(h1, h2, g)
    assert w is not None
    v4 = SubgroupHandle(g, [(1, 0, 3, 2), (2, 3, 0, 1)])
    assert is_normal_in(v4, g)
    assert not is_normal_in(h1, g)
    assert intersect(h1, v4).order() == 1
    assert are_conjugate(h1, SubgroupHandle(g, [(1, 0, 3, 2)]), g) is None
