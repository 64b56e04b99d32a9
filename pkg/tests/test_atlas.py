from __future__ import annotations

import math

import pytest

from cosetforge.atlas import (
    MATHIEU_ORDERS,
    atlas_names,
    check_m11_regular,
    group_info,
    load_atlas,
    load_example_fixture,
    order_alternating,
    order_g2,
    order_psl,
    order_psp,
    order_psu,
    verify_index_table,
)
from cosetforge.subgroups import census, intersect, iso_type
from oracles import closure, elem_order


def test_order_formulas():
    assert order_psl(2, 7) == 168 and order_psl(2, 11) == 660 and order_psl(3, 3) == 5616
    assert order_psl(3, 4) == 20160 and order_psu(3, 3) == 6048 and order_psu(4, 3) == 3265920
    assert order_psp(4, 3) == 25920 and order_psp(6, 2) == 1451520 and order_g2(3) == 4245696
    assert order_alternating(9) == math.factorial(9) // 2


@pytest.mark.parametrize("name", ["S4", "S5", "A5", "PSL(2,7)", "PSL(3,2)", "PSL(2,11)", "A6"])
def test_small_atlas_orders_match_closure(name):
    g = load_atlas(name)
    assert len(closure([tuple(x) for x in g.generators], g.degree)) == g.order()


@pytest.mark.parametrize("name,order", [(k, MATHIEU_ORDERS[k]) for k in ("M11", "M12", "M24")] + [("PSL(3,3)", 5616), ("PSp(6,2)", 1451520)])
def test_large_atlas_orders(name, order):
    assert name in atlas_names()
    g = load_atlas(name)
    assert g.order() == order
    assert group_info(name)["order"] in (order, str(order))


def test_unknown_group():
    with pytest.raises(KeyError):
        load_atlas("NoSuchGroup")


def test_index_table_rows():
    rows = verify_index_table()
    assert len(rows) == 12 and all(r["ok"] for r in rows)


def test_example_fixture_subgroup():
    fx = load_example_fixture()
    assert fx.h.order() == 24
    assert iso_type(fx.h).name == "S4"
    assert fx.group.order() == math.factorial(24) // 2
    for g in fx.candidates:
        assert elem_order(tuple(g)) == 2


def test_m11_regular_by_class():
    m12 = load_atlas("M12")
    classes = census(m12, "A4").classes
    assert [check_m11_regular(h, m12) for h in classes] == [False, False, False, True]
    m11 = m12.point_stabilizer(m12.degree - 1)
    assert m11.order() == 7920
    # the non-regular classes meet M11 nontrivially
    from cosetforge.subgroups import SubgroupHandle

    m11h = SubgroupHandle(m12, m11.generators, order=7920)
    assert [intersect(h, m11h).order() > 1 for h in classes] == [True, True, True, False]
