import itertools

import pytest
from hypothesis import given, strategies as st

from padicfact.errors import ParityError
from padicfact.signs import (
    WeightTriple,
    classify2,
    classify3,
    forced_vanishing,
    global_sign,
    is_weakly_panchishkin,
    panchishkin_defect,
    selfdual_table,
    signs_record2,
    signs_record3,
)


@pytest.mark.parametrize("w,region,c", [((2, 3, 3), "bal", 3), ((6, 2, 2), "f", 4), ((2, 1, 1), "f", 1)])
def test_classify3_examples(w, region, c):
    cl = classify3(WeightTriple(*w))
    assert (cl.region, cl.center) == (region, c)


def test_parity_rejected():
    with pytest.raises(ParityError):
        classify3(WeightTriple(2, 2, 1))
    with pytest.raises(ValueError):
        WeightTriple(0, 2, 2)


@pytest.mark.parametrize("k,l,region", [(6, 2, "f"), (2, 2, "ad"), (4, 2, "f")])
def test_classify2_examples(k, l, region):
    assert classify2(k, l) == region


def test_global_sign_examples():
    assert global_sign("bal", 1) == -1
    assert global_sign("f", 1) == 1
    assert global_sign("bal", -1) == 1
    for x in (1, -1):
        for r in "fgh":
            assert global_sign("bal", x) == -global_sign(r, x)


def test_forced_vanishing():
    assert forced_vanishing(1) == ["bal"]
    assert forced_vanishing(-1) == ["f", "g", "h"]
    # the vanishing family is exactly the one whose sign is -1
    for fp in (1, -1):
        for r in ("bal", "f", "g", "h"):
            assert (r in forced_vanishing(fp)) == (global_sign(r, fp) == -1)
    with pytest.raises(ValueError):
        forced_vanishing(0)


def test_partition_grid():
    seen = {"bal": 0, "f": 0, "g": 0, "h": 0}
    for k, l, m in itertools.product(range(1, 41), repeat=3):
        if (k + l + m) % 2:
            continue
        preds = {
            "bal": k + l + m > 2 * max(k, l, m),
            "f": k + l + m <= 2 * k,
            "g": k + l + m <= 2 * l,
            "h": k + l + m <= 2 * m,
        }
        assert sum(preds.values()) == 1
        region = classify3(WeightTriple(k, l, m)).region
        assert preds[region]
        seen[region] += 1
    assert all(seen.values())


def test_selfdual_table():
    assert selfdual_table("ad", 1) == (-1, -1)
    assert selfdual_table("f", -1) == (1, -1)
    assert selfdual_table("ad", -1) == (-1, 1)
    for region in ("ad", "f"):
        for eps in (1, -1):
            triple, adj = selfdual_table(region, eps)
            assert triple == adj * eps


def test_defect_examples():
    assert panchishkin_defect(4, 4) == 0 and is_weakly_panchishkin(4, 4)
    assert panchishkin_defect(3, 4) == 1 and not is_weakly_panchishkin(3, 4)
    assert panchishkin_defect(0, 0) == 0
    with pytest.raises(ValueError):
        panchishkin_defect(-1, 0)


small = st.integers(0, 50)


@given(small, small, small)
def test_defect_metric(a, b, c):
    assert panchishkin_defect(a, b) == panchishkin_defect(b, a)
    assert panchishkin_defect(a, c) <= panchishkin_defect(a, b) + panchishkin_defect(b, c)


def test_records():
    r = signs_record3(WeightTriple(2, 3, 3), 1)
    assert r["region"] == "bal" and r["epsilon"] == -1 and r["vanishing"] == ["bal"]
    r = signs_record2(2, 2, -1)
    assert (r["eps_triple"], r["eps_adjoint"]) == (-1, 1)
