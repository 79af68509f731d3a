import random

import pytest

from koszul.dgcat import (default_retract, free_category, presentations_equal,
                          validate_dg_category)
from koszul.errors import IllFormedDifferential, NotSplit, UnknownObject
from koszul.exactlin import GF2, GF5, QQ
from koszul.fixtures import (a2_category, coboundary_identity_category,
                             composite_boundary_category, disk_category,
                             dual_numbers, exterior_category, group_algebra_z2,
                             one_object_k, random_dg_category, sphere_category)


def test_one_object_k_valid():
    assert validate_dg_category(one_object_k()).ok


def test_sphere_category_valid():
    for n in (-2, 0, 3):
        D = sphere_category(n)
        assert validate_dg_category(D).ok
        c = D.hom_complex("1", "2")
        assert c.space.basis == [("f", n)]
        assert c.homology_dims() == {n: 1}


def test_disk_category_cone():
    D = disk_category(1)
    assert validate_dg_category(D).ok
    assert D.hom_complex("1", "2").homology_dims() == {}


def test_discrete_zero_hom():
    D = sphere_category(0)
    assert D.hom_complex("2", "1").space.dim() == 0
    with pytest.raises(UnknownObject):
        D.hom_complex("3", "1")


def test_named_fixtures_valid():
    for build in (a2_category, dual_numbers, exterior_category,
                  coboundary_identity_category, group_algebra_z2,
                  composite_boundary_category):
        rep = validate_dg_category(build())
        assert rep.ok, rep.lines()


def test_planted_leibniz_failure():
    import koszul.exactlin as ex
    # honest acyclic free category with d(x) = b is fine
    D = free_category(QQ, ["1", "2", "3"],
                      [("x", "1", "2", -1), ("b", "1", "2", 0), ("g", "2", "3", 0)],
                      {"x": [(("b",), 1)]})
    assert validate_dg_category(D).ok
    # plant: erase the Leibniz-forced value d(g.x)
    sp = D.hom[("1", "3")]
    D.d[("1", "3")] = ex.LinearMap(sp, sp, 1, {})
    rep = validate_dg_category(D)
    assert not rep.ok
    assert any(f["law"] == "Leibniz" and f["witness"] == ("g", "x")
               for f in rep.failures)


def test_default_retract():
    D = dual_numbers()
    v = default_retract(D)
    assert v.validate().ok
    assert v.value("*", {"id": QQ.one}) == QQ.one
    assert v.value("*", {"e": QQ.one}) == QQ.zero
    Dn = disk_category(1)
    vn = default_retract(Dn)
    assert vn.functionals == {"1": {"id1": QQ.one}, "2": {"id2": QQ.one}}


def test_retract_requires_identity():
    D = one_object_k()
    D.identity["*"] = None
    with pytest.raises(NotSplit):
        default_retract(D)


def test_free_discrete():
    D = free_category(QQ, ["a", "b"], [])
    assert sorted(D.objects) == ["a", "b"]
    assert D.hom_space("a", "b").dim() == 0
    assert D.hom_space("a", "a").basis == [("1_a", 0)]


def test_free_path_count():
    D = free_category(QQ, ["1", "2", "3"],
                      [("f", "1", "2", 0), ("g", "2", "3", 0)])
    assert D.hom_space("1", "3").basis == [("g.f", 0)]
    assert validate_dg_category(D).ok


def test_free_loop_truncation():
    D = free_category(QQ, ["*"], [("x", "*", "*", -1)], bound=3)
    labs = sorted(D.hom_space("*", "*").labels)
    assert labs == ["1_*", "x", "x.x", "x.x.x"]
    t = D.truncation
    assert not t.exact_degree("*", "*", -4)
    assert t.exact_degree("*", "*", -2)
    assert t.stable_degree(-3) and not t.stable_degree(-4)
    assert validate_dg_category(D).ok


def test_free_requires_bound_on_cycles():
    with pytest.raises(ValueError):
        free_category(QQ, ["*"], [("x", "*", "*", -1)])


def test_free_illformed_differential():
    with pytest.raises(IllFormedDifferential):
        free_category(QQ, ["1", "2"], [("f", "1", "2", 0)],
                      {"f": [(("f", "f"), 1)]})
    with pytest.raises(IllFormedDifferential):
        free_category(QQ, ["1", "2"], [("f", "1", "2", 0)],
                      {"f": [(("f",), 1)]})


def test_free_differential_into_identity():
    D = free_category(QQ, ["*"], [("u", "*", "*", -1)], {"u": [((), 1)]},
                      bound=2)
    assert D.d_apply({"u": QQ.one}) == {"1_*": QQ.one}
    rep = validate_dg_category(D)
    assert rep.ok, rep.lines()


def test_random_categories_always_valid():
    rng = random.Random(11)
    for _ in range(25):
        field = rng.choice([QQ, GF2, GF5])
        D = random_dg_category(rng, field, bound=3)
        rep = validate_dg_category(D)
        assert rep.ok, rep.lines()


def test_presentations_equal():
    S = sphere_category(1)
    S2 = sphere_category(1)
    assert presentations_equal(S, S2, {})
    T = sphere_category(2)
    assert not presentations_equal(S, T, {})
