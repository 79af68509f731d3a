import random

import pytest

from koszul.barcobar import (bar_label, bar_nonreduced, bar_reduced, cobar,
                             cobar_generator_label, cobar_on_morphism,
                             coalgebra_morphism_to_mc, counit_check,
                             counit_functor, functor_chain_condition_on_generators,
                             functor_to_mc, mc_enumerate, mc_to_coalgebra_morphism,
                             mc_to_functor, MCElement, reduced_unreduced_crosscheck,
                             retract_independence, tautological_mc,
                             validate_dg_functor)
from koszul.curved import (CoalgebraMorphism, PointedCurvedCoalgebra,
                           validate_coalgebra_morphism,
                           validate_pointed_curved_coalgebra)
from koszul.dgcat import default_retract, presentations_equal, Retract, \
    validate_dg_category
from koszul.errors import TruncationTooSmall
from koszul.exactlin import GF2, GF5, QQ, vec_eq
from koszul.fixtures import (a2_category, coboundary_identity_category,
                             dual_numbers, exterior_category, group_algebra_z2,
                             one_object_k, random_dg_category, sphere_category)


def test_bar_nonreduced_point():
    D = one_object_k()
    C = bar_nonreduced(D, 2)
    assert sorted(C.space.labels) == ["[idual]".replace("ual", "")] + ["[id|id]"]
    # m2([id|id]) = -[id]
    assert C.d.entries["[id|id]"] == {"[id]": -QQ.one}
    rep = validate_pointed_curved_coalgebra(C)
    assert rep.ok, rep.lines()
    assert C.curvature == {}


def test_bar_nonreduced_sphere():
    D = sphere_category(2)
    C = bar_nonreduced(D, 3)
    assert "[f]" in C.space.labels
    assert C.d.entries.get("[f]", {}) == {}
    rep = validate_pointed_curved_coalgebra(C)
    assert rep.ok, rep.lines()


def test_bar_reduced_point_trivial():
    D = one_object_k()
    C = bar_reduced(D, default_retract(D), 3)
    assert C.space.dim() == 0


def test_bar_reduced_a2():
    D = a2_category()
    C = bar_reduced(D, default_retract(D), 3)
    labs = sorted(C.space.labels)
    assert labs == ["[f]", "[g.f]", "[gphantom]".replace("phantom", ""), "[g|f]"]
    assert C.deg("[f]") == -1 and C.deg("[g|f]") == -2
    # d([g|f]) = -[g.f]
    assert C.d.entries["[g|f]"] == {"[g.f]": -QQ.one}
    assert C.curvature == {}
    rep = validate_pointed_curved_coalgebra(C)
    assert rep.ok, rep.lines()


def test_bar_reduced_sphere_single_letter():
    D = sphere_category(1)
    C = bar_reduced(D, default_retract(D), 4)
    assert sorted(C.space.labels) == ["[f]"]
    assert C.deg("[f]") == 0
    assert C.d.entries.get("[f]", {}) == {}
    assert C.coproduct == {}
    assert C.curvature == {}


def test_bar_curvature_group_algebra():
    # u^2 = id makes h2 nonzero: h([u|u]) = -v(u.u) = -1
    D = group_algebra_z2(QQ)
    C = bar_reduced(D, default_retract(D), 3)
    assert C.curvature == {"[u|u]": -QQ.one}
    rep = validate_pointed_curved_coalgebra(C)
    assert rep.ok, rep.lines()


def test_bar_curvature_coboundary_identity():
    # d(u) = id makes h1 nonzero: h([u]) = -v(du) = -1
    D = coboundary_identity_category(QQ)
    C = bar_reduced(D, default_retract(D), 3)
    assert C.curvature.get("[u]") == -QQ.one
    rep = validate_pointed_curved_coalgebra(C)
    assert rep.ok, rep.lines()


def test_bar_d_squared_property_random():
    rng = random.Random(23)
    for _ in range(12):
        field = rng.choice([QQ, GF2, GF5])
        D = random_dg_category(rng, field, bound=3)
        C = bar_nonreduced(D, 3)
        dd = C.d.compose(C.d)
        assert dd.is_zero()
        if all(D.identity.get(s) for s in D.objects):
            Cr = bar_reduced(D, default_retract(D), 3)
            rep = validate_pointed_curved_coalgebra(Cr)
            assert rep.ok, rep.lines()


def test_reduced_unreduced_crosscheck_fixtures():
    for build in (one_object_k, dual_numbers, exterior_category,
                  group_algebra_z2, coboundary_identity_category, a2_category):
        D = build(QQ)
        rep = reduced_unreduced_crosscheck(D, default_retract(D), 3)
        assert rep.ok, (build.__name__, rep.lines())


def test_reduced_unreduced_crosscheck_nondefault_retract():
    D = dual_numbers(QQ)
    w = Retract(D, {"*": {"id": QQ.one, "e": QQ.one}})
    rep = reduced_unreduced_crosscheck(D, w, 3)
    assert rep.ok, rep.lines()


def test_retract_independence_trivial():
    D = dual_numbers(QQ)
    v = default_retract(D)
    fwd, bwd, rep = retract_independence(D, v, v, 3)
    assert rep.ok, rep.lines()
    assert fwd.b == {}


def test_retract_independence_nontrivial():
    D = dual_numbers(QQ)
    v = default_retract(D)
    w = Retract(D, {"*": {"id": QQ.one, "e": QQ.one}})
    fwd, bwd, rep = retract_independence(D, v, w, 3)
    assert rep.ok, rep.lines()
    assert fwd.b == {"[e]": -QQ.one}  # (v - w)(e) = -1


def test_cobar_zero_coalgebra():
    C = PointedCurvedCoalgebra(QQ, [], [], {}, {}, {}, {})
    O = cobar(C, 3)
    assert O.objects == ()


def test_cobar_coradical_only():
    C = PointedCurvedCoalgebra(QQ, ["a", "b"], [], {}, {}, {}, {})
    O = cobar(C, 3)
    assert sorted(O.objects) == ["a", "b"]
    assert O.hom_space("a", "b").dim() == 0
    assert O.hom_space("a", "a").dim() == 1


def test_cobar_bar_sphere_on_the_nose():
    for n in (0, 1, 2):
        D = sphere_category(n, QQ)
        BD = bar_reduced(D, default_retract(D), 3)
        OBD = cobar(BD, 3)
        assert presentations_equal(
            OBD, D, {"<[f]>": "f", "1_1": "id1", "1_2": "id2"})


def test_cobar_squares_zero_on_group_algebra_bar():
    # hand-checked: d<[u|u]> = -1 + <[u]>.<[u]>
    D = group_algebra_z2(QQ)
    BD = bar_reduced(D, default_retract(D), 3)
    O = cobar(BD, 3)
    g2 = cobar_generator_label("[u|u]")
    g1 = cobar_generator_label("[u]")
    d2 = O.d_apply({g2: QQ.one})
    assert d2 == {"1_*": -QQ.one, f"{g1}.{g1}": QQ.one}
    rep = validate_dg_category(O)
    assert rep.ok, rep.lines()


def test_cobar_squares_zero_random():
    rng = random.Random(31)
    for _ in range(10):
        field = rng.choice([QQ, GF2, GF5])
        D = random_dg_category(rng, field, bound=2)
        if not all(D.identity.get(s) for s in D.objects):
            continue
        BD = bar_reduced(D, default_retract(D), 2)
        O = cobar(BD, 3)
        rep = validate_dg_category(O)
        assert rep.ok, rep.lines()


def test_cobar_on_identity_morphism():
    D = group_algebra_z2(GF2)
    BD = bar_reduced(D, default_retract(D), 3)
    ident = CoalgebraMorphism.identity(BD)
    F = cobar_on_morphism(ident, 3)
    rep = validate_dg_functor(F)
    assert rep.ok, rep.lines()
    for lab, vec in F.entries.items():
        assert vec == {lab: GF2.one} or (not vec and not F.A.hom_space(
            *F.A.comp_of[lab]).dim())


def test_counit_point():
    out = counit_check(one_object_k(QQ), 2, (-3, 0))
    assert out["all_equal"] and out["counit_is_dg"]
    assert out["stabilized"]
    assert out["right"][("*", "*")] == {0: 1}


def test_counit_a2():
    out = counit_check(a2_category(QQ), 4, (-3, 0))
    assert out["counit_is_dg"]
    assert out["all_equal"], out
    assert out["left"][("1", "3")] == {0: 1}


def test_counit_sphere_degenerate():
    # bar and cobar degenerate: complexes equal on the nose
    D = sphere_category(1, QQ)
    out = counit_check(D, 3, (-3, 3))
    assert out["all_equal"] and out["counit_is_dg"]


def test_counit_exterior():
    out = counit_check(exterior_category(QQ), 4, (-3, 0))
    assert out["all_equal"] and out["counit_is_dg"], out
    assert out["stabilized"]


def test_mc_set_coradical_only():
    # C = k[S]: MC set = object maps only
    C = PointedCurvedCoalgebra(GF2, ["a", "b"], [], {}, {}, {}, {})
    D = a2_category(GF2)
    sols = mc_enumerate(C, D)
    assert len(sols) == 9
    assert all(not s.xi for s in sols)


def test_mc_planted_curvature_flips_check():
    # a valid MC element against an uncurved C fails once h is planted
    C = PointedCurvedCoalgebra(GF2, ["*"], [("c", -2)], {"c": ("*", "*")},
                               {}, {}, {})
    D = one_object_k(GF2)
    elem = MCElement(C, D, {"*": "*"}, {})
    assert elem.check()
    C2 = PointedCurvedCoalgebra(GF2, ["*"], [("c", -2)], {"c": ("*", "*")},
                                {}, {}, {"c": 1})
    elem2 = MCElement(C2, D, {"*": "*"}, {})
    assert not elem2.check()


def _enumerate_coalgebra_morphisms(C, D, bound):
    """Brute force Hom(C, B D) over a finite field."""
    import itertools
    from koszul.barcobar import bar_reduced
    field = C.field
    BD = bar_reduced(D, default_retract(D), bound)
    out = []
    elems = list(field.elements())
    for objmap in itertools.product(D.objects, repeat=len(C.objects)):
        om = dict(zip(C.objects, objmap))
        slots = []
        for c in sorted(C.space.labels):
            s, t = C.comp_of[c]
            for lab in BD.space.labels:
                if BD.comp_of[lab] == (om[s], om[t]) and BD.deg(lab) == C.deg(c):
                    slots.append(("f", c, lab))
            if C.deg(c) == -1 and om[s] == om[t]:
                slots.append(("a", c, None))
        for coeffs in itertools.product(elems, repeat=len(slots)):
            entries = {}
            a = {}
            for (kind, c, lab), v in zip(slots, coeffs):
                if field.is_zero(v):
                    continue
                if kind == "f":
                    entries.setdefault(c, {})[lab] = v
                else:
                    a[c] = v
            m = CoalgebraMorphism(C, BD, om, entries, a)
            if validate_coalgebra_morphism(m).ok:
                out.append(m)
    return out


def _enumerate_functors(C, D):
    """Brute force Hom(Omega C, D) = generator assignments passing the
    chain condition (independent of the MC formula evaluator)."""
    import itertools
    field = C.field
    elems = list(field.elements())
    out = []
    for objmap in itertools.product(D.objects, repeat=len(C.objects)):
        om = dict(zip(C.objects, objmap))
        slots = []
        for c in sorted(C.space.labels):
            s, t = C.comp_of[c]
            hom = D.hom_space(om[s], om[t])
            for lab in hom.in_degree(C.deg(c) + 1):
                slots.append((c, lab))
        for coeffs in itertools.product(elems, repeat=len(slots)):
            xi = {}
            for (c, lab), v in zip(slots, coeffs):
                if not field.is_zero(v):
                    xi.setdefault(c, {})[lab] = v
            cand = MCElement(C, D, om, xi)
            if functor_chain_condition_on_generators(cand):
                out.append(cand)
    return out


@pytest.mark.parametrize("cname", ["bar_s1", "suspension_curved"])
def test_adjunction_triple_bijection(cname):
    field = GF2
    if cname == "bar_s1":
        D0 = sphere_category(1, field)
        C = bar_reduced(D0, default_retract(D0), 2)
    else:
        C = PointedCurvedCoalgebra(field, ["*"], [("c", -2)],
                                   {"c": ("*", "*")}, {}, {}, {"c": 1})
    D = sphere_category(1, field)
    mc = mc_enumerate(C, D)
    functors = _enumerate_functors(C, D)
    morphisms = _enumerate_coalgebra_morphisms(C, D, max(C.conilpotence_degree(), 2))
    assert len(mc) == len(functors) == len(morphisms)
    # round trips: psi then psi^{-1} is the identity on MC elements
    for elem in mc:
        m = mc_to_coalgebra_morphism(elem, max(C.conilpotence_degree(), 2))
        assert validate_coalgebra_morphism(m).ok
        back = coalgebra_morphism_to_mc(m, D)
        assert back.object_map == elem.object_map and back.xi == elem.xi
        F = mc_to_functor(elem, 3)
        rep = validate_dg_functor(F)
        assert rep.ok, rep.lines()
        again = functor_to_mc(F, C)
        assert again.xi == elem.xi


def test_tautological_mc():
    D0 = sphere_category(1, GF2)
    C = bar_reduced(D0, default_retract(D0), 2)
    elem, OC = tautological_mc(C, 3)
    assert elem.check()
    assert functor_chain_condition_on_generators(elem)


def test_psi_requires_enough_length():
    D = a2_category(QQ)
    C = bar_reduced(D, default_retract(D), 3)
    elem, _ = tautological_mc(C, 3)
    with pytest.raises(TruncationTooSmall):
        mc_to_coalgebra_morphism(elem, 1)
