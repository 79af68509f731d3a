import random

import pytest

from koszul.curved import (AlgebraMorphism, CoalgebraMorphism, CurvedAlgebra,
                           twist_by_degree_one, untwist_morphism,
                           PointedCurvedCoalgebra, compose_algebra_morphisms,
                           compose_coalgebra_morphisms, mc_check, mc_enumerate,
                           mc_transfer_to_uncurved, mc_value, to_dg_map_chain_check,
                           uncurve_algebra, undualize, validate_algebra_morphism,
                           validate_coalgebra_morphism, validate_curved_algebra,
                           validate_pointed_curved_coalgebra)
from koszul.exactlin import GF2, GF5, QQ, vec_eq


def curved_dual_numbers(field=QQ):
    """A = k[eps]/eps^2 with |eps| = 2, d = 0, h = eps (valid: commutative)."""
    return CurvedAlgebra(
        field, ["*"], [("1", 0), ("eps", 2)], {"1": ("*", "*"), "eps": ("*", "*")},
        {"*": "1"}, {("eps", "eps"): {}}, {}, {"eps": field.one})


def cone_endos(field=QQ):
    """End(cone(id)) as a one-object dg algebra: basis 1, u(-1), e(0), de(1)
    with d(u) = 1 - ... realized concretely on the cone with basis x (deg 0),
    y (deg 1), dx = y:
        u: y -> x,  e: x -> x (projection killing y),  w = d(e): x -> y.
    """
    one = field.one
    neg = field.neg(one)
    basis = [("1", 0), ("u", -1), ("e", 0), ("w", 1)]
    comp = {b: ("*", "*") for b, _ in basis}
    # multiplication table computed from the concrete endomorphisms:
    #   e o e = e, u o u = 0, u o e = 0, e o u = u, w o e = w, e o w = 0,
    #   u o w = e, w o u = 1 - e, w o w = 0
    prod = {
        ("e", "e"): {"e": one}, ("u", "u"): {}, ("u", "e"): {},
        ("e", "u"): {"u": one}, ("w", "e"): {"w": one}, ("e", "w"): {},
        ("u", "w"): {"e": one}, ("w", "u"): {"1": one, "e": neg},
        ("w", "w"): {},
    }
    # d(u) = d o u + u o d = 1 on the cone; d(e) = w; d(w) = 0
    d = {"u": {"1": one}, "e": {"w": one}}
    return CurvedAlgebra(field, ["*"], basis, comp, {"*": "1"}, prod, d, {})


def suspension_coalgebra(field=QQ, curved=True):
    """Primitive coalgebra: one object, c in degree -2 with zero coproduct
    and differential, curvature h(c) = 1 when curved."""
    return PointedCurvedCoalgebra(
        field, ["*"], [("c", -2)], {"c": ("*", "*")}, {}, {},
        {"c": field.one} if curved else {})


def word_coalgebra(field=QQ):
    """Deconcatenation coalgebra on words x, xx of a degree -1 letter."""
    return PointedCurvedCoalgebra(
        field, ["*"], [("x", -1), ("xx", -2)],
        {"x": ("*", "*"), "xx": ("*", "*")},
        {"xx": [(("x", "x"), field.one)]}, {}, {})


def test_dg_algebra_valid():
    A = CurvedAlgebra(QQ, ["*"], [("1", 0)], {"1": ("*", "*")}, {"*": "1"},
                      {}, {}, {})
    assert validate_curved_algebra(A).ok


def test_curved_dual_numbers_valid():
    rep = validate_curved_algebra(curved_dual_numbers())
    assert rep.ok, rep.lines()


def test_planted_unit_differential_invalid():
    field = QQ
    A = CurvedAlgebra(
        field, ["*"], [("1", 0), ("eps", 2), ("z", 1)],
        {"1": ("*", "*"), "eps": ("*", "*"), "z": ("*", "*")}, {"*": "1"},
        {("eps", "eps"): {}, ("z", "z"): {}, ("z", "eps"): {}, ("eps", "z"): {}},
        {"1": {"z": field.one}}, {"eps": field.one})
    rep = validate_curved_algebra(A)
    assert not rep.ok
    assert any("Leibniz" in f["law"] or "d^2" in f["law"] for f in rep.failures)
    # direct and uncurving verdicts must agree even on invalid input
    assert not any(f["law"] == "verdict agreement" for f in rep.failures)


def test_cone_endos_valid_dg():
    rep = validate_curved_algebra(cone_endos())
    assert rep.ok, rep.lines()


def test_uncurve_forced_cancellation():
    # A = k uncurved: d_H(eta) = -eta^2 and d_H^2(eta) = 0 at bound 3
    A = CurvedAlgebra(QQ, ["*"], [("1", 0)], {"1": ("*", "*")}, {"*": "1"},
                      {}, {}, {})
    H = uncurve_algebra(A, 3)
    eta = (("eta", "*"),)
    dx = H.d({eta: QQ.one})
    assert dx == {(("eta", "*"), ("eta", "*")): -QQ.one}
    assert H.eta.is_zero(H.d(dx))
    assert H.d_squared_on_generators_ok()


def test_uncurve_restricted_to_A():
    # d_H on A-letters has eta count <= 1
    A = curved_dual_numbers()
    H = uncurve_algebra(A, 2)
    out = H.d({(("a", "eps"),): QQ.one})
    assert all(H.eta.eta_count(w) <= 1 for w in out)


def test_mc_dual_numbers_empty():
    # h = eps: the MC equation reads eps = 0, so no MC elements
    A = curved_dual_numbers(GF2)
    assert mc_enumerate(A) == []
    assert mc_value(A, {}) == {"eps": 1}


def test_mc_no_a_plus_eta_at_bound2():
    A = curved_dual_numbers(GF2)
    H = uncurve_algebra(A, 2)
    sols = H.enumerate_mc_degree1()
    # 0 is MC in HA (dg algebra) but no solution contains eta
    for x in sols:
        assert all(all(it[0] != "eta" for it in w) for w in x)


def test_mc_trivial():
    A = CurvedAlgebra(QQ, ["*"], [("1", 0)], {"1": ("*", "*")}, {"*": "1"},
                      {}, {}, {})
    assert mc_check(A, {})


def test_mc_cone_endos_exhaustive():
    # over F_2, all 2^(dim A^1) candidates; du = 1 so MC reads 1 + w-part...
    A = cone_endos(GF2)
    sols = mc_enumerate(A)
    # independent hand count: candidates a = c.w with d(w)=0, w^2=0:
    # MC reads d(a) + a^2 = 0 -> c d(w) = 0, always true; d(w) = d^2(e) = 0
    assert sorted(map(str, sols)) == sorted(map(str, [{}, {"w": 1}]))


def test_mc_transfer_agreement_exhaustive_f2():
    for A in (curved_dual_numbers(GF2), cone_endos(GF2)):
        labels = A.labels_in_degree(1)
        import itertools
        for coeffs in itertools.product([0, 1], repeat=len(labels)):
            a = {l: c for l, c in zip(labels, coeffs) if c}
            direct, via_uncurving = mc_transfer_to_uncurved(A, a)
            assert direct == via_uncurving


def test_dualize_roundtrip_suspension():
    C = suspension_coalgebra()
    A = C.dualize()
    rep = validate_curved_algebra(A)
    assert rep.ok, rep.lines()
    C2 = undualize(A)
    assert C2.space.basis == C.space.basis
    assert C2.curvature == C.curvature
    assert C2.coproduct == C.coproduct


def test_dualize_roundtrip_word_coalgebra():
    C = word_coalgebra()
    rep = validate_pointed_curved_coalgebra(C)
    assert rep.ok, rep.lines()
    A = C.dualize()
    # product of duals: x* x* = sign * (xx)*; |x| = -1 so sign = -1
    assert A.mul_basis("x", "x") == {"xx": -QQ.one}
    C2 = undualize(A)
    assert C2.coproduct == C.coproduct
    assert C2.space.basis == C.space.basis


def test_coradical_only_dual():
    C = PointedCurvedCoalgebra(QQ, ["a", "b"], [], {}, {}, {}, {})
    A = C.dualize()
    assert validate_curved_algebra(A).ok
    assert A.mul_basis("e(a)", "e(a)") == {"e(a)": QQ.one}
    assert A.mul_basis("e(a)", "e(b)") == {}
    assert A.h == {}


def test_validate_coalgebra_curved():
    rep = validate_pointed_curved_coalgebra(suspension_coalgebra())
    assert rep.ok, rep.lines()


def test_invalid_coalgebra_noncentral_curvature():
    # curvature on a with delta(w) = a (x) b: dual bracket [a*, x] nonzero
    field = QQ
    C = PointedCurvedCoalgebra(
        field, ["*"],
        [("a", -2), ("b", -1), ("w", -3)],
        {"a": ("*", "*"), "b": ("*", "*"), "w": ("*", "*")},
        {"w": [(("a", "b"), field.one)]}, {}, {"a": field.one})
    rep = validate_pointed_curved_coalgebra(C)
    assert not rep.ok
    assert any("d^2" in f["law"] for f in rep.failures)
    assert not any(f["law"] == "dual:verdict agreement" for f in rep.failures)


def test_dual_curvature_sign_pinned():
    """The coalgebra with d(v) = x, d(w) = v, reduced coproduct of w equal
    to c (x) x and curvature on c is valid (its cobar squares to zero), and
    validity forces the dual curvature element to be -c*: the axiom reads
    d^2(x*) = -w* = [h, x*] with c* x* = w*."""
    field = QQ
    C = PointedCurvedCoalgebra(
        field, ["*"],
        [("x", -1), ("c", -2), ("v", -2), ("w", -3)],
        {k: ("*", "*") for k in ("x", "c", "v", "w")},
        {"w": [(("c", "x"), field.one)]},
        {"v": {"x": field.one}, "w": {"v": field.one}},
        {"c": field.one})
    rep = validate_pointed_curved_coalgebra(C)
    assert rep.ok, rep.lines()
    A = C.dualize()
    assert A.h == {"c": -field.one}
    assert undualize(A).curvature == {"c": field.one}
    from koszul.barcobar import cobar
    from koszul.dgcat import validate_dg_category
    assert validate_dg_category(cobar(C, 3)).ok


def test_conilpotence_degree():
    assert suspension_coalgebra().conilpotence_degree() == 1
    assert word_coalgebra().conilpotence_degree() == 2


def test_identity_morphism_valid_and_unit():
    A = curved_dual_numbers()
    i = AlgebraMorphism.identity(A)
    assert validate_algebra_morphism(i).ok
    m = compose_algebra_morphisms(i, i)
    assert m.entries == i.entries and m.b == i.b


def test_morphism_decomposition():
    # (f, b) = (id, b) o (f, 0) recomposes to (f, b)
    field = GF5
    A = curved_dual_numbers(field)
    # twist of A by a degree-1 element: here A^1 = 0 so use a bigger algebra
    B = cone_endos(field)
    # (id, b): B -> twist of B; build the twisted target
    b = {"w": field.one}
    Btw = twist_by_degree_one(B, b)
    assert validate_curved_algebra(Btw).ok
    m_idb = untwist_morphism(Btw, B, b)
    rep = validate_algebra_morphism(m_idb)
    assert rep.ok, rep.lines()
    # decomposition: (f, b) = (id, b) o (f, 0) with f the identity here
    m_f0 = AlgebraMorphism.identity(Btw)
    recomposed = compose_algebra_morphisms(m_idb, m_f0)
    assert recomposed.b == m_idb.b
    assert recomposed.entries == m_idb.entries


def test_uncurving_maps_equivalence_random():
    # validity of (f, b) <=> chain map at eta count 2, on random candidates
    rng = random.Random(5)
    field = GF2
    B = cone_endos(field)
    A = curved_dual_numbers(field)
    for _ in range(40):
        source = rng.choice([A, B])
        target = rng.choice([A, B])
        entries = {}
        for lab in source.space.labels:
            vec = {}
            for out in target.space.labels:
                if target.deg(out) == source.deg(lab) and rng.random() < 0.5:
                    vec[out] = 1
            entries[lab] = vec
        b = {}
        for out in target.labels_in_degree(1):
            if rng.random() < 0.5:
                b[out] = 1
        m = AlgebraMorphism(source, target, {"*": "*"}, entries, b)
        valid = validate_algebra_morphism(m).ok
        chain = to_dg_map_chain_check(m).ok
        if valid:
            assert chain
        # multiplicativity is not implied by the chain condition, so only
        # compare the curved conditions when the candidate is an algebra map
        sub = validate_algebra_morphism(m)
        structural = [f for f in sub.failures
                      if f["law"] in ("multiplicative", "units preserved",
                                       "component", "degree", "object map")]
        if not structural:
            assert chain == sub.ok


def test_coalgebra_morphism_identity():
    C = word_coalgebra()
    i = CoalgebraMorphism.identity(C)
    rep = validate_coalgebra_morphism(i)
    assert rep.ok, rep.lines()
    m = compose_coalgebra_morphisms(i, i)
    assert m.entries == i.entries and m.a == i.a
