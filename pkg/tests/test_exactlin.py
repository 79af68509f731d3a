import random

import pytest

from koszul.errors import FieldMismatch, NotAComplex
from koszul.exactlin import (
    GF2, GF5, QQ, FiniteComplex, GradedSpace, LinearMap, kernel_and_rank,
    koszul_tensor, member_of_span, solve, vec_eq,
)


def test_zero_map_kernel():
    V = GradedSpace(QQ, [("x", 0), ("y", 0)])
    z = LinearMap.zero(V, V, 1)
    kernel, rank = kernel_and_rank(z, 0)
    assert rank == 0 and len(kernel) == 2


def test_identity_kernel():
    V = GradedSpace(QQ, [("a", 1), ("b", 1), ("c", 1)])
    kernel, rank = kernel_and_rank(LinearMap.identity(V), 1)
    assert rank == 3 and kernel == []


def test_f2_elimination_by_hand():
    # x -> x+y, y -> x+y over F_2: kernel spanned by x+y, rank 1
    V = GradedSpace(GF2, [("x", 0), ("y", 0)])
    m = LinearMap(V, V, 0, {"x": {"x": 1, "y": 1}, "y": {"x": 1, "y": 1}})
    kernel, rank = kernel_and_rank(m, 0)
    assert rank == 1
    assert kernel == [{"y": 1, "x": 1}] or kernel == [{"x": 1, "y": 1}]


def test_rank_nullity_random_sparse():
    rng = random.Random(7)
    for _ in range(30):
        n = rng.randrange(1, 6)
        field = rng.choice([QQ, GF2, GF5])
        V = GradedSpace(field, [(f"v{i}", 0) for i in range(n)])
        entries = {}
        for i in range(n):
            col = {}
            for j in range(n):
                if rng.random() < 0.4:
                    col[f"v{j}"] = field.of(rng.randrange(-3, 4))
            entries[f"v{i}"] = col
        m = LinearMap(V, V, 0, entries)
        kernel, rank = kernel_and_rank(m, 0)
        assert rank + len(kernel) == n
        for v in kernel:
            assert all(field.is_zero(c) for c in m.apply(v).values())


def test_mixed_fields_rejected():
    V = GradedSpace(QQ, [("x", 0)])
    W = GradedSpace(GF2, [("x", 0)])
    with pytest.raises(FieldMismatch):
        LinearMap.identity(V).compose(LinearMap.identity(W))


def test_homology_point():
    V = GradedSpace(QQ, [("pt", 0)])
    c = FiniteComplex(V, LinearMap.zero(V, V, 1))
    assert c.homology_dims() == {0: 1}


def test_homology_acyclic_cone():
    V = GradedSpace(QQ, [("a", 0), ("b", 1)])
    d = LinearMap(V, V, 1, {"a": {"b": QQ.one}})
    c = FiniteComplex(V, d)
    assert c.homology_dims() == {}


def test_homology_interval():
    # chains of the 1-simplex: vertices in degree 0, edge in degree -1
    V = GradedSpace(QQ, [("v0", 0), ("v1", 0), ("e", -1)])
    d = LinearMap(V, V, 1, {"e": {"v1": QQ.one, "v0": -QQ.one}})
    c = FiniteComplex(V, d)
    assert c.homology_dims() == {0: 1}


def test_not_a_complex_witness():
    V = GradedSpace(QQ, [("a", 0), ("b", 1), ("c", 2)])
    d = LinearMap(V, V, 1, {"a": {"b": QQ.one}, "b": {"c": QQ.one}})
    with pytest.raises(NotAComplex) as exc:
        FiniteComplex(V, d)
    assert exc.value.witness == "a"


def test_koszul_tensor_identity():
    V = GradedSpace(QQ, [("x", 0), ("y", 1)])
    i = LinearMap.identity(V)
    t = koszul_tensor(i, i)
    assert t.equals(LinearMap.identity(t.source))


def test_koszul_tensor_sign_by_hand():
    # f = id (degree 0), g = d (degree 1) on x(x)y with |x| = 1 gives -x(x)dy
    V = GradedSpace(QQ, [("x", 1), ("y", 0), ("dy", 1)])
    f = LinearMap.identity(V)
    g = LinearMap(V, V, 1, {"y": {"dy": QQ.one}})
    t = koszul_tensor(f, g)
    assert t.apply({"x(x)y": QQ.one}) == {"x(x)dy": -QQ.one}


def test_koszul_tensor_interchange_random():
    # (f (x) g) o (f' (x) g') = (-1)^(|g||f'|) (f o f') (x) (g o g')
    rng = random.Random(3)
    field = GF5
    for _ in range(20):
        degs = [rng.randrange(-2, 3) for _ in range(4)]
        V = GradedSpace(field, [(f"a{i}", degs[i % 4]) for i in range(4)])

        def rand_map(dg):
            entries = {}
            for a in V.labels:
                col = {}
                for b in V.labels:
                    if V.degree[b] == V.degree[a] + dg and rng.random() < 0.5:
                        col[b] = rng.randrange(1, 5)
                if col:
                    entries[a] = col
            return LinearMap(V, V, dg, entries)

        df, dg_, dfp, dgp = (rng.randrange(0, 2) for _ in range(4))
        f, g, fp, gp = rand_map(df), rand_map(dg_), rand_map(dfp), rand_map(dgp)
        lhs = koszul_tensor(f, g).compose(koszul_tensor(fp, gp))
        rhs = koszul_tensor(f.compose(fp), g.compose(gp))
        if (dg_ * dfp) % 2 == 1:
            rhs = rhs.neg()
        assert lhs.equals(rhs)


def test_koszul_tensor_associative():
    field = GF2
    V = GradedSpace(field, [("x", 1), ("y", 2)])
    d = LinearMap(V, V, 1, {"x": {"y": 1}})
    lhs = koszul_tensor(koszul_tensor(d, d), d)
    rhs = koszul_tensor(d, koszul_tensor(d, d))
    # compare through the canonical relabeling (a(x)b)(x)c <-> a(x)(b(x)c)
    for a in lhs.source.labels:
        la = lhs.apply({a: field.one})
        ra = rhs.apply({a: field.one})
        assert la == ra  # labels coincide because combine is flat text


def test_solve_and_span():
    V = GradedSpace(QQ, [("x", 0), ("y", 0), ("z", 1)])
    m = LinearMap(V, V, 1, {"x": {"z": QQ.one}, "y": {"z": QQ.of(2)}})
    x = solve(m, 0, {"z": QQ.of(4)})
    assert x is not None and vec_eq(QQ, m.apply(x), {"z": QQ.of(4)})
    assert member_of_span(QQ, [{"x": QQ.one, "y": QQ.one}], {"x": QQ.of(2), "y": QQ.of(2)})
    assert not member_of_span(QQ, [{"x": QQ.one}], {"y": QQ.one})
