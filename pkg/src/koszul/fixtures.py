"""Standard small dg categories and randomized generators used across the
test and acceptance suites.

All randomized generators take an explicit random.Random instance so runs
are reproducible from a seed.
"""

from __future__ import annotations

import random

from .dgcat import DgCategory, free_category
from .exactlin import GF2, QQ


def one_object_k(field=QQ):
    """The dg category k: one object, hom = k.id."""
    return DgCategory(field, ["*"], {("*", "*"): [("id", 0)]}, {"*": "id"}, {}, {})


def sphere_category(n, field=QQ):
    """S(n): objects 1,2 with Hom(1,2) = k in degree n and only identities
    elsewhere."""
    return DgCategory(
        field, ["1", "2"],
        {("1", "1"): [("id1", 0)], ("2", "2"): [("id2", 0)],
         ("1", "2"): [("f", n)]},
        {"1": "id1", "2": "id2"}, {}, {})


def disk_category(n, field=QQ):
    """D(n): like S(n) but Hom(1,2) is the acyclic cone with d(y) = x."""
    return DgCategory(
        field, ["1", "2"],
        {("1", "1"): [("id1", 0)], ("2", "2"): [("id2", 0)],
         ("1", "2"): [("x", n), ("y", n - 1)]},
        {"1": "id1", "2": "id2"},
        {("1", "2"): {"y": {"x": field.one}}}, {})


def a2_category(field=QQ):
    """The path category of 1 -> 2 -> 3: arrows f, g and composite g.f."""
    return free_category(field, ["1", "2", "3"],
                         [("f", "1", "2", 0), ("g", "2", "3", 0)])


def dual_numbers(field=QQ, degree=0):
    """k[e]/e^2 with e in the given degree and zero differential."""
    return DgCategory(
        field, ["*"], {("*", "*"): [("id", 0), ("e", degree)]}, {"*": "id"},
        {},
        {("*", "*", "*"): {("e", "e"): {}}})


def exterior_category(field=QQ):
    """One object with a square-zero degree -1 endomorphism x, dx = 0."""
    return DgCategory(
        field, ["*"], {("*", "*"): [("id", 0), ("x", -1)]}, {"*": "id"},
        {},
        {("*", "*", "*"): {("x", "x"): {}}})


def coboundary_identity_category(field=QQ):
    """One object, morphisms id and u with |u| = -1, u^2 = 0 and d(u) = id.

    The bar construction of this category is genuinely curved: the unit
    coefficient of d(u) feeds the curvature functional.
    """
    return DgCategory(
        field, ["*"], {("*", "*"): [("id", 0), ("u", -1)]}, {"*": "id"},
        {("*", "*"): {"u": {"id": field.one}}},
        {("*", "*", "*"): {("u", "u"): {}}})


def group_algebra_z2(field=QQ):
    """k[Z/2]: one object, morphisms id and u with u^2 = id, d = 0.

    Non-identity basis elements compose into the identity, so the bar
    construction has nonzero curvature h_2."""
    return DgCategory(
        field, ["*"], {("*", "*"): [("id", 0), ("u", 0)]}, {"*": "id"},
        {},
        {("*", "*", "*"): {("u", "u"): {"id": field.one}}})


def composite_boundary_category(field=GF2):
    """Two objects with f: 1 -> 2, g: 2 -> 1 and a degree -1 endomorphism h
    of 1 with d(h) = g o f; closed up finitely with h^2 = ch = hc = c^2 = 0
    where c = g o f.
    """
    one = field.one
    basis = {
        ("1", "1"): [("id1", 0), ("h", -1), ("c", 0)],
        ("1", "2"): [("f", 0), ("fh", -1), ("fc", 0)],
        ("2", "1"): [("g", 0), ("hg", -1), ("cg", 0)],
        ("2", "2"): [("id2", 0), ("n", 0), ("m", -1), ("ncg", 0)],
    }
    # normal forms: c = g.f, fh = f.h, fc = f.c, hg = h.g, cg = c.g,
    # n = f.g, m = f.h.g, ncg = f.c.g = n.n; every other word vanishes
    d = {
        ("1", "1"): {"h": {"c": one}},
        ("1", "2"): {"fh": {"fc": one}},
        ("2", "1"): {"hg": {"cg": one}},
        ("2", "2"): {"m": {"ncg": one}},
    }
    nonzero = {
        ("f", "h"): {"fh": one}, ("f", "c"): {"fc": one},
        ("g", "f"): {"c": one},
        ("f", "g"): {"n": one}, ("f", "hg"): {"m": one}, ("f", "cg"): {"ncg": one},
        ("fh", "g"): {"m": one}, ("fc", "g"): {"ncg": one},
        ("g", "n"): {"cg": one},
        ("h", "g"): {"hg": one}, ("c", "g"): {"cg": one},
        ("n", "n"): {"ncg": one},
        ("n", "f"): {"fc": one},
    }
    comp_of = {}
    for pair, labs in basis.items():
        for lab, _deg in labs:
            comp_of[lab] = pair
    compose = {}
    units = {"id1", "id2"}
    for x, (t, u) in comp_of.items():
        for y, (s, t2) in comp_of.items():
            if t2 != t or x in units or y in units:
                continue
            key = (s, t, u)
            compose.setdefault(key, {})[(x, y)] = nonzero.get((x, y), {})
    return DgCategory(field, ["1", "2"], basis, {"1": "id1", "2": "id2"}, d, compose)


def random_quiver_category(rng, field, max_objects=3, max_arrows=3,
                           degree_range=(-2, 1), with_relator=True, bound=None):
    """A random valid dg category: the path category of a random acyclic
    quiver whose arrows are closed, plus optionally one relator arrow whose
    differential is a random combination of parallel closed paths.

    Validity is automatic: d^2 vanishes because differentials only hit
    closed arrows, and path categories are associative and unital.
    """
    n = rng.randrange(1, max_objects + 1)
    objects = [str(i + 1) for i in range(n)]
    arrows = []
    for k in range(rng.randrange(1, max_arrows + 1)):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i >= j:  # keep the quiver acyclic
            continue
        deg = rng.randrange(degree_range[0], degree_range[1] + 1)
        arrows.append((f"a{k}", objects[i], objects[j], deg))
    if not arrows:
        arrows = [("a0", objects[0], objects[-1], 0)] if n > 1 else []
    differentials = {}
    if with_relator and arrows:
        # pick a relator parallel to a composable pair, one degree below
        by_pair = {}
        for lab, s, t, d in arrows:
            by_pair.setdefault((s, t), []).append((lab, d))
        pairs = sorted(by_pair)
        s, t = pairs[rng.randrange(len(pairs))]
        paths = [((lab,), d) for lab, d in by_pair[(s, t)]]
        for lab1, s1, t1, d1 in arrows:
            for lab2, s2, t2, d2 in arrows:
                if s1 == t2 and s2 == s and t1 == t:
                    paths.append(((lab1, lab2), d1 + d2))
        if paths:
            p, dp = paths[rng.randrange(len(paths))]
            rel = f"r{len(arrows)}"
            arrows.append((rel, s, t, dp - 1))
            coeff = 1 if field == GF2 else rng.choice([1, -1, 2])
            differentials[rel] = [(p, coeff)]
    return free_category(field, objects, arrows, differentials, bound=bound)


def random_one_object_category(rng, field):
    """A small random one-object fixture drawn from the named families."""
    builders = [one_object_k, lambda f: dual_numbers(f, 0),
                exterior_category, coboundary_identity_category,
                group_algebra_z2]
    return builders[rng.randrange(len(builders))](field)


def random_dg_category(rng, field, bound=None):
    if rng.random() < 0.35:
        return random_one_object_category(rng, field)
    return random_quiver_category(rng, field, bound=bound)
