"""Finite dg categories with basis-presented hom complexes.

Composition convention: ``compose(s, t, u)`` takes f in hom(t,u) and g in
hom(s,t) to f o g in hom(s,u) ("f after g").  Words representing composites
are stored with the outermost (last applied) factor first, so the tuple
(a, b) denotes a o b and the label reads "a.b".

Basis labels must be globally unique across all hom spaces; identities are
distinguished degree-0 basis labels (or None for objects with zero
endomorphisms, which are representable but rejected by bar-side operations).
"""

from __future__ import annotations

from .errors import IllFormedDifferential, NotSplit, UnknownObject
from .exactlin import (FiniteComplex, GradedSpace, LinearMap, same_field,
                       vec_add, vec_eq, vec_is_zero, vec_scale)
from .report import Report


class Truncation:
    """Word-length truncation data for a quotient-truncated free category.

    exact_degree(s, t, n) is True when no composable word of length
    bound+1 from s to t can have degree n; d^2 = 0 is only asserted where
    the overflow degree is exact.  stable_degree(n) is a conservative
    whole-category statement covering all lengths > bound (used to trust
    homology windows).
    """

    def __init__(self, bound, overflow_degrees, gen_degrees):
        self.bound = bound
        self.overflow_degrees = overflow_degrees  # (s,t) -> set of degrees at length bound+1
        self.gen_degrees = sorted(set(gen_degrees))

    def exact_degree(self, s, t, n):
        return n not in self.overflow_degrees.get((s, t), set())

    def stable_degree(self, n):
        if not self.gen_degrees:
            return True
        lo, hi = self.gen_degrees[0], self.gen_degrees[-1]
        if hi < 0:
            return n > (self.bound + 1) * hi
        if lo > 0:
            return n < (self.bound + 1) * lo
        if lo == 0 and hi == 0:
            return n != 0
        if lo == 0:
            return n < 0
        if hi == 0:
            return n > 0
        return False


class DgCategory:
    def __init__(self, field, objects, hom_basis, identity, d_entries, compose,
                 autofill_units=True, truncation=None):
        """hom_basis: (s,t) -> list of (label, degree); identity: s -> label
        or None; d_entries: (s,t) -> sparse entries; compose: (s,t,u) ->
        {(f,g): vector on hom(s,u)} for f in hom(t,u), g in hom(s,t)."""
        self.field = field
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("duplicate object labels")
        self.hom = {}
        self.comp_of = {}
        for pair, basis in hom_basis.items():
            s, t = pair
            if s not in self.objects or t not in self.objects:
                raise UnknownObject(f"hom pair {pair!r}")
            space = GradedSpace(field, basis)
            if space.dim():
                self.hom[pair] = space
            for lab in space.labels:
                if lab in self.comp_of:
                    raise ValueError(f"basis label {lab!r} appears in two hom spaces")
                self.comp_of[lab] = pair
        self.identity = dict(identity)
        for s in self.objects:
            lab = self.identity.get(s)
            if lab is not None:
                sp = self.hom.get((s, s))
                if sp is None or lab not in sp or sp.degree[lab] != 0:
                    raise ValueError(f"identity {lab!r} of {s!r} is not a degree-0 basis label")
        self.d = {}
        for pair, space in self.hom.items():
            self.d[pair] = LinearMap(space, space, 1, d_entries.get(pair, {}))
        self.compose_table = {}
        for (s, t, u), table in compose.items():
            for (f, g), vec in table.items():
                if self.comp_of.get(f) != (t, u) or self.comp_of.get(g) != (s, t):
                    raise ValueError(f"composition entry ({f!r},{g!r}) has wrong components")
                self._set_product(f, g, vec)
        if autofill_units:
            self._autofill_units()
        self.truncation = truncation

    # -- plumbing ----------------------------------------------------------

    def _set_product(self, f, g, vec):
        vec = {k: c for k, c in vec.items() if not self.field.is_zero(c)}
        (s, _t), (_t2, u) = self.comp_of[g], self.comp_of[f]
        for k in vec:
            if self.comp_of.get(k) != (s, u):
                raise ValueError(f"product {f!r} o {g!r} leaves hom({s},{u})")
        if vec:
            self.compose_table[(f, g)] = vec
        else:
            self.compose_table.pop((f, g), None)

    def _autofill_units(self):
        for lab, (s, t) in self.comp_of.items():
            it = self.identity.get(t)
            if it is not None and (it, lab) not in self.compose_table and lab != it:
                self.compose_table[(it, lab)] = {lab: self.field.one}
            i_s = self.identity.get(s)
            if i_s is not None and (lab, i_s) not in self.compose_table:
                self.compose_table[(lab, i_s)] = {lab: self.field.one}

    def hom_space(self, s, t):
        if s not in self.objects or t not in self.objects:
            raise UnknownObject(f"({s!r},{t!r})")
        return self.hom.get((s, t)) or GradedSpace(self.field, [])

    def basis_pairs(self):
        return sorted(self.hom)

    def deg(self, lab):
        return self.hom[self.comp_of[lab]].degree[lab]

    def mul_basis(self, f, g):
        """f o g for basis labels (classical order: g applied first)."""
        return dict(self.compose_table.get((f, g), {}))

    def mul(self, fvec, gvec):
        """Compose two morphism vectors (components inferred from labels)."""
        field = self.field
        out = {}
        for f, cf in fvec.items():
            for g, cg in gvec.items():
                prod = self.compose_table.get((f, g))
                if not prod:
                    continue
                c = field.mul(cf, cg)
                out = vec_add(field, out, vec_scale(field, c, prod))
        return out

    def d_apply(self, vec):
        field = self.field
        out = {}
        for lab, c in vec.items():
            dm = self.d[self.comp_of[lab]]
            out = vec_add(field, out, vec_scale(field, c, dm.apply({lab: field.one})))
        return out

    def identity_vector(self, s):
        lab = self.identity.get(s)
        if lab is None:
            return {}
        return {lab: self.field.one}

    def all_labels(self):
        return sorted(self.comp_of)

    def nonunit_labels(self):
        units = {lab for lab in self.identity.values() if lab is not None}
        return [lab for lab in self.all_labels() if lab not in units]

    def hom_complex(self, s, t):
        """The hom complex hom(s,t) with its differential."""
        space = self.hom_space(s, t)
        if not space.dim():
            return FiniteComplex(space, LinearMap.zero(space, space, 1))
        return FiniteComplex(space, self.d[(s, t)], check=False)

    def __repr__(self):
        dims = sum(sp.dim() for sp in self.hom.values())
        return f"DgCategory({len(self.objects)} objects, total hom dim {dims})"


# ---------------------------------------------------------------------------
# validation


def validate_dg_category(D):
    """Check d^2, Leibniz, associativity and unit laws on all basis tuples.

    For quotient-truncated categories, d^2 is only asserted where the
    overflow degree is exact (the cut flag); all other laws hold exactly in
    the quotient and are always checked.
    """
    rep = Report("dg category")
    field = D.field
    trunc = D.truncation
    # d^2 = 0
    for pair in D.basis_pairs():
        dm = D.d[pair]
        for a in D.hom[pair].labels:
            if trunc is not None:
                s, t = pair
                if not trunc.exact_degree(s, t, D.hom[pair].degree[a] + 1):
                    continue
            if not vec_is_zero(field, dm.apply(dm.apply({a: field.one}))):
                rep.add("d^2=0", a)
    # d(identity) = 0
    for s in D.objects:
        lab = D.identity.get(s)
        if lab is not None and not vec_is_zero(field, D.d_apply({lab: field.one})):
            rep.add("d(identity)=0", lab)
    # Leibniz on composable basis pairs; when the composite overflows the
    # truncation (its degree is then an overflow degree) the identity lives
    # outside the quotient and is skipped
    for f, (t, u) in sorted(D.comp_of.items()):
        for g, (s, t2) in sorted(D.comp_of.items()):
            if t2 != t:
                continue
            if trunc is not None and not trunc.exact_degree(s, u, D.deg(f) + D.deg(g)):
                continue
            lhs = D.d_apply(D.mul_basis(f, g))
            rhs = D.mul(D.d_apply({f: field.one}), {g: field.one})
            sign = field.one if D.deg(f) % 2 == 0 else field.neg(field.one)
            rhs = vec_add(field, rhs,
                          vec_scale(field, sign, D.mul({f: field.one}, D.d_apply({g: field.one}))))
            if not vec_eq(field, lhs, rhs):
                rep.add("Leibniz", (f, g))
    # associativity on composable basis triples; triples where both adjacent
    # products vanish have both sides zero and are skipped
    labels_by_target = {}
    labels_by_source = {}
    for lab, (s, t) in D.comp_of.items():
        labels_by_target.setdefault(t, []).append(lab)
        labels_by_source.setdefault(s, []).append(lab)
    checked = set()
    for (f, g) in sorted(D.compose_table):
        s = D.comp_of[g][0]
        for h in sorted(labels_by_target.get(s, [])):
            checked.add((f, g, h))
        t = D.comp_of[f][1]
        for e in sorted(labels_by_source.get(t, [])):
            checked.add((e, f, g))
    for f, g, h in sorted(checked):
        lhs = D.mul(D.mul_basis(f, g), {h: field.one})
        rhs = D.mul({f: field.one}, D.mul_basis(g, h))
        if not vec_eq(field, lhs, rhs):
            rep.add("associativity", (f, g, h))
    # unit laws
    for lab, (s, t) in sorted(D.comp_of.items()):
        it, i_s = D.identity.get(t), D.identity.get(s)
        if it is not None and not vec_eq(field, D.mul_basis(it, lab), {lab: field.one}):
            rep.add("left unit", lab)
        if i_s is not None and not vec_eq(field, D.mul_basis(lab, i_s), {lab: field.one}):
            rep.add("right unit", lab)
    return rep


# ---------------------------------------------------------------------------
# retracts


class Retract:
    """A degree-0 functional v_s on each hom(s,s) with v_s(identity) = 1.

    Stored as s -> {label: scalar} on degree-0 endomorphism basis labels.
    """

    def __init__(self, D, functionals):
        self.D = D
        self.functionals = {s: dict(v) for s, v in functionals.items()}
        for s, v in self.functionals.items():
            sp = D.hom_space(s, s)
            for lab in v:
                if lab not in sp or sp.degree[lab] != 0:
                    raise ValueError(f"retract of {s!r} uses non-degree-0 label {lab!r}")

    def value(self, s, vec):
        """v_s applied to a vector in hom(s,s)^0 (zero on other components)."""
        field = self.D.field
        out = field.zero
        v = self.functionals.get(s, {})
        for lab, c in vec.items():
            if lab in v:
                out = field.add(out, field.mul(v[lab], c))
        return out

    def unit_coefficient(self, vec):
        """Apply the retract to a morphism vector supported anywhere; only
        degree-0 endomorphism labels contribute."""
        field = self.D.field
        out = {}
        for lab, c in vec.items():
            s, t = self.D.comp_of[lab]
            if s != t:
                continue
            v = self.functionals.get(s, {})
            if lab in v:
                out[s] = field.add(out.get(s, field.zero), field.mul(v[lab], c))
        return {s: c for s, c in out.items() if not field.is_zero(c)}

    def validate(self):
        rep = Report("retract")
        for s in self.D.objects:
            lab = self.D.identity.get(s)
            if lab is None:
                rep.add("identity exists", s)
                continue
            if self.value(s, {lab: self.D.field.one}) != self.D.field.one:
                rep.add("v(identity)=1", s)
        return rep


def default_retract(D):
    """Coefficient-of-identity functional in the given basis."""
    functionals = {}
    for s in D.objects:
        lab = D.identity.get(s)
        if lab is None:
            raise NotSplit(f"object {s!r} has zero identity")
        functionals[s] = {lab: D.field.one}
    return Retract(D, functionals)


# ---------------------------------------------------------------------------
# free (path) categories


def word_label(letters, obj=None):
    if not letters:
        return f"1_{obj}"
    return ".".join(letters)


def free_category(field, objects, arrows, differentials=None, bound=None):
    """Path category on a graded quiver, with optional generator
    differentials given as lists of (path, coefficient).

    arrows: list of (label, src, tgt, degree).  Paths are tuples of arrow
    labels in classical order: (a, b) means a o b, a path from src(b) to
    tgt(a); the empty path at s is the identity 1_s.  When the quiver has a
    directed cycle a word bound must be given; words longer than the bound
    are set to zero (quotient truncation) and the category carries the
    resulting per-degree exactness flags.
    """
    differentials = differentials or {}
    arr = {}
    for lab, s, t, deg in arrows:
        if lab in arr:
            raise ValueError(f"duplicate arrow {lab!r}")
        if lab.startswith("1_"):
            raise ValueError(f"arrow label {lab!r} uses the identity prefix")
        if s not in objects or t not in objects:
            raise UnknownObject(f"arrow {lab!r}")
        arr[lab] = (s, t, deg)

    def path_src(p, obj=None):
        return arr[p[-1]][0] if p else obj

    def path_tgt(p, obj=None):
        return arr[p[0]][1] if p else obj

    def path_deg(p):
        return sum(arr[a][2] for a in p)

    def composable(p):
        return all(arr[p[i]][0] == arr[p[i + 1]][1] for i in range(len(p) - 1))

    # cycle detection: a word bound is required if any directed cycle exists
    has_cycle = False
    reach = {(s, t): False for s in objects for t in objects}
    for lab, (s, t, _d) in arr.items():
        reach[(s, t)] = True
    for k in objects:
        for i in objects:
            for j in objects:
                if reach[(i, k)] and reach[(k, j)]:
                    reach[(i, j)] = True
    has_cycle = any(reach[(s, s)] for s in objects)
    if has_cycle and bound is None:
        raise ValueError("quiver has a directed cycle; a word bound is required")

    # enumerate composable words up to the bound; one extra layer records
    # which (pair, degree) slots the truncation actually cut
    overflow_words = []
    words = {1: [(a,) for a in sorted(arr)]} if arr else {}
    L = 1
    while words.get(L):
        nxt = []
        for w in words[L]:
            for a in sorted(arr):
                if arr[a][0] == path_tgt(w):
                    nxt.append((a,) + w)
        L += 1
        if not nxt:
            break
        if bound is not None and L > bound:
            overflow_words = nxt
            break
        words[L] = nxt
    all_words = [w for ws in words.values() for w in ws]

    hom_basis = {}
    identity = {}
    for s in objects:
        hom_basis[(s, s)] = [(word_label((), s), 0)]
        identity[s] = word_label((), s)
    for w in all_words:
        pair = (path_src(w), path_tgt(w))
        hom_basis.setdefault(pair, []).append((word_label(w), path_deg(w)))

    # validate differentials: terms must be composable parallel paths of degree +1
    for a, terms in differentials.items():
        if a not in arr:
            raise IllFormedDifferential(f"unknown arrow {a!r}")
        s, t, deg = arr[a]
        for p, _c in terms:
            p = tuple(p)
            if p and (not all(x in arr for x in p) or not composable(p)):
                raise IllFormedDifferential(f"d({a!r}) term {p!r} is not a composable path")
            if (path_src(p, s), path_tgt(p, t)) != (s, t):
                raise IllFormedDifferential(f"d({a!r}) term {p!r} is not parallel to {a!r}")
            if path_deg(p) != deg + 1:
                raise IllFormedDifferential(f"d({a!r}) term {p!r} has wrong degree")

    def d_word(w):
        """Leibniz extension; words beyond the bound are dropped."""
        out = {}
        for i, a in enumerate(w):
            pre = sum(arr[x][2] for x in w[:i])
            sign = field.one if pre % 2 == 0 else field.neg(field.one)
            for p, c in differentials.get(a, []):
                p = tuple(p)
                nw = w[:i] + p + w[i + 1:]
                if bound is not None and len(nw) > bound:
                    continue
                lab = word_label(nw, path_src(w))
                cv = field.of(c) if isinstance(c, (int, str)) else c
                out = vec_add(field, out, {lab: field.mul(sign, cv)})
        return out

    d_entries = {}
    for w in all_words:
        pair = (path_src(w), path_tgt(w))
        col = d_word(w)
        if col:
            d_entries.setdefault(pair, {})[word_label(w)] = col

    compose = {}
    for u in all_words:
        for v in all_words:
            if path_src(u) != path_tgt(v):
                continue
            if bound is not None and len(u) + len(v) > bound:
                continue
            s, t, r = path_src(v), path_src(u), path_tgt(u)
            key = (s, t, r)
            compose.setdefault(key, {})[(word_label(u), word_label(v))] = {
                word_label(u + v): field.one}

    truncation = None
    if bound is not None:
        overflow = {}
        for w in overflow_words:
            pair = (path_src(w), path_tgt(w))
            overflow.setdefault(pair, set()).add(path_deg(w))
        truncation = Truncation(bound, overflow, [arr[a][2] for a in arr])

    D = DgCategory(field, objects, hom_basis, identity, d_entries, compose,
                   truncation=truncation)
    D.word_of = {word_label(w): w for w in all_words}
    D.arrow_data = dict(arr)
    return D


# ---------------------------------------------------------------------------
# comparison of presentations


def presentations_equal(D1, D2, label_map):
    """Exact equality of presentations under a basis-label dictionary.

    label_map sends D1 basis labels (and object labels, where they differ)
    to D2 labels; it must be a bijection onto the basis of D2."""
    same_field(D1.field, D2.field)

    def m(lab):
        return label_map.get(lab, lab)

    obj_map = {s: m(s) for s in D1.objects}
    if sorted(obj_map.values()) != sorted(D2.objects):
        return False
    mapped = sorted(m(l) for l in D1.all_labels())
    if mapped != D2.all_labels():
        return False
    for (s, t) in D1.basis_pairs():
        sp1 = D1.hom[(s, t)]
        sp2 = D2.hom_space(obj_map[s], obj_map[t])
        if sorted((m(l), sp1.degree[l]) for l in sp1.labels) != sorted(sp2.basis):
            return False
    for lab1 in D1.all_labels():
        img = {m(k): c for k, c in D1.d_apply({lab1: D1.field.one}).items()}
        if not vec_eq(D1.field, img, D2.d_apply({m(lab1): D2.field.one})):
            return False
    for f in D1.all_labels():
        for g in D1.all_labels():
            if D1.comp_of[f][0] != D1.comp_of[g][1]:
                continue
            img = {m(k): c for k, c in D1.mul_basis(f, g).items()}
            if not vec_eq(D1.field, img, D2.mul_basis(m(f), m(g))):
                return False
    for s in D1.objects:
        i1 = D1.identity.get(s)
        i2 = D2.identity.get(obj_map[s])
        if (i1 is None) != (i2 is None):
            return False
        if i1 is not None and m(i1) != i2:
            return False
    return True
