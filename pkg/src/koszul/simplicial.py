"""Finite simplicial sets, normalized chains, and twisted chain coalgebras.

Simplices are stored per dimension as nondegenerate labels; face maps land
in Eilenberg-Zilber normal forms (base, strictly decreasing degeneracy
word), and all simplicial identities are checked in normal form.

Chains sit in cohomological degree -n.  To match the classical composition
order used by the rest of the package (first tensor factor on the target
side), the Alexander-Whitney coproduct is stored as its graded opposite:
    delta(sigma) = sum_i (-1)^(i (n - i)) sigma_{i..n} (x) sigma_{0..i},
which dualizes to the plain product (a b)(sigma) = a(back) b(front) on
cochains.  With the differential convention (d phi)(c) = (-1)^|phi| phi(d c)
the twisted cochain algebra is the twist of the cochain algebra by +e,
where e is the cochain with value 1 on every nondegenerate 1-simplex; its
curvature evaluates on a 2-simplex as e(long edge) - 1, so simplices whose
long edge degenerates witness nonzero curvature.  (In the opposite-product
transcription the roles of -e and +e swap relative to the usual cup
formulas; the morphism pairs (id, e)/(id, -e) below compose to the
identity, which is the invariant that matters.)
"""

from __future__ import annotations

from .curved import (CurvedAlgebra, CoalgebraMorphism, twist_by_degree_one,
                     undualize, untwist_morphism)
from .errors import NotSimplicial
from .exactlin import GradedSpace, LinearMap, vec_add, vec_is_zero, vec_scale
from .report import Report


class DegenerateForm:
    """s_{w[0]} s_{w[1]} ... (base) with w strictly decreasing."""

    __slots__ = ("base", "word")

    def __init__(self, base, word=()):
        self.base = base
        self.word = tuple(word)
        if any(self.word[i] <= self.word[i + 1] for i in range(len(self.word) - 1)):
            raise ValueError(f"degeneracy word {word!r} is not strictly decreasing")

    def is_nondegenerate(self):
        return not self.word

    def __eq__(self, other):
        return (isinstance(other, DegenerateForm)
                and self.base == other.base and self.word == other.word)

    def __hash__(self):
        return hash((self.base, self.word))

    def __repr__(self):
        if not self.word:
            return f"~{self.base}"
        return "s" + "s".join(str(i) for i in self.word) + f"({self.base})"


def _insert_degeneracy(i, word):
    """Normal form of s_i applied after s_{word}."""
    if not word or i > word[0]:
        return (i,) + word
    # i <= word[0]: s_i s_j = s_{j+1} s_i
    return (word[0] + 1,) + _insert_degeneracy(i, word[1:])


class FiniteSimplicialSet:
    def __init__(self, simplices, faces):
        """simplices: dim -> list of nondegenerate labels; faces:
        (label, i) -> DegenerateForm (required for every nondegenerate
        simplex of dimension >= 1 and every 0 <= i <= dim)."""
        self.simplices = {int(n): list(labs) for n, labs in simplices.items()
                          if labs}
        self.dim_of = {}
        for n, labs in self.simplices.items():
            for lab in labs:
                if lab in self.dim_of:
                    raise ValueError(f"duplicate simplex label {lab!r}")
                self.dim_of[lab] = n
        self.faces = dict(faces)
        for lab, n in self.dim_of.items():
            for i in range(n + 1):
                if n >= 1 and (lab, i) not in self.faces:
                    raise ValueError(f"missing face ({lab!r}, {i})")

    def dimensions(self):
        return sorted(self.simplices)

    def vertices(self):
        return list(self.simplices.get(0, []))

    def nondegenerate(self, n=None):
        if n is None:
            return [lab for d in self.dimensions() for lab in self.simplices[d]]
        return list(self.simplices.get(n, []))

    def form_dim(self, form):
        return self.dim_of[form.base] + len(form.word)

    def apply_degeneracy(self, i, form):
        return DegenerateForm(form.base, _insert_degeneracy(i, form.word))

    def apply_face(self, i, form):
        """Face of a possibly degenerate simplex, in normal form."""
        if not form.word:
            n = self.dim_of[form.base]
            if n == 0:
                raise ValueError("vertices have no faces")
            return self.faces[(form.base, i)]
        j = form.word[0]
        rest = DegenerateForm(form.base, form.word[1:])
        if i < j:
            return self.apply_degeneracy(j - 1, self.apply_face(i, rest))
        if i in (j, j + 1):
            return rest
        return self.apply_degeneracy(j, self.apply_face(i - 1, rest))

    def first_vertex(self, lab):
        form = DegenerateForm(lab)
        while self.form_dim(form) > 0:
            form = self.apply_face(self.form_dim(form), form) \
                if False else self.apply_face(1, form) if False else form
        return form.base

    def end_vertices(self, lab):
        """(first vertex, last vertex) of a nondegenerate simplex."""
        n = self.dim_of[lab]
        first = DegenerateForm(lab)
        for _ in range(n):
            d = self.form_dim(first)
            first = self.apply_face(d, first)
        last = DegenerateForm(lab)
        for _ in range(n):
            last = self.apply_face(0, last)
        return first.base, last.base

    def front_face(self, lab, i):
        """sigma_{0..i}: delete vertices above i (faces from the top)."""
        form = DegenerateForm(lab)
        n = self.dim_of[lab]
        for k in range(n, i, -1):
            form = self.apply_face(k, form)
        return form

    def back_face(self, lab, i):
        """sigma_{i..n}: delete the first i vertices."""
        form = DegenerateForm(lab)
        for _ in range(i):
            form = self.apply_face(0, form)
        return form

    def __repr__(self):
        dims = {n: len(v) for n, v in self.simplices.items()}
        return f"FiniteSimplicialSet({dims})"


def validate_sset(K):
    """All simplicial identities d_i d_j = d_{j-1} d_i (i < j) in normal
    form, plus dimension consistency of the stored faces."""
    rep = Report("simplicial set")
    for lab, n in sorted(K.dim_of.items()):
        if n == 0:
            continue
        for i in range(n + 1):
            f = K.faces[(lab, i)]
            if K.form_dim(f) != n - 1:
                rep.add("face dimension", (lab, i))
        if n < 2:
            continue
        for j in range(n + 1):
            for i in range(j):
                lhs = K.apply_face(i, K.apply_face(j, DegenerateForm(lab)))
                rhs = K.apply_face(j - 1, K.apply_face(i, DegenerateForm(lab)))
                if lhs != rhs:
                    rep.add("d_i d_j = d_{j-1} d_i", (lab, i, j))
    return rep


# ---------------------------------------------------------------------------
# constructors


def standard_simplex(n):
    """Delta^n with nondegenerate simplices the subsets of 0..n, labeled by
    their digit strings."""
    simplices = {}
    faces = {}
    import itertools
    for k in range(n + 1):
        labs = []
        for verts in itertools.combinations(range(n + 1), k + 1):
            lab = "".join(str(v) for v in verts)
            labs.append(lab)
            if k >= 1:
                for i in range(k + 1):
                    sub = verts[:i] + verts[i + 1:]
                    faces[(lab, i)] = DegenerateForm(
                        "".join(str(v) for v in sub))
        simplices[k] = labs
    return FiniteSimplicialSet(simplices, faces)


def _subset_complex(n, keep):
    import itertools
    simplices = {}
    faces = {}
    for k in range(n + 1):
        labs = []
        for verts in itertools.combinations(range(n + 1), k + 1):
            if not keep(verts):
                continue
            lab = "".join(str(v) for v in verts)
            labs.append(lab)
            if k >= 1:
                for i in range(k + 1):
                    sub = verts[:i] + verts[i + 1:]
                    faces[(lab, i)] = DegenerateForm(
                        "".join(str(v) for v in sub))
        if labs:
            simplices[k] = labs
    return FiniteSimplicialSet(simplices, faces)


def boundary(n):
    """The boundary of Delta^n."""
    return _subset_complex(n, lambda verts: len(verts) <= n)


def horn(n, k):
    """The horn missing the face opposite vertex k."""
    full = tuple(range(n + 1))
    missing = full[:k] + full[k + 1:]
    return _subset_complex(
        n, lambda verts: verts != full and verts != missing)


def sphere_model(n):
    """Delta^n / boundary: one vertex and one nondegenerate n-simplex whose
    faces are all totally degenerate."""
    if n == 0:
        return FiniteSimplicialSet({0: ["p"]}, {})
    word = tuple(range(n - 2, -1, -1))
    faces = {("s", i): DegenerateForm("p", word) for i in range(n + 1)}
    return FiniteSimplicialSet({0: ["p"], n: ["s"]}, faces)


def circle():
    """One vertex, one nondegenerate loop."""
    return FiniteSimplicialSet(
        {0: ["p"], 1: ["a"]},
        {("a", 0): DegenerateForm("p"), ("a", 1): DegenerateForm("p")})


def collapsed_edge_triangle():
    """A 2-simplex whose long edge is collapsed: one vertex, one loop a,
    faces (a, s0 p, a).  The twisted chain coalgebra has nonzero curvature
    on the 2-simplex."""
    return FiniteSimplicialSet(
        {0: ["p"], 1: ["a"], 2: ["s"]},
        {("a", 0): DegenerateForm("p"), ("a", 1): DegenerateForm("p"),
         ("s", 0): DegenerateForm("a"), ("s", 1): DegenerateForm("p", (0,)),
         ("s", 2): DegenerateForm("a")})


def square():
    """Delta^1 x Delta^1: four vertices, five edges, two triangles."""
    F = DegenerateForm
    simplices = {0: ["00", "01", "10", "11"],
                 1: ["e0001", "e0010", "e0111", "e1011", "e0011"],
                 2: ["tA", "tB"]}
    faces = {
        ("e0001", 0): F("01"), ("e0001", 1): F("00"),
        ("e0010", 0): F("10"), ("e0010", 1): F("00"),
        ("e0111", 0): F("11"), ("e0111", 1): F("01"),
        ("e1011", 0): F("11"), ("e1011", 1): F("10"),
        ("e0011", 0): F("11"), ("e0011", 1): F("00"),
        # tA = (00, 01, 11), tB = (00, 10, 11)
        ("tA", 0): F("e0111"), ("tA", 1): F("e0011"), ("tA", 2): F("e0001"),
        ("tB", 0): F("e1011"), ("tB", 1): F("e0011"), ("tB", 2): F("e0010"),
    }
    return FiniteSimplicialSet(simplices, faces)


def disjoint_union(K, L, rename=("K:", "L:")):
    pk, pl = rename
    simplices = {}
    faces = {}
    for (M, p) in ((K, pk), (L, pl)):
        for n in M.dimensions():
            simplices.setdefault(n, []).extend(p + lab for lab in M.simplices[n])
        for (lab, i), f in M.faces.items():
            faces[(p + lab, i)] = DegenerateForm(p + f.base, f.word)
    return FiniteSimplicialSet(simplices, faces)


# ---------------------------------------------------------------------------
# simplicial maps


class SimplicialMap:
    def __init__(self, K, L, images):
        """images: nondegenerate simplex of K -> DegenerateForm in L."""
        self.K, self.L = K, L
        self.images = dict(images)

    def apply(self, form):
        """Image of a (possibly degenerate) K-form, in L-normal form."""
        out = self.images[form.base]
        for i in reversed(form.word):
            out = self.L.apply_degeneracy(i, out)
        return out

    def validate(self):
        rep = Report("simplicial map")
        for lab, n in sorted(self.K.dim_of.items()):
            img = self.images.get(lab)
            if img is None:
                rep.add("missing image", lab)
                continue
            if self.L.form_dim(img) != n:
                rep.add("dimension", lab)
                continue
            for i in range(n + 1):
                lhs = self.apply(self.K.apply_face(i, DegenerateForm(lab)))
                rhs = self.L.apply_face(i, img)
                if lhs != rhs:
                    rep.add("commutes with faces", (lab, i))
        return rep

    def assert_simplicial(self):
        rep = self.validate()
        if not rep.ok:
            raise NotSimplicial(str(rep.failures[:2]))
        return self


def compose_simplicial(g, f):
    images = {}
    for lab in f.K.dim_of:
        images[lab] = g.apply(f.images[lab])
    return SimplicialMap(f.K, g.L, images)


def monotone_to_form(L, alpha, verts):
    """The image of the simplex with the given vertex tuple under a vertex
    map alpha, as a normal form in the target standard-simplex-like set
    whose nondegenerate simplices are digit strings."""
    vals = [alpha[v] for v in verts]
    base = "".join(str(v) for v in sorted(set(vals)))
    word = [i for i in range(len(vals) - 1) if vals[i] == vals[i + 1]]
    form = DegenerateForm(base)
    for i in word:  # increasing insertion keeps the normal form correct
        form = L.apply_degeneracy(i, form)
    return form


def simplex_map(alpha, m, n):
    """The simplicial map Delta^m -> Delta^n of a monotone alpha: [m]->[n]
    given as a list/tuple of values."""
    K = standard_simplex(m)
    L = standard_simplex(n)
    images = {}
    for lab in K.dim_of:
        verts = [int(ch) for ch in lab]
        images[lab] = monotone_to_form(L, list(alpha), verts)
    return SimplicialMap(K, L, images).assert_simplicial()


# ---------------------------------------------------------------------------
# chains and cochains


class NormalizedChains:
    """The plain pointed dg coalgebra of normalized chains: basis the
    nondegenerate simplices in degree -n, boundary sum (-1)^i d_i with
    degenerate faces dropped, graded-opposite Alexander-Whitney coproduct.

    Not a pointed curved coalgebra: the splitting off the coradical is not
    compatible with the differential (d of an edge hits the vertices)."""

    def __init__(self, K, field):
        self.K = K
        self.field = field
        basis = []
        for n in K.dimensions():
            for lab in K.simplices[n]:
                basis.append((lab, -n))
        self.space = GradedSpace(field, basis)
        d_entries = {}
        for lab, n in K.dim_of.items():
            if n == 0:
                continue
            col = {}
            for i in range(n + 1):
                f = K.faces[(lab, i)]
                if not f.is_nondegenerate():
                    continue
                sign = field.one if i % 2 == 0 else field.neg(field.one)
                col[f.base] = field.add(col.get(f.base, field.zero), sign)
            col = {k: c for k, c in col.items() if not field.is_zero(c)}
            if col:
                d_entries[lab] = col
        self.d = LinearMap(self.space, self.space, 1, d_entries)

    def coproduct(self, lab):
        """All Alexander-Whitney terms ((back, front), coeff), including the
        grouplike ends, degenerate factors dropped."""
        field = self.field
        K = self.K
        n = K.dim_of[lab]
        out = []
        for i in range(n + 1):
            back = K.back_face(lab, i)
            front = K.front_face(lab, i)
            if not back.is_nondegenerate() or not front.is_nondegenerate():
                continue
            sign = field.one if (i * (n - i)) % 2 == 0 else field.neg(field.one)
            out.append(((back.base, front.base), sign))
        return out

    def reduced_coproduct(self, lab):
        n = self.K.dim_of[lab]
        return [((b, f), c) for (b, f), c in self.coproduct(lab)
                if self.K.dim_of[b] < n and self.K.dim_of[f] < n
                and self.K.dim_of[b] >= 1 and self.K.dim_of[f] >= 1]

    def validate(self):
        """d^2 = 0 and coassociativity of the full coproduct."""
        rep = Report("normalized chains")
        field = self.field
        sq = self.d.compose(self.d)
        for lab, col in sq.entries.items():
            if not vec_is_zero(field, col):
                rep.add("d^2=0", lab)
        for lab in self.space.labels:
            lhs = {}
            rhs = {}
            for (b, f), c in self.coproduct(lab):
                for (b2, f2), c2 in self.coproduct(b):
                    key = (b2, f2, f)
                    lhs[key] = field.add(lhs.get(key, field.zero),
                                         field.mul(c, c2))
                for (b2, f2), c2 in self.coproduct(f):
                    key = (b, b2, f2)
                    rhs[key] = field.add(rhs.get(key, field.zero),
                                         field.mul(c, c2))
            for key in set(lhs) | set(rhs):
                if not field.is_zero(field.sub(lhs.get(key, field.zero),
                                               rhs.get(key, field.zero))):
                    rep.add("coassociativity", (lab,) + key)
                    break
        return rep


def normalized_chains(K, field):
    return NormalizedChains(K, field)


def cochain_algebra(K, field):
    """The normalized cochain algebra as a CurvedAlgebra with zero
    curvature: basis the duals of nondegenerate simplices (labels reused,
    degree +n), vertices as unit idempotents, product dual to the
    graded-opposite AW coproduct (which evaluates with no signs)."""
    chains = NormalizedChains(K, field)
    objects = K.vertices()
    basis = []
    comp_of = {}
    for lab, n in K.dim_of.items():
        basis.append((lab, n))
        comp_of[lab] = K.end_vertices(lab)
    units = {v: v for v in objects}
    product = {}
    for lab in K.dim_of:
        for (b, f), coeff in chains.coproduct(lab):
            # (b* f*)(lab) = sign(b, f) * coeff with the pairing sign
            # (-1)^(|f*| |b|) = (-1)^(dim f * dim b); combined with the
            # graded-opposite flip sign this is always +1
            col = product.setdefault((b, f), {})
            col[lab] = field.add(col.get(lab, field.zero), field.one)
    d_entries = {}
    for y, col in chains.d.entries.items():
        for x, coeff in col.items():
            sign = field.one if K.dim_of[x] % 2 == 0 else field.neg(field.one)
            d_entries.setdefault(x, {})[y] = field.mul(sign, coeff)
    return CurvedAlgebra(field, objects, basis, comp_of, units, product,
                         d_entries, {})


def one_cochain(K, field):
    """The cochain with value 1 on every nondegenerate 1-simplex."""
    return {lab: field.one for lab in K.nondegenerate(1)}


def twisted_cochain_algebra(K, field):
    """The cochain algebra with the twisted differential and the curvature
    that makes (id, e) a curved morphism to the plain cochain algebra."""
    A = cochain_algebra(K, field)
    return twist_by_degree_one(A, one_cochain(K, field))


def untwist_cochain_morphism(K, field):
    """(id, e): twisted cochains -> cochains, valid by construction."""
    A = cochain_algebra(K, field)
    return untwist_morphism(twisted_cochain_algebra(K, field), A,
                            one_cochain(K, field))


def twist_cochain_morphism(K, field):
    """(id, -e): cochains -> twisted cochains."""
    from .curved import AlgebraMorphism
    A = cochain_algebra(K, field)
    At = twisted_cochain_algebra(K, field)
    entries = {lab: {lab: field.one} for lab in A.space.labels}
    b = vec_scale(field, field.neg(field.one), one_cochain(K, field))
    return AlgebraMorphism(A, At, {v: v for v in A.objects}, entries, b)


def twisted_chains(K, field):
    """The twisted chain pointed curved coalgebra: the predual of the
    twisted cochain algebra.  Objects are the vertices, the reduced part is
    spanned by nondegenerate simplices of dimension >= 1 in degree -n."""
    C = undualize(twisted_cochain_algebra(K, field))
    C.simplicial_set = K
    return C


def chains_on_map(f, field):
    """The curved morphism (f_*, x_f) of twisted chain coalgebras induced
    by a simplicial map: f_* is the normalized pushforward and x_f is
    supported on nondegenerate 1-simplices with degenerate image, with
    value 1 at the image vertex."""
    f.assert_simplicial()
    CK = twisted_chains(f.K, field)
    CL = twisted_chains(f.L, field)
    object_map = {v: f.images[v].base for v in f.K.vertices()}
    entries = {}
    a = {}
    for lab, n in f.K.dim_of.items():
        if n == 0:
            continue
        img = f.images[lab]
        if img.is_nondegenerate():
            entries[lab] = {img.base: field.one}
        elif n == 1:
            a[lab] = field.one
    return CoalgebraMorphism(CK, CL, object_map, entries, a)
