"""Exact scalar arithmetic, labeled graded spaces and sparse linear maps.

Scalars are plain Python values (Fraction over Q, canonical residues 0..p-1
over F_p) and every container carries the Field object that interprets them.
Combining containers over different fields raises FieldMismatch.

Grading is cohomological throughout: differentials have degree +1 and the
chains of an n-simplex sit in degree -n.  Vectors are sparse dicts
``label -> scalar`` with zero coefficients omitted.

Sign rule: for homogeneous maps f, g the tensor map acts by
``(f (x) g)(x (x) y) = (-1)^(|g| |x|) f(x) (x) g(y)``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FieldMismatch, NotAComplex


# ---------------------------------------------------------------------------
# fields


class Rationals:
    """The field Q; elements are fractions.Fraction (ints are coerced)."""

    name = "Q"

    def of(self, n):
        if isinstance(n, Fraction):
            return n
        if isinstance(n, int):
            return Fraction(n)
        if isinstance(n, str):
            return Fraction(n)
        raise TypeError(f"cannot coerce {n!r} into Q")

    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / Fraction(a)

    def div(self, a, b):
        return a * self.inv(b)

    def is_zero(self, a):
        return a == 0

    def serialize(self, a):
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def elements(self):
        raise ValueError("Q is infinite; enumeration requires a finite field")

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField:
    """The field F_p for a prime p; elements are least residues 0..p-1."""

    def __init__(self, p):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"
        self.zero = 0
        self.one = 1 % p

    def of(self, n):
        if isinstance(n, int):
            return n % self.p
        if isinstance(n, str):
            return int(n) % self.p
        raise TypeError(f"cannot coerce {n!r} into F_{self.p}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def serialize(self, a):
        return a % self.p

    def elements(self):
        return range(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"F{self.p}"


QQ = Rationals()
GF2 = PrimeField(2)
GF5 = PrimeField(5)


def same_field(a, b):
    if a != b:
        raise FieldMismatch(f"fields {a!r} and {b!r} differ")
    return a


# ---------------------------------------------------------------------------
# sparse vectors: dict label -> scalar, zeros omitted


def vec_add(field, u, v):
    out = dict(u)
    for k, c in v.items():
        s = field.add(out.get(k, field.zero), c)
        if field.is_zero(s):
            out.pop(k, None)
        else:
            out[k] = s
    return out


def vec_scale(field, c, u):
    if field.is_zero(c):
        return {}
    return {k: field.mul(c, x) for k, x in u.items()}

def vec_sub(field, u, v):
    return vec_add(field, u, vec_scale(field, field.neg(field.one), v))


def vec_eq(field, u, v):
    for k in set(u) | set(v):
        if not field.is_zero(field.sub(u.get(k, field.zero), v.get(k, field.zero))):
            return False
    return True


def vec_is_zero(field, u):
    return all(field.is_zero(c) for c in u.values())


# ---------------------------------------------------------------------------
# graded spaces


class GradedSpace:
    """A finite labeled basis with integer (cohomological) degrees.

    Labels are opaque strings and must be pairwise distinct.
    """

    def __init__(self, field, basis):
        self.field = field
        self.labels = tuple(lab for lab, _ in basis)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate basis labels")
        self.degree = {lab: int(d) for lab, d in basis}

    @property
    def basis(self):
        return [(lab, self.degree[lab]) for lab in self.labels]

    def dim(self):
        return len(self.labels)

    def degrees(self):
        return sorted(set(self.degree.values()))

    def in_degree(self, n):
        """Labels of degree n, in lexicographic order (pivot order)."""
        return sorted(lab for lab in self.labels if self.degree[lab] == n)

    def deg_of(self, vector):
        """Degree of a homogeneous vector, or None for 0/mixed."""
        degs = {self.degree[k] for k in vector}
        return degs.pop() if len(degs) == 1 else None

    def __contains__(self, lab):
        return lab in self.degree

    def __repr__(self):
        return f"GradedSpace({self.dim()} basis elements over {self.field!r})"


def tensor_space(V, W, combine=None):
    """Tensor product of graded spaces with combined labels."""
    same_field(V.field, W.field)
    if combine is None:
        combine = lambda a, b: f"{a}(x){b}"
    basis = []
    for a in V.labels:
        for b in W.labels:
            basis.append((combine(a, b), V.degree[a] + W.degree[b]))
    return GradedSpace(V.field, basis)


# ---------------------------------------------------------------------------
# sparse linear maps


class LinearMap:
    """A degree-homogeneous sparse linear map between graded spaces.

    entries: dict source-label -> (dict target-label -> scalar).
    Every entry must raise degree by exactly ``degree``.
    """

    def __init__(self, source, target, degree, entries, check=True):
        same_field(source.field, target.field)
        self.source = source
        self.target = target
        self.field = source.field
        self.degree = int(degree)
        ent = {}
        for a, col in entries.items():
            col = {b: c for b, c in col.items() if not self.field.is_zero(c)}
            if col:
                ent[a] = col
        self.entries = ent
        if check:
            self._check_wellformed()

    def _check_wellformed(self):
        for a, col in self.entries.items():
            if a not in self.source:
                raise ValueError(f"unknown source label {a!r}")
            for b in col:
                if b not in self.target:
                    raise ValueError(f"unknown target label {b!r}")
                if self.target.degree[b] != self.source.degree[a] + self.degree:
                    raise ValueError(
                        f"entry {a!r}->{b!r} violates degree {self.degree}"
                    )

    @classmethod
    def zero(cls, source, target, degree):
        return cls(source, target, degree, {}, check=False)

    @classmethod
    def identity(cls, space):
        return cls(space, space, 0, {a: {a: space.field.one} for a in space.labels},
                   check=False)

    def apply(self, vector):
        field = self.field
        out = {}
        for a, c in vector.items():
            col = self.entries.get(a)
            if not col:
                continue
            for b, m in col.items():
                s = field.add(out.get(b, field.zero), field.mul(c, m))
                if field.is_zero(s):
                    out.pop(b, None)
                else:
                    out[b] = s
        return out

    def compose(self, other):
        """self after other (usual composition)."""
        same_field(self.field, other.field)
        entries = {a: self.apply(col) for a, col in other.entries.items()}
        return LinearMap(other.source, self.target, self.degree + other.degree,
                         entries, check=False)

    def add(self, other):
        if self.degree != other.degree:
            raise ValueError("cannot add maps of different degrees")
        entries = dict(self.entries)
        field = self.field
        for a, col in other.entries.items():
            entries[a] = vec_add(field, entries.get(a, {}), col)
        return LinearMap(self.source, self.target, self.degree, entries, check=False)

    def scale(self, c):
        return LinearMap(self.source, self.target, self.degree,
                         {a: vec_scale(self.field, c, col)
                          for a, col in self.entries.items()}, check=False)

    def neg(self):
        return self.scale(self.field.neg(self.field.one))

    def is_zero(self):
        return all(vec_is_zero(self.field, col) for col in self.entries.values())

    def equals(self, other):
        if self.degree != other.degree:
            return False
        for a in set(self.entries) | set(other.entries):
            if not vec_eq(self.field, self.entries.get(a, {}), other.entries.get(a, {})):
                return False
        return True

    def __repr__(self):
        n = sum(len(c) for c in self.entries.values())
        return f"LinearMap(degree {self.degree}, {n} entries)"


def koszul_tensor(f, g):
    """Tensor product of maps with the Koszul sign.

    (f (x) g)(x (x) y) = (-1)^(|g| |x|) f(x) (x) g(y); labels combine as in
    tensor_space.
    """
    same_field(f.field, g.field)
    field = f.field
    source = tensor_space(f.source, g.source)
    target = tensor_space(f.target, g.target)
    entries = {}
    for a in f.source.labels:
        fa = f.entries.get(a, {})
        if not fa:
            continue
        sign = field.one if (g.degree * f.source.degree[a]) % 2 == 0 else field.neg(field.one)
        for b in g.source.labels:
            gb = g.entries.get(b, {})
            if not gb:
                continue
            col = {}
            for ta, ca in fa.items():
                for tb, cb in gb.items():
                    col[f"{ta}(x){tb}"] = field.mul(sign, field.mul(ca, cb))
            entries[f"{a}(x){b}"] = col
    return LinearMap(source, target, f.degree + g.degree, entries, check=False)


# ---------------------------------------------------------------------------
# elimination: kernels, ranks, solving


def rref(field, rows, ncols):
    """Reduced row echelon form of a dense matrix (list of lists). Returns
    (rows, pivot column indices)."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if not field.is_zero(rows[i][c]):
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not field.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def kernel_and_rank(m, degree):
    """Kernel basis and rank of a LinearMap restricted to one source degree.

    Unknowns are the source labels of the given degree in lexicographic
    order; the kernel basis is returned in reduced echelon form with
    deterministic pivots, so output is reproducible bit for bit.
    """
    field = m.field
    cols = m.source.in_degree(degree)
    rows_lab = m.target.in_degree(degree + m.degree)
    row_index = {b: i for i, b in enumerate(rows_lab)}
    # matrix of the restriction: one row per target label, one column per source
    mat = [[field.zero] * len(cols) for _ in rows_lab]
    for j, a in enumerate(cols):
        for b, c in m.entries.get(a, {}).items():
            if b in row_index:
                mat[row_index[b]][j] = c
    red, pivots = rref(field, mat, len(cols))
    rank = len(pivots)
    free = [j for j in range(len(cols)) if j not in pivots]
    kernel = []
    for j in free:
        v = {cols[j]: field.one}
        for r, pc in enumerate(pivots):
            c = red[r][j]
            if not field.is_zero(c):
                v[cols[pc]] = field.neg(c)
        kernel.append(v)
    return kernel, rank


def solve(m, degree, target_vector):
    """One solution x (a vector on source labels of ``degree``) of m(x) = b,
    or None if inconsistent."""
    field = m.field
    cols = m.source.in_degree(degree)
    rows_lab = m.target.in_degree(degree + m.degree)
    row_index = {b: i for i, b in enumerate(rows_lab)}
    for b in target_vector:
        if b not in row_index:
            return None
    mat = [[field.zero] * (len(cols) + 1) for _ in rows_lab]
    for j, a in enumerate(cols):
        for b, c in m.entries.get(a, {}).items():
            mat[row_index[b]][j] = c
    for b, c in target_vector.items():
        mat[row_index[b]][len(cols)] = c
    red, pivots = rref(field, mat, len(cols) + 1)
    if len(cols) in pivots:
        return None
    x = {}
    for r, pc in enumerate(pivots):
        c = red[r][len(cols)]
        if not field.is_zero(c):
            x[cols[pc]] = c
    return x


def member_of_span(field, vectors, v):
    """Whether v lies in the span of ``vectors`` (all sparse dicts)."""
    labels = sorted(set().union(*[set(w) for w in vectors], set(v))) if (vectors or v) else []
    idx = {lab: i for i, lab in enumerate(labels)}
    rows = []
    for w in vectors:
        row = [field.zero] * (len(labels) + 1)
        for k, c in w.items():
            row[idx[k]] = c
        rows.append(row)
    # transpose: solve A x = v with columns the given vectors
    mat = [[rows[j][i] for j in range(len(vectors))] + [v.get(labels[i], field.zero)]
           for i in range(len(labels))]
    red, pivots = rref(field, mat, len(vectors) + 1)
    return len(vectors) not in pivots


# ---------------------------------------------------------------------------
# finite complexes


class FiniteComplex:
    """A graded space with a degree +1 differential squaring to zero."""

    def __init__(self, space, d, check=True):
        if d.source is not space or d.target is not space:
            if d.source.basis != space.basis or d.target.basis != space.basis:
                raise ValueError("differential must be an endomap of the space")
        if d.degree != 1:
            raise ValueError("differential must have degree +1")
        self.space = space
        self.field = space.field
        self.d = d
        if check:
            sq = d.compose(d)
            for a, col in sq.entries.items():
                if not vec_is_zero(self.field, col):
                    raise NotAComplex(a, col)

    def homology_dims(self):
        """dim H^n for every degree, as a dict omitting zero entries.

        H^n = dim ker(d^n) - rank(d^(n-1)).
        """
        out = {}
        degs = self.space.degrees()
        ranks = {}
        for n in degs:
            _, ranks[n] = kernel_and_rank(self.d, n)
        for n in degs:
            kernel, _ = kernel_and_rank(self.d, n)
            h = len(kernel) - ranks.get(n - 1, 0)
            if h:
                out[n] = h
        return out

    def __repr__(self):
        return f"FiniteComplex(dim {self.space.dim()})"


def homology_dims(complex_):
    return complex_.homology_dims()
