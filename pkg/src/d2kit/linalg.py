"""Exact dense linear algebra over Q and F_p.

Matrices are immutable-by-convention lists of scalar rows.  The hot paths
(row reduction, matrix products) run on integer numpy arrays with an
overflow guard that promotes int64 to Python-int object arrays, so results
are exact in all cases; scalars only materialize at the API boundary.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .fields import QQ, FieldError, FpScalar, PrimeField, RationalField, mpq

_INT64_SAFE = 2**62


class LinalgError(ValueError):
    pass


def _lcm(a, b):
    return a // math.gcd(a, b) * b


def _to_int_rows(field, rows):
    """Scale scalar rows to integers; returns (list of int lists, denominator)."""
    if isinstance(field, PrimeField):
        return [[x.v for x in row] for row in rows], 1
    den = 1
    for row in rows:
        for x in row:
            den = _lcm(den, int(x.denominator))
    out = []
    for row in rows:
        out.append([int(x.numerator) * (den // int(x.denominator)) for x in row])
    return out, den


class Matrix:
    """Dense matrix over an exact field; entries stored row-major."""

    __slots__ = ("field", "nrows", "ncols", "rows", "_icache")

    def __init__(self, field, rows, _checked=False, ncols=None):
        self.field = field
        self.rows = rows if _checked else [[field.of(x) for x in r] for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else (ncols or 0)
        for r in self.rows:
            if len(r) != self.ncols:
                raise LinalgError("ragged rows")
        self._icache = None

    @classmethod
    def from_rows(cls, field, rows):
        return cls(field, [list(r) for r in rows])

    @classmethod
    def zero(cls, field, nrows, ncols):
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)], _checked=True, ncols=ncols)

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)],
                   _checked=True)

    @classmethod
    def from_flat(cls, field, nrows, ncols, entries):
        if len(entries) != nrows * ncols:
            raise LinalgError("entry count %d != %d x %d" % (len(entries), nrows, ncols))
        return cls(field, [entries[i * ncols:(i + 1) * ncols] for i in range(nrows)])

    @classmethod
    def from_cols(cls, field, cols):
        m = cls(field, [list(r) for r in cols])
        return m.transpose()

    @property
    def entries(self):
        return [x for row in self.rows for x in row]

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def entry(self, i, j):
        return self.rows[i][j]

    def row(self, i):
        return list(self.rows[i])

    def col(self, j):
        return [r[j] for r in self.rows]

    def transpose(self):
        return Matrix(self.field, [list(c) for c in zip(*self.rows)] if self.rows else [],
                      _checked=True, ncols=self.nrows)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and other.field == self.field
                and other.rows == self.rows)

    def __hash__(self):
        return hash((self.field, tuple(tuple(r) for r in self.rows)))

    def __add__(self, other):
        self._compat(other)
        return Matrix(self.field, [[a + b for a, b in zip(r1, r2)]
                                   for r1, r2 in zip(self.rows, other.rows)], _checked=True)

    def __sub__(self, other):
        self._compat(other)
        return Matrix(self.field, [[a - b for a, b in zip(r1, r2)]
                                   for r1, r2 in zip(self.rows, other.rows)], _checked=True)

    def __neg__(self):
        return Matrix(self.field, [[-a for a in r] for r in self.rows], _checked=True)

    def scale(self, c):
        c = self.field.of(c)
        return Matrix(self.field, [[c * a for a in r] for r in self.rows], _checked=True)

    def _compat(self, other):
        if self.field != other.field:
            raise FieldError("field mismatch")
        if self.shape != other.shape:
            raise LinalgError("shape mismatch %s vs %s" % (self.shape, other.shape))

    def _ints(self):
        """Cached integer form: (numpy array int64|object, denominator)."""
        if self._icache is None:
            irows, den = _to_int_rows(self.field, self.rows)
            arr = np.array(irows, dtype=object) if irows else np.zeros((0, self.ncols), dtype=object)
            m = 0
            for row in irows:
                for x in row:
                    if x > m:
                        m = x
                    elif -x > m:
                        m = -x
            if m < _INT64_SAFE:
                arr = arr.astype(np.int64) if irows else np.zeros((0, self.ncols), dtype=np.int64)
            self._icache = (arr, den, int(m))
        return self._icache

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return self.scale(other)
        if self.field != other.field:
            raise FieldError("field mismatch")
        if self.ncols != other.nrows:
            raise LinalgError("inner dimension mismatch %s x %s" % (self.shape, other.shape))
        if self.nrows == 0 or other.ncols == 0:
            return Matrix.zero(self.field, self.nrows, other.ncols)
        a, da, ma = self._ints()
        b, db, mb = other._ints()
        prod = _int_matmul(a, ma, b, mb)
        if isinstance(self.field, PrimeField):
            p = self.field.p
            return Matrix(self.field,
                          [[FpScalar(int(x), p) for x in row] for row in prod.tolist()],
                          _checked=True)
        den = da * db
        return Matrix(self.field,
                      [[mpq(int(x), den) for x in row] for row in prod.tolist()],
                      _checked=True)

    __rmul__ = scale

    def apply(self, vec):
        """Matrix-vector product; vec is a length-ncols scalar list."""
        if len(vec) != self.ncols:
            raise LinalgError("vector length %d != %d" % (len(vec), self.ncols))
        z = self.field.zero
        out = []
        for r in self.rows:
            s = z
            for a, x in zip(r, vec):
                if a and x:
                    s += a * x
            out.append(s)
        return out

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise LinalgError("row count mismatch")
        return Matrix(self.field, [r1 + r2 for r1, r2 in zip(self.rows, other.rows)],
                      _checked=True)

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise LinalgError("column count mismatch")
        return Matrix(self.field, [list(r) for r in self.rows + other.rows], _checked=True)

    def kron(self, other):
        """Kronecker product, row-major tensor convention."""
        out = []
        for r1 in self.rows:
            for r2 in other.rows:
                out.append([a * b for a in r1 for b in r2])
        return Matrix(self.field, out, _checked=True)

    def is_zero(self):
        z = self.field.zero
        return all(x == z for r in self.rows for x in r)

    def __repr__(self):
        fmt = self.field.fmt
        body = "\n".join("  [" + ", ".join(fmt(x) for x in r) + "]" for r in self.rows)
        return "Matrix(%s, %dx%d,\n%s)" % (self.field, self.nrows, self.ncols, body)


def _int_matmul(a, ma, b, mb):
    """Exact product of integer arrays with magnitude guard."""
    inner = a.shape[1] if a.ndim == 2 else len(a)
    bound = ma * mb * max(inner, 1)
    if (a.dtype == np.int64 and b.dtype == np.int64 and bound < _INT64_SAFE):
        return a @ b
    return a.astype(object) @ b.astype(object)


class SpanBuilder:
    """Incremental reduced row-echelon span with optional solve bookkeeping.

    Rows live on integer numpy arrays (projective scaling, content-reduced),
    promoted to object dtype before int64 could overflow.  With ntags > 0 the
    i-th inserted vector carries a unit marker in tag column i, so reducing a
    target against the span recovers exact combination coefficients.
    """

    def __init__(self, field, ncols, ntags=0):
        self.field = field
        self.ncols = ncols
        self.ntags = ntags
        self.width = ncols + ntags
        self.pivots = []            # sorted pivot columns (< ncols)
        self.rowmap = {}            # pivot col -> (array, pivval, maxabs)
        self.ninserted = 0
        self.modp = field.p if isinstance(field, PrimeField) else None

    @property
    def rank(self):
        return len(self.pivots)

    def _vec_to_int(self, vec):
        """Returns (int list padded to width, scale) with exact = scale * ints."""
        if self.modp is not None:
            w = [x.v if isinstance(x, FpScalar) else int(x) % self.modp for x in vec]
            return w + [0] * (self.width - len(w)), 1
        den = 1
        for x in vec:
            den = _lcm(den, int(x.denominator))
        w = [int(x.numerator) * (den // int(x.denominator)) for x in vec]
        return w + [0] * (self.width - len(w)), mpq(1, den)

    def _reduce_arr(self, w, wmax, scale):
        """In-place-style reduction of w by all pivot rows; returns (w, wmax, scale)."""
        p = self.modp
        for pc in self.pivots:
            c = int(w[pc])
            if c == 0:
                continue
            arr, pivval, rmax = self.rowmap[pc]
            if p is not None:
                w = (w - c * arr) % p
                continue
            # w := pivval * w - c * arr  (keeps integers exact)
            nmax = abs(pivval) * wmax + abs(c) * rmax
            if w.dtype == np.int64 and (arr.dtype != np.int64 or nmax >= _INT64_SAFE):
                w = w.astype(object)
            a2 = arr if w.dtype == arr.dtype else arr.astype(object)
            w = pivval * w - c * a2
            wmax = nmax
            scale = scale / pivval
            if wmax >= _INT64_SAFE:
                w, wmax, scale = _content_reduce(w, scale)
        return w, wmax, scale

    def insert(self, vec):
        """Adds vec (length ncols) to the span; returns True if rank grew."""
        ints, scale = self._vec_to_int(vec)
        tag = self.ninserted
        self.ninserted += 1
        if self.ntags:
            if tag >= self.ntags:
                raise LinalgError("more insertions than reserved tags")
            # tagged rows record vec = scale * ints, so the tag carries 1/scale
            if self.modp is not None:
                ints[self.ncols + tag] = 1
            else:
                ints[self.ncols + tag] = int(1 / scale)
        use64 = self.modp is not None and self.modp < 2**31
        if self.modp is None:
            m = max((abs(x) for x in ints), default=0)
            use64 = m < _INT64_SAFE
        w = np.array(ints, dtype=np.int64 if use64 else object)
        wmax = self.modp - 1 if self.modp is not None else max((abs(x) for x in ints), default=0)
        w, wmax, scale = self._reduce_arr(w, wmax, scale)
        lead = _first_nonzero(w, self.ncols)
        if lead is None:
            return False
        if self.modp is not None:
            inv = pow(int(w[lead]), -1, self.modp)
            w = (w * inv) % self.modp
            pivval = 1
            rmax = self.modp - 1
        else:
            w, wmax, scale = _content_reduce(w, scale)
            if w[lead] < 0:
                w = -w
            pivval = int(w[lead])
            rmax = int(wmax)
        # restore reduced-row-echelon shape: clear the new column above
        for pc, (arr, pv, rm) in list(self.rowmap.items()):
            c = int(arr[lead])
            if c == 0:
                continue
            if self.modp is not None:
                arr2 = (arr - c * w) % self.modp
                self.rowmap[pc] = (arr2, 1, self.modp - 1)
                continue
            nmax = abs(pivval) * rm + abs(c) * rmax
            if arr.dtype == np.int64 and (w.dtype != np.int64 or nmax >= _INT64_SAFE):
                arr = arr.astype(object)
            w2 = w if w.dtype == arr.dtype else w.astype(object)
            arr2 = pivval * arr - c * w2
            arr2, _, _ = _content_reduce(arr2, mpq(1))
            if arr2[pc] < 0:
                arr2 = -arr2
            self.rowmap[pc] = (arr2, int(arr2[pc]), int(np.max(np.abs(arr2))) if arr2.dtype == np.int64
                               else max(abs(int(x)) for x in arr2))
        self.rowmap[lead] = (w, pivval, rmax)
        self.pivots.append(lead)
        self.pivots.sort()
        return True

    def residual(self, vec):
        """Exact representative of vec modulo the span (pivot columns zeroed)."""
        ints, scale = self._vec_to_int(vec)
        w = np.array(ints, dtype=object)
        wmax = max((abs(x) for x in ints), default=0)
        w, wmax, scale = self._reduce_arr(w, wmax, scale)
        return self._export(w, scale)[:self.ncols]

    def residual_with_coeffs(self, vec):
        """Reduce vec; returns (residual, coeffs) with
        vec = sum coeffs[i] * inserted[i] + residual."""
        if not self.ntags:
            raise LinalgError("builder created without tags")
        ints, scale = self._vec_to_int(vec)
        w = np.array(ints, dtype=object)
        wmax = max((abs(x) for x in ints), default=0)
        w, wmax, scale = self._reduce_arr(w, wmax, scale)
        out = self._export(w, scale)
        res = out[:self.ncols]
        coeffs = [-c for c in out[self.ncols:self.ncols + self.ninserted]]
        return res, coeffs

    def contains(self, vec):
        z = self.field.zero
        return all(x == z for x in self.residual(vec))

    def _export(self, w, scale):
        if self.modp is not None:
            p = self.modp
            return [FpScalar(int(x), p) for x in w.tolist()]
        return [mpq(int(x)) * scale for x in w.tolist()]

    def basis(self):
        """Pivot-normalized echelon basis rows, sorted by pivot column."""
        out = []
        for pc in self.pivots:
            arr, pivval, _ = self.rowmap[pc]
            if self.modp is not None:
                p = self.modp
                out.append([FpScalar(int(x), p) for x in arr.tolist()[:self.ncols]])
            else:
                out.append([mpq(int(x), pivval) for x in arr.tolist()[:self.ncols]])
        return out

    def basis_matrix(self):
        if self.rank == 0:
            return Matrix.zero(self.field, 0, self.ncols)
        return Matrix(self.field, self.basis(), _checked=True)


def _first_nonzero(w, limit):
    if w.dtype == np.int64:
        nz = np.nonzero(w[:limit])[0]
        return int(nz[0]) if len(nz) else None
    for i in range(limit):
        if w[i]:
            return i
    return None


def _content_reduce(w, scale):
    """Divide an integer vector by its content; scale tracks exactness."""
    if w.dtype == np.int64:
        g = int(np.gcd.reduce(np.abs(w)))
    else:
        g = 0
        for x in w:
            g = math.gcd(g, abs(int(x)))
            if g == 1:
                break
    if g > 1:
        w = w // g
        scale = scale * g
    if w.dtype == object:
        m = max((abs(int(x)) for x in w), default=0)
        if m < _INT64_SAFE:
            w = w.astype(np.int64)
        return w, m, scale
    return w, int(np.max(np.abs(w))) if len(w) else 0, scale


def rref(m):
    """Reduced row-echelon form and pivot columns; row space is preserved."""
    sb = SpanBuilder(m.field, m.ncols)
    for r in m.rows:
        sb.insert(r)
    rows = sb.basis()
    z = [m.field.zero] * m.ncols
    while len(rows) < m.nrows:
        rows.append(list(z))
    return Matrix(m.field, rows, _checked=True), list(sb.pivots)


def rank(m):
    sb = SpanBuilder(m.field, m.ncols)
    for r in m.rows:
        sb.insert(r)
    return sb.rank


def solve_linear(a, b):
    """Some x with a @ x = b, or None if the system is inconsistent."""
    if len(b) != a.nrows:
        raise LinalgError("rhs length %d != %d rows" % (len(b), a.nrows))
    b = [a.field.of(x) for x in b]
    sb = SpanBuilder(a.field, a.nrows, ntags=a.ncols)
    for j in range(a.ncols):
        sb.insert(a.col(j))
    res, coeffs = sb.residual_with_coeffs(b)
    z = a.field.zero
    if any(x != z for x in res):
        return None
    return coeffs


def nullspace(m):
    """Subspace {x : m @ x = 0} with an echelon-canonical basis."""
    r, pivots = rref(m)
    free = [j for j in range(m.ncols) if j not in pivots]
    z, one = m.field.zero, m.field.one
    basis = []
    for f in free:
        v = [z] * m.ncols
        v[f] = one
        for i, p in enumerate(pivots):
            v[p] = -r.rows[i][f]
        basis.append(v)
    return Subspace.from_vectors(m.field, m.ncols, basis)


def rank_factor(m):
    """Factor m = c @ d with inner dimension rank(m)."""
    r, pivots = rref(m)
    k = len(pivots)
    c = Matrix(m.field, [[m.rows[i][p] for p in pivots] for i in range(m.nrows)],
               _checked=True) if k else Matrix.zero(m.field, m.nrows, 0)
    d = Matrix(m.field, [list(r.rows[i]) for i in range(k)], _checked=True) \
        if k else Matrix.zero(m.field, 0, m.ncols)
    return c, d


class Subspace:
    """Subspace of K^n held as a reduced row-echelon basis; membership is exact."""

    __slots__ = ("field", "ambient", "basis", "_pivots")

    def __init__(self, field, ambient, basis, pivots):
        self.field = field
        self.ambient = ambient
        self.basis = basis          # Matrix, rows = echelon basis
        self._pivots = pivots

    @classmethod
    def from_vectors(cls, field, ambient, vecs):
        sb = SpanBuilder(field, ambient)
        for v in vecs:
            sb.insert([field.of(x) for x in v])
        return cls(field, ambient, sb.basis_matrix(), list(sb.pivots))

    @classmethod
    def zero(cls, field, ambient):
        return cls(field, ambient, Matrix.zero(field, 0, ambient), [])

    @classmethod
    def full(cls, field, ambient):
        return cls(field, ambient, Matrix.identity(field, ambient),
                   list(range(ambient)))

    @property
    def dim(self):
        return self.basis.nrows

    def contains(self, vec):
        if len(vec) != self.ambient:
            raise LinalgError("vector length mismatch")
        vec = [self.field.of(x) for x in vec]
        z = self.field.zero
        work = list(vec)
        for i, p in enumerate(self._pivots):
            c = work[p]
            if c == z:
                continue
            row = self.basis.rows[i]
            work = [a - c * b for a, b in zip(work, row)]
        return all(x == z for x in work)

    def coords_of(self, vec):
        """Coefficients of vec in the echelon basis, or None if not a member."""
        vec = [self.field.of(x) for x in vec]
        z = self.field.zero
        work = list(vec)
        coeffs = []
        for i, p in enumerate(self._pivots):
            c = work[p]
            coeffs.append(c)
            if c != z:
                row = self.basis.rows[i]
                work = [a - c * b for a, b in zip(work, row)]
        if any(x != z for x in work):
            return None
        return coeffs

    def contains_subspace(self, other):
        return all(self.contains(r) for r in other.basis.rows)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient == other.ambient
                and self.basis == other.basis)

    def __repr__(self):
        return "Subspace(dim %d of %d over %s)" % (self.dim, self.ambient, self.field)


def intersect(a, b):
    """Intersection of two subspaces of the same ambient space."""
    if a.ambient != b.ambient:
        raise LinalgError("ambient mismatch")
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.field, a.ambient)
    stacked = a.basis.vstack(b.basis).transpose()
    ns = nullspace(stacked)
    vecs = []
    for coeff in ns.basis.rows:
        v = [a.field.zero] * a.ambient
        for c, row in zip(coeff[:a.dim], a.basis.rows):
            if c:
                v = [x + c * y for x, y in zip(v, row)]
        vecs.append(v)
    return Subspace.from_vectors(a.field, a.ambient, vecs)


# ----- exact integer tensor helpers (hot paths) -----------------------------------

class IntTensor:
    """Integer numpy tensor with a common denominator; arithmetic stays exact.

    Over a prime field the tensor carries its modulus and every construction
    normalizes entries into [0, p), so plain integer comparison of two such
    tensors decides equality in the field.
    """

    __slots__ = ("arr", "den", "maxabs", "modulus")

    def __init__(self, arr, den=1, maxabs=None, modulus=None):
        if modulus is not None:
            arr = arr % modulus
            maxabs = None
        self.arr = arr
        self.den = den
        self.modulus = modulus
        if maxabs is None:
            if arr.size == 0:
                maxabs = 0
            elif arr.dtype == object:
                maxabs = max((abs(int(x)) for x in arr.flat), default=0)
            else:
                maxabs = int(np.max(np.abs(arr)))
        self.maxabs = maxabs

    @classmethod
    def from_scalars(cls, field, nested, shape):
        out = []
        def walk(x):
            if isinstance(x, (list, tuple)):
                for y in x:
                    walk(y)
            else:
                out.append(x)
        walk(nested)
        if isinstance(field, PrimeField):
            ints = [x.v if isinstance(x, FpScalar) else int(x) % field.p for x in out]
            den = 1
        else:
            den = 1
            for x in out:
                den = _lcm(den, int(x.denominator))
            ints = [int(x.numerator) * (den // int(x.denominator)) for x in out]
        m = max((abs(v) for v in ints), default=0)
        dtype = np.int64 if m < _INT64_SAFE else object
        arr = np.array(ints, dtype=dtype).reshape(shape)
        return cls(arr, den, m,
                   modulus=field.p if isinstance(field, PrimeField) else None)

    @classmethod
    def from_matrix(cls, mat):
        arr, den, m = mat._ints()
        return cls(arr, den, m,
                   modulus=mat.field.p if isinstance(mat.field, PrimeField) else None)

    def to_scalars(self, field):
        """Flat list of exact scalars."""
        if isinstance(field, PrimeField):
            p = field.p
            inv = pow(self.den % p, -1, p)
            return [FpScalar(int(x) * inv, p) for x in self.arr.flat]
        d = self.den
        return [mpq(int(x), d) for x in self.arr.flat]

    def to_matrix(self, field):
        vals = self.to_scalars(field)
        nrows, ncols = self.arr.shape
        return Matrix.from_flat(field, nrows, ncols, vals)


def einsum_exact(spec, *tensors):
    """np.einsum on IntTensors, exact: int64 when safe, object otherwise."""
    ins, out = spec.split("->")
    in_specs = ins.split(",")
    dims = {}
    for s, t in zip(in_specs, tensors):
        for ch, n in zip(s, t.arr.shape):
            dims[ch] = n
    summed = [ch for ch in dims if ch not in out]
    nterms = 1
    for ch in summed:
        nterms *= dims[ch]
    bound = max(nterms, 1)
    for t in tensors:
        bound *= max(t.maxabs, 1)
    moduli = {t.modulus for t in tensors if t.modulus is not None}
    if len(moduli) > 1:
        raise LinalgError("mixing tensors over different prime fields")
    modulus = moduli.pop() if moduli else None
    arrs = [t.arr for t in tensors]
    if bound < _INT64_SAFE and all(a.dtype == np.int64 for a in arrs):
        res = np.einsum(spec, *arrs, optimize=True)
    else:
        res = np.einsum(spec, *[a.astype(object) for a in arrs], optimize=True)
    den = 1
    for t in tensors:
        den *= t.den
    return IntTensor(res, den, modulus=modulus)


def _common_modulus(a, b):
    if a.modulus is not None and b.modulus is not None and a.modulus != b.modulus:
        raise LinalgError("mixing tensors over different prime fields")
    return a.modulus if a.modulus is not None else b.modulus


def int_tensor_add(a, b):
    """Exact a + b on IntTensors."""
    bound = a.maxabs * b.den + b.maxabs * a.den
    if bound < _INT64_SAFE and a.arr.dtype == np.int64 and b.arr.dtype == np.int64:
        arr = a.arr * b.den + b.arr * a.den
    else:
        arr = a.arr.astype(object) * b.den + b.arr.astype(object) * a.den
    return IntTensor(arr, a.den * b.den, modulus=_common_modulus(a, b))


def int_tensor_sub(a, b):
    """Exact a - b on IntTensors (cross-scaled to a common denominator)."""
    bound = a.maxabs * b.den + b.maxabs * a.den
    if bound < _INT64_SAFE and a.arr.dtype == np.int64 and b.arr.dtype == np.int64:
        arr = a.arr * b.den - b.arr * a.den
    else:
        arr = a.arr.astype(object) * b.den - b.arr.astype(object) * a.den
    return IntTensor(arr, a.den * b.den, modulus=_common_modulus(a, b))


def int_tensors_equal(a, b):
    """Exact equality of two IntTensors (cross-scaled, modulus-aware)."""
    if a.arr.shape != b.arr.shape:
        return False
    p = _common_modulus(a, b)
    if p is not None:
        diff = a.arr.astype(object) * b.den - b.arr.astype(object) * a.den
        return not np.any(diff % p)
    if a.den == b.den:
        return bool(np.array_equal(a.arr, b.arr))
    lhs = a.arr.astype(object) * b.den
    rhs = b.arr.astype(object) * a.den
    return bool(np.array_equal(lhs, rhs))


def int_tensor_is_zero(t):
    if t.modulus is not None:
        return not np.any(t.arr % t.modulus)
    return not np.any(t.arr)


def solve_many(a, targets):
    """Solutions x_i with a @ x_i = targets[i], or None entries when inconsistent."""
    sb = SpanBuilder(a.field, a.nrows, ntags=a.ncols)
    for j in range(a.ncols):
        sb.insert(a.col(j))
    z = a.field.zero
    out = []
    for b in targets:
        res, coeffs = sb.residual_with_coeffs([a.field.of(x) for x in b])
        out.append(None if any(x != z for x in res) else coeffs)
    return out


def vec_add(u, v):
    return [a + b for a, b in zip(u, v)]


def vec_sub(u, v):
    return [a - b for a, b in zip(u, v)]


def vec_scale(c, u):
    return [c * a for a in u]


def vec_is_zero(field, u):
    z = field.zero
    return all(x == z for x in u)


def unit_vector(field, n, i):
    v = [field.zero] * n
    v[i] = field.one
    return v
