"""Finite-dimensional unital associative algebras given by structure constants.

An algebra is the data c[i][j][k] with e_i e_j = sum_k c[i][j][k] e_k plus the
coordinate vector of 1.  Associativity and unitality are checked eagerly at
construction; every downstream identity assumes them.
"""

from __future__ import annotations

from .fields import field_from_name
from .linalg import (LinalgError, Matrix, Subspace, rank, solve_linear,
                     unit_vector, vec_is_zero)


class AlgebraError(ValueError):
    pass


class NotAssociative(AlgebraError):
    pass


class NotUnital(AlgebraError):
    pass


class NotAGroup(AlgebraError):
    pass


class AlgebraMismatch(AlgebraError):
    pass


class Algebra:
    """Structure-constant algebra over an exact field."""

    def __init__(self, field, structure, unit, name="A", _validate=True):
        self.field = field
        self.dim = len(structure)
        self.name = name
        self.structure = [[[field.of(x) for x in row] for row in plane]
                          for plane in structure]
        self.unit = [field.of(x) for x in unit]
        if len(self.unit) != self.dim:
            raise AlgebraError("unit length %d != dim %d" % (len(self.unit), self.dim))
        for plane in self.structure:
            if len(plane) != self.dim or any(len(r) != self.dim for r in plane):
                raise AlgebraError("structure tensor is not dim^3")
        self._left = None
        self._right = None
        if _validate:
            self._validate()

    # ----- multiplication tables -------------------------------------------------

    def left_mult_basis(self):
        """L_i with (e_i x)_k = sum_j L_i[k][j] x_j."""
        if self._left is None:
            self._left = [
                Matrix(self.field,
                       [[self.structure[i][j][k] for j in range(self.dim)]
                        for k in range(self.dim)], _checked=True)
                for i in range(self.dim)]
        return self._left

    def right_mult_basis(self):
        """R_j with (x e_j)_k = sum_i R_j[k][i] x_i."""
        if self._right is None:
            self._right = [
                Matrix(self.field,
                       [[self.structure[i][j][k] for i in range(self.dim)]
                        for k in range(self.dim)], _checked=True)
                for j in range(self.dim)]
        return self._right

    def left_mult(self, coords):
        """Matrix of x -> a x for a given by coords."""
        out = Matrix.zero(self.field, self.dim, self.dim)
        for i, c in enumerate(coords):
            if c:
                out = out + self.left_mult_basis()[i].scale(c)
        return out

    def right_mult(self, coords):
        out = Matrix.zero(self.field, self.dim, self.dim)
        for j, c in enumerate(coords):
            if c:
                out = out + self.right_mult_basis()[j].scale(c)
        return out

    def mul_vec(self, x, y):
        """Coordinates of the product of two coordinate vectors."""
        z = self.field.zero
        out = [z] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            plane = self.structure[i]
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = a * b
                row = plane[j]
                for k in range(self.dim):
                    ck = row[k]
                    if ck:
                        out[k] = out[k] + ab * ck
        return out

    def basis_vec(self, i):
        return unit_vector(self.field, self.dim, i)

    def element(self, coords):
        return AlgebraElement(self, [self.field.of(x) for x in coords])

    @property
    def one(self):
        return AlgebraElement(self, list(self.unit))

    # ----- validation ------------------------------------------------------------

    def _validate(self):
        d = self.dim
        for i in range(d):
            for j in range(d):
                ij = self.structure[i][j]
                for k in range(d):
                    lhs = self.mul_vec(ij, self.basis_vec(k))
                    rhs = self.mul_vec(self.basis_vec(i), self.structure[j][k])
                    if lhs != rhs:
                        raise NotAssociative(
                            "(e%d e%d) e%d != e%d (e%d e%d)" % (i, j, k, i, j, k))
        for i in range(d):
            e = self.basis_vec(i)
            if self.mul_vec(self.unit, e) != e:
                raise NotUnital("1 * e%d != e%d" % (i, i))
            if self.mul_vec(e, self.unit) != e:
                raise NotUnital("e%d * 1 != e%d" % (i, i))

    def is_commutative(self):
        for i in range(self.dim):
            for j in range(i):
                if self.structure[i][j] != self.structure[j][i]:
                    return False
        return True

    def __eq__(self, other):
        return (isinstance(other, Algebra) and other.field == self.field
                and other.structure == self.structure and other.unit == self.unit)

    def __repr__(self):
        return "Algebra(%s, dim %d over %s)" % (self.name, self.dim, self.field)


class AlgebraElement:
    """Coordinate vector tied to its algebra; cross-algebra arithmetic is an error."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra, coords):
        if len(coords) != algebra.dim:
            raise AlgebraError("coordinate length mismatch")
        self.algebra = algebra
        self.coords = coords

    def _same(self, other):
        if not isinstance(other, AlgebraElement) or other.algebra is not self.algebra:
            raise AlgebraMismatch("elements live in different algebras")

    def __add__(self, other):
        self._same(other)
        return AlgebraElement(self.algebra,
                              [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._same(other)
        return AlgebraElement(self.algebra,
                              [a - b for a, b in zip(self.coords, other.coords)])

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._same(other)
            return AlgebraElement(self.algebra,
                                  self.algebra.mul_vec(self.coords, other.coords))
        c = self.algebra.field.of(other)
        return AlgebraElement(self.algebra, [c * a for a in self.coords])

    def __rmul__(self, other):
        c = self.algebra.field.of(other)
        return AlgebraElement(self.algebra, [c * a for a in self.coords])

    def __neg__(self):
        return AlgebraElement(self.algebra, [-a for a in self.coords])

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement) and other.algebra is self.algebra
                and other.coords == self.coords)

    def is_zero(self):
        return vec_is_zero(self.algebra.field, self.coords)

    def is_invertible(self):
        return rank(self.algebra.left_mult(self.coords)) == self.algebra.dim

    def inverse(self):
        x = solve_linear(self.algebra.left_mult(self.coords), self.algebra.unit)
        if x is None:
            raise AlgebraError("element is not invertible")
        return AlgebraElement(self.algebra, x)

    def __repr__(self):
        fmt = self.algebra.field.fmt
        return "El(%s | %s)" % (self.algebra.name, ", ".join(fmt(c) for c in self.coords))


def make_algebra(field, structure, unit, name="A"):
    """Validated structure-constant algebra; errors name the failing witness."""
    return Algebra(field, structure, unit, name=name)


def mul(x, y):
    return x * y


def is_invertible(x):
    return x.is_invertible()


def opposite(a):
    """Same space, reversed multiplication; an involution on the raw data."""
    d = a.dim
    structure = [[a.structure[j][i] for j in range(d)] for i in range(d)]
    name = a.name[:-3] if a.name.endswith("^op") else a.name + "^op"
    return Algebra(a.field, structure, list(a.unit), name=name, _validate=False)


def matrix_algebra(field, n, name=None):
    """Full matrix algebra on matrix units e_uv, flattened as u*n+v."""
    d = n * n
    z, o = field.zero, field.one
    structure = [[[z] * d for _ in range(d)] for _ in range(d)]
    for u in range(n):
        for v in range(n):
            for w in range(n):
                for x in range(n):
                    if v == w:
                        structure[u * n + v][w * n + x][u * n + x] = o
    unit = [z] * d
    for u in range(n):
        unit[u * n + u] = o
    return Algebra(field, structure, unit, name=name or ("M%d" % n), _validate=False)


def check_group_table(table):
    """Validates a Cayley table on {0..n-1}; returns the identity element."""
    n = len(table)
    for row in table:
        if len(row) != n or any(not (0 <= x < n) for x in row):
            raise NotAGroup("table is not n x n over 0..n-1")
    ident = None
    for e in range(n):
        if all(table[e][x] == x and table[x][e] == x for x in range(n)):
            ident = e
            break
    if ident is None:
        raise NotAGroup("no identity element")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if table[table[i][j]][k] != table[i][table[j][k]]:
                    raise NotAGroup("table not associative at (%d,%d,%d)" % (i, j, k))
    for i in range(n):
        if not any(table[i][j] == ident for j in range(n)):
            raise NotAGroup("element %d has no inverse" % i)
    return ident


def group_algebra(field, table, name="KG"):
    """Group algebra on a validated Cayley table."""
    ident = check_group_table(table)
    n = len(table)
    z, o = field.zero, field.one
    structure = [[[z] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            structure[i][j][table[i][j]] = o
    unit = [z] * n
    unit[ident] = o
    return Algebra(field, structure, unit, name=name, _validate=False)


def product_algebra(a, b, name=None):
    """Direct product; unit is (1, 1)."""
    if a.field != b.field:
        raise AlgebraMismatch("product factors over different fields")
    d = a.dim + b.dim
    z = a.field.zero
    structure = [[[z] * d for _ in range(d)] for _ in range(d)]
    for i in range(a.dim):
        for j in range(a.dim):
            for k in range(a.dim):
                structure[i][j][k] = a.structure[i][j][k]
    for i in range(b.dim):
        for j in range(b.dim):
            for k in range(b.dim):
                structure[a.dim + i][a.dim + j][a.dim + k] = b.structure[i][j][k]
    unit = list(a.unit) + list(b.unit)
    return Algebra(a.field, structure, unit,
                   name=name or ("%sx%s" % (a.name, b.name)), _validate=False)


def subalgebra_on_basis(ambient, basis_rows, name="sub"):
    """Algebra structure on a multiplicatively closed subspace of an ambient algebra.

    basis_rows: list of coordinate vectors in the ambient algebra.  Returns
    (Algebra, inclusion matrix ambient-dim x sub-dim) on the echelonized basis.
    Raises AlgebraError if the span is not closed or lacks the ambient unit.
    """
    field = ambient.field
    sub = Subspace.from_vectors(field, ambient.dim, basis_rows)
    if sub.dim != len(basis_rows):
        raise AlgebraError("basis rows are dependent")
    rows = [list(r) for r in sub.basis.rows]
    d = len(rows)
    structure = []
    for x in rows:
        plane = []
        for y in rows:
            prod = ambient.mul_vec(x, y)
            coords = sub.coords_of(prod)
            if coords is None:
                raise AlgebraError("subspace is not closed under multiplication")
            plane.append(coords)
        structure.append(plane)
    unit = sub.coords_of(ambient.unit)
    if unit is None:
        raise AlgebraError("subspace does not contain the unit")
    inclusion = Matrix(field, rows, _checked=True).transpose()
    alg = Algebra(field, structure, unit, name=name, _validate=False)
    return alg, inclusion


# ----- JSON descriptors ----------------------------------------------------------

def algebra_to_json(a):
    enc = a.field.to_json
    return {
        "field": a.field.name,
        "dim": a.dim,
        "structure": [[[enc(x) for x in row] for row in plane] for plane in a.structure],
        "unit": [enc(x) for x in a.unit],
        "name": a.name,
    }


def algebra_from_json(obj):
    field = field_from_name(obj["field"])
    structure = [[[field.of(x) for x in row] for row in plane]
                 for plane in obj["structure"]]
    unit = [field.of(x) for x in obj["unit"]]
    a = Algebra(field, structure, unit, name=obj.get("name", "A"))
    if a.dim != obj["dim"]:
        raise AlgebraError("declared dim %d != %d" % (obj["dim"], a.dim))
    return a
