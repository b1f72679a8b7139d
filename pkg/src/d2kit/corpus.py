"""Built-in extensions with known ground truth, and small random instances.

Expectations carry a provenance tag: 'fixed' values are anchored facts about
the example, 'trivial' ones are forced by construction, 'derived' ones were
computed by an independent route.  The test-suite checks every expectation
against the toolkit's computed flags.
"""

from __future__ import annotations

import itertools
import random

from .algebras import (Algebra, group_algebra, make_algebra, matrix_algebra,
                       product_algebra, subalgebra_on_basis)
from .extensions import (Extension, NotHomomorphism, identity_extension,
                         make_extension, scalar_extension)
from .fields import QQ
from .linalg import Matrix, Subspace, unit_vector


class NotASubgroup(ValueError):
    pass


# ----- group tables ------------------------------------------------------------------

def cyclic_table(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def s3_table():
    perms = list(itertools.permutations((0, 1, 2)))
    def compose(p, q):
        return tuple(p[q[i]] for i in range(3))
    return [[perms.index(compose(p, q)) for q in perms] for p in perms], perms


def d4_table():
    # r^i s^j with index i + 4j
    def mul(a, b):
        i1, j1 = a % 4, a // 4
        i2, j2 = b % 4, b // 4
        i = (i1 + (i2 if j1 == 0 else -i2)) % 4
        return i + 4 * ((j1 + j2) % 2)
    return [[mul(a, b) for b in range(8)] for a in range(8)]


def q8_table():
    # 1,-1,i,-i,j,-j,k,-k encoded as (unit index 0..3, sign bit)
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    def split(x):
        return x // 2, x % 2          # unit in {1,i,j,k}, sign
    base = {  # quaternion unit products: (unit, sign)
        (0, 0): (0, 0), (0, 1): (1, 0), (0, 2): (2, 0), (0, 3): (3, 0),
        (1, 0): (1, 0), (1, 1): (0, 1), (1, 2): (3, 0), (1, 3): (2, 1),
        (2, 0): (2, 0), (2, 1): (3, 1), (2, 2): (0, 1), (2, 3): (1, 0),
        (3, 0): (3, 0), (3, 1): (2, 0), (3, 2): (1, 1), (3, 3): (0, 1),
    }
    def mul(a, b):
        ua, sa = split(a)
        ub, sb = split(b)
        uc, sc = base[(ua, ub)]
        return uc * 2 + ((sa + sb + sc) % 2)
    return [[mul(a, b) for b in range(8)] for a in range(8)]


def group_subalgebra_extension(field, table, subset, name):
    """Group-algebra pair from a subgroup given by element indices."""
    sub = list(subset)
    for i in sub:
        for j in sub:
            if table[i][j] not in sub:
                raise NotASubgroup("subset is not closed under the product")
    sub_table = [[sub.index(table[i][j]) for j in sub] for i in sub]
    g = group_algebra(field, table, name=name.split("|")[0])
    h = group_algebra(field, sub_table, name="sub")
    cols = []
    for i in sub:
        v = [field.zero] * len(table)
        v[i] = field.one
        cols.append(v)
    return make_extension(h, g, Matrix.from_cols(field, cols), name=name)


def is_normal_subgroup(table, subset):
    sub = set(subset)
    n = len(table)
    inv = {}
    ident = next(e for e in range(n)
                 if all(table[e][x] == x for x in range(n)))
    for g in range(n):
        inv[g] = next(x for x in range(n) if table[g][x] == ident)
    return all(table[table[g][h]][inv[g]] in sub
               for g in range(n) for h in sub)


# ----- corpus cases ------------------------------------------------------------------


class CorpusCase:
    """Named extension with tagged expectations.

    expected maps flag -> (value, provenance); dims maps name -> (value,
    provenance).  heavy marks cases whose endomorphism-level stages dominate
    the runtime budget.
    """

    def __init__(self, name, builder, expected=None, dims=None, heavy=False):
        self.name = name
        self._builder = builder
        self.expected = expected or {}
        self.dims = dims or {}
        self.heavy = heavy
        self._ext = None

    def extension(self, field=QQ):
        if self._ext is None or self._ext.field != field:
            self._ext = self._builder(field)
        return self._ext

    def manifest_entry(self):
        return {
            "name": self.name,
            "expected": {k: {"value": v, "provenance": p}
                         for k, (v, p) in self.expected.items()},
            "dims": {k: {"value": v, "provenance": p}
                     for k, (v, p) in self.dims.items()},
        }


def _upper_triangular_2x2(field):
    z, o = field.zero, field.one
    st = [[[z] * 3 for _ in range(3)] for _ in range(3)]
    st[0][0][0] = o    # e11 e11 = e11
    st[0][1][1] = o    # e11 e12 = e12
    st[1][2][1] = o    # e12 e22 = e12
    st[2][2][2] = o    # e22 e22 = e22
    return make_algebra(field, st, [1, 0, 1], name="UT2")


def paper_matrix_example(field=QQ):
    """The 3x3 matrix algebra over left multiplications by upper-triangular
    2x2 matrices in the ordered basis (e11, e12, e22) of that algebra."""
    b = _upper_triangular_2x2(field)
    a = matrix_algebra(field, 3)
    z, o = field.zero, field.one
    def unitmat(*entries):
        v = [z] * 9
        for (u, w) in entries:
            v[u * 3 + w] = o
        return v
    emb = Matrix.from_cols(field, [unitmat((0, 0), (1, 1)),
                                   unitmat((1, 2)),
                                   unitmat((2, 2))])
    return make_extension(b, a, emb, name="paper-matrix")


def _m2_over_diagonal(field):
    a = matrix_algebra(field, 2)
    one_dim = make_algebra(field, [[[field.one]]], [field.one], name="K")
    b = product_algebra(one_dim, one_dim, name="diag")
    z, o = field.zero, field.one
    emb = Matrix.from_cols(field, [[o, z, z, z], [z, z, z, o]])
    return make_extension(b, a, emb, name="m2-over-diagonal")


def _qq_identity(field):
    one_dim = make_algebra(field, [[[field.one]]], [field.one], name="K")
    b = product_algebra(one_dim, one_dim, name="KxK")
    return identity_extension(b)


def trivial_extension(a):
    """K -> A; always D2 on both sides."""
    return scalar_extension(a)


def group_pair(field, table, subset, name):
    """Group-algebra pair; the expected D2 flag is normality of the subgroup."""
    ext = group_subalgebra_extension(field, table, subset, name)
    normal = is_normal_subgroup(table, subset)
    return ext, normal


def builtin_cases():
    # the alternating subgroup is the two 3-cycles plus the identity
    perms = list(itertools.permutations((0, 1, 2)))
    a3 = [perms.index(p) for p in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]]
    transposition = [perms.index(p) for p in [(0, 1, 2), (1, 0, 2)]]
    cases = [
        CorpusCase(
            "trivial-q",
            lambda f: identity_extension(make_algebra(f, [[[f.one]]], [f.one],
                                                      name="K")),
            expected={"proper": (True, "trivial"),
                      "right_d2": (True, "trivial"),
                      "left_d2": (True, "trivial"),
                      "h_separable": (True, "trivial"),
                      "frobenius": (True, "trivial"),
                      "split": (True, "trivial"),
                      "balanced_right": (True, "trivial"),
                      "kanzaki_base": (True, "trivial")},
        ),
        CorpusCase(
            "qq-identity",
            _qq_identity,
            expected={"right_d2": (True, "trivial"),
                      "left_d2": (True, "trivial"),
                      "kanzaki_base": (True, "trivial")},
        ),
        CorpusCase(
            "identity-m2",
            lambda f: identity_extension(matrix_algebra(f, 2)),
            expected={"right_d2": (True, "trivial"),
                      "left_d2": (True, "trivial"),
                      "h_separable": (True, "trivial"),
                      "balanced_right": (True, "trivial")},
        ),
        CorpusCase(
            "m2-over-scalars",
            lambda f: trivial_extension(matrix_algebra(f, 2)),
            expected={"right_d2": (True, "trivial"),
                      "left_d2": (True, "trivial"),
                      "h_separable": (True, "derived"),
                      "balanced_right": (True, "trivial"),
                      "kanzaki_base": (True, "trivial")},
        ),
        CorpusCase(
            "paper-base",
            lambda f: trivial_extension(_upper_triangular_2x2(f)),
            expected={"right_d2": (True, "trivial"),
                      "left_d2": (True, "trivial"),
                      "kanzaki_base": (True, "trivial"),
                      "frobenius": (False, "fixed")},
        ),
        CorpusCase(
            "m2-over-diagonal",
            _m2_over_diagonal,
            expected={"right_d2": (True, "derived"),
                      "left_d2": (True, "derived"),
                      "kanzaki_base": (True, "derived"),
                      "split": (True, "derived"),
                      "frobenius": (True, "derived")},
        ),
        CorpusCase(
            "s3-over-a3",
            lambda f: group_subalgebra_extension(f, s3_table()[0], a3,
                                                 "QS3|QA3"),
            expected={"proper": (True, "trivial"),
                      "right_d2": (True, "fixed"),
                      "left_d2": (True, "fixed"),
                      "frobenius": (True, "derived"),
                      "split": (True, "derived"),
                      "balanced_right": (True, "derived"),
                      "kanzaki_base": (True, "derived")},
            dims={"tensor_square": (12, "derived"),
                  "end_left": (12, "derived")},
        ),
        CorpusCase(
            "s3-over-transposition",
            lambda f: group_subalgebra_extension(f, s3_table()[0],
                                                 transposition, "QS3|QC2"),
            expected={"right_d2": (False, "fixed"),
                      "left_d2": (False, "fixed"),
                      "frobenius": (True, "derived"),
                      "split": (True, "derived")},
        ),
        CorpusCase(
            "d4-over-center",
            lambda f: group_subalgebra_extension(f, d4_table(), [0, 2],
                                                 "QD4|Z"),
            expected={"right_d2": (True, "fixed"),
                      "left_d2": (True, "fixed"),
                      "frobenius": (True, "derived"),
                      "kanzaki_base": (True, "derived")},
            heavy=True,
        ),
        CorpusCase(
            "paper-matrix",
            lambda f: paper_matrix_example(f),
            expected={"proper": (True, "fixed"),
                      "h_separable": (True, "fixed"),
                      "right_d2": (True, "fixed"),
                      "left_d2": (True, "fixed"),
                      "frobenius": (False, "fixed"),
                      "split": (False, "fixed"),
                      "kanzaki_base": (False, "derived")},
            dims={"centralizer": (3, "fixed"),
                  "tensor_square": (27, "fixed"),
                  "end_left": (27, "fixed"),
                  "hom_r_a": (27, "fixed")},
            heavy=True,
        ),
    ]
    return cases


def case_by_name(name):
    for c in builtin_cases():
        if c.name == name:
            return c
    raise KeyError("unknown corpus case %r" % name)


def corpus_manifest():
    return {"schema": "d2kit-corpus/1",
            "cases": [c.manifest_entry() for c in builtin_cases()]}


# ----- random instances --------------------------------------------------------------


def _random_subalgebra(field, ambient, rng, max_dim):
    """Unital subalgebra generated by a random element, if small enough."""
    n = ambient.dim
    for _ in range(24):
        x = [field.of(rng.randint(-1, 1)) for _ in range(n)]
        gens = [list(ambient.unit), x]
        span = Subspace.from_vectors(field, n, gens)
        changed = True
        while changed:
            changed = False
            rows = [list(r) for r in span.basis.rows]
            new_rows = list(rows)
            for u in rows:
                for v in rows:
                    w = ambient.mul_vec(u, v)
                    if not span.contains(w):
                        new_rows.append(w)
                        changed = True
            if changed:
                span = Subspace.from_vectors(field, n, new_rows)
        if 1 < span.dim <= max_dim:
            try:
                alg, inc = subalgebra_on_basis(
                    ambient, [list(r) for r in span.basis.rows], name="rand-B")
            except Exception:
                continue
            return alg, inc
    return None


def random_extension(seed, field=QQ, max_dim_a=6):
    """Seed-reproducible random extension inside a structured ambient algebra."""
    rng = random.Random(seed)
    choice = rng.randrange(3)
    if choice == 0:
        a = group_algebra(field, cyclic_table(rng.randint(3, max_dim_a)),
                          name="KC")
    elif choice == 1:
        a = matrix_algebra(field, 2)
    else:
        one_dim = make_algebra(field, [[[field.one]]], [field.one], name="K")
        a = product_algebra(group_algebra(field, cyclic_table(rng.randint(2, 3))),
                            one_dim, name="KCxK")
    got = _random_subalgebra(field, a, rng, max_dim=a.dim)
    if got is None:
        return scalar_extension(a)
    b, inc = got
    return Extension(b, a, inc, name="random-%d" % seed)
