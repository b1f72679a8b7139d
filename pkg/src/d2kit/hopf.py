"""Symmetric separability elements and the antipode on the tensor-square.

Over a base algebra with a symmetric separability element e (e^1 e^2 = 1 =
e^2 e^1, be = eb, e^1 b (x) e^2 = e^1 (x) b e^2), the flip-and-project map
tau(t) = e^1 t^2 (x) t^1 e^2 is an antipode for the opposite co-opposite
tensor-square bialgebroid; the verifier checks anti-multiplicativity,
involutivity, the antipode axioms in T (x)_{R^op} T quotient coordinates,
and the displayed intermediate tensor identities.
"""

from __future__ import annotations

import numpy as np

from .bialgebroids import (AxiomFailure, AxiomReport, _model_context,
                           build_T, cop_transform, op_transform)
from .depth2 import right_d2_quasibase
from .extensions import ExtensionError, tensor_coords
from .linalg import (IntTensor, Matrix, SpanBuilder, Subspace, einsum_exact,
                     int_tensors_equal, nullspace, solve_linear, unit_vector,
                     vec_is_zero)
from .tensorspace import _tee_reps_tensor, build_tee_square


class NotInT(ExtensionError):
    """The antipode candidate left the B-central part: an implementation bug."""


class SeparabilityElement:
    """e in B (x)_K B, symmetric and separating; coords are row-major."""

    def __init__(self, b, coords):
        self.b = b
        self.coords = list(coords)

    def pairs(self):
        n = self.b.dim
        out = []
        for idx, c in enumerate(self.coords):
            if c:
                u, v = divmod(idx, n)
                out.append((u, v, c))
        return out

    def verify(self):
        b = self.b
        field = b.field
        n = b.dim
        mul = IntTensor.from_scalars(field, b.structure, (n, n, n))
        e = IntTensor.from_scalars(field, [self.coords], (1, n * n))
        eT = IntTensor(e.arr.reshape(n, n), e.den, modulus=e.modulus)
        one = IntTensor.from_scalars(field, [list(b.unit)], (1, n))
        m1 = einsum_exact("uv,uvm->m", eT, mul)
        m2 = einsum_exact("uv,vum->m", eT, mul)
        if not int_tensors_equal(m1, IntTensor(one.arr.reshape(n), one.den, modulus=one.modulus)):
            return False
        if not int_tensors_equal(m2, IntTensor(one.arr.reshape(n), one.den, modulus=one.modulus)):
            return False
        for i in range(n):
            li = IntTensor.from_matrix(b.left_mult_basis()[i])
            ri = IntTensor.from_matrix(b.right_mult_basis()[i])
            # b e = e b
            lhs = einsum_exact("xu,uv->xv", li, eT)
            rhs = einsum_exact("uv,xv->ux", eT, ri)
            if not int_tensors_equal(lhs, IntTensor(rhs.arr, rhs.den, modulus=rhs.modulus)):
                return False
            # e^1 b (x) e^2 = e^1 (x) b e^2
            lhs = einsum_exact("uv,xu->xv", eT, ri)
            rhs = einsum_exact("uv,xv->ux", eT, li)
            if not int_tensors_equal(lhs, rhs):
                return False
        return True


def _kanzaki_solutions(b):
    """Echelon data of the affine space of symmetric separability elements."""
    field = b.field
    n = b.dim
    amb = n * n
    sb = SpanBuilder(field, amb)
    z = field.zero
    for i in range(n):
        li = b.left_mult_basis()[i]
        ri = b.right_mult_basis()[i]
        for u in range(n):
            for v in range(n):
                # (L_i (x) I - I (x) R_i) e = 0, row for output (u, v)
                row = [z] * amb
                for w in range(n):
                    c = li.rows[u][w]
                    if c:
                        row[w * n + v] = row[w * n + v] + c
                    c2 = ri.rows[v][w]
                    if c2:
                        row[u * n + w] = row[u * n + w] - c2
                sb.insert(row)
                # (R_i (x) I - I (x) L_i) e = 0
                row = [z] * amb
                for w in range(n):
                    c = ri.rows[u][w]
                    if c:
                        row[w * n + v] = row[w * n + v] + c
                    c2 = li.rows[v][w]
                    if c2:
                        row[u * n + w] = row[u * n + w] - c2
                sb.insert(row)
    linear = nullspace(sb.basis_matrix()) if sb.rank else Subspace.full(field, amb)
    if linear.dim == 0:
        return None
    # affine conditions mu(e) = 1 and mu(swap(e)) = 1 within the linear space
    rows = []
    rhs = []
    for m in range(n):
        row1 = []
        row2 = []
        for k in range(linear.dim):
            vec = linear.basis.rows[k]
            s1 = field.zero
            s2 = field.zero
            for idx, c in enumerate(vec):
                if not c:
                    continue
                u, v = divmod(idx, n)
                s1 = s1 + c * b.structure[u][v][m]
                s2 = s2 + c * b.structure[v][u][m]
            row1.append(s1)
            row2.append(s2)
        rows.append(row1)
        rhs.append(b.unit[m])
        rows.append(row2)
        rhs.append(b.unit[m])
    system = Matrix(field, rows, _checked=True)
    sol = solve_linear(system, rhs)
    if sol is None:
        return None
    base = [field.zero] * amb
    for c, vec in zip(sol, linear.basis.rows):
        if c:
            base = [x + c * y for x, y in zip(base, vec)]
    kernel = nullspace(system)
    directions = []
    for kv in kernel.basis.rows:
        d = [field.zero] * amb
        for c, vec in zip(kv, linear.basis.rows):
            if c:
                d = [x + c * y for x, y in zip(d, vec)]
        directions.append(d)
    return base, directions


def kanzaki_element(b):
    """Canonical symmetric separability element of b, or None."""
    got = _kanzaki_solutions(b)
    if got is None:
        return None
    base, _ = got
    e = SeparabilityElement(b, base)
    if not e.verify():
        raise AxiomFailure("separability solve returned an invalid element")
    return e


def second_kanzaki_element(b):
    """A second solution along the first kernel direction, when one exists."""
    got = _kanzaki_solutions(b)
    if got is None:
        return None
    base, directions = got
    if not directions:
        return None
    e2 = SeparabilityElement(b, [x + y for x, y in zip(base, directions[0])])
    if not e2.verify():
        raise AxiomFailure("second separability element failed its invariant")
    return e2


def antipode(ext, e):
    """tau(t) = e^1 t^2 (x) t^1 e^2 on tensor-square coordinates of T."""
    field = ext.field
    tee = ext.tee()
    n = ext.a.dim
    q2 = ext.tensor_square()
    emb = ext.emb
    epairs = [(emb.col(u), emb.col(v), c) for (u, v, c) in e.pairs()]
    cols = []
    for t in range(tee.dim):
        rep = tee.rep_in_ambient(unit_vector(field, tee.dim, t))
        out = [field.zero] * (n * n)
        for idx, c in enumerate(rep):
            if not c:
                continue
            p, q = divmod(idx, n)
            for (e1, e2, ce) in epairs:
                left = ext.a.mul_vec(e1, ext.a.basis_vec(q))
                right = ext.a.mul_vec(ext.a.basis_vec(p), e2)
                cc = c * ce
                for k1, c1 in enumerate(left):
                    if not c1:
                        continue
                    for k2, c2 in enumerate(right):
                        if c2:
                            out[k1 * n + k2] = out[k1 * n + k2] + cc * c1 * c2
        coords = tee.subspace.coords_of(q2.project(out))
        if coords is None:
            raise NotInT("antipode value escaped the B-central part")
        cols.append(coords)
    return Matrix.from_cols(field, cols)


class HopfAlgebroid:
    """Opposite co-opposite tensor-square bialgebroid with its antipode."""

    def __init__(self, ext, qb, e, tau=None):
        self.ext = ext
        self.qb = qb
        self.e = e
        t_bi = build_T(ext, qb)
        self.t_bialgebroid = t_bi
        self.bialgebroid = cop_transform(op_transform(t_bi))
        self.tau = tau if tau is not None else antipode(ext, e)

    def verify(self, check_second_element=True):
        return verify_hopf(self, check_second_element=check_second_element)


def _mop_tensor(tee):
    """Structure constants of the opposite multiplication on T."""
    field = tee.field
    d = tee.dim
    nested = [[tee.structure[j][i] for j in range(d)] for i in range(d)]
    return IntTensor.from_scalars(field, nested, (d, d, d))


def verify_hopf(h, check_second_element=True):
    """Anti-automorphism, involutivity and the three antipode axioms."""
    rep = AxiomReport("Hopf algebroid")
    ext = h.ext
    field = ext.field
    tee = ext.tee()
    d = tee.dim
    tau = IntTensor.from_matrix(h.tau)
    mop = _mop_tensor(tee)
    # (i) tau(x o y) = tau(y) o tau(x) for the opposite product
    lhs = einsum_exact("ijk,mk->ijm", mop, tau)
    t1 = einsum_exact("aj,bi->ijab", tau, tau)
    rhs = einsum_exact("ijab,abm->ijm", t1, mop)
    rep.add("antipode-antimultiplicative", int_tensors_equal(lhs, rhs),
            "tau(t o t') != tau(t') o tau(t)")
    # (ii) tau^2 = id
    sq = h.tau * h.tau
    rep.add("antipode-involutive", sq == Matrix.identity(field, d),
            "tau^2 != id")
    # (iii) tau . t_L = s_L
    rep.add("antipode-on-target", h.tau * tee.tau == tee.sigma,
            "tau(r (x) 1) != 1 (x) r")
    # axioms (iv) and (v) in T (x)_{R^op} T coordinates
    bi = h.bialgebroid
    tsq_rop = bi.tsq
    dm = bi.comult          # Delta, reinterpreted through the swapped view
    sect_pairs = _cop_ambient(bi, d)
    okl, okr = _antipode_axioms(h, sect_pairs, tsq_rop, mop, tau)
    rep.add("antipode-axiom-left", okl, "tau^{-1}(t_(2)) axiom fails")
    rep.add("antipode-axiom-right", okr, "tau(t_(1)) axiom fails")
    # intermediate displayed identities
    rep.add("intermediate-tensor-identity", _intermediate_identity(h),
            "three-fold tensor form differs")
    rep.add("separability-transport-identity", _transport_identity(h),
            "flattened quasibase identity fails")
    if check_second_element:
        e2 = second_kanzaki_element(ext.b)
        if e2 is None:
            rep.add("second-element-probe", True, "")
        else:
            tau2 = antipode(ext, e2)
            h2 = HopfAlgebroid(ext, h.qb, e2, tau=tau2)
            r2 = verify_hopf(h2, check_second_element=False)
            same = tau2 == h.tau
            note = "second element gives %s antipode; axioms %s" % (
                "the same" if same else "a different",
                "pass" if r2.passed else "fail")
            rep.add("second-element-probe", r2.passed, note)
    return rep


def _cop_ambient(bi, d):
    """Ambient pair expansion of the co-opposite comultiplication."""
    field = bi.total.field
    cols = []
    for t in range(d):
        w = bi.comult.col(t)
        amb = bi.tsq.section_vec(w)
        cols.append(amb)
    return cols


def _antipode_axioms(h, sect_pairs, tsq_rop, mop, tau):
    ext = h.ext
    field = ext.field
    tee = ext.tee()
    d = tee.dim
    damb = IntTensor.from_scalars(field, sect_pairs, (d, d, d))
    # damb[t, i, j]: Delta^op(t) = sum t_(1)=i (x) t_(2)=j in swapped-pair coords
    x1 = einsum_exact("tij,mj->tim", damb, tau)            # tau(t_(2))
    x2 = einsum_exact("tim,mkl->tikl", x1, damb)           # Delta^op(tau(t_(2)))
    lhs_pairs = einsum_exact("tikl,lis->tks", x2, mop)     # t_k (x) (t_l o t_(1))
    okl = True
    for t in range(d):
        vec = IntTensor(lhs_pairs.arr[t].reshape(d * d), lhs_pairs.den, modulus=lhs_pairs.modulus)
        got = tsq_rop.project(vec.to_scalars(field))
        want = tsq_rop.project(tensor_coords(field, d, list(h.tau.col(t)),
                                             list(tee.unit)))
        if got != want:
            okl = False
            break
    y1 = einsum_exact("tij,mi->tmj", damb, tau)            # tau(t_(1))
    y2 = einsum_exact("tmj,mkl->tjkl", y1, damb)           # Delta^op(tau(t_(1)))
    rhs_pairs = einsum_exact("tjkl,kjs->tsl", y2, mop)     # (t_k o t_(2)) (x) t_l
    okr = True
    for t in range(d):
        vec = IntTensor(rhs_pairs.arr[t].reshape(d * d), rhs_pairs.den, modulus=rhs_pairs.modulus)
        got = tsq_rop.project(vec.to_scalars(field))
        want = tsq_rop.project(tensor_coords(field, d, list(tee.unit),
                                             list(h.tau.col(t))))
        if got != want:
            okr = False
            break
    return okl, okr


def _intermediate_identity(h):
    """e^1 (x) t^2 gamma_k(t^1) u_k^1 (x) u_k^2 e^2 = 1 (x) e^1 t^2 (x) t^1 e^2
    in three-fold tensor-power coordinates."""
    ext = h.ext
    field = ext.field
    qb = right_d2_quasibase(ext)
    ctx = _model_context(ext, qb)
    tee = ext.tee()
    n = ext.a.dim
    q2 = ext.tensor_square()
    q3 = ext.tensor_cube()
    emb = ext.emb
    epairs = h.e.pairs()

    def proj3(v1, v2, v3):
        pair = tensor_coords(field, n, v1, v2)
        w2 = q2.project(pair)
        amb = [field.zero] * (q2.dim * n)
        for w, cw in enumerate(w2):
            if cw:
                for m, cm in enumerate(v3):
                    if cm:
                        amb[w * n + m] = amb[w * n + m] + cw * cm
        return q3.project(amb)

    gammas = ctx.qb.gammas
    ureps = [tee.rep_in_ambient(list(tc)) for tc in ctx.qb.u_tcoords]
    one = list(ext.a.unit)
    for t in range(tee.dim):
        rep = tee.rep_in_ambient(unit_vector(field, tee.dim, t))
        lhs = [field.zero] * q3.dim
        rhs = [field.zero] * q3.dim
        for idx, c in enumerate(rep):
            if not c:
                continue
            p, q = divmod(idx, n)
            for (u, v, ce) in epairs:
                ea = emb.col(u)
                eb = emb.col(v)
                cc = c * ce
                # lhs: sum_k e^1 (x) t^2 gamma_k(t^1) u_k^1 (x) u_k^2 e^2
                for gamma, urep in zip(gammas, ureps):
                    mid = ext.a.mul_vec(ext.a.basis_vec(q), gamma.col(p))
                    for idx2, c2 in enumerate(urep):
                        if not c2:
                            continue
                        r1, r2 = divmod(idx2, n)
                        m2 = ext.a.mul_vec(mid, ext.a.basis_vec(r1))
                        m3 = ext.a.mul_vec(ext.a.basis_vec(r2), eb)
                        term = proj3(ea, m2, m3)
                        for w3, cv in enumerate(term):
                            if cv:
                                lhs[w3] = lhs[w3] + cc * c2 * cv
                # rhs: 1 (x) e^1 t^2 (x) t^1 e^2
                m2 = ext.a.mul_vec(ea, ext.a.basis_vec(q))
                m3 = ext.a.mul_vec(ext.a.basis_vec(p), eb)
                term = proj3(one, m2, m3)
                for w3, cv in enumerate(term):
                    if cv:
                        rhs[w3] = rhs[w3] + cc * cv
        if lhs != rhs:
            return False
    return True


def _transport_identity(h):
    """sum_j gamma_j(a) u_j^1 e^2 (x)_K e^1 u_j^2 = e^2 (x)_K e^1 a, plain
    tensors over the ground field."""
    ext = h.ext
    field = ext.field
    qb = right_d2_quasibase(ext)
    ctx = _model_context(ext, qb)
    tee = ext.tee()
    n = ext.a.dim
    emb = ext.emb
    epairs = h.e.pairs()
    gammas = ctx.qb.gammas
    ureps = [tee.rep_in_ambient(list(tc)) for tc in ctx.qb.u_tcoords]
    for a_idx in range(n):
        lhs = [field.zero] * (n * n)
        rhs = [field.zero] * (n * n)
        for (u, v, ce) in epairs:
            ea = emb.col(u)
            eb = emb.col(v)
            for gamma, urep in zip(gammas, ureps):
                ga = gamma.col(a_idx)
                for idx2, c2 in enumerate(urep):
                    if not c2:
                        continue
                    r1, r2 = divmod(idx2, n)
                    left = ext.a.mul_vec(ext.a.mul_vec(ga, ext.a.basis_vec(r1)), eb)
                    right = ext.a.mul_vec(ea, ext.a.basis_vec(r2))
                    cc = ce * c2
                    for k1, c3 in enumerate(left):
                        if not c3:
                            continue
                        for k2, c4 in enumerate(right):
                            if c4:
                                lhs[k1 * n + k2] = lhs[k1 * n + k2] + cc * c3 * c4
            right = ext.a.mul_vec(ea, ext.a.basis_vec(a_idx))
            for k1, c3 in enumerate(eb):
                if not c3:
                    continue
                for k2, c4 in enumerate(right):
                    if c4:
                        rhs[k1 * n + k2] = rhs[k1 * n + k2] + ce * c3 * c4
        if lhs != rhs:
            return False
    return True
