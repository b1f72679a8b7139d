"""Central projectivity certificates and depth-two quasibase solvers.

An extension is right D2 when the identity of A (x)_B A lies in the span of
the maps a (x) a' -> a gamma(a') u over gamma in S and u in T; the bilinear
search linearizes to one exact feasibility solve, and a rank factorization of
the coefficient matrix recovers a minimal-length pair list.
"""

from __future__ import annotations

from .extensions import ExtensionError, intertwiners, opposite_extension
from .linalg import (Matrix, SpanBuilder, rank_factor, solve_linear,
                     unit_vector, vec_is_zero)


class CentralProjectivityCertificate:
    """Pairs (injector N -> M, retractor M -> N) whose composite sum is id_M."""

    def __init__(self, injectors, retractors, coefficient_matrix):
        self.injectors = injectors
        self.retractors = retractors
        self.coefficient_matrix = coefficient_matrix

    def __len__(self):
        return len(self.injectors)

    def verify(self):
        field = self.coefficient_matrix.field
        dim_m = self.injectors[0].nrows
        total = Matrix.zero(field, dim_m, dim_m)
        for inj, ret in zip(self.injectors, self.retractors):
            total = total + inj * ret
        return total == Matrix.identity(field, dim_m)


def centrally_projective(hom_n_to_m, hom_m_to_n, dim_m, field):
    """Certificate that id_M lies in span{iota . pi}, or None.

    hom_n_to_m / hom_m_to_n are bases of the bimodule hom spaces; minimality
    of the certificate is relative to this construction (rank of the found
    coefficient matrix).
    """
    n1 = len(hom_n_to_m)
    n2 = len(hom_m_to_n)
    if n1 == 0 or n2 == 0:
        return None
    sb = SpanBuilder(field, dim_m * dim_m, ntags=n1 * n2)
    for inj in hom_n_to_m:
        for ret in hom_m_to_n:
            sb.insert((inj * ret).entries)
    res, coeffs = sb.residual_with_coeffs(Matrix.identity(field, dim_m).entries)
    if not vec_is_zero(field, res):
        return None
    cmat = Matrix.from_flat(field, n1, n2, coeffs)
    u, v = rank_factor(cmat)
    injectors = []
    retractors = []
    for k in range(u.ncols):
        inj = Matrix.zero(field, hom_n_to_m[0].nrows, hom_n_to_m[0].ncols)
        for i in range(n1):
            if u.rows[i][k]:
                inj = inj + hom_n_to_m[i].scale(u.rows[i][k])
        ret = Matrix.zero(field, hom_m_to_n[0].nrows, hom_m_to_n[0].ncols)
        for j in range(n2):
            if v.rows[k][j]:
                ret = ret + hom_m_to_n[j].scale(v.rows[k][j])
        injectors.append(inj)
        retractors.append(ret)
    cert = CentralProjectivityCertificate(injectors, retractors, cmat)
    if not cert.verify():
        raise ExtensionError("central projectivity certificate failed re-check")
    return cert


class Quasibase:
    """Paired elements certifying one-sided depth two.

    side 'right': pairs (gamma in S-coords, u in T-coords) with
    a (x) a' = sum_j a gamma_j(a') u_j; side 'left': pairs (beta, t) with
    a (x) a' = sum_i t_i beta_i(a) a'.
    """

    def __init__(self, side, pairs):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.side = side
        self.pairs = pairs

    def __len__(self):
        return len(self.pairs)

    def __repr__(self):
        return "Quasibase(%s, %d pairs)" % (self.side, len(self.pairs))


def _gamma_eval_map(ext, gamma_mat, side):
    """N: A (x)_B A -> A; right: a (x) a' -> a gamma(a'); left: a (x) a' -> beta(a) a'."""
    a = ext.a
    field = ext.field
    q2 = ext.tensor_square()
    cols = []
    for i in range(a.dim):
        for k in range(a.dim):
            if side == "right":
                cols.append(a.mul_vec(a.basis_vec(i), gamma_mat.col(k)))
            else:
                cols.append(a.mul_vec(gamma_mat.col(i), a.basis_vec(k)))
    amb = Matrix.from_cols(field, cols)
    return amb * q2.section


def _u_insert_map(ext, u_tcoords, side):
    """M: A -> A (x)_B A; right: m -> m u^1 (x) u^2; left: m -> t^1 (x) t^2 m."""
    a = ext.a
    field = ext.field
    q2 = ext.tensor_square()
    tee = ext.tee()
    rep = tee.rep_in_ambient(u_tcoords)
    n = a.dim
    cols = []
    for i in range(n):
        out = [field.zero] * (n * n)
        for idx, c in enumerate(rep):
            if not c:
                continue
            p, q = divmod(idx, n)
            if side == "right":
                head = a.structure[i][p]      # m u^1
                for k1 in range(n):
                    if head[k1]:
                        out[k1 * n + q] = out[k1 * n + q] + c * head[k1]
            else:
                tail = a.structure[q][i]      # t^2 m
                for k2 in range(n):
                    if tail[k2]:
                        out[p * n + k2] = out[p * n + k2] + c * tail[k2]
        cols.append(q2.project(out))
    return Matrix.from_cols(field, cols)


def _d2_quasibase(ext, side):
    s = ext.hom_bimodule()
    tee = ext.tee()
    q2 = ext.tensor_square()
    field = ext.field
    if q2.dim == 0:
        return Quasibase(side, [])
    gmaps = [_gamma_eval_map(ext, g, side) for g in s.basis]
    umaps = [_u_insert_map(ext, unit_vector(field, tee.dim, t), side)
             for t in range(tee.dim)]
    sb = SpanBuilder(field, q2.dim * q2.dim, ntags=s.dim * tee.dim)
    for gm in gmaps:
        for um in umaps:
            sb.insert((um * gm).entries)
    res, coeffs = sb.residual_with_coeffs(Matrix.identity(field, q2.dim).entries)
    if not vec_is_zero(field, res):
        return None
    cmat = Matrix.from_flat(field, s.dim, tee.dim, coeffs)
    u, v = rank_factor(cmat)
    pairs = []
    for k in range(u.ncols):
        gcoords = [u.rows[i][k] for i in range(s.dim)]
        tcoords = [v.rows[k][j] for j in range(tee.dim)]
        pairs.append((gcoords, tcoords))
    qb = Quasibase(side, pairs)
    if not verify_quasibase(ext, qb):
        raise ExtensionError("quasibase solver output failed verification")
    return qb


def right_d2_quasibase(ext):
    """Pairs with a (x) a' = sum_j a gamma_j(a') u_j, or None if not right D2."""
    return ext._cached("right_qb", lambda: _d2_quasibase(ext, "right"))


def left_d2_quasibase(ext):
    """Pairs with a (x) a' = sum_i t_i beta_i(a) a', or None if not left D2."""
    return ext._cached("left_qb", lambda: _d2_quasibase(ext, "left"))


def verify_quasibase(ext, qb):
    """Evaluates the defining identity on all basis pairs, exactly."""
    a = ext.a
    field = ext.field
    q2 = ext.tensor_square()
    s = ext.hom_bimodule()
    tee = ext.tee()
    n = a.dim
    gammas = [s.matrix_of(g) for g, _ in qb.pairs]
    reps = [tee.rep_in_ambient(t) for _, t in qb.pairs]
    for p in range(n):
        for q in range(n):
            acc = [field.zero] * (n * n)
            for gamma, rep in zip(gammas, reps):
                if qb.side == "right":
                    m = a.mul_vec(a.basis_vec(p), gamma.col(q))
                else:
                    m = a.mul_vec(gamma.col(p), a.basis_vec(q))
                for idx, c in enumerate(rep):
                    if not c:
                        continue
                    x, y = divmod(idx, n)
                    if qb.side == "right":
                        head = a.mul_vec(m, a.basis_vec(x))
                        for k1 in range(n):
                            if head[k1]:
                                acc[k1 * n + y] = acc[k1 * n + y] + c * head[k1]
                    else:
                        tail = a.mul_vec(a.basis_vec(y), m)
                        for k2 in range(n):
                            if tail[k2]:
                                acc[x * n + k2] = acc[x * n + k2] + c * tail[k2]
            target = [field.zero] * (n * n)
            target[p * n + q] = field.one
            if q2.project(acc) != q2.project(target):
                return False
    return True


def is_right_d2(ext):
    return right_d2_quasibase(ext) is not None


def is_left_d2(ext):
    return left_d2_quasibase(ext) is not None


def is_h_separable(ext):
    """A (x)_B A centrally projective w.r.t. A as A-A-bimodules."""
    return h_separability_certificate(ext) is not None


def h_separability_certificate(ext):
    """The central-projectivity certificate behind is_h_separable, or None."""
    a = ext.a
    field = ext.field
    q2 = ext.tensor_square()
    n = a.dim
    ids = Matrix.identity(field, n)
    lq = [q2.induced_map(a.left_mult_basis()[i].kron(ids)) for i in range(n)]
    rq = [q2.induced_map(ids.kron(a.right_mult_basis()[i])) for i in range(n)]
    pairs_to_a = [(a.left_mult_basis()[i], lq[i]) for i in range(n)]
    pairs_to_a += [(a.right_mult_basis()[i], rq[i]) for i in range(n)]
    hom_q2_a = intertwiners(field, q2.dim, n, pairs_to_a, "Hom_{A-A}(AxA,A)")
    pairs_to_q2 = [(lq[i], a.left_mult_basis()[i]) for i in range(n)]
    pairs_to_q2 += [(rq[i], a.right_mult_basis()[i]) for i in range(n)]
    hom_a_q2 = intertwiners(field, n, q2.dim, pairs_to_q2, "Hom_{A-A}(A,AxA)")
    return centrally_projective(hom_a_q2.basis, hom_q2_a.basis, q2.dim, field)


def direct_summand_oracle(ext, side):
    """Independent depth-two decision via an explicit idempotent splitting.

    Uses the full basis of Hom(A, A x_B A) as the covering map p of a single
    surjection (+)^n A -> A (x)_B A in the one-sided bimodule category, solves
    linearly for a section s with p . s = id, and checks the idempotent s . p.
    Returns True/False; intended for small instances.
    """
    a = ext.a
    field = ext.field
    q2 = ext.tensor_square()
    n = a.dim
    ids = Matrix.identity(field, n)
    lq = [q2.induced_map(a.left_mult_basis()[i].kron(ids)) for i in range(n)]
    rq = [q2.induced_map(ids.kron(a.right_mult_basis()[i])) for i in range(n)]
    if side == "right":
        # A-B-bimodule category: left A-action, right B-action
        lqb = [q2.induced_map(lb.kron(ids)) for lb in ext.emb_left_mults()]
        rqb = [q2.induced_map(ids.kron(rb)) for rb in ext.emb_right_mults()]
        pairs_cover = [(lq[i], a.left_mult_basis()[i]) for i in range(n)]
        pairs_cover += [(rqb[i], ext.emb_right_mults()[i]) for i in range(ext.b.dim)]
        pairs_sect = [(a.left_mult_basis()[i], lq[i]) for i in range(n)]
        pairs_sect += [(ext.emb_right_mults()[i], rqb[i]) for i in range(ext.b.dim)]
    elif side == "left":
        lqb = [q2.induced_map(lb.kron(ids)) for lb in ext.emb_left_mults()]
        pairs_cover = [(lqb[i], ext.emb_left_mults()[i]) for i in range(ext.b.dim)]
        pairs_cover += [(rq[i], a.right_mult_basis()[i]) for i in range(n)]
        pairs_sect = [(ext.emb_left_mults()[i], lqb[i]) for i in range(ext.b.dim)]
        pairs_sect += [(a.right_mult_basis()[i], rq[i]) for i in range(n)]
    else:
        raise ValueError("side must be 'left' or 'right'")
    covers = intertwiners(field, n, q2.dim, pairs_cover, "cover")
    sections = intertwiners(field, q2.dim, n, pairs_sect, "section")
    if covers.dim == 0 or sections.dim == 0:
        return q2.dim == 0
    # p = (b_1, ..., b_N): solve sum_m b_m s_m = id for s_m in the section space
    cols = []
    for m in range(covers.dim):
        for l in range(sections.dim):
            cols.append((covers.basis[m] * sections.basis[l]).entries)
    system = Matrix.from_cols(field, cols)
    sol = solve_linear(system, Matrix.identity(field, q2.dim).entries)
    if sol is None:
        return False
    # assemble the idempotent on (+)^N A and re-check the splitting
    smaps = []
    for m in range(covers.dim):
        sm = Matrix.zero(field, n, q2.dim)
        for l in range(sections.dim):
            c = sol[m * sections.dim + l]
            if c:
                sm = sm + sections.basis[l].scale(c)
        smaps.append(sm)
    total = Matrix.zero(field, q2.dim, q2.dim)
    for pm, sm in zip(covers.basis, smaps):
        total = total + pm * sm
    if total != Matrix.identity(field, q2.dim):
        raise ExtensionError("oracle splitting failed p . s = id")
    # idempotent e = s . p on (+)^N A, block (m, m'): s_m . p_m'
    for m in range(covers.dim):
        for m2 in range(covers.dim):
            blk = smaps[m] * covers.basis[m2]
            acc = Matrix.zero(field, n, n)
            for m3 in range(covers.dim):
                acc = acc + (smaps[m] * covers.basis[m3]) * (smaps[m3] * covers.basis[m2])
            if acc != blk:
                raise ExtensionError("oracle idempotent is not idempotent")
    return True
