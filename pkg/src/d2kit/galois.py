"""Galois structure of the endomorphism tower over a right D2 extension.

The left endomorphism algebra of A carries a right action of the B-central
tensor square and a left coaction of the bimodule-endomorphism bialgebroid;
that coaction makes it a Galois extension of the right multiplications.
This module materializes the action, the coactions on the endomorphism
algebra and on A itself, the Galois maps with their closed-form inverses,
the factorization of the endomorphism-level Galois map through hom-space
isomorphisms, the induced quasibase of the endomorphism extension, and the
endomorphism-ring corollaries.
"""

from __future__ import annotations

import numpy as np

from .algebras import opposite
from .bialgebroids import AxiomFailure, AxiomReport, _model_context, build_S
from .depth2 import (Quasibase, left_d2_quasibase, right_d2_quasibase,
                     verify_quasibase)
from .extensions import (Extension, ExtensionError, intertwiners,
                         opposite_extension, tensor_coords)
from .linalg import (IntTensor, Matrix, Subspace, einsum_exact,
                     int_tensors_equal, nullspace, rank, unit_vector,
                     vec_is_zero)
from .bialgebroids import _coords_in_carrier, _second_leg_maps
from .tensorspace import (AtTriple, EndoTriple, _apply_int_matrix,
                          _mats_tensor, _select_coords_matrix, build_at_square,
                          build_ee_square, build_endo_square, build_tee_square)


# ----- the right action of the tensor square on the endomorphism algebra -----------


class TAction:
    """f <| t = t^1 f(t^2 -): matrices on endomorphism coordinates per T basis."""

    def __init__(self, ext, qb):
        ctx = _model_context(ext, qb)
        self.ctx = ctx
        self.ext = ext
        field = ext.field
        ee = ctx.EE
        tee = ctx.tee
        from .tensorspace import _tee_reps_tensor
        tb = _tee_reps_tensor(ctx)
        raw = _second_leg_maps(ctx, "E", tb, side="right")
        coords = _coords_in_carrier(ctx, "E", raw, (tee.dim, ee.dim))
        self.tensor = coords              # [t, f, f'] coords of f <| t
        self.matrices = [IntTensor(coords.arr[t].T, coords.den, modulus=coords.modulus)
                         for t in range(tee.dim)]

    def matrix(self, t_index):
        """Matrix of f -> f <| t_basis[t_index] on endomorphism coords."""
        return self.matrices[t_index].to_matrix(self.ctx.field)

    def apply(self, f_coords, t_coords):
        ctx = self.ctx
        field = ctx.field
        out = [field.zero] * ctx.EE.dim
        for t, ct in enumerate(t_coords):
            if not ct:
                continue
            m = self.matrices[t]
            col = _apply_int_matrix(m, field, f_coords)
            out = [x + ct * y for x, y in zip(out, col)]
        return out

    def verify(self):
        """Unit, associativity, measuring and invariants = rho(A)."""
        rep = AxiomReport("T-action")
        ctx = self.ctx
        field = ctx.field
        ee = ctx.EE
        tee = ctx.tee
        unit_mat = Matrix.zero(field, ee.dim, ee.dim)
        for t, c in enumerate(tee.unit):
            if c:
                unit_mat = unit_mat + self.matrix(t).scale(c)
        rep.add("unit-acts-trivially",
                unit_mat == Matrix.identity(field, ee.dim), "f <| 1_T != f")
        # associativity: (f <| t) <| t' = f <| (t t')
        tmul = IntTensor.from_scalars(field, ctx.tee.structure,
                                      (tee.dim, tee.dim, tee.dim))
        act = self.tensor    # [t, f_in, f_out]
        lhs = einsum_exact("tfg,ugh->tufh", act, act)
        rhs = einsum_exact("tuk,kfh->tufh", tmul, act)
        rep.add("action-associative", int_tensors_equal(lhs, rhs),
                "(f <| t) <| t' != f <| (t t')")
        # invariants: {f : f <| t = lambda(eps_T(t)) f} equals rho(A)
        from .linalg import SpanBuilder
        sb = SpanBuilder(field, ee.dim)
        for t in range(tee.dim):
            rep_amb = tee.rep_in_ambient(unit_vector(field, tee.dim, t))
            val = [field.zero] * ctx.n
            for idx, c in enumerate(rep_amb):
                if not c:
                    continue
                p, q = divmod(idx, ctx.n)
                prod = ctx.ext.a.structure[p][q]
                val = [x + c * y for x, y in zip(val, prod)]
            lam = ctx.ext.a.left_mult(val)
            cols = [ee.coords_of(lam * m) for m in ee.basis]
            lmat = Matrix.from_cols(field, cols)
            diff = self.matrix(t) - lmat
            for r in range(ee.dim):
                sb.insert(diff.row(r))
        inv_space = nullspace(sb.basis_matrix()) if sb.rank else \
            Subspace.full(field, ee.dim)
        rho = ctx.ext.rho_map()
        rho_span = Subspace.from_vectors(field, ee.dim,
                                         [rho.col(i) for i in range(ctx.n)])
        ok = (inv_space.dim == rho_span.dim and
              all(inv_space.contains(rho.col(i)) for i in range(ctx.n)))
        rep.add("invariants-are-rho(A)", ok, "invariants differ from rho(A)")
        rep.add("measuring", self._measuring(), "measuring identity fails")
        return rep

    def _measuring(self):
        """(fg) <| t = (f <| t_(1))(g <| t_(2)) on all basis triples."""
        ctx = self.ctx
        field = ctx.field
        ee = ctx.EE
        tee = ctx.tee
        from .bialgebroids import build_T
        bi_t = build_T(ctx.ext, ctx.qb.qb)
        dm = IntTensor.from_matrix(bi_t.comult)
        sect = IntTensor.from_matrix(bi_t.tsq.section)
        amb = einsum_exact("aK,Kt->at", sect, dm)
        D = IntTensor(np.moveaxis(amb.arr.reshape(tee.dim, tee.dim, tee.dim),
                                  2, 0), amb.den, modulus=amb.modulus)     # [t, i, j]
        mule = _mul_tensor_of(ee.algebra)
        act = self.tensor
        lhs = einsum_exact("xym,tmh->txyh", mule, act)
        for t in range(tee.dim):
            Dt = IntTensor(D.arr[t], D.den, modulus=D.modulus)
            z1 = einsum_exact("ij,iax->jax", Dt, act)
            w1 = einsum_exact("jax,xyh->jayh", z1, mule)
            rhs_t = einsum_exact("jayh,jby->abh", w1, act)
            if not int_tensors_equal(IntTensor(lhs.arr[t], lhs.den, modulus=lhs.modulus), rhs_t):
                return False
        return True


def _mul_tensor_of(alg):
    return IntTensor.from_scalars(alg.field, alg.structure,
                                  (alg.dim, alg.dim, alg.dim))


def t_action(ext, qb):
    key = ("t_action", id(qb))
    if key not in ext._cache:
        ext._cache[key] = TAction(ext, qb)
    return ext._cache[key]


# ----- coactions --------------------------------------------------------------------


class Coaction:
    """Coaction delta: C -> (bialgebroid total) (x)_R C in quotient coordinates."""

    def __init__(self, kind, carrier_dim, bialgebroid, base_map, delta, space,
                 meta=None):
        self.kind = kind              # 'left-on-E' | 'right-on-A'
        self.carrier_dim = carrier_dim
        self.bialgebroid = bialgebroid
        self.base_map = base_map
        self.delta = delta
        self.space = space
        self.meta = meta or {}


def coaction_on_E(ext, qb):
    """rho-hat: f -> sum_j gamma_j (x) (f <| u_j), a left coaction on End(_B A)."""
    ctx = _model_context(ext, qb)
    field = ext.field
    ee = ctx.EE
    s = ctx.S
    qse = _cached_space(ext, qb, "SE", lambda: build_endo_square(ctx, "E"))
    action = t_action(ext, qb)
    # f <| u_j on coordinates
    ut = IntTensor.from_scalars(field, ctx.qb.u_tcoords,
                                (ctx.qb.n_pairs, ctx.tee.dim))
    fu = einsum_exact("jt,tfg->jfg", ut, action.tensor)
    gam = IntTensor.from_scalars(field, ctx.qb.gamma_coords,
                                 (ctx.qb.n_pairs, s.dim))
    amb = einsum_exact("js,jfg->sgf", gam, fu)
    amb_m = IntTensor(amb.arr.reshape(s.dim * ee.dim, ee.dim),
                      amb.den, modulus=amb.modulus).to_matrix(field)
    delta = Matrix.from_cols(field, [qse.project(amb_m.col(j))
                                     for j in range(ee.dim)])
    lam = _lambda_into_left_endos(ext)
    bi = _cached_s_bialgebroid(ext, qb)
    co = Coaction("left-on-E", ee.dim, bi, lam, delta, qse,
                  meta={"ext": ext, "ctx": ctx, "qb": qb})
    failures = verify_left_comodule_algebra(co).failures()
    if failures:
        raise AxiomFailure("coaction on End(_B A) fails: %s" % failures)
    return co


def _lambda_into_left_endos(ext):
    """R -> End(_B A) by left multiplication, on coordinates."""
    r_alg, r_inc = ext.centralizer()
    ee = ext.hom_left()
    cols = [ee.coords_of(ext.a.left_mult(r_inc.col(i))) for i in range(r_alg.dim)]
    if any(c is None for c in cols):
        raise AxiomFailure("lambda(R) does not normalize the left endomorphisms")
    return Matrix.from_cols(ext.field, cols)


def _cached_space(ext, qb, tag, fn):
    key = ("space", tag, id(qb))
    if key not in ext._cache:
        ext._cache[key] = fn()
    return ext._cache[key]


def _cached_s_bialgebroid(ext, qb):
    key = ("S_bi", id(qb))
    if key not in ext._cache:
        ext._cache[key] = build_S(ext, qb)
    return ext._cache[key]


def verify_left_comodule_algebra(co):
    """Counitality, coassociativity, delta(1), compatibility and multiplicativity."""
    rep = AxiomReport("left comodule algebra")
    ext = co.meta["ext"]
    ctx = co.meta["ctx"]
    field = ext.field
    bi = co.bialgebroid
    s = ctx.S
    ee = ctx.EE
    qse = co.space
    delta = co.delta
    n_e = co.carrier_dim
    # delta(1) = 1 (x) 1
    one = ee.coords_of(Matrix.identity(field, ctx.n))
    unit_amb = tensor_coords(field, n_e, s.coords_of(Matrix.identity(field, ctx.n)),
                             one)
    rep.add("delta-unit", delta.apply(one) == qse.project(unit_amb),
            "delta(1) != 1 (x) 1")
    # counitality: (eps (x) id) delta = id, identification via base action
    eps = IntTensor.from_matrix(bi.counit)
    lam = IntTensor.from_matrix(co.base_map)      # R -> carrier coords
    se = einsum_exact("cl,lI->cI", lam, eps)      # base_map(eps(x1)) carrier coords
    mule = _mul_tensor_of(ee.algebra)
    sect = IntTensor.from_matrix(qse.section)
    dmT = IntTensor.from_matrix(delta)
    amb = einsum_exact("aK,Kf->af", sect, dmT)
    ambT = IntTensor(amb.arr.reshape(s.dim, n_e, n_e), amb.den, modulus=amb.modulus)
    t1 = einsum_exact("cI,cgm->Igm", se, mule)
    lhs = einsum_exact("Igf,Igm->mf", ambT, t1)
    eye = IntTensor(np.eye(n_e, dtype=np.int64), 1)
    rep.add("counitality", int_tensors_equal(lhs, eye),
            "(eps (x) id) delta != id")
    # coassociativity via the S-S-E triple
    tri = _cached_space(ext, co.meta["qb"], "SSE",
                        lambda: EndoTriple(ctx, bi.tsq, "E", qse))
    ok, wit = True, ""
    for f in range(n_e):
        w = delta.col(f)
        amb_w = qse.section_vec(w)
        W = Matrix.from_flat(field, s.dim, n_e, amb_w)
        m1 = bi.comult * W
        m2 = W * delta.transpose()
        if tri.table_left_vec(m1.entries) != tri.table_right_vec(m2.entries):
            ok, wit = False, "coassociativity fails on basis %d" % f
            break
    rep.add("coassociativity", ok, wit)
    # compatibility: c_(-1) target(r) (x) c_(0) = c_(-1) (x) c_(0).r
    from .bialgebroids import _pair_leg_action
    ok, wit = True, ""
    for l in range(bi.base.dim):
        t_l = bi.target.col(l)
        tak1 = _pair_leg_action(qse, first=s.algebra.right_mult(t_l))
        lam_l = co.base_map.col(l)
        tak2 = _pair_leg_action(qse, second=ee.algebra.right_mult(lam_l))
        if tak1 * delta != tak2 * delta:
            ok, wit = False, "compatibility fails at r%d" % l
            break
    rep.add("compatibility", ok, wit)
    if not ok:
        rep.add("multiplicativity", False, "skipped: products ill-defined")
        return rep
    # multiplicativity: delta(fg) = delta(f) delta(g)
    muls = _mul_tensor_of(s.algebra)
    proj = IntTensor.from_matrix(qse.projection)
    projT = IntTensor(proj.arr.reshape(qse.dim, s.dim * n_e), proj.den, modulus=proj.modulus)
    lhs = einsum_exact("xym,Km->Kxy", mule, dmT)
    okm, witm = True, ""
    for x in range(n_e):
        cx = IntTensor(ambT.arr[:, :, x], ambT.den, modulus=ambT.modulus)   # [s-slot, e-slot]
        t1 = einsum_exact("ij,ikp->jkp", cx, muls)
        t3 = einsum_exact("jkp,kly->jpyl", t1, ambT)
        res = einsum_exact("jpyl,jlq->ypq", t3, mule)
        flat = IntTensor(res.arr.reshape(res.arr.shape[0], -1), res.den, modulus=res.modulus)
        got = einsum_exact("Ka,ya->Ky", projT, flat)
        want = IntTensor(lhs.arr[:, x, :], lhs.den, modulus=lhs.modulus)
        if not int_tensors_equal(got, want):
            okm, witm = False, "multiplicativity fails at basis %d" % x
            break
    rep.add("multiplicativity", okm, witm)
    return rep


def coaction_restricts_to_comult(ext, qb):
    """rho-hat restricted to the bimodule endomorphisms equals Delta."""
    ctx = _model_context(ext, qb)
    field = ext.field
    co = coaction_on_E(ext, qb)
    bi = _cached_s_bialgebroid(ext, qb)
    s, ee = ctx.S, ctx.EE
    qse = co.space
    incl = Matrix.from_cols(field, [ee.coords_of(m) for m in s.basis])
    # embed Q_SS into Q_SE along the inclusion of carriers
    for a_idx in range(s.dim):
        w = bi.comult.col(a_idx)
        amb = bi.tsq.section_vec(w)
        W = Matrix.from_flat(field, s.dim, s.dim, amb)
        big = W * incl.transpose()
        lhs = qse.project(big.entries)
        rhs = co.delta.apply(incl.col(a_idx))
        if lhs != rhs:
            return False
    return True


def coinvariants(co):
    """Subspace {c : delta(c) = 1 (x) c} with its closure checked."""
    ext = co.meta["ext"]
    ctx = co.meta["ctx"]
    field = ext.field
    if co.kind == "left-on-E":
        one_s = ctx.S.coords_of(Matrix.identity(field, ctx.n))
        carrier_alg = ctx.EE.algebra
        cols = []
        for f in range(co.carrier_dim):
            amb = tensor_coords(field, co.carrier_dim, one_s,
                                unit_vector(field, co.carrier_dim, f))
            cols.append(co.space.project(amb))
        one_tensor = Matrix.from_cols(field, cols)
    else:
        tee = ctx.tee
        cols = []
        for a_idx in range(co.carrier_dim):
            amb = tensor_coords(field, tee.dim,
                                unit_vector(field, co.carrier_dim, a_idx),
                                list(tee.unit))
            cols.append(co.space.project(amb))
        one_tensor = Matrix.from_cols(field, cols)
        carrier_alg = None
    diff = co.delta - one_tensor
    sub = nullspace(diff)
    if carrier_alg is not None:
        for i in range(sub.dim):
            for j in range(sub.dim):
                prod = carrier_alg.mul_vec(list(sub.basis.rows[i]),
                                           list(sub.basis.rows[j]))
                if not sub.contains(prod):
                    raise AxiomFailure("coinvariants are not closed under product")
    return sub


# ----- the Galois map on the endomorphism level -------------------------------------


class GaloisReport:
    """Galois map data: matrix, bijectivity, closed-form inverse, coinvariants."""

    def __init__(self, beta, inverse, bijective, coinvariants_space, dims,
                 witnesses=None):
        self.beta = beta
        self.inverse = inverse
        self.bijective = bijective
        self.coinvariants = coinvariants_space
        self.dims = dims
        self.witnesses = witnesses or {}

    def as_dict(self, field):
        enc = field.to_json
        return {
            "dims": self.dims,
            "bijective": self.bijective,
            "coinvariant_dim": self.coinvariants.dim,
            "witnesses": {k: bool(v) for k, v in self.witnesses.items()},
        }


def galois_map(ext, qb):
    """beta(f (x) g) = f_(-1) (x) f_(0) g with rank bijectivity and the
    closed-form inverse checked as a two-sided inverse."""
    ctx = _model_context(ext, qb)
    field = ext.field
    ee = ctx.EE
    s = ctx.S
    qse = _cached_space(ext, qb, "SE", lambda: build_endo_square(ctx, "E"))
    qee = _cached_space(ext, qb, "EE", lambda: build_ee_square(ctx))
    action = t_action(ext, qb)
    ut = IntTensor.from_scalars(field, ctx.qb.u_tcoords,
                                (ctx.qb.n_pairs, ctx.tee.dim))
    fu = einsum_exact("jt,tfg->jfg", ut, action.tensor)   # (f <| u_j)-coords
    gam = IntTensor.from_scalars(field, ctx.qb.gamma_coords,
                                 (ctx.qb.n_pairs, s.dim))
    mule = _mul_tensor_of(ee.algebra)
    # beta on ambient pairs: (f,g) -> sum_j gamma_j (x) (f <| u_j) g
    sect = IntTensor.from_matrix(qee.section)
    secT = IntTensor(sect.arr.reshape(ee.dim, ee.dim, qee.dim), sect.den, modulus=sect.modulus)
    prod = einsum_exact("jfg,gbe->jfbe", fu, mule)        # (f <| u_j) compose g
    amb = einsum_exact("js,jfbe->sefb", gam, prod)
    ambM = IntTensor(amb.arr.reshape(s.dim * ee.dim, ee.dim * ee.dim), amb.den, modulus=amb.modulus)
    beta_amb = einsum_exact("xa,abd->xd",
                            ambM, IntTensor(sect.arr.reshape(
                                ee.dim * ee.dim, 1, qee.dim), sect.den, modulus=sect.modulus))
    proj = IntTensor.from_matrix(qse.projection)
    beta = einsum_exact("Kx,xd->Kd", proj, beta_amb).to_matrix(field)
    bij = qee.dim == qse.dim and rank(beta) == qse.dim
    # closed form: beta^{-1}(alpha (x) h) = sum_j alpha(- u_j^1) h(u_j^2) (x) gamma_j
    smats = ctx.smats
    emats = ctx.emats
    # alpha(x u^1): per (j, alpha): matrix alpha . R_{u^1}, slot q pending for h
    from .tensorspace import _right_mult_tensor
    rmt = _right_mult_tensor(ctx)
    t1 = einsum_exact("jpq,xpv->jqxv", ctx.qb.u_tensors, rmt)   # (e_x u^1)_v slot q
    t2 = einsum_exact("jqxv,amv->jqaxm", t1, smats)             # alpha_a(e_x u^1)
    t3 = einsum_exact("jqaxm,bwq->jabxmw", t2, emats)           # h_b(u^2)_w
    t4 = einsum_exact("jabxmw,mwu->jabxu", t3, ctx.mulA)        # product in A
    first = _coords_in_carrier(ctx, "E", IntTensor(
        np.moveaxis(t4.arr, 3, 4), t4.den, modulus=t4.modulus),
        (ctx.qb.n_pairs, s.dim, ee.dim))
    gcoords_e = IntTensor.from_scalars(
        field, [ee.coords_of(g) for g in ctx.qb.gammas],
        (ctx.qb.n_pairs, ee.dim))
    inv_amb = einsum_exact("jabF,jG->FGab", first, gcoords_e)
    inv_ambM = IntTensor(inv_amb.arr.reshape(ee.dim * ee.dim, s.dim * ee.dim),
                         inv_amb.den, modulus=inv_amb.modulus)
    qse_sect = IntTensor.from_matrix(qse.section)
    inv_cols = einsum_exact("xa,aK->xK", inv_ambM, qse_sect)
    qee_proj = IntTensor.from_matrix(qee.projection)
    inverse = einsum_exact("Dx,xK->DK", qee_proj, inv_cols).to_matrix(field)
    wit = {}
    wit["beta_inverse_right"] = (beta * inverse ==
                                 Matrix.identity(field, qse.dim))
    wit["beta_inverse_left"] = (inverse * beta ==
                                Matrix.identity(field, qee.dim))
    co = coaction_on_E(ext, qb)
    ci = coinvariants(co)
    rho = ext.rho_map()
    wit["coinvariants_are_rho(A)"] = (
        ci.dim == ext.a.dim and
        all(ci.contains(rho.col(i)) for i in range(ext.a.dim)))
    dims = {"E(x)E": qee.dim, "S(x)E": qse.dim}
    return GaloisReport(beta, inverse, bij, ci, dims, wit)


# ----- coaction on A and the Galois characterization --------------------------------


def coaction_on_A(ext, qb):
    """delta(a) = sum_j gamma_j(a) (x) u_j, a right coaction of the tensor-square
    bialgebroid on A."""
    ctx = _model_context(ext, qb)
    field = ext.field
    qat = _cached_space(ext, qb, "AT", lambda: build_at_square(ctx))
    n = ext.a.dim
    gam_mats = _mats_tensor(field, ctx.qb.gammas)
    ut = IntTensor.from_scalars(field, ctx.qb.u_tcoords,
                                (ctx.qb.n_pairs, ctx.tee.dim))
    amb = einsum_exact("jma,jt->mta", gam_mats, ut)
    ambM = IntTensor(amb.arr.reshape(n * ctx.tee.dim, n), amb.den, modulus=amb.modulus).to_matrix(field)
    delta = Matrix.from_cols(field, [qat.project(ambM.col(j)) for j in range(n)])
    from .bialgebroids import build_T
    bi_t = build_T(ext, qb)
    r_alg, r_inc = ext.centralizer()
    base_map = Matrix.from_cols(field, [r_inc.col(i) for i in range(r_alg.dim)])
    co = Coaction("right-on-A", n, bi_t, base_map, delta, qat,
                  meta={"ext": ext, "ctx": ctx, "qb": qb})
    failures = verify_right_comodule_algebra(co).failures()
    if failures:
        raise AxiomFailure("coaction on A fails: %s" % failures)
    return co


def verify_right_comodule_algebra(co):
    rep = AxiomReport("right comodule algebra")
    ext = co.meta["ext"]
    ctx = co.meta["ctx"]
    field = ext.field
    bi = co.bialgebroid
    tee = ctx.tee
    qat = co.space
    delta = co.delta
    n = co.carrier_dim
    a = ext.a
    # delta(1) = 1 (x) 1_T
    unit_amb = tensor_coords(field, tee.dim, list(a.unit), list(tee.unit))
    rep.add("delta-unit", delta.apply(a.unit) == qat.project(unit_amb),
            "delta(1) != 1 (x) 1")
    # counit law: a_(0) . eps_T(a_(1)) = a
    eps = IntTensor.from_matrix(bi.counit)
    rb = IntTensor.from_matrix(co.base_map)
    te = einsum_exact("ml,lt->mt", rb, eps)       # eps values in A coords
    sect = IntTensor.from_matrix(qat.section)
    dmT = IntTensor.from_matrix(delta)
    amb = einsum_exact("aK,Kx->ax", sect, dmT)
    ambT = IntTensor(amb.arr.reshape(n, tee.dim, n), amb.den, modulus=amb.modulus)
    mulA = ctx.mulA
    t1 = einsum_exact("mt,imk->itk", te, mulA)    # e_i * eps(t)
    lhs = einsum_exact("itx,itk->kx", ambT, t1)
    eye = IntTensor(np.eye(n, dtype=np.int64), 1)
    rep.add("counit-law", int_tensors_equal(lhs, eye),
            "a_(0) eps(a_(1)) != a")
    # coassociativity via the A-T-T triple
    qtt = _cached_space(ext, co.meta["qb"], "TT",
                        lambda: build_tee_square(ctx))
    tri = _cached_space(ext, co.meta["qb"], "ATT",
                        lambda: AtTriple(ctx, qat, qtt))
    ok, wit = True, ""
    from .bialgebroids import _comult_T_right_ambient
    for x in range(n):
        w = delta.col(x)
        amb_w = qat.section_vec(w)
        W = Matrix.from_flat(field, n, tee.dim, amb_w)
        m1 = delta * W                      # (delta (x) id)
        m2 = W * bi.comult.transpose()      # (id (x) Delta_T)
        if tri.table_left_vec(m1.entries) != tri.table_right_vec(m2.entries):
            ok, wit = False, "coassociativity fails on basis %d" % x
            break
    rep.add("coassociativity", ok, wit)
    # compatibility: (r a)_(0)-side: L_r (x) 1 delta = 1 (x) (tau(r) . ) delta
    from .bialgebroids import _pair_leg_action
    ok, wit = True, ""
    r_alg, r_inc = ext.centralizer()
    for l in range(r_alg.dim):
        tk1 = _pair_leg_action(qat, first=a.left_mult(r_inc.col(l)))
        tmul_tau = Matrix.from_cols(field, [
            tee.algebra.mul_vec(list(tee.tau.col(l)), tee.algebra.basis_vec(i))
            for i in range(tee.dim)])
        tk2 = _pair_leg_action(qat, second=tmul_tau)
        if tk1 * delta != tk2 * delta:
            ok, wit = False, "compatibility fails at r%d" % l
            break
    rep.add("compatibility", ok, wit)
    if not ok:
        rep.add("multiplicativity", False, "skipped: products ill-defined")
        return rep
    # multiplicativity
    mulT = IntTensor.from_scalars(field, tee.structure,
                                  (tee.dim, tee.dim, tee.dim))
    proj = IntTensor.from_matrix(qat.projection)
    projT = IntTensor(proj.arr.reshape(qat.dim, n * tee.dim), proj.den, modulus=proj.modulus)
    lhs = einsum_exact("xym,Km->Kxy", mulA, dmT)
    okm, witm = True, ""
    for x in range(n):
        cx = IntTensor(ambT.arr[:, :, x], ambT.den, modulus=ambT.modulus)
        t1 = einsum_exact("ij,ikp->jkp", cx, mulA)
        t3 = einsum_exact("jkp,kly->jpyl", t1, ambT)
        res = einsum_exact("jpyl,jlq->ypq", t3, mulT)
        flat = IntTensor(res.arr.reshape(res.arr.shape[0], -1), res.den, modulus=res.modulus)
        got = einsum_exact("Ka,ya->Ky", projT, flat)
        want = IntTensor(lhs.arr[:, x, :], lhs.den, modulus=lhs.modulus)
        if not int_tensors_equal(got, want):
            okm, witm = False, "multiplicativity fails at basis %d" % x
            break
    rep.add("multiplicativity", okm, witm)
    # reconstruction: alpha(a) = sum_j gamma_j(a) [alpha | u_j]
    ok = True
    s = ctx.S
    gam_mats = _mats_tensor(field, ctx.qb.gammas)
    ut = IntTensor.from_scalars(field, ctx.qb.u_tcoords,
                                (ctx.qb.n_pairs, tee.dim))
    from .tensorspace import _tee_reps_tensor
    tb = _tee_reps_tensor(ctx)
    urep = einsum_exact("jt,tpq->jpq", ut, tb)
    t1 = einsum_exact("jpq,amq->japm", urep, ctx.smats)     # alpha_a(u^2)
    pair = einsum_exact("japm,pmu->jau", t1, mulA)          # [alpha_a | u_j]
    t2 = einsum_exact("jmx,jau->amxu", gam_mats, pair)      # gamma_j(e_x)[...]
    got = einsum_exact("amxu,muk->akx", t2, mulA)
    want = IntTensor(np.moveaxis(ctx.smats.arr, 0, 0), ctx.smats.den, modulus=ctx.smats.modulus)
    rep.add("pairing-reconstruction", int_tensors_equal(got, want),
            "alpha != sum gamma_j(a)[alpha|u_j]")
    return rep


def right_galois_map(ext, qb):
    """beta_R: A (x)_B A -> A (x)_R T, a (x) a' -> a a'_(0) (x) a'_(1)."""
    ctx = _model_context(ext, qb)
    field = ext.field
    q2 = ext.tensor_square()
    qat = _cached_space(ext, qb, "AT", lambda: build_at_square(ctx))
    co = coaction_on_A(ext, qb)
    n = ext.a.dim
    sect = IntTensor.from_matrix(qat.section)
    dmT = IntTensor.from_matrix(co.delta)
    amb = einsum_exact("aK,Kx->ax", sect, dmT)
    ambT = IntTensor(amb.arr.reshape(n, ctx.tee.dim, n), amb.den, modulus=amb.modulus)
    # columns over the tensor-square basis: a (x) a' -> a * delta(a')
    sec2 = ctx.sec2
    first = einsum_exact("wpq,itq->wpit", sec2, ambT)
    moved = einsum_exact("wpit,piu->wut", first, ctx.mulA)
    bR_amb = IntTensor(moved.arr.reshape(q2.dim, n * ctx.tee.dim), moved.den, modulus=moved.modulus)
    proj = IntTensor.from_matrix(qat.projection)
    beta_r = einsum_exact("Ka,wa->Kw", proj, bR_amb).to_matrix(field)
    bij = (q2.dim == qat.dim) and rank(beta_r) == qat.dim
    return beta_r, bij, co


# ----- the endomorphism extension and Figure-1 factorization ------------------------


def endo_extension(ext):
    """rho: A^op -> End(_B A) as a validated extension."""
    def build():
        ee = ext.hom_left()
        rho = ext.rho_map()
        return Extension(opposite(ext.a), ee.algebra, rho,
                         name="End(_B %s)|%s^op" % (ext.a.name, ext.a.name))
    return ext._cached("endo_ext", build)


def lambda_extension(ext):
    """lambda: A -> End(A_B) as a validated extension."""
    def build():
        er = ext.hom_right()
        lam = ext.lambda_map()
        return Extension(ext.a, er.algebra, lam,
                         name="End(%s_B)|%s" % (ext.a.name, ext.a.name))
    return ext._cached("lambda_ext", build)


def figure1_factorization(ext, qb):
    """The endomorphism Galois map as a composite of hom-space isomorphisms.

    Materializes Hom(E_A, A_A) with the tensor-square identification
    Psi(a (x) a')(f) = a f(a'), the hom-space Hom(_B Hom(E_A, A_A), _B A),
    and checks that the composite equals the Galois map entry-exactly.
    """
    ctx = _model_context(ext, qb)
    field = ext.field
    ee = ctx.EE
    a = ext.a
    n = a.dim
    report = {}
    qee = _cached_space(ext, qb, "EE", lambda: build_ee_square(ctx))
    qse = _cached_space(ext, qb, "SE", lambda: build_endo_square(ctx, "E"))
    # corner X = Hom(E_A, A_A): nu(f . a) = nu(f) a with (f.a) = R_a f
    ract_e = []
    for i in range(n):
        cols = [ee.coords_of(a.right_mult_basis()[i] * m) for m in ee.basis]
        ract_e.append(Matrix.from_cols(field, cols))
    x_space = intertwiners(field, ee.dim, n,
                           [(a.right_mult_basis()[i], ract_e[i]) for i in range(n)],
                           "Hom(E_A,A_A)")
    report["dim Hom(E_A,A_A)"] = x_space.dim
    # Psi: tensor-square -> X, a (x) a' -> (f -> a f(a'))
    q2 = ext.tensor_square()
    psi_cols = []
    for w in range(q2.dim):
        rep = q2.section_vec(unit_vector(field, q2.dim, w))
        mat = Matrix.zero(field, n, ee.dim)
        for idx, c in enumerate(rep):
            if not c:
                continue
            p, q = divmod(idx, n)
            vals = []
            for m in ee.basis:
                vals.append([c * x for x in a.mul_vec(a.basis_vec(p), m.col(q))])
            add = Matrix.from_cols(field, vals)
            mat = mat + add
        coords = x_space.coords_of(mat)
        if coords is None:
            raise ExtensionError("Psi image leaves Hom(E_A, A_A)")
        psi_cols.append(coords)
    psi = Matrix.from_cols(field, psi_cols)
    report["Psi bijective"] = (x_space.dim == q2.dim) and rank(psi) == q2.dim
    # corner C3 = Hom(_B X, _B A) with (b . nu)(f) = emb(b) nu(f)
    lact_x = []
    for i in range(ext.b.dim):
        lb = ext.emb_left_mults()[i]
        cols = [x_space.coords_of(lb * x_space.matrix_of(
            unit_vector(field, x_space.dim, m))) for m in range(x_space.dim)]
        lact_x.append(Matrix.from_cols(field, cols))
    c3 = intertwiners(field, x_space.dim, n,
                      [(ext.emb_left_mults()[i], lact_x[i])
                       for i in range(ext.b.dim)], "Hom(_B Hom(E_A,A_A), _B A)")
    report["dim Hom(_B Hom(E_A,A_A), _B A)"] = c3.dim
    # iso2: E (x)_A E -> C3, (g (x) f after flip) -> (nu -> f(nu(g)))
    iso2_cols = []
    for w in range(qee.dim):
        amb = qee.section_vec(unit_vector(field, qee.dim, w))
        mat = Matrix.zero(field, n, x_space.dim)
        for idx, c in enumerate(amb):
            if not c:
                continue
            fb, gb = divmod(idx, ee.dim)
            f_mat = ee.basis[fb]
            g_coords = unit_vector(field, ee.dim, gb)
            cols = []
            for m in range(x_space.dim):
                nu = x_space.matrix_of(unit_vector(field, x_space.dim, m))
                val = f_mat.apply(nu.apply(g_coords))
                cols.append([c * x for x in val])
            mat = mat + Matrix.from_cols(field, cols)
        coords = c3.coords_of(mat)
        if coords is None:
            raise ExtensionError("composite image leaves Hom(_B X, _B A)")
        iso2_cols.append(coords)
    iso2 = Matrix.from_cols(field, iso2_cols)
    report["E(x)E -> Hom(_B Hom(E_A,A_A), _B A) bijective"] = \
        (c3.dim == qee.dim) and rank(iso2) == qee.dim
    # iso3: precompose with Psi, landing in tables of maps on the tensor square
    # compare with the Galois map through the S (x) E evaluation tables
    gr = galois_map(ext, qb)
    tabs = IntTensor.from_matrix(qse.ev)
    beta_tab = einsum_exact("ma,aK->mK", tabs,
                            IntTensor.from_matrix(qse.section * gr.beta))
    c3_mats = IntTensor.from_scalars(
        field, [[list(r) for r in c3.matrix_of(iso2.col(w)).rows]
                for w in range(qee.dim)], (qee.dim, n, x_space.dim))
    psi_t = IntTensor.from_matrix(psi)
    composite = einsum_exact("wmx,xv->mvw", c3_mats, psi_t)
    comp_flat = IntTensor(composite.arr.reshape(n * q2.dim, qee.dim),
                          composite.den, modulus=composite.modulus)
    report["composite equals the Galois map"] = int_tensors_equal(
        comp_flat, beta_tab)
    report["corner dims"] = {"E(x)E": qee.dim, "S(x)E": qse.dim,
                             "tensor-square": q2.dim}
    return report


# ----- induced quasibase of the endomorphism extension (left side) ------------------


def endo_left_d2_quasibase(ext, qb):
    """Pairs (script-T_j, script-B_j) with sum_j T_j B_j(f) = f (x) 1.

    T_j is the Galois inverse of gamma_j (x) id; B_j(f) = f <| u_j.  The
    identity is verified on every endomorphism basis element, and the pairs
    are converted into an honest left quasibase of the endomorphism extension
    and re-verified with the generic checker there.
    """
    ctx = _model_context(ext, qb)
    field = ext.field
    ee = ctx.EE
    s = ctx.S
    qee = _cached_space(ext, qb, "EE", lambda: build_ee_square(ctx))
    qse = _cached_space(ext, qb, "SE", lambda: build_endo_square(ctx, "E"))
    gr = galois_map(ext, qb)
    action = t_action(ext, qb)
    one_e = ee.coords_of(Matrix.identity(field, ctx.n))
    tees = []
    for j in range(ctx.qb.n_pairs):
        amb = tensor_coords(field, ee.dim, ctx.qb.gamma_coords[j], one_e)
        tees.append(gr.inverse.apply(qse.project(amb)))
    ut = IntTensor.from_scalars(field, ctx.qb.u_tcoords,
                                (ctx.qb.n_pairs, ctx.tee.dim))
    bees = einsum_exact("jt,tfg->jgf", ut, action.tensor)   # matrices f -> f <| u_j
    # direct formula: T_j = sum_k gamma_j(- u_k^1) u_k^2 (x) gamma_k
    from .tensorspace import _right_mult_tensor
    rmt = _right_mult_tensor(ctx)
    gam_mats = _mats_tensor(field, ctx.qb.gammas)
    t1 = einsum_exact("kpq,xpv->kqxv", ctx.qb.u_tensors, rmt)    # (e_x u^1)_v
    t2 = einsum_exact("kqxv,jmv->kjqxm", t1, gam_mats)           # gamma_j(x u^1)
    t3 = einsum_exact("kjqxm,mqu->kjux", t2, ctx.mulA)           # ... u^2
    first = _coords_in_carrier(ctx, "E", t3, (ctx.qb.n_pairs, ctx.qb.n_pairs))
    gcoords_e = IntTensor.from_scalars(
        field, [ee.coords_of(g) for g in ctx.qb.gammas], (ctx.qb.n_pairs, ee.dim))
    direct = einsum_exact("kjF,kG->jFG", first, gcoords_e)
    for j in range(ctx.qb.n_pairs):
        amb = IntTensor(direct.arr[j].reshape(ee.dim * ee.dim), direct.den, modulus=direct.modulus)
        got = qee.project(amb.to_scalars(field))
        if got != tees[j]:
            raise AxiomFailure("closed-form and Galois-inverse quasibases differ")
    # essential identity: sum_j T_j . B_j(f) = f (x) 1
    mule = _mul_tensor_of(ee.algebra)
    sect = IntTensor.from_matrix(qee.section)
    tmat = IntTensor.from_scalars(field, [list(t) for t in tees],
                                  (ctx.qb.n_pairs, qee.dim))
    tamb = einsum_exact("jK,aK->ja", tmat, sect)
    tambT = IntTensor(tamb.arr.reshape(ctx.qb.n_pairs, ee.dim, ee.dim), tamb.den, modulus=tamb.modulus)
    bf = einsum_exact("jgf,bgc->jbcf", bees, mule)     # h' compose B_j(f)
    comb = einsum_exact("jab,jbcf->acf", tambT, bf)    # slot2 absorbs B_j(f)
    proj = IntTensor.from_matrix(qee.projection)
    projT = IntTensor(proj.arr.reshape(qee.dim, ee.dim * ee.dim), proj.den, modulus=proj.modulus)
    got = einsum_exact("Ka,af->Kf", projT,
                       IntTensor(comb.arr.reshape(ee.dim * ee.dim, ee.dim),
                                 comb.den, modulus=comb.modulus))
    want_cols = []
    for f in range(ee.dim):
        amb = tensor_coords(field, ee.dim, unit_vector(field, ee.dim, f), one_e)
        want_cols.append(qee.project(amb))
    want = IntTensor.from_matrix(Matrix.from_cols(field, want_cols))
    if not int_tensors_equal(got, want):
        raise AxiomFailure("essential left quasibase identity fails")
    # convert to an honest left quasibase of the endomorphism extension
    endo = endo_extension(ext)
    endo_s = endo.hom_bimodule()
    endo_tee = endo.tee()
    endo_q2 = endo.tensor_square()
    pairs = []
    for j in range(ctx.qb.n_pairs):
        bmat = IntTensor(bees.arr[j], bees.den, modulus=bees.modulus).to_matrix(field)
        bcoords = endo_s.coords_of(bmat)
        if bcoords is None:
            raise AxiomFailure("B_j is not a bimodule endomorphism of the tower")
        amb = qee.section_vec(tees[j])
        tcoords = endo_tee.coords_in_T(endo_q2.project(amb))
        pairs.append((bcoords, tcoords))
    qb_endo = Quasibase("left", pairs)
    if not verify_quasibase(endo, qb_endo):
        raise AxiomFailure("converted endomorphism quasibase fails verification")
    return qb_endo


def _s_into_e(ctx, s_coords):
    mat = ctx.S.matrix_of(s_coords)
    coords = ctx.EE.coords_of(mat)
    if coords is None:
        raise AxiomFailure("bimodule endomorphism missing from End(_B A)")
    return coords


# ----- right endomorphism corollary --------------------------------------------------


def right_endo_corollary(ext, left_qb):
    """End(A_B) over A through left multiplications: left D2, left balanced,
    with the induced coaction delta_L(g) = sum_i beta_i (x) g(- t_i^1) t_i^2
    matching the opposite-side coaction under the canonical identification,
    and the smash-product realization A # S = End(A_B) bijective."""
    if left_qb is None or left_qb.side != "left":
        raise AxiomFailure("the corollary needs a left quasibase")
    field = ext.field
    report = {}
    lam_ext = lambda_extension(ext)
    report["left D2"] = left_d2_quasibase(lam_ext) is not None
    report["left balanced"] = lam_ext.is_balanced("left")
    # two-path: the opposite extension carries the corresponding left coaction
    op_ext = ext._cached("op_ext", lambda: opposite_extension(ext))
    rqb_op = right_d2_quasibase(op_ext)
    if rqb_op is None:
        raise AxiomFailure("opposite extension is not right D2")
    co_op = coaction_on_E(op_ext, rqb_op)
    octx = _model_context(op_ext, rqb_op)
    # bar transport: End(A_B) basis -> End(_{B^op} A^op) has identical matrices
    er = ext.hom_right()
    ee_op = octx.EE
    s = ext.hom_bimodule()
    s_op = octx.S
    tee = ext.tee()
    n = ext.a.dim
    betas = [s.matrix_of(g) for g, _ in left_qb.pairs]
    treps = [tee.rep_in_ambient(list(t)) for _, t in left_qb.pairs]
    qse_op = co_op.space
    ok = True
    for g_idx in range(er.dim):
        g = er.basis[g_idx]
        # direct formula: sum_i beta_i (x) g(- t_i^1) t_i^2
        amb = [field.zero] * (s_op.dim * ee_op.dim)
        for beta, rep in zip(betas, treps):
            second = Matrix.zero(field, n, n)
            for idx, c in enumerate(rep):
                if not c:
                    continue
                p, q = divmod(idx, n)
                cols = []
                for x in range(n):
                    val = ext.a.mul_vec(g.apply(ext.a.mul_vec(
                        ext.a.basis_vec(x), ext.a.basis_vec(p))),
                        ext.a.basis_vec(q))
                    cols.append([c * v for v in val])
                second = second + Matrix.from_cols(field, cols)
            bcoords = s_op.coords_of(beta)
            scoords = ee_op.coords_of(second)
            if bcoords is None or scoords is None:
                raise AxiomFailure("coaction legs leave their carriers")
            amb = [x + y for x, y in zip(
                amb, tensor_coords(field, ee_op.dim, bcoords, scoords))]
        lhs = qse_op.project(amb)
        rhs = co_op.delta.apply(ee_op.coords_of(g))
        if lhs != rhs:
            ok = False
            break
    report["coaction matches the opposite-side coaction"] = ok
    # delta_L(1) = 1 (x) 1
    one_coords = er.coords_of(Matrix.identity(field, n))
    amb1 = tensor_coords(field, ee_op.dim,
                         s_op.coords_of(Matrix.identity(field, n)),
                         ee_op.coords_of(Matrix.identity(field, n)))
    report["delta(1) = 1 (x) 1"] = (
        co_op.delta.apply(ee_op.coords_of(Matrix.identity(field, n)))
        == qse_op.project(amb1))
    # smash product A (x)_R S -> End(A_B), a # alpha -> lambda(a) . alpha
    from .extensions import balanced_tensor
    r_alg0, r_inc0 = ext.centralizer()
    lam_acts = []
    for l in range(r_alg0.dim):
        lr = ext.a.left_mult(r_inc0.col(l))
        cols = [s.coords_of(lr * m) for m in s.basis]
        lam_acts.append(Matrix.from_cols(field, cols))
    r_acts = [ext.a.right_mult(r_inc0.col(l)) for l in range(r_alg0.dim)]
    smash_space = balanced_tensor(field, n, s.dim, r_acts, lam_acts)
    smash_cols = []
    for i in range(n):
        li = ext.a.left_mult_basis()[i]
        for a_idx in range(s.dim):
            smash_cols.append(er.coords_of(li * s.basis[a_idx]))
    if any(c is None for c in smash_cols):
        raise AxiomFailure("smash product legs leave End(A_B)")
    smash_amb = Matrix.from_cols(field, smash_cols)
    smash = smash_amb * smash_space.section
    rel_killed = all(vec_is_zero(field, smash_amb.apply(list(v)))
                     for v in smash_space.relations.basis.rows)
    report["smash map bijective"] = (rel_killed and
                                     smash_space.dim == er.dim and
                                     rank(smash) == er.dim)
    # transported coaction: delta_L(a # alpha) = alpha_(2) (x) (a # alpha_(1))
    rqb = right_d2_quasibase(ext)
    bi_s = _cached_s_bialgebroid(ext, rqb)
    ok2 = True
    for i in range(n):
        li = ext.a.left_mult_basis()[i]
        for a_idx in range(s.dim):
            g = li * s.basis[a_idx]
            lhs = co_op.delta.apply(ee_op.coords_of(g))
            w = bi_s.comult.col(a_idx)
            amb_w = bi_s.tsq.section_vec(w)
            acc = [field.zero] * (s_op.dim * ee_op.dim)
            for idx, c in enumerate(amb_w):
                if not c:
                    continue
                a1, a2 = divmod(idx, s.dim)
                second = li * s.basis[a1]
                c2 = s_op.coords_of(s.matrix_of(unit_vector(field, s.dim, a2)))
                sc = ee_op.coords_of(second)
                acc = [x + c * y for x, y in zip(
                    acc, tensor_coords(field, ee_op.dim, c2, sc))]
            rhs = qse_op.project(acc)
            if lhs != rhs:
                ok2 = False
                break
        if not ok2:
            break
    report["smash-transported coaction matches"] = ok2
    return report


# ----- the restricted Galois isomorphism ---------------------------------------------


def corollary_iso_ES(ext, qb):
    """The Galois map restricted to the rho(A)-central part of the tensor
    square of End(_B A), with the opposite product, is an algebra isomorphism
    onto the bimodule endomorphism algebra."""
    ctx = _model_context(ext, qb)
    field = ext.field
    ee = ctx.EE
    s = ctx.S
    n = ext.a.dim
    qee = _cached_space(ext, qb, "EE", lambda: build_ee_square(ctx))
    report = {}
    from .bialgebroids import _pair_leg_action
    rho = ext.rho_map()
    conds = []
    for i in range(n):
        rho_i = ee.matrix_of(rho.col(i))
        left_first = _pair_leg_action(qee, first=ee.algebra.left_mult(
            ee.coords_of(rho_i)))
        right_second = _pair_leg_action(qee, second=ee.algebra.right_mult(
            ee.coords_of(rho_i)))
        conds.append(left_first - right_second)
    stacked = conds[0]
    for c in conds[1:]:
        stacked = stacked.vstack(c)
    w_space = nullspace(stacked)
    report["dim central part"] = w_space.dim
    report["dim S"] = s.dim
    # the map w -> (x -> T^1(x T^2(1)))
    phi_cols = []
    one = ext.a.unit
    for b_idx in range(w_space.dim):
        amb = qee.section_vec(list(w_space.basis.rows[b_idx]))
        mat = Matrix.zero(field, n, n)
        for idx, c in enumerate(amb):
            if not c:
                continue
            fb, gb = divmod(idx, ee.dim)
            g_one = ee.basis[gb].apply(one)
            comp = ee.basis[fb] * ext.a.right_mult(g_one)
            mat = mat + comp.scale(c)
        coords = s.coords_of(mat)
        if coords is None:
            raise AxiomFailure("restricted Galois image leaves the bimodule endos")
        phi_cols.append(coords)
    phi = Matrix.from_cols(field, phi_cols)
    report["bijective onto S"] = (w_space.dim == s.dim) and rank(phi) == s.dim
    # image of 1 (x) 1 is the identity map
    one_e = ee.coords_of(Matrix.identity(field, n))
    unit_w = w_space.coords_of(qee.project(
        tensor_coords(field, ee.dim, one_e, one_e)))
    report["unit maps to id"] = (
        unit_w is not None and
        phi.apply(unit_w) == s.coords_of(Matrix.identity(field, n)))
    # multiplicativity for the opposite product t o t' = t^1 t'^1 (x) t'^2 t^2
    ok = True
    mule = ee.algebra
    for i_idx in range(w_space.dim):
        wi = qee.section_vec(list(w_space.basis.rows[i_idx]))
        for j_idx in range(w_space.dim):
            wj = qee.section_vec(list(w_space.basis.rows[j_idx]))
            acc = [field.zero] * (ee.dim * ee.dim)
            for idx1, c1 in enumerate(wi):
                if not c1:
                    continue
                f1, g1 = divmod(idx1, ee.dim)
                for idx2, c2 in enumerate(wj):
                    if not c2:
                        continue
                    f2, g2 = divmod(idx2, ee.dim)
                    cc = c1 * c2
                    ff = mule.mul_vec(unit_vector(field, ee.dim, f1),
                                      unit_vector(field, ee.dim, f2))
                    gg = mule.mul_vec(unit_vector(field, ee.dim, g2),
                                      unit_vector(field, ee.dim, g1))
                    for fi, cf in enumerate(ff):
                        if not cf:
                            continue
                        for gi, cg in enumerate(gg):
                            if cg:
                                acc[fi * ee.dim + gi] = \
                                    acc[fi * ee.dim + gi] + cc * cf * cg
            prod_w = w_space.coords_of(qee.project(acc))
            if prod_w is None:
                ok = False
                break
            lhs = phi.apply(prod_w)
            rhs = s.coords_of(s.matrix_of(phi.col(i_idx))
                              * s.matrix_of(phi.col(j_idx)))
            if lhs != rhs:
                ok = False
                break
        if not ok:
            break
    report["multiplicative (opposite product)"] = ok
    # source/target compatibility through the centralizer of the tower
    endo = endo_extension(ext)
    r_endo, r_endo_inc = endo.centralizer()
    ok_s, ok_t = True, True
    lam = _lambda_into_left_endos(ext)
    r_alg, r_inc = ext.centralizer()
    for l in range(r_endo.dim):
        f_coords = r_endo_inc.col(l)
        f_mat = ee.matrix_of(f_coords)
        f_one = f_mat.apply(ext.a.unit)
        # sigma(f) = 1 (x) f maps to rho(f(1)); tau(f) = f (x) 1 to lambda(f(1))
        w1 = w_space.coords_of(qee.project(
            tensor_coords(field, ee.dim, one_e, f_coords)))
        w2 = w_space.coords_of(qee.project(
            tensor_coords(field, ee.dim, f_coords, one_e)))
        if w1 is None or phi.apply(w1) != s.coords_of(
                ext.a.right_mult(f_one)):
            ok_s = False
        if w2 is None or phi.apply(w2) != s.coords_of(
                ext.a.left_mult(f_one)):
            ok_t = False
    report["source goes to rho"] = ok_s
    report["target goes to lambda"] = ok_t
    # counit compatibility: eps_S(phi(w)) = (T^1 T^2)(1) as centralizer elements
    ok_e = True
    r_space = Subspace.from_vectors(field, n,
                                    [r_inc.col(i) for i in range(r_alg.dim)])
    for b_idx in range(w_space.dim):
        amb = qee.section_vec(list(w_space.basis.rows[b_idx]))
        val = [field.zero] * n
        for idx, c in enumerate(amb):
            if not c:
                continue
            fb, gb = divmod(idx, ee.dim)
            comp = ee.basis[fb] * ee.basis[gb]
            val = [x + c * y for x, y in zip(val, comp.apply(one))]
        smat = s.matrix_of(phi.col(b_idx))
        eps_val = smat.apply(one)
        if r_space.coords_of(val) != r_space.coords_of(eps_val):
            ok_e = False
            break
    report["counit compatible"] = ok_e
    return report


# ----- converse: generator Frobenius extensions --------------------------------------


def generator_trace_ideal_is_full(ext):
    """Trace ideal of A_B: the span of all h(a), h in Hom(A_B, B_B)."""
    hstar = ext.hom_right_to_b()
    field = ext.field
    vecs = []
    for h in hstar.basis:
        for i in range(ext.a.dim):
            vecs.append(h.col(i))
    span = Subspace.from_vectors(field, ext.b.dim, vecs)
    return span.dim == ext.b.dim


def converse_frobenius_check(ext):
    """For a generator Frobenius extension: if the right-endomorphism tower
    is D2 then so is the base extension; checked instance-wise."""
    report = {}
    fs = ext.frobenius_system()
    if fs is None:
        report["status"] = "skipped: extension is not Frobenius"
        return report
    if not generator_trace_ideal_is_full(ext):
        report["status"] = "skipped: generator condition fails"
        return report
    report["status"] = "checked"
    lam_ext = lambda_extension(ext)
    up_right = right_d2_quasibase(lam_ext) is not None
    up_left = left_d2_quasibase(lam_ext) is not None
    base_right = right_d2_quasibase(ext) is not None
    base_left = left_d2_quasibase(ext) is not None
    report["tower right D2"] = up_right
    report["tower left D2"] = up_left
    report["base right D2"] = base_right
    report["base left D2"] = base_left
    implication = (not (up_right and up_left)) or (base_right and base_left)
    report["implication holds"] = implication
    if not implication:
        raise AxiomFailure("a D2 tower over a non-D2 generator Frobenius base")
    return report
