"""Command-line entry point: run check pipelines and dump exact structures.

    d2kit check --case paper-matrix --stages all
    d2kit check --input ext.json --stages validate,d2 --json report.json
    d2kit list-cases
    d2kit check --case s3-over-a3 --dump quasibase

Reports are deterministic for a fixed (input, stages, seed); the timing
section is informational and excluded from byte-for-byte comparisons.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .algebras import AlgebraError
from .bialgebroids import build_S, build_T, op_cop, pairings, verify_bialgebroid
from .corpus import builtin_cases, case_by_name, corpus_manifest
from .depth2 import (h_separability_certificate, is_h_separable,
                     left_d2_quasibase, right_d2_quasibase, verify_quasibase)
from .extensions import (ExtensionError, derived_spaces_json,
                         extension_from_json, extension_to_json)
from .fields import FieldError, field_from_name
from .galois import (converse_frobenius_check, coaction_on_A, coaction_on_E,
                     corollary_iso_ES, endo_left_d2_quasibase,
                     figure1_factorization, galois_map, right_endo_corollary,
                     right_galois_map, t_action)
from .hopf import HopfAlgebroid, kanzaki_element
from .linalg import LinalgError

STAGES = ["validate", "centralizer", "d2", "bialgebroid", "comodule",
          "galois", "figure1", "hopf", "tower", "converse"]

STAGE_NEEDS = {
    "bialgebroid": "d2",
    "comodule": "d2",
    "galois": "d2",
    "figure1": "galois",
    "hopf": "d2",
    "tower": "d2",
    "converse": "validate",
}

DUMP_TARGETS = ["R", "S", "T", "quasibase", "bialgebroid", "galois", "hopf",
                "derived"]


class ParseError(ValueError):
    pass


class DimensionCapExceeded(RuntimeError):
    pass


class StageDependencyError(ValueError):
    pass


class UnknownCase(KeyError):
    pass


class UnknownDumpTarget(KeyError):
    pass


def _enc(field):
    return field.to_json


def _stage_validate(ext, report, opts):
    report["proper"] = ext.is_proper
    report["dim_A"] = ext.a.dim
    report["dim_B"] = ext.b.dim
    report["field"] = ext.field.name
    return True


def _stage_centralizer(ext, report, opts):
    r_alg, r_inc = ext.centralizer()
    enc = _enc(ext.field)
    report["dim_R"] = r_alg.dim
    report["dim_tensor_square"] = ext.tensor_square().dim
    report["dim_S"] = ext.hom_bimodule().dim
    report["dim_end_left"] = ext.hom_left().dim
    report["dim_end_right"] = ext.hom_right().dim
    report["R_basis"] = [[enc(x) for x in r_inc.col(i)] for i in range(r_alg.dim)]
    return True


def _stage_d2(ext, report, opts):
    rqb = right_d2_quasibase(ext)
    lqb = left_d2_quasibase(ext)
    report["right_d2"] = rqb is not None
    report["left_d2"] = lqb is not None
    if rqb is not None:
        report["right_quasibase_pairs"] = len(rqb)
    if lqb is not None:
        report["left_quasibase_pairs"] = len(lqb)
    report["h_separable"] = is_h_separable(ext)
    report["split"] = ext.is_split() is not None
    fs = ext.frobenius_system()
    report["frobenius"] = fs is not None
    report["balanced_left"] = ext.is_balanced("left")
    report["balanced_right"] = ext.is_balanced("right")
    return True


def _stage_bialgebroid(ext, report, opts):
    rqb = right_d2_quasibase(ext)
    lqb = left_d2_quasibase(ext)
    if rqb is None and lqb is None:
        report["skipped"] = "extension is not one-sided D2"
        return True
    ok = True
    if rqb is not None:
        s_bi = build_S(ext, rqb, left_qb=lqb)
        rep = verify_bialgebroid(s_bi)
        report["S_axioms"] = rep.as_dict()
        ok = ok and rep.passed
        t_bi = build_T(ext, rqb, alt_qb=lqb)
    else:
        t_bi = build_T(ext, lqb)
    rep_t = verify_bialgebroid(t_bi)
    report["T_axioms"] = rep_t.as_dict()
    ok = ok and rep_t.passed
    if rqb is not None:
        pd = pairings(ext)
        report["pairings"] = {
            "angle_nondegenerate": pd.angle_nondegenerate,
            "bracket_nondegenerate": pd.bracket_nondegenerate,
            "bracket_iso_onto_dual": pd.bracket_iso_onto_dual,
        }
        ok = ok and pd.angle_nondegenerate and pd.bracket_nondegenerate \
            and pd.bracket_iso_onto_dual
    return ok


def _stage_comodule(ext, report, opts):
    rqb = right_d2_quasibase(ext)
    if rqb is None:
        report["skipped"] = "extension is not right D2"
        return True
    act_rep = t_action(ext, rqb).verify()
    report["action_axioms"] = act_rep.as_dict()
    co = coaction_on_E(ext, rqb)
    report["coaction_on_endomorphisms"] = "all axioms pass"
    co_a = coaction_on_A(ext, rqb)
    report["coaction_on_A"] = "all axioms pass"
    beta_r, bij, _ = right_galois_map(ext, rqb)
    report["beta_R_bijective"] = bij
    expected = ext.is_balanced("right")
    report["characterization_consistent"] = (bij == expected)
    return act_rep.passed and report["characterization_consistent"]


def _stage_galois(ext, report, opts):
    rqb = right_d2_quasibase(ext)
    if rqb is None:
        report["skipped"] = "extension is not right D2"
        return True
    gr = galois_map(ext, rqb)
    report["galois"] = gr.as_dict(ext.field)
    ok = gr.bijective and all(gr.witnesses.values())
    qb_endo = endo_left_d2_quasibase(ext, rqb)
    report["endo_left_quasibase_pairs"] = len(qb_endo)
    iso = corollary_iso_ES(ext, rqb)
    report["restricted_iso"] = {k: v for k, v in iso.items()
                                if isinstance(v, bool)}
    ok = ok and all(v for v in report["restricted_iso"].values())
    return ok


def _stage_figure1(ext, report, opts):
    rqb = right_d2_quasibase(ext)
    if rqb is None:
        report["skipped"] = "extension is not right D2"
        return True
    f1 = figure1_factorization(ext, rqb)
    report["factorization"] = {k: v for k, v in f1.items()
                               if not isinstance(v, dict)}
    report["corner_dims"] = f1.get("corner dims", {})
    return all(v for v in f1.values() if isinstance(v, bool))


def _stage_hopf(ext, report, opts):
    e = kanzaki_element(ext.b)
    report["kanzaki_base"] = e is not None
    if e is None:
        report["skipped"] = "base algebra has no symmetric separability element"
        return True
    rqb = right_d2_quasibase(ext)
    if rqb is None:
        report["skipped"] = "extension is not right D2"
        return True
    h = HopfAlgebroid(ext, rqb, e)
    rep = h.verify()
    report["hopf_axioms"] = rep.as_dict()
    return rep.passed


def _stage_tower(ext, report, opts):
    lqb = left_d2_quasibase(ext)
    if lqb is None:
        report["skipped"] = "extension is not left D2"
        return True
    rep = right_endo_corollary(ext, lqb)
    report["right_endomorphism_tower"] = rep
    return all(v for v in rep.values() if isinstance(v, bool))


def _stage_converse(ext, report, opts):
    rep = converse_frobenius_check(ext)
    report["converse"] = rep
    return rep.get("implication holds", True)


STAGE_FUNCS = {
    "validate": _stage_validate,
    "centralizer": _stage_centralizer,
    "d2": _stage_d2,
    "bialgebroid": _stage_bialgebroid,
    "comodule": _stage_comodule,
    "galois": _stage_galois,
    "figure1": _stage_figure1,
    "hopf": _stage_hopf,
    "tower": _stage_tower,
    "converse": _stage_converse,
}

HEAVY_STAGES = {"comodule", "galois", "figure1", "tower"}


def run_pipeline(ext, stages, dim_cap=9, expected=None, dims_expected=None,
                 seed=0):
    """Execute stages in dependency order; returns (report dict, all passed)."""
    chosen = []
    for st in STAGES:
        if st in stages:
            need = STAGE_NEEDS.get(st)
            if need is not None and need not in stages:
                raise StageDependencyError(
                    "stage %r requires stage %r" % (st, need))
            chosen.append(st)
    report = {"schema": "d2kit-report/1", "extension": ext.name,
              "seed": seed, "stages": {}}
    all_ok = True
    timing = {}
    for st in chosen:
        entry = {}
        t0 = time.time()
        if st in HEAVY_STAGES and ext.a.dim > dim_cap:
            entry["skipped"] = ("dim A = %d exceeds the cap %d; rerun with "
                                "--dim-cap" % (ext.a.dim, dim_cap))
            ok = True
        else:
            ok = STAGE_FUNCS[st](ext, entry, {})
        timing[st] = round(time.time() - t0, 3)
        entry["passed"] = bool(ok)
        report["stages"][st] = entry
        all_ok = all_ok and ok
    if expected:
        flags = _computed_flags(ext, report)
        mism = {}
        for key, (want, prov) in expected.items():
            if key in flags and flags[key] != want:
                mism[key] = {"expected": want, "got": flags[key],
                             "provenance": prov}
        if mism:
            report["expectation_mismatches"] = mism
            all_ok = False
    if dims_expected:
        got = _computed_dims(ext, report)
        mism = {}
        for key, (want, prov) in dims_expected.items():
            if key in got and got[key] != want:
                mism[key] = {"expected": want, "got": got[key],
                             "provenance": prov}
        if mism:
            report["dimension_mismatches"] = mism
            all_ok = False
    report["passed"] = bool(all_ok)
    return report, all_ok, timing


def _computed_flags(ext, report):
    out = {}
    stages = report["stages"]
    if "validate" in stages:
        out["proper"] = stages["validate"].get("proper")
    if "d2" in stages and "skipped" not in stages["d2"]:
        for k in ("right_d2", "left_d2", "h_separable", "split", "frobenius",
                  "balanced_left", "balanced_right"):
            out[k] = stages["d2"].get(k)
    if "hopf" in stages:
        if "kanzaki_base" in stages["hopf"]:
            out["kanzaki_base"] = stages["hopf"]["kanzaki_base"]
    return out


def _computed_dims(ext, report):
    out = {}
    stages = report["stages"]
    if "centralizer" in stages and "skipped" not in stages["centralizer"]:
        out["centralizer"] = stages["centralizer"].get("dim_R")
        out["tensor_square"] = stages["centralizer"].get("dim_tensor_square")
        out["end_left"] = stages["centralizer"].get("dim_end_left")
        hom_r_a = None
        r = stages["centralizer"].get("dim_R")
        if r is not None:
            hom_r_a = r * ext.a.dim
        out["hom_r_a"] = hom_r_a
    return out


def _dump(ext, target):
    enc = _enc(ext.field)
    if target == "R":
        r_alg, r_inc = ext.centralizer()
        return {"schema": "d2kit-dump/1", "target": "R", "dim": r_alg.dim,
                "basis_in_A": [[enc(x) for x in r_inc.col(i)]
                               for i in range(r_alg.dim)]}
    if target == "S":
        s = ext.hom_bimodule()
        return {"schema": "d2kit-dump/1", "target": "S", "dim": s.dim,
                "basis": [[enc(x) for x in m.entries] for m in s.basis]}
    if target == "T":
        tee = ext.tee()
        from .linalg import unit_vector
        reps = [[enc(x) for x in tee.rep_in_ambient(
            unit_vector(ext.field, tee.dim, i))] for i in range(tee.dim)]
        # re-verify centrality of every representative
        for i in range(tee.dim):
            coords = tee.subspace.coords_of(tee.section_to_q2(
                unit_vector(ext.field, tee.dim, i)))
            if coords is None:
                raise ExtensionError("stored basis left the B-central part")
        return {"schema": "d2kit-dump/1", "target": "T", "dim": tee.dim,
                "basis_in_tensor_square": reps}
    if target == "quasibase":
        out = {"schema": "d2kit-dump/1", "target": "quasibase"}
        for side, qb in (("right", right_d2_quasibase(ext)),
                         ("left", left_d2_quasibase(ext))):
            if qb is None:
                out[side] = None
            else:
                out[side] = {
                    "pairs": [
                        {"bimodule_endo": [enc(x) for x in g],
                         "central_tensor": [enc(x) for x in t]}
                        for (g, t) in qb.pairs],
                    "verified": verify_quasibase(ext, qb),
                    "residual": "0",
                }
        return out
    if target == "bialgebroid":
        rqb = right_d2_quasibase(ext)
        if rqb is None:
            raise ExtensionError("extension is not right D2")
        s_bi = build_S(ext, rqb)
        t_bi = build_T(ext, rqb)
        def dump_bi(bi):
            return {
                "chirality": bi.chirality,
                "total_dim": bi.total.dim,
                "base_dim": bi.base.dim,
                "source": [[enc(x) for x in row] for row in bi.source.rows],
                "target": [[enc(x) for x in row] for row in bi.target.rows],
                "comult": [[enc(x) for x in row] for row in bi.comult.rows],
                "counit": [[enc(x) for x in row] for row in bi.counit.rows],
                "axioms": verify_bialgebroid(bi).as_dict(),
            }
        return {"schema": "d2kit-dump/1", "target": "bialgebroid",
                "S": dump_bi(s_bi), "T": dump_bi(t_bi)}
    if target == "galois":
        rqb = right_d2_quasibase(ext)
        if rqb is None:
            raise ExtensionError("extension is not right D2")
        gr = galois_map(ext, rqb)
        out = gr.as_dict(ext.field)
        out["schema"] = "d2kit-dump/1"
        out["target"] = "galois"
        out["beta"] = [[enc(x) for x in row] for row in gr.beta.rows]
        out["inverse"] = [[enc(x) for x in row] for row in gr.inverse.rows]
        out["coinvariant_basis"] = [[enc(x) for x in row]
                                    for row in gr.coinvariants.basis.rows]
        qb_endo = endo_left_d2_quasibase(ext, rqb)
        out["endo_quasibase_pairs"] = len(qb_endo)
        return out
    if target == "hopf":
        e = kanzaki_element(ext.b)
        if e is None:
            return {"schema": "d2kit-dump/1", "target": "hopf",
                    "kanzaki_base": False}
        rqb = right_d2_quasibase(ext)
        if rqb is None:
            raise ExtensionError("extension is not right D2")
        h = HopfAlgebroid(ext, rqb, e)
        rep = h.verify()
        return {"schema": "d2kit-dump/1", "target": "hopf",
                "kanzaki_base": True,
                "separability_element": [enc(x) for x in e.coords],
                "antipode": [[enc(x) for x in row] for row in h.tau.rows],
                "axioms": rep.as_dict()}
    if target == "derived":
        return derived_spaces_json(ext)
    raise UnknownDumpTarget("unknown dump target %r" % target)


def _human_lines(report):
    lines = []
    for st, entry in report["stages"].items():
        mark = "ok" if entry.get("passed") else "FAIL"
        if "skipped" in entry:
            lines.append("  %-12s -    (%s)" % (st, entry["skipped"]))
            continue
        lines.append("  %-12s %s" % (st, mark))
        if not entry.get("passed"):
            for k, v in entry.items():
                if isinstance(v, dict):
                    for name, res in v.items():
                        if isinstance(res, dict) and not res.get("passed", True):
                            lines.append("      %s.%s: %s"
                                         % (k, name, res.get("witness", "")))
    for key in ("expectation_mismatches", "dimension_mismatches"):
        for k, v in report.get(key, {}).items():
            lines.append("  mismatch %s: expected %s, got %s"
                         % (k, v["expected"], v["got"]))
    return lines


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="d2kit",
        description="Exact checks for depth-two algebra extensions, their "
                    "bialgebroids, Galois coactions and Hopf structures.")
    sub = parser.add_subparsers(dest="command", required=True)
    chk = sub.add_parser("check", help="run a verification pipeline")
    chk.add_argument("--case", help="built-in corpus case name")
    chk.add_argument("--input", help="extension descriptor JSON file")
    chk.add_argument("--stages", default="all",
                     help="comma-separated stages or 'all' (%s)" % ",".join(STAGES))
    chk.add_argument("--field", default=None, help="Q or Fp:<p>")
    chk.add_argument("--dim-cap", type=int, default=9,
                     help="skip endomorphism-level stages above this dim(A)")
    chk.add_argument("--seed", type=int, default=0)
    chk.add_argument("--json", dest="json_path", help="write the JSON report here")
    chk.add_argument("--dump", help="dump target: %s" % ",".join(DUMP_TARGETS))
    lst = sub.add_parser("list-cases", help="print the corpus manifest")
    lst.add_argument("--json", dest="json_path")
    args = parser.parse_args(argv)

    if args.command == "list-cases":
        manifest = corpus_manifest()
        text = json.dumps(manifest, indent=2, sort_keys=True)
        if args.json_path:
            with open(args.json_path, "w") as fh:
                fh.write(text + "\n")
        print(text)
        return 0

    try:
        field = field_from_name(args.field) if args.field else None
        expected = None
        dims_expected = None
        if args.case:
            try:
                case = case_by_name(args.case)
            except KeyError as exc:
                raise UnknownCase(str(exc))
            from .fields import QQ
            ext = case.extension(field or QQ)
            expected = case.expected if (field is None or field.name == "Q") \
                else None
            dims_expected = case.dims if (field is None or field.name == "Q") \
                else None
        elif args.input:
            try:
                with open(args.input) as fh:
                    payload = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise ParseError("cannot parse %s: %s" % (args.input, exc))
            try:
                ext = extension_from_json(payload)
            except (KeyError, TypeError, AlgebraError, ExtensionError,
                    FieldError, LinalgError) as exc:
                raise ParseError("invalid extension descriptor: %s" % exc)
        else:
            parser.error("check requires --case or --input")
        if args.dump:
            if args.dump not in DUMP_TARGETS:
                raise UnknownDumpTarget("unknown dump target %r" % args.dump)
            payload = _dump(ext, args.dump)
            text = json.dumps(payload, indent=2, sort_keys=True)
            if args.json_path:
                with open(args.json_path, "w") as fh:
                    fh.write(text + "\n")
            print(text)
            return 0
        stages = STAGES if args.stages == "all" else \
            [s.strip() for s in args.stages.split(",") if s.strip()]
        for s in stages:
            if s not in STAGES:
                raise StageDependencyError("unknown stage %r" % s)
        report, ok, timing = run_pipeline(
            ext, stages, dim_cap=args.dim_cap, expected=expected,
            dims_expected=dims_expected, seed=args.seed)
        payload = dict(report)
        payload["timing"] = timing
        text = json.dumps(payload, indent=2, sort_keys=True)
        if args.json_path:
            with open(args.json_path, "w") as fh:
                fh.write(text + "\n")
        print("extension: %s" % ext.name)
        for line in _human_lines(report):
            print(line)
        print("overall: %s" % ("pass" if ok else "FAIL"))
        return 0 if ok else 1
    except (ParseError, UnknownCase, UnknownDumpTarget,
            StageDependencyError, DimensionCapExceeded) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
