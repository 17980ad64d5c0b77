"""Command line front end.

    gradcat cat info MODEL
    gradcat grading validate MODEL --grading U
    gradcat pi1 presentation bq.json --q 0
    gradcat examples run --all

MODEL is a path to a model file or the name of a built-in corpus model
(``bq``, ``bq.json``, ``kronecker`` ...).  Exit codes: 0 when every verdict
passes, 1 when some verdict fails, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import corpus, grading, grpkit, morph, schur, smash
from .errors import (
    GradcatError,
    NotConstricted,
    NotHomogeneousWitness,
    NotSG,
    ParseError,
    SchemaError,
    SquareFails,
    UnresolvedReference,
)
from .linrep import identity_functor
from .io import Model, build_grading, category_to_json, dump, parse_element, parse_group, parse_model

INPUT_ERRORS = (SchemaError, ParseError, UnresolvedReference)


class UsageError(Exception):
    pass


@dataclass
class Report:
    command: str
    verdicts: list = field(default_factory=list)  # (name, ok, detail)
    data: dict = field(default_factory=dict)

    def check(self, name, ok, detail=""):
        self.verdicts.append((name, bool(ok), detail))
        return ok

    @property
    def ok(self):
        return all(v[1] for v in self.verdicts)

    @property
    def exit_code(self):
        return 0 if self.ok else 1

    def to_json(self):
        return {
            "command": self.command,
            "ok": self.ok,
            "verdicts": [{"name": n, "ok": ok, "detail": d} for n, ok, d in self.verdicts],
            "data": self.data,
        }

    def to_text(self):
        lines = ["# " + self.command]
        for k, v in self.data.items():
            lines.append("%s: %s" % (k, v if isinstance(v, str) else json.dumps(v, sort_keys=True)))
        for n, ok, d in self.verdicts:
            lines.append("%s %s%s" % ("PASS" if ok else "FAIL", n, (": " + d) if d else ""))
        lines.append("result: %s" % ("ok" if self.ok else "failed"))
        return "\n".join(lines)


# --- loading ---------------------------------------------------------------------


def _params(args):
    out = {}
    for item in getattr(args, "param", None) or []:
        if "=" not in item:
            raise UsageError("--param expects NAME=VALUE, got %r" % item)
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    if getattr(args, "q", None) is not None:
        out["q"] = args.q
    return out


def load_model(spec, params=None) -> Model:
    path = Path(spec)
    if path.exists():
        return parse_model(path, params)
    stem = path.name[:-5] if path.name.endswith(".json") else path.name
    if stem in corpus.NAMES:
        return parse_model(corpus.raw(stem), params)
    raise ParseError("no model file %s and no corpus model named %r" % (spec, stem))


def load_grading(model: Model, spec):
    if spec in model.gradings:
        return model.grading(spec)
    path = Path(spec)
    if path.exists():
        try:
            obj = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError("invalid JSON in %s: %s" % (spec, exc)) from exc
        return build_grading(model.category, obj, model.params, path.stem)
    raise UnresolvedReference("no grading %r in the model and no such file" % spec)


def _base(model, args):
    b0 = getattr(args, "base", None) or model.category.objects[0]
    if b0 not in model.category.objects:
        raise UnresolvedReference("unknown base object %r" % b0)
    return b0


def _pairs_text(d):
    return {"%s->%s" % k: v for k, v in d.items()}


# --- commands --------------------------------------------------------------------


def cmd_cat_info(args, rep):
    m = load_model(args.model, _params(args))
    cat = m.category
    rep.data["field"] = str(cat.field)
    rep.data["objects"] = list(cat.objects)
    rep.data["arrows"] = ["%s: %s->%s" % a for a in cat.quiver.arrows]
    rep.data["hom_dims"] = _pairs_text({k: cat.hom_dim(*k) for k in cat.pairs() if cat.hom_dim(*k)})
    rep.data["bases"] = _pairs_text({k: [str(p) for p in cat.basis_paths(*k)] for k in cat.pairs() if cat.hom_dim(*k)})
    rep.data["total_dim"] = cat.total_dim()
    rep.check("category built", True)


def cmd_cat_check(args, rep):
    try:
        m = load_model(args.model, _params(args))
    except INPUT_ERRORS:
        raise
    except GradcatError as exc:
        rep.check("presentation", False, "%s: %s" % (type(exc).__name__, exc))
        return
    rep.check("presentation", True, "admissible relations, valid bound")
    for name, X in m.gradings.items():
        r = grading.validate_grading(X)
        rep.check("grading %s valid" % name, r.ok, "" if r.ok else r.violations[0].detail)
    for name in m.functors:
        rep.check("functor %s" % name, True)


def cmd_grading_validate(args, rep):
    m = load_model(args.model, _params(args))
    X = load_grading(m, args.grading)
    r = grading.validate_grading(X)
    rep.data["group"] = str(X.group)
    rep.check("valid", r.ok, "" if r.ok else "; ".join(v.detail for v in r.violations[:5]))


def cmd_grading_connected(args, rep):
    m = load_model(args.model, _params(args))
    X = load_grading(m, args.grading)
    grading.require_valid(X)
    b0 = _base(m, args)
    gens = grading.closed_walk_subgroup(X, b0)
    q = grpkit.subgroup_quotient(X.group, gens)
    rep.data["group"] = str(X.group)
    rep.data["closed_walk_degrees"] = [str(g) for g in gens]
    rep.data["cokernel"] = str(q.quotient)
    rep.check("connected", q.is_full, "" if q.is_full else "closed walks miss %s" % q.quotient)


def cmd_grading_quotient(args, rep):
    m = load_model(args.model, _params(args))
    X = load_grading(m, args.grading)
    Y = grading.quotient_grading(X, grading.reduction(X.group, args.modulus), name="%s/%d" % (X.name, args.modulus))
    b0 = _base(m, args)
    rep.data["group"] = str(Y.group)
    rep.check("valid", grading.validate_grading(Y).ok)
    rep.check("connected", grading.is_connected_grading(Y, b0))
    if args.out:
        dump(Y.to_json(), args.out)
        rep.data["written"] = args.out


def cmd_schur_analyze(args, rep):
    m = load_model(args.model, _params(args))
    cat = m.category
    sg = schur.sg_closure(cat)
    con = schur.is_constricted(cat)
    rep.data["schurian"] = ["%s->%s" % k for k in schur.schurian_morphisms(cat)]
    rep.data["sg"] = sg.is_sg
    rep.data["sg_closure_dims"] = _pairs_text({k: sg.dim(*k) for k in cat.pairs() if cat.hom_dim(*k)})
    rep.data["constricted"] = con.ok
    if not con.ok:
        rep.data["constricted_witness"] = "%s parallel to %s" % (con.path, con.arrow)
    rep.check("analysis", True)


def cmd_schur_universal(args, rep):
    m = load_model(args.model, _params(args))
    b0 = _base(m, args)
    try:
        res = schur.universal_grading(m.category, b0)
    except (NotSG, NotConstricted) as exc:
        rep.check("universal grading", False, "%s: %s" % (type(exc).__name__, exc))
        return
    U = res.grading
    rep.data["presentation"] = str(res.presentation)
    rep.data["group"] = str(U.group)
    rep.data["arrow_degrees"] = {a.id: str(U.degree(m.category.arrow(a.id))) for a in m.category.quiver.arrows}
    rep.check("valid", grading.validate_grading(U).ok)
    rep.check("connected", grading.is_connected_grading(U, b0))
    if args.out_presentation:
        dump(res.presentation.to_json(), args.out_presentation)
    if args.out_grading:
        dump(U.to_json(), args.out_grading)


def _smash_source(args):
    m = load_model(args.category, _params(args))
    X = load_grading(m, args.grading)
    if args.modulus:
        X = grading.quotient_grading(X, grading.reduction(X.group, args.modulus))
    return m, X


def cmd_smash_build(args, rep):
    m, X = _smash_source(args)
    S = smash.build_smash(X)
    rep.data["objects"] = len(S.objects)
    rep.data["total_dim"] = S.total_dim()
    rep.check("built", True)
    if args.out:
        doc = S.to_json()
        doc["model"] = category_to_json(m.category)
        doc["grading"] = X.to_json()
        dump(doc, args.out)
        rep.data["written"] = args.out


def cmd_smash_verify(args, rep):
    try:
        doc = json.loads(Path(args.file).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError("cannot read smash file %s: %s" % (args.file, exc)) from exc
    for key in ("model", "grading", "homs"):
        if key not in doc:
            raise SchemaError("$: missing %r" % key)
    m = parse_model(doc["model"])
    X = build_grading(m.category, doc["grading"])
    S = smash.build_smash(X)
    recorded = {(h["source"], h["target"]): h["dim"] for h in doc["homs"]}
    rebuilt = {(smash._label(a), smash._label(b)): S.hom_dim(a, b) for a, b in S.pairs() if S.hom_dim(a, b)}
    rep.check("recorded hom dimensions", recorded == rebuilt)
    cov = smash.verify_covering(S)
    detail = "; ".join("%s %s %s: %d vs %d" % (smash._label(x.obj), x.direction, x.other, x.got, x.expected) for x in cov.mismatches[:5])
    rep.check("star isomorphisms", cov.ok, detail)
    gal = smash.galois_report(S)
    rep.check("deck action functorial", gal.functorial)
    rep.check("deck action free", gal.free)
    rep.check("fibre transitive", gal.fiber_transitive)


def _mu(text, G, H):
    try:
        images = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("--mu must be a JSON list of images: %s" % exc) from exc
    if not isinstance(images, list):
        raise SchemaError("--mu must be a JSON list")
    try:
        return grpkit.GroupHom(G, H, tuple(parse_element(H, e, "--mu") for e in images))
    except ValueError as exc:
        raise SchemaError("--mu: %s" % exc) from exc


def cmd_morph_verify(args, rep):
    m = load_model(args.model, _params(args))
    X, Y = load_grading(m, args.source), load_grading(m, args.target)
    J = m.functor(args.functor) if args.functor != "identity" else identity_functor(m.category)
    mu = _mu(args.mu, X.group, Y.group)
    b0 = _base(m, args)
    try:
        morph.verify_grading_morphism(X, Y, mu, J, b0)
        rep.check("morphism of gradings", True, str(mu))
    except (SquareFails, NotHomogeneousWitness) as exc:
        rep.check("morphism of gradings", False, "%s: %s" % (type(exc).__name__, exc))


def cmd_morph_fix(args, rep):
    m = load_model(args.model, _params(args))
    X = load_grading(m, args.grading)
    fx = morph.compute_fix(X, _base(m, args))
    rep.data["endomorphisms"] = [str(e.mu) for e in fx.endomorphisms]
    rep.data["fix"] = str(fx.group)
    rep.check("fix computed", True)


def _family(m, args, U):
    if args.family == "oracle":
        gs = []
        for g in args.groups.split(","):
            gs += morph.enumerate_constricted_gradings(m.category, parse_group(g.strip()))
        gs.append(grading.Grading.trivial(m.category))
        return morph.GradingFamily(gs)
    if args.family == "quotients":
        return morph.GradingFamily(
            [grading.quotient_grading(U, grading.reduction(U.group, n), name="%s/%d" % (U.name, n)) for n in range(1, args.max_n + 1)]
        )
    raise UsageError("unknown family %r" % args.family)


def cmd_morph_universal_check(args, rep):
    m = load_model(args.model, _params(args))
    b0 = _base(m, args)
    if args.grading == "universal":
        U = schur.universal_grading(m.category, b0).grading
    else:
        U = load_grading(m, args.grading)
    fam = _family(m, args, U)
    r = morph.verify_universal_property(U, fam, b0)
    rep.data["family_size"] = len(fam.gradings)
    rep.data["entries"] = [
        {"name": e.name, "exists": e.exists, "unique": e.unique, "mus": [str(u) for u in e.mus], "method": e.method}
        for e in r.entries
    ]
    rep.check("existence", r.all_exist)
    rep.check("uniqueness", r.all_unique)


def cmd_oracle_enumerate(args, rep):
    m = load_model(args.model, _params(args))
    G = parse_group(args.group)
    gs = morph.enumerate_constricted_gradings(m.category, G, cap=args.cap, b0=_base(m, args))
    rep.data["group"] = str(G)
    rep.data["count"] = len(gs)
    rep.data["gradings"] = [{a.id: str(X.degree(m.category.arrow(a.id))) for a in m.category.quiver.arrows} for X in gs]
    rep.check("enumerated", True)


def cmd_pi1(args, rep):
    m = load_model(args.model, _params(args))
    p = schur.presentation_group(m.category, _base(m, args))
    rep.data["presentation"] = str(p)
    rep.data["abelianization"] = str(grpkit.abelianize(p).group)
    rep.check("computed", True)


# --- the corpus --------------------------------------------------------------------------


def _grading_checks(rep, name, m, gname, exp):
    X = m.grading(gname)
    b0 = m.category.objects[0]
    tag = "%s/%s" % (name, gname)
    if "valid" in exp:
        rep.check(tag + " valid", grading.validate_grading(X).ok == exp["valid"])
    if "connected" in exp:
        rep.check(tag + " connected", grading.is_connected_grading(X, b0) == exp["connected"])
    if "group" in exp:
        rep.check(tag + " group", X.group == parse_group(exp["group"]), str(X.group))
    if "thin" in exp:
        rep.check(tag + " thin", X.is_thin() == exp["thin"])
    if "endomorphisms" in exp or "fix" in exp:
        fx = morph.compute_fix(X, b0)
        if "endomorphisms" in exp:
            rep.check(tag + " endomorphisms", len(fx.endomorphisms) == exp["endomorphisms"], str(len(fx.endomorphisms)))
        if "fix" in exp:
            rep.check(tag + " fix", fx.group == parse_group(exp["fix"]), str(fx.group))


def run_example(rep, label, m, exp):
    cat = m.category
    for key, d in exp.get("hom_dims", {}).items():
        x, y = key.split("->")
        rep.check("%s dim %s" % (label, key), cat.hom_dim(x, y) == d, str(cat.hom_dim(x, y)))
    if "schurian" in exp:
        got = ["%s->%s" % k for k in schur.schurian_morphisms(cat)]
        rep.check(label + " schurian", sorted(got) == sorted(exp["schurian"]), ", ".join(got) or "none")
    if "sg" in exp:
        rep.check(label + " sg", schur.sg_closure(cat).is_sg == exp["sg"])
    if "constricted" in exp:
        rep.check(label + " constricted", schur.is_constricted(cat).ok == exp["constricted"])
    for gname, gexp in exp.get("gradings", {}).items():
        _grading_checks(rep, label, m, gname, gexp)
    if "pi1" in exp:
        want = exp["pi1"]
        if isinstance(want, dict):
            want = want.get(str(m.params.get("q")))
        if want is not None:
            got = grpkit.abelianize(schur.presentation_group(cat)).group
            rep.check(label + " presentation group", got == parse_group(want), str(got))
    if "universal" in exp:
        want = exp["universal"]
        try:
            got = schur.universal_grading(cat).grading.group
        except (NotSG, NotConstricted):
            got = None
        rep.check(label + " universal grading", (got is None and want is None) or (got is not None and want is not None and got == parse_group(want)), str(got))
    if "quotient_family" in exp:
        qf = exp["quotient_family"]
        V = m.grading("V")
        r = morph.verify_universal_property(V, morph.GradingFamily(corpus.kronecker_quotients(qf["max_n"], V)))
        rep.check(label + " versal over quotients", r.all_exist == qf["all_exist"])
        rep.check(label + " unique over quotients", r.all_unique == qf["all_unique"])
    if "limit" in exp:
        p = cat.field.char
        gs, arrows = corpus.kcp_family(p)
        got = grpkit.diagram_limit([g.group for g in gs], arrows).group
        rep.check(label + " coherent family group", got == parse_group(exp["limit"]), str(got))
    if exp.get("hom_cp_z_trivial"):
        p = cat.field.char
        rep.check(label + " Hom(C_p, Z) trivial", grpkit.hom_space(grpkit.cyclic(p), grpkit.Z()).is_trivial())


def cmd_examples_run(args, rep):
    if not args.all and not args.names:
        raise UsageError("give example names or --all")
    entries = corpus.example_corpus()
    if not args.all:
        wanted = set(args.names)
        entries = [e for e in entries if e[0] in wanted or e[0].split("[")[0] in wanted]
        if not entries:
            raise UsageError("no example named %s" % ", ".join(sorted(wanted)))
    for label, m, exp in entries:
        run_example(rep, label, m, exp)
    # the B_q isomorphisms
    if args.all or "bq" in args.names:
        models = {q: corpus.bq(q) for q in (0, 1, 2)}
        for q in (0, 1, 2):
            for q2 in (0, 1, 2):
                F = corpus.bq_functor(models[q], models[q2])
                rep.check("bq F[q=%d -> q=%d] isomorphism" % (q, q2), F.is_isomorphism())


# --- parser ------------------------------------------------------------------------------


def _common(p, model=True):
    if model:
        p.add_argument("model", help="model file or corpus name")
    p.add_argument("--param", action="append", metavar="NAME=VALUE", help="override a model parameter")
    p.add_argument("--q", help="shortcut for --param q=VALUE")
    p.add_argument("--base", help="base object (default: first object)")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser():
    ap = argparse.ArgumentParser(prog="gradcat", description="Gradings of linear categories presented by quivers.")
    sub = ap.add_subparsers(dest="group", required=True)

    g = sub.add_parser("cat").add_subparsers(dest="verb", required=True)
    for verb, fn in (("info", cmd_cat_info), ("check", cmd_cat_check)):
        p = g.add_parser(verb)
        _common(p)
        p.set_defaults(fn=fn)

    g = sub.add_parser("grading").add_subparsers(dest="verb", required=True)
    for verb, fn in (("validate", cmd_grading_validate), ("connected", cmd_grading_connected), ("quotient", cmd_grading_quotient)):
        p = g.add_parser(verb)
        _common(p)
        p.add_argument("--grading", required=True, help="grading name in the model or a grading file")
        if verb == "quotient":
            p.add_argument("--modulus", type=int, required=True, help="push a Z grading to Z/n")
            p.add_argument("--out")
        p.set_defaults(fn=fn)

    g = sub.add_parser("schur").add_subparsers(dest="verb", required=True)
    p = g.add_parser("analyze")
    _common(p)
    p.set_defaults(fn=cmd_schur_analyze)
    p = g.add_parser("universal")
    _common(p)
    p.add_argument("--out-presentation")
    p.add_argument("--out-grading")
    p.set_defaults(fn=cmd_schur_universal)

    g = sub.add_parser("smash").add_subparsers(dest="verb", required=True)
    p = g.add_parser("build")
    _common(p, model=False)
    p.add_argument("--category", required=True)
    p.add_argument("--grading", required=True)
    p.add_argument("--modulus", type=int, help="first push a Z grading to Z/n")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_smash_build)
    p = g.add_parser("verify")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_smash_verify)

    g = sub.add_parser("morph").add_subparsers(dest="verb", required=True)
    p = g.add_parser("verify")
    _common(p)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--mu", required=True, help='images of the source generators, e.g. "[-1]"')
    p.add_argument("--functor", default="identity", help="functor name in the model, or identity")
    p.set_defaults(fn=cmd_morph_verify)
    p = g.add_parser("fix")
    _common(p)
    p.add_argument("--grading", required=True)
    p.set_defaults(fn=cmd_morph_fix)
    p = g.add_parser("universal-check")
    _common(p)
    p.add_argument("--grading", default="universal", help='grading name, file, or "universal"')
    p.add_argument("--family", choices=("oracle", "quotients"), default="oracle")
    p.add_argument("--groups", default="C2,C3,C4")
    p.add_argument("--max-n", type=int, default=6)
    p.set_defaults(fn=cmd_morph_universal_check)

    g = sub.add_parser("oracle").add_subparsers(dest="verb", required=True)
    p = g.add_parser("enumerate")
    _common(p)
    p.add_argument("--group", required=True, help="finite group, e.g. C2 or C2+C2")
    p.add_argument("--cap", type=int, default=10**6)
    p.set_defaults(fn=cmd_oracle_enumerate)

    g = sub.add_parser("pi1").add_subparsers(dest="verb", required=True)
    p = g.add_parser("presentation")
    _common(p)
    p.set_defaults(fn=cmd_pi1)

    g = sub.add_parser("examples").add_subparsers(dest="verb", required=True)
    p = g.add_parser("run")
    p.add_argument("names", nargs="*")
    p.add_argument("--all", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_examples_run)
    return ap


def run_command(argv) -> Report:
    """Parse ``argv`` and run it; raises UsageError or input errors."""
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        raise UsageError(ap.format_usage().strip()) from exc
    rep = Report(" ".join(argv))
    args.fn(args, rep)
    return rep


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv
    if not argv or argv[0] in ("-h", "--help"):
        build_parser().print_help()
        return 0 if argv else 2
    try:
        rep = run_command(argv)
    except UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 2
    except INPUT_ERRORS as exc:
        print("input error (%s): %s" % (type(exc).__name__, exc), file=sys.stderr)
        return 2
    except GradcatError as exc:
        rep = Report(" ".join(argv))
        rep.check(type(exc).__name__, False, str(exc))
    print(json.dumps(rep.to_json(), indent=2, sort_keys=True) if as_json else rep.to_text())
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
