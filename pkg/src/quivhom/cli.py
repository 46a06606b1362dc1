"""Command-line front end.

Every command prints a human-readable section followed by a machine block:

    -----BEGIN QUIVHOM REPORT v1-----
    { ...json, sorted keys... }
    -----END QUIVHOM REPORT v1-----

Exit codes: 0 success, 2 validation error, 3 budget exceeded, 4 verdict failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .errors import BudgetExceeded, QuivhomError, ValidationError
from .hochschild import Bimodule, Blocks, HochschildComplexes
from .pi1 import ab_string
from .quiver_core import BoundQuiverAlgebra, corner_algebra, corpus_doc, corpus_names, load_algebra

SCHEMA = "v1"
BEGIN = "-----BEGIN QUIVHOM REPORT %s-----" % SCHEMA
END = "-----END QUIVHOM REPORT %s-----" % SCHEMA

EXIT_OK, EXIT_VALIDATION, EXIT_BUDGET, EXIT_VERDICT = 0, 2, 3, 4


# ---------------------------------------------------------------- reports

def _plain(x):
    """Coerce to JSON-native values (fractions and field elements become strings)."""
    return json.loads(json.dumps(x, default=str))


class Report:
    def __init__(self, command: str, source: str, digest: str):
        self.data = {"schema": SCHEMA, "command": command, "input": {"source": source, "sha256": digest},
                     "sections": {}, "verdict": "ok"}
        self.lines: list[str] = []

    def section(self, name: str, payload) -> None:
        self.data["sections"][name] = _plain(payload)

    def say(self, *lines: str) -> None:
        self.lines.extend(lines)

    def fail(self, why: str) -> None:
        self.data["verdict"] = "fail"
        self.data.setdefault("failures", []).append(why)

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.data["verdict"] == "ok" else EXIT_VERDICT

    def render(self) -> str:
        block = json.dumps(self.data, sort_keys=True, indent=2, ensure_ascii=False)
        return "\n".join(self.lines + [BEGIN, block, END]) + "\n"


def parse_report(text: str) -> dict:
    """Extract the machine block from CLI output."""
    try:
        start = text.index(BEGIN) + len(BEGIN)
        stop = text.index(END, start)
    except ValueError:
        raise ValidationError("no %s report block found" % SCHEMA) from None
    return json.loads(text[start:stop])


# ---------------------------------------------------------------- inputs

def read_document(arg: str) -> tuple[dict, str, str]:
    """A path to a JSON document, or the name of a bundled corpus document."""
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            raw = fh.read()
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ValidationError("%s: not valid JSON (%s)" % (arg, exc)) from None
        name = os.path.splitext(os.path.basename(arg))[0]
    else:
        doc = corpus_doc(arg)
        name = arg
    canon = json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return doc, name, hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _load(args) -> tuple[BoundQuiverAlgebra, object, Report]:
    doc, name, digest = read_document(args.document)
    A, opts = load_algebra(doc, name, cap=args.cap)
    rep = Report(args.command, name, digest)
    rep.say("algebra %s: %d vertices, %d arrows, dim %d, field %s, nilpotency bound %d"
            % (name, len(A.vertices), len(A.quiver.arrows), A.dim, A.field, A.nilpotency_bound))
    rep.section("algebra", {"name": name, "vertices": A.vertices, "arrows": len(A.quiver.arrows),
                            "dim": A.dim, "field": str(A.field), "nilpotency_bound": A.nilpotency_bound})
    return A, opts, rep


def _witness(A, opts, auto: bool, require_full: bool):
    from .oriented import find_orientations, witness_from_options
    if opts.orientation and not auto:
        return witness_from_options(A, opts.orientation, require_full)
    if not auto:
        raise ValidationError("document has no orientation; pass --auto-orient to search for one")
    found = find_orientations(A, include_glued=not require_full, nontrivial=True)
    if not found:
        raise ValidationError("no valid witness: no nontrivial %s orientation exists"
                              % ("full" if require_full else "glued or full"))
    return found[0]


def _dump(args, complexes: list) -> None:
    if not args.dump_complex:
        return
    text = "".join(C.dump() for C in complexes)
    if args.dump_complex == "-":
        sys.stderr.write(text)
    else:
        with open(args.dump_complex, "w", encoding="utf-8") as fh:
            fh.write(text)


def _row(label: str, vals) -> str:
    return "  %-8s %s" % (label, " ".join(str(v) for v in vals))


# ---------------------------------------------------------------- commands

def cmd_hh(args) -> Report:
    A, _opts, rep = _load(args)
    M = Bimodule.regular(A)
    if args.coefficients == "dual":
        M = M.dual()
    blocks = Blocks.absolute(A) if args.blocks == "absolute" else Blocks.vertex(A)
    hc = HochschildComplexes(A, M, blocks)
    N = args.degree
    C = hc.chain_complex(N + 1) if args.variant == "homology" else hc.cochain_complex(N + 1)
    dims = [C.homology(n) for n in range(N + 1)]
    rep.say("Hochschild %s, coefficients %s, blocks %s, degrees 0..%d"
            % (args.variant, args.coefficients, args.blocks, N), _row("dims", dims))
    rep.section("hh", {"variant": args.variant, "coefficients": args.coefficients, "blocks": args.blocks,
                       "N": N, "dims": dims, "chain_dims": [C.dim(n) for n in range(N + 2)]})
    _dump(args, [C])
    return rep


def _mv_text(rep: Report, mv) -> None:
    rep.say("Mayer-Vietoris (%s, %s), witness e1'=%s e=%s e2'=%s [%s]"
            % (mv.theory, mv.variant, mv.witness["e1"], mv.witness["e"], mv.witness["e2"], mv.witness["kind"]))
    for lab, vals in mv.dims.items():
        rep.say(_row(lab, vals))
    if mv.les is not None:
        rep.say("  LES: " + mv.les.sequence_str())
    rep.say("  exact: %s" % ("yes" if mv.exact else "NO"))


def cmd_mv(args) -> Report:
    from .cyclic import mv_cyclic
    from .oriented import mv_hochschild
    from .simplicial import mv_simplicial
    A, opts, rep = _load(args)
    w = _witness(A, opts, args.auto_orient, require_full=args.theory in ("hh", "hc"))
    N = args.degree
    variant = args.variant or ("cohomology" if args.theory == "hh" else "homology")
    if args.theory == "hh":
        mv = mv_hochschild(A, w, args.coefficients, N, variant, args.blocks)
    elif args.theory == "hc":
        mv = mv_cyclic(A, w, N, variant, args.blocks)
    else:
        mv = mv_simplicial(A, w, N, variant, args.G)
    _mv_text(rep, mv)
    if mv.extra:
        rep.say("  checks: " + ", ".join("%s=%s" % (k, v) for k, v in sorted(mv.extra.items())
                                          if isinstance(v, bool)))
    rep.section("mv", mv.as_dict())
    if not mv.ok:
        rep.fail("Mayer-Vietoris verification failed")
    return rep


def cmd_pi1(args) -> Report:
    from .pi1 import h1_schurian, minimal_relations, pi1_is_trivial, pi1_presentation, vk_check
    A, opts, rep = _load(args)
    X = A
    if args.part != "R":
        if not opts.orientation:
            raise ValidationError("--part needs an orientation in the document")
        o = opts.orientation
        verts = {"C": o.get("e", []), "A1": o.get("e1", []) + o.get("e", []),
                 "A2": o.get("e2", []) + o.get("e", [])}[args.part]
        if not verts:
            raise ValidationError("part %s is empty" % args.part)
        X = corner_algebra(A, [str(v) for v in verts], "%s.%s" % (A.name, args.part))
    rels = minimal_relations(X)
    rep.say("minimal relations of %s:" % X.name)
    for r in rels:
        rep.say("  %s%s" % (r, "" if r.fundamental else "  (not fundamental)"))
    groups = []
    for comp in X.quiver.components():
        Y = X if len(comp) == len(X.vertices) else corner_algebra(X, comp, X.name)
        P = pi1_presentation(Y, relations=None if Y is not X else rels)
        r, t = P.abelianization()
        triv = pi1_is_trivial(P)
        rep.say("pi1 at %s (component %s):" % (P.basepoint, ",".join(comp)))
        rep.say(*("  " + ln for ln in P.as_text().splitlines()))
        rep.say("  group: %s" % ("trivial" if triv else ab_string(r, t) + " (abelianized)"))
        d = P.as_dict()
        d.update({"component": comp, "abelianization_str": ab_string(r, t), "trivial": triv})
        groups.append(d)
    rep.section("pi1", {"part": args.part, "relations": [
        {"source": r.source, "target": r.target, "fundamental": r.fundamental,
         "terms": [["*".join(wd), str(c)] for wd, c in r.terms]} for r in rels], "components": groups})
    if args.h1:
        h = h1_schurian(X)
        rep.say("H^1 via Hom(pi1, k+): %d" % h)
        rep.section("h1", {"dim": h, "char": X.field.char})
    if args.vk:
        if not opts.orientation:
            raise ValidationError("--vk needs an orientation in the document")
        o = opts.orientation
        res = vk_check(A, None, o.get("e1", []), o.get("e", []), o.get("e2", []))
        rep.say("Van Kampen: hypothesis %s, condition (2) %s, m = %d"
                % ("holds" if res["hypothesis"] else "FAILS", "holds" if res["orientation_ok"] else "FAILS",
                   res["m"]),
                "  left  ab(pi1(R)) = %s" % ab_string(res["left"]["rank"], res["left"]["torsion"]),
                "  right            = %s" % ab_string(res["right"]["rank"], res["right"]["torsion"]),
                "  verdict: %s" % res["verdict"])
        rep.section("vk", res)
        if res["verdict"] == "disagree":
            rep.fail("Van Kampen abelianizations disagree")
    return rep


def cmd_hc(args) -> Report:
    from .cyclic import connes_check, connes_mv_grid, cyclic_total
    from .oriented import witness_from_options
    A, opts, rep = _load(args)
    N = args.degree
    blocks = Blocks.absolute(A) if args.blocks == "absolute" else Blocks.vertex(A)
    T = cyclic_total(A, N, blocks, args.variant)
    dims = [T.homology(n) for n in range(N + 1)]
    rep.say("cyclic %s, blocks %s, degrees 0..%d" % (args.variant, args.blocks, N), _row("HC", dims))
    rep.section("hc", {"variant": args.variant, "blocks": args.blocks, "N": N, "dims": dims})
    _dump(args, [T])
    if args.connes:
        res = connes_check(A, N, blocks, args.variant)
        rep.say("Connes sequence:", _row("H", res["H"]), _row("HC", res["HC"]),
                "  LES: " + res["les"].sequence_str(),
                "  checks: " + ", ".join("%s=%s" % kv for kv in sorted(res["checks"].items())))
        res = dict(res, les=res["les"].as_dict())
        rep.section("connes", res)
        if not res["ok"]:
            rep.fail("Connes sequence verification failed")
    if args.grid:
        if not opts.orientation:
            raise ValidationError("--grid needs an orientation in the document")
        w = witness_from_options(A, opts.orientation, True)
        res = connes_mv_grid(A, w, N, args.variant, "vertex")
        rep.say("Connes / Mayer-Vietoris grid: " + ", ".join(
            "%s=%s" % (k, v) for k, v in sorted(res.items()) if isinstance(v, bool)))
        rep.section("grid", res)
        if not res.get("ok"):
            rep.fail("Connes / Mayer-Vietoris grid verification failed")
    return rep


def cmd_sh(args) -> Report:
    from .simplicial import simplicial_cohomology, simplicial_complex
    A, _opts, rep = _load(args)
    N = args.degree
    C = simplicial_complex(A, N)
    if args.variant == "homology":
        groups = [C.homology(n) for n in range(N + 1)]
        rep.say("simplicial homology over Z, degrees 0..%d" % N,
                *("  H_%d = %s" % (n, ab_string(r, t)) for n, (r, t) in enumerate(groups)))
        rep.section("sh", {"variant": "homology", "N": N,
                           "groups": [{"rank": r, "torsion": t} for r, t in groups]})
    else:
        res = simplicial_cohomology(A, args.G, N)
        rep.say("simplicial cohomology with coefficients %s, degrees 0..%d" % (args.G, N),
                *("  H^%d = %s%s" % (e["degree"], e["group"], "" if e["agree"] else "  (dual route disagrees)")
                  for e in res))
        rep.section("sh", {"variant": "cohomology", "N": N, "G": args.G, "groups": res})
        if not all(e["agree"] for e in res):
            rep.fail("cohomology routes disagree")
    _dump(args, [C])
    return rep


def cmd_orient(args) -> Report:
    from .oriented import find_orientations, witness_from_options
    A, opts, rep = _load(args)
    full = find_orientations(A, nontrivial=True)
    glued = [w for w in find_orientations(A, include_glued=True, nontrivial=True) if w.condition is None]
    if full:
        rep.say("%d full witness(es):" % len(full))
        rep.say(*("  e1'=%s e=%s e2'=%s conditions %s" % (list(w.e1p), list(w.e), list(w.e2p), list(w.satisfied))
                  for w in full))
    else:
        rep.say("no full witness")
    rep.say("%d glued-only witness(es)" % len(glued))
    declared = None
    if opts.orientation:
        try:
            declared = witness_from_options(A, opts.orientation, False).as_dict()
            rep.say("declared orientation: %s" % declared["kind"])
        except ValidationError as exc:
            declared = {"error": str(exc)}
            rep.say("declared orientation rejected: %s" % exc)
    rep.section("orient", {"full": [w.as_dict() for w in full], "glued": [w.as_dict() for w in glued],
                           "declared": declared, "has_full_witness": bool(full)})
    return rep


def cmd_corpus(args) -> Report:
    rep = Report("corpus", "", "")
    names = corpus_names()
    rep.say(*names)
    rep.section("corpus", {"names": names})
    return rep


# ---------------------------------------------------------------- argument parsing

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quivhom", description="Homology of bound quiver algebras.")
    p.add_argument("--version", action="version", version="quivhom " + __version__)
    sub = p.add_subparsers(dest="command", required=True)

    def doc_cmd(name, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("document", help="path to a JSON quiver document, or a bundled corpus name")
        s.add_argument("--cap", type=int, default=None, help="rewriting degree cap (default: document or 12)")
        s.add_argument("--timing", action="store_true", help="print wall time to stderr")
        return s

    s = doc_cmd("hh", "Hochschild (co)homology dimensions")
    s.add_argument("--degree", "-N", type=int, default=3)
    s.add_argument("--coefficients", choices=("self", "dual"), default="self")
    s.add_argument("--variant", choices=("homology", "cohomology"), default="cohomology")
    s.add_argument("--blocks", choices=("vertex", "absolute"), default="vertex")
    s.add_argument("--dump-complex", metavar="PATH", help="write the complex in COO form ('-' for stderr)")

    s = doc_cmd("mv", "Mayer-Vietoris sequence for an oriented algebra")
    s.add_argument("--theory", choices=("hh", "hc", "sh"), required=True)
    s.add_argument("--degree", "-N", type=int, default=3)
    s.add_argument("--variant", choices=("homology", "cohomology"))
    s.add_argument("--coefficients", choices=("self", "dual"), default="self", help="hh only")
    s.add_argument("--blocks", choices=("vertex", "witness"), default="vertex", help="hh/hc only")
    s.add_argument("--G", default="Z", help="sh cohomology coefficients: Z, Z/m or k")
    s.add_argument("--auto-orient", action="store_true", help="search for a witness instead of the declared one")

    s = doc_cmd("pi1", "fundamental group presentation")
    s.add_argument("--part", choices=("R", "A1", "A2", "C"), default="R")
    s.add_argument("--vk", action="store_true", help="verify the Van Kampen gluing (abelianized)")
    s.add_argument("--h1", action="store_true", help="H^1 as Hom(pi1, k+) for schurian algebras")

    s = doc_cmd("hc", "cyclic (co)homology")
    s.add_argument("--degree", "-N", type=int, default=3)
    s.add_argument("--variant", choices=("homology", "cohomology"), default="homology")
    s.add_argument("--blocks", choices=("vertex", "absolute"), default="vertex")
    s.add_argument("--connes", action="store_true")
    s.add_argument("--grid", action="store_true")
    s.add_argument("--dump-complex", metavar="PATH")

    s = doc_cmd("sh", "simplicial (co)homology")
    s.add_argument("--degree", "-N", type=int, default=3)
    s.add_argument("--variant", choices=("homology", "cohomology"), default="homology")
    s.add_argument("--G", default="Z")
    s.add_argument("--dump-complex", metavar="PATH")

    doc_cmd("orient", "search orientation witnesses")
    sub.add_parser("corpus", help="list bundled documents")
    return p


COMMANDS = {"hh": cmd_hh, "mv": cmd_mv, "pi1": cmd_pi1, "hc": cmd_hc, "sh": cmd_sh,
            "orient": cmd_orient, "corpus": cmd_corpus}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        rep = COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print("budget exceeded: %s" % exc, file=sys.stderr)
        return EXIT_BUDGET
    except ValidationError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_VALIDATION
    except QuivhomError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_VERDICT
    sys.stdout.write(rep.render())
    if getattr(args, "timing", False):
        print("time: %.3f s" % (time.perf_counter() - t0), file=sys.stderr)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
