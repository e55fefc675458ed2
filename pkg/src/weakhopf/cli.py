"""Batch front end: parse description files, run pipelines, emit reports.

Exit status: 0 when every identity passed, 1 on verification failure, 2 on
input errors.  The machine format emits one JSON record per identity
(name, law, pass/fail, witness) followed by a summary record; reports are
byte-identical for equal inputs.
"""

from __future__ import annotations

import argparse
import json
import sys

from weakhopf import algebra as ag
from weakhopf import composite as cp
from weakhopf import groupoid as gp
from weakhopf import specfile as sf
from weakhopf import tower as tw
from weakhopf import wha
from weakhopf.checks import Check


class Report:
    def __init__(self, pipeline, items):
        self.pipeline = pipeline
        self.items = list(items)

    @property
    def passed(self):
        return sum(1 for c in self.items if c.passed)

    @property
    def failed(self):
        return len(self.items) - self.passed

    @property
    def exit_status(self):
        return 0 if self.failed == 0 else 1

    def render(self, fmt):
        if fmt == "machine":
            lines = [json.dumps({"name": c.name, "law": c.law,
                                 "passed": c.passed, "witness": c.witness},
                                sort_keys=True) for c in self.items]
            lines.append(json.dumps({"pipeline": self.pipeline,
                                     "passed": self.passed,
                                     "failed": self.failed}, sort_keys=True))
            return "\n".join(lines) + "\n"
        out = ["pipeline: %s" % self.pipeline]
        for c in self.items:
            mark = "PASS" if c.passed else "FAIL"
            line = "%s %s  [%s]" % (mark, c.name, c.law)
            if c.witness:
                line += "  witness: %s" % c.witness
            out.append(line)
        out.append("%d passed, %d failed" % (self.passed, self.failed))
        return "\n".join(out) + "\n"


def _wha_report(H, name):
    axioms = wha.verify_axioms(H)
    items = list(axioms.items)
    if not axioms.ok:
        # counital data, integrals and duals presuppose the axioms
        items.append(Check("downstream", "counital/integral/dual stages "
                           "skipped: axioms failed", False))
        return Report(name, items)
    cd = wha.counital(H)
    items.extend(cd.checks.items)
    ints = wha.integrals(H)
    items.append(Check("maschke", "normalized left integral exists iff the "
                       "algebra is separable", ints.maschke_consistent))
    Hd = wha.dual(H)
    items.append(Check("dual_axioms", "the transpose dual passes every "
                       "axiom", wha.verify_axioms(Hd).ok))
    Hdd = wha.dual(Hd)
    items.append(Check(
        "dual_involution", "dual(dual(H)) = H as matrices",
        (Hdd.alg.table, Hdd.delta, Hdd.eps, Hdd.s)
        == (H.alg.table, H.delta, H.eps, H.s)))
    return Report(name, items)


def cmd_verify_wha(args):
    spec = sf.load(args.file)
    if spec.kind == "groupoid":
        H = gp.groupoid_algebra(sf.build(spec), spec.p)
    elif spec.kind == "weak-hopf":
        H = sf.build(spec)
    elif spec.kind == "algebra":
        alg = sf.build(spec)
        if alg.dim != 1:
            raise sf.SpecFileError(
                "kind 'algebra' only verifies as a weak Hopf algebra in "
                "dimension 1; got dim %d" % alg.dim)
        one = [alg.unit]
        H = wha.make_weakhopf(alg, [{0: alg.unit[0]}], (alg.unit[0],),
                              [{0: alg.unit[0]}])
    else:
        raise sf.SpecFileError("verify-wha expects weak-hopf or groupoid "
                               "input, got %r" % spec.kind)
    return _wha_report(H, "verify-wha %s" % spec.name)


def cmd_groupoid(args):
    spec = sf.load(args.file)
    if spec.kind != "groupoid":
        raise sf.SpecFileError("groupoid command expects a groupoid file")
    G = sf.build(spec)
    H = gp.groupoid_algebra(G, spec.p)
    items = list(wha.verify_axioms(H).items)
    if args.dual:
        try:
            gp.groupoid_dual(G, spec.p)
            items.append(Check("dual_formulas", "the function-algebra dual "
                               "matches the transpose dual", True))
        except AssertionError as exc:
            items.append(Check("dual_formulas", "the function-algebra dual "
                               "matches the transpose dual", False, str(exc)))
    if args.integrals:
        try:
            gp.groupoid_integrals(G, spec.p)
            items.append(Check("integral_spans", "unit-indexed sums span "
                               "the integral spaces", True))
        except AssertionError as exc:
            items.append(Check("integral_spans", "unit-indexed sums span "
                               "the integral spaces", False, str(exc)))
    return Report("groupoid %s" % spec.name, items)


def cmd_tower(args):
    spec = sf.load(args.file)
    if spec.kind != "markov-extension":
        raise sf.SpecFileError("tower command expects a markov-extension "
                               "file")
    incl, E, trace = sf.build(spec)
    items = []
    try:
        db = ag.find_dual_bases(E)
    except ag.NoDualBases as exc:
        items.append(Check("dual_bases", "E admits dual bases", False,
                           str(exc)))
        return Report("tower %s" % spec.name, items)
    cert = ag.certify_markov(incl, E, db, trace)
    items.extend(cert.checks.items)
    if not cert.checks.ok:
        return Report("tower %s" % spec.name, items)

    depth = max(args.depth, 2 if args.derive else args.depth)
    if args.appendix_fn is not None:
        depth = max(depth, 2 * args.appendix_fn + 1)
    t = tw.build_tower(cert, depth)
    items.extend(t.checks.items)

    if args.derive:
        if not t.checks.ok:
            items.append(Check("derivation", "stage skipped: tower checks "
                               "failed", False))
            return Report("tower %s" % spec.name, items)
        try:
            _, lat, _, full = tw.derive(t)
            seen = {id(c) for c in t.checks.items}
            items.extend(c for c in full.items if id(c) not in seen)
        except (tw.Depth2Failure, tw.SingularGram) as exc:
            items.append(Check("depth2", "depth-2 condition holds", False,
                               str(exc)))
    if args.appendix_fn is not None:
        for n in range(args.appendix_fn + 1):
            try:
                data = cp.composite_idempotent(t, n)
                items.extend(
                    Check("f%d_%s" % (n, c.name), c.law, c.passed, c.witness)
                    for c in data.checks.items if not c.name.startswith(
                        "previous_level"))
            except cp.DimensionBudget as exc:
                items.append(Check("f%d" % n, "composite idempotent within "
                                   "the dimension budget", False, str(exc)))
    return Report("tower %s" % spec.name, items)


def cmd_report(args):
    items = []
    pipeline = "report"
    try:
        with open(args.file) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                if "pipeline" in rec:
                    pipeline = rec["pipeline"]
                    continue
                items.append(Check(rec["name"], rec.get("law", ""),
                                   bool(rec["passed"]), rec.get("witness")))
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise sf.SpecFileError("unreadable report: %s" % exc)
    return Report(pipeline, items)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="weakhopf",
        description="exact verification of weak Hopf algebra structures")
    parser.add_argument("--format", choices=("text", "machine"),
                        default="text", help="report rendering")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-wha", help="full axiom report for a "
                       "weak Hopf algebra or groupoid file")
    p.add_argument("file")
    p.set_defaults(fn=cmd_verify_wha)

    p = sub.add_parser("groupoid", help="groupoid algebra checks")
    p.add_argument("file")
    p.add_argument("--dual", action="store_true")
    p.add_argument("--integrals", action="store_true")
    p.set_defaults(fn=cmd_groupoid)

    p = sub.add_parser("tower", help="certify a Markov extension and build "
                       "its Jones tower")
    p.add_argument("file")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--derive", action="store_true",
                   help="run the full depth-2 derivation pipeline")
    p.add_argument("--appendix-fn", type=int, default=None, metavar="N",
                   help="verify the composite idempotents f_0..f_N")
    p.set_defaults(fn=cmd_tower)

    p = sub.add_parser("report", help="re-render a machine report")
    p.add_argument("file")
    p.set_defaults(fn=cmd_report)

    args = parser.parse_args(argv)
    try:
        report = args.fn(args)
    except sf.SpecFileError as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 2
    sys.stdout.write(report.render(args.format))
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
