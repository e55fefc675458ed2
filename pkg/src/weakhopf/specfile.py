"""The on-disk description format for algebras, weak Hopf data, groupoids
and Markov extensions.

Files are JSON with every scalar written exactly, as an integer or "p/q"
string; matrices are rectangular arrays, structure constants explicit
(c[i][j][k] is the e_k coefficient of e_i e_j), and linear maps are stored
row per basis vector.  Nothing is inferred or normalized on input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from weakhopf import algebra as ag
from weakhopf import groupoid as gp
from weakhopf import wha
from weakhopf.linalg import format_scalar, parse_scalar

KINDS = ("algebra", "weak-hopf", "groupoid", "markov-extension")


class SpecFileError(ValueError):
    """Malformed input file; carries field context."""


@dataclass(frozen=True)
class SpecFile:
    kind: str
    name: str
    p: int | None
    payload: dict

    @property
    def field_label(self):
        return "rational" if self.p is None else "prime %d" % self.p


def _field(label):
    label = str(label).strip()
    if label == "rational":
        return None
    if label.startswith("prime"):
        try:
            return int(label.split()[1])
        except (IndexError, ValueError):
            raise SpecFileError("bad field label %r" % label)
    raise SpecFileError("unknown field %r" % label)


def load(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecFileError("%s: %s" % (path, exc))
    except OSError as exc:
        raise SpecFileError(str(exc))
    return loads(raw)


def loads(raw):
    for key in ("kind", "name", "field", "payload"):
        if key not in raw:
            raise SpecFileError("missing top-level field %r" % key)
    kind = raw["kind"]
    if kind not in KINDS:
        raise SpecFileError("unknown kind %r (expected one of %s)"
                            % (kind, ", ".join(KINDS)))
    return SpecFile(kind, str(raw["name"]), _field(raw["field"]),
                    raw["payload"])


def dump(spec, path):
    with open(path, "w") as fh:
        json.dump({"kind": spec.kind, "name": spec.name,
                   "field": spec.field_label, "payload": spec.payload},
                  fh, indent=1, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# parsing payloads into verified objects

def _scal(x, p, where):
    try:
        return parse_scalar(x, p)
    except (ValueError, TypeError) as exc:
        raise SpecFileError("%s: bad scalar %r (%s)" % (where, x, exc))


def _matrix(rows, p, where, width=None):
    out = []
    for i, row in enumerate(rows):
        if width is not None and len(row) != width:
            raise SpecFileError("%s: row %d has %d entries, expected %d"
                                % (where, i, len(row), width))
        out.append(tuple(_scal(x, p, "%s[%d]" % (where, i)) for x in row))
    return out


def parse_algebra(payload, p, where="algebra"):
    try:
        dim = int(payload["dim"])
        structure = payload["structure"]
        unit = payload["unit"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFileError("%s: %s" % (where, exc))
    if len(structure) != dim or any(len(r) != dim for r in structure):
        raise SpecFileError("%s: structure tensor is not %d x %d x %d"
                            % (where, dim, dim, dim))
    table = [[tuple(_scal(x, p, "%s.structure[%d][%d]" % (where, i, j))
                    for x in structure[i][j]) for j in range(dim)]
             for i in range(dim)]
    for i in range(dim):
        for j in range(dim):
            if len(table[i][j]) != dim:
                raise SpecFileError("%s.structure[%d][%d]: wrong length"
                                    % (where, i, j))
    unit = tuple(_scal(x, p, where + ".unit") for x in unit)
    if len(unit) != dim:
        raise SpecFileError("%s.unit: wrong length" % where)
    labels = payload.get("labels")
    try:
        return ag.make_algebra(table, unit, labels=labels, p=p)
    except (ag.NotAssociative, ag.BadUnit) as exc:
        raise SpecFileError("%s: %s" % (where, exc))


def parse_weakhopf(payload, p):
    alg = parse_algebra(payload.get("algebra", {}), p, "weak-hopf.algebra")
    n = alg.dim
    delta = _matrix(payload.get("delta", []), p, "delta", width=n * n)
    eps = tuple(_scal(x, p, "eps") for x in payload.get("eps", []))
    s = _matrix(payload.get("s", []), p, "s", width=n)
    if len(delta) != n or len(eps) != n or len(s) != n:
        raise SpecFileError("delta/eps/s must each have %d rows" % n)
    try:
        return wha.make_weakhopf(alg, delta, eps, s)
    except Exception as exc:
        raise SpecFileError("weak-hopf data rejected: %s" % exc)


def parse_groupoid(payload):
    try:
        objects = list(payload["objects"])
        morphisms = payload["morphisms"]
        compose = payload["compose"]
    except (KeyError, TypeError) as exc:
        raise SpecFileError("groupoid: %s" % exc)
    names = []
    src, tgt = {}, {}
    for m in morphisms:
        try:
            names.append(m["name"])
            src[m["name"]] = m["source"]
            tgt[m["name"]] = m["target"]
        except (KeyError, TypeError):
            raise SpecFileError("groupoid.morphisms entries need "
                                "name/source/target")
    comp = {}
    for entry in compose:
        if len(entry) != 3:
            raise SpecFileError("groupoid.compose entries are [g, h, gh]")
        comp[(entry[0], entry[1])] = entry[2]
    try:
        return gp.Groupoid(objects, names, src, tgt, comp)
    except ValueError as exc:
        raise SpecFileError("groupoid rejected: %s" % exc)


def parse_markov(payload, p):
    small = parse_algebra(payload.get("small", {}), p, "markov.small")
    big = parse_algebra(payload.get("big", {}), p, "markov.big")
    embed = _matrix(payload.get("embed", []), p, "embed", width=big.dim)
    erows = _matrix(payload.get("expectation", []), p, "expectation",
                    width=small.dim)
    trace = tuple(_scal(x, p, "trace") for x in payload.get("trace", []))
    if len(embed) != small.dim or len(erows) != big.dim or \
            len(trace) != small.dim:
        raise SpecFileError("embed/expectation/trace row counts are off")
    try:
        incl = ag.make_inclusion(small, big, embed)
        E = ag.make_cond_expectation(incl, erows)
    except ValueError as exc:
        raise SpecFileError("markov extension rejected: %s" % exc)
    return incl, E, trace


def build(spec):
    """Parse a SpecFile into its verified object."""
    if spec.kind == "algebra":
        return parse_algebra(spec.payload, spec.p)
    if spec.kind == "weak-hopf":
        return parse_weakhopf(spec.payload, spec.p)
    if spec.kind == "groupoid":
        return parse_groupoid(spec.payload)
    return parse_markov(spec.payload, spec.p)


# ---------------------------------------------------------------------------
# serializers (round-trip partners of the parsers)

def algebra_payload(alg):
    from weakhopf.linalg import dense
    dim = alg.dim
    structure = [[[format_scalar(x) for x in
                   dense(dict(alg.table[i][j]), dim, alg.p)]
                  for j in range(dim)] for i in range(dim)]
    out = {"dim": dim, "structure": structure,
           "unit": [format_scalar(x) for x in alg.unit]}
    if alg.labels:
        out["labels"] = list(alg.labels)
    return out


def weakhopf_payload(H):
    from weakhopf.linalg import dense
    n = H.dim
    return {
        "algebra": algebra_payload(H.alg),
        "delta": [[format_scalar(x) for x in dense(dict(H.delta[h]),
                                                   n * n, H.p)]
                  for h in range(n)],
        "eps": [format_scalar(x) for x in H.eps],
        "s": [[format_scalar(x) for x in dense(dict(H.s[h]), n, H.p)]
              for h in range(n)],
    }


def groupoid_payload(G):
    return {
        "objects": list(G.objects),
        "morphisms": [{"name": m, "source": G.source[m],
                       "target": G.target[m]} for m in G.morphisms],
        "compose": [[g, h, gh] for (g, h), gh in sorted(G.compose.items())],
    }


def markov_payload(incl, E, trace):
    from weakhopf.linalg import dense
    return {
        "small": algebra_payload(incl.small),
        "big": algebra_payload(incl.big),
        "embed": [[format_scalar(x) for x in
                   dense(dict(r), incl.big.dim, incl.big.p)]
                  for r in incl.embed],
        "expectation": [[format_scalar(x) for x in
                         dense(dict(r), incl.small.dim, incl.big.p)]
                        for r in E.rows],
        "trace": [format_scalar(x) for x in trace],
    }


def specfile_for(obj, name, p=None):
    """Wrap a built object back into a SpecFile."""
    if isinstance(obj, wha.WeakHopf):
        return SpecFile("weak-hopf", name, obj.p, weakhopf_payload(obj))
    if isinstance(obj, ag.Algebra):
        return SpecFile("algebra", name, obj.p, algebra_payload(obj))
    if isinstance(obj, gp.Groupoid):
        return SpecFile("groupoid", name, p, groupoid_payload(obj))
    if isinstance(obj, tuple) and len(obj) == 3:
        incl, E, trace = obj
        return SpecFile("markov-extension", name, incl.big.p,
                        markov_payload(incl, E, trace))
    raise TypeError("cannot serialize %r" % type(obj))
