"""JSON certificates for domination and adjacency answers, and their checker.

A certificate carries the query diagrams as text together with the witness
(added vertices, embedding, transported multiplicities, values, and for
non-linear answers the diagram ``D0``, both orderings and the matrices).
:func:`verify_certificate` re-derives everything from the diagram texts with
its own arithmetic: values by solving ``P v = nu``, proximity checks on the
raw maps, tameness through the degree drop of a local unloading loop.  It
shares only the parser with the rest of the package.

Schema (``"schema": 1``)::

    {schema, query: {kind, tilde|left, target|right}, verdict, reason,
     embedding: [[source_id, target_id], ...], added_vertices: [[id, parent], ...],
     transported_mults, values_right, values_transported,
     d0, orderings: {target, d0}, matrices: {P, P0, P0inv_P}, tame}
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .adjacency import AdjacencyVerdict, DominationCertificate, Verdict, linear_adjacent, necessary_adjacency
from .fileformat import ParseError, dump_diagram, parse_diagram

__all__ = [
    "SCHEMA_VERSION",
    "certificate_json",
    "domination_json",
    "verify_certificate",
    "VerificationReport",
    "load_certificate",
]

SCHEMA_VERSION = 1


def _matrix(a):
    return None if a is None else [[int(x) for x in row] for row in a]


def _witness_fields(cert: Optional[DominationCertificate], added) -> dict:
    if cert is None:
        return {
            "embedding": [],
            "added_vertices": [],
            "transported_mults": None,
            "values_right": None,
            "values_transported": None,
        }
    right = cert.right.diagram
    return {
        "embedding": [[p, x] for p, x in cert.embedding.pairs()],
        "added_vertices": [list(pair) for pair in added],
        "transported_mults": {p: cert.transported.mult[p] for p in right.order},
        "values_right": {p: cert.right_values[p] for p in right.order},
        "values_transported": {p: cert.transported_values[p] for p in right.order},
    }


def domination_json(cert: Optional[DominationCertificate], left, right) -> dict:
    """Certificate for a plain ``left >= right`` query."""
    out = {
        "schema": SCHEMA_VERSION,
        "query": {"kind": "dominates", "left": dump_diagram(left), "right": dump_diagram(right)},
        "verdict": "DOMINATES" if cert is not None else "NOT_DOMINATES",
        "reason": "domination-search",
    }
    out.update(_witness_fields(cert, ()))
    out.update({"d0": None, "orderings": None, "matrices": None, "tame": None})
    return out


def certificate_json(verdict: AdjacencyVerdict, kind: str = "adj") -> dict:
    """Serialize an :class:`AdjacencyVerdict` (``kind`` is ``adj`` or ``linear-adj``)."""
    out = {
        "schema": SCHEMA_VERSION,
        "query": {"kind": kind, "tilde": dump_diagram(verdict.tilde), "target": dump_diagram(verdict.target)},
        "verdict": verdict.kind.value,
        "reason": verdict.reason,
    }
    w = verdict.witness
    cert = verdict.certificate if verdict.certificate is not None else (w.domination if w else None)
    aug = verdict.augmentation if verdict.augmentation is not None else (w.augmentation if w else None)
    out.update(_witness_fields(cert, aug.added if aug is not None else ()))
    if w is None:
        out.update({"d0": None, "orderings": None, "matrices": None, "tame": None})
    else:
        out.update(
            {
                "d0": dump_diagram(w.transported),
                "orderings": {"target": list(w.target_order), "d0": list(w.d0_order)},
                "matrices": {"P": _matrix(w.P), "P0": _matrix(w.P0), "P0inv_P": _matrix(w.product)},
                "tame": w.tame,
            }
        )
    return out


# -- independent checker -------------------------------------------------------

@dataclass
class VerificationReport:
    ok: bool
    problems: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "problems": self.problems, "checks": self.checks}


class _Fail(Exception):
    pass


def _raw(w):
    """Plain dicts ``parent``, ``prox``, ``mult`` and file order."""
    d = w.diagram
    return dict(d.parent), {v: tuple(d.proximities[v]) for v in d.vertices}, dict(w.mult), list(d.order)


def _solve_values(prox, nu, order):
    """Forward substitution on the proximity matrix along ``order``."""
    idx = {v: i for i, v in enumerate(order)}
    n = len(order)
    P = [[0] * n for _ in range(n)]
    for v in order:
        P[idx[v]][idx[v]] = 1
        for t in prox[v]:
            P[idx[v]][idx[t]] = -1
    x = [0] * n
    for i in range(n):
        x[i] = nu[order[i]] - sum(P[i][j] * x[j] for j in range(i))
    return {order[i]: x[i] for i in range(n)}, P


def _excess(prox, mult):
    rho = dict(mult)
    for q, ts in prox.items():
        for t in ts:
            rho[t] -= mult[q]
    return rho


def _check_type(parent, prox, mult, label):
    rho = _excess(prox, mult)
    if any(m < 1 for m in mult.values()):
        raise _Fail(f"{label}: non-positive multiplicity")
    if any(r < 0 for r in rho.values()):
        raise _Fail(f"{label}: not consistent")
    has_child = {p for p in parent.values() if p is not None}
    for v in parent:
        if v not in has_child and len(prox[v]) < 2 and mult[v] <= 1:
            raise _Fail(f"{label}: extremal free vertex {v!r} of multiplicity {mult[v]}")


def _invariants(prox, mult):
    rho = _excess(prox, mult)
    delta = sum(m * (m - 1) // 2 for m in mult.values())
    return delta, 2 * delta - sum(rho.values()) + 1


def _tame(prox, mult, order):
    """Unload along ``order``; tame iff the degree does not drop."""
    nu = dict(mult)
    prox_to = {v: [q for q in order if v in prox[q]] for v in order}
    deg0 = sum(m * (m + 1) // 2 for m in nu.values())
    for _ in range(10**6):
        rho = {p: nu[p] - sum(nu[q] for q in prox_to[p]) for p in order}
        bad = [p for p in order if rho[p] < 0]
        if not bad:
            return sum(m * (m + 1) // 2 for m in nu.values()) == deg0
        p = bad[0]
        k = -(rho[p] // (len(prox_to[p]) + 1))
        nu[p] += k
        for q in prox_to[p]:
            nu[q] -= k
    raise _Fail("unloading did not terminate")


def _check_domination(doc, left, right, checks):
    """``left`` and ``right`` are raw 4-tuples; checks the embedding and values."""
    lpar, lprox, lmult, _ = left
    rpar, rprox, rmult, rorder = right
    pairs = doc["embedding"]
    emb = {}
    for p, x in pairs:
        if p not in rpar or x not in lpar:
            raise _Fail(f"embedding pair {[p, x]} names unknown vertices")
        if p in emb:
            raise _Fail(f"vertex {p!r} mapped twice")
        emb[p] = x
    if len(set(emb.values())) != len(emb):
        raise _Fail("embedding is not injective")
    image = set(emb.values())
    for p, x in emb.items():
        if rpar[p] is None:
            if lpar[x] is not None:
                raise _Fail("root not mapped to root")
        elif rpar[p] not in emb:
            raise _Fail(f"source set not downward closed at {p!r}")
        elif emb[rpar[p]] != lpar[x]:
            raise _Fail(f"embedding does not commute with parents at {p!r}")
        if lpar[x] is not None and lpar[x] not in image:
            raise _Fail(f"image not downward closed at {x!r}")
    for p in emb:
        for q in emb:
            if (q in rprox[p]) != (emb[q] in lprox[emb[p]]):
                raise _Fail(f"proximity of {p!r} to {q!r} not preserved")
    checks.append("embedding is an isomorphism of downward-closed subdiagrams")
    nu = {p: (lmult[emb[p]] if p in emb else 0) for p in rpar}
    v, _ = _solve_values(rprox, rmult, rorder)
    v2, _ = _solve_values(rprox, nu, rorder)
    if doc.get("transported_mults") is not None and doc["transported_mults"] != nu:
        raise _Fail("recorded transported multiplicities differ from recomputation")
    if doc.get("values_right") is not None and doc["values_right"] != v:
        raise _Fail("recorded values of the right side differ from recomputation")
    if doc.get("values_transported") is not None and doc["values_transported"] != v2:
        raise _Fail("recorded transported values differ from recomputation")
    low = [p for p in rpar if v2[p] < v[p]]
    if low:
        raise _Fail(f"transported values below target values at {low}")
    checks.append("transported values dominate target values pointwise")


def _augment(tilde, added, checks):
    par, prox, mult, order = tilde
    par, prox, mult, order = dict(par), dict(prox), dict(mult), list(order)
    for x, p in added:
        if x in par:
            raise _Fail(f"added vertex {x!r} already exists")
        if p not in par:
            raise _Fail(f"added vertex {x!r} has unknown parent {p!r}")
        par[x], prox[x], mult[x] = p, (p,), 1
        order.append(x)
    if any(r < 0 for r in _excess(prox, mult).values()):
        raise _Fail("augmented diagram is not consistent")
    if added:
        noun = "vertex" if len(added) == 1 else "vertices"
        checks.append(f"augmentation by {len(added)} free multiplicity-one {noun} is consistent")
    return par, prox, mult, order


def _parse(text, label):
    try:
        return parse_diagram(text, weighted=True)
    except ParseError as exc:
        raise _Fail(f"{label}: {exc}")


def _check_matrix_witness(doc, target, d0w, checks):
    tpar, tprox, tmult, _ = target
    dpar, dprox, dmult, _ = _raw(d0w)
    ords = doc.get("orderings") or {}
    o, o0 = list(ords.get("target", [])), list(ords.get("d0", []))
    for order, par, label in ((o, tpar, "target"), (o0, dpar, "d0")):
        if sorted(order) != sorted(par) or len(order) != len(par):
            raise _Fail(f"{label} ordering is not a permutation of its vertices")
        pos = {v: i for i, v in enumerate(order)}
        if any(par[v] is not None and pos[par[v]] > pos[v] for v in order):
            raise _Fail(f"{label} ordering is not admissible")
    if [tmult[v] for v in o] != [dmult[v] for v in o0]:
        raise _Fail("d0 multiplicities are not the target multiplicities by position")
    _, P = _solve_values(tprox, tmult, o)
    _, P0 = _solve_values(dprox, dmult, o0)
    n = len(o)
    # P0^-1 by forward substitution, then the product
    inv = [[int(i == j) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            inv[i][j] = -sum(P0[i][k] * inv[k][j] for k in range(j, i))
    prod = [[sum(inv[i][k] * P[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    mats = doc.get("matrices") or {}
    if mats.get("P") not in (None, P) or mats.get("P0") not in (None, P0) or mats.get("P0inv_P") not in (None, prod):
        raise _Fail("recorded matrices differ from recomputation")
    if any(x < 0 for row in prod for x in row):
        raise _Fail("P0^-1 P has a negative entry")
    checks.append("P0^-1 P has no negative entries")
    return dpar, dprox, dmult, o0


def verify_certificate(doc: dict) -> VerificationReport:
    """Re-check a certificate produced by this package (or by hand)."""
    checks = []
    try:
        if doc.get("schema") != SCHEMA_VERSION:
            raise _Fail(f"unsupported schema {doc.get('schema')!r}")
        query, verdict, reason = doc["query"], doc["verdict"], doc.get("reason", "")
        kind = query.get("kind")
        if kind == "dominates":
            left, right = _parse(query["left"], "left"), _parse(query["right"], "right")
            if any(r < 0 for r in _excess(*_raw(left)[1:3]).values()):
                raise _Fail("left side is not consistent")
            if verdict == "DOMINATES":
                _check_domination(doc, _raw(left), _raw(right), checks)
            elif verdict == "NOT_DOMINATES":
                from .adjacency import dominates

                if dominates(left, right) is not None:
                    raise _Fail("a domination exists")
                checks.append("re-ran the domination search (not independent)")
            else:
                raise _Fail(f"unknown verdict {verdict!r}")
            return VerificationReport(True, [], checks)
        if kind not in ("adj", "linear-adj"):
            raise _Fail(f"unknown query kind {kind!r}")
        tw, gw = _parse(query["tilde"], "tilde"), _parse(query["target"], "target")
        tilde, target = _raw(tw), _raw(gw)
        _check_type(*tilde[:3], "tilde")
        _check_type(*target[:3], "target")
        checks.append("both query diagrams are types")
        has_witness = bool(doc.get("embedding")) or doc.get("values_right") is not None
        if verdict == "LINEAR":
            dprime = _augment(tilde, doc.get("added_vertices", []), checks)
            _check_domination(doc, dprime, target, checks)
        elif verdict == "ADJACENT" or (verdict == "UNKNOWN" and doc.get("d0")):
            d0w = _parse(doc["d0"], "d0")
            right = _check_matrix_witness(doc, target, d0w, checks)
            dprime = _augment(tilde, doc.get("added_vertices", []), checks)
            _check_domination(doc, dprime, right, checks)
            if verdict == "ADJACENT":
                d = target[0]
                kids = {}
                for v, p in d.items():
                    kids[p] = kids.get(p, 0) + 1
                satellites = [v for v in d if len(target[1][v]) == 2]
                if satellites and any(c > 1 for p, c in kids.items() if p is not None):
                    raise _Fail("sufficient condition used outside its range")
                if not _tame(right[1], right[2], right[3]):
                    raise _Fail("transported weights on d0 are not tame")
                checks.append("transported weights on d0 unload tamely")
        elif verdict in ("NOT_LINEAR", "NOT_ADJACENT"):
            if reason.startswith("semicontinuity"):
                a, b = _invariants(*tilde[1:3]), _invariants(*target[1:3])
                if a[0] >= b[0] and a[1] >= b[1]:
                    raise _Fail("no drop of delta or Milnor number")
                checks.append("delta or Milnor number drops")
            elif reason == "two-free-vertices":
                free = [v for v in target[0] if len(target[1][v]) < 2]
                if len(free) > 2:
                    raise _Fail("target has more than two free vertices")
                if linear_adjacent(tw, gw).kind is Verdict.LINEAR:
                    raise _Fail("tilde is linearly adjacent")
                checks.append("target has at most two free vertices; re-ran linear search (not independent)")
            elif reason in ("linear-search-exhausted", "necessary-condition"):
                if linear_adjacent(tw, gw, prefilter=False).kind is Verdict.LINEAR:
                    raise _Fail("tilde is linearly adjacent")
                if reason == "necessary-condition" and necessary_adjacency(tw, gw).status != "FAIL":
                    raise _Fail("necessary condition is satisfied")
                checks.append("re-ran the exhaustive search (not independent)")
            else:
                raise _Fail(f"unknown reason {reason!r}")
            if has_witness:
                raise _Fail("negative verdict carries a witness")
        elif verdict == "UNKNOWN":
            checks.append("nothing to verify for UNKNOWN")
        else:
            raise _Fail(f"unknown verdict {verdict!r}")
    except (_Fail, KeyError, TypeError) as exc:
        msg = str(exc) if isinstance(exc, _Fail) else f"malformed certificate: {exc!r}"
        return VerificationReport(False, [msg], checks)
    return VerificationReport(True, [], checks)


def load_certificate(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
