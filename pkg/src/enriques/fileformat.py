"""Text format for (weighted) Enriques diagrams.

One vertex per line::

    v <id> <parent-id|-> [+<second-target>] [m=<int>]

``-`` marks the root, ``+t`` makes the vertex a satellite proximate to its
parent and to ``t``, ``m=`` gives its multiplicity and ``#`` starts a
comment.  Parents must be declared before their children; the line order is
the admissible ordering used by ordered operations.
"""
from __future__ import annotations

import re
from typing import Optional, Union

from .diagram import EnriquesDiagram, subtree_codes, validate_diagram
from .errors import EnriquesError
from .weights import WeightedDiagram

__all__ = ["ParseError", "parse_diagram", "parse_raw", "serialize_diagram", "dump_diagram", "canonical_order"]

_ID = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_.]*$")
_MULT = re.compile(r"^m=(-?\d+)$")


class ParseError(EnriquesError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _tokenize(text):
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        toks = body.split()
        if toks[0] != "v" or len(toks) < 3:
            raise ParseError("expected 'v <id> <parent|-> [+<id>] [m=<int>]'", lineno)
        vid, par = toks[1], toks[2]
        if not _ID.match(vid):
            raise ParseError(f"bad vertex id {vid!r}", lineno)
        if par != "-" and not _ID.match(par):
            raise ParseError(f"bad parent field {par!r}", lineno)
        second, m = None, None
        for tok in toks[3:]:
            if tok.startswith("+") and second is None and m is None:
                second = tok[1:]
            elif _MULT.match(tok) and m is None:
                m = int(_MULT.match(tok).group(1))
            else:
                raise ParseError(f"unexpected token {tok!r}", lineno)
        rows.append((lineno, vid, None if par == "-" else par, second, m))
    return rows


def parse_raw(text: str):
    """Syntax-only parse: ``(diagram, mult)`` without any axiom checks.

    Meant for reporting with :func:`validate_diagram`; references to unknown
    vertices are kept as they are.
    """
    parent, prox, mult = {}, {}, {}
    for lineno, vid, par, second, m in _tokenize(text):
        if vid in parent:
            raise ParseError(f"duplicate id {vid!r}", lineno)
        parent[vid] = par
        prox[vid] = () if par is None else ((par,) if second is None else (par, second))
        if par is None and second is not None:
            prox[vid] = (second,)
        if m is not None:
            mult[vid] = m
    return EnriquesDiagram(parent, prox), mult


def parse_diagram(text: str, weighted: Optional[bool] = None) -> Union[WeightedDiagram, EnriquesDiagram]:
    """Parse diagram text.

    Returns a :class:`WeightedDiagram` when every vertex carries ``m=`` and
    an :class:`EnriquesDiagram` when none does; mixing is an error.  With
    ``weighted=True`` multiplicities are mandatory, with ``weighted=False``
    they are dropped.
    """
    parent, prox, mult, lines = {}, {}, {}, {}
    rows = _tokenize(text)
    declared_anywhere = {row[1] for row in rows}
    root_line = None
    for lineno, vid, par, second, m in rows:
        if vid in parent:
            raise ParseError(f"duplicate id {vid!r} (first declared on line {lines[vid]})", lineno)
        if par is None:
            if root_line is not None:
                raise ParseError(f"root redeclared (root already declared on line {root_line})", lineno)
            if second is not None:
                raise ParseError("the root cannot be proximate to a vertex", lineno)
            root_line = lineno
            parent[vid], prox[vid] = None, ()
        else:
            if par not in parent:
                later = " (declared later; parents must come first)" if par in declared_anywhere else ""
                raise ParseError(f"unknown parent {par!r}{later}", lineno)
            if second is None:
                prox[vid] = (par,)
            else:
                if second not in prox[par]:
                    raise ParseError(
                        f"satellite target {second!r} is not a vertex that parent {par!r} is proximate to (axiom 4)",
                        lineno,
                    )
                clash = [x for x in parent if par in prox[x] and second in prox[x]]
                if clash:
                    raise ParseError(
                        f"{clash[0]!r} is already proximate to both {par!r} and {second!r} (axiom 5)", lineno
                    )
                prox[vid] = (par, second)
            parent[vid] = par
        lines[vid] = lineno
        if m is not None:
            mult[vid] = m
    if not parent:
        raise ParseError("no vertices")
    d = EnriquesDiagram(parent, prox)
    problems = validate_diagram(d)
    if problems:
        raise ParseError("; ".join(map(str, problems)))
    if weighted is False:
        return d
    missing = [v for v in parent if v not in mult]
    if missing and (mult or weighted):
        raise ParseError(f"missing multiplicity for {missing[0]!r}", lines[missing[0]])
    if not mult:
        return d
    return WeightedDiagram(d, mult)


def _split(obj):
    if isinstance(obj, WeightedDiagram):
        return obj.diagram, obj.mult
    return obj, None


def canonical_order(obj) -> tuple:
    """Preorder walk with children sorted by (weighted) subtree code."""
    d, mult = _split(obj)
    codes = subtree_codes(d, mult)
    out, stack = [], [d.root]
    while stack:
        v = stack.pop()
        out.append(v)
        stack.extend(sorted(d.children(v), key=codes.__getitem__, reverse=True))
    return tuple(out)


def _lines(d: EnriquesDiagram, mult, order, name) -> str:
    out = []
    for v in order:
        p = d.parent[v]
        parts = ["v", name[v], "-" if p is None else name[p]]
        t = d.second_target(v)
        if t is not None:
            parts.append("+" + name[t])
        if mult is not None:
            parts.append(f"m={mult[v]}")
        out.append(" ".join(parts) + "\n")
    return "".join(out)


def serialize_diagram(obj) -> str:
    """Canonical text: canonical vertex order, ids renamed ``v1 .. vn``."""
    d, mult = _split(obj)
    order = canonical_order(obj)
    name = {v: f"v{i}" for i, v in enumerate(order, 1)}
    return _lines(d, mult, order, name)


def dump_diagram(obj) -> str:
    """Text in the diagram's own order, keeping its vertex ids."""
    d, mult = _split(obj)
    return _lines(d, mult, d.order, {v: v for v in d.vertices})
