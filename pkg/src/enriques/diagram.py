"""Unweighted Enriques diagrams.

An Enriques diagram is a rooted tree together with a proximity relation:
every non-root vertex is proximate to its parent, and a *satellite* vertex
is additionally proximate to one earlier vertex on its ancestor chain.
Vertex identifiers are opaque strings; everything that matters lives in the
``parent`` and ``proximities`` maps.

The module covers validation of the five axioms, admissible orderings,
proximity matrices (with their exact integer inverse), downward-closed
subdiagrams, canonical codes, isomorphism search and exhaustive enumeration
of diagrams up to isomorphism.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from .errors import InadmissibleOrderingError, InvalidDiagramError, ResourceLimitError

__all__ = [
    "EnriquesDiagram",
    "OrderedDiagram",
    "Subdiagram",
    "Embedding",
    "Violation",
    "validate_diagram",
    "free_and_satellite",
    "admissible_orderings",
    "is_admissible",
    "proximity_matrix",
    "unit_lower_inverse",
    "enumerate_subdiagrams",
    "canonical_code",
    "subtree_codes",
    "find_isomorphism",
    "enumerate_diagrams",
    "DEFAULT_VERTEX_CAP",
]

DEFAULT_VERTEX_CAP = 8


class EnriquesDiagram:
    """A rooted tree with an explicit proximity relation.

    The constructor stores whatever it is given so that broken inputs can be
    inspected with :func:`validate_diagram`; use :meth:`from_spec` or
    :meth:`check` when a valid diagram is required.

    Parameters
    ----------
    parent : mapping
        ``vertex -> parent`` with ``None`` for the root.  Iteration order of
        this mapping is the vertex order used for deterministic output.
    proximities : mapping, optional
        ``vertex -> tuple`` of the vertices it is proximate to.  Defaults to
        "every vertex is free".
    """

    __slots__ = ("_parent", "_prox", "_vertices", "_children", "_order", "_proximate_to")

    def __init__(
        self,
        parent: Mapping[str, Optional[str]],
        proximities: Optional[Mapping[str, Sequence[str]]] = None,
    ):
        self._vertices = tuple(parent)
        self._parent = MappingProxyType(dict(parent))
        if proximities is None:
            proximities = {v: () if p is None else (p,) for v, p in parent.items()}
        self._prox = MappingProxyType({v: tuple(proximities.get(v, ())) for v in self._vertices})
        self._children = None
        self._order = None
        self._proximate_to = None

    @classmethod
    def from_spec(cls, rows: Iterable[Sequence]) -> "EnriquesDiagram":
        """Build and validate a diagram from ``(id, parent[, second_target])`` rows.

        >>> cusp = EnriquesDiagram.from_spec([("r", None), ("a", "r"), ("b", "a", "r")])
        >>> cusp.satellites
        ('b',)
        """
        parent, prox = {}, {}
        for row in rows:
            v, p = row[0], row[1]
            parent[v] = p
            if p is None:
                prox[v] = ()
            elif len(row) > 2 and row[2] is not None:
                prox[v] = (p, row[2])
            else:
                prox[v] = (p,)
        return cls(parent, prox).check()

    def check(self) -> "EnriquesDiagram":
        """Return ``self`` if valid, else raise :class:`InvalidDiagramError`."""
        problems = validate_diagram(self)
        if problems:
            raise InvalidDiagramError(problems)
        return self

    # -- basic accessors -------------------------------------------------
    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def parent(self) -> Mapping[str, Optional[str]]:
        return self._parent

    @property
    def proximities(self) -> Mapping[str, tuple]:
        return self._prox

    def __len__(self):
        return len(self._vertices)

    def __iter__(self):
        return iter(self._vertices)

    def __contains__(self, v):
        return v in self._parent

    def __eq__(self, other):
        if not isinstance(other, EnriquesDiagram):
            return NotImplemented
        return dict(self._parent) == dict(other._parent) and dict(self._prox) == dict(other._prox)

    def __hash__(self):
        return hash(frozenset((v, self._parent[v], self._prox[v]) for v in self._vertices))

    def __repr__(self):
        rows = []
        for v in self._vertices:
            extra = [t for t in self._prox[v] if t != self._parent[v]]
            rows.append(f"{v}<{self._parent[v]}" + (f"+{extra[0]}" if extra else ""))
        return f"EnriquesDiagram({', '.join(rows)})"

    @property
    def root(self) -> str:
        roots = [v for v in self._vertices if self._parent[v] is None]
        if len(roots) != 1:
            raise InvalidDiagramError(f"expected exactly one root, found {roots}")
        return roots[0]

    def children(self, v) -> tuple:
        if self._children is None:
            ch = {u: [] for u in self._vertices}
            for u in self._vertices:
                p = self._parent[u]
                if p in ch:
                    ch[p].append(u)
            self._children = {u: tuple(c) for u, c in ch.items()}
        return self._children[v]

    def proximate_to(self, p) -> tuple:
        """Vertices proximate to ``p`` (in vertex order)."""
        if self._proximate_to is None:
            pt = {u: [] for u in self._vertices}
            for q in self._vertices:
                for t in self._prox[q]:
                    if t in pt:
                        pt[t].append(q)
            self._proximate_to = {u: tuple(c) for u, c in pt.items()}
        return self._proximate_to[p]

    def is_satellite(self, v) -> bool:
        return len(self._prox[v]) == 2

    def second_target(self, v) -> Optional[str]:
        """The proximity target of a satellite other than its parent."""
        for t in self._prox[v]:
            if t != self._parent[v]:
                return t
        return None

    @property
    def satellites(self) -> tuple:
        return tuple(v for v in self._vertices if len(self._prox[v]) == 2)

    @property
    def free_vertices(self) -> tuple:
        return tuple(v for v in self._vertices if len(self._prox[v]) != 2)

    def is_extremal(self, v) -> bool:
        return not self.children(v)

    def ancestors(self, v) -> list:
        """Strict ancestors of ``v``, nearest first."""
        out = []
        p = self._parent[v]
        while p is not None:
            out.append(p)
            p = self._parent[p]
        return out

    def depth(self, v) -> int:
        return len(self.ancestors(v))

    @property
    def order(self) -> tuple:
        """Default admissible ordering: vertex order if admissible, else a
        stable topological sort of it."""
        if self._order is None:
            if is_admissible(self, self._vertices):
                self._order = self._vertices
            else:
                index = {v: i for i, v in enumerate(self._vertices)}
                out, frontier = [], [self.root]
                while frontier:
                    frontier.sort(key=index.__getitem__)
                    v = frontier.pop(0)
                    out.append(v)
                    frontier.extend(self.children(v))
                self._order = tuple(out)
        return self._order

    def relabel(self, mapping: Mapping[str, str]) -> "EnriquesDiagram":
        """Rename vertices; vertex order follows the old order."""
        parent = {mapping[v]: (None if p is None else mapping[p]) for v, p in self._parent.items()}
        prox = {mapping[v]: tuple(mapping[t] for t in ts) for v, ts in self._prox.items()}
        return EnriquesDiagram(parent, prox)

    def reordered(self, order: Sequence[str]) -> "EnriquesDiagram":
        """Same diagram with vertex order replaced by ``order``."""
        return EnriquesDiagram({v: self._parent[v] for v in order}, {v: self._prox[v] for v in order})

    def restrict(self, members: Iterable[str]) -> "EnriquesDiagram":
        """Induced diagram on a downward-closed vertex set."""
        keep = set(members)
        parent = {v: self._parent[v] for v in self._vertices if v in keep}
        prox = {v: tuple(t for t in self._prox[v] if t in keep) for v in parent}
        return EnriquesDiagram(parent, prox)


@dataclass(frozen=True)
class Violation:
    """One problem found by :func:`validate_diagram`.

    ``axiom`` is 1..5 for axiom violations and ``None`` for structural
    problems, in which case ``kind`` names the problem.
    """

    kind: str
    vertices: tuple
    axiom: Optional[int] = None
    message: str = ""

    def __str__(self):
        label = f"axiom {self.axiom}" if self.axiom else self.kind
        return f"{label}: {self.message} {list(self.vertices)}".rstrip()


def _structural_problems(d: EnriquesDiagram) -> list:
    out = []
    verts = set(d.vertices)
    for v in d.vertices:
        p = d.parent[v]
        if p is not None and p not in verts:
            out.append(Violation("dangling-parent", (v, p), message=f"parent {p!r} of {v!r} is not a vertex"))
        for t in d.proximities[v]:
            if t not in verts:
                out.append(Violation("dangling-proximity", (v, t), message=f"{v!r} proximate to unknown {t!r}"))
        if v in d.proximities[v]:
            out.append(Violation("self-proximity", (v,), message=f"{v!r} proximate to itself"))
    roots = [v for v in d.vertices if d.parent[v] is None]
    if not d.vertices:
        out.append(Violation("empty", (), message="diagram has no vertices"))
    elif not roots:
        out.append(Violation("no-root", (), message="no vertex without parent"))
    elif len(roots) > 1:
        out.append(Violation("multiple-roots", tuple(roots), message="more than one root"))
    if out:
        return out
    # every vertex must reach the root
    for v in d.vertices:
        seen = {v}
        p = d.parent[v]
        while p is not None:
            if p in seen:
                out.append(Violation("cycle", (v,), message=f"parent links from {v!r} cycle"))
                break
            seen.add(p)
            p = d.parent[p]
    return out


def validate_diagram(d: EnriquesDiagram) -> list:
    """Return every violated axiom (or structural problem) of ``d``.

    Structural problems (dangling references, no or several roots, cycles)
    are reported on their own, since the axioms are meaningless without a
    tree.  An empty list means ``d`` is an Enriques diagram.
    """
    problems = _structural_problems(d)
    if problems:
        return problems
    root = d.root
    if d.proximities[root]:
        problems.append(Violation("axiom", (root,), 1, "the root is proximate to a vertex"))
    for q in d.vertices:
        if q == root:
            continue
        ts = d.proximities[q]
        p = d.parent[q]
        if p not in ts:
            problems.append(Violation("axiom", (q, p), 2, "vertex not proximate to its parent"))
        if len(ts) > 2:
            problems.append(Violation("axiom", (q,) + ts, 3, "vertex proximate to more than two vertices"))
        if len(ts) == 2:
            others = [t for t in ts if t != p]
            if p not in ts or len(others) != 1 or others[0] not in d.proximities[p]:
                problems.append(
                    Violation("axiom", (q,) + ts, 4, "satellite whose parent is not proximate to its other target")
                )
    for q in d.vertices:
        for p in d.proximities[q]:
            both = [x for x in d.vertices if p in d.proximities[x] and q in d.proximities[x]]
            if len(both) > 1:
                problems.append(
                    Violation("axiom", (p, q) + tuple(both), 5, "more than one vertex proximate to both")
                )
    return problems


def free_and_satellite(d: EnriquesDiagram) -> tuple:
    """``(free, satellite)`` as tuples in vertex order."""
    return d.free_vertices, d.satellites


# -- orderings and matrices ----------------------------------------------

def is_admissible(d: EnriquesDiagram, order: Sequence[str]) -> bool:
    if len(order) != len(d) or set(order) != set(d.vertices):
        return False
    pos = {v: i for i, v in enumerate(order)}
    return all(d.parent[v] is None or pos[d.parent[v]] < pos[v] for v in order)


@dataclass(frozen=True)
class OrderedDiagram:
    """A diagram with an admissible total order of its vertices."""

    diagram: EnriquesDiagram
    order: tuple = field(default=None)

    def __post_init__(self):
        order = self.diagram.order if self.order is None else tuple(self.order)
        if not is_admissible(self.diagram, order):
            raise InadmissibleOrderingError(f"{list(order)} is not an admissible ordering")
        object.__setattr__(self, "order", order)

    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.order)}


def admissible_orderings(d: EnriquesDiagram) -> Iterator[OrderedDiagram]:
    """Yield every admissible ordering of ``d`` exactly once.

    Orderings come out in lexicographic order with respect to the vertex
    order of ``d``.
    """
    rank = {v: i for i, v in enumerate(d.vertices)}
    n = len(d)
    prefix = []

    def rec(available):
        if len(prefix) == n:
            yield OrderedDiagram(d, tuple(prefix))
            return
        for v in sorted(available, key=rank.__getitem__):
            prefix.append(v)
            yield from rec((available - {v}) | set(d.children(v)))
            prefix.pop()

    yield from rec(frozenset([d.root]))


def proximity_matrix(od: OrderedDiagram) -> np.ndarray:
    """Unit lower-triangular matrix with ``-1`` at (i, j) when p_i is
    proximate to p_j."""
    idx = od.index()
    n = len(od.order)
    P = np.eye(n, dtype=np.int64)
    for v in od.order:
        for t in od.diagram.proximities[v]:
            P[idx[v], idx[t]] = -1
    return P


def unit_lower_inverse(P) -> np.ndarray:
    """Exact inverse of a unit lower-triangular integer matrix.

    Forward substitution on Python integers; the result is converted back to
    ``int64`` (``OverflowError`` if an entry does not fit).
    """
    A = [[int(x) for x in row] for row in np.asarray(P)]
    n = len(A)
    for i in range(n):
        if A[i][i] != 1 or any(A[i][j] for j in range(i + 1, n)):
            raise ValueError("matrix is not unit lower-triangular")
    inv = [[0] * n for _ in range(n)]
    for j in range(n):
        inv[j][j] = 1
        for i in range(j + 1, n):
            inv[i][j] = -sum(A[i][k] * inv[k][j] for k in range(j, i))
    return np.array(inv, dtype=np.int64)


# -- subdiagrams and embeddings ----------------------------------------

@dataclass(frozen=True)
class Subdiagram:
    """Downward-closed vertex subset of ``diagram`` (possibly empty)."""

    diagram: EnriquesDiagram
    members: frozenset

    def __post_init__(self):
        members = frozenset(self.members)
        object.__setattr__(self, "members", members)
        for v in members:
            p = self.diagram.parent[v]
            if p is not None and p not in members:
                raise InvalidDiagramError(f"{v!r} in subdiagram but its parent {p!r} is not")

    def __len__(self):
        return len(self.members)

    def ordered_members(self) -> tuple:
        return tuple(v for v in self.diagram.order if v in self.members)


@dataclass(frozen=True)
class Embedding:
    """Isomorphism between the subdiagrams ``source`` and ``target``."""

    source: Subdiagram
    target: Subdiagram
    mapping: Mapping[str, str]

    def pairs(self) -> list:
        return [(v, self.mapping[v]) for v in self.source.ordered_members()]

    def is_isomorphism(self) -> bool:
        src, dst = self.source.diagram, self.target.diagram
        m = dict(self.mapping)
        if set(m) != set(self.source.members) or set(m.values()) != set(self.target.members):
            return False
        if len(set(m.values())) != len(m):
            return False
        for q, iq in m.items():
            pq = src.parent[q]
            if (pq is None) != (dst.parent[iq] is None):
                return False
            if pq in m and dst.parent[iq] != m[pq]:
                return False
            for p in self.source.members:
                if (p in src.proximities[q]) != (m[p] in dst.proximities[iq]):
                    return False
        return True


def _downsets(d: EnriquesDiagram, v) -> list:
    """Downward-closed subsets of the subtree at ``v`` that contain ``v``."""
    parts = [[()] + _downsets(d, c) for c in d.children(v)]
    return [(v,) + sum(choice, ()) for choice in product(*parts)]


def enumerate_subdiagrams(d: EnriquesDiagram) -> Iterator[Subdiagram]:
    """Every downward-closed subset, including the empty one and ``d``."""
    yield Subdiagram(d, frozenset())
    for members in _downsets(d, d.root):
        yield Subdiagram(d, frozenset(members))


# -- canonical codes and isomorphism -------------------------------------

def _tag(d: EnriquesDiagram, v) -> str:
    t = d.second_target(v)
    if t is None:
        return "f"
    return f"s{d.ancestors(v).index(t) + 1}"


def subtree_codes(d: EnriquesDiagram, mult: Optional[Mapping[str, int]] = None) -> dict:
    """Code of the subtree hanging from each vertex; see :func:`canonical_code`."""
    codes = {}
    for v in reversed(d.order):
        head = _tag(d, v)
        if mult is not None:
            head += f":{mult[v]}"
        kids = sorted(codes[c] for c in d.children(v))
        codes[v] = "(" + head + "".join(kids) + ")"
    return codes


def canonical_code(d: EnriquesDiagram, mult: Optional[Mapping[str, int]] = None) -> bytes:
    """Label-free code of ``d``; equal iff the diagrams are isomorphic.

    Each vertex is encoded as ``(tag child-codes...)`` with the child codes
    sorted.  The tag is ``f`` for free vertices and ``s<k>`` for a
    satellite whose second proximity target is its ``k``-th ancestor.  When
    ``mult`` is given the multiplicity is appended to each tag, giving a
    code for weighted isomorphism.
    """
    return subtree_codes(d, mult)[d.root].encode("ascii")


def _subtree_sizes(d: EnriquesDiagram) -> dict:
    size = {}
    for v in reversed(d.order):
        size[v] = 1 + sum(size[c] for c in d.children(v))
    return size


def find_isomorphism(
    d1: EnriquesDiagram,
    d2: EnriquesDiagram,
    mult1: Optional[Mapping[str, int]] = None,
    mult2: Optional[Mapping[str, int]] = None,
) -> Optional[dict]:
    """Proximity-preserving bijection ``d1 -> d2``, or ``None``.

    Plain backtracking in preorder: each vertex is matched to an unused
    child of its parent's image carrying the same satellite target.  It does
    not use canonical codes, so the two can be checked against each other.
    Passing multiplicity maps requires them to be preserved as well.
    """
    if len(d1) != len(d2):
        return None
    if len(d1.satellites) != len(d2.satellites):
        return None
    s1, s2 = _subtree_sizes(d1), _subtree_sizes(d2)
    preorder = []
    stack = [d1.root]
    while stack:
        v = stack.pop()
        preorder.append(v)
        stack.extend(reversed(d1.children(v)))

    phi: dict = {}
    used: set = set()

    def compatible(u, x):
        if s1[u] != s2[x] or len(d1.children(u)) != len(d2.children(x)):
            return False
        if mult1 is not None and mult1[u] != mult2[x]:
            return False
        t1, t2 = d1.second_target(u), d2.second_target(x)
        if (t1 is None) != (t2 is None):
            return False
        return t1 is None or phi[t1] == t2

    def rec(k):
        if k == len(preorder):
            return True
        u = preorder[k]
        p = d1.parent[u]
        cands = [d2.root] if p is None else d2.children(phi[p])
        for x in cands:
            if x in used or not compatible(u, x):
                continue
            phi[u] = x
            used.add(x)
            if rec(k + 1):
                return True
            del phi[u]
            used.discard(x)
        return False

    return dict(phi) if rec(0) else None


# -- enumeration -------------------------------------------------------------

def _extensions(d: EnriquesDiagram, new_id: str) -> Iterator[EnriquesDiagram]:
    """All valid diagrams obtained by attaching one extremal vertex."""
    for u in d.vertices:
        parent = dict(d.parent)
        prox = dict(d.proximities)
        parent[new_id] = u
        prox[new_id] = (u,)
        yield EnriquesDiagram(parent, prox)
        for t in d.proximities[u]:
            if any(t in d.proximities[x] and u in d.proximities[x] for x in d.vertices):
                continue  # axiom 5
            prox_sat = dict(prox)
            prox_sat[new_id] = (u, t)
            yield EnriquesDiagram(parent, prox_sat)


def enumerate_diagrams(n: int, cap: int = DEFAULT_VERTEX_CAP) -> list:
    """One diagram per isomorphism class with ``n`` vertices.

    Built by adding one vertex at a time to the classes with ``n - 1``
    vertices and keeping one representative per canonical code.  Vertices
    are named ``p1 .. pn`` in an admissible order.  Result is sorted by
    canonical code.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > cap:
        raise ResourceLimitError(f"enumerate_diagrams({n}) exceeds the vertex cap {cap}")
    level = {canonical_code(EnriquesDiagram({"p1": None})): EnriquesDiagram({"p1": None})}
    for k in range(2, n + 1):
        nxt = {}
        for d in level.values():
            for e in _extensions(d, f"p{k}"):
                nxt.setdefault(canonical_code(e), e)
        level = nxt
    return [level[c] for c in sorted(level)]
