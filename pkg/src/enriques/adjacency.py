"""Domination of weighted diagrams and adjacency of types.

``(D', mu') >= (D, mu)`` holds when some downward-closed subdiagram of ``D``
is isomorphic to one of ``D'`` such that transporting ``mu'`` back along the
isomorphism (zero elsewhere) gives values at least those of ``mu``
everywhere on ``D``.

A type is linearly adjacent to another exactly when an augmentation of it
(extra free vertices of multiplicity one) dominates the other.  For general
adjacency there is a necessary condition (failure proves non-adjacency) and,
in restricted cases, a sufficient one.  :func:`adjacency_verdict` chains
them together.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Optional

import numpy as np

from .diagram import (
    EnriquesDiagram,
    Embedding,
    OrderedDiagram,
    Subdiagram,
    admissible_orderings,
    enumerate_diagrams,
    proximity_matrix,
    unit_lower_inverse,
)
from .errors import PreconditionError, ResourceLimitError, SearchBudgetExceeded
from .weights import (
    WeightedDiagram,
    excesses,
    invariants,
    is_consistent,
    is_type,
    unload,
    values_from_multiplicities,
    weighted_code,
)

__all__ = [
    "Verdict",
    "DominationCertificate",
    "Augmentation",
    "AdjacencyWitness",
    "AdjacencyVerdict",
    "NecessaryResult",
    "SufficientResult",
    "dominates",
    "augmentations",
    "linear_adjacent",
    "matrix_compatible",
    "compatibility_product",
    "necessary_adjacency",
    "sufficient_adjacency",
    "adjacency_verdict",
    "semicontinuity_violation",
    "MAX_NODES",
    "MAX_PAIRS",
]

MAX_NODES = 10**6
MAX_PAIRS = 10**4


class Verdict(str, enum.Enum):
    LINEAR = "LINEAR"
    NOT_LINEAR = "NOT_LINEAR"
    ADJACENT = "ADJACENT"
    NOT_ADJACENT = "NOT_ADJACENT"
    UNKNOWN = "UNKNOWN"


class _Budget:
    """Shared node counter for one query."""

    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def spend(self):
        self.used += 1
        if self.used > self.limit:
            raise SearchBudgetExceeded(f"search exceeded {self.limit} nodes")


@dataclass(frozen=True)
class DominationCertificate:
    """Witness for ``left >= right``.

    ``embedding`` maps a subdiagram of ``right.diagram`` onto one of
    ``left.diagram``; ``transported`` carries the left multiplicities back
    onto the right diagram.
    """

    left: WeightedDiagram
    right: WeightedDiagram
    embedding: Embedding
    transported: WeightedDiagram
    right_values: dict
    transported_values: dict

    def recheck(self) -> bool:
        """Recompute everything from ``left``, ``right`` and the embedding."""
        emb = self.embedding
        if emb.source.diagram != self.right.diagram or emb.target.diagram != self.left.diagram:
            return False
        if not emb.is_isomorphism():
            return False
        nu = {p: self.left.mult[emb.mapping[p]] if p in emb.mapping else 0 for p in self.right.diagram}
        transported = WeightedDiagram(self.right.diagram, nu)
        v = values_from_multiplicities(self.right)
        v2 = values_from_multiplicities(transported)
        return (
            transported == self.transported
            and v == self.right_values
            and v2 == self.transported_values
            and all(v[p] <= v2[p] for p in v)
        )


def _dominates(left: WeightedDiagram, right: WeightedDiagram, budget: _Budget) -> Optional[DominationCertificate]:
    L, R = left.diagram, right.diagram
    order = R.order
    target_values = values_from_multiplicities(right)
    left_tag = {x: L.second_target(x) for x in L.vertices}
    phi: dict = {}
    used: set = set()
    vals: dict = {}

    def options(p):
        parent = R.parent[p]
        if parent is None:
            cands = [L.root]
        elif parent in phi:
            cands = L.children(phi[parent])
        else:
            cands = []
        t = R.second_target(p)
        for x in cands:
            if x in used:
                continue
            tx = left_tag[x]
            if t is None and tx is None:
                yield x
            elif t is not None and tx is not None and phi.get(t) == tx:
                yield x
        yield None

    def rec(k):
        if k == len(order):
            return True
        p = order[k]
        inherited = sum(vals[q] for q in R.proximities[p])
        for x in options(p):
            budget.spend()
            value = inherited + (left.mult[x] if x is not None else 0)
            if value < target_values[p]:
                continue
            vals[p] = value
            if x is not None:
                phi[p] = x
                used.add(x)
            if rec(k + 1):
                return True
            if x is not None:
                del phi[p]
                used.discard(x)
        return False

    if not rec(0):
        return None
    emb = Embedding(Subdiagram(R, frozenset(phi)), Subdiagram(L, frozenset(phi.values())), dict(phi))
    nu = {p: left.mult[phi[p]] if p in phi else 0 for p in R.vertices}
    transported = WeightedDiagram(R, nu)
    return DominationCertificate(left, right, emb, transported, target_values, dict(vals))


def dominates(left: WeightedDiagram, right: WeightedDiagram, max_nodes: int = MAX_NODES) -> Optional[DominationCertificate]:
    """Search for a certificate of ``left >= right``.

    ``left`` must be consistent; ``right`` may be any weighted diagram.
    Vertices of ``right`` are decided in admissible order (mapped onto an
    unused matching child of the parent's image, or left out), so the value
    of each transported vertex is fixed when it is decided and a branch is
    cut as soon as it falls below the target value.  Returns the first
    certificate in this deterministic order, or ``None``.

    Raises :class:`SearchBudgetExceeded` after ``max_nodes`` search nodes.
    """
    if not is_consistent(left):
        raise PreconditionError("the dominating side must be consistent")
    return _dominates(left, right, _Budget(max_nodes))


# -- augmentations -----------------------------------------------------------

@dataclass(frozen=True)
class Augmentation:
    """``base`` plus free vertices of multiplicity one.

    ``added`` lists ``(new_vertex, parent)`` with parents before children.
    """

    base: WeightedDiagram
    added: tuple
    result: WeightedDiagram

    def __len__(self):
        return len(self.added)


def _partitions(total_max: int, parts_max: int, largest: Optional[int] = None) -> list:
    """Non-increasing tuples with at most ``parts_max`` positive parts summing to <= ``total_max``."""
    largest = total_max if largest is None else min(largest, total_max)
    out = [()]
    if parts_max == 0:
        return out
    for first in range(largest, 0, -1):
        for rest in _partitions(total_max - first, parts_max - 1, first):
            out.append((first,) + rest)
    return out


def _fresh_ids(used: set):
    k = 0
    while True:
        k += 1
        name = f"x{k}"
        if name not in used:
            yield name


def _build_augmentation(base: WeightedDiagram, plan: dict) -> Augmentation:
    d = base.diagram
    parent = dict(d.parent)
    prox = dict(d.proximities)
    mult = dict(base.mult)
    names = _fresh_ids(set(d.vertices))
    added = []
    for p in d.order:
        for length in plan.get(p, ()):
            up = p
            for _ in range(length):
                x = next(names)
                parent[x] = up
                prox[x] = (up,)
                mult[x] = 1
                added.append((x, up))
                up = x
    result = WeightedDiagram(EnriquesDiagram(parent, prox), mult)
    return Augmentation(base, tuple(added), result)


def augmentations(base: WeightedDiagram, budget: int) -> Iterator[Augmentation]:
    """Consistent ways of adding at most ``budget`` free multiplicity-one vertices.

    A vertex can only take as many new children as its excess allows, and
    each added vertex (excess one) can carry one further added vertex, so
    the additions form chains hanging from base vertices.  Chains at the
    same base vertex are interchangeable; one augmentation is produced per
    multiset of chain lengths at each vertex, smallest totals first.
    """
    if not is_consistent(base):
        raise PreconditionError("augmentations need a consistent base")
    rho = excesses(base)
    slots = [p for p in base.diagram.order if rho[p] > 0]
    choices = [_partitions(budget, rho[p]) for p in slots]
    for total in range(budget + 1):
        for combo in product(*choices):
            if sum(sum(c) for c in combo) != total:
                continue
            yield _build_augmentation(base, {p: c for p, c in zip(slots, combo) if c})


# -- linear adjacency ----------------------------------------------------------

def semicontinuity_violation(tilde: WeightedDiagram, target: WeightedDiagram) -> Optional[str]:
    """Name of a numerical invariant that drops from ``tilde`` to ``target``, if any."""
    a, b = invariants(tilde), invariants(target)
    if a.delta < b.delta:
        return "delta"
    if a.milnor < b.milnor:
        return "milnor"
    return None


@dataclass(frozen=True)
class AdjacencyWitness:
    """Evidence from the necessary / sufficient searches.

    ``target_order`` and ``d0_order`` are the two admissible orderings,
    ``transported`` is ``d0`` carrying the target multiplicities by
    position, and ``product`` is ``P0^-1 P``.
    """

    target_order: tuple
    d0: EnriquesDiagram
    d0_order: tuple
    transported: WeightedDiagram
    P: np.ndarray = field(repr=False)
    P0: np.ndarray = field(repr=False)
    product: np.ndarray = field(repr=False)
    augmentation: Augmentation = field(repr=False)
    domination: DominationCertificate = field(repr=False)
    tame: Optional[bool] = None


@dataclass(frozen=True)
class AdjacencyVerdict:
    kind: Verdict
    reason: str
    tilde: WeightedDiagram
    target: WeightedDiagram
    certificate: Optional[DominationCertificate] = None
    augmentation: Optional[Augmentation] = None
    witness: Optional[AdjacencyWitness] = None

    def __bool__(self):
        return self.kind in (Verdict.LINEAR, Verdict.ADJACENT)


def _require_types(*ws):
    for w in ws:
        if not is_type(w):
            raise PreconditionError(f"{w!r} is not a type")


def _search_augmented(tilde, right, budget_vertices, budget):
    for aug in augmentations(tilde, budget_vertices):
        cert = _dominates(aug.result, right, budget)
        if cert is not None:
            return aug, cert
    return None


def linear_adjacent(
    tilde: WeightedDiagram,
    target: WeightedDiagram,
    budget: Optional[int] = None,
    max_nodes: int = MAX_NODES,
    prefilter: bool = True,
) -> AdjacencyVerdict:
    """Decide whether the type ``tilde`` is linearly adjacent to ``target``.

    Tries every augmentation of ``tilde`` with at most ``budget`` (default
    ``len(target)``) added vertices against ``target``.  Added vertices
    matter only through the image of the embedding, which has at most
    ``len(target)`` vertices, so the default budget is exhaustive.  With
    ``prefilter`` a drop of delta or Milnor number rejects immediately.

    Raises :class:`SearchBudgetExceeded` if ``max_nodes`` runs out.
    """
    _require_types(tilde, target)
    if prefilter:
        bad = semicontinuity_violation(tilde, target)
        if bad:
            return AdjacencyVerdict(Verdict.NOT_LINEAR, f"semicontinuity:{bad}", tilde, target)
    budget = len(target) if budget is None else budget
    found = _search_augmented(tilde, target, budget, _Budget(max_nodes))
    if found is None:
        return AdjacencyVerdict(Verdict.NOT_LINEAR, "linear-search-exhausted", tilde, target)
    aug, cert = found
    return AdjacencyVerdict(Verdict.LINEAR, "linear-domination", tilde, target, cert, aug)


# -- matrix criterion and non-linear adjacency ---------------------------------

def compatibility_product(generic: OrderedDiagram, special: OrderedDiagram) -> np.ndarray:
    """``P0^-1 P`` with ``P`` from ``generic`` and ``P0`` from ``special``."""
    if len(generic.order) != len(special.order):
        raise PreconditionError("ordered diagrams must have the same number of vertices")
    P = proximity_matrix(generic)
    P0inv = unit_lower_inverse(proximity_matrix(special))
    return P0inv @ P


def matrix_compatible(generic: OrderedDiagram, special: OrderedDiagram) -> bool:
    return bool((compatibility_product(generic, special) >= 0).all())


@dataclass(frozen=True)
class NecessaryResult:
    status: str  # PASS, FAIL or INDETERMINATE
    witness: Optional[AdjacencyWitness] = None
    reason: str = ""

    def __bool__(self):
        return self.status == "PASS"


@dataclass(frozen=True)
class SufficientResult:
    status: str  # YES or UNKNOWN
    witness: Optional[AdjacencyWitness] = None
    reason: str = ""

    def __bool__(self):
        return self.status == "YES"


def _witness_search(tilde, target, require_tame, max_pairs, max_nodes):
    """Common loop of the necessary and sufficient conditions.

    Returns a witness, ``None`` after an exhaustive search, or raises
    :class:`ResourceLimitError`.
    """
    n = len(target)
    candidates = enumerate_diagrams(n)
    budget = _Budget(max_nodes)
    failed = set()
    pairs = 0
    for od in admissible_orderings(target.diagram):
        P = proximity_matrix(od)
        mu = target.vector(od.order)
        for d0 in candidates:
            for od0 in admissible_orderings(d0):
                pairs += 1
                if pairs > max_pairs:
                    raise ResourceLimitError(f"more than {max_pairs} (D0, ordering) pairs")
                P0 = proximity_matrix(od0)
                prod = unit_lower_inverse(P0) @ P
                if (prod < 0).any():
                    continue
                transported = WeightedDiagram.from_vector(d0, mu, od0.order)
                tame = None
                if require_tame:
                    tame = unload(transported, order=od0.order).tame
                    if not tame:
                        continue
                code = weighted_code(transported)
                if code in failed:
                    continue
                found = _search_augmented(tilde, transported, n, budget)
                if found is None:
                    failed.add(code)
                    continue
                aug, cert = found
                return AdjacencyWitness(od.order, d0, od0.order, transported, P, P0, prod, aug, cert, tame)
    return None


def necessary_adjacency(
    tilde: WeightedDiagram, target: WeightedDiagram, max_pairs: int = MAX_PAIRS, max_nodes: int = MAX_NODES
) -> NecessaryResult:
    """Look for the combinatorial shadow of a degeneration ``target -> tilde``.

    Over orderings of ``target``, diagrams ``D0`` with as many vertices and
    their orderings with ``P0^-1 P >= 0``, looks for an augmentation of
    ``tilde`` dominating ``D0`` with the target multiplicities placed by
    position.  ``FAIL`` (nothing found) proves ``tilde`` is not adjacent to
    ``target``; an exhausted cap gives ``INDETERMINATE``.
    """
    _require_types(tilde, target)
    try:
        w = _witness_search(tilde, target, False, max_pairs, max_nodes)
    except ResourceLimitError as exc:
        return NecessaryResult("INDETERMINATE", reason=str(exc))
    if w is None:
        return NecessaryResult("FAIL", reason="exhaustive")
    return NecessaryResult("PASS", w)


def _is_chain(d: EnriquesDiagram) -> bool:
    return all(len(d.children(v)) <= 1 for v in d.vertices)


def sufficient_adjacency(
    tilde: WeightedDiagram, target: WeightedDiagram, max_pairs: int = MAX_PAIRS, max_nodes: int = MAX_NODES
) -> SufficientResult:
    """Certify adjacency when the matrix criterion is known to be decisive.

    Only applies when ``target`` has no satellites or is a chain.  Same
    search as :func:`necessary_adjacency`, additionally requiring the
    transported weights on ``D0`` to unload tamely.  Never answers no.
    """
    _require_types(tilde, target)
    d = target.diagram
    if d.satellites and not _is_chain(d):
        return SufficientResult("UNKNOWN", reason="not-applicable")
    try:
        w = _witness_search(tilde, target, True, max_pairs, max_nodes)
    except ResourceLimitError as exc:
        return SufficientResult("UNKNOWN", reason=f"budget:{exc}")
    if w is None:
        return SufficientResult("UNKNOWN", reason="no-witness")
    return SufficientResult("YES", w)


def adjacency_verdict(
    tilde: WeightedDiagram,
    target: WeightedDiagram,
    max_nodes: int = MAX_NODES,
    max_pairs: int = MAX_PAIRS,
) -> AdjacencyVerdict:
    """Run the decision cascade.

    1. linear adjacency, 2. at most two free vertices in ``target`` (then
    adjacency would be linear), 3. semicontinuity of delta and Milnor
    number, 4. the necessary condition, 5. the sufficient condition.
    Budget exhaustion never produces ``NOT_ADJACENT``.
    """
    _require_types(tilde, target)
    notes = []
    try:
        lin = linear_adjacent(tilde, target, max_nodes=max_nodes)
    except SearchBudgetExceeded as exc:
        lin = None
        notes.append(f"linear:{exc}")
    if lin is not None and lin.kind is Verdict.LINEAR:
        return lin
    if lin is not None and len(target.diagram.free_vertices) <= 2:
        return AdjacencyVerdict(Verdict.NOT_ADJACENT, "two-free-vertices", tilde, target)
    bad = semicontinuity_violation(tilde, target)
    if bad:
        return AdjacencyVerdict(Verdict.NOT_ADJACENT, f"semicontinuity:{bad}", tilde, target)
    nec = necessary_adjacency(tilde, target, max_pairs, max_nodes)
    if nec.status == "FAIL":
        return AdjacencyVerdict(Verdict.NOT_ADJACENT, "necessary-condition", tilde, target)
    if nec.status == "INDETERMINATE":
        notes.append(f"necessary:{nec.reason}")
    suf = sufficient_adjacency(tilde, target, max_pairs, max_nodes)
    if suf.status == "YES":
        w = suf.witness
        return AdjacencyVerdict(
            Verdict.ADJACENT, "sufficient-condition", tilde, target, w.domination, w.augmentation, w
        )
    notes.append(f"sufficient:{suf.reason}")
    return AdjacencyVerdict(Verdict.UNKNOWN, ";".join(notes), tilde, target, witness=nec.witness)
