"""Systems of multiplicities and values on Enriques diagrams.

Given a diagram and integer multiplicities ``nu``, the system of values is
``v_p = nu_p + sum(v_q for q that p is proximate to)``; in matrix form
``v = P^-1 nu`` for the proximity matrix ``P`` of any admissible ordering.
The excess of ``p`` is ``nu_p`` minus the multiplicities of the vertices
proximate to ``p``; a weighted diagram is consistent when no excess is
negative.  Unloading repairs inconsistent weights by raising values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional, Sequence

from .diagram import EnriquesDiagram, canonical_code, is_admissible
from .errors import InadmissibleOrderingError, PreconditionError, ResourceLimitError

__all__ = [
    "WeightedDiagram",
    "Invariants",
    "UnloadingReport",
    "values_from_multiplicities",
    "multiplicities_from_values",
    "excesses",
    "is_consistent",
    "degree",
    "unload",
    "invariants",
    "is_type",
    "weighted_code",
]


@dataclass(frozen=True)
class WeightedDiagram:
    """An Enriques diagram with an integer multiplicity at each vertex.

    Multiplicities may be zero or negative; only :func:`invariants` and
    :func:`is_type` ask for consistency.
    """

    diagram: EnriquesDiagram
    mult: Mapping[str, int]

    def __post_init__(self):
        mult = {v: int(self.mult[v]) for v in self.diagram.vertices}
        object.__setattr__(self, "mult", MappingProxyType(mult))

    @classmethod
    def from_vector(cls, diagram: EnriquesDiagram, nu: Sequence[int], order=None) -> "WeightedDiagram":
        """Weights given as a vector along ``order`` (default: the diagram's order)."""
        order = diagram.order if order is None else tuple(order)
        if len(nu) != len(order):
            raise ValueError("multiplicity vector has the wrong length")
        return cls(diagram, dict(zip(order, nu)))

    def vector(self, order=None) -> tuple:
        order = self.diagram.order if order is None else order
        return tuple(self.mult[v] for v in order)

    def __len__(self):
        return len(self.diagram)

    def __eq__(self, other):
        if not isinstance(other, WeightedDiagram):
            return NotImplemented
        return self.diagram == other.diagram and dict(self.mult) == dict(other.mult)

    def __hash__(self):
        return hash((self.diagram, frozenset(self.mult.items())))

    def __repr__(self):
        return f"WeightedDiagram({self.diagram!r}, {dict(self.mult)})"


def weighted_code(w: WeightedDiagram) -> bytes:
    """Canonical code up to weighted isomorphism."""
    return canonical_code(w.diagram, w.mult)


def values_from_multiplicities(w: WeightedDiagram) -> dict:
    d = w.diagram
    v = {}
    for p in d.order:
        v[p] = w.mult[p] + sum(v[q] for q in d.proximities[p])
    return v


def multiplicities_from_values(d: EnriquesDiagram, values: Mapping[str, int]) -> WeightedDiagram:
    nu = {p: values[p] - sum(values[q] for q in d.proximities[p]) for p in d.vertices}
    return WeightedDiagram(d, nu)


def excesses(w: WeightedDiagram) -> dict:
    d = w.diagram
    return {p: w.mult[p] - sum(w.mult[q] for q in d.proximate_to(p)) for p in d.vertices}


def is_consistent(w: WeightedDiagram) -> bool:
    return all(r >= 0 for r in excesses(w).values())


def degree(w: WeightedDiagram) -> int:
    return sum(m * (m + 1) // 2 for m in w.mult.values())


@dataclass(frozen=True)
class UnloadingReport:
    """Outcome of :func:`unload`.

    ``steps`` lists ``(vertex, excess_before, increment)`` in the order the
    steps were applied.
    """

    result: WeightedDiagram
    tame: bool
    steps: tuple = field(default=())


def unload(w: WeightedDiagram, order: Optional[Sequence[str]] = None, max_steps: Optional[int] = None) -> UnloadingReport:
    """Unload ``w`` to a consistent system of multiplicities.

    Each step takes the first vertex ``p`` (along ``order``) with negative
    excess ``rho_p`` and raises its value by ``ceil(-rho_p / (r_p + 1))``,
    where ``r_p`` is the number of vertices proximate to ``p``.  The result
    is tame when every step started from excess exactly ``-1``.

    Raises :class:`ResourceLimitError` after ``max_steps`` steps (default
    ``10 * n * max|nu|``).
    """
    d = w.diagram
    order = d.order if order is None else tuple(order)
    if not is_admissible(d, order):
        raise InadmissibleOrderingError(f"{list(order)} is not an admissible ordering")
    if max_steps is None:
        max_steps = 10 * len(d) * max([abs(m) for m in w.mult.values()] + [1])
    values = values_from_multiplicities(w)
    nu = dict(w.mult)
    steps = []
    tame = True
    while True:
        rho = {p: nu[p] - sum(nu[q] for q in d.proximate_to(p)) for p in order}
        bad = next((p for p in order if rho[p] < 0), None)
        if bad is None:
            break
        if len(steps) >= max_steps:
            raise ResourceLimitError(f"unloading did not finish within {max_steps} steps")
        r = len(d.proximate_to(bad))
        n = -(rho[bad] // (r + 1))  # ceil(-rho / (r + 1))
        steps.append((bad, rho[bad], n))
        tame = tame and rho[bad] == -1
        values[bad] += n
        nu[bad] += n
        for q in d.proximate_to(bad):
            nu[q] -= n
    return UnloadingReport(WeightedDiagram(d, nu), tame, tuple(steps))


@dataclass(frozen=True)
class Invariants:
    delta: int
    branches: int
    milnor: int
    degree: int


def invariants(w: WeightedDiagram) -> Invariants:
    """Genus discrepancy, branch count, Milnor number and degree.

    ``delta = sum nu(nu-1)/2``, ``branches`` is the total excess and
    ``milnor = 2 delta - branches + 1``.
    """
    rho = excesses(w)
    if any(r < 0 for r in rho.values()):
        raise PreconditionError("invariants need a consistent weighted diagram")
    delta = sum(m * (m - 1) // 2 for m in w.mult.values())
    branches = sum(rho.values())
    return Invariants(delta, branches, 2 * delta - branches + 1, degree(w))


def is_type(w: WeightedDiagram) -> bool:
    """Whether ``w`` is the diagram of the singular points of a reduced germ.

    Requires positive multiplicities, consistency, and no extremal free
    vertex of multiplicity one.
    """
    d = w.diagram
    if any(m < 1 for m in w.mult.values()) or not is_consistent(w):
        return False
    return not any(d.is_extremal(p) and not d.is_satellite(p) and w.mult[p] <= 1 for p in d.vertices)
