"""Named singularity types and exhaustive enumeration of types by degree."""
from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence

from .diagram import EnriquesDiagram
from .errors import PreconditionError, ResourceLimitError
from .weights import WeightedDiagram, degree, invariants, is_type, weighted_code

__all__ = [
    "NamedType",
    "arnold",
    "ordinary",
    "tangent_smooth",
    "one_exponent",
    "standard",
    "named_type",
    "enumerate_types",
    "DEFAULT_DEGREE_CAP",
]

DEFAULT_DEGREE_CAP = 12


@dataclass(frozen=True)
class NamedType:
    family: str
    params: tuple
    diagram: WeightedDiagram

    @property
    def name(self) -> str:
        return f"{self.family}{'_'.join(map(str, self.params))}"


def _chain(mults: Sequence[int], sat: Optional[dict] = None) -> WeightedDiagram:
    """A chain p1 -> p2 -> ... with ``sat[i] = j`` making p_i proximate to p_j too."""
    sat = sat or {}
    rows = []
    for i in range(1, len(mults) + 1):
        parent = None if i == 1 else f"p{i - 1}"
        second = f"p{sat[i]}" if i in sat else None
        rows.append((f"p{i}", parent, second))
    d = EnriquesDiagram.from_spec(rows)
    return WeightedDiagram(d, {f"p{i}": m for i, m in enumerate(mults, 1)})


def _euclid_blocks(n: int, m: int) -> list:
    """Multiplicity blocks of the branch y^n = x^m: [(mult, count), ...]."""
    blocks = []
    a, b = m, n
    while b:
        q, r = divmod(a, b)
        blocks.append((b, q))
        a, b = b, r
    return blocks


def _one_exponent_diagram(n: int, m: int) -> WeightedDiagram:
    blocks = _euclid_blocks(n, m)
    mults, sat = [], {}
    last = []  # index of the last vertex of each block
    for j, (mult, count) in enumerate(blocks):
        for k in range(count):
            i = len(mults) + 1
            if k == 0 and j >= 2:
                sat[i] = last[j - 2]
            elif k > 0 and j >= 1:
                sat[i] = last[j - 1]
            mults.append(mult)
        last.append(len(mults))
    return _chain(mults, sat)


def _checked(family: str, params: tuple, w: WeightedDiagram, milnor: Optional[int] = None) -> NamedType:
    if not is_type(w):
        raise AssertionError(f"{family}{params}: constructed diagram is not a type")
    if milnor is not None and invariants(w).milnor != milnor:
        raise AssertionError(
            f"{family}{params}: Milnor number {invariants(w).milnor} differs from the expected {milnor}"
        )
    return NamedType(family, params, w)


def arnold(family: str, k: int) -> NamedType:
    """Simple singularities ``A_k`` (k >= 1), ``D_k`` (k >= 4), ``E_6, E_7, E_8``.

    Every constructed diagram is checked against the classical Milnor
    number ``k``.
    """
    family = family.upper()
    if family == "A":
        if k < 1:
            raise PreconditionError("A_k needs k >= 1")
        m, odd = divmod(k + 1, 2)
        if odd == 0:  # k = 2m - 1
            w = _chain([2] * m)
        else:  # k = 2m
            m = k // 2
            w = _chain([2] * m + [1, 1], {m + 2: m})
    elif family == "D":
        if k < 4:
            raise PreconditionError("D_k needs k >= 4")
        m = k // 2
        if k % 2 == 0:
            w = _chain([3] + [2] * (m - 2))
        else:
            head = [3] + [2] * (m - 2)
            w = _chain(head + [1, 1], {len(head) + 2: len(head)})
    elif family == "E":
        if k == 6:
            w = _one_exponent_diagram(3, 4)
        elif k == 7:
            w = _chain([3, 2, 1], {3: 1})
        elif k == 8:
            w = _one_exponent_diagram(3, 5)
        else:
            raise PreconditionError("E_k needs k in {6, 7, 8}")
    else:
        raise PreconditionError(f"unknown Arnold family {family!r}")
    return _checked(family, (k,), w, milnor=k)


def ordinary(m: int) -> NamedType:
    """Ordinary m-fold point: m transversal smooth branches."""
    if m < 2:
        raise PreconditionError("ordinary point needs m >= 2")
    return _checked("ORDINARY", (m,), _chain([m]), milnor=(m - 1) ** 2)


def tangent_smooth(m: int, k: int) -> NamedType:
    """``m`` smooth branches with pairwise intersection multiplicity ``k``."""
    if m < 2 or k < 1:
        raise PreconditionError("tangent_smooth needs m >= 2 and k >= 1")
    return _checked("TANGENT_SMOOTH", (m, k), _chain([m] * k), milnor=k * m * (m - 1) - m + 1)


def one_exponent(n: int, m: int) -> NamedType:
    """Irreducible branch ``y^n = x^m`` with a single characteristic exponent ``m/n``."""
    if not (2 <= n < m) or gcd(n, m) != 1:
        raise PreconditionError("one_exponent needs 2 <= n < m with gcd(n, m) = 1")
    w = _one_exponent_diagram(n, m)
    t = _checked("ONE_EXPONENT", (n, m), w, milnor=(n - 1) * (m - 1))
    if invariants(w).branches != 1:
        raise AssertionError(f"one_exponent({n}, {m}) is not unibranched")
    return t


def standard(family: str, *params: int) -> NamedType:
    family = family.upper()
    if family in ("ORDINARY", "O", "OM"):
        return ordinary(*params)
    if family in ("TANGENT_SMOOTH", "T"):
        return tangent_smooth(*params)
    if family in ("ONE_EXPONENT", "B"):
        return one_exponent(*params)
    raise PreconditionError(f"unknown family {family!r}")


_SPEC = re.compile(r"^(A|D|E|Om|O|T|B):(\d+)(?::(\d+))?$")


def named_type(spec: str) -> NamedType:
    """Parse ``A:k``, ``D:k``, ``E:k``, ``Om:m`` (or ``O:m``), ``T:m:k``, ``B:n:m``."""
    match = _SPEC.match(spec.strip())
    if not match:
        raise PreconditionError(f"cannot parse named type {spec!r}")
    fam, a, b = match.group(1), int(match.group(2)), match.group(3)
    two = fam in ("T", "B")
    if two != (b is not None):
        raise PreconditionError(f"wrong number of parameters in {spec!r}")
    if fam in ("A", "D", "E"):
        return arnold(fam, a)
    return standard(fam, a, *([int(b)] if b else []))


# -- enumeration -------------------------------------------------------------

def _weighted_extensions(w: WeightedDiagram, new_id: str, budget: int):
    """Consistent positive one-vertex extensions of ``w`` within degree ``budget``."""
    d = w.diagram
    rho = {p: w.mult[p] - sum(w.mult[q] for q in d.proximate_to(p)) for p in d.vertices}
    for u in d.vertices:
        targets = [(u,)] + [
            (u, t)
            for t in d.proximities[u]
            if not any(t in d.proximities[x] and u in d.proximities[x] for x in d.vertices)
        ]
        for prox in targets:
            room = min(rho[t] for t in prox)
            m = 1
            while m <= room and m * (m + 1) // 2 <= budget:
                parent = dict(d.parent)
                parent[new_id] = u
                proxs = dict(d.proximities)
                proxs[new_id] = prox
                mult = dict(w.mult)
                mult[new_id] = m
                yield WeightedDiagram(EnriquesDiagram(parent, proxs), mult)
                m += 1


def enumerate_types(max_degree: int, cap: int = DEFAULT_DEGREE_CAP) -> list:
    """Every type of degree at most ``max_degree``, one per isomorphism class.

    Grows consistent diagrams with positive multiplicities one extremal
    vertex at a time (removing an extremal vertex keeps a diagram
    consistent, so this reaches everything), deduplicates by weighted
    canonical code and keeps the types.  Sorted by weighted canonical code.
    """
    if max_degree < 3:
        raise PreconditionError("max_degree must be at least 3")
    if max_degree > cap:
        raise ResourceLimitError(f"enumerate_types({max_degree}) exceeds the degree cap {cap}")
    level = {}
    for m in range(1, max_degree + 1):
        if m * (m + 1) // 2 <= max_degree:
            w = WeightedDiagram(EnriquesDiagram({"p1": None}), {"p1": m})
            level[weighted_code(w)] = w
    found = {}
    k = 1
    while level:
        for code, w in level.items():
            if is_type(w):
                found[code] = w
        k += 1
        nxt = {}
        for w in level.values():
            for e in _weighted_extensions(w, f"p{k}", max_degree - degree(w)):
                nxt.setdefault(weighted_code(e), e)
        level = nxt
    return [found[c] for c in sorted(found)]
