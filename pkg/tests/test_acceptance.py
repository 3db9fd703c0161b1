"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line."""
import itertools
import json
import random
import time

import numpy as np
import pytest

from enriques import (
    EnriquesDiagram,
    OrderedDiagram,
    Verdict,
    WeightedDiagram,
    adjacency_verdict,
    admissible_orderings,
    arnold,
    certificate_json,
    compatibility_product,
    enumerate_diagrams,
    enumerate_types,
    find_isomorphism,
    invariants,
    is_consistent,
    linear_adjacent,
    matrix_compatible,
    necessary_adjacency,
    one_exponent,
    ordinary,
    parse_diagram,
    proximity_matrix,
    serialize_diagram,
    tangent_smooth,
    unload,
    validate_diagram,
    values_from_multiplicities,
    verify_certificate,
)
from enriques.cli import main as cli_main
from enriques.diagram import unit_lower_inverse

import _oracles as orc


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
        assert ok, detail

    return emit


def E(parent, prox):
    return EnriquesDiagram(parent, prox)


# one case per axiom plus structural errors: (diagram, expected labels)
VIOLATIONS = [
    (E({"r": None, "a": "r"}, {"r": ("a",), "a": ("r",)}), {1}),
    (E({"r": None, "a": "r", "b": "a"}, {"r": (), "a": ("r",), "b": ("r",)}), {2}),
    (E({"r": None, "a": "r", "b": "a", "c": "b"}, {"r": (), "a": ("r",), "b": ("a",), "c": ("b", "a", "r")}), {3}),
    (E({"r": None, "a": "r", "x": "r", "b": "a"}, {"r": (), "a": ("r",), "x": ("r",), "b": ("a", "x")}), {4}),
    (E({"r": None, "a": "r", "b": "a", "c": "a"}, {"r": (), "a": ("r",), "b": ("a", "r"), "c": ("a", "r")}), {5}),
    (E({"r": None, "a": "z"}, {"r": (), "a": ("z",)}), {"dangling-parent", "dangling-proximity"}),
    (E({"r": None, "a": "r"}, {"r": (), "a": ("r", "z")}), {"dangling-proximity"}),
    (E({"r": None, "a": "r"}, {"r": (), "a": ("r", "a")}), {"self-proximity"}),
    (E({}, {}), {"empty"}),
    (E({"a": "b", "b": "a"}, {"a": ("b",), "b": ("a",)}), {"no-root"}),
    (E({"r": None, "s": None}, {"r": (), "s": ()}), {"multiple-roots"}),
    (E({"r": None, "a": "b", "b": "a"}, {"r": (), "a": ("b",), "b": ("a",)}), {"cycle"}),
]


def labels(d):
    return {v.axiom if v.axiom else v.kind for v in validate_diagram(d)}


def test_criterion_01_axioms(report):
    t0 = time.perf_counter()
    accepted = all(validate_diagram(d) == [] for n in range(1, 7) for d in enumerate_diagrams(n))
    wrong = [i for i, (d, want) in enumerate(VIOLATIONS) if labels(d) != want]
    elapsed = time.perf_counter() - t0
    ok = accepted and not wrong and len(VIOLATIONS) == 12 and elapsed < 5
    report(1, ok, f"all diagrams n<=6 valid={accepted}, corpus mislabelled={wrong}, {elapsed:.2f}s (<5s)")


def test_criterion_02_linear_algebra(report):
    rng = random.Random(20261014)
    bad = 0
    for _ in range(1000):
        w = orc.random_weighted(rng, rng.randint(1, 10), -5, 9)
        order = orc.random_order(rng, w.diagram)
        P = proximity_matrix(OrderedDiagram(w.diagram, order)).astype(object)
        Pinv = np.array(unit_lower_inverse(P), dtype=object)
        v = values_from_multiplicities(w)
        vv = np.array([v[p] for p in order], dtype=object)
        nu = np.array(w.vector(order), dtype=object)
        bad += not ((P.dot(vv) == nu).all() and (Pinv.dot(nu) == vv).all())
    report(2, bad == 0, f"nu = P v and v = P^-1 nu exact on 1000 random cases, {bad} mismatches")


def test_criterion_03_unloading(report):
    rng = random.Random(3)
    inconsistent_out = not_idempotent = 0
    for _ in range(1000):
        w = orc.random_weighted(rng, rng.randint(1, 10), -5, 9)
        res = unload(w).result
        inconsistent_out += not is_consistent(res)
        again = unload(res)
        not_idempotent += again.result != res or again.steps != ()
    chain = EnriquesDiagram({"r": None, "a": "r"})
    rep = unload(WeightedDiagram.from_vector(chain, (1, 2)))
    worked = rep.result.vector() == (2, 1) and rep.tame is True
    ok = inconsistent_out == 0 and not_idempotent == 0 and worked
    report(3, ok, f"inconsistent results {inconsistent_out}/1000, non-idempotent {not_idempotent}, (1,2)->(2,1) tame={worked}")


def test_criterion_04_invariants(report):
    bad = [("A", k) for k in range(1, 13) if invariants(arnold("A", k).diagram).milnor != k]
    bad += [("D", k) for k in range(4, 13) if invariants(arnold("D", k).diagram).milnor != k]
    bad += [("E", k) for k in (6, 7, 8) if invariants(arnold("E", k).diagram).milnor != k]
    bad += [
        ("delta", m)
        for m in range(1, 7)
        if not invariants(arnold("A", 2 * m - 1).diagram).delta == m == invariants(arnold("A", 2 * m).diagram).delta
    ]
    report(4, not bad, f"Milnor numbers of A/D/E and delta of the A series exact, failures {bad}")


def test_criterion_05_known_adjacencies(report):
    A = lambda k: arnold("A", k).diagram  # noqa: E731
    D = lambda k: arnold("D", k).diagram  # noqa: E731
    T = lambda k: tangent_smooth(3, k).diagram  # noqa: E731
    pairs = [(f"A{k+1}>A{k}", A(k + 1), A(k)) for k in range(1, 9)]
    pairs += [(f"D{k+1}>D{k}", D(k + 1), D(k)) for k in range(4, 9)]
    pairs += [("E7>E6", arnold("E", 7).diagram, arnold("E", 6).diagram)]
    pairs += [("E8>E7", arnold("E", 8).diagram, arnold("E", 7).diagram)]
    pairs += [(f"T{k+1}>T{k}", T(k + 1), T(k)) for k in range(1, 6)]
    pairs += [("D4>A3", D(4), A(3))]
    failures, slowest = [], 0.0
    for name, x, y in pairs:
        t0 = time.perf_counter()
        ver = linear_adjacent(x, y)
        dt = time.perf_counter() - t0
        slowest = max(slowest, dt)
        if ver.kind is not Verdict.LINEAR or not ver.certificate.recheck() or dt >= 1:
            failures.append(name)
    ver = linear_adjacent(D(4), A(3))
    order = A(3).diagram.order
    trans = [ver.certificate.transported_values[p] for p in order]
    right = [ver.certificate.right_values[p] for p in order]
    ok = not failures and trans == [3, 4] and right == [2, 4]
    report(5, ok, f"{len(pairs)} LINEAR queries, failures {failures}, slowest {slowest:.3f}s, D4>A3 values {trans} vs {right}")


def test_criterion_06_negative_answers(report):
    A = lambda k: arnold("A", k).diagram  # noqa: E731
    ver = adjacency_verdict(A(2), A(3))
    cascade = ver.kind is Verdict.NOT_ADJACENT and ver.reason == "two-free-vertices"
    not_linear = [k for k in range(1, 9) if linear_adjacent(A(k), A(k + 1)).kind is not Verdict.NOT_LINEAR]
    # with the invariant prefilter off the search itself has to fail
    not_linear += [
        k for k in range(1, 9) if linear_adjacent(A(k), A(k + 1), prefilter=False).kind is not Verdict.NOT_LINEAR
    ]
    nec = necessary_adjacency(A(2), A(3)).status
    ok = cascade and not not_linear and nec == "FAIL"
    report(6, ok, f"(A2,A3) {ver.kind.value}/{ver.reason}, A_k to A_k+1 failures {not_linear}, necessary {nec}")


def test_criterion_07_semicontinuity_sweep(report, tmp_path, capsys):
    t0 = time.perf_counter()
    ts = enumerate_types(8)
    linear = drops = unverified = 0
    for i, (x, y) in enumerate(itertools.product(ts, repeat=2)):
        ver = linear_adjacent(x, y, prefilter=False)
        if ver.kind is not Verdict.LINEAR:
            continue
        linear += 1
        a, b = invariants(x), invariants(y)
        drops += a.delta < b.delta or a.milnor < b.milnor
        path = tmp_path / f"c{i}.json"
        path.write_text(json.dumps(certificate_json(ver, "linear-adj")))
        doc = json.loads(path.read_text())
        code = cli_main(["verify", str(path)])
        capsys.readouterr()
        unverified += not (verify_certificate(doc).ok and code == 0)
    elapsed = time.perf_counter() - t0
    ok = linear > 0 and drops == 0 and unverified == 0 and elapsed < 60
    report(
        7,
        ok,
        f"{len(ts)**2} pairs, {linear} LINEAR, {drops} invariant drops, {unverified} failed verify, {elapsed:.2f}s (<60s)",
    )


def test_criterion_08_matrix_criterion(report):
    chain = OrderedDiagram(EnriquesDiagram({"r": None, "a": "r", "b": "a"}), ("r", "a", "b"))
    cusp = OrderedDiagram(EnriquesDiagram.from_spec([("r", None), ("a", "r"), ("b", "a", "r")]), ("r", "a", "b"))
    forward = matrix_compatible(chain, cusp)
    product = compatibility_product(chain, cusp).tolist()
    backward = matrix_compatible(cusp, chain)
    identity_bad = sum(
        not matrix_compatible(od, od) for n in range(1, 6) for d in enumerate_diagrams(n) for od in admissible_orderings(d)
    )
    ok = forward and product == [[1, 0, 0], [0, 1, 0], [1, 0, 1]] and not backward and identity_bad == 0
    report(8, ok, f"chain->cusp {forward} with {product}, reverse {backward}, identity failures {identity_bad}")


def test_criterion_09_enumeration_oracles(report):
    counts = [len(enumerate_diagrams(n)) for n in range(1, 6)]
    brute = [len(orc.brute_force_classes(n)) for n in range(1, 6)]
    matched = True
    for n in range(1, 6):
        lib = enumerate_diagrams(n)
        for parent, prox in orc.brute_force_classes(n):
            d = orc.to_diagram(parent, prox)
            matched &= sum(find_isomorphism(d, e) is not None for e in lib) == 1
    six = enumerate_types(6)
    expected = [arnold("A", 1), arnold("A", 2), arnold("A", 3), arnold("D", 4)]
    types_ok = len(six) == 4 and all(
        sum(find_isomorphism(w.diagram, t.diagram.diagram, w.mult, t.diagram.mult) is not None for w in six) == 1
        for t in expected
    )
    ok = counts[:3] == [1, 1, 3] and counts == brute and matched and types_ok
    report(9, ok, f"library {counts} vs brute force {brute}, one-to-one={matched}, types(6)={{A1,A2,A3,D4}} {types_ok}")


def test_criterion_10_format_stability(report):
    members = [arnold("A", k) for k in range(1, 13)] + [arnold("D", k) for k in range(4, 13)]
    members += [arnold("E", k) for k in (6, 7, 8)] + [ordinary(m) for m in range(2, 7)]
    members += [tangent_smooth(m, k) for m in range(2, 5) for k in range(1, 5)]
    members += [one_exponent(n, m) for m in range(3, 12) for n in range(2, m) if np.gcd(n, m) == 1]
    pool = [t.diagram for t in members] + enumerate_types(12)
    bad = 0
    for w in pool:
        back = parse_diagram(serialize_diagram(w))
        bad += find_isomorphism(back.diagram, w.diagram, back.mult, w.mult) is None
    cusp = serialize_diagram(arnold("A", 2).diagram) == "v v1 - m=2\nv v2 v1 m=1\nv v3 v2 +v1 m=1\n"
    report(10, bad == 0 and cusp, f"{len(pool)} catalog diagrams roundtrip, {bad} failures, cusp bytes exact={cusp}")
