import pytest

from enriques import (
    EnriquesDiagram,
    WeightedDiagram,
    arnold,
    enumerate_diagrams,
    enumerate_types,
    find_isomorphism,
    one_exponent,
    ordinary,
    parse_diagram,
    serialize_diagram,
    tangent_smooth,
)
from enriques.fileformat import ParseError, dump_diagram, parse_raw

CUSP_TEXT = "v v1 - m=2\nv v2 v1 m=1\nv v3 v2 +v1 m=1\n"


def catalog():
    out = [arnold("A", k) for k in range(1, 13)]
    out += [arnold("D", k) for k in range(4, 13)]
    out += [arnold("E", k) for k in (6, 7, 8)]
    out += [ordinary(m) for m in range(2, 6)] + [tangent_smooth(m, k) for m in (2, 3) for k in (1, 2, 3)]
    out += [one_exponent(n, m) for n, m in [(2, 3), (3, 4), (3, 5), (4, 7), (5, 7), (5, 8)]]
    return [t.diagram for t in out]


def test_cusp_parses():
    w = parse_diagram("v r - m=2\nv a r m=1\nv b a +r m=1\n")
    assert isinstance(w, WeightedDiagram)
    assert w.diagram.proximities["b"] == ("a", "r")
    assert w.vector() == (2, 1, 1)


def test_comments_and_blank_lines():
    w = parse_diagram("# triple point\n\nv r - m=3   # the root\n")
    assert w.vector() == (3,)


def test_unweighted_file():
    d = parse_diagram("v r -\nv a r\n")
    assert isinstance(d, EnriquesDiagram)
    assert serialize_diagram(d) == "v v1 -\nv v2 v1\n"


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("v r -\nv a b", 2, "unknown parent 'b'"),
        ("v a r\nv r -", 1, "declared later"),
        ("v r -\nv r -", 2, "duplicate id"),
        ("v r -\nv s -", 2, "root redeclared"),
        ("v r -\nv a r\nv x r\nv b a +x", 4, "axiom 4"),
        ("v r -\nv a r\nv b a +r\nv c a +r", 4, "axiom 5"),
        ("v r - m=2\nv a r", 2, "missing multiplicity"),
        ("w r -", 1, "expected"),
        ("v r - m=x", 1, "unexpected token"),
        ("v r - +x", 1, "root cannot"),
    ],
)
def test_positional_errors(text, line, fragment):
    with pytest.raises(ParseError) as exc:
        parse_diagram(text)
    assert exc.value.line == line
    assert fragment in str(exc.value)


def test_weighted_flag():
    with pytest.raises(ParseError, match="missing multiplicity"):
        parse_diagram("v r -\nv a r\n", weighted=True)
    assert isinstance(parse_diagram("v r - m=2\n", weighted=False), EnriquesDiagram)


def test_raw_parse_keeps_bad_references():
    d, mult = parse_raw("v r - m=1\nv a zz\n")
    assert d.parent["a"] == "zz" and mult == {"r": 1}


def test_cusp_bytes():
    assert serialize_diagram(arnold("A", 2).diagram) == CUSP_TEXT
    assert serialize_diagram(parse_diagram("v r - m=2\nv a r m=1\nv b a +r m=1\n")) == CUSP_TEXT


def weighted_iso(a, b):
    return find_isomorphism(a.diagram, b.diagram, a.mult, b.mult) is not None


@pytest.mark.parametrize("w", catalog() + enumerate_types(12))
def test_roundtrip_weighted(w):
    text = serialize_diagram(w)
    back = parse_diagram(text)
    assert weighted_iso(back, w)
    assert serialize_diagram(back) == text


def test_roundtrip_unweighted():
    for n in range(1, 7):
        for d in enumerate_diagrams(n):
            text = serialize_diagram(d)
            assert "m=" not in text
            assert find_isomorphism(parse_diagram(text), d) is not None


def test_serialize_ignores_labels_and_order():
    w = arnold("D", 7).diagram
    d = w.diagram
    names = {v: f"node_{i}" for i, v in enumerate(reversed(d.vertices))}
    moved = WeightedDiagram(d.relabel(names), {names[v]: m for v, m in w.mult.items()})
    assert serialize_diagram(moved) == serialize_diagram(w)


def test_dump_keeps_ids():
    w = parse_diagram("v r - m=2\nv a r m=1\nv b a +r m=1\n")
    assert dump_diagram(w) == "v r - m=2\nv a r m=1\nv b a +r m=1\n"
