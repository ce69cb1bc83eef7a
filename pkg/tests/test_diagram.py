import json

import pytest

from foxpalette.diagram import (DiagramError, PDSyntaxError, UNKNOT, from_json, load_diagram,
                                parse_pd, state_hash)

TREFOIL = "X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)"


@pytest.mark.parametrize("name,n", [("trefoil", 3), ("figure8", 4), ("6_2", 6), ("unknot", 1)])
def test_fixtures_euler(name, n, request):
    D = request.getfixturevalue({"6_2": "six_two", "unknot": "kink"}.get(name, name))
    assert len(D) == n
    assert len(D.faces()) == n + 2
    assert sum(len(f) for f in D.faces()) == 4 * n or n == 0


def test_arcs_trefoil(trefoil):
    arcs, inc = trefoil.arcs()
    assert len(arcs) == 3
    assert [(i.over, i.under) for i in inc] == [(2, (0, 1)), (0, (1, 2)), (1, (2, 0))]
    # every edge belongs to exactly one arc
    edges = [e for a in arcs for e in a.edges]
    assert sorted(edges) == sorted(set(edges)) == sorted(trefoil.ends)


def test_arcs_figure8(figure8):
    assert len(figure8.arcs()[0]) == 4


def test_unknot_kink(kink):
    assert len(kink.arcs()[0]) == 1


def test_syntax_variants():
    a = parse_pd(TREFOIL)
    b = parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]")
    c = parse_pd("# comment\n" + TREFOIL.replace(";", "\n"))
    assert a.to_pd() == b.to_pd() == c.to_pd()


@pytest.mark.parametrize("bad,exc", [
    ("X(1,2,3)", PDSyntaxError),
    ("foo", PDSyntaxError),
    ("X(1,4,2,5);X(3,6,4,1);X(5,2,6,7)", DiagramError),
    ("X(1,2,1,2)", DiagramError),
    (TREFOIL + ";" + "X(7,10,8,11);X(9,12,10,7);X(11,8,12,9)", DiagramError),
])
def test_rejects(bad, exc):
    with pytest.raises(exc):
        parse_pd(bad)


def test_multiple_components_message():
    with pytest.raises(DiagramError, match="component"):
        parse_pd(TREFOIL + ";X(7,10,8,11);X(9,12,10,7);X(11,8,12,9)")


def test_empty_is_unknot():
    assert len(parse_pd("")) == 0
    assert len(UNKNOT) == 0


def test_json_roundtrip(six_two):
    D2 = from_json(json.loads(json.dumps(six_two.to_json())))
    assert D2.to_pd() == six_two.to_pd()
    assert load_diagram(json.dumps(six_two.to_json())).to_pd() == six_two.to_pd()


def test_hash_relabel_invariant(six_two):
    for start in sorted(six_two.ends)[:4]:
        R, _ = six_two.relabeled(start)
        assert state_hash(R) == state_hash(six_two)


def test_hash_distinguishes(trefoil, figure8):
    assert state_hash(trefoil) != state_hash(figure8)
    assert len(state_hash(trefoil)) == 16


def test_traversal_visits_each_edge_once(six_two):
    t = list(six_two.traversal(min(six_two.ends)))
    assert len(t) == 2 * len(six_two)
