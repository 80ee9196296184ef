from __future__ import annotations

import json

import pytest

from l2alex.dsl import parse_presentation
from l2alex.errors import MalformedDiagram, NotCoprime, NotHomologyCircle
from l2alex.fox import LaurentPoly, classical_alexander
from l2alex.groups import RewrittenModel, TorusKnotGroup, Word
from l2alex.knots import (
    FIGURE_EIGHT,
    Crossing,
    KnotSpec,
    detect_torus,
    knot_input,
    load_crossing_table,
    model_for,
    parse_knot_spec,
    phi_from_abelianization,
    torus_presentation,
    wirtinger,
)


def test_crossing_relator():
    c = Crossing(over=0, inc=1, out=2, sign=1)
    a, b, d = Word.gen(0), Word.gen(1), Word.gen(2)
    assert c.relator() == d * (a * b * a.inverse()).inverse()


def test_wirtinger_drops_one_relator():
    p, phi = wirtinger(KnotSpec.table(FIGURE_EIGHT))
    assert len(p.generators) == 4 and len(p.relators) == 3
    assert phi.weights == (1, 1, 1, 1)
    assert p.kind == "Wirtinger"


@pytest.mark.parametrize(
    "crossings, arcs",
    [
        ([Crossing(0, 1, 1, 1), Crossing(1, 0, 1, 1)], 2),
        ([Crossing(0, 1, 0, 1), Crossing(1, 0, 1, 2)], 2),
        ([Crossing(0, 1, 0, 1)], 2),
    ],
)
def test_malformed_tables(crossings, arcs):
    with pytest.raises(MalformedDiagram):
        KnotSpec.table(crossings, arcs=arcs)


def test_torus_presentation_and_model():
    p, phi, model = torus_presentation(3, 5)
    assert p.format() == "< x, y | x^3 y^-5 >"
    assert phi.weights == (5, 3)
    assert isinstance(model, TorusKnotGroup)
    with pytest.raises(NotCoprime):
        KnotSpec.torus(3, 6)


def test_phi_from_abelianization():
    assert phi_from_abelianization(parse_presentation("<x,y | x^2 = y^3>")).weights == (3, 2)
    assert phi_from_abelianization(parse_presentation("<a,b | a b a = b a b>")).weights == (1, 1)
    assert phi_from_abelianization(wirtinger(KnotSpec.table(FIGURE_EIGHT))[0]).weights == (1, 1, 1, 1)
    with pytest.raises(NotHomologyCircle):
        phi_from_abelianization(parse_presentation("<a,b | a^2 b^2>"))
    with pytest.raises(NotHomologyCircle):
        phi_from_abelianization(parse_presentation("<a,b,c | a b a' b'>"))


def test_detect_torus_and_model_registration():
    assert detect_torus(parse_presentation("<x,y | x^2 = y^3>")) == (2, 3)
    assert detect_torus(parse_presentation("<x,y | x^2 y^2>")) is None
    assert isinstance(model_for(parse_presentation("<a,b | a b a = b a b>")), RewrittenModel)
    assert model_for(parse_presentation("<a,b | a b a b>")) is None


def test_knot_spec_strings(tmp_path):
    assert parse_knot_spec("torus:2,5").p == 2
    assert parse_knot_spec("trefoil").kind == "trefoil"
    path = tmp_path / "fig8.json"
    path.write_text(json.dumps({"crossings": [{"over": c.over, "in": c.inc, "out": c.out, "sign": c.sign} for c in FIGURE_EIGHT]}))
    spec = parse_knot_spec(f"file:{path}")
    pres, phi, model = knot_input(spec)
    assert model is None
    assert classical_alexander(pres, phi) == LaurentPoly({0: 1, 1: -3, 2: 1})
    with pytest.raises(MalformedDiagram):
        parse_knot_spec("torus:2")
    with pytest.raises(MalformedDiagram):
        parse_knot_spec("whitehead")


def test_crossing_table_bad_entry(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps([{"over": 0, "in": 1}]))
    with pytest.raises(MalformedDiagram):
        load_crossing_table(path)


def test_unknot_table():
    pres, phi = wirtinger(parse_knot_spec("unknot"))
    assert pres.deficiency == 1
    assert classical_alexander(pres, phi) == LaurentPoly({0: 1})
