import json

import pytest

from algebroidkit import catalog
from algebroidkit.io import (
    ExpressionError,
    SchemaError,
    corpus_names,
    corpus_path,
    dumps_algebroid,
    dumps_bivector,
    load_algebroid,
    load_definition,
    loads_algebroid,
    loads_bivector,
    loads_definition,
)
from algebroidkit.poisson import PoissonBivector

AFF1 = '{"coordinates": [], "frame": ["e1", "e2"], "anchor": [[], []], "brackets": {"1,2": "e2"}}'


def test_corpus_files_are_canonical_dumps_of_builders():
    builders = catalog.builders()
    assert sorted(builders) == corpus_names()
    for name, build in builders.items():
        obj = build()
        dump = dumps_bivector(obj) if isinstance(obj, PoissonBivector) else dumps_algebroid(obj)
        assert corpus_path(name).read_text() == dump


def test_round_trip_is_byte_identical():
    for name in corpus_names():
        text = corpus_path(name).read_text()
        kind, obj = loads_definition(text)
        again = dumps_bivector(obj) if kind == "bivector" else dumps_algebroid(obj)
        assert again == text


def test_minimal_file_loads():
    E = loads_algebroid(AFF1)
    assert E.n == 2 and E.m == 0
    assert E.frame_bracket(0, 1) == E.frame_vector(1)
    assert E.coframe == ("a1", "a2")
    text = dumps_algebroid(E)
    assert dumps_algebroid(loads_algebroid(text)) == text


def test_frame_name_keys_and_expressions():
    doc = {"coordinates": ["x", "y"], "frame": ["Dx", "Dy"], "anchor": [["1", "0"], ["0", "1"]],
           "brackets": {"Dx,Dy": "0"}, "metric": [["1", "0"], ["0", "x^2 + 1"]]}
    E = loads_algebroid(json.dumps(doc))
    assert E.metric[1][1] == E.ring("x^2 + 1")
    assert not E.frame_bracket(0, 1)


@pytest.mark.parametrize("text, path", [
    ('{"coordinates": [], "frame": ["e1", "e2"], "anchor": [[], []], '
     '"brackets": {"1,2": "e2", "2,1": "e2"}}', '$.brackets["2,1"]'),
    ('{"coordinates": [], "frame": ["e1", "e2"], "anchor": [[], []], '
     '"brackets": {"1,2": "e2", "1,2": "e1"}}', '$.brackets["1,2"]'),
    ('{"coordinates": [], "frame": ["e1", "e2"], "anchor": [[], []], '
     '"brackets": {"1,2": "e2", "e1,e2": "e1"}}', '$.brackets["e1,e2"]'),
    ('{"coordinates": ["x"], "frame": ["e1"], "anchor": [[1, 2]]}', "$.anchor[0]"),
    ('{"coordinates": ["x"], "frame": ["e1"], "anchor": [[true]]}', "$.anchor[0][0]"),
    ('{"coordinates": ["x"], "frame": ["e1"]}', "$"),
    ('{"coordinates": ["x"], "frame": ["e1"], "anchor": [["1"]], "extra": 1}', "$"),
    ('{"coordinates": [], "frame": ["e1", "e2"], "anchor": [[], []], "brackets": {"1,3": "e1"}}',
     '$.brackets["1,3"]'),
    ('{"coordinates": [], "frame": ["e1", "e2"], "anchor": [[], []], "brackets": {"1,2": "e1/\\\\e2"}}',
     '$.brackets["1,2"]'),
    ('{"coordinates": ["x"], "frame": ["e1"], "anchor": [["1"]], "metric": [["x", "1"]]}', "$.metric"),
    ('[1, 2]', "$"),
    ('{"coordinates": ["x"], "bivector": {"12": "x"}}', '$.bivector["12"]'),
])
def test_schema_errors_carry_field_paths(text, path):
    with pytest.raises(SchemaError) as info:
        loads_definition(text)
    assert info.value.path == path


def test_expression_errors_carry_position():
    with pytest.raises(ExpressionError) as info:
        loads_algebroid('{"coordinates": ["x"], "frame": ["e1"], "anchor": [["x +* 2"]]}')
    assert info.value.path == "$.anchor[0][0]"
    assert info.value.pos == 3
    with pytest.raises(ExpressionError) as info:
        loads_algebroid('{"coordinates": ["x"], "frame": ["e1"], "anchor": [["z"]]}')
    assert info.value.pos == 0


def test_bivector_files():
    P = loads_bivector('{"coordinates": ["x", "y", "z"], "bivector": {"12": "y", "2,3": "x"}}')
    assert P.P[0][1] == P.ring("y") and P.P[2][1] == P.ring("-x")
    text = dumps_bivector(P)
    assert json.loads(text)["bivector"] == {"12": "y", "13": "0", "23": "x"}
    assert dumps_bivector(loads_bivector(text)) == text


def test_load_by_path_and_name(tmp_path):
    f = tmp_path / "a.json"
    f.write_text(AFF1)
    assert load_algebroid(f).n == 2
    kind, _ = load_definition("poisson_xdxdy")
    assert kind == "bivector"
    with pytest.raises(FileNotFoundError):
        load_definition(tmp_path / "missing.json")
