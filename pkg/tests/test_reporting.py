import csv
import io
import json
import math

import numpy as np

from src.reporting import CONSTANT_COLUMNS, columns_for, format_cell, make_json_safe, render_csv, render_json, \
    write_output


def test_format_cell():
    assert format_cell(1 / 3) == "0.333333333333"
    assert format_cell(math.inf) == "inf"
    assert format_cell(np.float64(2.0)) == "2"
    assert format_cell(True) == "true"
    assert format_cell(None) == ""
    assert format_cell(7) == "7"


def test_make_json_safe():
    data = make_json_safe({"a": np.int64(3), "b": [math.inf, 1.5], "c": np.array([1, 2]), 4: 1j})
    assert data == {"a": 3, "b": ["inf", 1.5], "c": [1, 2], "4": [0.0, 1.0]}
    json.dumps(data)


def test_columns():
    row = {c: 0 for c in reversed(CONSTANT_COLUMNS)}
    assert columns_for([row]) == list(CONSTANT_COLUMNS)
    assert columns_for([{"name": 1, "value": 2}]) == ["name", "value"]
    assert columns_for([]) == list(CONSTANT_COLUMNS)


def test_render_csv_header_and_body():
    text = render_csv([{"name": "kappa", "value": 2.2090}], {"budget": {"seed": 0}}, {"cardinality": 3})
    lines = text.splitlines()
    assert lines[0] == '# config: {"budget": {"seed": 0}}'
    assert lines[1] == "# cardinality: 3"
    body = list(csv.reader(io.StringIO("\n".join(lines[2:]))))
    assert body == [["name", "value"], ["kappa", "2.209"]]


def test_render_json_document():
    document = json.loads(render_json([{"x": 1}], {"seed": 0}, [{"check": "c"}], extra={"chain": []}))
    assert document["rows"] == [{"x": 1}]
    assert document["failures"] == [{"check": "c"}]
    assert "system" in document
    assert document["chain"] == []


def test_write_output(tmp_path):
    target = tmp_path / "nested" / "out.csv"
    write_output("a,b\n", target)
    assert target.read_text() == "a,b\n"
    stream = io.StringIO()
    write_output("x", None, stream)
    assert stream.getvalue() == "x"
