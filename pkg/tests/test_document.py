import json
from fractions import Fraction

import pytest

from fullcond import DocumentError, InvalidInputError, load_document, parse_document


def doc_2x2(with_arrays=True, caps=None):
    doc = {
        "d": [2, 2],
        "conditionals": [
            {"B": [2]},
            {"B": [1]},
        ],
    }
    if with_arrays:
        doc["conditionals"][0]["array"] = [["1/2", "1/6"], ["1/2", "5/6"]]
        doc["conditionals"][1]["array"] = [["1/2", "1/2"], ["1/6", "5/6"]]
    if caps is not None:
        doc["caps"] = caps
    return doc


def test_parse_full_document():
    doc = parse_document(doc_2x2())
    assert doc.spec.d == (2, 2)
    assert doc.spec.conditioning_sets == ((2,), (1,))
    assert doc.max_circuits is None and doc.max_length is None
    assert doc.arrays[0].index == 1
    assert doc.arrays[0].entries[(2, 2)] == Fraction(5, 6)
    assert doc.arrays[1].entries[(2, 1)] == Fraction(1, 6)


def test_parse_accepts_json_text_and_bytes():
    text = json.dumps(doc_2x2())
    assert parse_document(text).spec.d == (2, 2)
    assert parse_document(text.encode()).spec.d == (2, 2)


def test_structure_only_document_has_no_arrays():
    doc = parse_document(doc_2x2(with_arrays=False))
    assert doc.arrays is None


def test_arrays_are_all_or_none():
    raw = doc_2x2()
    del raw["conditionals"][1]["array"]
    with pytest.raises(DocumentError):
        parse_document(raw)


def test_caps_are_parsed_and_validated():
    doc = parse_document(doc_2x2(caps={"maxCircuits": 100, "maxLength": 8}))
    assert doc.max_circuits == 100 and doc.max_length == 8
    for bad in ({"maxCircuits": 0}, {"maxLength": 2}, {"maxCircuits": True},
                {"maxCircuits": "many"}, {"budget": 5}):
        with pytest.raises(DocumentError):
            parse_document(doc_2x2(caps=bad))
    with pytest.raises(DocumentError):
        raw = doc_2x2()
        raw["caps"] = [1, 2]
        parse_document(raw)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda r: r.update(extra=1),
        lambda r: r.update(d=[]),
        lambda r: r.update(d=[2, 0]),
        lambda r: r.update(d=[2, True]),
        lambda r: r.update(d="22"),
        lambda r: r.update(conditionals=[]),
        lambda r: r.update(conditionals="nope"),
        lambda r: r["conditionals"].append("nope"),
        lambda r: r["conditionals"][0].update(B="2"),
        lambda r: r["conditionals"][0].update(B=[True]),
        lambda r: r["conditionals"][0].update(label="C"),
        lambda r: r["conditionals"][0].update(array=[["0.5", "1/2"], ["1/2", "1/2"]]),
        lambda r: r["conditionals"][0].update(array=[["1/2"], ["1/2"]]),
    ],
)
def test_malformed_documents_are_rejected(mutate):
    # most problems raise DocumentError; a bad array shape surfaces as
    # ShapeMismatch; both are InvalidInputError (CLI exit code 2)
    raw = doc_2x2()
    mutate(raw)
    with pytest.raises(InvalidInputError):
        parse_document(raw)


def test_not_json_or_not_an_object():
    with pytest.raises(DocumentError):
        parse_document("{not json")
    with pytest.raises(DocumentError):
        parse_document("[1, 2, 3]")


def test_load_document_reads_files_and_reports_missing_ones(tmp_path):
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc_2x2()))
    assert load_document(str(path)).spec.d == (2, 2)
    with pytest.raises(DocumentError):
        load_document(str(tmp_path / "absent.json"))
