import csv
import os

from fullcond import EnumerationCaps, parse_document
from fullcond.report import write_report
from helpers import document_dict, incompatible_pair_3x3, trivariate_singletons


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_structure_only_report(tmp_path):
    doc = parse_document(document_dict(trivariate_singletons()))
    out_dir = str(tmp_path / "out")
    paths = write_report(doc, trivariate_singletons(), out_dir, EnumerationCaps())
    names = [os.path.basename(p) for p in paths]
    assert names == [
        "matrix.csv", "matrix.png", "circuit_histogram.csv", "circuit_histogram.png",
        "generators.csv", "summary.csv",
    ]
    for p in paths:
        assert os.path.getsize(p) > 0

    hist = read_csv(os.path.join(out_dir, "circuit_histogram.csv"))
    assert hist == [["length", "count"], ["4", "12"], ["6", "8"], ["8", "60"]]

    gens = read_csv(os.path.join(out_dir, "generators.csv"))
    assert gens[0] == ["degree", "binomial"]
    assert len(gens) == 81

    summary = dict(read_csv(os.path.join(out_dir, "summary.csv"))[1:])
    assert summary == {"cells": "8", "conditionals": "3", "circuits": "80", "generators": "80"}


def test_report_with_arrays_includes_values_and_verdict(tmp_path):
    prob, arrays = incompatible_pair_3x3()
    doc = parse_document(document_dict(prob, arrays))
    out_dir = str(tmp_path / "out")
    paths = write_report(doc, prob, out_dir, EnumerationCaps())
    names = [os.path.basename(p) for p in paths]
    assert "generator_values.png" in names

    gens = read_csv(os.path.join(out_dir, "generators.csv"))
    assert gens[0] == ["degree", "binomial", "value"]
    values = [row[2] for row in gens[1:]]
    assert values.count("1/108") == 1
    assert values.count("0") == len(values) - 1

    summary = dict(read_csv(os.path.join(out_dir, "summary.csv"))[1:])
    assert summary["compatible"] == "False"
    assert "degrees_of_freedom" not in summary
