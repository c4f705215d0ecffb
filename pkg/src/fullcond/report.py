"""Batch report: delimited tables plus rendered figures for one problem.

Writes into a directory: the incidence matrix (CSV + PNG), the circuit
length histogram (CSV + PNG), the generator list (CSV, with exact values per
generator when the document carries arrays), and a one-row summary CSV with
the verdict.  Figures are a lossy visual aid; every number that matters is
in the CSVs as an exact rational string.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .decide import check_compatibility_oracle, check_compatibility_theorem
from .document import Document
from .graph import build_graph, enumerate_induced_circuits
from .ideal import evaluate_binomial, generators
from .incidence import build_matrix
from .model import ValidatedProblem
from .rationals import format_rational


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _matrix_figure(matrix, path):
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.imshow(matrix.rows, cmap="Greys", interpolation="nearest", aspect="auto")
    ax.set_xlabel("columns (conditional, cell)")
    ax.set_ylabel("rows (cells, then margin tuples)")
    n_cells = sum(1 for r in matrix.row_labels if r.block == 0)
    ax.axhline(n_cells - 0.5, color="tab:red", linewidth=0.8)
    ax.set_title(f"incidence matrix {matrix.shape[0]}x{matrix.shape[1]}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _histogram_figure(histogram, path):
    lengths = [l for l, _ in histogram]
    counts = [c for _, c in histogram]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar([str(l) for l in lengths], counts, color="tab:blue")
    for x, c in enumerate(counts):
        ax.text(x, c, str(c), ha="center", va="bottom")
    ax.set_xlabel("circuit length (edges)")
    ax.set_ylabel("count")
    ax.set_title("induced circuits by length")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _values_figure(values, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(len(values)), [abs(float(v)) for v in values], color="tab:orange")
    ax.set_xlabel("generator (canonical order)")
    ax.set_ylabel("|value| (float rendering)")
    ax.set_title("generator evaluations")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(doc: Document, problem: ValidatedProblem, out_dir: str, caps) -> list:
    os.makedirs(out_dir, exist_ok=True)
    written = []

    def out(name):
        path = os.path.join(out_dir, name)
        written.append(path)
        return path

    matrix = build_matrix(problem)
    with open(out("matrix.csv"), "w", encoding="utf-8") as fh:
        fh.write(matrix.to_csv())
    _matrix_figure(matrix, out("matrix.png"))

    circuits = enumerate_induced_circuits(build_graph(problem), caps)
    _write_csv(out("circuit_histogram.csv"), ("length", "count"), circuits.histogram)
    _histogram_figure(circuits.histogram, out("circuit_histogram.png"))

    gen_set = generators(problem, caps)
    values = None
    if doc.arrays is not None:
        values = [evaluate_binomial(b, doc.arrays) for b in gen_set.binomials]
    rows = []
    for k, b in enumerate(gen_set.binomials):
        row = [b.degree, b.render(problem.m)]
        if values is not None:
            row.append(format_rational(values[k]))
        rows.append(row)
    header = ("degree", "binomial") + (("value",) if values is not None else ())
    _write_csv(out("generators.csv"), header, rows)
    if values is not None:
        _values_figure(values, out("generator_values.png"))

    summary = [
        ("cells", problem.cell_count),
        ("conditionals", problem.m),
        ("circuits", len(circuits)),
        ("generators", len(gen_set)),
    ]
    if doc.arrays is not None:
        theorem = check_compatibility_theorem(doc.arrays, problem, caps)
        oracle = check_compatibility_oracle(doc.arrays, problem)
        assert theorem.compatible == oracle.compatible
        summary.append(("compatible", theorem.compatible))
        if theorem.compatible:
            summary.append(("degrees_of_freedom", theorem.degrees_of_freedom))
    _write_csv(out("summary.csv"), ("key", "value"), summary)

    return written
