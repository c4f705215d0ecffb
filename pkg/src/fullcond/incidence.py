"""The cell/margin incidence matrix of a problem and its structure checks.

Rows come in blocks: block 0 has one row per cell, and block i (1 <= i <= m)
has one row per B_i-tuple.  Columns are (conditional, cell) pairs, conditional
major.  A column holds exactly two 1s, one in block 0 at its cell's row and
one in block i at the row of the cell's B_i-projection, so the matrix is the
vertex-edge incidence matrix of a bipartite graph.  Everything downstream
(graph, binomials) shares these labels and this ordering.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ProbeCapExceeded
from .model import ValidatedProblem, restrict

#: column-count ceiling for the determinant sampling probe
DEFAULT_PROBE_CAP = 32


@dataclass(frozen=True, order=True)
class RowLabel:
    """block 0 carries a cell in ``key``; block i >= 1 carries a B_i-tuple."""

    block: int
    key: tuple

    def render(self) -> str:
        return f"{self.block}:{'.'.join(map(str, self.key))}"


@dataclass(frozen=True, order=True)
class ColLabel:
    """One per indeterminate: entry ``cell`` of conditional ``conditional``."""

    conditional: int
    cell: tuple

    def render(self) -> str:
        return f"{self.conditional}:{'.'.join(map(str, self.cell))}"


@dataclass(frozen=True)
class IncidenceMatrix:
    row_labels: tuple
    col_labels: tuple
    rows: tuple = field(repr=False)  # tuple of row tuples, ints

    @property
    def shape(self) -> tuple:
        return (len(self.row_labels), len(self.col_labels))

    def column_support(self, j: int) -> tuple:
        return tuple(r for r in range(len(self.rows)) if self.rows[r][j] != 0)

    def to_csv(self) -> str:
        lines = ["row," + ",".join(c.render() for c in self.col_labels)]
        for label, row in zip(self.row_labels, self.rows):
            lines.append(label.render() + "," + ",".join(str(v) for v in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "rows": [{"block": r.block, "key": list(r.key)} for r in self.row_labels],
            "cols": [
                {"conditional": c.conditional, "cell": list(c.cell)}
                for c in self.col_labels
            ],
            "columns": [list(self.column_support(j)) for j in range(len(self.col_labels))],
        }
        return json.dumps(doc, indent=2) + "\n"


def build_matrix(problem: ValidatedProblem) -> IncidenceMatrix:
    """Assemble the incidence matrix of a validated problem.

    Entry is 1 iff the row is the column cell's own block-0 row, or the row
    sits in the column's conditional block and its tuple is the column cell's
    B_i-projection.
    """
    cells = list(problem.cells())
    row_labels = [RowLabel(0, c) for c in cells]
    for i in range(1, problem.m + 1):
        row_labels.extend(RowLabel(i, t) for t in problem.b_tuples(i))
    col_labels = [
        ColLabel(i, c) for i in range(1, problem.m + 1) for c in cells
    ]

    row_index = {label: r for r, label in enumerate(row_labels)}
    rows = [[0] * len(col_labels) for _ in row_labels]
    for j, col in enumerate(col_labels):
        b = problem.conditioning_sets[col.conditional - 1]
        rows[row_index[RowLabel(0, col.cell)]][j] = 1
        rows[row_index[RowLabel(col.conditional, restrict(col.cell, b))]][j] = 1

    return IncidenceMatrix(
        row_labels=tuple(row_labels),
        col_labels=tuple(col_labels),
        rows=tuple(tuple(r) for r in rows),
    )


@dataclass(frozen=True)
class StructureReport:
    """Outcome of the two-ones-per-column bipartite structure check."""

    entries_binary: bool
    two_ones_per_column: bool
    split_across_blocks: bool
    failure: str = None

    @property
    def passed(self) -> bool:
        return self.entries_binary and self.two_ones_per_column and self.split_across_blocks


def verify_graphical_unimodular(matrix: IncidenceMatrix) -> StructureReport:
    """Check the structure that makes every nonzero maximal minor +/-1.

    Passes iff all entries are 0/1, every column has exactly two 1s, and the
    two 1s of each column straddle the block-0 / block->=1 row split.
    """
    for r, row in enumerate(matrix.rows):
        for j, v in enumerate(row):
            if v not in (0, 1):
                return StructureReport(
                    False, False, False,
                    f"entry at row {r}, column {j} is {v}, not 0/1",
                )

    for j in range(len(matrix.col_labels)):
        support = matrix.column_support(j)
        if len(support) != 2:
            return StructureReport(
                True, False, False,
                f"column {j} has {len(support)} ones, expected 2",
            )

    for j in range(len(matrix.col_labels)):
        blocks = sorted(matrix.row_labels[r].block for r in matrix.column_support(j))
        if not (blocks[0] == 0 and blocks[1] >= 1):
            return StructureReport(
                True, True, False,
                f"column {j} has its ones in row blocks {blocks}, "
                "expected one in block 0 and one in a margin block",
            )

    return StructureReport(True, True, True)


def bareiss_determinant(rows) -> int:
    """Exact determinant of a square integer matrix, fraction-free."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(row) for row in rows]
    assert all(len(row) == n for row in m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # Bareiss update: exact division, intermediate values stay small
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def matrix_rank(rows) -> int:
    """Rank over the rationals by exact Gaussian elimination."""
    work = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    cols = len(work[0]) if work else 0
    for j in range(cols):
        pivot = next((r for r in range(rank, len(work)) if work[r][j] != 0), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        pr = work[rank]
        for r in range(rank + 1, len(work)):
            if work[r][j] != 0:
                factor = work[r][j] / pr[j]
                work[r] = [a - factor * b for a, b in zip(work[r], pr)]
        rank += 1
        if rank == len(work):
            break
    return rank


@dataclass(frozen=True)
class ProbeReport:
    rank: int
    sample_count: int
    seed: int
    determinant_counts: tuple  # sorted ((abs value, count), ...)

    @property
    def passed(self) -> bool:
        return all(v in (0, 1) for v, _ in self.determinant_counts)


def minor_unimodularity_probe(
    matrix: IncidenceMatrix, sample_count: int, seed: int,
    probe_cap: int = DEFAULT_PROBE_CAP,
) -> ProbeReport:
    """Sample rank-sized square minors and collect their |det| values.

    A matrix passing verify_graphical_unimodular can only produce values in
    {0, 1} here; the probe exists to catch construction bugs, not to prove
    unimodularity (the structural check does that).  Deterministic per seed.
    """
    n_rows, n_cols = matrix.shape
    if n_cols > probe_cap:
        raise ProbeCapExceeded(
            f"{n_cols} columns exceeds the probe cap {probe_cap}"
        )
    rank = matrix_rank(matrix.rows)
    rng = random.Random(seed)
    counts = {}
    for _ in range(sample_count):
        rs = sorted(rng.sample(range(n_rows), rank))
        cs = sorted(rng.sample(range(n_cols), rank))
        sub = [[matrix.rows[r][c] for c in cs] for r in rs]
        value = abs(bareiss_determinant(sub))
        counts[value] = counts.get(value, 0) + 1
    return ProbeReport(
        rank=rank,
        sample_count=sample_count,
        seed=seed,
        determinant_counts=tuple(sorted(counts.items())),
    )
