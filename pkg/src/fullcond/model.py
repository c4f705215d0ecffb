"""Problem instances, conditional arrays, and the elementary checks.

A problem is a dimension vector d = (d_1, ..., d_n) together with an ordered
family of conditioning sets B_1, ..., B_m (1-based variable indices).  The
i-th conditional array gives p(x_{A_i} | x_{B_i}) with A_i the complement of
B_i, so every array is indexed by full cells (j_1, ..., j_n), 1 <= j_k <= d_k.

Cells are plain tuples and are ordered lexicographically; every row, column
and vertex ordering elsewhere in the package derives from that order.  All
types here are immutable after construction and safe to share across threads;
the operations are pure functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    ContainmentViolation,
    DuplicateConditioningSet,
    EmptyLeftSide,
    InvalidProblem,
    ShapeMismatch,
    SizeCapExceeded,
)

Cell = tuple  # multi-index (j_1, ..., j_n), 1-based

#: default bound on m * d_1 * ... * d_n, the number of array entries in play
DEFAULT_CELL_CAP = 100_000


def iter_cells(d):
    """All cells of a d_1 x ... x d_n table in lexicographic order."""
    return itertools.product(*(range(1, dk + 1) for dk in d))


def restrict(cell: Cell, subset) -> tuple:
    """Project a cell onto the given (ascending, 1-based) variable subset."""
    return tuple(cell[k - 1] for k in subset)


@dataclass(frozen=True)
class ProblemSpec:
    """Raw problem statement: dimensions and conditioning sets, as given."""

    d: tuple
    conditioning_sets: tuple

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def m(self) -> int:
        return len(self.conditioning_sets)


@dataclass(frozen=True)
class ValidatedProblem:
    """A problem whose conditioning family passed antichain validation.

    Existence of an instance certifies: the B_i are pairwise distinct and
    pairwise incomparable under inclusion, and every left side A_i = [n] \\ B_i
    is nonempty.
    """

    d: tuple
    conditioning_sets: tuple   # each a strictly increasing tuple of 1-based indices
    left_sides: tuple          # A_i, complements, same order
    cell_count: int
    slice_counts: tuple        # D_{B_i} = prod of d_k over k in B_i

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def m(self) -> int:
        return len(self.conditioning_sets)

    def cells(self):
        return iter_cells(self.d)

    def b_tuples(self, i: int):
        """All B_i-tuples in lexicographic order (i is 1-based)."""
        b = self.conditioning_sets[i - 1]
        return itertools.product(*(range(1, self.d[k - 1] + 1) for k in b))

    def slice_cells(self, i: int, b_tuple: tuple):
        """All cells whose B_i-projection equals the given tuple."""
        b = self.conditioning_sets[i - 1]
        pinned = dict(zip(b, b_tuple))
        axes = [
            (pinned[k],) if k in pinned else tuple(range(1, self.d[k - 1] + 1))
            for k in range(1, self.n + 1)
        ]
        return itertools.product(*axes)


def validate_problem(spec: ProblemSpec, cell_cap: int = DEFAULT_CELL_CAP) -> ValidatedProblem:
    """Check the conditioning family and precompute exact instance sizes.

    Containments among the B_i are rejected outright, not reduced away;
    nested families describe a smaller equivalent problem the caller should
    state directly.
    """
    d = tuple(spec.d)
    if len(d) < 1:
        raise InvalidProblem("need at least one variable")
    if any(not isinstance(dk, int) or dk < 1 for dk in d):
        raise InvalidProblem(f"every dimension must be a positive integer, got {d}")
    sets = tuple(tuple(b) for b in spec.conditioning_sets)
    if len(sets) < 1:
        raise InvalidProblem("need at least one conditional")
    n = len(d)
    for b in sets:
        if any(not isinstance(k, int) or k < 1 or k > n for k in b):
            raise InvalidProblem(f"conditioning set {b} has indices outside 1..{n}")
        if any(b[j] >= b[j + 1] for j in range(len(b) - 1)):
            raise InvalidProblem(f"conditioning set {b} must be strictly increasing")

    for i, b in enumerate(sets):
        if len(b) == n:
            raise EmptyLeftSide(
                f"conditional {i + 1} conditions on every variable; nothing is left of the bar"
            )
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            bi, bj = set(sets[i]), set(sets[j])
            if bi == bj:
                raise DuplicateConditioningSet(
                    f"conditionals {i + 1} and {j + 1} share the conditioning set {sets[i]}"
                )
            if bi < bj or bj < bi:
                raise ContainmentViolation(
                    f"conditioning sets {sets[i]} and {sets[j]} are nested; "
                    "the family must be an antichain"
                )

    cell_count = 1
    for dk in d:
        cell_count *= dk
    if len(sets) * cell_count > cell_cap:
        raise SizeCapExceeded(
            f"m * cellCount = {len(sets) * cell_count} exceeds the cap {cell_cap}"
        )

    left_sides = tuple(tuple(k for k in range(1, n + 1) if k not in b) for b in sets)
    slice_counts = []
    for b in sets:
        prod = 1
        for k in b:
            prod *= d[k - 1]
        slice_counts.append(prod)
    return ValidatedProblem(
        d=d,
        conditioning_sets=sets,
        left_sides=left_sides,
        cell_count=cell_count,
        slice_counts=tuple(slice_counts),
    )


@dataclass
class ConditionalArray:
    """One full conditional, dense over all cells (zeros stored explicitly).

    ``degenerate_slices`` lists B_i-tuples whose whole slice was zero in the
    joint this array was derived from, if any; such an array can never pass
    the unit-margin condition, but deriving it is not an error.
    """

    index: int                       # 1-based position in the conditioning family
    entries: dict                    # Cell -> Fraction
    degenerate_slices: tuple = ()

    def value(self, cell: Cell) -> Fraction:
        return self.entries[cell]


@dataclass
class JointDistribution:
    """A dense joint probability table with exact entries summing to one."""

    d: tuple
    entries: dict  # Cell -> Fraction

    def __post_init__(self):
        cells = list(iter_cells(self.d))
        if set(self.entries) != set(cells):
            raise ShapeMismatch("joint distribution is not dense over the cells of d")
        if any(v < 0 for v in self.entries.values()):
            raise ShapeMismatch("joint distribution has a negative entry")
        if sum(self.entries.values()) != 1:
            raise ShapeMismatch("joint distribution entries do not sum to 1")


def _nested_values(nested, d):
    """Yield (cell, value) from a nested list shaped like d, lexicographically."""
    def walk(node, prefix):
        depth = len(prefix)
        if depth == len(d):
            yield tuple(prefix), node
            return
        if not isinstance(node, list) or len(node) != d[depth]:
            raise ShapeMismatch(
                f"nested array level {depth + 1} should be a list of length {d[depth]}"
            )
        for j, sub in enumerate(node, start=1):
            yield from walk(sub, prefix + [j])

    yield from walk(nested, [])


def conditional_from_nested(index: int, nested, d) -> ConditionalArray:
    """Build a dense ConditionalArray from nested lists of Fractions/ints."""
    entries = {cell: Fraction(v) for cell, v in _nested_values(nested, d)}
    return ConditionalArray(index=index, entries=entries)


def joint_from_nested(nested, d) -> JointDistribution:
    entries = {cell: Fraction(v) for cell, v in _nested_values(nested, d)}
    return JointDistribution(d=tuple(d), entries=entries)


@dataclass(frozen=True)
class ConditionViolation:
    condition: int        # 1, 2 or 3
    conditional: int      # i, 1-based
    location: tuple       # a cell for conditions 1 and 2, a B_i-tuple for 3


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of the three elementary compatibility conditions.

    (1) all entries nonnegative; (2) the zero pattern is the same in every
    array; (3) each array sums to exactly 1 over its left-side coordinates,
    for every value of the conditioning tuple.
    """

    nonnegative: bool
    common_support: bool
    unit_margins: bool
    violations: tuple = field(default=())

    @property
    def all_passed(self) -> bool:
        return self.nonnegative and self.common_support and self.unit_margins

    @property
    def first_violation(self):
        return self.violations[0] if self.violations else None


def _check_shapes(arrays, problem: ValidatedProblem):
    if len(arrays) != problem.m:
        raise ShapeMismatch(f"expected {problem.m} arrays, got {len(arrays)}")
    cells = set(problem.cells())
    for pos, arr in enumerate(arrays, start=1):
        if arr.index != pos:
            raise ShapeMismatch(f"array at position {pos} carries index {arr.index}")
        if set(arr.entries) != cells:
            raise ShapeMismatch(f"array {pos} is not dense over the cells of d")


def check_conditions_123(arrays, problem: ValidatedProblem) -> ConditionReport:
    """Run conditions (1)-(3) and report the first violation of each."""
    _check_shapes(arrays, problem)
    cells = list(problem.cells())
    violations = []

    nonneg = True
    for arr in arrays:
        for cell in cells:
            if arr.entries[cell] < 0:
                violations.append(ConditionViolation(1, arr.index, cell))
                nonneg = False
                break
        if not nonneg:
            break

    support_ok = True
    for cell in cells:
        statuses = [arr.entries[cell] == 0 for arr in arrays]
        if any(statuses) and not all(statuses):
            bad = next(i for i, s in enumerate(statuses, start=1) if s != statuses[0])
            violations.append(ConditionViolation(2, bad, cell))
            support_ok = False
            break

    margins_ok = True
    for arr in arrays:
        for t in problem.b_tuples(arr.index):
            total = sum(arr.entries[c] for c in problem.slice_cells(arr.index, t))
            if total != 1:
                violations.append(ConditionViolation(3, arr.index, t))
                margins_ok = False
                break
        if not margins_ok:
            break

    violations.sort(key=lambda v: v.condition)
    return ConditionReport(nonneg, support_ok, margins_ok, tuple(violations))


def conditionals_from_joint(joint: JointDistribution, problem: ValidatedProblem):
    """Derive every full conditional of a joint by exact division.

    A slice of the joint that is entirely zero leaves the corresponding
    conditional slice zero and records the slice as degenerate; deciding what
    that means is the checker's job, so this function is total.
    """
    if tuple(joint.d) != problem.d:
        raise ShapeMismatch("joint dimensions do not match the problem")
    arrays = []
    for i in range(1, problem.m + 1):
        entries = {}
        degenerate = []
        for t in problem.b_tuples(i):
            slice_cells = list(problem.slice_cells(i, t))
            marginal = sum(joint.entries[c] for c in slice_cells)
            if marginal == 0:
                degenerate.append(t)
                for c in slice_cells:
                    entries[c] = Fraction(0)
            else:
                for c in slice_cells:
                    entries[c] = joint.entries[c] / marginal
        arrays.append(
            ConditionalArray(index=i, entries=entries, degenerate_slices=tuple(degenerate))
        )
    return arrays
