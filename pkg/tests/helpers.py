"""Shared builders for the test suite: problems, random instances, documents."""

import itertools
from fractions import Fraction

from fullcond import (
    ConditionalArray,
    JointDistribution,
    ProblemSpec,
    format_rational,
    iter_cells,
    restrict,
    validate_problem,
)


def problem(d, sets):
    spec = ProblemSpec(d=tuple(d), conditioning_sets=tuple(tuple(s) for s in sets))
    return validate_problem(spec)


def bivariate(d1, d2):
    """Two conditionals on two variables: row-wise and column-wise."""
    return problem((d1, d2), [(2,), (1,)])


def trivariate_singletons():
    """Three binary variables, each conditional fixes one of them."""
    return problem((2, 2, 2), [(3,), (2,), (1,)])


def trivariate_pairs():
    """Three binary variables, each conditional fixes two of them."""
    return problem((2, 2, 2), [(2, 3), (1, 3), (1, 2)])


def antichain_families(n, max_m=3):
    """Every family of at most max_m proper subsets of [n], no containments."""
    subsets = [
        s for r in range(n) for s in itertools.combinations(range(1, n + 1), r)
    ]
    families = []
    for m in range(1, max_m + 1):
        for combo in itertools.combinations(subsets, m):
            if all(
                not (set(a) <= set(b) or set(b) <= set(a))
                for a, b in itertools.combinations(combo, 2)
            ):
                families.append(combo)
    return families


def random_positive_joint(rng, d, max_numerator=60):
    cells = list(iter_cells(d))
    raw = {c: Fraction(rng.randint(1, max_numerator)) for c in cells}
    total = sum(raw.values())
    return JointDistribution(d=tuple(d), entries={c: v / total for c, v in raw.items()})


def random_sparse_joint(rng, d, zero_probability=0.4):
    cells = list(iter_cells(d))
    raw = {
        c: Fraction(0) if rng.random() < zero_probability else Fraction(rng.randint(1, 60))
        for c in cells
    }
    if not any(raw.values()):
        raw[rng.choice(cells)] = Fraction(1)
    total = sum(raw.values())
    return JointDistribution(d=tuple(d), entries={c: v / total for c, v in raw.items()})


def random_arrays(rng, prob, zero_probability=0.0):
    """Independent random conditionals, each slice normalized to sum one."""
    arrays = []
    for i in range(1, prob.m + 1):
        entries = {}
        for t in prob.b_tuples(i):
            cells = list(prob.slice_cells(i, t))
            vals = [
                Fraction(0) if rng.random() < zero_probability else Fraction(rng.randint(1, 30))
                for _ in cells
            ]
            if not any(vals):
                vals[rng.randrange(len(vals))] = Fraction(1)
            total = sum(vals)
            for c, v in zip(cells, vals):
                entries[c] = v / total
        arrays.append(ConditionalArray(index=i, entries=entries))
    return arrays


def perturb_arrays(rng, arrays, prob, eps=Fraction(1, 1000)):
    """Bump one positive entry of one conditional by eps and renormalize its slice."""
    arrays = list(arrays)
    i = rng.randrange(prob.m)
    arr = arrays[i]
    positive = [c for c, v in sorted(arr.entries.items()) if v > 0]
    target = rng.choice(positive)
    t = restrict(target, prob.conditioning_sets[i])
    entries = dict(arr.entries)
    entries[target] = entries[target] + eps
    slice_cells = list(prob.slice_cells(i + 1, t))
    total = sum(entries[c] for c in slice_cells)
    for c in slice_cells:
        entries[c] = entries[c] / total
    arrays[i] = ConditionalArray(
        index=arr.index, entries=entries, degenerate_slices=arr.degenerate_slices
    )
    return arrays


def incompatible_pair_3x3():
    """Two 3x3 conditionals with equal odds ratios that still disagree.

    Every 2x2 minor constraint holds (each is 0 = 0), but the product of
    entry ratios around the six-cell diagonal cycle does not cancel.
    """
    prob = bivariate(3, 3)
    c = [
        [Fraction(1, 2), Fraction(1, 2), 0],
        [0, Fraction(1, 2), Fraction(1, 2)],
        [Fraction(1, 2), 0, Fraction(1, 2)],
    ]
    d = [
        [Fraction(1, 3), Fraction(2, 3), 0],
        [0, Fraction(1, 3), Fraction(2, 3)],
        [Fraction(1, 3), 0, Fraction(2, 3)],
    ]
    arrays = [
        ConditionalArray(index=1, entries={(i, j): Fraction(c[i - 1][j - 1]) for i in (1, 2, 3) for j in (1, 2, 3)}),
        ConditionalArray(index=2, entries={(i, j): Fraction(d[i - 1][j - 1]) for i in (1, 2, 3) for j in (1, 2, 3)}),
    ]
    return prob, arrays


def nested_strings(entries, d):
    """Nested lists of rational strings, the document form of an array."""

    def build(prefix):
        k = len(prefix)
        if k == len(d):
            return format_rational(entries[prefix])
        return [build(prefix + (j,)) for j in range(1, d[k] + 1)]

    return build(())


def document_dict(prob, arrays=None, caps=None):
    conditionals = []
    for i, b in enumerate(prob.conditioning_sets, start=1):
        entry = {"B": list(b)}
        if arrays is not None:
            entry["array"] = nested_strings(arrays[i - 1].entries, prob.d)
        conditionals.append(entry)
    doc = {"d": list(prob.d), "conditionals": conditionals}
    if caps is not None:
        doc["caps"] = caps
    return doc
