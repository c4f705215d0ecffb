"""Two independent compatibility deciders and exact joint reconstruction.

The theorem route checks the three elementary conditions and then requires
every circuit binomial to vanish.  The oracle route never looks at binomials:
it propagates entry ratios across the common support and either meets a
contradiction on some cycle or constructs a joint outright.  Their agreement
on every input is a test obligation; the CLI's ``both`` mode enforces it at
runtime.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import IncompatibleInput, WeightCountMismatch
from .graph import (
    EnumerationCaps,
    build_graph,
    canonicalize_circuit,
    is_chordless,
)
from .ideal import Binomial, binomial_from_circuit, evaluate_binomial, generators
from .incidence import RowLabel
from .model import (
    ConditionViolation,
    JointDistribution,
    ValidatedProblem,
    check_conditions_123,
    conditionals_from_joint,
    restrict,
)
from .rationals import format_rational


@dataclass(frozen=True)
class BinomialViolation:
    binomial: Binomial
    value: Fraction


@dataclass(frozen=True)
class InconsistentCycle:
    """A support-graph cycle whose entry ratios do not multiply to 1.

    cells[j] connects to cells[(j+1) % k] within a slice of conditional
    conditionals[j]; ratio is the product of C^i ratios around the cycle.
    A chordless violating circuit always exists too, but no reduction from
    this raw cycle to one is computed.
    """

    cells: tuple
    conditionals: tuple
    ratio: Fraction


@dataclass(frozen=True)
class Verdict:
    compatible: bool
    witness: object = None              # ConditionViolation | BinomialViolation | InconsistentCycle
    reconstruction: JointDistribution = None
    degrees_of_freedom: int = None      # component count - 1, compatible verdicts only
    all_witnesses: tuple = ()

    def __post_init__(self):
        assert self.compatible == (self.witness is None)
        assert self.compatible == (self.reconstruction is not None)


@dataclass(frozen=True)
class SupportGraph:
    """Cells of the common support, linked within every conditioning slice."""

    cells: tuple
    edges: tuple       # (a, b, i) with a < b, one per constraint P_a/P_b = C^i_a/C^i_b
    components: tuple  # tuple of tuples of cells, each sorted, sorted by head


def build_support_graph(arrays, problem: ValidatedProblem) -> SupportGraph:
    support = [c for c in problem.cells() if arrays[0].entries[c] != 0]
    support_set = set(support)
    edges = []
    adjacency = {c: [] for c in support}
    for i in range(1, problem.m + 1):
        for t in problem.b_tuples(i):
            live = [c for c in problem.slice_cells(i, t) if c in support_set]
            for a_idx in range(len(live)):
                for b_idx in range(a_idx + 1, len(live)):
                    a, b = live[a_idx], live[b_idx]
                    edges.append((a, b, i))
                    adjacency[a].append((b, i))
                    adjacency[b].append((a, i))

    components = []
    seen = set()
    for c in support:
        if c in seen:
            continue
        comp = [c]
        seen.add(c)
        queue = [c]
        while queue:
            v = queue.pop()
            for w, _ in adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        components.append(tuple(sorted(comp)))
    return SupportGraph(
        cells=tuple(support),
        edges=tuple(edges),
        components=tuple(sorted(components)),
    )


def _propagate(arrays, sg: SupportGraph):
    """Fix each component root to 1 and spread values along a spanning tree.

    Returns (values, None) on success or (None, InconsistentCycle) on the
    first violated non-tree constraint in edge order.
    """
    adjacency = {c: [] for c in sg.cells}
    for a, b, i in sg.edges:
        adjacency[a].append((b, i))
        adjacency[b].append((a, i))

    values = {}
    parent = {}
    for comp in sg.components:
        root = comp[0]
        values[root] = Fraction(1)
        parent[root] = None
        queue = [root]
        while queue:
            v = queue.pop(0)
            for w, i in sorted(adjacency[v]):
                if w in values:
                    continue
                entry_v = arrays[i - 1].entries[v]
                entry_w = arrays[i - 1].entries[w]
                values[w] = values[v] * entry_w / entry_v
                parent[w] = (v, i)
                queue.append(w)

    for a, b, i in sg.edges:
        lhs = values[a] * arrays[i - 1].entries[b]
        rhs = values[b] * arrays[i - 1].entries[a]
        if lhs != rhs:
            return None, _violating_cycle(arrays, parent, a, b, i)
    return values, None


def _violating_cycle(arrays, parent, a, b, i) -> InconsistentCycle:
    def chain(c):
        path = [c]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]][0])
        return path

    pa, pb = chain(a), chain(b)
    pb_index = {c: k for k, c in enumerate(pb)}
    ia = next(k for k, c in enumerate(pa) if c in pb_index)
    lca = pa[ia]
    ib = pb_index[lca]

    cells = pa[: ia + 1] + pb[:ib][::-1]
    conds = [parent[pa[k]][1] for k in range(ia)]
    conds.extend(parent[pb[k - 1]][1] for k in range(ib, 0, -1))
    conds.append(i)

    ratio = Fraction(1)
    k = len(cells)
    for j in range(k):
        cj = conds[j]
        ratio *= arrays[cj - 1].entries[cells[j]] / arrays[cj - 1].entries[cells[(j + 1) % k]]
    assert ratio != 1
    return InconsistentCycle(cells=tuple(cells), conditionals=tuple(conds), ratio=ratio)


def _lift_cycle_witness(cycle: InconsistentCycle, arrays, problem: ValidatedProblem):
    """Report the violating cycle as a circuit binomial when it is one.

    The lifted closed walk in the bipartite graph is usable iff it is a
    simple chordless cycle; otherwise the raw cycle stands as the witness.
    """
    graph = build_graph(problem)
    walk = []
    k = len(cycle.cells)
    for j in range(k):
        walk.append(RowLabel(0, cycle.cells[j]))
        i = cycle.conditionals[j]
        b = problem.conditioning_sets[i - 1]
        walk.append(RowLabel(i, restrict(cycle.cells[j], b)))
    if len(set(walk)) != len(walk):
        return cycle
    circuit = canonicalize_circuit(graph, walk)
    if not is_chordless(graph, circuit):
        return cycle
    binomial = binomial_from_circuit(circuit)
    value = evaluate_binomial(binomial, arrays)
    assert value != 0
    return BinomialViolation(binomial=binomial, value=value)


def _assemble_joint(values, sg: SupportGraph, problem: ValidatedProblem, weights):
    if weights is None:
        weights = [Fraction(1)] * len(sg.components)
    else:
        weights = [Fraction(w) for w in weights]
        if len(weights) != len(sg.components):
            raise WeightCountMismatch(
                f"{len(weights)} weights for {len(sg.components)} support components"
            )
        if any(w <= 0 for w in weights):
            raise WeightCountMismatch("component weights must be positive")
    total_weight = sum(weights)

    entries = {c: Fraction(0) for c in problem.cells()}
    for comp, w in zip(sg.components, weights):
        comp_sum = sum(values[c] for c in comp)
        scale = w / (total_weight * comp_sum)
        for c in comp:
            entries[c] = values[c] * scale
    return JointDistribution(d=problem.d, entries=entries)


def reconstruct_joint(arrays, problem: ValidatedProblem, component_weights=None):
    """Build a joint with the given conditionals, or refuse if none exists.

    Returns (joint, degrees_of_freedom) where the freedom is the number of
    support components minus one: relative component masses are arbitrary and
    the weights argument (default: equal) picks one choice.  The output's
    conditionals are re-derived and compared to the input before returning.
    """
    report = check_conditions_123(arrays, problem)
    if not report.all_passed:
        raise IncompatibleInput(f"conditions (1)-(3) fail: {report.first_violation}")
    sg = build_support_graph(arrays, problem)
    values, violation = _propagate(arrays, sg)
    if violation is not None:
        raise IncompatibleInput(f"ratio propagation met an inconsistent cycle: {violation}")
    joint = _assemble_joint(values, sg, problem, component_weights)

    derived = conditionals_from_joint(joint, problem)
    assert all(
        derived[i].entries == arrays[i].entries for i in range(problem.m)
    ), "reconstructed joint fails to reproduce its conditionals"
    return joint, len(sg.components) - 1


def check_compatibility_oracle(arrays, problem: ValidatedProblem) -> Verdict:
    """Decide by ratio propagation alone; no binomials are consulted."""
    report = check_conditions_123(arrays, problem)
    if not report.all_passed:
        return Verdict(compatible=False, witness=report.first_violation)
    sg = build_support_graph(arrays, problem)
    values, violation = _propagate(arrays, sg)
    if violation is not None:
        return Verdict(compatible=False, witness=_lift_cycle_witness(violation, arrays, problem))
    joint = _assemble_joint(values, sg, problem, None)
    return Verdict(
        compatible=True,
        reconstruction=joint,
        degrees_of_freedom=len(sg.components) - 1,
    )


def check_compatibility_theorem(
    arrays,
    problem: ValidatedProblem,
    caps: EnumerationCaps = None,
    all_witnesses: bool = False,
) -> Verdict:
    """Decide by the four-condition characterization.

    Conditions (1)-(3) first; then every circuit binomial must evaluate to
    exactly zero.  Fail-fast by default; with all_witnesses every violated
    binomial is collected.
    """
    report = check_conditions_123(arrays, problem)
    if not report.all_passed:
        return Verdict(compatible=False, witness=report.first_violation)

    gen_set = generators(problem, caps)
    # integer products per monomial instead of Fraction arithmetic; only a
    # violated binomial pays for an exact Fraction value
    nums = [arrays[e.conditional - 1].entries[e.cell].numerator for e in gen_set.edge_order]
    dens = [arrays[e.conditional - 1].entries[e.cell].denominator for e in gen_set.edge_order]
    violations = []
    for binomial, (plus_ids, minus_ids) in zip(gen_set.binomials, gen_set.monomial_ids):
        pn = pd = mn = md = 1
        for j in plus_ids:
            pn *= nums[j]
            pd *= dens[j]
        for j in minus_ids:
            mn *= nums[j]
            md *= dens[j]
        if pn * md != mn * pd:
            value = Fraction(pn * md - mn * pd, pd * md)
            assert value == evaluate_binomial(binomial, arrays)
            violations.append(BinomialViolation(binomial=binomial, value=value))
            if not all_witnesses:
                break
    if violations:
        return Verdict(
            compatible=False,
            witness=violations[0],
            all_witnesses=tuple(violations) if all_witnesses else (),
        )

    joint, dof = reconstruct_joint(arrays, problem)
    return Verdict(compatible=True, reconstruction=joint, degrees_of_freedom=dof)


def joint_to_nested(joint: JointDistribution):
    """Nested lists of rational strings, outermost index = variable 1."""
    def build(prefix):
        depth = len(prefix)
        if depth == len(joint.d):
            return format_rational(joint.entries[tuple(prefix)])
        return [build(prefix + [j]) for j in range(1, joint.d[depth] + 1)]

    return build([])


def verdict_to_dict(verdict: Verdict, problem: ValidatedProblem) -> dict:
    m = problem.m
    doc = {"compatible": verdict.compatible}

    def witness_dict(w):
        if isinstance(w, ConditionViolation):
            return {
                "kind": "condition",
                "condition": w.condition,
                "conditional": w.conditional,
                "location": list(w.location),
            }
        if isinstance(w, BinomialViolation):
            return {
                "kind": "binomial",
                "binomial": w.binomial.render(m),
                "degree": w.binomial.degree,
                "value": format_rational(w.value),
            }
        assert isinstance(w, InconsistentCycle)
        return {
            "kind": "cycle",
            "cells": [list(c) for c in w.cells],
            "conditionals": list(w.conditionals),
            "ratio": format_rational(w.ratio),
        }

    if verdict.witness is not None:
        doc["witness"] = witness_dict(verdict.witness)
    if verdict.all_witnesses:
        doc["all_witnesses"] = [witness_dict(w) for w in verdict.all_witnesses]
    if verdict.compatible:
        doc["joint"] = joint_to_nested(verdict.reconstruction)
        doc["degrees_of_freedom"] = verdict.degrees_of_freedom
    return doc


def verdict_to_json(verdict: Verdict, problem: ValidatedProblem) -> str:
    return json.dumps(verdict_to_dict(verdict, problem), indent=2) + "\n"
