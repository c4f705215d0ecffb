import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fullcond import (
    BinomialViolation,
    ConditionViolation,
    IncompatibleInput,
    InconsistentCycle,
    JointDistribution,
    WeightCountMismatch,
    build_support_graph,
    check_compatibility_oracle,
    check_compatibility_theorem,
    conditional_from_nested,
    conditionals_from_joint,
    evaluate_binomial,
    joint_from_nested,
    reconstruct_joint,
    restrict,
    symmetry_group,
    transform_arrays,
    verdict_to_dict,
)
from helpers import (
    antichain_families,
    bivariate,
    incompatible_pair_3x3,
    perturb_arrays,
    problem,
    random_arrays,
    random_positive_joint,
    random_sparse_joint,
    trivariate_pairs,
    trivariate_singletons,
)


def test_diagonal_pair_is_incompatible_with_identical_witnesses():
    prob, arrays = incompatible_pair_3x3()
    vt = check_compatibility_theorem(arrays, prob)
    vo = check_compatibility_oracle(arrays, prob)
    assert not vt.compatible and not vo.compatible
    assert isinstance(vt.witness, BinomialViolation)
    assert isinstance(vo.witness, BinomialViolation)
    assert vt.witness.value == Fraction(1, 108)
    assert vt.witness.binomial.degree == 6
    assert vt.witness.binomial == vo.witness.binomial
    assert vo.witness.value == Fraction(1, 108)
    assert vt.reconstruction is None and vt.degrees_of_freedom is None


def test_all_witnesses_collects_every_violated_binomial():
    prob, arrays = incompatible_pair_3x3()
    vt = check_compatibility_theorem(arrays, prob, all_witnesses=True)
    # the zero pattern silences every other binomial: both monomials vanish
    assert len(vt.all_witnesses) == 1
    assert vt.all_witnesses[0] == vt.witness
    for w in vt.all_witnesses:
        assert w.value == evaluate_binomial(w.binomial, arrays) != 0


def test_uniform_conditionals_reconstruct_the_uniform_joint():
    prob = trivariate_singletons()
    uniform = JointDistribution(
        d=prob.d, entries={c: Fraction(1, 8) for c in prob.cells()}
    )
    arrays = conditionals_from_joint(uniform, prob)
    for check in (check_compatibility_theorem, check_compatibility_oracle):
        v = check(arrays, prob)
        assert v.compatible
        assert v.degrees_of_freedom == 0
        assert v.reconstruction.entries == uniform.entries


def test_round_trip_returns_the_exact_joint():
    prob = bivariate(2, 2)
    joint = joint_from_nested(
        [[Fraction(1, 8), Fraction(1, 8)], [Fraction(1, 8), Fraction(5, 8)]], (2, 2)
    )
    arrays = conditionals_from_joint(joint, prob)
    v = check_compatibility_theorem(arrays, prob)
    assert v.compatible and v.degrees_of_freedom == 0
    assert v.reconstruction.entries == joint.entries
    rebuilt, dof = reconstruct_joint(arrays, prob)
    assert dof == 0 and rebuilt.entries == joint.entries


def identity_pair():
    prob = bivariate(2, 2)
    c = conditional_from_nested(1, [[1, 0], [0, 1]], (2, 2))
    d = conditional_from_nested(2, [[1, 0], [0, 1]], (2, 2))
    return prob, [c, d]


def test_disconnected_support_leaves_free_component_masses():
    prob, arrays = identity_pair()
    sg = build_support_graph(arrays, prob)
    assert sg.cells == ((1, 1), (2, 2))
    assert sg.edges == ()
    assert sg.components == (((1, 1),), ((2, 2),))
    v = check_compatibility_theorem(arrays, prob)
    assert v.compatible and v.degrees_of_freedom == 1
    assert v.reconstruction.entries[(1, 1)] == Fraction(1, 2)

    joint, dof = reconstruct_joint(arrays, prob, component_weights=(1, 3))
    assert dof == 1
    assert joint.entries == {
        (1, 1): Fraction(1, 4), (1, 2): 0, (2, 1): 0, (2, 2): Fraction(3, 4),
    }


def test_component_weights_are_validated():
    prob, arrays = identity_pair()
    with pytest.raises(WeightCountMismatch):
        reconstruct_joint(arrays, prob, component_weights=(1,))
    with pytest.raises(WeightCountMismatch):
        reconstruct_joint(arrays, prob, component_weights=(1, 0))
    with pytest.raises(WeightCountMismatch):
        reconstruct_joint(arrays, prob, component_weights=(1, -2))


def test_reconstruction_feasible_but_not_unique_keeps_conditionals():
    # the original joint weights the two diagonal cells 1/3, 2/3; equal-mass
    # reconstruction differs from it yet induces the same conditionals
    prob = bivariate(2, 2)
    joint = joint_from_nested([[Fraction(1, 3), 0], [0, Fraction(2, 3)]], (2, 2))
    arrays = conditionals_from_joint(joint, prob)
    rebuilt, dof = reconstruct_joint(arrays, prob)
    assert dof == 1
    assert rebuilt.entries != joint.entries
    derived = conditionals_from_joint(rebuilt, prob)
    for got, want in zip(derived, arrays):
        assert got.entries == want.entries


def test_reconstruct_refuses_incompatible_input():
    prob, arrays = incompatible_pair_3x3()
    with pytest.raises(IncompatibleInput):
        reconstruct_joint(arrays, prob)


def test_condition_violations_short_circuit_both_deciders():
    prob = bivariate(2, 2)
    c = conditional_from_nested(1, [[1, 0], [0, 1]], (2, 2))
    d = conditional_from_nested(2, [[1, Fraction(1, 2)], [0, Fraction(1, 2)]], (2, 2))
    for check in (check_compatibility_theorem, check_compatibility_oracle):
        v = check([c, d], prob)
        assert not v.compatible
        assert isinstance(v.witness, ConditionViolation)
        assert v.witness.condition == 2
        assert v.witness.location == (1, 2)


def test_perturbed_conditionals_are_rejected_by_both():
    rng = random.Random(99)
    for prob in (trivariate_singletons(), trivariate_pairs(), bivariate(3, 3)):
        joint = random_positive_joint(rng, prob.d)
        arrays = perturb_arrays(rng, conditionals_from_joint(joint, prob), prob)
        vt = check_compatibility_theorem(arrays, prob)
        vo = check_compatibility_oracle(arrays, prob)
        assert not vt.compatible and not vo.compatible
        assert isinstance(vt.witness, BinomialViolation)
        assert vt.witness.value != 0


def test_oracle_sometimes_reports_a_raw_cycle_and_it_is_sound():
    # scan a fixed random stream until the lifted walk fails to be a
    # chordless circuit; the raw support-graph cycle is the witness then
    rng = random.Random(0)
    dims = [(2, 2), (2, 3), (3, 3), (2, 2, 2)]
    hit = None
    for _ in range(1500):
        d = dims[rng.randrange(len(dims))]
        fams = antichain_families(len(d))
        fam = fams[rng.randrange(len(fams))]
        prob = problem(d, fam)
        arrays = random_arrays(rng, prob, zero_probability=0.35)
        v = check_compatibility_oracle(arrays, prob)
        if not v.compatible and isinstance(v.witness, InconsistentCycle):
            hit = (prob, arrays, v.witness)
            break
    assert hit is not None, "no raw-cycle witness in the scanned stream"
    prob, arrays, cycle = hit
    assert cycle.ratio != 1
    k = len(cycle.cells)
    assert k == len(cycle.conditionals) >= 3
    ratio = Fraction(1)
    for j in range(k):
        a, b = cycle.cells[j], cycle.cells[(j + 1) % k]
        i = cycle.conditionals[j]
        bset = prob.conditioning_sets[i - 1]
        assert restrict(a, bset) == restrict(b, bset)
        assert arrays[i - 1].entries[a] > 0 and arrays[i - 1].entries[b] > 0
        ratio *= arrays[i - 1].entries[a] / arrays[i - 1].entries[b]
    assert ratio == cycle.ratio
    # the other route must agree on the verdict
    assert not check_compatibility_theorem(arrays, prob).compatible


def test_verdict_serialization_kinds():
    prob, arrays = incompatible_pair_3x3()
    doc = verdict_to_dict(check_compatibility_theorem(arrays, prob), prob)
    assert doc["compatible"] is False
    assert doc["witness"]["kind"] == "binomial"
    assert doc["witness"]["value"] == "1/108"
    assert doc["witness"]["degree"] == 6

    prob2 = bivariate(2, 2)
    c = conditional_from_nested(1, [[1, 0], [0, 1]], (2, 2))
    d = conditional_from_nested(2, [[1, Fraction(1, 2)], [0, Fraction(1, 2)]], (2, 2))
    doc2 = verdict_to_dict(check_compatibility_theorem([c, d], prob2), prob2)
    assert doc2["witness"]["kind"] == "condition"

    joint = random_positive_joint(random.Random(3), (2, 2))
    arrays3 = conditionals_from_joint(joint, prob2)
    doc3 = verdict_to_dict(check_compatibility_theorem(arrays3, prob2), prob2)
    assert doc3["compatible"] is True
    assert doc3["degrees_of_freedom"] == 0
    assert isinstance(doc3["joint"], list)


def test_symmetry_elements_preserve_the_verdict():
    rng = random.Random(21)
    prob = trivariate_singletons()
    compatible = conditionals_from_joint(random_positive_joint(rng, prob.d), prob)
    broken = perturb_arrays(rng, compatible, prob)
    for el in symmetry_group(prob):
        moved = transform_arrays(el, compatible, prob)
        assert check_compatibility_theorem(moved, prob).compatible
        moved_broken = transform_arrays(el, broken, prob)
        assert not check_compatibility_theorem(moved_broken, prob).compatible


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_deciders_agree_on_random_instances(data):
    d = data.draw(st.sampled_from([(2, 2), (2, 3), (3, 3), (2, 2, 2)]))
    family = data.draw(st.sampled_from(antichain_families(len(d))))
    prob = problem(d, family)
    rng = random.Random(data.draw(st.integers(min_value=0, max_value=10**6)))
    kind = data.draw(st.sampled_from(["joint", "perturbed", "sparse", "arrays"]))
    if kind == "joint":
        arrays = conditionals_from_joint(random_positive_joint(rng, d), prob)
    elif kind == "perturbed":
        arrays = perturb_arrays(rng, conditionals_from_joint(random_positive_joint(rng, d), prob), prob)
    elif kind == "sparse":
        arrays = conditionals_from_joint(random_sparse_joint(rng, d), prob)
    else:
        arrays = random_arrays(rng, prob, zero_probability=0.3)
    vt = check_compatibility_theorem(arrays, prob)
    vo = check_compatibility_oracle(arrays, prob)
    assert vt.compatible == vo.compatible
    if vt.compatible:
        assert vt.reconstruction.entries == vo.reconstruction.entries
        assert vt.degrees_of_freedom == vo.degrees_of_freedom
