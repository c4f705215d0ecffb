"""Exact compatibility checking for full conditional distributions.

Given m conditional probability arrays p(x_{A_i} | x_{B_i}) over n discrete
variables, decide whether one joint distribution has all of them as its
conditionals; produce the certifying algebraic witness when not, and an
exact reconstruction when yes.  All arithmetic is rational.
"""

from .decide import (
    BinomialViolation,
    InconsistentCycle,
    SupportGraph,
    Verdict,
    build_support_graph,
    check_compatibility_oracle,
    check_compatibility_theorem,
    joint_to_nested,
    reconstruct_joint,
    verdict_to_dict,
    verdict_to_json,
)
from .document import Document, load_document, parse_document
from .errors import (
    AmbiguousAction,
    CircuitCapExceeded,
    ContainmentViolation,
    DocumentError,
    DuplicateConditioningSet,
    EmptyLeftSide,
    FullcondError,
    IncompatibleInput,
    InvalidInputError,
    InvalidProblem,
    NotACycle,
    NotAlternating,
    OracleCapExceeded,
    ProbeCapExceeded,
    ResourceCapError,
    ShapeMismatch,
    SizeCapExceeded,
    WeightCountMismatch,
)
from .graph import (
    Circuit,
    CircuitSet,
    CompatGraph,
    EnumerationCaps,
    build_graph,
    canonicalize_circuit,
    enumerate_circuits_bruteforce,
    enumerate_induced_circuits,
    indeterminate_name,
    is_chordless,
    to_dot,
)
from .ideal import (
    Binomial,
    GeneratorSet,
    Orbit,
    OrbitPartition,
    SymmetryElement,
    apply_to_binomial,
    binomial_from_circuit,
    compose,
    conditional_mapping,
    evaluate_binomial,
    generators,
    group_closure,
    identity_element,
    symmetry_group,
    symmetry_orbits,
    transform_arrays,
    verify_kernel_membership,
)
from .incidence import (
    ColLabel,
    IncidenceMatrix,
    ProbeReport,
    RowLabel,
    StructureReport,
    bareiss_determinant,
    build_matrix,
    matrix_rank,
    minor_unimodularity_probe,
    verify_graphical_unimodular,
)
from .model import (
    Cell,
    ConditionalArray,
    ConditionReport,
    ConditionViolation,
    JointDistribution,
    ProblemSpec,
    ValidatedProblem,
    check_conditions_123,
    conditional_from_nested,
    conditionals_from_joint,
    iter_cells,
    joint_from_nested,
    restrict,
    validate_problem,
)
from .rationals import format_rational, parse_rational

__version__ = "0.1.0"

__all__ = [
    "AmbiguousAction",
    "Binomial",
    "BinomialViolation",
    "Cell",
    "Circuit",
    "CircuitCapExceeded",
    "CircuitSet",
    "ColLabel",
    "CompatGraph",
    "ConditionReport",
    "ConditionViolation",
    "ConditionalArray",
    "ContainmentViolation",
    "Document",
    "DocumentError",
    "DuplicateConditioningSet",
    "EmptyLeftSide",
    "EnumerationCaps",
    "FullcondError",
    "GeneratorSet",
    "IncidenceMatrix",
    "IncompatibleInput",
    "InconsistentCycle",
    "InvalidInputError",
    "InvalidProblem",
    "JointDistribution",
    "NotACycle",
    "NotAlternating",
    "Orbit",
    "OrbitPartition",
    "OracleCapExceeded",
    "ProbeCapExceeded",
    "ProbeReport",
    "ProblemSpec",
    "ResourceCapError",
    "RowLabel",
    "ShapeMismatch",
    "SizeCapExceeded",
    "StructureReport",
    "SupportGraph",
    "SymmetryElement",
    "ValidatedProblem",
    "Verdict",
    "WeightCountMismatch",
    "apply_to_binomial",
    "bareiss_determinant",
    "binomial_from_circuit",
    "build_graph",
    "build_matrix",
    "build_support_graph",
    "canonicalize_circuit",
    "check_compatibility_oracle",
    "check_compatibility_theorem",
    "check_conditions_123",
    "compose",
    "conditional_from_nested",
    "conditional_mapping",
    "conditionals_from_joint",
    "enumerate_circuits_bruteforce",
    "enumerate_induced_circuits",
    "evaluate_binomial",
    "format_rational",
    "generators",
    "group_closure",
    "identity_element",
    "indeterminate_name",
    "is_chordless",
    "iter_cells",
    "joint_from_nested",
    "joint_to_nested",
    "load_document",
    "matrix_rank",
    "minor_unimodularity_probe",
    "parse_document",
    "parse_rational",
    "reconstruct_joint",
    "restrict",
    "symmetry_group",
    "symmetry_orbits",
    "to_dot",
    "transform_arrays",
    "validate_problem",
    "verdict_to_dict",
    "verdict_to_json",
    "verify_graphical_unimodular",
    "verify_kernel_membership",
]
