"""Circuit binomials, their exact evaluation, and symmetry orbits.

A cycle of 2r edges yields a degree-r binomial: the product of its
odd-position edge indeterminates minus the product of the even-position ones.
Orientation is normalized so the lexicographically smaller monomial is the
plus side; all reported evaluation signs follow that convention, so callers
comparing against externally stated values should compare absolute values.
"""

from __future__ import annotations

import json
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import AmbiguousAction, InvalidProblem, NotAlternating, ShapeMismatch
from .graph import (
    Circuit,
    EnumerationCaps,
    build_graph,
    enumerate_induced_circuits,
    indeterminate_name,
)
from .incidence import ColLabel, IncidenceMatrix
from .model import ConditionalArray, ValidatedProblem


@dataclass(frozen=True)
class Binomial:
    """plus and minus are disjoint sorted tuples of ColLabels, plus <= minus."""

    plus: tuple
    minus: tuple

    @property
    def degree(self) -> int:
        return len(self.plus)

    def sort_key(self):
        return (self.degree, self.plus, self.minus)

    def render(self, m: int) -> str:
        left = "*".join(indeterminate_name(l, m) for l in self.plus)
        right = "*".join(indeterminate_name(l, m) for l in self.minus)
        return f"{left} - {right}"


def _oriented(m1, m2) -> Binomial:
    m1, m2 = tuple(sorted(m1)), tuple(sorted(m2))
    if m2 < m1:
        m1, m2 = m2, m1
    return Binomial(plus=m1, minus=m2)


def binomial_from_circuit(circuit: Circuit) -> Binomial:
    """Split the cycle's edges by position parity into the two monomials."""
    edges = circuit.edges
    if len(edges) % 2 != 0:
        raise NotAlternating(f"cycle has odd length {len(edges)}")
    blocks = [0 if v.block == 0 else 1 for v in circuit.vertices]
    n = len(blocks)
    if any(blocks[k] == blocks[(k + 1) % n] for k in range(n)):
        raise NotAlternating("cycle does not alternate cell and margin vertices")
    odd, even = edges[0::2], edges[1::2]
    assert len(set(odd)) == len(odd) and len(set(even)) == len(even)
    assert not set(odd) & set(even)
    return _oriented(odd, even)


@dataclass(frozen=True)
class GeneratorSet:
    problem: ValidatedProblem
    binomials: tuple                      # sorted by (degree, plus, minus)
    provenance: dict = field(repr=False)  # Binomial -> source Circuit
    # integer view for bulk evaluation: monomial_ids[k] holds the two
    # monomials of binomials[k] as indices into edge_order
    edge_order: tuple = field(repr=False, default=())
    monomial_ids: tuple = field(repr=False, default=())

    def __len__(self):
        return len(self.binomials)

    def degree_histogram(self) -> dict:
        hist = {}
        for b in self.binomials:
            hist[b.degree] = hist.get(b.degree, 0) + 1
        return hist

    def to_dict(self) -> dict:
        m = self.problem.m
        return {
            "count": len(self.binomials),
            "histogram": {str(k): v for k, v in sorted(self.degree_histogram().items())},
            "generators": [
                {
                    "degree": b.degree,
                    "plus": [{"conditional": l.conditional, "cell": list(l.cell)} for l in b.plus],
                    "minus": [{"conditional": l.conditional, "cell": list(l.cell)} for l in b.minus],
                    "text": b.render(m),
                }
                for b in self.binomials
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


@lru_cache(maxsize=256)
def _generators_cached(problem: ValidatedProblem, caps: EnumerationCaps) -> GeneratorSet:
    graph = build_graph(problem)
    circuits = enumerate_induced_circuits(graph, caps)
    # sort and dedupe on integer edge ids; id order equals ColLabel order, so
    # the result matches sorting Binomials directly (binomial_from_circuit
    # agreement is a test obligation)
    rank = {e: j for j, e in enumerate(graph.edges)}
    keyed = {}
    for c in circuits.circuits:
        odd = sorted(rank[e] for e in c.edges[0::2])
        even = sorted(rank[e] for e in c.edges[1::2])
        if even < odd:
            odd, even = even, odd
        keyed[(len(odd), tuple(odd), tuple(even))] = c
    ordered = []
    provenance = {}
    monomial_ids = []
    for (_, plus_ids, minus_ids), c in sorted(keyed.items()):
        b = Binomial(
            plus=tuple(graph.edges[j] for j in plus_ids),
            minus=tuple(graph.edges[j] for j in minus_ids),
        )
        ordered.append(b)
        provenance[b] = c
        monomial_ids.append((plus_ids, minus_ids))
    return GeneratorSet(
        problem=problem,
        binomials=tuple(ordered),
        provenance=provenance,
        edge_order=graph.edges,
        monomial_ids=tuple(monomial_ids),
    )


def generators(problem: ValidatedProblem, caps: EnumerationCaps = None) -> GeneratorSet:
    """One binomial per induced circuit, canonically ordered.

    Cached per (problem, caps): the set is a pure function of both and the
    enumeration is the expensive step of the pipeline.
    """
    return _generators_cached(problem, caps or EnumerationCaps())


def evaluate_binomial(binomial: Binomial, arrays) -> Fraction:
    """prod(plus entries) - prod(minus entries), exact."""
    def product(monomial):
        out = Fraction(1)
        for label in monomial:
            if not 1 <= label.conditional <= len(arrays):
                raise ShapeMismatch(f"no conditional {label.conditional}")
            entry = arrays[label.conditional - 1].entries.get(label.cell)
            if entry is None:
                raise ShapeMismatch(f"no cell {label.cell} in conditional {label.conditional}")
            out *= entry
        return out

    return product(binomial.plus) - product(binomial.minus)


#: id(matrix) -> (weakref to the matrix, {ColLabel: packed row-count code})
_column_code_memo = {}


def _column_codes(matrix: IncidenceMatrix):
    """Per-column row counts packed into one int, 6 bits per row.

    Valid only for 0/1 matrices and monomials of degree < 64 (each of the
    <= 63 labels adds at most 1 per row, so fields cannot carry); callers
    fall back to plain vectors otherwise.  Memoized by object identity to
    avoid rehashing large row tuples.
    """
    key = id(matrix)
    hit = _column_code_memo.get(key)
    if hit is not None and hit[0]() is matrix:
        return hit[1]
    if any(v not in (0, 1) for row in matrix.rows for v in row):
        codes = None
    else:
        codes = {
            label: sum(1 << (6 * r) for r in matrix.column_support(j))
            for j, label in enumerate(matrix.col_labels)
        }
    if len(_column_code_memo) >= 64:
        dead = [k for k, (ref, _) in _column_code_memo.items() if ref() is None]
        for k in dead:
            del _column_code_memo[k]
        if len(_column_code_memo) >= 64:
            _column_code_memo.clear()
    _column_code_memo[key] = (weakref.ref(matrix), codes)
    return codes


def verify_kernel_membership(binomial: Binomial, matrix: IncidenceMatrix) -> bool:
    """True iff both monomials' exponent vectors have the same image under A."""
    codes = _column_codes(matrix)
    if codes is not None and binomial.degree < 64:
        try:
            plus = sum(codes[label] for label in binomial.plus)
            minus = sum(codes[label] for label in binomial.minus)
        except KeyError as exc:
            raise ShapeMismatch(f"column {exc.args[0]} not in matrix") from exc
        return plus == minus

    col_index = {label: j for j, label in enumerate(matrix.col_labels)}

    def image(monomial):
        vec = [0] * len(matrix.row_labels)
        for label in monomial:
            j = col_index.get(label)
            if j is None:
                raise ShapeMismatch(f"column {label} not in matrix")
            for r in matrix.column_support(j):
                vec[r] += matrix.rows[r][j]
        return vec

    return image(binomial.plus) == image(binomial.minus)


@dataclass(frozen=True)
class SymmetryElement:
    """var_map[k-1] is the new position of variable k; level_maps[k-1][j-1]
    is the new level of old level j of variable k (all 1-based)."""

    var_map: tuple
    level_maps: tuple

    def apply_to_cell(self, cell: tuple) -> tuple:
        out = [0] * len(cell)
        for k, j in enumerate(cell, start=1):
            out[self.var_map[k - 1] - 1] = self.level_maps[k - 1][j - 1]
        return tuple(out)


def identity_element(problem: ValidatedProblem) -> SymmetryElement:
    return SymmetryElement(
        var_map=tuple(range(1, problem.n + 1)),
        level_maps=tuple(tuple(range(1, dk + 1)) for dk in problem.d),
    )


def compose(first: SymmetryElement, then: SymmetryElement) -> SymmetryElement:
    """The element acting as ``first`` followed by ``then``."""
    n = len(first.var_map)
    var_map = tuple(then.var_map[first.var_map[k] - 1] for k in range(n))
    level_maps = []
    for k in range(n):
        after = then.level_maps[first.var_map[k] - 1]
        level_maps.append(tuple(after[j - 1] for j in first.level_maps[k]))
    return SymmetryElement(var_map=var_map, level_maps=tuple(level_maps))


def symmetry_group(problem: ValidatedProblem):
    """Generators: family-preserving variable transpositions with matching
    dimensions, plus adjacent level transpositions within each variable."""
    n = problem.n
    d = problem.d
    family = {frozenset(b) for b in problem.conditioning_sets}
    elements = []

    for k in range(1, n + 1):
        for l in range(k + 1, n + 1):
            if d[k - 1] != d[l - 1]:
                continue
            swap = {k: l, l: k}
            mapped = {frozenset(swap.get(v, v) for v in b) for b in family}
            if mapped != family:
                continue
            var_map = list(range(1, n + 1))
            var_map[k - 1], var_map[l - 1] = l, k
            elements.append(
                SymmetryElement(
                    var_map=tuple(var_map),
                    level_maps=tuple(tuple(range(1, dk + 1)) for dk in d),
                )
            )

    identity_vars = tuple(range(1, n + 1))
    for k in range(1, n + 1):
        for j in range(1, d[k - 1]):
            maps = [list(range(1, dk + 1)) for dk in d]
            maps[k - 1][j - 1], maps[k - 1][j] = j + 1, j
            elements.append(
                SymmetryElement(
                    var_map=identity_vars,
                    level_maps=tuple(tuple(mk) for mk in maps),
                )
            )
    return elements


def group_closure(elements) -> frozenset:
    """All products of the given elements (they must share n and d)."""
    elements = list(elements)
    seen = set(elements)
    frontier = list(elements)
    while frontier:
        a = frontier.pop()
        for b in elements:
            c = compose(a, b)
            if c not in seen:
                seen.add(c)
                frontier.append(c)
    return frozenset(seen)


def conditional_mapping(element: SymmetryElement, problem: ValidatedProblem) -> dict:
    """How the element permutes conditional indices, via its action on B_i."""
    family = {frozenset(b): i for i, b in enumerate(problem.conditioning_sets, start=1)}
    if len(family) != problem.m:
        raise AmbiguousAction("duplicate conditioning sets")
    mapping = {}
    for i, b in enumerate(problem.conditioning_sets, start=1):
        image = frozenset(element.var_map[k - 1] for k in b)
        target = family.get(image)
        if target is None:
            raise InvalidProblem(
                f"symmetry element maps B_{i} outside the conditioning family"
            )
        mapping[i] = target
    return mapping


def apply_to_binomial(
    element: SymmetryElement, binomial: Binomial, problem: ValidatedProblem
) -> Binomial:
    cmap = conditional_mapping(element, problem)

    def act(monomial):
        return [
            ColLabel(cmap[l.conditional], element.apply_to_cell(l.cell))
            for l in monomial
        ]

    return _oriented(act(binomial.plus), act(binomial.minus))


def transform_arrays(element: SymmetryElement, arrays, problem: ValidatedProblem):
    """Relabel a whole conditional family by a symmetry element.

    The result is a valid family for the same problem: conditional i's data
    moves to index cmap[i] with every cell relabeled.
    """
    cmap = conditional_mapping(element, problem)
    out = [None] * len(arrays)
    for arr in arrays:
        entries = {
            element.apply_to_cell(cell): value for cell, value in arr.entries.items()
        }
        target = cmap[arr.index]
        out[target - 1] = ConditionalArray(index=target, entries=entries)
    return out


@dataclass(frozen=True)
class Orbit:
    representative: Binomial  # least member in canonical order
    members: tuple


@dataclass(frozen=True)
class OrbitPartition:
    orbits: tuple

    def sizes(self) -> tuple:
        return tuple(len(o.members) for o in self.orbits)

    def to_dict(self, m: int) -> dict:
        return {
            "orbit_count": len(self.orbits),
            "orbits": [
                {
                    "size": len(o.members),
                    "representative": o.representative.render(m),
                    "members": [b.render(m) for b in o.members],
                }
                for o in self.orbits
            ],
        }

    def to_json(self, m: int) -> str:
        return json.dumps(self.to_dict(m), indent=2) + "\n"


def symmetry_orbits(generator_set: GeneratorSet, problem: ValidatedProblem) -> OrbitPartition:
    """Partition the generators under the symmetry group action.

    Orbit closure under the generating elements equals closure under the full
    group, so the group is never materialized here.
    """
    gens = symmetry_group(problem)
    remaining = set(generator_set.binomials)
    orbits = []
    while remaining:
        seed = min(remaining, key=Binomial.sort_key)
        orbit = {seed}
        frontier = [seed]
        while frontier:
            b = frontier.pop()
            for g in gens:
                image = apply_to_binomial(g, b, problem)
                if image not in orbit:
                    orbit.add(image)
                    frontier.append(image)
        # the action permutes the generator set; anything else is a bug
        assert orbit <= remaining
        remaining -= orbit
        members = tuple(sorted(orbit, key=Binomial.sort_key))
        orbits.append(Orbit(representative=members[0], members=members))
    orbits.sort(key=lambda o: o.representative.sort_key())
    return OrbitPartition(orbits=tuple(orbits))
