"""Bipartite compatibility graph and chordless-cycle enumeration.

Vertices reuse the incidence-matrix row labels: block 0 rows are cell
vertices, block i rows are (i, B_i-tuple) vertices.  Edges reuse the column
labels, so the graph's vertex-edge incidence matrix is the incidence module's
matrix by construction.  Vertex order (cells first, then margin blocks, lex
within each) drives every canonical form here.

Two independent enumerators are provided on purpose: the canonical-extension
search used by the pipeline, and an exhaustive all-simple-cycles filter used
as a test oracle.  They must agree wherever the oracle runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import CircuitCapExceeded, NotACycle, OracleCapExceeded
from .incidence import ColLabel, RowLabel
from .model import ValidatedProblem, restrict

#: vertex-count ceiling for the exhaustive oracle
DEFAULT_ORACLE_CAP = 40


def indeterminate_name(label: ColLabel, m: int) -> str:
    """Render a column label as C[1,2], D[2,1], ... (letters by conditional)."""
    if m <= 24:
        letter = chr(ord("C") + label.conditional - 1)
    else:
        letter = f"C{label.conditional}"
    return f"{letter}[{','.join(map(str, label.cell))}]"


@dataclass(frozen=True)
class CompatGraph:
    problem: ValidatedProblem
    p_vertices: tuple                     # RowLabel block 0, sorted
    u_vertices: tuple                     # RowLabel blocks 1..m, sorted
    edges: tuple                          # ColLabels, conditional-major
    endpoints: dict = field(repr=False)   # ColLabel -> (p RowLabel, u RowLabel)
    neighbors: dict = field(repr=False)   # RowLabel -> sorted tuple of RowLabel
    edge_between: dict = field(repr=False)  # unordered vertex pair -> ColLabel

    @property
    def vertices(self) -> tuple:
        return self.p_vertices + self.u_vertices

    def degree(self, v: RowLabel) -> int:
        return len(self.neighbors[v])


def build_graph(problem: ValidatedProblem) -> CompatGraph:
    """One edge per (conditional, cell), joining the cell to its B_i-tuple."""
    cells = list(problem.cells())
    p_vertices = [RowLabel(0, c) for c in cells]
    u_vertices = []
    for i in range(1, problem.m + 1):
        u_vertices.extend(RowLabel(i, t) for t in problem.b_tuples(i))

    edges = []
    endpoints = {}
    adjacency = {v: [] for v in p_vertices + u_vertices}
    edge_between = {}
    for i in range(1, problem.m + 1):
        b = problem.conditioning_sets[i - 1]
        for cell in cells:
            e = ColLabel(i, cell)
            p, u = RowLabel(0, cell), RowLabel(i, restrict(cell, b))
            edges.append(e)
            endpoints[e] = (p, u)
            adjacency[p].append(u)
            adjacency[u].append(p)
            edge_between[(p, u)] = e
            edge_between[(u, p)] = e

    return CompatGraph(
        problem=problem,
        p_vertices=tuple(p_vertices),
        u_vertices=tuple(u_vertices),
        edges=tuple(edges),
        endpoints=endpoints,
        neighbors={v: tuple(sorted(nbrs)) for v, nbrs in adjacency.items()},
        edge_between=edge_between,
    )


@dataclass(frozen=True)
class Circuit:
    """A simple cycle in canonical form.

    ``vertices`` starts at the cycle's least vertex and proceeds toward the
    smaller of its two neighbors; ``edges[k]`` joins vertices[k] to
    vertices[(k+1) % length].
    """

    vertices: tuple
    edges: tuple

    @property
    def length(self) -> int:
        return len(self.edges)

    def sort_key(self):
        return (self.length, self.vertices)


def _canonical_rotation(vertices):
    """Rotate/reflect a cycle (as an orderable sequence) to its least form."""
    vertices = tuple(vertices)
    start = vertices.index(min(vertices))
    rot = vertices[start:] + vertices[:start]
    if rot[-1] < rot[1]:
        rot = (rot[0],) + rot[:0:-1]
    return rot


def canonicalize_circuit(graph: CompatGraph, cycle) -> Circuit:
    """Map any rotation/reflection of a simple cycle to its one canonical form."""
    vertices = list(cycle.vertices) if isinstance(cycle, Circuit) else list(cycle)
    n = len(vertices)
    if n < 3:
        raise NotACycle(f"a cycle needs at least 3 vertices, got {n}")
    if len(set(vertices)) != n:
        raise NotACycle("vertex sequence repeats a vertex")
    for k in range(n):
        pair = (vertices[k], vertices[(k + 1) % n])
        if pair not in graph.edge_between:
            raise NotACycle(f"no edge between consecutive vertices {pair}")

    rot = _canonical_rotation(vertices)
    edges = tuple(graph.edge_between[(rot[k], rot[(k + 1) % n])] for k in range(n))
    return Circuit(vertices=rot, edges=edges)


@dataclass(frozen=True)
class EnumerationCaps:
    max_circuits: int = 10 ** 6
    max_length: int = None  # in edges; None = unbounded


@dataclass(frozen=True)
class CircuitSet:
    circuits: tuple            # canonical, sorted by (length, vertices)
    histogram: tuple           # sorted ((length, count), ...)

    def __len__(self):
        return len(self.circuits)

    def histogram_dict(self) -> dict:
        return dict(self.histogram)

    def to_dict(self, m: int) -> dict:
        return {
            "count": len(self.circuits),
            "histogram": {str(length): count for length, count in self.histogram},
            "circuits": [
                {
                    "length": c.length,
                    "vertices": [v.render() for v in c.vertices],
                    "edges": [indeterminate_name(e, m) for e in c.edges],
                }
                for c in self.circuits
            ],
        }

    def to_json(self, m: int) -> str:
        return json.dumps(self.to_dict(m), indent=2) + "\n"


def _finalize(graph: CompatGraph, raw_cycles, caps: EnumerationCaps, indexed=False) -> CircuitSet:
    """Canonicalize, dedupe, enforce caps as hard errors, sort, count.

    Cycles arrive as vertex sequences: labels, or sorted-vertex indices when
    ``indexed`` (index order and label order coincide, so canonical forms
    agree).  All heavy work happens on integer tuples.
    """
    verts = sorted(graph.vertices)
    index = {v: k for k, v in enumerate(verts)}
    if indexed:
        canonical = {_canonical_rotation(c) for c in raw_cycles}
    else:
        canonical = {_canonical_rotation([index[v] for v in c]) for c in raw_cycles}

    if len(canonical) > caps.max_circuits:
        raise CircuitCapExceeded(
            f"found {len(canonical)} induced circuits, cap is {caps.max_circuits}; "
            "a truncated generator set would be unsound, aborting"
        )
    if caps.max_length is not None:
        over = max((len(c) for c in canonical), default=0)
        if over > caps.max_length:
            raise CircuitCapExceeded(
                f"an induced circuit of length {over} exceeds the length cap "
                f"{caps.max_length}; aborting rather than truncating"
            )

    edge_by_pair = {}
    for e in graph.edges:
        p, u = graph.endpoints[e]
        a, b = index[p], index[u]
        edge_by_pair[(a, b)] = e
        edge_by_pair[(b, a)] = e

    circuits = []
    histogram = {}
    for ints in sorted(canonical, key=lambda t: (len(t), t)):
        n = len(ints)
        circuits.append(Circuit(
            vertices=tuple(verts[k] for k in ints),
            edges=tuple(edge_by_pair[(ints[k], ints[(k + 1) % n])] for k in range(n)),
        ))
        histogram[n] = histogram.get(n, 0) + 1
    return CircuitSet(circuits=tuple(circuits), histogram=tuple(sorted(histogram.items())))


def enumerate_induced_circuits(graph: CompatGraph, caps: EnumerationCaps = None) -> CircuitSet:
    """All chordless simple cycles, by canonical extension.

    For each vertex u in ascending order and each pair x < y of its larger
    neighbors, grow chord-free paths x-u-y-... using only vertices above u;
    an extension adjacent to x closes a cycle and is never walked through
    (the closing edge would become a chord of anything longer).  Each
    chordless cycle has a unique least vertex and a unique such (x, y), so it
    is produced exactly once.  Caps abort the whole enumeration, they never
    truncate it.

    The search runs on integer vertex ids with bitmask adjacency; label order
    and id order coincide, so canonical forms are unaffected.
    """
    caps = caps or EnumerationCaps()
    verts = sorted(graph.vertices)
    index = {v: k for k, v in enumerate(verts)}
    nvert = len(verts)
    adj_list = [[index[w] for w in graph.neighbors[v]] for v in verts]
    adj_mask = [0] * nvert
    for v, nbrs in enumerate(adj_list):
        for w in nbrs:
            adj_mask[v] |= 1 << w
    found = []
    budget = caps.max_circuits

    def emit(path):
        found.append(path)
        if len(found) > budget:
            raise CircuitCapExceeded(
                f"more than {budget} induced circuits; aborting"
            )

    def extend(path, path_mask, internal_mask, u, x, x_bit):
        t = path[-1]
        next_internal = internal_mask | (1 << t)
        for w in adj_list[t]:
            wm = adj_mask[w]
            if w <= u or (path_mask >> w) & 1 or wm & internal_mask:
                continue
            if wm & x_bit:
                emit(path + (w,))
            else:
                extend(path + (w,), path_mask | (1 << w), next_internal, u, x, x_bit)

    for u in range(nvert):
        bigger = [w for w in adj_list[u] if w > u]
        for ix in range(len(bigger)):
            x = bigger[ix]
            for iy in range(ix + 1, len(bigger)):
                y = bigger[iy]
                if (adj_mask[x] >> y) & 1:
                    # triangle; cannot occur in a bipartite graph but the
                    # search is stated for general graphs
                    emit((x, u, y))
                    continue
                extend(
                    (x, u, y),
                    (1 << x) | (1 << u) | (1 << y),
                    1 << u,
                    u, x, 1 << x,
                )

    return _finalize(graph, found, caps, indexed=True)


def enumerate_circuits_bruteforce(
    graph: CompatGraph, caps: EnumerationCaps = None,
    vertex_cap: int = DEFAULT_ORACLE_CAP,
) -> CircuitSet:
    """Oracle route: exhaust ALL simple cycles, then filter the chordless ones.

    Shares nothing with enumerate_induced_circuits beyond the graph itself;
    agreement between the two is a test obligation, not an assumption.
    """
    caps = caps or EnumerationCaps()
    vertices = sorted(graph.vertices)
    if len(vertices) > vertex_cap:
        raise OracleCapExceeded(
            f"{len(vertices)} vertices exceeds the oracle cap {vertex_cap}"
        )
    adj = {v: set(graph.neighbors[v]) for v in vertices}

    cycles = []

    def dfs(start, path, path_set):
        for w in graph.neighbors[path[-1]]:
            if w == start and len(path) >= 3:
                if path[1] < path[-1]:  # one orientation per cycle
                    cycles.append(list(path))
            elif w > start and w not in path_set:
                dfs(start, path + [w], path_set | {w})

    for s in vertices:
        dfs(s, [s], {s})

    def chordless(cycle):
        n = len(cycle)
        for a in range(n):
            for b in range(a + 2, n):
                if a == 0 and b == n - 1:
                    continue
                if cycle[b] in adj[cycle[a]]:
                    return False
        return True

    return _finalize(graph, [c for c in cycles if chordless(c)], caps)


def is_chordless(graph: CompatGraph, circuit: Circuit) -> bool:
    """True iff no graph edge joins two non-consecutive vertices of the cycle."""
    vs = circuit.vertices
    n = len(vs)
    for a in range(n):
        for b in range(a + 2, n):
            if a == 0 and b == n - 1:
                continue
            if (vs[a], vs[b]) in graph.edge_between:
                return False
    return True


def to_dot(graph: CompatGraph) -> str:
    """Render the graph in DOT: cells as boxes, margin vertices as ellipses."""
    m = graph.problem.m
    lines = ["graph compat {"]

    components = {v: v for v in graph.vertices}

    def find(v):
        while components[v] != v:
            components[v] = components[components[v]]
            v = components[v]
        return v

    for e in graph.edges:
        p, u = graph.endpoints[e]
        components[find(p)] = find(u)
    component_count = len({find(v) for v in graph.vertices})
    if len(graph.edges) == len(graph.vertices) - component_count:
        lines.append("  // acyclic: zero circuits")

    for v in graph.p_vertices:
        cell = ",".join(map(str, v.key))
        lines.append(f'  "{v.render()}" [shape=box, label="({cell})"];')
    for v in graph.u_vertices:
        t = ",".join(map(str, v.key))
        lines.append(f'  "{v.render()}" [shape=ellipse, label="({v.block}; {t})"];')
    for e in graph.edges:
        p, u = graph.endpoints[e]
        lines.append(
            f'  "{p.render()}" -- "{u.render()}" '
            f'[label="{indeterminate_name(e, m)}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
