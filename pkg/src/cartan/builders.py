"""Constructors for the stock example families.

Full relations model one finite level of a matrix-algebra tower, the
upper-triangular order cuts out its triangular subalgebra, and acyclic
graphs produce path groupoids with the length order.  A coboundary
helper generates nontrivial cocycles from seeded phases.
"""

import cmath
import math
import random

from .dirichlet import DirichletOrder, validate_order
from .groupoid import Arrow, FiniteTwistedGroupoid, UnitSpace


def build_full_relation(n: int) -> FiniteTwistedGroupoid:
    """Full equivalence relation on n points ("1".."n"), trivial cocycle."""
    if n < 1:
        raise ValueError("need at least one point")
    points = tuple(str(i) for i in range(1, n + 1))
    arrows = frozenset(Arrow(r, s) for r in points for s in points)
    return FiniteTwistedGroupoid(UnitSpace(points), arrows)


def build_taf_order(n: int) -> DirichletOrder:
    """Upper-triangular order {(i, j): i <= j} on the full relation."""
    groupoid = build_full_relation(n)
    key = groupoid.units.index
    arrows = frozenset(a for a in groupoid.arrows if key(a.range) <= key(a.source))
    order = validate_order(groupoid, arrows)
    assert isinstance(order, DirichletOrder)
    return order


def coboundary_cocycle(groupoid: FiniteTwistedGroupoid, seed: int) -> dict[tuple[Arrow, Arrow], complex]:
    """Normalized cocycle from seeded random phases on the non-unit arrows.

    sigma(a, b) = phase(a) phase(b) conj(phase(ab)) with phase(unit) = 1;
    the cocycle identity holds by construction.  Entries involving a unit
    are exactly one and are omitted.
    """
    rng = random.Random(seed)
    phase = {a: cmath.exp(2j * math.pi * rng.random()) for a in groupoid.sorted_arrows if not a.is_unit()}

    def value_of(arrow: Arrow) -> complex:
        return phase.get(arrow, 1.0 + 0.0j)

    cocycle = {}
    for a, b in groupoid.composable_pairs():
        if a.is_unit() or b.is_unit():
            continue
        product = Arrow(a.range, b.source)
        cocycle[(a, b)] = value_of(a) * value_of(b) * value_of(product).conjugate()
    return cocycle


def build_graph_groupoid(vertices, edges) -> tuple[FiniteTwistedGroupoid, DirichletOrder]:
    """Path groupoid of a finite acyclic graph, with the length order.

    ``edges`` is a sequence of (name, source-vertex, target-vertex)
    triples.  Points are the directed paths that end at a sink, named by
    their edge sequences joined with '.', with the empty path at a sink
    named after the sink vertex.  Two paths are equivalent exactly when
    they end at the same sink, and the order relates a pair when the
    first path is at least as long as the second.
    """
    vertices = tuple(vertices)
    if len(set(vertices)) != len(vertices):
        raise ValueError("duplicate vertex names")
    vertex_index = {v: i for i, v in enumerate(vertices)}
    out_edges: dict[str, list[tuple[str, str]]] = {v: [] for v in vertices}
    in_edges: dict[str, list[tuple[str, str]]] = {v: [] for v in vertices}
    names = set()
    for name, src, dst in edges:
        if src not in vertex_index or dst not in vertex_index:
            raise ValueError(f"edge {name!r} uses an unknown vertex")
        if name in names:
            raise ValueError(f"duplicate edge name {name!r}")
        names.add(name)
        out_edges[src].append((name, dst))
        in_edges[dst].append((name, src))

    _reject_cycles(vertices, out_edges)

    sinks = [v for v in vertices if not out_edges[v]]
    reach_sink = set(sinks)
    changed = True
    while changed:
        changed = False
        for v in vertices:
            if v not in reach_sink and any(dst in reach_sink for _, dst in out_edges[v]):
                reach_sink.add(v)
                changed = True
    stranded = [v for v in vertices if v not in reach_sink]
    if stranded:
        raise ValueError(f"vertices with no path to a sink: {', '.join(stranded)}")

    # enumerate the paths ending at each sink, walking edges backwards
    paths: list[tuple[str, int, str]] = []  # (identifier, length, sink)
    for sink in sinks:
        stack: list[tuple[str, list[str]]] = [(sink, [])]
        while stack:
            vertex, suffix = stack.pop()
            identifier = ".".join(suffix) if suffix else sink
            paths.append((identifier, len(suffix), sink))
            for name, src in sorted(in_edges[vertex]):
                stack.append((src, [name] + suffix))

    paths.sort(key=lambda p: (vertex_index[p[2]], p[1], p[0]))
    points = tuple(p[0] for p in paths)
    sink_of = {p[0]: p[2] for p in paths}
    length_of = {p[0]: p[1] for p in paths}

    arrows = frozenset(
        Arrow(r, s) for r in points for s in points if sink_of[r] == sink_of[s]
    )
    groupoid = FiniteTwistedGroupoid(UnitSpace(points), arrows)
    order_arrows = frozenset(a for a in arrows if length_of[a.range] >= length_of[a.source])
    order = validate_order(groupoid, order_arrows)
    assert isinstance(order, DirichletOrder)
    return groupoid, order


def _reject_cycles(vertices, out_edges) -> None:
    WHITE, GREY, BLACK = 0, 1, 2
    color = {v: WHITE for v in vertices}
    parent: dict[str, str] = {}
    for root in vertices:
        if color[root] != WHITE:
            continue
        stack = [(root, iter(sorted(out_edges[root])))]
        color[root] = GREY
        while stack:
            vertex, it = stack[-1]
            advanced = False
            for _, nxt in it:
                if color[nxt] == GREY:
                    cycle = [nxt, vertex]
                    cur = vertex
                    while cur != nxt:
                        cur = parent[cur]
                        cycle.append(cur)
                    raise ValueError("graph contains a cycle: " + " -> ".join(reversed(cycle)))
                if color[nxt] == WHITE:
                    color[nxt] = GREY
                    parent[nxt] = vertex
                    stack.append((nxt, iter(sorted(out_edges[nxt]))))
                    advanced = True
                    break
            if not advanced:
                color[vertex] = BLACK
                stack.pop()
