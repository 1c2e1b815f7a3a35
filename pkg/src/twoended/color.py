"""3-edge-colouring of cubic 2-ended graphs driven by a harmonic function.

At every vertex the three differences ``g(u) - g(o)`` sum to zero, so after a
rescaling they look like ``(-1, 0, 1)``, ``(-1/2, -1/2, 1)`` or ``a < b < 0``
with ``c = -a - b``.  Each pattern singles out one edge per vertex (or all
three) and the rest follows by alternating colours.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .electric import VertexField
from .errors import ColouringError, PreconditionError
from .graph import Graph, Vertex

TOL = 1e-9
RED, BLUE, GREEN = "red", "blue", "green"


@dataclass(frozen=True)
class ColourCase:
    kind: str
    a: object
    b: object
    c: object
    scale: object


def _eq(x, y, tol):
    if isinstance(x, float) or isinstance(y, float):
        return abs(x - y) <= tol
    return x == y


def classify_case(g: VertexField, o: Vertex, tol: float = TOL) -> ColourCase:
    carrier = g.carrier
    nbrs = carrier.adj[o]
    if len(nbrs) != 3 or carrier.host_degree[o] != 3:
        raise PreconditionError(f"{o} is not an interior vertex of degree 3")
    diffs = [g[u] - g[o] for u in nbrs]
    total = sum(diffs)
    if not _eq(total, 0, tol):
        raise PreconditionError(f"differences at {o} sum to {total}: g is not harmonic there")
    a, b, c = sorted(diffs)
    if _eq(a, c, tol):
        raise PreconditionError(f"g is constant around {o}")
    # choose the sign of the rescaling so that the middle value is <= 0
    scale = 1 / c if (b < 0 or _eq(b, 0, tol)) else 1 / a
    a, b, c = sorted(scale * d for d in diffs)
    if _eq(b, 0, tol):
        kind = "CASE1"
    elif _eq(a, b, tol):
        kind = "CASE2"
    else:
        kind = "CASE3"
    return ColourCase(kind, a, b, c, scale)


@dataclass
class EdgeColouring:
    colours: dict
    carrier: Graph
    interior: frozenset
    case: ColourCase | None = None
    h_cycles: list = field(default_factory=list)
    h_paths: list = field(default_factory=list)

    def rows(self):
        return [[u[0], u[1], v[0], v[1], col] for (u, v), col in sorted(self.colours.items())]


def _h_components(carrier, h_edges):
    adj = {v: [] for v in carrier.vertices}
    for u, v in h_edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = set()
    comps = []
    for v in carrier.vertices:
        if v in seen or not adj[v]:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return adj, comps


def _walk(adj, start, first):
    """Vertex sequence following H from ``start`` through ``first``."""
    seq = [start, first]
    while True:
        prev, cur = seq[-2], seq[-1]
        nxt = [w for w in adj[cur] if w != prev]
        if not nxt or nxt[0] == start:
            return seq, bool(nxt)
        seq.append(nxt[0])


def _key(u, v):
    return (u, v) if u < v else (v, u)


def three_edge_colour(window: Graph, g: VertexField, case: ColourCase, tol: float = TOL) -> EdgeColouring:
    delta = {(u, v): case.scale * (g[u] - g[v]) for u, v in window.edges()}
    interior = window.interior()
    colours = {}
    out = EdgeColouring(colours, window, interior, case)
    if case.kind == "CASE3":
        levels = []
        for d in delta.values():
            if not any(_eq(abs(d), x, tol) for x in levels):
                levels.append(abs(d))
        if len(levels) > 3:
            raise ColouringError(f"|dg| takes {len(levels)} values; expected 3")
        levels.sort()
        names = (RED, BLUE, GREEN)
        for e, d in delta.items():
            colours[e] = names[next(i for i, x in enumerate(levels) if _eq(abs(d), x, tol))]
        return out

    # CASE1: red where dg vanishes; CASE2: red where |dg| = 1 after rescaling
    target = 0 if case.kind == "CASE1" else 1
    h_edges = []
    for e, d in delta.items():
        if _eq(abs(d), target, tol):
            colours[e] = RED
        else:
            h_edges.append(e)
    for v in interior:
        reds = sum(1 for w in window.adj[v] if colours.get(_key(v, w)) == RED)
        if reds != 1:
            raise ColouringError(f"{v} has {reds} red edges; g does not match {case.kind}")

    adj, comps = _h_components(window, h_edges)
    for comp in comps:
        ends = [v for v in comp if len(adj[v]) == 1]
        if ends:
            start = min(ends)
            seq, closed = _walk(adj, start, adj[start][0])
        else:
            start = comp[0]
            seq, closed = _walk(adj, start, min(adj[start]))
        steps = list(zip(seq, seq[1:] + ([seq[0]] if closed else [])))
        if closed:
            ups = sum(1 for u, v in steps if case.scale * (g[v] - g[u]) > 0)
            downs = len(steps) - ups
            if ups != downs:
                raise ColouringError(f"H-cycle through {start} has {ups} rises and {downs} falls")
            if len(steps) % 2:
                raise ColouringError(f"odd H-cycle of length {len(steps)} through {start}")
            out.h_cycles.append(len(steps))
        else:
            out.h_paths.append(len(steps))
        for i, (u, v) in enumerate(steps):
            colours[_key(u, v)] = BLUE if i % 2 == 0 else GREEN
    return out


@dataclass(frozen=True)
class ColouringReport:
    passed: bool
    proper: bool
    perfect: bool
    violations: tuple


def verify_colouring(c: EdgeColouring) -> ColouringReport:
    """Properness everywhere; every colour class a perfect matching of the interior."""
    g = c.carrier
    violations = []
    proper = perfect = True
    for v in g.vertices:
        seen = {}
        for w in g.adj[v]:
            col = c.colours.get(_key(v, w))
            if col is None:
                violations.append((v, f"edge to {w} uncoloured"))
                proper = False
                continue
            if col in seen:
                violations.append((v, f"two {col} edges"))
                proper = False
            seen[col] = w
        if v in c.interior and set(seen) != {RED, BLUE, GREEN}:
            violations.append((v, f"colours present {sorted(seen)}"))
            perfect = False
    return ColouringReport(proper and perfect, proper, perfect, tuple(violations))


def interior_cases(g: VertexField, vertices, tol: float = TOL) -> set[str]:
    return {classify_case(g, v, tol).kind for v in vertices}
