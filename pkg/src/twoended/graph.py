"""Periodic layered graphs, their finite truncations, balls and cuts.

A 2-ended graph is described by a :class:`LayeredSpec`: a Z-indexed stack of
identical layers of ``m`` vertices, with the same intra-layer edges in every
layer and the same rules joining layer ``n`` to layer ``n + 1``.  Vertices are
pairs ``(n, k)`` with ``n`` the layer index and ``k`` in ``Z/mZ``.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import InsufficientTruncationError, InvalidSpecError, PreconditionError

Vertex = tuple[int, int]
Edge = tuple[Vertex, Vertex]


@dataclass(frozen=True)
class LayeredSpec:
    """Finite periodic description of a 2-ended infinite graph.

    ``intra`` holds unordered pairs ``{a, b}`` joining ``(n, a)`` and ``(n, b)``;
    ``cross`` holds pairs ``(j, j')`` joining ``(n, j)`` and ``(n + 1, j')``.
    """

    m: int
    intra: frozenset[tuple[int, int]]
    cross: frozenset[tuple[int, int]]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise InvalidSpecError(f"layer size must be a positive integer, got {self.m!r}")
        for a, b in self.intra:
            if not (0 <= a < self.m and 0 <= b < self.m):
                raise InvalidSpecError(f"intra rule {a}-{b} outside Z/{self.m}Z")
            if a == b:
                raise InvalidSpecError(f"intra rule {a}-{b} is a self-loop")
        for j, jj in self.cross:
            if not (0 <= j < self.m and 0 <= jj < self.m):
                raise InvalidSpecError(f"cross rule ({j},{jj}) outside Z/{self.m}Z")
        if not self.cross:
            raise InvalidSpecError("no cross rules: layers never meet, the graph is not 2-ended")
        gcd = self._cycle_voltage_gcd()
        if gcd is None:
            raise InvalidSpecError("layer quotient is disconnected: expansion is disconnected")
        if gcd != 1:
            raise InvalidSpecError(
                f"cross rules {sorted(self.cross)} only connect layers {gcd} apart: "
                "expansion is disconnected"
            )
        up: dict[int, list[int]] = {k: [] for k in range(self.m)}
        down: dict[int, list[int]] = {k: [] for k in range(self.m)}
        same: dict[int, list[int]] = {k: [] for k in range(self.m)}
        for a, b in sorted(self.intra):
            same[a].append(b)
            same[b].append(a)
        for j, jj in sorted(self.cross):
            up[j].append(jj)
            down[jj].append(j)
        object.__setattr__(self, "_same", {k: tuple(v) for k, v in same.items()})
        object.__setattr__(self, "_up", {k: tuple(v) for k, v in up.items()})
        object.__setattr__(self, "_down", {k: tuple(v) for k, v in down.items()})

    @classmethod
    def from_rules(cls, m, intra, cross, name=""):
        """Build a spec from lists of pairs, rejecting duplicated rules."""
        intra_set = set()
        for a, b in intra:
            a, b = int(a), int(b)
            key = (min(a, b), max(a, b))
            if key in intra_set:
                raise InvalidSpecError(f"intra rule {a}-{b} duplicates an existing edge")
            intra_set.add(key)
        cross_set = set()
        for j, jj in cross:
            key = (int(j), int(jj))
            if key in cross_set:
                raise InvalidSpecError(f"cross rule {key} duplicates an existing edge")
            cross_set.add(key)
        return cls(int(m), frozenset(intra_set), frozenset(cross_set), name=name)

    def _cycle_voltage_gcd(self):
        # Quotient graph on Z/mZ; crossing a cross rule upward carries voltage +1.
        # The expansion is connected iff the quotient is connected and the
        # voltages of its closed walks generate Z.
        nbrs: dict[int, list[tuple[int, int]]] = {k: [] for k in range(self.m)}
        for a, b in self.intra:
            nbrs[a].append((b, 0))
            nbrs[b].append((a, 0))
        for j, jj in self.cross:
            nbrs[j].append((jj, 1))
            nbrs[jj].append((j, -1))
        level = {0: 0}
        queue = deque([0])
        while queue:
            a = queue.popleft()
            for b, w in nbrs[a]:
                if b not in level:
                    level[b] = level[a] + w
                    queue.append(b)
        if len(level) != self.m:
            return None
        g = 0
        for a in range(self.m):
            for b, w in nbrs[a]:
                g = math.gcd(g, abs(level[a] + w - level[b]))
        return g

    def neighbours(self, v: Vertex) -> list[Vertex]:
        n, k = v
        k %= self.m
        out = [(n, b) for b in self._same[k]]
        out += [(n + 1, b) for b in self._up[k]]
        out += [(n - 1, b) for b in self._down[k]]
        return out

    def degree(self, k: int) -> int:
        k %= self.m
        return len(self._same[k]) + len(self._up[k]) + len(self._down[k])

    def is_edge(self, u: Vertex, v: Vertex) -> bool:
        (n, k), (nn, kk) = u, v
        k, kk = k % self.m, kk % self.m
        if n == nn:
            return (min(k, kk), max(k, kk)) in self.intra
        if nn == n + 1:
            return (k, kk) in self.cross
        if nn == n - 1:
            return (kk, k) in self.cross
        return False

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "intra": [list(p) for p in sorted(self.intra)],
            "cross": [list(p) for p in sorted(self.cross)],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def loads(cls, text: str, name: str = "") -> "LayeredSpec":
        try:
            data = json.loads(text)
            return cls.from_rules(data["m"], data.get("intra", []), data.get("cross", []), name=name)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidSpecError):
                raise
            raise InvalidSpecError(f"malformed spec document: {exc}") from exc


def path_spec() -> LayeredSpec:
    return LayeredSpec.from_rules(1, [], [(0, 0)], name="path")


def ladder_spec() -> LayeredSpec:
    return LayeredSpec.from_rules(2, [(0, 1)], [(0, 0), (1, 1)], name="ladder")


def builtin_spec(name: str) -> LayeredSpec:
    if name == "path":
        return path_spec()
    if name == "ladder":
        return ladder_spec()
    if name == "gamma":
        from .symmetry import gamma_spec

        return gamma_spec()
    raise KeyError(name)


BUILTIN_SPECS = ("path", "ladder", "gamma")


def load_spec(ref: str) -> LayeredSpec:
    """Resolve a built-in spec name or read a spec document from disk."""
    if ref in BUILTIN_SPECS:
        return builtin_spec(ref)
    try:
        with open(ref) as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidSpecError(f"cannot read spec {ref!r}: {exc}") from exc
    return LayeredSpec.loads(text, name=ref)


@dataclass(frozen=True, eq=False)
class Graph:
    """A finite simple graph with layer coordinates and an origin.

    ``host_degree`` records the degree each vertex has in the infinite graph
    the truncation came from; vertices whose degree here matches it are
    *interior*.  For graphs that are not truncations it equals the degree.
    """

    vertices: tuple[Vertex, ...]
    adj: Mapping[Vertex, tuple[Vertex, ...]]
    origin: Vertex
    window: tuple[int, int]
    host_degree: Mapping[Vertex, int]
    spec: LayeredSpec | None = None

    def __post_init__(self):
        if self.origin not in self.adj:
            raise PreconditionError(f"origin {self.origin} is not a vertex")
        for v, nb in self.adj.items():
            for w in nb:
                if v not in self.adj.get(w, ()):
                    raise PreconditionError(f"adjacency not symmetric at {v}-{w}")
                if abs(v[0] - w[0]) > 1:
                    raise PreconditionError(f"edge {v}-{w} skips a layer")

    @classmethod
    def from_edges(cls, vertices: Iterable[Vertex], edges: Iterable[Edge], origin=None) -> "Graph":
        verts = sorted(set(vertices))
        adj: dict[Vertex, list[Vertex]] = {v: [] for v in verts}
        for u, v in edges:
            if u == v:
                raise PreconditionError(f"self-loop at {u}")
            if v in adj[u]:
                continue
            adj[u].append(v)
            adj[v].append(u)
        frozen = {v: tuple(sorted(nb)) for v, nb in adj.items()}
        layers = [v[0] for v in verts]
        return cls(
            vertices=tuple(verts),
            adj=frozen,
            origin=verts[0] if origin is None else origin,
            window=(min(layers), max(layers)),
            host_degree={v: len(nb) for v, nb in frozen.items()},
        )

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in self.adj

    def neighbours(self, v: Vertex) -> tuple[Vertex, ...]:
        return self.adj[v]

    def degree(self, v: Vertex) -> int:
        return len(self.adj[v])

    def edges(self) -> list[Edge]:
        """Every edge once, as ``(u, v)`` with ``u < v``, sorted."""
        return [(u, v) for u in self.vertices for v in self.adj[u] if u < v]

    def is_interior(self, v: Vertex) -> bool:
        return len(self.adj[v]) == self.host_degree[v]

    def interior(self) -> frozenset[Vertex]:
        return frozenset(v for v in self.vertices if self.is_interior(v))

    def boundary_layers(self) -> tuple[frozenset[Vertex], frozenset[Vertex]]:
        lo, hi = self.window
        return (
            frozenset(v for v in self.vertices if v[0] == hi),
            frozenset(v for v in self.vertices if v[0] == lo),
        )

    def distances(self, source: Vertex | None = None, allowed=None) -> dict[Vertex, int]:
        source = self.origin if source is None else source
        dist = {source: 0}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for w in self.adj[v]:
                if w not in dist and (allowed is None or w in allowed):
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def components(self, removed=frozenset()) -> list[frozenset[Vertex]]:
        seen = set(removed)
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            comp = {v}
            seen.add(v)
            queue = deque([v])
            while queue:
                x = queue.popleft()
                for y in self.adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.add(y)
                        queue.append(y)
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.distances(self.vertices[0])) == len(self.vertices)

    def subgraph(self, keep: Iterable[Vertex]) -> "Graph":
        keep = set(keep)
        if self.origin not in keep:
            raise PreconditionError("induced subgraph must contain the origin")
        adj = {v: tuple(w for w in self.adj[v] if w in keep) for v in self.vertices if v in keep}
        return Graph(
            vertices=tuple(v for v in self.vertices if v in keep),
            adj=adj,
            origin=self.origin,
            window=self.window,
            host_degree={v: self.host_degree[v] for v in adj},
            spec=self.spec,
        )

    def to_dot(self, name="G", edge_colours=None, layer_colours=False) -> str:
        palette = ("lightblue", "lightpink", "palegreen", "khaki", "plum", "lightsalmon")
        lines = [f"graph {name} {{"]
        for v in self.vertices:
            attrs = [f'label="{v[0]},{v[1]}"']
            if layer_colours:
                attrs.append(f'style=filled fillcolor="{palette[v[0] % len(palette)]}"')
            lines.append(f'  "{v[0]},{v[1]}" [{" ".join(attrs)}];')
        for u, v in self.edges():
            attr = ""
            if edge_colours is not None and (u, v) in edge_colours:
                attr = f' [color="{edge_colours[(u, v)]}"]'
            lines.append(f'  "{u[0]},{u[1]}" -- "{v[0]},{v[1]}"{attr};')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_structured(self) -> str:
        doc = {
            "origin": list(self.origin),
            "window": list(self.window),
            "adjacency": [[v[0], v[1], [list(w) for w in self.adj[v]]] for v in self.vertices],
        }
        return json.dumps(doc, sort_keys=True)


def expand(spec: LayeredSpec, n_lo: int, n_hi: int, origin: Vertex | int = 0) -> Graph:
    """Induced subgraph of the expansion of ``spec`` on layers ``n_lo..n_hi``."""
    if not n_lo < 0 < n_hi:
        raise PreconditionError(f"window [{n_lo},{n_hi}] must straddle layer 0")
    if isinstance(origin, int):
        origin = (0, origin)
    if origin[0] != 0 or not 0 <= origin[1] < spec.m:
        raise PreconditionError(f"origin {origin} must be (0, k) with 0 <= k < {spec.m}")
    adj = {}
    host = {}
    for n in range(n_lo, n_hi + 1):
        for k in range(spec.m):
            v = (n, k)
            nb = spec.neighbours(v)
            if len(set(nb)) != len(nb):
                raise InvalidSpecError(f"vertex position {k} receives a duplicate edge")
            host[v] = len(nb)
            adj[v] = tuple(sorted(w for w in nb if n_lo <= w[0] <= n_hi))
    return Graph(
        vertices=tuple(sorted(adj)),
        adj=adj,
        origin=origin,
        window=(n_lo, n_hi),
        host_degree=host,
        spec=spec,
    )


@dataclass(frozen=True)
class Cut:
    X: frozenset[Vertex]
    Y: frozenset[Vertex]
    crossing: tuple[Edge, ...]

    def reversed(self) -> "Cut":
        return Cut(self.Y, self.X, tuple((y, x) for x, y in self.crossing))


def cut_from(X: Iterable[Vertex], g: Graph) -> Cut:
    X = frozenset(X)
    stray = [v for v in X if v not in g]
    if stray:
        raise PreconditionError(f"cut side contains non-vertices, e.g. {sorted(stray)[0]}")
    Y = frozenset(v for v in g.vertices if v not in X)
    crossing = tuple((x, y) for x in sorted(X) for y in g.adj[x] if y in Y)
    return Cut(X, Y, crossing)


def cut_flow(f, c: Cut):
    """Net value of the antisymmetric field ``f`` across ``c``, oriented X to Y."""
    return sum(f(x, y) for x, y in c.crossing)


@dataclass(frozen=True)
class BallView:
    radius: int
    ball: frozenset[Vertex]
    sphere: frozenset[Vertex]
    upper: frozenset[Vertex]
    lower: frozenset[Vertex]
    n0: int

    @property
    def layer_pos(self):
        return self.upper

    @property
    def layer_neg(self):
        return self.lower


def required_window(radius: int) -> tuple[int, int]:
    # edges move at most one layer, so B_r lies in layers [-r, r]
    return (-(radius + 2), radius + 2)


def _ball(dist, r):
    return frozenset(v for v, d in dist.items() if d <= r)


def _end_components(g: Graph, removed):
    top, bottom = g.boundary_layers()
    up, down = [], []
    for comp in g.components(removed):
        if comp & top:
            up.append(comp)
        if comp & bottom:
            down.append(comp)
    return up, down


def ball_view(g: Graph, n: int) -> BallView:
    if n < 1:
        raise PreconditionError("ball_view needs radius >= 1")
    lo, hi = g.window
    dist = g.distances()

    def check_inside(r):
        for v, d in dist.items():
            if d <= r and not lo < v[0] < hi:
                lo_req, hi_req = required_window(r - 1)
                raise InsufficientTruncationError(
                    f"insufficient truncation: B_{r} reaches boundary layer {v[0]} of "
                    f"window [{lo},{hi}]; use at least [{lo_req},{hi_req}]",
                    required=(lo_req, hi_req),
                )

    check_inside(n + 1)
    n0 = None
    k = 0
    while n0 is None:
        check_inside(k + 1)
        up, down = _end_components(g, _ball(dist, k))
        if len(up) != 1 or len(down) != 1:
            raise InsufficientTruncationError(
                f"truncation boundary splits into several components after removing B_{k}"
            )
        if up[0] != down[0]:
            n0 = k
        k += 1
    up, down = _end_components(g, _ball(dist, n - 1))
    sphere = frozenset(v for v, d in dist.items() if d == n)
    return BallView(
        radius=n,
        ball=_ball(dist, n),
        sphere=sphere,
        upper=sphere & up[0],
        lower=sphere & down[0],
        n0=n0,
    )
