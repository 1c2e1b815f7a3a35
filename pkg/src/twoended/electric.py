"""Edge and vertex fields, Kirchhoff's laws, Ohm duality and unit currents.

All conductances are 1.  Fields carry either exact rationals
(:attr:`NumericMode.EXACT`; ``gmpy2.mpq`` from the solver, ``Fraction`` from
user code, both mix freely) or floats (:attr:`NumericMode.FLOAT`).
"""

from __future__ import annotations

import enum
import json
import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Callable

import gmpy2

from . import linsolve
from .errors import KCLViolationError, NotConnectedError, PreconditionError
from .graph import Graph, Vertex

SOLVER_TOL = 1e-10
CROSS_MODE_TOL = 1e-9
MODE_ENV = "TWOENDED_MODE"


class NumericMode(enum.Enum):
    EXACT = "exact"
    FLOAT = "float"

    @classmethod
    def parse(cls, value) -> "NumericMode":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


def default_mode(fallback: NumericMode = NumericMode.EXACT) -> NumericMode:
    """Mode forced through the environment, else ``fallback``."""
    forced = os.environ.get(MODE_ENV)
    return NumericMode.parse(forced) if forced else fallback


def format_value(x) -> str:
    if isinstance(x, Rational) and not isinstance(x, int):
        return f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def parse_value(s):
    if isinstance(s, str) and "/" in s:
        return Fraction(s)
    return float(s)


@dataclass(frozen=True, eq=False)
class EdgeField:
    """Antisymmetric function on the directed edges of ``carrier``.

    Only the orientation ``(u, v)`` with ``u < v`` is stored, so
    ``f(x, y) == -f(y, x)`` holds by construction.
    """

    carrier: Graph
    values: dict
    meta: dict = field(default_factory=dict)

    def __call__(self, x: Vertex, y: Vertex):
        if x < y:
            return self.values[(x, y)]
        return -self.values[(y, x)]

    @classmethod
    def from_function(cls, g: Graph, fn: Callable[[Vertex, Vertex], object]) -> "EdgeField":
        return cls(g, {(u, v): fn(u, v) for u, v in g.edges()})

    def __add__(self, other: "EdgeField") -> "EdgeField":
        return EdgeField(self.carrier, {e: val + other.values[e] for e, val in self.values.items()})

    def scale(self, c) -> "EdgeField":
        return EdgeField(self.carrier, {e: c * val for e, val in self.values.items()})

    def max_abs(self):
        return max((abs(x) for x in self.values.values()), default=0)

    def rows(self) -> list[list]:
        return [[u[0], u[1], v[0], v[1], format_value(val)] for (u, v), val in sorted(self.values.items())]

    def dumps(self) -> str:
        return json.dumps(self.rows())


@dataclass(frozen=True, eq=False)
class VertexField:
    carrier: Graph
    values: dict

    def __post_init__(self):
        missing = [v for v in self.carrier.vertices if v not in self.values]
        if missing:
            raise PreconditionError(f"vertex field undefined at {missing[0]}")

    def __getitem__(self, v: Vertex):
        return self.values[v]

    @classmethod
    def from_function(cls, g: Graph, fn: Callable[[Vertex], object]) -> "VertexField":
        return cls(g, {v: fn(v) for v in g.vertices})

    def restrict(self, keep) -> "VertexField":
        sub = self.carrier.subgraph(keep)
        return VertexField(sub, {v: self.values[v] for v in sub.vertices})

    def shift(self, c) -> "VertexField":
        return VertexField(self.carrier, {v: x + c for v, x in self.values.items()})

    def scale(self, c) -> "VertexField":
        return VertexField(self.carrier, {v: c * x for v, x in self.values.items()})

    def variation(self):
        vals = list(self.values.values())
        return max(vals) - min(vals)

    def lipschitz(self):
        """Largest ``|u(x) - u(y)|`` over edges of the carrier."""
        return max((abs(self.values[u] - self.values[v]) for u, v in self.carrier.edges()), default=0)

    def rows(self) -> list[list]:
        return [[v[0], v[1], format_value(self.values[v])] for v in self.carrier.vertices]

    def dumps(self) -> str:
        return json.dumps(self.rows())


def net_out(f: EdgeField, x: Vertex):
    return sum(f(x, y) for y in f.carrier.adj[x])


def knl_residual(f: EdgeField, exclude=()):
    exclude = set(exclude)
    return max((abs(net_out(f, x)) for x in f.carrier.vertices if x not in exclude), default=0)


def _spanning_tree(g: Graph, root: Vertex):
    parent = {root: None}
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in g.adj[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
                queue.append(w)
    if len(parent) != len(g.vertices):
        raise NotConnectedError("carrier is disconnected")
    return parent, order


def _tree_path(parent, a, b):
    """Vertices on the tree path from ``a`` to ``b``."""
    up_a = [a]
    while parent[up_a[-1]] is not None:
        up_a.append(parent[up_a[-1]])
    seen = {v: i for i, v in enumerate(up_a)}
    up_b = [b]
    while up_b[-1] not in seen:
        up_b.append(parent[up_b[-1]])
    meet = up_b[-1]
    return up_a[: seen[meet] + 1] + up_b[-2::-1]


def _propagate(f: EdgeField, root: Vertex, value):
    parent, order = _spanning_tree(f.carrier, root)
    u = {root: value}
    for v in order[1:]:
        p = parent[v]
        u[v] = u[p] - f(p, v)
    return u, parent


def _cycle_defects(f: EdgeField, u, parent):
    tree = {(v, p) for v, p in parent.items() if p is not None}
    for a, b in f.carrier.edges():
        if (a, b) in tree or (b, a) in tree:
            continue
        # fundamental cycle: a -> b, then back along the tree from b to a
        yield (a, b), f(a, b) - (u[a] - u[b])


def kcl_residual(f: EdgeField):
    """Max ``|sum of f around C|`` over a fundamental cycle basis.

    Every cycle's sum is an integer combination of basis sums, so a zero
    residual means KCL holds on every cycle.
    """
    g = f.carrier
    u, parent = _propagate(f, g.vertices[0], 0 * next(iter(f.values.values()), 0))
    return max((abs(d) for _, d in _cycle_defects(f, u, parent)), default=0)


def ohm_dual_vertex(i: EdgeField, o: Vertex, v0=0, tol: float = CROSS_MODE_TOL) -> VertexField:
    """The potential ``u`` with ``u(o) = v0`` and ``i = du`` (spanning-tree propagation)."""
    u, parent = _propagate(i, o, v0)
    worst, worst_edge = 0, None
    for edge, d in _cycle_defects(i, u, parent):
        if abs(d) > abs(worst):
            worst, worst_edge = d, edge
    exact = all(isinstance(x, Rational) for x in i.values.values())
    if (exact and worst != 0) or abs(worst) > tol:
        a, b = worst_edge
        cycle = [a] + _tree_path(parent, b, a)
        raise KCLViolationError(
            f"KCL violated: cycle through {a}-{b} sums to {worst}", cycle=cycle, residual=worst
        )
    return VertexField(i.carrier, u)


def ohm_dual_edge(u: VertexField) -> EdgeField:
    vals = u.values
    return EdgeField(u.carrier, {(a, b): vals[a] - vals[b] for a, b in u.carrier.edges()})


def potential(g: Graph, p: Vertex, q: Vertex, mode=NumericMode.EXACT):
    """Solve ``L u = chi_p - chi_q`` with ``u(q) = 0``; returns ``(u, residual)``."""
    mode = NumericMode.parse(mode)
    if p == q:
        raise PreconditionError("unit current needs distinct terminals")
    if p not in g or q not in g:
        raise PreconditionError("terminals must be vertices of the graph")
    if not g.is_connected():
        raise NotConnectedError("unit current needs a connected graph")
    rhs = {p: 1, q: -1}
    if mode is NumericMode.EXACT:
        return linsolve.solve_exact(g, rhs, q), 0
    return linsolve.solve_float(g, rhs, q)


def unit_current(g: Graph, p: Vertex, q: Vertex, mode=NumericMode.EXACT) -> EdgeField:
    """The electrical current of intensity 1 from ``p`` to ``q`` in ``g``."""
    u, residual = potential(g, p, q, mode)
    f = ohm_dual_edge(VertexField(g, u))
    f.meta.update(p=p, q=q, mode=NumericMode.parse(mode).value, solver_residual=residual, potential=u)
    return f


def harmonic_residual(u: VertexField, vertices, local: bool = False):
    """Max deviation of ``u`` from its neighbour average over ``vertices``.

    Degrees are the host-graph degrees; a vertex whose degree was cut by the
    truncation is rejected.  ``local=True`` uses the carrier's own degrees.
    """
    g = u.carrier
    worst = 0
    for x in vertices:
        if not local and not g.is_interior(x):
            raise PreconditionError(f"vertex {x} has truncated degree in the carrier")
        nb = g.adj[x]
        if isinstance(u[x], Rational):
            avg = gmpy2.mpq(sum(u[y] for y in nb)) / len(nb)
        else:
            avg = sum(u[y] for y in nb) / len(nb)
        worst = max(worst, abs(u[x] - avg))
    return worst


@dataclass(frozen=True)
class MaxPrincipleReport:
    passed: bool
    constant: bool
    argmax: tuple
    argmin: tuple
    offending: tuple


def maximum_principle_check(u: VertexField, vertices, tol: float = SOLVER_TOL, local: bool = True):
    vertices = set(vertices)
    res = harmonic_residual(u, vertices, local=local)
    if (isinstance(res, Rational) and res != 0) or res > tol:
        raise PreconditionError(f"u is not harmonic on the given set (residual {res})")
    if not u.carrier.is_connected():
        raise NotConnectedError("maximum principle needs a connected carrier")
    vals = u.values
    hi, lo = max(vals.values()), min(vals.values())
    argmax = tuple(sorted(v for v, x in vals.items() if x == hi))
    argmin = tuple(sorted(v for v, x in vals.items() if x == lo))
    constant = hi == lo
    offending = tuple(v for v in argmax + argmin if v in vertices)
    return MaxPrincipleReport(constant or not offending, constant, argmax, argmin, offending)
