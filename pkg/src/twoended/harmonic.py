"""Lipschitz harmonic functions on 2-ended layered graphs.

:func:`limit_harmonic` builds the function as a limit of potentials of unit
currents flowing between the two far layers of growing balls.  The limit is
detected on a fixed probe ball; failure to settle is reported, not masked.

:func:`periodic_harmonic` gives the same object in closed form for periodic
specs: ``h(n, k) = c*n + phi(k)``.  It serves as an independent oracle and as
an exact input for colouring and symmetry checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .electric import (
    EdgeField,
    NumericMode,
    VertexField,
    harmonic_residual,
    net_out,
    ohm_dual_edge,
    ohm_dual_vertex,
    unit_current,
)
from .errors import ConvergenceError, InsufficientTruncationError, PreconditionError
from .graph import (
    BallView,
    Cut,
    Graph,
    LayeredSpec,
    Vertex,
    _end_components,
    ball_view,
    cut_flow,
    cut_from,
    expand,
    required_window,
)
from .linsolve import solve_dense_exact
from .report import format_report

CUT_TOL = 1e-9
FIT_TOL = 1e-7


def pick_terminal(vertices, tie_break):
    """Deterministic terminal: smallest (or largest) k, then smallest |n|."""
    key = lambda v: (v[1], abs(v[0]), v[0])
    if tie_break == "min":
        return min(vertices, key=key)
    if tie_break == "max":
        return max(vertices, key=key)
    raise ValueError(f"unknown tie-break {tie_break!r}")


def ball_in_truncation(spec: LayeredSpec, origin: Vertex, n: int) -> tuple[Graph, BallView]:
    """Truncate just wide enough for :func:`ball_view` at radius ``n``."""
    lo, hi = required_window(n)
    while True:
        g = expand(spec, lo, hi, origin)
        try:
            return g, ball_view(g, n)
        except InsufficientTruncationError as exc:
            if exc.required is None or (exc.required[1] <= hi and exc.required[0] >= lo):
                lo, hi = lo - 2, hi + 2
            else:
                lo, hi = min(lo, exc.required[0]), max(hi, exc.required[1])


def separation_radius(spec: LayeredSpec, origin: Vertex = (0, 0)) -> int:
    return ball_in_truncation(spec, origin, 1)[1].n0


def default_schedule(n0: int, probe: int, max_radius: int) -> list[int]:
    radii = []
    i = 0
    while n0 + 2**i < max_radius:
        r = n0 + 2**i
        if r > probe:
            radii.append(r)
        i += 1
    if max_radius > max(probe, n0):
        radii.append(max_radius)
    return radii


@dataclass
class LimitStep:
    radius: int
    p: Vertex
    q: Vertex
    ball_size: int
    sup_diff: object
    solver_residual: object


@dataclass
class LimitRun:
    spec: LayeredSpec
    origin: Vertex
    schedule: list[int]
    probe: int
    eps: float
    mode: NumericMode
    tie_break: str
    n0: int
    steps: list[LimitStep] = field(default_factory=list)
    h: VertexField | None = None
    full: VertexField | None = None
    current: EdgeField | None = None
    ends: tuple = ()
    cut: Cut | None = None
    converged: bool = False

    @property
    def lipschitz(self):
        return self.h.lipschitz()

    @property
    def cut_flow(self):
        return cut_flow(self.current, self.cut)

    def probe_interior(self):
        """Vertices of the probe ball whose whole neighbourhood is in it."""
        return [v for v in self.h.carrier.vertices if self.h.carrier.is_interior(v)]

    def harmonic_residual(self):
        return harmonic_residual(self.h, self.probe_interior())

    def report(self) -> str:
        items = [
            ("spec", self.spec.name or self.spec.dumps()),
            ("origin", self.origin),
            ("mode", self.mode.value),
            ("probe", self.probe),
            ("eps", self.eps),
            ("tie_break", self.tie_break),
            ("n0", self.n0),
            ("schedule", self.schedule),
        ]
        for s in self.steps:
            items.append((f"step.{s.radius}", [s.p, s.q, s.ball_size, "-" if s.sup_diff is None else s.sup_diff]))
        items += [
            ("converged", self.converged),
            ("final_radius", self.steps[-1].radius),
            ("lipschitz", self.lipschitz),
            ("harmonic_residual", self.harmonic_residual()),
            ("cut_flow", self.cut_flow),
            ("cut_size", len(self.cut.crossing)),
        ]
        for row in self.h.rows():
            items.append((f"h.{row[0]},{row[1]}", row[2]))
        return format_report("harmonic", items)


def _sup_diff(a: dict, b: dict):
    return max(abs(a[v] - b[v]) for v in a)


def limit_harmonic(
    spec: LayeredSpec,
    origin: Vertex | int = 0,
    probe: int = 3,
    eps: float = 1e-8,
    schedule=None,
    max_radius: int = 64,
    mode=NumericMode.EXACT,
    tie_break: str = "min",
) -> LimitRun:
    """Limit of unit-current potentials on growing balls, observed on ``B_probe``.

    Each step takes the ball ``B_n`` around ``origin``, sends a unit current
    from a vertex of the upper far layer to one of the lower far layer, and
    normalises its potential to vanish at ``origin``.  The run stops as soon as
    two consecutive steps agree on ``B_probe`` to within ``eps`` (sup norm).
    """
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    mode = NumericMode.parse(mode)
    if isinstance(origin, int):
        origin = (0, origin)
    n0 = separation_radius(spec, origin)
    if schedule is None:
        schedule = default_schedule(n0, probe, max_radius)
    schedule = list(schedule)
    if not schedule:
        raise PreconditionError("empty schedule")
    if any(a >= b for a, b in zip(schedule, schedule[1:])):
        raise PreconditionError(f"schedule {schedule} is not strictly increasing")
    if schedule[0] <= n0:
        raise PreconditionError(f"schedule radii must exceed n0={n0}")
    if probe >= schedule[0]:
        raise PreconditionError(f"probe radius {probe} must be below every scheduled radius")

    run = LimitRun(spec, origin, schedule, probe, eps, mode, tie_break, n0)
    prev = None
    for n in schedule:
        g, bv = ball_in_truncation(spec, origin, n)
        ball = g.subgraph(bv.ball)
        p, q = pick_terminal(bv.upper, tie_break), pick_terminal(bv.lower, tie_break)
        current = unit_current(ball, p, q, mode)
        zero = Fraction(0) if mode is NumericMode.EXACT else 0.0
        full = ohm_dual_vertex(current, origin, zero)
        dist = g.distances()
        probe_ball = [v for v in ball.vertices if dist[v] <= probe]
        here = {v: full[v] for v in probe_ball}
        diff = None if prev is None else _sup_diff(here, prev)
        run.steps.append(LimitStep(n, p, q, len(ball), diff, current.meta["solver_residual"]))
        prev = here
        up, _ = _end_components(g, frozenset(v for v, d in dist.items() if d <= n0))
        run.cut = cut_from([v for v in ball.vertices if v in up[0]], ball)
        run.current, run.full = current, full
        run.ends = (bv.upper, bv.lower)
        run.h = full.restrict(probe_ball)
        if diff is not None and diff <= eps:
            run.converged = True
            return run
    trace = [(s.radius, s.sup_diff) for s in run.steps]
    raise ConvergenceError(f"no convergence to eps={eps} within schedule {schedule}", trace=trace)


def periodic_harmonic(spec: LayeredSpec, g: Graph, origin: Vertex | None = None) -> VertexField:
    """Exact Lipschitz harmonic function ``c*n + phi(k)`` on the truncation ``g``.

    Normalised so that ``h(origin) = 0`` and the net flow of ``dh`` from the
    upper side of any layer cut to the lower side is 1.
    """
    m = spec.m
    # sum over neighbours of (h(w) - h(v)) = 0 at (0, k) with c = 1
    A = [[Fraction(0)] * m for _ in range(m)]
    b = [Fraction(0)] * m
    for k in range(m):
        for n, j in spec.neighbours((0, k)):
            if j != k:
                A[k][k] += 1
                A[k][j] -= 1
            b[k] += n
    # ground phi(0) = 0
    A[0] = [Fraction(int(j == 0)) for j in range(m)]
    b[0] = Fraction(0)
    phi = solve_dense_exact(A, b)
    flux = sum(1 + phi[jj] - phi[j] for j, jj in spec.cross)
    if flux == 0:
        raise PreconditionError("periodic potential carries no flux")
    origin = g.origin if origin is None else origin
    raw = {v: (v[0] + phi[v[1] % m]) / flux for v in g.vertices}
    base = raw[origin]
    return VertexField(g, {v: x - base for v, x in raw.items()})


@dataclass(frozen=True)
class CutInvarianceReport:
    flows: tuple
    signs: tuple
    reference: object
    max_deviation: object
    passed: bool


def verify_cut_invariance(h: VertexField, cuts, ends=None, tol: float = CUT_TOL) -> CutInvarianceReport:
    """Check that every end-separating cut carries the same flow of ``dh`` up to sign.

    ``ends`` is a pair ``(upper, lower)`` of vertex sets standing in for the two
    ends; it defaults to the top and bottom layers of the carrier.  Vertices
    where ``dh`` has a source must lie inside one of them.
    """
    g = h.carrier
    f = ohm_dual_edge(h)
    upper, lower = g.boundary_layers() if ends is None else (frozenset(ends[0]), frozenset(ends[1]))
    for v in g.vertices:
        s = net_out(f, v)
        if s != 0 and abs(s) > tol and v not in upper and v not in lower:
            raise PreconditionError(f"dh has a source at {v} outside the end markers")
    flows, signs = [], []
    for c in cuts:
        if upper <= c.X and lower <= c.Y:
            sign = 1
        elif upper <= c.Y and lower <= c.X:
            sign = -1
        else:
            raise PreconditionError("cut does not separate the ends")
        flows.append(cut_flow(f, c))
        signs.append(sign)
    signed = [s * x for s, x in zip(signs, flows)]
    ref = signed[0]
    dev = max(abs(x - ref) for x in signed)
    return CutInvarianceReport(tuple(flows), tuple(signs), ref, dev, dev <= tol)


def affine_fit(h1: VertexField, h2: VertexField):
    """Least-squares ``h2 ~ alpha*h1 + beta`` on the common vertices; sup residual."""
    common = [v for v in h1.carrier.vertices if v in h2.values]
    xs = [h1[v] for v in common]
    ys = [h2[v] for v in common]
    n = len(common)
    mx = sum(xs) / n
    my = sum(ys) / n
    var = sum((x - mx) * (x - mx) for x in xs)
    if var == 0:
        raise PreconditionError("h1 is constant: affine fit is degenerate")
    alpha = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / var
    beta = my - alpha * mx
    residual = max(abs(y - alpha * x - beta) for x, y in zip(xs, ys))
    return alpha, beta, residual


@dataclass(frozen=True)
class ZeroFlowReport:
    flow: object
    variation: object
    consistent: bool


def zero_flow_implies_constant_check(h: VertexField, c: Cut, tol: float = CUT_TOL) -> ZeroFlowReport:
    flow = abs(cut_flow(ohm_dual_edge(h), c))
    variation = h.variation()
    zero_flow = flow == 0 or flow <= tol
    constant = variation == 0 or variation <= tol
    return ZeroFlowReport(flow, variation, constant or not zero_flow)
