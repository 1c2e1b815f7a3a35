"""The cubic 2-ended vertex-transitive graph Gamma that is not a Cayley graph.

Vertices are ``(n, k)`` with ``k`` in ``Z/10Z``.  Each layer is a 10-cycle and
``(n, 2j+1)`` is joined to ``(n+1, 4j+2)``.  The automorphisms ``sigma``,
``tau`` and their twisted variants ``sigma~``, ``tau~`` act on coordinates by
piecewise-affine rules selected by ``n mod 4``; everything here is exact
integer arithmetic on the infinite vertex set.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .electric import VertexField, net_out, ohm_dual_edge
from .errors import PreconditionError, VerificationError
from .graph import Graph, LayeredSpec, Vertex, expand
from .report import format_report

M = 10


def gamma_spec() -> LayeredSpec:
    intra = {(k, (k + 1) % M) for k in range(M)}
    cross = {((2 * k + 1) % M, (4 * k + 2) % M) for k in range(M)}
    return LayeredSpec.from_rules(M, sorted(intra), sorted(cross), name="gamma")


GAMMA = gamma_spec()


@dataclass(frozen=True)
class _Table:
    """``(n, k) -> (s*n + t, a[n%4]*k + b[n%4])`` with ``s, a[r]`` in ``{-1, 1}``."""

    s: int
    t: int
    a: tuple[int, int, int, int]
    b: tuple[int, int, int, int]

    def forward(self, n, k):
        r = n % 4
        return self.s * n + self.t, (self.a[r] * k + self.b[r]) % M

    def backward(self, n, k):
        src = self.s * (n - self.t)
        r = src % 4
        return src, (self.a[r] * (k - self.b[r])) % M

    def forward_array(self, n, k):
        r = n % 4
        a, b = np.asarray(self.a)[r], np.asarray(self.b)[r]
        return self.s * n + self.t, (a * k + b) % M

    def backward_array(self, n, k):
        src = self.s * (n - self.t)
        r = src % 4
        a, b = np.asarray(self.a)[r], np.asarray(self.b)[r]
        return src, (a * (k - b)) % M


# the generator tables, case by case for n = 0, 1, 2, 3 (mod 4)
TABLES = {
    "sigma": _Table(1, 1, (1, 1, 1, 1), (0, 0, 0, 0)),
    "tau": _Table(-1, 0, (1, -1, 1, -1), (1, 3, 9, 7)),
    "sigma~": _Table(1, 1, (-1, -1, -1, -1), (2, 4, 8, 6)),
    "tau~": _Table(-1, 0, (-1, 1, -1, 1), (3, -1, 7, 1)),
}
ALIASES = {"s": "sigma", "t": "tau", "s~": "sigma~", "t~": "tau~", "σ": "sigma", "τ": "tau"}

_TOKEN = re.compile(r"([A-Za-zστ]+~?)(?:\^\(?(-?\d+)\)?)?")


@dataclass(frozen=True)
class CoordinateMap:
    """A word in the generators, read and applied right to left."""

    word: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        merged: list[tuple[str, int]] = []
        for name, e in self.word:
            if merged and merged[-1][0] == name:
                e += merged.pop()[1]
            if e:
                merged.append((name, e))
        object.__setattr__(self, "word", tuple(merged))

    @classmethod
    def gen(cls, name: str, exp: int = 1) -> "CoordinateMap":
        name = ALIASES.get(name, name)
        if name not in TABLES:
            raise KeyError(f"unknown generator {name!r}")
        return cls(((name, exp),) if exp else ())

    @classmethod
    def parse(cls, text: str) -> "CoordinateMap":
        word = []
        for tok in text.split():
            m = _TOKEN.fullmatch(tok)
            if not m:
                raise ValueError(f"cannot parse word letter {tok!r}")
            word.extend(cls.gen(m.group(1), int(m.group(2) or 1)).word)
        return cls(tuple(word))

    def __mul__(self, other: "CoordinateMap") -> "CoordinateMap":
        return CoordinateMap(self.word + other.word)

    def __pow__(self, e: int) -> "CoordinateMap":
        if e < 0:
            return self.inverse() ** (-e)
        return CoordinateMap(self.word * e)

    def inverse(self) -> "CoordinateMap":
        return CoordinateMap(tuple((g, -e) for g, e in reversed(self.word)))

    def __call__(self, v: Vertex) -> Vertex:
        return apply(self, v)

    def __str__(self):
        if not self.word:
            return "id"
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in self.word)


def apply(z: CoordinateMap, v: Vertex) -> Vertex:
    n, k = v
    k %= M
    for name, e in reversed(z.word):
        tab = TABLES[name]
        step = tab.forward if e > 0 else tab.backward
        for _ in range(abs(e)):
            n, k = step(n, k)
    return n, k


def apply_array(z: CoordinateMap, n: np.ndarray, k: np.ndarray):
    for name, e in reversed(z.word):
        tab = TABLES[name]
        step = tab.forward_array if e > 0 else tab.backward_array
        for _ in range(abs(e)):
            n, k = step(n, k)
    return n, k


def window_vertices(R: int) -> tuple[np.ndarray, np.ndarray]:
    n, k = np.meshgrid(np.arange(-R, R + 1), np.arange(M), indexing="ij")
    return n.ravel(), k.ravel()


SIGMA = CoordinateMap.gen("sigma")
TAU = CoordinateMap.gen("tau")
SIGMA_T = CoordinateMap.gen("sigma~")
TAU_T = CoordinateMap.gen("tau~")
IDENTITY = CoordinateMap()


def check_automorphism(z: CoordinateMap, R: int = 12) -> bool:
    """Edges with both ends in layers ``[-R, R]`` map to edges of Gamma.

    Adjacency of the image is decided by the edge rule itself, so nothing is
    lost at the window boundary.  Injectivity is checked on the window too.
    """
    if R < 2:
        raise PreconditionError("check_automorphism needs R >= 2")
    g = expand(GAMMA, -R, R)
    for u, v in g.edges():
        if not GAMMA.is_edge(apply(z, u), apply(z, v)):
            return False
    images = {apply(z, v) for v in g.vertices}
    return len(images) == len(g.vertices)


def transitivity_witness(u: Vertex, v: Vertex) -> CoordinateMap:
    (n, k), (nn, kk) = u, v
    word = SIGMA ** nn * TAU ** ((kk - k) % M) * SIGMA ** (-n)
    if apply(word, u) != (nn, kk % M):
        raise VerificationError(f"witness {word} does not send {u} to {v}")
    return word


@dataclass
class ClaimReport:
    claim: str
    verdict: str
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def render(self) -> str:
        return format_report(self.claim, [("verdict", self.verdict)] + self.witnesses)


def _report(claim, checks, witnesses):
    return ClaimReport(claim, "PASS" if all(checks) else "FAIL", witnesses)


def claim_vertex_transitive(pairs: int = 100, R: int = 12, seed: int = 0) -> ClaimReport:
    rng = random.Random(seed)
    checks, witnesses = [], []
    for i in range(pairs):
        u = (rng.randint(-R, R), rng.randrange(M))
        v = (rng.randint(-R, R), rng.randrange(M))
        try:
            w = transitivity_witness(u, v)
            checks.append(True)
        except VerificationError:
            checks.append(False)
            continue
        if i < 3:
            witnesses.append((f"witness.{u[0]},{u[1]}->{v[0]},{v[1]}", str(w)))
    checks.append(check_automorphism(SIGMA, R) and check_automorphism(TAU, R))
    witnesses.insert(0, ("pairs_verified", sum(checks[:-1])))
    witnesses.insert(1, ("sigma_tau_automorphisms", checks[-1]))
    return _report("claim1", checks, witnesses)


NONFREE_WORD = CoordinateMap.parse("tau^-3 sigma tau sigma")


def claim_nonfree() -> ClaimReport:
    w = NONFREE_WORD
    layer0 = [apply(w, (0, k)) for k in range(M)]
    checks = [
        apply(w, (0, 0)) == (0, 0),
        apply(w, (0, 1)) == (0, 9),
        all(layer0[k] == (0, (-k) % M) for k in range(M)),
    ]
    witnesses = [
        ("word", str(w)),
        ("fixes", (0, 0)),
        ("moves", [(0, 1), apply(w, (0, 1))]),
        ("layer0_closed_form", "v(0,k) -> v(0,-k)"),
        ("layer0_images", layer0),
    ]
    return _report("claim2", checks, witnesses)


LETTERS_ALL = [(g, e) for g in TABLES for e in (1, -1)]
LETTERS_ST = [(g, e) for g in ("sigma", "tau") for e in (1, -1)]


def _reduced_words(letters, max_len):
    """Yield ``(word, image_n, image_k)`` over the window, built right to left.

    ``word`` is the tuple of letters applied last-first; words containing a
    letter next to its inverse are skipped.
    """

    def extend(word, n, k):
        if len(word) == max_len:
            return
        for letter in letters:
            if word and word[0] == (letter[0], -letter[1]):
                continue
            tab = TABLES[letter[0]]
            step = tab.forward_array if letter[1] > 0 else tab.backward_array
            nn, kk = step(n, k)
            new = (letter,) + word
            yield new, nn, kk
            yield from extend(new, nn, kk)

    return extend


def _layer_images(n_img, R):
    rows = n_img.reshape(2 * R + 1, M)
    return rows[:, 0], bool(np.all(rows == rows[:, :1]))


def _word_scan(R, letter_sets):
    n0, k0 = window_vertices(R)
    idx01 = R * M + 1
    idx02 = R * M + 2
    idx00 = R * M
    stats = {"words": 0, "layer_ok": 0, "stab_words": 0, "stab_identity": 0, "stab_flip": 0,
             "stab_other": 0, "signatures": 0, "determination_conflicts": 0}
    signatures = {}
    for letters, max_len in letter_sets:
        for word, n, k in _reduced_words(letters, max_len)((), n0, k0):
            stats["words"] += 1
            _, ok = _layer_images(n, R)
            stats["layer_ok"] += ok
            if n[idx00] == 0 and k[idx00] == 0:
                stats["stab_words"] += 1
                layer_n, layer_k = n[idx00: idx00 + M], k[idx00: idx00 + M]
                if np.all(layer_n == 0) and np.all(layer_k == np.arange(M)):
                    stats["stab_identity"] += 1
                elif np.all(layer_n == 0) and np.all(layer_k == (-np.arange(M)) % M):
                    stats["stab_flip"] += 1
                else:
                    stats["stab_other"] += 1
            key = (int(n[idx01]), int(k[idx01]), int(n[idx02]), int(k[idx02]))
            # restrict to the sub-window that every word of this length keeps inside [-R, R]
            img = np.stack([n, k])
            if key in signatures:
                if not np.array_equal(signatures[key], img):
                    stats["determination_conflicts"] += 1
            else:
                signatures[key] = img
    stats["signatures"] = len(signatures)
    return stats


def ten_cycles(R: int = 2):
    """All 10-cycles of the Gamma truncation on layers ``[-R, R]``, canonically rooted."""
    g = expand(GAMMA, -R, R)
    cycles = []
    for start in g.vertices:
        stack = [(start, [start])]
        while stack:
            v, path = stack.pop()
            if len(path) == 10:
                if start in g.adj[v] and path[1] < path[-1]:
                    cycles.append(tuple(path))
                continue
            for w in g.adj[v]:
                if w > start and w not in path:
                    stack.append((w, path + [w]))
    return g, cycles


def separates(cycle, R_big: int) -> bool:
    """Does removing ``cycle`` split the truncation's top layer from its bottom?"""
    g = expand(GAMMA, -R_big, R_big)
    top, bottom = g.boundary_layers()
    for comp in g.components(frozenset(cycle)):
        if comp & top and comp & bottom:
            return False
    return True


def claim_layer_preservation(R: int = 12, max_len_all: int = 4, max_len_st: int = 8,
                             cycle_window: int = 2) -> ClaimReport:
    if R < max(max_len_all, max_len_st) + 2:
        raise PreconditionError("claim_layer_preservation needs R >= L + 2")
    stats = _word_scan(R, [(LETTERS_ALL, max_len_all), (LETTERS_ST, max_len_st)])
    _, cycles = ten_cycles(cycle_window)
    layer_cycles = [c for c in cycles if len({v[0] for v in c}) == 1]
    separating = [c for c in cycles if separates(c, cycle_window + 4)]
    sep_are_layers = all(len({v[0] for v in c}) == 1 for c in separating)
    gens_ok = all(check_automorphism(z, R) for z in (SIGMA, TAU, SIGMA_T, TAU_T))
    checks = [
        gens_ok,
        stats["layer_ok"] == stats["words"],
        stats["stab_other"] == 0,
        len(layer_cycles) == 2 * cycle_window + 1,
        sep_are_layers,
        len(separating) == len(layer_cycles),
    ]
    witnesses = [
        ("generators_preserve_edges", gens_ok),
        ("words_tested", stats["words"]),
        ("words_layer_preserving", stats["layer_ok"]),
        ("window_radius", R),
        ("stabiliser_words", stats["stab_words"]),
        ("stabiliser_identity", stats["stab_identity"]),
        ("stabiliser_flip", stats["stab_flip"]),
        ("stabiliser_other", stats["stab_other"]),
        ("ten_cycles", len(cycles)),
        ("ten_cycles_separating", len(separating)),
        ("separating_are_layers", sep_are_layers),
        ("sigma_L0", sorted({apply(SIGMA, (0, k))[0] for k in range(M)})),
        ("tau_L1", sorted({apply(TAU, (1, k))[0] for k in range(M)})),
    ]
    return _report("claims3-4", checks, witnesses)


def claim_unique_determination(R: int = 12, max_len_all: int = 4, max_len_st: int = 6) -> ClaimReport:
    """Finite form: words agreeing on ``v(0,1)`` and ``v(0,2)`` agree on the window."""
    stats = _word_scan(R, [(LETTERS_ALL, max_len_all), (LETTERS_ST, max_len_st)])
    tilde_t = CoordinateMap.parse("sigma tau sigma")
    tilde_s = CoordinateMap.parse("sigma tau^-1 sigma tau sigma")
    n, k = window_vertices(R - 4)
    tilde_ok = []
    for table, word in ((TAU_T, tilde_t), (SIGMA_T, tilde_s)):
        a = apply_array(table, n, k)
        b = apply_array(word, n, k)
        tilde_ok.append(bool(np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])))
    checks = [stats["determination_conflicts"] == 0, *tilde_ok]
    witnesses = [
        ("words_tested", stats["words"]),
        ("distinct_signatures", stats["signatures"]),
        ("conflicts", stats["determination_conflicts"]),
        ("tau~_equals_sigma_tau_sigma", tilde_ok[0]),
        ("sigma~_equals_sigma_tau^-1_sigma_tau_sigma", tilde_ok[1]),
    ]
    return _report("claim5", checks, witnesses)


NOT_CAYLEY_CASES = (
    ("sigma,tau", "tau^-3 sigma tau sigma", lambda k: -k, 0),
    ("sigma~,tau", "tau sigma~ tau sigma~", lambda k: 6 - k, 3),
    ("sigma,tau~", "tau~ sigma tau~ sigma", lambda k: 4 - k, 2),
    ("sigma~,tau~", "tau~ sigma~ tau~ sigma~", lambda k: -2 - k, 9),
)


def claim_not_cayley() -> ClaimReport:
    checks, witnesses = [], []
    for pair, text, closed, fixed in NOT_CAYLEY_CASES:
        w = CoordinateMap.parse(text)
        closed_ok = all(apply(w, (0, k)) == (0, closed(k) % M) for k in range(M))
        fixes = apply(w, (0, fixed)) == (0, fixed)
        moved = next(k for k in range(M) if apply(w, (0, k)) != (0, k))
        checks += [closed_ok, fixes]
        witnesses += [
            (f"pair.{pair}.word", text),
            (f"pair.{pair}.closed_form", closed_ok),
            (f"pair.{pair}.fixes", (0, fixed)),
            (f"pair.{pair}.moves", [(0, moved), apply(w, (0, moved))]),
        ]
    # sigma' and tau' candidates: each sends v(0,1) where a transitive subgroup needs it
    for z, target in ((SIGMA, (1, 1)), (SIGMA_T, (1, 1)), (TAU, (0, 2)), (TAU_T, (0, 2))):
        checks.append(apply(z, (0, 1)) == target and check_automorphism(z, 12))
    witnesses.append(("candidates_are_automorphisms", all(checks[-4:])))
    return _report("claim6", checks, witnesses)


RELATORS = (
    "tau^10",
    "tau^-1 sigma tau sigma tau^-1 sigma tau sigma",
    "sigma^-1 tau^2 sigma tau^-4",
    "sigma^-2 tau sigma^-2 tau",
)


def acts_as_identity(z: CoordinateMap, R: int) -> bool:
    n, k = window_vertices(R)
    nn, kk = apply_array(z, n, k)
    return bool(np.array_equal(nn, n) and np.array_equal(kk, k))


def relations_check(R: int = 12) -> ClaimReport:
    if R < 8:
        raise PreconditionError("relations_check needs R >= 8")
    checks, witnesses = [], []
    for text in RELATORS:
        ok = acts_as_identity(CoordinateMap.parse(text), R)
        checks.append(ok)
        witnesses.append((f"relator.{text}", ok))
    control = acts_as_identity(TAU ** 9, R)
    witnesses.append(("control.tau^9_is_identity", control))
    checks.append(not control)
    witnesses.append(("window_radius", R))
    return _report("relators", checks, witnesses)


def skew_invariance(g: VertexField, z: CoordinateMap, window=None, tol: float = 1e-8):
    """Fit ``g(z(v)) = s*g(v) + a`` with ``s`` in ``{-1, +1}``; return ``(s, a, residual)``.

    ``window`` defaults to every carrier vertex whose image stays in the carrier.
    """
    carrier = g.carrier
    if window is None:
        window = [v for v in carrier.vertices if apply(z, v) in carrier]
    pairs = []
    for v in window:
        img = apply(z, v)
        if img not in carrier:
            raise PreconditionError(f"image {img} of {v} lies outside the carrier of g")
        pairs.append((g[v], g[img]))
    best = None
    for s in (1, -1):
        d = [gz - s * gv for gv, gz in pairs]
        hi, lo = max(d), min(d)
        a = (hi + lo) / 2
        res = (hi - lo) / 2
        if best is None or res < best[2]:
            best = (s, a, res)
    if best[2] > tol:
        raise VerificationError(f"neither sign fits g o z within {tol} (best residual {best[2]})")
    return best


def closed_form_g(graph: Graph) -> VertexField:
    """``g(n, k) = 3n + (k mod 2)``, harmonic on Gamma."""
    return VertexField(graph, {v: Fraction(3 * v[0] + v[1] % 2) for v in graph.vertices})


def claim_skew(R: int = 8) -> ClaimReport:
    from .harmonic import periodic_harmonic

    window = expand(GAMMA, -R, R)
    g = closed_form_g(window)
    h = periodic_harmonic(GAMMA, window)
    probe = [v for v in window.vertices if abs(v[0]) <= R - 2]
    checks, witnesses = [], []
    expected = {"sigma": (1, 3), "tau": (-1, 1)}
    for name, z in (("sigma", SIGMA), ("tau", TAU), ("sigma~", SIGMA_T), ("tau~", TAU_T)):
        s, a, res = skew_invariance(g, z, probe, tol=0)
        s2, a2, res2 = skew_invariance(h, z, probe, tol=0)
        checks += [res == 0, res2 == 0, s == s2]
        if name in expected:
            checks.append((s, a) == expected[name])
        witnesses += [(f"{name}.sign", s), (f"{name}.shift", a), (f"{name}.residual", res)]
    checks.append(h.values == {v: (x - g[window.origin]) / 10 for v, x in g.values.items()})
    witnesses.append(("limit_normalisation", "h = (3n + (k mod 2)) / 10"))
    return _report("skew", checks, witnesses)


def odd_degree_witness(g: VertexField, o: Vertex, tol: float = 1e-9):
    """Two edges at ``o`` whose ``|dg|`` differ."""
    carrier = g.carrier
    nbrs = carrier.adj[o]
    if len(nbrs) % 2 == 0:
        raise PreconditionError(f"{o} has even degree {len(nbrs)}")
    if len(nbrs) != carrier.host_degree[o]:
        raise PreconditionError(f"{o} has truncated degree in the carrier")
    out = net_out(ohm_dual_edge(g), o)
    if out != 0 and abs(out) > tol:
        raise PreconditionError(f"dg has a source at {o} (net out-flow {out})")
    diffs = [(u, g[o] - g[u]) for u in nbrs]
    if all(d == 0 for _, d in diffs):
        raise PreconditionError(f"g is constant around {o}")
    for (u, du), (w, dw) in itertools.combinations(diffs, 2):
        if abs(abs(du) - abs(dw)) > tol:
            return (o, u), (o, w)
    raise VerificationError(f"all |dg| agree at {o}; impossible at odd degree with zero net flow")


CHECKS = {
    "claim1": claim_vertex_transitive,
    "claim2": claim_nonfree,
    "claim3": claim_layer_preservation,
    "claim4": claim_layer_preservation,
    "claim5": claim_unique_determination,
    "claim6": claim_not_cayley,
    "relators": relations_check,
    "skew": claim_skew,
}


def run_checks(which: str = "all") -> list[ClaimReport]:
    if which == "all":
        order = ["claim1", "claim2", "claim3", "claim5", "claim6", "relators", "skew"]
    elif which in CHECKS:
        order = [which]
    else:
        raise KeyError(which)
    return [CHECKS[name]() for name in order]
