"""Exact self-avoiding-walk counts on layered graphs and growth-rate checks.

For a vertex-transitive graph the counts are submultiplicative, so every
``c_n ** (1/n)`` is an upper bound for the connective constant.  Finite data
can therefore refute ``mu >= phi`` but never prove it.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import InsufficientTruncationError, PreconditionError
from .graph import LayeredSpec, Vertex, expand

PHI = (1 + math.sqrt(5)) / 2


@dataclass(frozen=True)
class SawCounts:
    origin: Vertex
    max_length: int
    counts: tuple[int, ...]
    radius: int

    def c(self, n: int) -> int:
        return self.counts[n - 1]


def _count_from(adj, origin, first, N):
    counts = [0] * (N + 1)
    visited = {origin, first}
    path = [first]
    counts[1] = 1
    # iterative DFS: stack of neighbour iterators parallel to ``path``
    stack = [iter(adj[first])]
    while stack:
        for w in stack[-1]:
            if w not in visited:
                visited.add(w)
                path.append(w)
                counts[len(path)] += 1
                if len(path) < N:
                    stack.append(iter(adj[w]))
                else:
                    visited.discard(path.pop())
                break
        else:
            stack.pop()
            visited.discard(path.pop())
    return counts


def _branch(args):
    return _count_from(*args)


def count_saws(spec: LayeredSpec, origin: Vertex | int = 0, N: int = 16, radius: int | None = None,
               workers: int = 1) -> SawCounts:
    """Count self-avoiding walks of length 1..N from ``origin`` by exhaustive DFS."""
    if N < 1:
        raise PreconditionError("N must be positive")
    if isinstance(origin, int):
        origin = (0, origin)
    radius = N + 1 if radius is None else radius
    if radius < N + 1:
        raise InsufficientTruncationError(
            f"window radius {radius} too small for walks of length {N}; need {N + 1}",
            required=(-(N + 1), N + 1),
        )
    g = expand(spec, -radius, radius, origin)
    jobs = [(g.adj, origin, first, N) for first in g.adj[origin]]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_branch, jobs))
    else:
        parts = [_branch(j) for j in jobs]
    totals = [sum(p[n] for p in parts) for n in range(1, N + 1)]
    return SawCounts(origin, N, tuple(totals), radius)


def count_saws_reference(spec: LayeredSpec, origin: Vertex, N: int) -> list[int]:
    """Independent enumerator: grows whole walks level by level from the spec rules."""
    walks = [(origin,)]
    counts = []
    for _ in range(N):
        walks = [w + (x,) for w in walks for x in spec.neighbours(w[-1]) if x not in w]
        counts.append(len(walks))
    return counts


def mu_estimates(counts: SawCounts):
    if counts.max_length < 2:
        raise PreconditionError("need counts up to length >= 2")
    out = []
    for n in range(1, counts.max_length + 1):
        c = counts.c(n)
        ratio = counts.c(n + 1) / c if n < counts.max_length else None
        out.append((n, c ** (1.0 / n), ratio))
    return out


def _fib_lucas(n):
    f0, f1 = 0, 1
    for _ in range(n):
        f0, f1 = f1, f0 + f1
    return f0, 2 * f1 - f0  # F_n, L_n = F_{n-1} + F_{n+1}


def at_least_phi_power(c: int, n: int) -> bool:
    """Exact test of ``c >= phi**n`` using ``phi**n = (L_n + F_n*sqrt 5) / 2``."""
    f, l = _fib_lucas(n)
    lhs = 2 * c - l
    return lhs >= 0 and lhs * lhs >= 5 * f * f


@dataclass(frozen=True)
class GoldenReport:
    passed: bool
    phi: float
    checked: tuple
    violations: tuple
    min_root: float


def golden_check(counts: SawCounts, n_min: int = 2) -> GoldenReport:
    """Pass iff no computed ``c_n`` (n >= n_min) falls below ``phi**n``."""
    checked = tuple(range(n_min, counts.max_length + 1))
    violations = tuple(n for n in checked if not at_least_phi_power(counts.c(n), n))
    min_root = min(counts.c(n) ** (1.0 / n) for n in checked)
    return GoldenReport(not violations, PHI, checked, violations, min_root)


def submultiplicative(counts: SawCounts) -> bool:
    N = counts.max_length
    return all(
        counts.c(a + b) <= counts.c(a) * counts.c(b)
        for a in range(1, N)
        for b in range(1, N - a + 1)
    )


def to_csv(counts: SawCounts) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "c_n", "c_n^(1/n)", "ratio"])
    for n, root, ratio in mu_estimates(counts):
        writer.writerow([n, counts.c(n), f"{root:.15g}", "" if ratio is None else f"{ratio:.15g}"])
    return buf.getvalue()
