"""Grounded graph-Laplacian solves, exact (rational) and binary64."""

from __future__ import annotations

from fractions import Fraction

import gmpy2
import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla


def _grounded_system(g, ground):
    order = [v for v in g.vertices if v != ground]
    index = {v: i for i, v in enumerate(order)}
    return order, index


def solve_exact(g, rhs, ground):
    """Solve ``L u = rhs`` with ``u(ground) = 0`` over the rationals (``mpq`` values).

    Gaussian elimination on the sparse grounded Laplacian.  The matrix is
    symmetric positive definite once grounded on a connected graph, so
    diagonal pivots never vanish and no row exchanges are needed.  Vertex
    order follows ``g.vertices``; for layered graphs that keeps fill-in inside
    a band of roughly two layers.
    """
    order, index = _grounded_system(g, ground)
    size = len(order)
    rows = []
    b = []
    for v in order:
        row = {index[v]: gmpy2.mpq(len(g.adj[v]))}
        for w in g.adj[v]:
            if w != ground:
                row[index[w]] = gmpy2.mpq(-1)
        rows.append(row)
        b.append(gmpy2.mpq(rhs.get(v, 0)))

    for i in range(size):
        row_i = rows[i]
        piv = row_i[i]
        for j in sorted(c for c in row_i if c > i):
            row_j = rows[j]
            a_ji = row_j.pop(i, None)
            if not a_ji:
                continue
            factor = a_ji / piv
            for c, val in row_i.items():
                if c > i:
                    new = row_j.get(c, 0) - factor * val
                    if new:
                        row_j[c] = new
                    else:
                        row_j.pop(c, None)
            b[j] -= factor * b[i]

    x = [gmpy2.mpq(0)] * size
    for i in range(size - 1, -1, -1):
        row_i = rows[i]
        acc = b[i]
        for c, val in row_i.items():
            if c > i:
                acc -= val * x[c]
        x[i] = acc / row_i[i]

    out = {ground: gmpy2.mpq(0)}
    out.update(zip(order, x))
    return out


def solve_float(g, rhs, ground):
    """Binary64 counterpart of :func:`solve_exact`; returns ``(u, residual)``.

    The residual is the max-norm of ``L u - rhs`` over all vertices, the
    grounded one included.
    """
    order, index = _grounded_system(g, ground)
    size = len(order)
    data, ii, jj = [], [], []
    b = np.zeros(size)
    for v in order:
        i = index[v]
        data.append(float(len(g.adj[v])))
        ii.append(i)
        jj.append(i)
        for w in g.adj[v]:
            if w != ground:
                data.append(-1.0)
                ii.append(i)
                jj.append(index[w])
        b[i] = float(rhs.get(v, 0))
    if size == 0:
        return {ground: 0.0}, 0.0
    A = sp.csc_matrix((data, (ii, jj)), shape=(size, size))
    x = spla.spsolve(A, b)
    x = np.atleast_1d(x)
    u = {ground: 0.0}
    for v, val in zip(order, x):
        u[v] = float(val)
    residual = 0.0
    for v in g.vertices:
        lap = len(g.adj[v]) * u[v] - sum(u[w] for w in g.adj[v])
        residual = max(residual, abs(lap - float(rhs.get(v, 0))))
    return u, residual


def solve_dense_exact(A, b):
    """Solve a small dense nonsingular system over ``Fraction`` (row pivoting)."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(rhs)] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        M[col], M[piv] = M[piv], M[col]
        for r in range(n):
            if r != col and M[r][col] != 0:
                factor = M[r][col] / M[col][col]
                M[r] = [x - factor * y for x, y in zip(M[r], M[col])]
    return [M[i][n] / M[i][i] for i in range(n)]
