"""Exact integer linear algebra on small dense matrices.

Conventions used throughout the package:

* a vector is a tuple of Python ints,
* a matrix is a tuple of row tuples (so it is hashable and usable as a
  dict key),
* matrices act on column vectors, ``mat_vec(M, v) = M @ v``,
* no floating point anywhere; rational intermediates use ``Fraction``.

Ranks in scope are tiny (at most 8), so everything is dense and the
normal-form algorithms favor clarity and determinism over asymptotics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def identity_matrix(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zero_matrix(rows, cols):
    return tuple(tuple(0 for _ in range(cols)) for _ in range(rows))


def transpose(m):
    return tuple(tuple(r) for r in zip(*m))


def mat_mul(a, b):
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(m, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def vec_add(u, v):
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u, v):
    return tuple(x - y for x, y in zip(u, v))


def vec_neg(v):
    return tuple(-x for x in v)


def vec_scale(c, v):
    return tuple(c * x for x in v)


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def det(m):
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def mat_inverse_fractions(m):
    """Exact inverse as a Fraction matrix; raises ValueError if singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def intify_matrix(m):
    """Convert a Fraction matrix known to be integral; raises if it is not."""
    out = []
    for row in m:
        r = []
        for x in row:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"entry {x} is not an integer")
                r.append(x.numerator)
            else:
                r.append(int(x))
        out.append(tuple(r))
    return tuple(out)


def unimodular_inverse(m):
    """Integer inverse of a matrix with determinant +-1."""
    return intify_matrix(mat_inverse_fractions(m))


def adjugate_and_det(m):
    """(adj, d) with m @ adj = d * identity, both exact integers."""
    d = det(m)
    if d == 0:
        raise ValueError("matrix is singular")
    inv = mat_inverse_fractions(m)
    adj = tuple(tuple(int(x * d) for x in row) for row in inv)
    return adj, d


def smith_normal_form(m):
    """(U, D, V) with U @ m @ V = D, U and V unimodular, D diagonal with
    d1 | d2 | ... >= 0.

    Pivoting scans for the entry of least absolute value, first by row
    then by column, so the output is deterministic.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(r) for r in m]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):
        for r in a:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def clear_from(t):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = abs(a[i][j])
                    if x and (best is None or x < best[0]):
                        best = (x, i, j)
            if best is None:
                return False
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            dirty = False
            for i in range(rows):
                if i != t and a[i][t]:
                    add_row(t, i, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        dirty = True
            if dirty:
                continue
            for j in range(cols):
                if j != t and a[t][j]:
                    add_col(t, j, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        dirty = True
            if dirty:
                continue
            if a[t][t] < 0:
                negate_row(t)
            return True

    limit = min(rows, cols)
    rank = 0
    for t in range(limit):
        if not clear_from(t):
            break
        rank += 1

    # enforce the divisibility chain d1 | d2 | ...
    changed = True
    while changed:
        changed = False
        for i in range(rank - 1):
            x, y = a[i][i], a[i + 1][i + 1]
            if y % x != 0:
                add_row(i + 1, i, 1)
                for t in range(i, rank):
                    clear_from(t)
                changed = True
                break

    d = tuple(tuple(a[i][j] if i == j else 0 for j in range(cols)) for i in range(rows))
    return (tuple(tuple(r) for r in u), d, tuple(tuple(r) for r in v))


def hermite_row_form(m):
    """(H, T) with H = T @ m, T unimodular, H the canonical row Hermite
    form: pivots positive, entries above a pivot reduced into [0, pivot),
    zero rows last."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(r) for r in m]
    t = [[int(i == j) for j in range(rows)] for i in range(rows)]

    def add_row(src, dst, q):
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        t[dst] = [x + q * y for x, y in zip(t[dst], t[src])]

    pr = 0
    for c in range(cols):
        while True:
            best = None
            for i in range(pr, rows):
                x = abs(a[i][c])
                if x and (best is None or x < best[0]):
                    best = (x, i)
            if best is None:
                break
            _, pi = best
            if pi != pr:
                a[pr], a[pi] = a[pi], a[pr]
                t[pr], t[pi] = t[pi], t[pr]
            done = True
            for i in range(pr + 1, rows):
                if a[i][c]:
                    add_row(pr, i, -(a[i][c] // a[pr][c]))
                    if a[i][c]:
                        done = False
            if done:
                break
        if best is None:
            continue
        if a[pr][c] < 0:
            a[pr] = [-x for x in a[pr]]
            t[pr] = [-x for x in t[pr]]
        for i in range(pr):
            q = a[i][c] // a[pr][c]
            if q:
                add_row(pr, i, -q)
        pr += 1
        if pr == rows:
            break
    return (tuple(tuple(r) for r in a), tuple(tuple(r) for r in t))


def span_rank(vectors):
    """Rank over Q of a list of integer vectors."""
    if not vectors:
        return 0
    h, _ = hermite_row_form(tuple(vectors))
    return sum(1 for row in h if any(row))


def integer_kernel(m, cols=None):
    """Canonical basis of the saturated lattice {v : m @ v = 0}.

    ``cols`` must be given when m has no rows.
    """
    rows = len(m)
    if rows == 0:
        if cols is None:
            raise ValueError("kernel of an empty matrix needs an explicit column count")
        return tuple(identity_matrix(cols))
    ncols = len(m[0])
    _, d, v = smith_normal_form(m)
    rank = sum(1 for i in range(min(rows, ncols)) if d[i][i] != 0)
    vt = transpose(v)
    basis = vt[rank:]
    if not basis:
        return ()
    h, _ = hermite_row_form(basis)
    return tuple(row for row in h if any(row))


@dataclass(frozen=True)
class LatticeQuotient:
    """Free quotient of Z^ambient_rank by the span of the relation vectors.

    ``projection`` (free_rank x ambient_rank) realizes the quotient map
    with torsion discarded; ``section`` is an integer right inverse,
    projection @ section = identity. ``torsion_invariants`` lists the
    invariant factors > 1 of the torsion subgroup.
    """

    ambient_rank: int
    relation_generators: tuple
    free_rank: int
    projection: tuple
    section: tuple
    torsion_invariants: tuple

    def project(self, v):
        return mat_vec(self.projection, v)

    def lift(self, v):
        return mat_vec(self.section, v)


def quotient_lattice(rank, relations):
    relations = tuple(tuple(r) for r in relations)
    for r in relations:
        if len(r) != rank:
            raise ValueError("relation vector has wrong length")
    if not relations:
        ident = identity_matrix(rank)
        return LatticeQuotient(rank, (), rank, ident, ident, ())
    rel_cols = transpose(relations)
    u, d, _ = smith_normal_form(rel_cols)
    diag = [d[i][i] for i in range(min(rank, len(relations)))]
    r = sum(1 for x in diag if x != 0)
    torsion = tuple(x for x in diag if x > 1)
    u_inv = unimodular_inverse(u)
    projection = u[r:]
    section = tuple(row[r:] for row in u_inv)
    free_rank = rank - r
    if free_rank:
        # canonicalize so the output does not depend on SNF internals
        h, t = hermite_row_form(projection)
        projection = h
        section = mat_mul(section, unimodular_inverse(t))
    else:
        projection = ()
        section = tuple(() for _ in range(rank))
    for rel in relations:
        if any(mat_vec(projection, rel)):
            raise AssertionError("projection does not annihilate a relation")
    if free_rank and mat_mul(projection, section) != identity_matrix(free_rank):
        raise AssertionError("section is not a right inverse of the projection")
    return LatticeQuotient(rank, relations, free_rank, projection, section, torsion)


def solve_exact(a, b):
    """The rational solution x of a @ x = b when a has full column rank;
    returns None if the system is inconsistent."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [[Fraction(a[i][j]) for j in range(cols)] + [Fraction(b[i])] for i in range(rows)]
    pr = 0
    pivots = []
    for c in range(cols):
        piv = next((i for i in range(pr, rows) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[pr], aug[piv] = aug[piv], aug[pr]
        p = aug[pr][c]
        aug[pr] = [x / p for x in aug[pr]]
        for i in range(rows):
            if i != pr and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[pr])]
        pivots.append(c)
        pr += 1
    if len(pivots) < cols:
        raise ValueError("matrix does not have full column rank")
    for i in range(pr, rows):
        if aug[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = aug[i][cols]
    return tuple(x)
