"""Exact linear algebra over the rationals.

These routines back every oracle in the package: rank by fraction-free
(Bareiss) elimination over arbitrary-precision integers, kernel bases and
solvability by rational reduced row echelon form.  No floating point enters
any code path here.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Row = list
Matrix = list  # list of rows


def to_integer_rows(m) -> list[list[int]]:
    """Copy any matrix-like into integer rows, clearing denominators per row.

    Row scaling by positive integers preserves rank, kernels of the transpose,
    and column-space membership structure used by the callers.
    """
    rows = _as_rows(m)
    out: list[list[int]] = []
    for row in rows:
        fracs = [Fraction(x) for x in row]
        denom = 1
        for f in fracs:
            denom = denom * f.denominator // gcd(denom, f.denominator)
        out.append([int(f * denom) for f in fracs])
    return out


def _as_rows(m) -> list[list]:
    if hasattr(m, "toarray"):  # scipy sparse
        m = m.toarray()
    if hasattr(m, "tolist"):  # numpy
        m = m.tolist()
    return [list(row) for row in m]


def rank(m) -> int:
    """Exact rank via Bareiss fraction-free Gaussian elimination."""
    a = to_integer_rows(m)
    if not a or not a[0]:
        return 0
    n_rows, n_cols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, n_rows):
            for j in range(c + 1, n_cols):
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == n_rows:
            break
    return r


def rref(m) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot column list)."""
    a = [[Fraction(x) for x in row] for row in _as_rows(m)]
    if not a:
        return [], []
    n_rows, n_cols = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return a, pivots


def kernel_basis(m) -> list[list[Fraction]]:
    """Basis of the right null space of ``m`` as exact rational columns."""
    rows = _as_rows(m)
    if not rows:
        return []
    n_cols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n_cols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fc]
        basis.append(v)
    return basis


def nullity(m) -> int:
    rows = _as_rows(m)
    if not rows or not rows[0]:
        return 0
    return len(rows[0]) - rank(rows)


def solve_consistent(m, v: Sequence) -> bool:
    """Whether the system m x = v admits an exact rational solution."""
    rows = _as_rows(m)
    target = [Fraction(x) for x in v]
    if not rows:
        return all(x == 0 for x in target)
    aug = [row + [t] for row, t in zip(rows, target)]
    red, pivots = rref(aug)
    n_cols = len(rows[0])
    return n_cols not in pivots


def hstack(*mats) -> list[list]:
    """Column-concatenate row-major matrices (all same row count)."""
    parts = [_as_rows(m) for m in mats if m is not None]
    parts = [p for p in parts if p]
    if not parts:
        return []
    if len({len(p) for p in parts}) > 1:
        raise ValueError("row counts differ")
    return [sum((p[i] for p in parts), []) for i in range(len(parts[0]))]


def columns(m) -> list[list]:
    rows = _as_rows(m)
    if not rows:
        return []
    return [[row[j] for row in rows] for j in range(len(rows[0]))]


def from_columns(cols: Sequence[Sequence]) -> list[list]:
    cols = [list(c) for c in cols]
    if not cols:
        return []
    return [[c[i] for c in cols] for i in range(len(cols[0]))]


def intersection_dim(u_cols: Sequence[Sequence], w_cols: Sequence[Sequence]) -> int:
    """dim(span U  ∩  span W) = dim U + dim W - dim(U + W), exactly."""
    if not u_cols or not w_cols:
        return 0
    u = from_columns(u_cols)
    w = from_columns(w_cols)
    du = rank(u)
    dw = rank(w)
    dsum = rank(hstack(u, w))
    return du + dw - dsum
