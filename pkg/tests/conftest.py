"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the library's elimination code: rank and
solvability are recomputed with a plain Fraction Gauss-Jordan so that every
DERIVED expectation in the suite is checked against a second implementation.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from homology_lab import build_complex, generate
from homology_lab.operators import boundary_matrix


def fraction_rows(m) -> list[list[Fraction]]:
    if hasattr(m, "toarray"):
        m = m.toarray()
    if hasattr(m, "tolist"):
        m = m.tolist()
    return [[Fraction(x) for x in row] for row in m]


def oracle_rank(m) -> int:
    """Rank by textbook Gauss-Jordan over exact rationals."""
    a = fraction_rows(m)
    if not a or not a[0]:
        return 0
    n_rows, n_cols = len(a), len(a[0])
    rank = 0
    for c in range(n_cols):
        piv = next((i for i in range(rank, n_rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][c]
        a[rank] = [x * inv for x in a[rank]]
        for i in range(n_rows):
            if i != rank and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == n_rows:
            break
    return rank


def oracle_solvable(m, v) -> bool:
    """Does m x = v have a rational solution?  Augmented elimination."""
    rows = fraction_rows(m)
    target = [Fraction(x) for x in v]
    if not rows:
        return all(x == 0 for x in target)
    aug = [row + [t] for row, t in zip(rows, target)]
    n_cols = len(rows[0])
    return oracle_rank(aug) == oracle_rank(rows)


def oracle_betti(k, r) -> int:
    """From-definition Betti number: dim ker of the r-boundary minus the rank
    of the (r+1)-boundary, all via the oracle eliminator."""
    n = k.size(r)
    if r == 0 or k.size(r - 1) == 0:
        dim_kernel = n
    else:
        dim_kernel = n - oracle_rank(boundary_matrix(k, r).toarray())
    if k.size(r + 1) == 0:
        rank_up = 0
    else:
        rank_up = oracle_rank(boundary_matrix(k, r + 1).toarray())
    return dim_kernel - rank_up


def random_point_cloud(rng, n_points, dim=2, spread=1.0):
    return (rng.random((n_points, dim)) * spread).tolist()


def random_rips(seed, n_points=8, threshold=0.55, max_dim=2):
    rng = np.random.default_rng(seed)
    return generate("vietoris_rips", points=random_point_cloud(rng, n_points),
                    threshold=threshold, max_dim=max_dim)


def random_rips_filtration(seed, n_points=7, t1=0.4, t2=0.7, max_dim=2):
    from homology_lab import validate_filtration

    rng = np.random.default_rng(seed)
    pts = random_point_cloud(rng, n_points)
    k1 = generate("vietoris_rips", points=pts, threshold=t1, max_dim=max_dim)
    k2 = generate("vietoris_rips", points=pts, threshold=t2, max_dim=max_dim)
    return validate_filtration(k1, k2)


@pytest.fixture
def hollow_triangle():
    return generate("hollow_triangle")


@pytest.fixture
def filled_triangle():
    return generate("filled_triangle")


@pytest.fixture
def filled_square():
    """Square with one diagonal and both triangles filled."""
    return build_complex(
        [[0, 1], [1, 2], [2, 3], [0, 3], [0, 2], [0, 1, 2], [0, 2, 3]],
        autoclose=True,
    )


@pytest.fixture
def two_hollow_triangles():
    return build_complex(
        [[0, 1], [0, 2], [1, 2], [3, 4], [3, 5], [4, 5]], autoclose=True
    )


@pytest.fixture
def figure_eight():
    """Two edge loops sharing vertex 0."""
    return build_complex(
        [[0, 1], [1, 2], [0, 2], [0, 3], [3, 4], [0, 4]], autoclose=True
    )


def canonical_complexes():
    return {
        "point": generate("point"),
        "hollow_triangle": generate("hollow_triangle"),
        "filled_triangle": generate("filled_triangle"),
        "circle4": generate("circle", m=4),
        "circle8": generate("circle", m=8),
        "tetrahedron_boundary": generate("tetrahedron_boundary"),
        "torus": generate("torus"),
        "sphere2": generate("sphere2"),
    }
