"""Cochains, cocycle construction, and the functional homology-equivalence test.

A cocycle evaluates homologous cycles identically, so random cocycle
witnesses can separate homology classes: any witness disagreeing on two
cycles certifies they are inequivalent, while agreement across witnesses is
probabilistic evidence of equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact
from .complexes import Chain, SimplicialComplex
from .errors import (
    ConstructionFailed,
    DimensionMismatch,
    EmptyLayer,
    NotACycle,
    NotFound,
    TrivialCocycleSpace,
)
from .homology import is_cycle_exact
from .operators import PINV_RTOL, boundary_matrix

COCYCLE_TOL = 1e-8


@dataclass(frozen=True)
class Cochain:
    """Linear functional on one chain layer, stored densely.

    ``cocycle`` marks functionals verified (or constructed) to vanish under
    the coboundary map; ``degenerate`` marks a projection that collapsed
    because the input lay almost entirely outside the cocycle space.
    """

    r: int
    values: np.ndarray
    cocycle: bool = False
    degenerate: bool = False

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


def evaluate(k: SimplicialComplex, w: Cochain, c: Chain) -> float:
    """Pair a cochain with a chain: the dot product in the simplex basis."""
    if w.r != c.r:
        raise DimensionMismatch("cochain and chain dimensions differ")
    n = k.size(w.r)
    if len(w.values) != n:
        raise DimensionMismatch("cochain length does not match the layer")
    dense = np.array([float(x) for x in c.dense(n)])
    return float(np.dot(w.values, dense))


def _delta_matrix(k: SimplicialComplex, r: int) -> np.ndarray | None:
    """Coboundary matrix (transpose of the (r+1)-boundary), or None if no
    (r+1)-simplices exist."""
    if k.size(r) == 0:
        raise EmptyLayer(f"no simplices of dimension {r}")
    if k.size(r + 1) == 0:
        return None
    return boundary_matrix(k, r + 1).toarray().astype(float).T


def project_to_cocycle(k: SimplicialComplex, r: int, w: Cochain,
                       rtol: float = PINV_RTOL) -> Cochain:
    """Orthogonal projection onto the kernel of the coboundary map.

    Uses a thresholded pseudoinverse of delta delta^T; with no (r+1)-simplices
    the coboundary is the zero map and the projection is the identity.
    """
    delta = _delta_matrix(k, r)
    if delta is None:
        return Cochain(r=r, values=np.array(w.values, dtype=float), cocycle=True)
    gram = delta @ delta.T
    pinv = np.linalg.pinv(gram, rcond=rtol, hermitian=True)
    values = np.asarray(w.values, dtype=float)
    projected = values - delta.T @ (pinv @ (delta @ values))
    return Cochain(r=r, values=projected, cocycle=True)


def random_cocycle(k: SimplicialComplex, r: int, seed=None) -> Cochain:
    """Unit-norm cocycle from a projected Gaussian cochain.

    Raises :class:`TrivialCocycleSpace` when the coboundary map has no
    kernel; flags the result degenerate when the projection norm collapses
    below 1e-6.
    """
    n = k.size(r)
    if n == 0:
        raise EmptyLayer(f"no simplices of dimension {r}")
    if k.size(r + 1) > 0:
        if n - exact.rank(boundary_matrix(k, r + 1).toarray()) == 0:
            raise TrivialCocycleSpace(f"the degree-{r} cocycle space is zero")
    rng = np.random.default_rng(seed)
    w = Cochain(r=r, values=rng.standard_normal(n))
    w = Cochain(r=r, values=w.values / np.linalg.norm(w.values))
    proj = project_to_cocycle(k, r, w)
    norm = proj.norm()
    if norm < 1e-6:
        return Cochain(r=r, values=proj.values, cocycle=True, degenerate=True)
    return Cochain(r=r, values=proj.values / norm, cocycle=True)


def manual_cocycle(k: SimplicialComplex, r: int, seed=None) -> Cochain:
    """Greedy per-simplex cocycle construction in exact rational arithmetic.

    Sweeps the (r+1)-simplices in index order.  Each simplex imposes one
    signed zero-sum constraint on the values of its faces; faces still free
    get random integers except for one, which is solved for.  A simplex whose
    faces are all fixed is only verified: a violated constraint aborts with
    :class:`ConstructionFailed` (the greedy order can deadlock on shared
    faces, and a silently patched value would not be a cocycle).
    """
    if k.size(r) == 0 or k.size(r + 1) == 0:
        raise EmptyLayer(f"manual construction needs simplices at dimensions {r} and {r + 1}")
    rng = np.random.default_rng(seed)
    d = boundary_matrix(k, r + 1).entries.tocsc()
    values: dict[int, Fraction] = {}
    for col in range(d.shape[1]):
        start, end = d.indptr[col], d.indptr[col + 1]
        faces = [(int(i), int(s)) for i, s in zip(d.indices[start:end], d.data[start:end])]
        unassigned = [i for i, _ in faces if i not in values]
        if not unassigned:
            residual = sum(s * values[i] for i, s in faces)
            if residual != 0:
                raise ConstructionFailed(col + 1, k.layer(r + 1)[col])
            continue
        for i in unassigned[:-1]:
            values[i] = Fraction(int(rng.integers(-4, 5)))
        last = unassigned[-1]
        others = sum(s * values[i] for i, s in faces if i != last)
        sign_last = next(s for i, s in faces if i == last)
        values[last] = Fraction(-others, sign_last)
    dense = np.zeros(k.size(r))
    for i, v in values.items():
        dense[i] = float(v)
    # exact global verification before anything leaves this function
    delta_rows = exact.to_integer_rows(boundary_matrix(k, r + 1).toarray())
    full = [values.get(i, Fraction(0)) for i in range(k.size(r))]
    for col in range(len(delta_rows[0]) if delta_rows else 0):
        total = sum(delta_rows[i][col] * full[i] for i in range(len(full)))
        if total != 0:
            raise ConstructionFailed(col + 1, k.layer(r + 1)[col])
    return Cochain(r=r, values=dense, cocycle=True)


def pair_cocycle(k: SimplicialComplex, r: int) -> Cochain:
    """Two-simplex cocycle from a pair of faces private to one (r+1)-simplex.

    Scans for two r-simplex rows of the boundary matrix that each carry a
    single nonzero entry, located in the same column; the two values are set
    to +-1 so the signed sum over that column vanishes.  Raises
    :class:`NotFound` when no such pair exists.
    """
    if k.size(r) == 0 or k.size(r + 1) == 0:
        raise EmptyLayer(f"pair construction needs simplices at dimensions {r} and {r + 1}")
    d = boundary_matrix(k, r + 1).entries.tocsr()
    single: dict[int, list[tuple[int, int]]] = {}
    for row in range(d.shape[0]):
        start, end = d.indptr[row], d.indptr[row + 1]
        if end - start == 1:
            col = int(d.indices[start])
            single.setdefault(col, []).append((row, int(d.data[start])))
    for col in sorted(single):
        rows = single[col]
        if len(rows) >= 2:
            (p, sp), (q, sq) = rows[0], rows[1]
            values = np.zeros(k.size(r))
            values[p] = 1.0
            values[q] = -1.0 if sp == sq else 1.0
            check = d.T @ values
            if np.max(np.abs(check)) != 0.0:
                raise ConstructionFailed(col + 1, k.layer(r + 1)[col])
            return Cochain(r=r, values=values, cocycle=True)
    raise NotFound("no column owns two single-entry rows")


@dataclass(frozen=True)
class CohomologyVerdict:
    """``equivalent`` is one-sided: a distinguishing witness certifies
    inequivalence up to tolerance, while agreement may err."""

    equivalent: bool
    witness: Cochain | None
    witnesses_used: int


def test_equivalent_cohomological(k: SimplicialComplex, c1: Chain, c2: Chain,
                                  witnesses: int = 8, tol: float = COCYCLE_TOL,
                                  seed=None) -> CohomologyVerdict:
    """Probe homology equivalence with random cocycle functionals.

    Any witness whose evaluations on the two cycles differ by more than
    tol * (1 + ||c1|| + ||c2||) separates the classes.  A trivial cocycle
    space distinguishes nothing and reads as equivalent.
    """
    if c1.r != c2.r:
        raise DimensionMismatch("cycle dimensions differ")
    for c in (c1, c2):
        if not is_cycle_exact(k, c):
            raise NotACycle("input chain has nonzero boundary")
    scale = tol * (1.0 + c1.norm() + c2.norm())
    children = np.random.SeedSequence(seed).spawn(witnesses)
    used = 0
    for child in children:
        try:
            w = random_cocycle(k, c1.r, seed=child)
        except TrivialCocycleSpace:
            return CohomologyVerdict(equivalent=True, witness=None, witnesses_used=used)
        if w.degenerate:
            continue
        used += 1
        if abs(evaluate(k, w, c1) - evaluate(k, w, c2)) > scale:
            return CohomologyVerdict(equivalent=False, witness=w, witnesses_used=used)
    return CohomologyVerdict(equivalent=True, witness=None, witnesses_used=used)
