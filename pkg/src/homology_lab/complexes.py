"""Simplicial complexes, their incidence descriptions, and filtration pairs.

A simplex is a strictly increasing tuple of non-negative vertex ids.  A
complex stores one ordered layer of simplices per dimension and guarantees
face closure: every face of a stored simplex is stored one layer below.
Simplices carry 1-based per-layer indices; all matrix-facing code in the
package addresses simplices through these indices.

Complexes are immutable after construction and safe for concurrent reads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadParameter,
    DuplicateSimplex,
    EmptyInput,
    EmptyLayer,
    MissingFace,
    NotASubcomplex,
)

Simplex = tuple[int, ...]


def as_simplex(vertices: Iterable[int]) -> Simplex:
    """Canonicalize a vertex collection into a sorted simplex tuple."""
    vs = tuple(sorted(int(v) for v in vertices))
    if not vs:
        raise BadParameter("a simplex needs at least one vertex")
    if vs[0] < 0:
        raise BadParameter(f"negative vertex id in {vs}")
    if len(set(vs)) != len(vs):
        raise BadParameter(f"repeated vertex in {vs}")
    return vs


def simplex_faces(s: Simplex) -> list[Simplex]:
    """All (dim-1)-faces of ``s``, ordered by omitted-vertex position."""
    return [s[:i] + s[i + 1 :] for i in range(len(s))]


@dataclass(frozen=True)
class SimplicialComplex:
    """Face-closed complex with ordered, 1-indexed simplex layers."""

    n: int
    layers: Mapping[int, tuple[Simplex, ...]]
    _index: Mapping[tuple[int, Simplex], int] = field(repr=False)

    def dim(self) -> int:
        dims = [r for r, layer in self.layers.items() if layer]
        return max(dims) if dims else -1

    def layer(self, r: int) -> tuple[Simplex, ...]:
        return self.layers.get(r, ())

    def size(self, r: int) -> int:
        return len(self.layer(r))

    def index_of(self, r: int, s: Simplex) -> int:
        """1-based index of ``s`` in layer ``r`` (KeyError if absent)."""
        return self._index[(r, s)]

    def contains(self, s: Simplex) -> bool:
        return (len(s) - 1, s) in self._index

    def simplices(self) -> list[Simplex]:
        """All simplices, layers ascending, layer order preserved."""
        out: list[Simplex] = []
        for r in sorted(self.layers):
            out.extend(self.layers[r])
        return out

    def total_size(self) -> int:
        return sum(len(layer) for layer in self.layers.values())


def _make_complex(n: int, layers: dict[int, list[Simplex]]) -> SimplicialComplex:
    frozen = {r: tuple(layer) for r, layer in layers.items() if layer}
    index: dict[tuple[int, Simplex], int] = {}
    for r, layer in frozen.items():
        for i, s in enumerate(layer, start=1):
            index[(r, s)] = i
    return SimplicialComplex(n=n, layers=frozen, _index=index)


def build_complex(simplices: Iterable[Iterable[int]], autoclose: bool = True) -> SimplicialComplex:
    """Assemble a complex from a simplex list.

    Explicitly listed simplices keep their input order within each layer.
    With ``autoclose`` enabled, missing faces are appended after them in
    lexicographic order; with it disabled, a missing face raises
    :class:`MissingFace`.

    Raises :class:`DuplicateSimplex` on repeated input, :class:`EmptyInput`
    on an empty list.
    """
    listed: dict[int, list[Simplex]] = {}
    seen: set[Simplex] = set()
    for raw in simplices:
        s = as_simplex(raw)
        if s in seen:
            raise DuplicateSimplex(f"simplex {s} listed twice")
        seen.add(s)
        listed.setdefault(len(s) - 1, []).append(s)
    if not seen:
        raise EmptyInput("no simplices given")

    max_dim = max(listed)
    layers: dict[int, list[Simplex]] = {r: list(listed.get(r, [])) for r in range(max_dim + 1)}
    present: set[Simplex] = set(seen)
    for r in range(max_dim, 0, -1):
        missing: set[Simplex] = set()
        for s in layers[r]:
            for f in simplex_faces(s):
                if f not in present:
                    missing.add(f)
        if missing and not autoclose:
            raise MissingFace(f"face {min(missing)} required but not listed")
        for f in sorted(missing):
            layers[r - 1].append(f)
            present.add(f)

    n = max(s[-1] for s in present) + 1
    return _make_complex(n, layers)


@dataclass(frozen=True)
class SpecMatrix:
    """0/1 face-incidence description of one layer.

    Shape is |S_{r-1}| x |S_r|; column i marks the (r-1)-faces of the i-th
    r-simplex, so every column sums to r+1.
    """

    r: int
    entries: "object"  # scipy.sparse.csc_matrix with int entries

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


def spec_matrix(k: SimplicialComplex, r: int) -> SpecMatrix:
    """Face-incidence matrix between layers r-1 and r."""
    import scipy.sparse as sp

    if r < 1:
        raise BadParameter("incidence matrices start at dimension 1")
    if k.size(r) == 0:
        raise EmptyLayer(f"no simplices of dimension {r}")
    rows, cols, vals = [], [], []
    for j, s in enumerate(k.layer(r)):
        for f in simplex_faces(s):
            rows.append(k.index_of(r - 1, f) - 1)
            cols.append(j)
            vals.append(1)
    m = sp.csc_matrix((vals, (rows, cols)), shape=(k.size(r - 1), k.size(r)), dtype=int)
    return SpecMatrix(r=r, entries=m)


@dataclass(frozen=True)
class FiltrationPair:
    """A validated inclusion k1 <= k2 with prefix-ordered index embeddings.

    ``k2`` is stored reordered so that within each layer the simplices of
    ``k1`` occupy indices 1..|S_r^{k1}|; ``embed[r]`` maps k1 layer-r indices
    (1-based) to k2 indices, and is the identity prefix by construction.
    """

    k1: SimplicialComplex
    k2: SimplicialComplex
    embed: Mapping[int, tuple[int, ...]]

    def new_count(self, r: int) -> int:
        return self.k2.size(r) - self.k1.size(r)


def validate_filtration(k1: SimplicialComplex, k2: SimplicialComplex) -> FiltrationPair:
    """Check k1 <= k2 and reorder k2 so k1's simplices form each layer prefix."""
    for r in sorted(k1.layers):
        for s in k1.layer(r):
            if not k2.contains(s):
                raise NotASubcomplex(s)

    layers: dict[int, list[Simplex]] = {}
    for r in sorted(k2.layers):
        old = list(k1.layer(r))
        in_k1 = set(old)
        layers[r] = old + [s for s in k2.layer(r) if s not in in_k1]
    reordered = _make_complex(k2.n, layers)
    embed = {r: tuple(range(1, k1.size(r) + 1)) for r in sorted(k1.layers)}
    return FiltrationPair(k1=k1, k2=reordered, embed=embed)


# ---------------------------------------------------------------------------
# Chains: sparse rational coefficient vectors over one layer.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Chain:
    """Dimension-tagged sparse chain with exact rational coefficients.

    ``coeffs`` maps 1-based layer indices to nonzero Fractions.
    """

    r: int
    coeffs: Mapping[int, Fraction]

    @staticmethod
    def make(r: int, coeffs: Mapping[int, object]) -> "Chain":
        clean = {int(i): Fraction(c) for i, c in coeffs.items() if Fraction(c) != 0}
        for i in clean:
            if i < 1:
                raise BadParameter(f"chain indices are 1-based, got {i}")
        return Chain(r=r, coeffs=clean)

    @staticmethod
    def from_simplices(k: SimplicialComplex, terms: Sequence[tuple[Iterable[int], object]]) -> "Chain":
        """Build a chain from (vertex tuple, coefficient) pairs."""
        if not terms:
            raise EmptyInput("no terms")
        rs = {len(as_simplex(v)) - 1 for v, _ in terms}
        if len(rs) != 1:
            raise BadParameter("mixed-dimension terms")
        r = rs.pop()
        coeffs: dict[int, Fraction] = {}
        for v, c in terms:
            s = as_simplex(v)
            if not k.contains(s):
                raise BadParameter(f"simplex {s} is not in the complex")
            i = k.index_of(r, s)
            coeffs[i] = coeffs.get(i, Fraction(0)) + Fraction(c)
        return Chain.make(r, coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def dense(self, length: int) -> list[Fraction]:
        from .errors import DimensionMismatch

        out = [Fraction(0)] * length
        for i, c in self.coeffs.items():
            if i > length:
                raise DimensionMismatch(f"chain index {i} exceeds layer size {length}")
            out[i - 1] = c
        return out

    def __sub__(self, other: "Chain") -> "Chain":
        if self.r != other.r:
            from .errors import DimensionMismatch

            raise DimensionMismatch("chain dimensions differ")
        coeffs = dict(self.coeffs)
        for i, c in other.coeffs.items():
            coeffs[i] = coeffs.get(i, Fraction(0)) - c
        return Chain.make(self.r, coeffs)

    def norm(self) -> float:
        return sum(float(c) ** 2 for c in self.coeffs.values()) ** 0.5


def vietoris_rips(points: Sequence[Sequence[float]], threshold: float, max_dim: int = 2) -> SimplicialComplex:
    """Vietoris-Rips complex: cliques of the strict-threshold proximity graph.

    Every clique of at most max_dim+1 points whose pairwise Euclidean
    distances are all < threshold becomes a simplex.
    """
    import numpy as np

    if max_dim < 0 or max_dim > 3:
        raise BadParameter("max_dim must be between 0 and 3 at desk scale")
    if threshold <= 0:
        raise BadParameter("threshold must be positive")
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise BadParameter("points must be a nonempty 2-d array")
    n = pts.shape[0]
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
    close = d2 < threshold**2

    simplices: list[Simplex] = [(i,) for i in range(n)]
    cliques: list[tuple[int, ...]] = [(i,) for i in range(n)]
    for _ in range(max_dim):
        nxt = []
        for cl in cliques:
            last = cl[-1]
            for v in range(last + 1, n):
                if all(close[u, v] for u in cl):
                    nxt.append(cl + (v,))
        simplices.extend(nxt)
        cliques = nxt
        if not cliques:
            break
    return build_complex(simplices, autoclose=True)


def generate(kind: str, *, m: int | None = None,
             points: Sequence[Sequence[float]] | None = None,
             threshold: float | None = None, max_dim: int = 2,
             seed: int | None = None) -> SimplicialComplex:
    """Canonical and point-cloud complex generators.

    Kinds: point, circle (m >= 3 vertices), hollow_triangle, filled_triangle,
    tetrahedron_boundary, torus, sphere2, vietoris_rips.
    """
    if kind == "point":
        return build_complex([[0]])
    if kind == "circle":
        if m is None or m < 3:
            raise BadParameter("circle needs m >= 3")
        edges = [sorted((i, (i + 1) % m)) for i in range(m)]
        return build_complex(edges, autoclose=True)
    if kind == "hollow_triangle":
        return build_complex([[0, 1], [0, 2], [1, 2]], autoclose=True)
    if kind == "filled_triangle":
        return build_complex([[0, 1, 2]], autoclose=True)
    if kind == "tetrahedron_boundary":
        return build_complex(list(combinations(range(4), 3)), autoclose=True)
    if kind == "torus":
        # 7-vertex cyclic triangulation: 14 triangles, 21 edges, Euler = 0.
        tris = [sorted(((i) % 7, (i + 1) % 7, (i + 3) % 7)) for i in range(7)]
        tris += [sorted(((i) % 7, (i + 2) % 7, (i + 3) % 7)) for i in range(7)]
        return build_complex(tris, autoclose=True)
    if kind == "sphere2":
        # octahedron boundary; opposite-vertex pairs (0,1) (2,3) (4,5)
        tris = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
        return build_complex([sorted(t) for t in tris], autoclose=True)
    if kind == "vietoris_rips":
        if points is None or threshold is None:
            raise BadParameter("vietoris_rips needs points and threshold")
        return vietoris_rips(points, threshold, max_dim)
    raise BadParameter(f"unknown generator kind {kind!r}")
