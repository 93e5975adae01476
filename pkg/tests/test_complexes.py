import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homology_lab import build_complex, generate, spec_matrix, validate_filtration
from homology_lab.complexes import simplex_faces
from homology_lab.errors import (
    BadParameter,
    DuplicateSimplex,
    EmptyInput,
    EmptyLayer,
    MissingFace,
    NotASubcomplex,
)

from conftest import random_rips


def test_build_hollow_triangle_counts():
    k = build_complex([[0], [1], [2], [0, 1], [0, 2], [1, 2]], autoclose=False)
    assert (k.size(0), k.size(1), k.size(2)) == (3, 3, 0)


def test_build_autoclose_fills_faces():
    k = build_complex([[0, 1, 2]], autoclose=True)
    assert (k.size(0), k.size(1), k.size(2)) == (3, 3, 1)


def test_build_without_autoclose_rejects_open_input():
    with pytest.raises(MissingFace):
        build_complex([[0, 1, 2]], autoclose=False)


def test_build_rejects_duplicates_and_empty():
    with pytest.raises(DuplicateSimplex):
        build_complex([[0, 1], [1, 0]])
    with pytest.raises(EmptyInput):
        build_complex([])


def test_listed_order_preserved_autoclose_lexicographic():
    k = build_complex([[2, 1], [0, 1]], autoclose=True)
    assert k.layer(1) == ((1, 2), (0, 1))
    assert k.layer(0) == ((0,), (1,), (2,))


# --- spec_matrix -------------------------------------------------------------

FIVE_POINT_SPEC_2 = np.array([
    [1, 0, 0],
    [1, 0, 0],
    [1, 0, 1],
    [0, 1, 0],
    [0, 1, 0],
    [0, 1, 0],
    [0, 0, 1],
    [0, 0, 1],
    [0, 0, 0],
])


def five_point_complex():
    edges = [[0, 1], [0, 2], [1, 2], [0, 3], [3, 4], [0, 4], [1, 3], [2, 3], [2, 4]]
    triangles = [[0, 1, 2], [0, 3, 4], [1, 2, 3]]
    return build_complex(edges + triangles, autoclose=True)


def test_spec_matrix_five_point_complex():
    k = five_point_complex()
    m = spec_matrix(k, 2)
    assert m.shape == (9, 3)
    assert np.array_equal(m.entries.toarray(), FIVE_POINT_SPEC_2)


def test_spec_matrix_filled_triangle_single_column():
    m = spec_matrix(generate("filled_triangle"), 2)
    assert np.array_equal(m.entries.toarray(), [[1], [1], [1]])


def test_spec_matrix_hollow_triangle_column_sums():
    m = spec_matrix(generate("hollow_triangle"), 1)
    dense = m.entries.toarray()
    assert dense.shape == (3, 3)
    assert list(dense.sum(axis=0)) == [2, 2, 2]


def test_spec_matrix_empty_layer():
    with pytest.raises(EmptyLayer):
        spec_matrix(generate("hollow_triangle"), 2)


# --- validate_filtration ------------------------------------------------------

def test_filtration_hollow_into_filled(hollow_triangle, filled_triangle):
    pair = validate_filtration(hollow_triangle, filled_triangle)
    assert pair.embed[1] == (1, 2, 3)
    assert 2 not in pair.embed
    assert pair.k2.layer(1)[:3] == hollow_triangle.layer(1)


def test_filtration_rejects_non_subcomplex(hollow_triangle, filled_triangle):
    with pytest.raises(NotASubcomplex) as err:
        validate_filtration(filled_triangle, hollow_triangle)
    assert err.value.simplex == (0, 1, 2)


def test_filtration_single_edge_into_hollow(hollow_triangle):
    edge = build_complex([[0, 1]], autoclose=True)
    pair = validate_filtration(edge, hollow_triangle)
    assert pair.k2.layer(1)[pair.embed[1][0] - 1] == (0, 1)


def test_identity_filtration_identity_embedding(hollow_triangle):
    pair = validate_filtration(hollow_triangle, hollow_triangle)
    for r in pair.embed:
        assert pair.embed[r] == tuple(range(1, hollow_triangle.size(r) + 1))


# --- generators ----------------------------------------------------------------

def test_circle4_counts():
    k = generate("circle", m=4)
    assert (k.size(0), k.size(1), k.size(2)) == (4, 4, 0)


def test_circle_requires_m():
    with pytest.raises(BadParameter):
        generate("circle", m=2)


def test_rips_two_distant_points():
    k = generate("vietoris_rips", points=[[0.0], [2.0]], threshold=1.0)
    assert (k.size(0), k.size(1)) == (2, 0)


def test_tetrahedron_boundary_counts():
    k = generate("tetrahedron_boundary")
    assert (k.size(0), k.size(1), k.size(2), k.size(3)) == (4, 6, 4, 0)


def test_unknown_kind():
    with pytest.raises(BadParameter):
        generate("klein_bottle")


# --- invariants ------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(6))
def test_spec_matrix_invariants_on_random_rips(seed):
    k = random_rips(seed)
    for r in sorted(k.layers):
        if r == 0 or k.size(r) == 0:
            continue
        dense = spec_matrix(k, r).entries.toarray()
        assert (dense.sum(axis=0) == r + 1).all()
        gram = dense.T @ dense
        off = gram - np.diag(np.diag(gram))
        assert off.max() <= 1  # any two columns share at most one face


@pytest.mark.parametrize("seed", range(4))
def test_rebuild_is_idempotent(seed):
    k = random_rips(seed)
    again = build_complex(k.simplices(), autoclose=True)
    assert again.layers == k.layers
    assert again.n == k.n


@pytest.mark.parametrize("seed", range(4))
def test_closure_on_random_rips(seed):
    k = random_rips(seed)
    for r in sorted(k.layers):
        if r == 0:
            continue
        for s in k.layer(r):
            for f in simplex_faces(s):
                assert k.contains(f)


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=25, deadline=None)
def test_identity_filtration_property(seed):
    k = random_rips(seed, n_points=6)
    pair = validate_filtration(k, k)
    assert pair.k2.layers == k.layers
    for r, emb in pair.embed.items():
        assert emb == tuple(range(1, k.size(r) + 1))
