import numpy as np
import pytest

from homology_lab import (
    boundary_matrix,
    build_complex,
    coboundary_matrix,
    generate,
    laplacian,
    normalized_laplacian,
    persistent_blocks,
    persistent_laplacian,
    persistent_up_laplacian,
    schur_complement,
    spec_matrix,
    validate_filtration,
)
from homology_lab.errors import EmptyLayer
from homology_lab.operators import laplacian_divisor

from conftest import oracle_rank, random_rips, random_rips_filtration
from test_complexes import five_point_complex


def test_boundary_filled_triangle_column():
    k = generate("filled_triangle")
    d2 = boundary_matrix(k, 2).toarray()
    # face rows in order [0,1], [0,2], [1,2]
    assert d2[:, 0].tolist() == [1, -1, 1]


def test_boundary_composition_is_zero():
    k = generate("filled_triangle")
    d1 = boundary_matrix(k, 1).toarray()
    d2 = boundary_matrix(k, 2).toarray()
    assert not (d1 @ d2).any()


def test_boundary_matches_spec_matrix_on_paper_complex():
    k = five_point_complex()
    d2 = boundary_matrix(k, 2).toarray()
    assert np.array_equal(np.abs(d2), spec_matrix(k, 2).entries.toarray())


def test_boundary_empty_layer():
    with pytest.raises(EmptyLayer):
        boundary_matrix(generate("hollow_triangle"), 2)


def test_coboundary_is_transpose():
    k = generate("filled_triangle")
    assert np.array_equal(
        coboundary_matrix(k, 1).toarray(), boundary_matrix(k, 2).toarray().T
    )


# --- Laplacians ---------------------------------------------------------------

def test_laplacian_kernels():
    hollow = generate("hollow_triangle")
    lap = laplacian(hollow, 1).toarray()
    assert lap.shape == (3, 3)
    assert 3 - oracle_rank(lap) == 1  # one independent loop
    filled = generate("filled_triangle")
    assert 3 - oracle_rank(laplacian(filled, 1).toarray()) == 0


def test_laplacian_point():
    k = generate("point")
    assert laplacian(k, 0).toarray().tolist() == [[0]]


def test_laplacian_symmetry_psd_random():
    for seed in range(4):
        k = random_rips(seed)
        for r in sorted(k.layers):
            if k.size(r) == 0:
                continue
            lap = laplacian(k, r).toarray()
            assert np.array_equal(lap, lap.T)
            eigs = np.linalg.eigvalsh(lap.astype(float))
            assert eigs.min() >= -1e-10


def test_normalized_laplacian_divisor_and_kernel():
    k = generate("filled_triangle")
    assert laplacian_divisor(k, 1) == 36
    norm = normalized_laplacian(k, 1).toarray()
    assert np.allclose(norm * 36, laplacian(k, 1).toarray())
    assert np.linalg.norm(norm, 2) < 1.0
    # positive scaling preserves kernels
    hollow = generate("hollow_triangle")
    a = laplacian(hollow, 1).toarray().astype(float)
    b = normalized_laplacian(hollow, 1).toarray()
    assert np.linalg.matrix_rank(a) == np.linalg.matrix_rank(b)


def test_normalized_laplacian_zero_stays_zero():
    k = generate("point")
    assert not normalized_laplacian(k, 0).toarray().any()


# --- persistent blocks ------------------------------------------------------------

def test_blocks_hollow_to_filled():
    pair = validate_filtration(generate("hollow_triangle"), generate("filled_triangle"))
    blocks = persistent_blocks(pair, 1)
    assert blocks.b.shape == (3, 0)
    assert blocks.r_block.toarray()[:, 0].tolist() == [1, -1, 1]
    assert blocks.g.shape == (0, 1)


def test_blocks_identity_filtration():
    k = generate("filled_triangle")
    pair = validate_filtration(k, k)
    blocks = persistent_blocks(pair, 1)
    assert blocks.r_block.shape[1] == 0
    assert blocks.g.shape == (0, 0)
    assert np.array_equal(blocks.b.toarray(), boundary_matrix(k, 2).toarray())


def test_blocks_no_triangles_anywhere():
    k1 = build_complex([[0, 1]], autoclose=True)
    k2 = generate("hollow_triangle")
    pair = validate_filtration(k1, k2)
    blocks = persistent_blocks(pair, 1)
    assert blocks.b.shape[1] == 0
    assert blocks.r_block.shape[1] == 0
    assert blocks.g.shape[1] == 0


@pytest.mark.parametrize("seed", range(8))
def test_blocks_reassemble_full_boundary(seed):
    pair = random_rips_filtration(seed)
    for r in (1, 2):
        if pair.k1.size(r) == 0 or pair.k2.size(r + 1) == 0:
            continue
        blocks = persistent_blocks(pair, r)
        full = boundary_matrix(pair.k2, r + 1).toarray()
        top = np.hstack([blocks.b.toarray(), blocks.r_block.toarray()])
        bottom = np.hstack(
            [np.zeros((blocks.g.shape[0], blocks.b.shape[1]), dtype=int), blocks.g.toarray()]
        )
        assert np.array_equal(np.vstack([top, bottom]), full)
        # Frobenius counts: every column of a boundary matrix has r+2 entries
        assert (blocks.b.toarray() ** 2).sum() == (r + 2) * pair.k1.size(r + 1)


# --- Schur complement ---------------------------------------------------------------

def test_schur_identity_matrix():
    out = schur_complement(np.eye(4), {3, 4})
    assert np.allclose(out, np.eye(2))


def test_schur_block_diagonal():
    a = np.array([[2.0, 1.0], [1.0, 3.0]])
    c = np.array([[5.0]])
    m = np.block([[a, np.zeros((2, 1))], [np.zeros((1, 2)), c]])
    assert np.allclose(schur_complement(m, {3}), a)


def test_schur_two_by_two():
    m = np.array([[2.0, 1.0], [1.0, 2.0]])
    out = schur_complement(m, {2})
    assert np.allclose(out, [[1.5]])


def test_schur_empty_index_set():
    m = np.array([[2.0, 1.0], [1.0, 2.0]])
    assert np.allclose(schur_complement(m, set()), m)


# --- persistent Laplacian ---------------------------------------------------------

def test_persistent_laplacian_identity_filtration_exact():
    for kind in ("hollow_triangle", "filled_triangle", "tetrahedron_boundary"):
        k = generate(kind)
        pair = validate_filtration(k, k)
        for r in sorted(k.layers):
            if k.size(r) == 0:
                continue
            plap = persistent_laplacian(pair, r)
            assert np.array_equal(plap, laplacian(k, r).toarray().astype(float))


def test_persistent_laplacian_kills_filled_loop():
    pair = validate_filtration(generate("hollow_triangle"), generate("filled_triangle"))
    plap = persistent_laplacian(pair, 1)
    assert np.linalg.matrix_rank(plap) == 3  # no kernel: the loop dies


def test_persistent_laplacian_circle_identity():
    k = generate("circle", m=4)
    pair = validate_filtration(k, k)
    plap = persistent_laplacian(pair, 1)
    eigs = np.linalg.eigvalsh(plap)
    assert (eigs < 1e-9).sum() == 1


@pytest.mark.parametrize("seed", range(10))
def test_schur_identity_on_random_filtrations(seed):
    pair = random_rips_filtration(seed)
    r = 1
    if pair.k1.size(r) == 0 or pair.k2.size(r + 1) == 0:
        pytest.skip("degenerate draw")
    up = persistent_up_laplacian(pair, r)
    full = boundary_matrix(pair.k2, r + 1).toarray().astype(float)
    product = full @ full.T
    new_indices = range(pair.k1.size(r) + 1, pair.k2.size(r) + 1)
    schur = schur_complement(product, new_indices)
    assert np.linalg.norm(up - schur) <= 1e-8
