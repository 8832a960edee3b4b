import math

import numpy as np
import pytest

from affine_lw.linalg import (Basis, RankDeficiencyError, NotSPDError, Subspace, appendix_identity_check,
                              dual_basis, orth_complement, random_basis, random_orthogonal, span_subspace,
                              spd_sqrt, subset_wedges, wedge)


def test_wedge_examples():
    assert wedge([[1, 0, 0], [0, 1, 0]]) == pytest.approx(1.0)
    assert wedge([[1, 0], [math.cos(math.pi / 6), math.sin(math.pi / 6)]]) == pytest.approx(0.5)
    assert wedge([[1, 0, 0], [2, 0, 0]]) == pytest.approx(0.0, abs=1e-12)


def test_wedge_empty_family_is_one():
    assert wedge(np.zeros((0, 3)), 3) == 1.0


def test_subset_wedges_match_direct():
    rng = np.random.default_rng(1)
    B = random_basis(rng, 3)
    table = subset_wedges(B)
    for mask in range(1, 8):
        idx = [i for i in range(3) if mask >> i & 1]
        assert table[mask] == pytest.approx(wedge(B.select(idx)), rel=1e-12)


def test_span_examples():
    s = span_subspace([[0, 0, 1]], 3)
    assert s.dim == 1 and s.contains(Subspace(np.array([[0.0], [0.0], [1.0]])))
    s2 = span_subspace([[1, 1, 0], [1, -1, 0]], 3)
    assert s2.dim == 2
    assert np.allclose(np.array([0, 0, 1.0]) @ s2.frame, 0)
    assert s2.equals(span_subspace([[1, 0, 0], [0, 1, 0]], 3))
    with pytest.raises(RankDeficiencyError):
        span_subspace([[1, 0], [1, 1e-15]], 2)


def test_orth_complement_examples():
    assert orth_complement(span_subspace([[1, 0]], 2)).equals(span_subspace([[0, 1]], 2))
    assert orth_complement(span_subspace([[1, 0, 0], [0, 1, 0]], 3)).equals(span_subspace([[0, 0, 1]], 3))
    rng = np.random.default_rng(2)
    H = span_subspace(rng.standard_normal((2, 4)), 4)
    assert orth_complement(orth_complement(H)).equals(H)


def test_dual_basis_examples():
    assert np.allclose(dual_basis(Basis.canonical(3)).matrix, np.eye(3))
    V = dual_basis(Basis.from_vectors([[1, 0], [1, 1]]))
    assert np.allclose(V.vectors, [[1, -1], [0, 1]])
    rng = np.random.default_rng(3)
    for _ in range(50):
        B = random_basis(rng, 4)
        V = dual_basis(B)
        assert np.allclose(V.vectors @ B.vectors.T, np.eye(4), atol=1e-9)


def test_spd_sqrt():
    assert np.allclose(spd_sqrt(np.eye(3)), np.eye(3))
    assert np.allclose(spd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    rng = np.random.default_rng(4)
    M = rng.standard_normal((4, 4))
    A = M @ M.T + 0.1 * np.eye(4)
    R = spd_sqrt(A)
    assert np.allclose(R @ R, A, atol=1e-9)
    with pytest.raises(NotSPDError):
        spd_sqrt(np.diag([1.0, -1.0]))


def test_appendix_identity():
    assert appendix_identity_check(Basis.canonical(3)).max_residual < 1e-14
    th = math.pi / 6
    chk = appendix_identity_check(Basis.from_vectors([[1, 0], [math.cos(th), math.sin(th)]]))
    assert chk.det_sqrt == pytest.approx(0.5, rel=1e-12) and chk.wedge == pytest.approx(0.5)
    rng = np.random.default_rng(5)
    for _ in range(1000):
        n = int(rng.integers(2, 5))
        assert appendix_identity_check(random_basis(rng, n)).max_residual < 1e-8


def test_basis_json_roundtrip_and_validation():
    B = random_basis(np.random.default_rng(6), 3)
    assert np.array_equal(Basis.from_json(B.to_json()).matrix, B.matrix)
    with pytest.raises(RankDeficiencyError):
        Basis.from_vectors([[1, 0], [2, 0]])
    with pytest.raises(ValueError):
        Basis(np.ones((2, 3)))


def test_random_basis_condition_cap():
    rng = np.random.default_rng(7)
    assert all(random_basis(rng, 4, cond_cap=20).condition() <= 20 for _ in range(100))


def test_wedge_rotation_invariant():
    rng = np.random.default_rng(8)
    W = rng.standard_normal((3, 4))
    Q = random_orthogonal(rng, 4)
    assert wedge(W @ Q.T) == pytest.approx(wedge(W), rel=1e-12)
