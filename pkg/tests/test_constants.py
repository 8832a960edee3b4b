import math
from fractions import Fraction

import numpy as np
import pytest

from affine_lw.constants import (CoverTable, PrefactorSpec, batch_duality_residuals, bl1, bl2, bl_duality_residual,
                                 constants_report, fradelizi_factor, local_lw_constant, log_bl1, log_prefactor,
                                 meyer_constant, prefactor)
from affine_lw.covers import (CoverError, IndexCover, all_equal_weight_covers, lw_cover, partition_cover,
                              relabel)
from affine_lw.linalg import Basis, random_basis, random_orthogonal


def skew(theta):
    return Basis.from_vectors([[1, 0], [math.cos(theta), math.sin(theta)]])


def test_canonical_basis_constants_are_one():
    for c in all_equal_weight_covers(3, 4):
        assert bl1(Basis.canonical(3), c) == pytest.approx(1.0)
        assert bl2(Basis.canonical(3), c) == pytest.approx(1.0)


def test_skew_partition():
    B = skew(math.pi / 6)
    assert bl1(B, partition_cover(2)) == pytest.approx(2.0, rel=1e-12)
    th = 1.1
    assert bl2(skew(th), partition_cover(2)) == pytest.approx(1 / math.sin(th), rel=1e-12)


def test_rotation_invariance():
    rng = np.random.default_rng(0)
    for n in (3, 4):
        Q = random_orthogonal(rng, n)
        B = Basis(Q)
        assert bl1(B, lw_cover(n)) == pytest.approx(1.0, rel=1e-12)
        B2 = random_basis(rng, n)
        assert bl1(B2.transformed(Q), lw_cover(n)) == pytest.approx(bl1(B2, lw_cover(n)), rel=1e-12)


def test_duality_examples():
    assert bl_duality_residual(Basis.canonical(3), lw_cover(3)) == 0
    assert bl_duality_residual(skew(math.pi / 3), partition_cover(2)) < 1e-12
    rng = np.random.default_rng(1)
    for _ in range(300):
        n = int(rng.integers(2, 5))
        assert bl_duality_residual(random_basis(rng, n), lw_cover(n)) < 1e-8


def test_batch_matches_single():
    rng = np.random.default_rng(2)
    covers = all_equal_weight_covers(3, 4)
    table = CoverTable(covers)
    B = random_basis(rng, 3)
    res, _ = batch_duality_residuals(B, table)
    for r, c in zip(res, covers):
        assert r == pytest.approx(bl_duality_residual(B, c), abs=1e-12)
    assert np.exp(table.log_bl1(np.array([1.0] * 8)))[0] == pytest.approx(1.0)


def test_duality_needs_full_cover():
    with pytest.raises(CoverError):
        bl_duality_residual(Basis.canonical(3), relabel(lw_cover(2), [1, 2], 3))


def test_local_lw_prefactor_recovers_classical():
    n = 3
    c = partition_cover(n, [1, 2])
    assert prefactor(PrefactorSpec("local_lw", 1), c) == pytest.approx(4 / 3)
    assert local_lw_constant(3) == pytest.approx(4 / 3)


def test_dual_prefactor_matches_meyer():
    for n in (2, 3, 4, 5):
        val = prefactor(PrefactorSpec("dual_bt", 1), lw_cover(n))
        assert val == pytest.approx(meyer_constant(n), rel=1e-12)
    assert meyer_constant(2) == pytest.approx(0.5)


def test_gamma_prefactor_example():
    c = partition_cover(2)
    # equal weights w = p/m = 1, d_j = 1: prefactor = 1 / Gamma(1 + 2) = 1/2
    assert prefactor(PrefactorSpec("reverse_gamma", 1), c) == pytest.approx(0.5)
    with pytest.raises(CoverError):
        log_prefactor(PrefactorSpec("reverse_gamma", 1), IndexCover.of(2, [[1, 2], [1], [2]],
                                                                      [Fraction(1, 3), Fraction(2, 3), Fraction(2, 3)]))


def test_unknown_statement_rejected():
    with pytest.raises(KeyError):
        PrefactorSpec("no_such_statement", 1)
    with pytest.raises(KeyError):
        PrefactorSpec("affine_bt", 5)


def test_fradelizi_factor():
    assert fradelizi_factor(3, 1) == pytest.approx((4 / 3) ** 2)
    assert fradelizi_factor(3, 3) == 1


def test_constants_report_is_json_ready():
    import json
    rep = constants_report(random_basis(np.random.default_rng(3), 3), lw_cover(3))
    json.dumps(rep)
    assert rep["bl1"] == pytest.approx(math.exp(log_bl1(random_basis(np.random.default_rng(3), 3), lw_cover(3))))
