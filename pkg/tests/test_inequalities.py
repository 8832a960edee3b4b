import math

import numpy as np
import pytest

from affine_lw.constants import fradelizi_factor, local_lw_constant
from affine_lw.covers import CoverError, IndexCover, all_equal_weight_covers, lw_cover, partition_cover, relabel
from affine_lw.inequalities import (BodyMeasure, cover_geometry, eval_affine_bt, eval_classics, eval_dual_bt,
                                    eval_fradelizi_bound, eval_local_lw, eval_restricted_dual, gl_transform)
from affine_lw.linalg import Basis, random_basis, span_subspace
from affine_lw.polytope import OriginNotInteriorError, Polytope, random_polytope, standard_body


def classics(K):
    out = {}
    for r in eval_classics(K):
        out.setdefault(r.statement, []).append(r)
    return out


def test_cube_lw_equality():
    for n in (2, 3, 4):
        rep = eval_affine_bt(standard_body("cube", n), Basis.canonical(n), lw_cover(n), 1)
        assert rep.ratio == pytest.approx(1.0, abs=1e-9) and rep.holds()


def test_affine_bt_random_instances():
    rng = np.random.default_rng(0)
    for seed in range(4):
        for n in (2, 3):
            K = random_polytope(seed, n)
            B = random_basis(rng, n)
            m = BodyMeasure(K)
            for c in all_equal_weight_covers(n, 3):
                for v in (1, 2, 3, 4):
                    if v in (2, 4) and c.p == 1:
                        continue
                    assert eval_affine_bt(K, B, c, v, m).ratio >= 1 - 1e-6


def test_skew_partition_on_disk():
    t = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    disk = Polytope.from_points(np.c_[np.cos(t), np.sin(t)])
    B = Basis.from_vectors([[1, 0], [math.cos(math.pi / 6), math.sin(math.pi / 6)]])
    assert eval_affine_bt(disk, B, partition_cover(2), 1).ratio >= 1


def test_local_lw_classical_constants():
    K = standard_body("ccube", 3)
    c = classics(K)
    orth = c["classic:local_lw_orthonormal"][0]
    assert orth.constant == pytest.approx(local_lw_constant(3))
    skew = c["classic:local_lw_skew"][0]
    assert skew.constant == pytest.approx(local_lw_constant(3, math.cos(math.pi / 3)))
    assert orth.ratio >= 1 and skew.ratio >= 1


def test_local_lw_random_instances():
    rng = np.random.default_rng(1)
    for seed in range(4):
        K = random_polytope(seed, 4)
        B = random_basis(rng, 4)
        m = BodyMeasure(K)
        for S in ([1, 2], [1, 2, 3]):
            for base in all_equal_weight_covers(len(S), 3):
                c = relabel(base, S, 4)
                for v in (1, 2, 3, 4):
                    if v in (2, 4) and c.p == 1:
                        continue
                    assert eval_local_lw(K, B, c, v, m).ratio >= 1 - 1e-6


def test_meyer_equality_and_strict_cube():
    for n in (2, 3):
        rep = eval_dual_bt(standard_body("cross", n), Basis.canonical(n), lw_cover(n), 1)
        assert rep.ratio == pytest.approx(1.0, abs=1e-9)
    rep2 = eval_dual_bt(standard_body("cross", 2), Basis.canonical(2), lw_cover(2), 1)
    assert rep2.lhs == pytest.approx(2.0) and rep2.rhs == pytest.approx(2.0)
    assert eval_dual_bt(standard_body("ccube", 3), Basis.canonical(3), lw_cover(3), 1).ratio > 1


def test_dual_needs_origin_inside():
    with pytest.raises(OriginNotInteriorError):
        eval_dual_bt(standard_body("cube", 2), Basis.canonical(2), lw_cover(2), 1)


def test_restricted_dual_modes_agree_on_symmetric_body():
    K = standard_body("cross", 3)
    c = partition_cover(3, [1, 2])
    a = eval_restricted_dual(K, Basis.canonical(3), c, 1)
    b = eval_restricted_dual(K, Basis.canonical(3), c, 1, centered_mode=True)
    assert a.lhs == pytest.approx(b.lhs, rel=1e-9)
    pair = classics(K)["classic:dual_restricted_pair"][0]
    assert pair.constant == pytest.approx(0.5) and pair.ratio >= 1


def test_restricted_dual_centered_rejects_offcentre():
    K = standard_body("simplex", 3).centered()
    with pytest.raises(ValueError, match="exceeds"):
        eval_restricted_dual(K, Basis.canonical(3), partition_cover(3, [3]), 1, centered_mode=True)


def test_restricted_dual_random():
    rng = np.random.default_rng(2)
    for seed in range(3):
        K = random_polytope(seed, 3)
        B = random_basis(rng, 3)
        m = BodyMeasure(K)
        for c in (partition_cover(3, [1, 2]), relabel(lw_cover(2), [1, 3], 3), partition_cover(3, [2])):
            for v in (1, 2, 3, 4):
                if v in (2, 4) and c.p == 1:
                    continue
                assert eval_restricted_dual(K, B, c, v, measure=m).ratio >= 1 - 1e-6


def test_box_bollobas_thomason_equality():
    box = standard_body("box", 3, sides=[0.5, 1.5, 3.0])
    reps = classics(box)["classic:bollobas_thomason"]
    assert len(reps) == len(all_equal_weight_covers(3, 4))
    for r in reps:
        assert r.ratio == pytest.approx(1.0, abs=1e-9)


def test_fradelizi():
    K = standard_body("cross", 3)
    H = span_subspace([[0, 0, 1]], 3)
    rep = eval_fradelizi_bound(K, H)
    assert rep.ratio == pytest.approx(fradelizi_factor(3, 1))
    simplex = standard_body("simplex", 3).centered()
    rep = eval_fradelizi_bound(simplex, H)
    assert rep.ratio >= 1 and rep.constant == pytest.approx((4 / 3) ** 2)
    with pytest.raises(ValueError, match="centred"):
        eval_fradelizi_bound(standard_body("simplex", 3), H)
    for seed in range(3):
        assert eval_fradelizi_bound(random_polytope(seed, 3), span_subspace([[1, 2, 0]], 3)).ratio >= 1 - 1e-6


def test_cover_hypotheses_enforced():
    K = standard_body("ccube", 3)
    I = Basis.canonical(3)
    with pytest.raises(CoverError):
        eval_affine_bt(K, I, partition_cover(3, [1, 2]), 1)
    with pytest.raises(CoverError):
        eval_local_lw(K, I, lw_cover(3), 1)
    with pytest.raises(CoverError):
        eval_affine_bt(K, I, IndexCover.of(3, [[1, 2, 3]], [1]), 2)


def test_variant_families():
    B = Basis.canonical(3)
    c = partition_cover(3, [1, 2])
    g1 = cover_geometry(B, c, 1)
    assert g1.H.dim == 2 and g1.H_perp.dim == 1
    assert [F.dim for F in g1.family] == [2, 2]
    g3 = cover_geometry(B, c, 3)
    assert [F.dim for F in g3.family] == [2, 2]
    assert all(F.contains(g3.H_perp) for F in g3.family)


def test_gl_invariance():
    rng = np.random.default_rng(3)
    K = random_polytope(9, 3)
    B = random_basis(rng, 3)
    covers = [c for c in all_equal_weight_covers(3, 3) if c.p > 1]
    for v in (1, 2, 3, 4):
        base = [eval_affine_bt(K, B, c, v).ratio for c in covers]
        for _ in range(3):
            K2, B2 = gl_transform(K, B, rng.standard_normal((3, 3)), v)
            moved = [eval_affine_bt(K2, B2, c, v).ratio for c in covers]
            assert np.allclose(moved, base, rtol=1e-6)


def test_variant3_not_covariant_under_direct_action():
    rng = np.random.default_rng(4)
    K = random_polytope(9, 3)
    B = random_basis(rng, 3)
    T = np.array([[1.0, 0, 0], [0, 1, 0], [2.0, 0, 1]])
    c = partition_cover(3)
    a = eval_affine_bt(K, B, c, 3).ratio
    b = eval_affine_bt(K.linear_map(T), B.transformed(T), c, 3).ratio
    assert abs(a / b - 1) > 1e-3


def test_report_json():
    import json
    rep = eval_affine_bt(standard_body("cube", 2), Basis.canonical(2), lw_cover(2), 1)
    d = rep.to_json()
    json.dumps(d)
    assert d["direction"] == "le" and len(d["inputs_digest"]) == 16
