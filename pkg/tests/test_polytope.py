import math

import numpy as np
import pytest

from affine_lw.linalg import Subspace, span_subspace
from affine_lw.polytope import (AffineSlice, FlatInputError, OriginNotInteriorError, Polytope, UnboundedError,
                                body_from_spec, h_to_v, hausdorff, hull, linear_section_volume,
                                max_parallel_section, mc_volume, minkowski_functional, named_body,
                                projection_volume, random_polytope, section, standard_body, v_to_h)


def e(n, *idx):
    return span_subspace(np.eye(n)[list(idx)], n)


def test_hull_examples():
    h = hull([[0, 0], [1, 0], [0, 1], [1, 1], [0.5, 0.5]])
    assert len(h.vertices) == 4
    for n in (2, 3, 4):
        assert len(standard_body("cube", n).A) == 2 * n
    with pytest.raises(FlatInputError):
        hull([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]])


def test_hull_of_ball_points_inside_ball():
    rng = np.random.default_rng(0)
    g = rng.standard_normal((100, 3))
    pts = g / np.linalg.norm(g, axis=1)[:, None] * rng.random(100)[:, None] ** (1 / 3)
    assert Polytope.from_points(pts).volume() <= 4 / 3 * math.pi


def test_representation_roundtrip():
    for n in (2, 3, 4):
        cube = standard_body("cube", n)
        verts = h_to_v(cube.A, cube.b)
        assert hausdorff(Polytope.from_points(verts), cube) < 1e-12
    cross = standard_body("cross", 3)
    assert len(cross.vertices) == 6 and len(cross.A) == 8
    rng = np.random.default_rng(1)
    P = Polytope.from_points(rng.standard_normal((20, 3)))
    A, b = v_to_h(P.vertices)
    assert hausdorff(Polytope.from_halfspaces(A, b), P) < 1e-9


def test_unbounded_rejected():
    with pytest.raises(UnboundedError):
        Polytope.from_halfspaces([[1, 0], [0, 1]], [1, 1])


def test_volumes():
    for n in range(1, 7):
        assert standard_body("cube", n).volume() == pytest.approx(1.0)
        assert standard_body("simplex", n).volume() == pytest.approx(1 / math.factorial(n))
        assert standard_body("cross", n).volume() == pytest.approx(2 ** n / math.factorial(n))
    assert named_body("cross4").volume() == pytest.approx(2 / 3)


def test_projection_examples():
    assert projection_volume(standard_body("cube", 3), e(3, 1, 2)) == pytest.approx(1.0)
    assert projection_volume(standard_body("cross", 2), e(2, 1)) == pytest.approx(2.0)


def test_section_examples():
    assert linear_section_volume(standard_body("ccube", 3), e(3, 0, 1)) == pytest.approx(4.0)
    assert linear_section_volume(standard_body("cross", 3), e(3, 0, 1)) == pytest.approx(2.0)
    far = section(standard_body("cube", 3), AffineSlice(np.array([0, 0, 5.0]), e(3, 0, 1)))
    assert far.is_empty and far.volume() == 0.0


def test_minkowski_functional():
    cube = standard_body("ccube", 3)
    assert minkowski_functional(cube, np.ones(3)) == pytest.approx(1.0)
    rng = np.random.default_rng(2)
    K = random_polytope(3, 3)
    x = rng.standard_normal(3)
    assert minkowski_functional(K, 2 * x) == pytest.approx(2 * minkowski_functional(K, x))
    assert minkowski_functional(standard_body("cross", 2), np.array([0.3, 0.4])) == pytest.approx(0.7)
    with pytest.raises(OriginNotInteriorError):
        minkowski_functional(standard_body("cube", 2), np.ones(2))


def test_max_parallel_section():
    K = standard_body("ccube", 3)
    ms = max_parallel_section(K, e(3, 2))
    assert np.allclose(ms.point, 0, atol=1e-6) and ms.value == pytest.approx(4.0)
    simplex = standard_body("simplex", 3)
    grid = max(section(simplex, AffineSlice(np.array([0, 0, t]), e(3, 0, 1))).volume()
               for t in np.linspace(0, 1, 2001))
    assert max_parallel_section(simplex, e(3, 2)).value == pytest.approx(grid, rel=1e-6)
    assert grid == pytest.approx(0.5)
    K = random_polytope(4, 3)
    H = span_subspace([[1, 1, 0], [0, 1, 1]], 3)
    shift = H.embed(np.array([0.3, -0.2]))
    a = max_parallel_section(K, H).value
    b = max_parallel_section(K.translate(shift), H).value
    assert abs(a - b) < 1e-6 * a


def test_mc_volume():
    cube = standard_body("cube", 3)
    est = mc_volume(cube, 0, 10_000)
    assert est.estimate == 1.0 and est.std_error == 0.0
    cross = standard_body("cross", 3)
    est = mc_volume(cross, 1, 1_000_000)
    assert abs(est.estimate - 4 / 3) < 3 * est.std_error
    again = mc_volume(cross, 1, 1_000_000)
    assert again.estimate == est.estimate
    assert mc_volume(cross, 2, 100_000).estimate != mc_volume(cross, 3, 100_000).estimate


def test_random_polytope_reproducible():
    a, b = random_polytope(7, 3), random_polytope(7, 3)
    assert np.array_equal(a.vertices, b.vertices)
    assert np.allclose(a.centroid(), 0, atol=1e-12)


def test_body_from_spec():
    assert body_from_spec({"kind": "cube", "n": 2}).volume() == 1.0
    hrep = {"kind": "hrep", "halfspaces": [{"a": [1, 0], "b": 1}, {"a": [-1, 0], "b": 1},
                                           {"a": [0, 1], "b": 1}, {"a": [0, -1], "b": 1}]}
    assert body_from_spec(hrep).volume() == pytest.approx(4.0)
    K = random_polytope(1, 3)
    assert body_from_spec(K.to_json()).volume() == pytest.approx(K.volume())
    with pytest.raises(ValueError):
        body_from_spec({"kind": "sphere"})


def test_centroid_of_simplex():
    assert np.allclose(standard_body("simplex", 3).centroid(), 0.25)
