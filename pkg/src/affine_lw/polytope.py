"""Convex polytopes in dimension <= 6: hulls, H/V conversion, volumes, projections, sections.

Facets come from Qhull (``scipy.spatial``); volumes are computed here by a
fan triangulation from the vertex centroid over the triangulated facets.
Lower-dimensional bodies always live in the coordinates of an explicit
orthonormal frame, never in ambient coordinates.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, minimize, minimize_scalar
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

from .linalg import Subspace, orth_complement

GEOM_RTOL = 1e-9
BRUTE_FORCE_LIMIT = 20_000


class FlatInputError(ValueError):
    """Input points do not span their ambient space."""

    def __init__(self, affine_dim: int, ambient_dim: int):
        super().__init__(f"points span an affine subspace of dimension {affine_dim} < {ambient_dim}")
        self.affine_dim = affine_dim
        self.ambient_dim = ambient_dim


class UnboundedError(ValueError):
    pass


class OriginNotInteriorError(ValueError):
    pass


def _diameter(points: np.ndarray) -> float:
    if len(points) < 2:
        return 0.0
    return float(np.linalg.norm(points.max(axis=0) - points.min(axis=0)))


def affine_dim(points, tol: float | None = None) -> int:
    pts = np.asarray(points, dtype=float)
    if len(pts) <= 1:
        return 0
    centered = pts - pts.mean(axis=0)
    s = np.linalg.svd(centered, compute_uv=False)
    if tol is None:
        tol = GEOM_RTOL * max(_diameter(pts), 1e-300)
    return int(np.sum(s > tol))


@dataclass(frozen=True)
class Facet:
    normal: np.ndarray
    offset: float
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class Hull:
    vertices: np.ndarray
    facets: tuple[Facet, ...]
    simplices: np.ndarray  # triangulated boundary, indices into ``vertices``


def _dedupe_planes(eqs: np.ndarray, scale: float) -> tuple[np.ndarray, np.ndarray]:
    A = eqs[:, :-1]
    b = -eqs[:, -1]
    keep: list[int] = []
    for i in range(len(A)):
        dup = False
        for j in keep:
            if np.abs(A[i] - A[j]).max() < 1e-9 and abs(b[i] - b[j]) < 1e-9 * max(scale, 1.0):
                dup = True
                break
        if not dup:
            keep.append(i)
    return A[keep], b[keep]


def hull(points) -> Hull:
    """Convex hull of a full-dimensional point set in R^k, k >= 1."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or len(pts) == 0:
        raise ValueError("expected a nonempty (N, k) array of points")
    k = pts.shape[1]
    dim = affine_dim(pts)
    if dim < k:
        raise FlatInputError(dim, k)
    if k == 1:
        lo, hi = int(np.argmin(pts[:, 0])), int(np.argmax(pts[:, 0]))
        verts = pts[[lo, hi]]
        facets = (Facet(np.array([-1.0]), -float(verts[0, 0]), (0,)),
                  Facet(np.array([1.0]), float(verts[1, 0]), (1,)))
        return Hull(verts, facets, np.array([[0], [1]]))
    # fixed permutation so the result does not depend on adversarial input order
    perm = np.random.default_rng(12345).permutation(len(pts))
    qh = ConvexHull(pts[perm])
    vidx = np.sort(qh.vertices)
    verts = pts[perm][vidx]
    remap = {int(v): i for i, v in enumerate(vidx)}
    simplices = np.vectorize(remap.__getitem__)(qh.simplices)
    scale = _diameter(verts)
    A, b = _dedupe_planes(qh.equations, scale)
    eps = GEOM_RTOL * max(scale, 1.0)
    facets = []
    for a, off in zip(A, b):
        inc = tuple(int(i) for i in np.flatnonzero(np.abs(verts @ a - off) <= 10 * eps))
        facets.append(Facet(a, float(off), inc))
    return Hull(verts, tuple(facets), simplices)


def _simplex_fan_volume(verts: np.ndarray, simplices: np.ndarray) -> float:
    k = verts.shape[1]
    c = verts.mean(axis=0)
    mats = verts[simplices] - c
    return float(np.abs(np.linalg.det(mats)).sum() / math.factorial(k))


def _polygon_area(pts: np.ndarray) -> float:
    c = pts.mean(axis=0)
    ang = np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0])
    p = pts[np.argsort(ang)]
    x, y = p[:, 0], p[:, 1]
    return float(abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))) / 2)


class Polytope:
    """A convex polytope in R^k with both representations.

    ``vertices`` are the extreme points; ``A x <= b`` the facet halfspaces
    with unit normals. An empty polytope has no vertices; a flat one (lower
    dimensional in R^k) keeps its points but has volume 0 and no H-rep.
    """

    def __init__(self, vertices: np.ndarray, A: np.ndarray | None, b: np.ndarray | None,
                 simplices: np.ndarray | None = None, dim: int | None = None, flat: bool = False):
        self.vertices = np.asarray(vertices, dtype=float)
        self.dim = int(dim if dim is not None else self.vertices.shape[1])
        self.A = A
        self.b = b
        self._simplices = simplices
        self.flat = flat
        self._volume: float | None = None

    # -- construction -------------------------------------------------
    @classmethod
    def empty(cls, k: int) -> "Polytope":
        return cls(np.zeros((0, k)), None, None, dim=k, flat=True)

    @classmethod
    def from_points(cls, points, allow_flat: bool = False) -> "Polytope":
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        k = pts.shape[1]
        if k == 0:
            return cls(np.zeros((1, 0)), np.zeros((0, 0)), np.zeros(0), dim=0)
        try:
            h = hull(pts)
        except FlatInputError:
            if not allow_flat:
                raise
            return cls(pts, None, None, dim=k, flat=True)
        A = np.array([f.normal for f in h.facets])
        b = np.array([f.offset for f in h.facets])
        return cls(h.vertices, A, b, simplices=h.simplices, dim=k)

    @classmethod
    def from_halfspaces(cls, A, b, check_bounded: bool = True) -> "Polytope":
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.asarray(b, dtype=float).ravel()
        if check_bounded:
            _check_bounded(A, b)
        verts = h_to_v(A, b)
        if len(verts) == 0:
            return cls.empty(A.shape[1])
        return cls.from_points(verts, allow_flat=True)

    # -- basic queries ------------------------------------------------
    @property
    def is_empty(self) -> bool:
        return len(self.vertices) == 0

    @property
    def diameter(self) -> float:
        return _diameter(self.vertices)

    @property
    def eps(self) -> float:
        return GEOM_RTOL * max(self.diameter, 1e-12)

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def volume(self) -> float:
        if self._volume is None:
            self._volume = self._compute_volume()
        return self._volume

    def _compute_volume(self) -> float:
        if self.is_empty:
            return 0.0
        if self.dim == 0:
            return 1.0
        if self.flat:
            return 0.0
        if self.dim == 1:
            return float(self.vertices.max() - self.vertices.min())
        if self.dim == 2:
            return _polygon_area(self.vertices)
        return _simplex_fan_volume(self.vertices, self._simplices)

    def centroid(self) -> np.ndarray:
        """Centre of mass (by triangulation)."""
        if self.flat or self.dim == 0:
            return self.vertices.mean(axis=0)
        if self.dim == 1:
            return np.array([(self.vertices.max() + self.vertices.min()) / 2])
        v = self.vertices
        c = v.mean(axis=0)
        simp = self._simplices
        if simp is None:
            simp = ConvexHull(v).simplices
        mats = v[simp] - c
        vols = np.abs(np.linalg.det(mats))
        cents = (v[simp].sum(axis=1) + c) / (self.dim + 1)
        return (vols[:, None] * cents).sum(axis=0) / vols.sum()

    def contains(self, x, tol: float | None = None) -> np.ndarray | bool:
        x = np.asarray(x, dtype=float)
        tol = self.eps if tol is None else tol
        if self.A is None:
            raise ValueError("membership needs a full-dimensional polytope")
        vals = np.atleast_2d(x) @ self.A.T - self.b
        inside = (vals <= tol).all(axis=1)
        return bool(inside[0]) if x.ndim == 1 else inside

    # -- transformations ----------------------------------------------
    def translate(self, t) -> "Polytope":
        return Polytope.from_points(self.vertices + np.asarray(t, dtype=float), allow_flat=True)

    def linear_map(self, T) -> "Polytope":
        return Polytope.from_points(self.vertices @ np.asarray(T, dtype=float).T, allow_flat=True)

    def scale(self, lam: float) -> "Polytope":
        return Polytope.from_points(self.vertices * lam, allow_flat=True)

    def centered(self) -> "Polytope":
        """Translate so the centroid is the origin."""
        return self.translate(-self.centroid())

    def to_json(self) -> dict:
        return {"kind": "vrep", "vertices": self.vertices.tolist()}

    def __repr__(self):
        return f"Polytope(dim={self.dim}, vertices={len(self.vertices)}, flat={self.flat})"


def _check_bounded(A: np.ndarray, b: np.ndarray) -> None:
    k = A.shape[1]
    for i in range(k):
        for sign in (1.0, -1.0):
            c = np.zeros(k)
            c[i] = -sign
            res = linprog(c, A_ub=A, b_ub=b, bounds=[(None, None)] * k, method="highs")
            if res.status == 3:
                raise UnboundedError("halfspace system is unbounded")
            if res.status == 2:
                return  # infeasible: empty, hence bounded


def v_to_h(vertices) -> tuple[np.ndarray, np.ndarray]:
    P = Polytope.from_points(vertices)
    return P.A.copy(), P.b.copy()


def _drop_trivial_rows(A, b, eps):
    norms = np.linalg.norm(A, axis=1)
    trivial = norms <= 1e-14
    if np.any(b[trivial] < -eps):
        return None, None
    A, b, norms = A[~trivial], b[~trivial], norms[~trivial]
    return A / norms[:, None], b / norms


def h_to_v(A, b) -> np.ndarray:
    """Vertices of {x : A x <= b} (assumed bounded). Empty array if infeasible or flat."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    k = A.shape[1]
    eps = GEOM_RTOL * max(1.0, np.abs(b).max(initial=0.0))
    A, b = _drop_trivial_rows(A, b, eps)
    if A is None:
        return np.zeros((0, k))
    if k == 0:
        return np.zeros((1, 0))
    if k == 1:
        a = A[:, 0]
        pos, neg = a > 0, a < 0
        if not pos.any() or not neg.any():
            raise UnboundedError("halfspace system is unbounded")
        hi = np.min(b[pos] / a[pos])
        lo = np.max(b[neg] / a[neg])
        if hi < lo - eps:
            return np.zeros((0, 1))
        return np.array([[lo], [max(hi, lo)]])
    if math.comb(len(A), k) <= BRUTE_FORCE_LIMIT:
        return _vertices_brute_force(A, b, eps)
    return _vertices_qhull(A, b, eps)


def _vertices_brute_force(A, b, eps):
    k = A.shape[1]
    combos = np.array(list(itertools.combinations(range(len(A)), k)))
    M = A[combos]
    dets = np.linalg.det(M)
    ok = np.abs(dets) > 1e-10
    if not ok.any():
        return np.zeros((0, k))
    x = np.linalg.solve(M[ok], b[combos[ok]][..., None])[..., 0]
    feas = (x @ A.T - b <= 10 * eps).all(axis=1)
    x = x[feas]
    if len(x) == 0:
        return np.zeros((0, k))
    scale = max(1.0, np.abs(x).max())
    _, idx = np.unique(np.round(x / (1e-9 * scale)), axis=0, return_index=True)
    return x[np.sort(idx)]


def chebyshev_center(A, b) -> tuple[np.ndarray, float]:
    """Centre and radius of the largest ball inside {A x <= b} (unit-normal rows)."""
    k = A.shape[1]
    norms = np.linalg.norm(A, axis=1)
    c = np.zeros(k + 1)
    c[-1] = -1.0
    A_ub = np.hstack([A, norms[:, None]])
    res = linprog(c, A_ub=A_ub, b_ub=b, bounds=[(None, None)] * k + [(0, None)], method="highs")
    if res.status != 0:
        return np.zeros(k), -1.0
    return res.x[:k], float(res.x[-1])


def _vertices_qhull(A, b, eps):
    k = A.shape[1]
    center, radius = chebyshev_center(A, b)
    if radius <= 10 * eps:
        return np.zeros((0, k))
    hs = HalfspaceIntersection(np.hstack([A, -b[:, None]]), center)
    pts = hs.intersections
    pts = pts[np.isfinite(pts).all(axis=1)]
    return pts


def hausdorff(P, Q) -> float:
    """Hausdorff distance between vertex sets (polytopes or point arrays)."""
    P = np.asarray(P.vertices if isinstance(P, Polytope) else P, dtype=float)
    Q = np.asarray(Q.vertices if isinstance(Q, Polytope) else Q, dtype=float)
    d = np.linalg.norm(P[:, None, :] - Q[None, :, :], axis=-1)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


# ---------------------------------------------------------------------------
# volumes, projections, sections

def volume(P, within: Subspace | None = None) -> float:
    """k-dimensional volume of a polytope or point set.

    With ``within`` the points must lie in that subspace (ambient coordinates);
    they are expressed in its frame before measuring.
    """
    if isinstance(P, Polytope):
        if within is None:
            return P.volume()
        pts = P.vertices
    else:
        pts = np.atleast_2d(np.asarray(P, dtype=float))
    if within is not None:
        tol = GEOM_RTOL * max(_diameter(pts), 1.0) * 10
        if within.residual(pts) > tol:
            raise ValueError("points do not lie in the given subspace")
        pts = within.coords(pts)
    if pts.shape[1] == 0:
        return 1.0 if len(pts) else 0.0
    return Polytope.from_points(pts, allow_flat=True).volume()


def project(P: Polytope, H: Subspace) -> Polytope:
    """Orthogonal projection onto H, in H's frame coordinates."""
    if H.dim == 0:
        return Polytope(np.zeros((1, 0)), np.zeros((0, 0)), np.zeros(0), dim=0)
    return Polytope.from_points(H.coords(P.vertices), allow_flat=True)


@dataclass(frozen=True)
class AffineSlice:
    base_point: np.ndarray
    directions: Subspace

    def __post_init__(self):
        bp = np.asarray(self.base_point, dtype=float)
        if not np.isfinite(bp).all():
            raise ValueError("base point must be finite")
        object.__setattr__(self, "base_point", bp)


def _require_hrep(P: Polytope):
    if P.A is None:
        raise ValueError("operation needs a full-dimensional polytope")


def section(P: Polytope, slc: AffineSlice) -> Polytope:
    """P intersected with base + span(directions), in the directions' frame coordinates."""
    _require_hrep(P)
    F = slc.directions.frame
    k = F.shape[1]
    A = P.A @ F
    b = P.b - P.A @ slc.base_point
    if k == 0:
        inside = (b >= -P.eps).all()
        return Polytope(np.zeros((1 if inside else 0, 0)), None, None, dim=0, flat=not inside)
    verts = h_to_v(A, b)
    if len(verts) == 0:
        return Polytope.empty(k)
    return Polytope.from_points(verts, allow_flat=True)


def section_volume(P: Polytope, slc: AffineSlice) -> float:
    return section(P, slc).volume()


def linear_section_volume(P: Polytope, E: Subspace) -> float:
    """|P intersect E| for a linear subspace E."""
    return section(P, AffineSlice(np.zeros(P.dim), E)).volume()


def projection_volume(P: Polytope, H: Subspace) -> float:
    return project(P, H).volume()


def minkowski_functional(P: Polytope, x) -> np.ndarray | float:
    """inf{lam > 0 : x in lam P}; needs 0 in the interior of P."""
    _require_hrep(P)
    if (P.b <= P.eps).any():
        raise OriginNotInteriorError("origin is not interior to the body")
    x = np.asarray(x, dtype=float)
    vals = np.atleast_2d(x) @ (P.A / P.b[:, None]).T
    out = np.maximum(vals.max(axis=1), 0.0)
    return float(out[0]) if x.ndim == 1 else out


# ---------------------------------------------------------------------------
# maximal parallel section

@dataclass
class MaxSection:
    point: np.ndarray      # maximizer in H-coordinates
    point_ambient: np.ndarray
    value: float
    at_origin: float       # |K intersect H^perp|
    evaluations: int


class _SectionFunction:
    """y in H-coordinates -> |K intersect (embed(y) + H^perp)|."""

    def __init__(self, P: Polytope, H: Subspace):
        _require_hrep(P)
        self.P = P
        self.H = H
        self.perp = orth_complement(H)
        self.AH = P.A @ H.frame
        self.AP = P.A @ self.perp.frame
        self.k = self.perp.dim
        self.calls = 0
        self.eps = P.eps

    def __call__(self, y) -> float:
        self.calls += 1
        y = np.atleast_1d(np.asarray(y, dtype=float))
        rhs = self.P.b - self.AH @ y
        if self.k == 1:
            return _interval_length(self.AP[:, 0], rhs, self.eps)
        verts = h_to_v(self.AP, rhs)
        if len(verts) == 0:
            return 0.0
        return Polytope.from_points(verts, allow_flat=True).volume()


def _interval_length(a, b, eps):
    pos, neg = a > 1e-14, a < -1e-14
    zero = ~(pos | neg)
    if np.any(b[zero] < -eps):
        return 0.0
    hi = np.min(b[pos] / a[pos])
    lo = np.max(b[neg] / a[neg])
    return float(max(hi - lo, 0.0))


def max_parallel_section(P: Polytope, H: Subspace, resolution: int = 17,
                         max_cells: int = 50_000) -> MaxSection:
    """Maximize |P intersect (x + H^perp)| over x in H.

    The section volume to the power 1/(n - dim H) is concave on the projection
    of P, so a coarse grid followed by a simplex (Nelder-Mead) refinement
    finds the maximum. dim H must be 1, 2 or 3.
    """
    d = H.dim
    if d < 1 or d > 3:
        raise ValueError(f"unsupported dimension {d} for H (need 1..3)")
    g = _SectionFunction(P, H)
    n = P.dim
    power = 1.0 / (n - d)
    Q = project(P, H)
    lo, hi = Q.bbox()
    width = float(np.max(hi - lo))
    origin_value = g(np.zeros(d))

    if d == 1:
        res = minimize_scalar(lambda t: -g([t]), bounds=(lo[0], hi[0]), method="bounded",
                              options={"xatol": 1e-10 * max(width, 1e-12)})
        cands = [(origin_value, np.zeros(1)), (-res.fun, np.array([res.x]))]
    else:
        r = resolution
        while r ** d > max_cells and r > 2:
            r -= 1
        axes = [np.linspace(lo[i], hi[i], r + 2)[1:-1] for i in range(d)]
        grid = np.array(list(itertools.product(*axes)))
        grid = grid[Q.contains(grid, tol=0.0)] if Q.A is not None else grid
        vals = np.array([g(y) for y in grid]) if len(grid) else np.zeros(0)
        if len(grid):
            start = grid[int(np.argmax(vals))]
            best_grid = float(vals.max())
        else:
            start = Q.centroid()
            best_grid = g(start)
        cell = (hi - lo) / (r + 1)

        def objective(y):
            v = g(y)
            return -(v ** power) if v > 0 else float(np.max(Q.A @ y - Q.b)) if Q.A is not None else 0.0

        simplex = np.vstack([start] + [start + np.eye(d)[i] * cell[i] for i in range(d)])
        res = minimize(objective, start, method="Nelder-Mead",
                       options={"xatol": 1e-7 * max(width, 1e-12), "fatol": 1e-14,
                                "initial_simplex": simplex, "maxiter": 4000, "maxfev": 8000})
        cands = [(origin_value, np.zeros(d)), (best_grid, start), (g(res.x), np.asarray(res.x))]
    value, point = max(cands, key=lambda c: c[0])
    return MaxSection(point=point, point_ambient=H.embed(point), value=float(value),
                      at_origin=float(origin_value), evaluations=g.calls)


# ---------------------------------------------------------------------------
# Monte Carlo oracle

@dataclass
class MCEstimate:
    estimate: float
    std_error: float
    samples: int


def mc_volume(P: Polytope, seed: int, samples: int = 1_000_000, chunk: int = 100_000) -> MCEstimate:
    """Hit-or-miss volume estimate in the bounding box; depends only on (P, seed, samples)."""
    _require_hrep(P)
    lo, hi = P.bbox()
    box = float(np.prod(hi - lo))
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        x = lo + (hi - lo) * rng.random((m, P.dim))
        hits += int(((x @ P.A.T) <= P.b).all(axis=1).sum())
        done += m
    f = hits / samples
    return MCEstimate(box * f, box * math.sqrt(f * (1 - f) / samples), samples)


# ---------------------------------------------------------------------------
# standard and random bodies

def standard_body(kind: str, n: int, sides=None) -> Polytope:
    """'cube' [0,1]^n, 'ccube' [-1,1]^n, 'cross' B_1^n, 'simplex' conv{0, e_i}, 'box' prod [0, a_i]."""
    if n < 1 or n > 6:
        raise ValueError(f"dimension {n} outside 1..6")
    if kind == "cube":
        pts = np.array(list(itertools.product([0.0, 1.0], repeat=n)))
    elif kind == "ccube":
        pts = np.array(list(itertools.product([-1.0, 1.0], repeat=n)))
    elif kind == "cross":
        pts = np.vstack([np.eye(n), -np.eye(n)])
    elif kind == "simplex":
        pts = np.vstack([np.zeros(n), np.eye(n)])
    elif kind == "box":
        a = np.ones(n) if sides is None else np.asarray(sides, dtype=float)
        pts = np.array(list(itertools.product([0.0, 1.0], repeat=n))) * a
    else:
        raise ValueError(f"unknown body kind {kind!r}")
    return Polytope.from_points(pts)


def random_polytope(seed: int, n: int, num_points: int = 12, shape: str = "gaussian",
                    center: bool = True) -> Polytope:
    """Hull of seeded random points (Gaussian or uniform in the ball), centroid at 0 if ``center``."""
    rng = np.random.default_rng(seed)
    num_points = max(num_points, n + 1)
    while True:
        if shape == "gaussian":
            pts = rng.standard_normal((num_points, n))
        elif shape == "ball":
            g = rng.standard_normal((num_points, n))
            r = rng.random(num_points) ** (1.0 / n)
            pts = g / np.linalg.norm(g, axis=1)[:, None] * r[:, None]
        else:
            raise ValueError(f"unknown shape {shape!r}")
        if affine_dim(pts) == n:
            break
    P = Polytope.from_points(pts)
    return P.centered() if center else P


_NAMED = re.compile(r"^(cube|ccube|cross|simplex)(\d)$")


def named_body(name: str) -> Polytope:
    m = _NAMED.match(name)
    if not m:
        raise ValueError(f"unknown body name {name!r}")
    return standard_body(m.group(1), int(m.group(2)))


def body_from_spec(spec: dict) -> Polytope:
    kind = spec.get("kind")
    if kind is None:
        raise ValueError("body spec needs a \"kind\": cube, ccube, cross, simplex, box, vrep, hrep or random")
    if kind in ("cube", "ccube", "cross", "simplex", "box"):
        return standard_body(kind, int(spec["n"]), spec.get("sides"))
    if kind == "vrep":
        return Polytope.from_points(spec["vertices"])
    if kind == "hrep":
        A = [h["a"] for h in spec["halfspaces"]]
        b = [h["b"] for h in spec["halfspaces"]]
        return Polytope.from_halfspaces(A, b)
    if kind == "random":
        return random_polytope(int(spec.get("seed", 0)), int(spec["n"]), int(spec.get("num_points", 12)),
                               spec.get("shape", "gaussian"), bool(spec.get("center", True)))
    raise ValueError(f"unknown body kind {kind!r}")
