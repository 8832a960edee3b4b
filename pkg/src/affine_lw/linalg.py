"""Small dense linear algebra: wedge volumes, orthonormal frames, dual bases.

Everything here works in 64-bit floats on n <= 6 and returns new arrays;
inputs are never modified.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

RANK_RTOL = 1e-10
ORTHO_TOL = 1e-12
MAX_DIM = 6


class RankDeficiencyError(ValueError):
    """Vectors expected to be independent are not (up to the rank threshold)."""


class NotSPDError(ValueError):
    pass


def _as_vectors(vectors) -> np.ndarray:
    arr = np.asarray(vectors, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError(f"expected a list of vectors, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class Basis:
    """An ordered basis w_1..w_n of R^n, stored as the columns of ``matrix``."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"basis matrix must be square, got {m.shape}")
        if not 1 <= m.shape[0] <= MAX_DIM:
            raise ValueError(f"dimension {m.shape[0]} outside 1..{MAX_DIM}")
        scale = max(np.linalg.norm(m, axis=0).max(), 1e-300)
        if abs(np.linalg.det(m / scale)) <= RANK_RTOL:
            raise RankDeficiencyError("basis vectors do not span R^n")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_vectors(cls, vectors) -> "Basis":
        return cls(_as_vectors(vectors).T)

    @classmethod
    def canonical(cls, n: int) -> "Basis":
        return cls(np.eye(n))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def vectors(self) -> np.ndarray:
        """Rows are w_1..w_n."""
        return self.matrix.T

    def __getitem__(self, i: int) -> np.ndarray:
        return self.matrix[:, i]

    def select(self, indices) -> np.ndarray:
        """Rows w_i for the given 0-based indices."""
        return self.matrix[:, list(indices)].T

    def condition(self) -> float:
        return float(np.linalg.cond(self.matrix))

    def transformed(self, T) -> "Basis":
        return Basis(np.asarray(T, dtype=float) @ self.matrix)

    def to_json(self) -> dict:
        return {"n": self.n, "vectors": self.vectors.tolist()}

    @classmethod
    def from_json(cls, data) -> "Basis":
        if isinstance(data, str):
            data = json.loads(data)
        b = cls.from_vectors(data["vectors"])
        if b.n != int(data["n"]):
            raise ValueError(f"declared n={data['n']} but got {b.n} vectors of length {b.n}")
        return b


def wedge(vectors, n: int | None = None) -> float:
    """Volume of the parallelepiped spanned by ``vectors``: sqrt(det Gram).

    An empty family has wedge 1. ``n`` is only used to check the ambient
    dimension of a possibly empty family.
    """
    if len(vectors) == 0:
        return 1.0
    v = _as_vectors(vectors)
    if n is not None and v.shape[1] != n:
        raise ValueError(f"vectors have length {v.shape[1]}, expected {n}")
    if v.shape[0] > v.shape[1]:
        return 0.0
    gram = v @ v.T
    det = np.linalg.det(gram)
    return float(np.sqrt(max(det, 0.0)))


def subset_wedges(basis: Basis) -> np.ndarray:
    """Wedge of every subfamily, indexed by bitmask (bit i <-> w_{i+1})."""
    n = basis.n
    out = np.ones(1 << n)
    vecs = basis.vectors
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        out[mask] = wedge(vecs[idx])
    return out


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of R^n carried by an orthonormal frame (columns of ``frame``)."""

    frame: np.ndarray
    ambient_dim: int = field(default=-1)

    def __post_init__(self):
        f = np.array(self.frame, dtype=float)
        n = self.ambient_dim if self.ambient_dim >= 0 else f.shape[0]
        if f.size == 0:
            f = np.zeros((n, 0))
        if f.ndim != 2 or f.shape[0] != n:
            raise ValueError(f"frame shape {f.shape} incompatible with ambient dim {n}")
        gram = f.T @ f
        if not np.allclose(gram, np.eye(f.shape[1]), atol=ORTHO_TOL * 100):
            raise ValueError("frame is not orthonormal")
        f.setflags(write=False)
        object.__setattr__(self, "frame", f)
        object.__setattr__(self, "ambient_dim", n)

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(np.eye(n), n)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(np.zeros((n, 0)), n)

    def projector(self) -> np.ndarray:
        return self.frame @ self.frame.T

    def coords(self, points) -> np.ndarray:
        """Coordinates of (the projections of) ``points`` in this frame."""
        return np.asarray(points, dtype=float) @ self.frame

    def embed(self, coords) -> np.ndarray:
        return np.asarray(coords, dtype=float) @ self.frame.T

    def residual(self, points) -> float:
        """Largest distance from the given points to the subspace."""
        p = np.atleast_2d(np.asarray(points, dtype=float))
        r = p - p @ self.projector()
        return float(np.abs(r).max()) if r.size else 0.0

    def contains(self, other: "Subspace", tol: float = 1e-9) -> bool:
        return other.dim == 0 or self.residual(other.frame.T) < tol

    def equals(self, other: "Subspace", tol: float = 1e-9) -> bool:
        return self.dim == other.dim and self.contains(other, tol) and other.contains(self, tol)


def orthonormalize(vectors, n: int | None = None) -> np.ndarray:
    """Modified Gram-Schmidt with one re-orthogonalization pass.

    Returns the frame as columns. Raises RankDeficiencyError when a vector
    has a residual below 1e-10 times the largest input norm.
    """
    v = np.zeros((0, n)) if len(vectors) == 0 else _as_vectors(vectors)
    if n is not None and v.shape[1] != n:
        raise ValueError(f"vectors have length {v.shape[1]}, expected {n}")
    if v.shape[0] == 0:
        return np.zeros((v.shape[1], 0))
    threshold = RANK_RTOL * np.linalg.norm(v, axis=1).max()
    q: list[np.ndarray] = []
    for i, x in enumerate(v):
        u = x.copy()
        for _ in range(2):
            for e in q:
                u -= (e @ u) * e
        norm = np.linalg.norm(u)
        if norm <= threshold:
            raise RankDeficiencyError(f"vector {i} is dependent on the previous ones (residual {norm:.3g})")
        q.append(u / norm)
    return np.array(q).T


def span_subspace(vectors, n: int | None = None) -> Subspace:
    if len(vectors) == 0:
        if n is None:
            raise ValueError("ambient dimension needed for an empty span")
        return Subspace.zero(n)
    frame = orthonormalize(vectors, n)
    return Subspace(frame, frame.shape[0])


def orth_complement(H: Subspace) -> Subspace:
    n, k = H.ambient_dim, H.dim
    if k == 0:
        return Subspace.full(n)
    if k == n:
        return Subspace.zero(n)
    u, _, _ = np.linalg.svd(H.frame, full_matrices=True)
    comp = u[:, k:]
    # one projection pass keeps the 1e-12 orthogonality guarantee
    comp = comp - H.frame @ (H.frame.T @ comp)
    comp, _ = np.linalg.qr(comp)
    return Subspace(comp, n)


def direct_sum(*subspaces: Subspace) -> Subspace:
    """Span of the union of the given subspaces (which must be independent)."""
    n = subspaces[0].ambient_dim
    cols = [s.frame for s in subspaces if s.dim]
    if not cols:
        return Subspace.zero(n)
    return span_subspace(np.hstack(cols).T, n)


def dual_basis(B: Basis) -> Basis:
    """The basis v_i given by the rows of M^{-1}, so that <v_i, w_j> = delta_ij."""
    if np.linalg.cond(B.matrix) > 1e12:
        raise RankDeficiencyError("basis is too close to singular to invert")
    inv = np.linalg.inv(B.matrix)
    return Basis.from_vectors(inv)


def spd_sqrt(A) -> np.ndarray:
    a = np.asarray(A, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSPDError(f"expected a square matrix, got {a.shape}")
    if not np.allclose(a, a.T, rtol=1e-12, atol=1e-12 * max(1.0, np.abs(a).max())):
        raise NotSPDError("matrix is not symmetric")
    vals, vecs = np.linalg.eigh((a + a.T) / 2)
    if vals.min() <= 0:
        raise NotSPDError(f"matrix is not positive definite (min eigenvalue {vals.min():.3g})")
    r = (vecs * np.sqrt(vals)) @ vecs.T
    return (r + r.T) / 2


@dataclass
class AppendixCheck:
    identity_residual: float
    det_residual: float
    orthonormality_residual: float
    det_sqrt: float
    wedge: float

    @property
    def max_residual(self) -> float:
        return max(self.identity_residual, self.det_residual, self.orthonormality_residual)


def appendix_identity_check(B: Basis) -> AppendixCheck:
    """Residuals of the decomposition of the identity built from A = sum w_i (x) w_i.

    With w_i' = A^{-1/2} w_i we expect sum w_i' (x) w_i' = I, det A^{1/2} = |wedge w_i|
    and (w_i') orthonormal.
    """
    W = B.matrix
    A = W @ W.T
    root = spd_sqrt(A)
    Wp = np.linalg.solve(root, W)
    n = B.n
    ident = np.linalg.norm(Wp @ Wp.T - np.eye(n))
    ortho = np.linalg.norm(Wp.T @ Wp - np.eye(n))
    det_root = float(np.linalg.det(root))
    w = wedge(B.vectors)
    return AppendixCheck(
        identity_residual=float(ident),
        det_residual=abs(det_root - w) / w,
        orthonormality_residual=float(ortho),
        det_sqrt=det_root,
        wedge=w,
    )


def random_basis(rng: np.random.Generator, n: int, cond_cap: float = 20.0, max_tries: int = 10_000) -> Basis:
    """Gaussian random basis, resampled until its condition number is <= cond_cap."""
    for _ in range(max_tries):
        m = rng.standard_normal((n, n))
        if np.linalg.cond(m) <= cond_cap:
            return Basis(m)
    raise RuntimeError(f"no basis with condition <= {cond_cap} after {max_tries} draws")


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))
