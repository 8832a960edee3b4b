"""Geometric inequality catalog: every statement evaluated as an exact (lhs, rhs) pair.

Each evaluator returns a :class:`VerificationReport` whose ``ratio`` is
normalized so that ratio >= 1 means the inequality holds: rhs/lhs for
upper bounds, lhs/rhs for lower bounds. All products are accumulated in
log space.

Subspace families per variant (``H_j`` spanned by the w_k with k in S_j,
``Ht_j`` by the w_k with k in S minus S_j):

    1: Ht_j^perp      2: H_j^perp      3: H_j (+ H^perp)      4: Ht_j (+ H^perp)

where "+ H^perp" applies to the restricted (S strictly inside [n]) forms.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .constants import (PrefactorSpec, fradelizi_factor, local_bt_equal_constant, log_bl,
                        log_prefactor, pair_section_constant)
from .covers import (CoverError, IndexCover, enumerate_equal_weight_covers, lw_cover, partition_cover, relabel,
                     validate)
from .linalg import Basis, Subspace, direct_sum, orth_complement, span_subspace
from .polytope import (OriginNotInteriorError, Polytope, linear_section_volume, max_parallel_section,
                       projection_volume)

VERIFY_TOL = 1e-6


@dataclass
class VerificationReport:
    statement: str
    variant: int
    lhs: float
    rhs: float
    ratio: float
    constant: float
    direction: str  # "le" (lhs <= rhs) or "ge" (lhs >= rhs)
    inputs_digest: str
    degenerate: bool = False
    method: str = "exact"
    sigma: float = 0.0  # standard error of the ratio (MC path only)
    notes: list[str] = field(default_factory=list)

    def holds(self, tol: float = VERIFY_TOL, nsigma: float = 3.0) -> bool:
        if self.degenerate:
            return True
        if self.method == "mc":
            return self.ratio >= 1 - nsigma * self.sigma - 1e-12
        return self.ratio >= 1 - tol

    def to_json(self) -> dict:
        d = asdict(self)
        for k in ("lhs", "rhs", "ratio", "constant", "sigma"):
            d[k] = float(d[k])
        return d


def inputs_digest(*parts) -> str:
    """sha256 over the exact bytes of arrays and the JSON of everything else."""
    h = hashlib.sha256()
    for part in parts:
        if isinstance(part, Polytope):
            h.update(np.ascontiguousarray(part.vertices).tobytes())
        elif isinstance(part, Basis):
            h.update(np.ascontiguousarray(part.matrix).tobytes())
        elif isinstance(part, IndexCover):
            h.update(json.dumps(part.to_json(), sort_keys=True).encode())
        elif isinstance(part, np.ndarray):
            h.update(np.ascontiguousarray(part).tobytes())
        else:
            h.update(json.dumps(part, sort_keys=True, default=str).encode())
        h.update(b"|")
    return h.hexdigest()[:16]


def make_report(statement, variant, log_lhs, log_rhs, direction, log_const, digest,
                notes=None, method="exact", sigma=0.0) -> VerificationReport:
    degenerate = not (np.isfinite(log_lhs) and np.isfinite(log_rhs))
    if degenerate:
        ratio = float("nan")
    elif direction == "le":
        ratio = math.exp(log_rhs - log_lhs)
    else:
        ratio = math.exp(log_lhs - log_rhs)
    return VerificationReport(statement, variant, _exp(log_lhs), _exp(log_rhs), ratio,
                              math.exp(log_const), direction, digest, degenerate, method, sigma,
                              list(notes or []))


def _exp(x: float) -> float:
    return math.exp(x) if np.isfinite(x) else 0.0


def _log(x: float) -> float:
    return math.log(x) if x > 0 else float("-inf")


# ---------------------------------------------------------------------------
# subspaces attached to a basis and a cover

@dataclass(frozen=True)
class CoverGeometry:
    """H, H^perp and the per-j subspace family of one variant."""

    H: Subspace
    H_perp: Subspace
    family: tuple[Subspace, ...]


def _span_of(B: Basis, indices) -> Subspace:
    return span_subspace(B.select([i - 1 for i in indices]), B.n) if indices else Subspace.zero(B.n)


def cover_geometry(B: Basis, cover: IndexCover, variant: int) -> CoverGeometry:
    if B.n != cover.n:
        raise ValueError(f"basis has n={B.n} but the cover lives on [{cover.n}]")
    H = _span_of(B, cover.S)
    Hp = orth_complement(H)
    fam = []
    for s, c in zip(cover.subsets, cover.complements()):
        if variant == 1:
            F = orth_complement(_span_of(B, c))
        elif variant == 2:
            F = orth_complement(_span_of(B, s))
        elif variant == 3:
            F = direct_sum(_span_of(B, s), Hp)
        elif variant == 4:
            F = direct_sum(_span_of(B, c), Hp)
        else:
            raise ValueError(f"variant must be 1..4, got {variant}")
        fam.append(F)
    return CoverGeometry(H, Hp, tuple(fam))


def _require_p_above_one(cover: IndexCover, variant: int):
    if variant in (2, 4) and cover.p <= 1:
        raise CoverError(f"variant {variant} needs p > 1 (got p = {cover.p})")


# ---------------------------------------------------------------------------
# cached volumes of one body

class BodyMeasure:
    """Projection and section volumes of one body, cached by subspace."""

    def __init__(self, K: Polytope, resolution: int = 17):
        self.K = K
        self.resolution = resolution
        self._proj: dict[bytes, float] = {}
        self._sect: dict[bytes, float] = {}
        self._max: dict[bytes, float] = {}

    @staticmethod
    def _key(F: Subspace) -> bytes:
        return np.round(F.projector(), 10).tobytes()

    @property
    def volume(self) -> float:
        return self.K.volume()

    def projection(self, F: Subspace) -> float:
        key = self._key(F)
        if key not in self._proj:
            if F.dim == self.K.dim:
                v = self.K.volume()
            elif F.dim == 0:
                v = 1.0
            else:
                v = projection_volume(self.K, F)
            self._proj[key] = v
        return self._proj[key]

    def section(self, F: Subspace) -> float:
        key = self._key(F)
        if key not in self._sect:
            if F.dim == self.K.dim:
                v = self.K.volume()
            else:
                v = linear_section_volume(self.K, F)
            self._sect[key] = v
        return self._sect[key]

    def max_section(self, H: Subspace) -> float:
        """max over x in H of |K intersect (x + H^perp)|."""
        key = self._key(H)
        if key not in self._max:
            self._max[key] = max_parallel_section(self.K, H, self.resolution).value
        return self._max[key]


def _measure(K, measure: BodyMeasure | None) -> BodyMeasure:
    if measure is not None:
        return measure
    return BodyMeasure(K)


def _weighted_log_sum(cover: IndexCover, values) -> float:
    return sum(float(w) * _log(v) for w, v in zip(cover.weights, values))


def _require_origin_interior(K: Polytope):
    if K.A is None or (K.b <= K.eps).any():
        raise OriginNotInteriorError("the body must contain the origin in its interior")


# ---------------------------------------------------------------------------
# evaluators

def eval_affine_bt(K: Polytope, B: Basis, cover: IndexCover, variant: int,
                   measure: BodyMeasure | None = None) -> VerificationReport:
    """Upper bound of |K| (or |K|^{p-1}) by weighted projection volumes."""
    validate(cover)
    if not cover.is_full:
        raise CoverError("this statement needs a cover of the whole of [n]")
    _require_p_above_one(cover, variant)
    m = _measure(K, measure)
    geo = cover_geometry(B, cover, variant)
    p = float(cover.p)
    lhs = _log(m.volume) * (1 if variant in (1, 3) else p - 1)
    lconst = log_bl(variant, B, cover)
    rhs = lconst + _weighted_log_sum(cover, [m.projection(F) for F in geo.family])
    return make_report("affine_bt", variant, lhs, rhs, "le", lconst, inputs_digest(K, B, cover))


def eval_local_lw(K: Polytope, B: Basis, cover: IndexCover, variant: int,
                  measure: BodyMeasure | None = None) -> VerificationReport:
    """Restricted form: |P_{H^perp}K| and |K| against projections, binomial prefactor."""
    validate(cover)
    if cover.is_full:
        raise CoverError("the restricted statement needs S strictly inside [n]")
    _require_p_above_one(cover, variant)
    m = _measure(K, measure)
    geo = cover_geometry(B, cover, variant)
    p = float(cover.p)
    proj_perp = m.projection(geo.H_perp)
    if variant in (1, 3):
        lhs = (p - 1) * _log(proj_perp) + _log(m.volume)
    else:
        lhs = _log(proj_perp) + (p - 1) * _log(m.volume)
    lconst = log_bl(variant, B, cover) + log_prefactor(PrefactorSpec("local_lw", variant), cover)
    rhs = lconst + _weighted_log_sum(cover, [m.projection(F) for F in geo.family])
    return make_report("local_lw", variant, lhs, rhs, "le", lconst, inputs_digest(K, B, cover))


def eval_dual_bt(K: Polytope, B: Basis, cover: IndexCover, variant: int,
                 measure: BodyMeasure | None = None) -> VerificationReport:
    """Lower bound of |K| (or |K|^{p-1}) by sections through the origin."""
    validate(cover)
    if not cover.is_full:
        raise CoverError("this statement needs a cover of the whole of [n]")
    _require_p_above_one(cover, variant)
    _require_origin_interior(K)
    m = _measure(K, measure)
    geo = cover_geometry(B, cover, variant)
    p = float(cover.p)
    lhs = _log(m.volume) * (1 if variant in (1, 3) else p - 1)
    lconst = -log_bl(variant, B, cover) + log_prefactor(PrefactorSpec("dual_bt", variant), cover)
    rhs = lconst + _weighted_log_sum(cover, [m.section(F) for F in geo.family])
    return make_report("dual_bt", variant, lhs, rhs, "ge", lconst, inputs_digest(K, B, cover))


def eval_restricted_dual(K: Polytope, B: Basis, cover: IndexCover, variant: int,
                         centered_mode: bool = False, measure: BodyMeasure | None = None,
                         center_rtol: float = 1e-6) -> VerificationReport:
    """Restricted dual: maximal parallel section and |K| against sections through 0.

    ``centered_mode`` assumes the maximal section parallel to H^perp passes
    through the origin, uses that section on the left and the Gamma-type
    constant (equal weights only); the assumption is checked.
    """
    validate(cover)
    if cover.is_full:
        raise CoverError("the restricted statement needs S strictly inside [n]")
    _require_p_above_one(cover, variant)
    m = _measure(K, measure)
    geo = cover_geometry(B, cover, variant)
    p = float(cover.p)
    notes = []
    at_origin = m.section(geo.H_perp)
    best = m.max_section(geo.H)
    if centered_mode:
        if best > at_origin * (1 + center_rtol) + 1e-300:
            raise ValueError(
                f"maximal parallel section {best:.12g} exceeds the origin section {at_origin:.12g}")
        M = at_origin
        name = "restricted_dual_centered"
    else:
        M = max(best, at_origin)
        name = "restricted_dual"
    notes.append(f"max_section={best:.15g} origin_section={at_origin:.15g}")
    if variant in (1, 3):
        lhs = (p - 1) * _log(M) + _log(m.volume)
    else:
        lhs = _log(M) + (p - 1) * _log(m.volume)
    lconst = -log_bl(variant, B, cover) + log_prefactor(PrefactorSpec(name, variant), cover)
    rhs = lconst + _weighted_log_sum(cover, [m.section(F) for F in geo.family])
    return make_report(name, variant, lhs, rhs, "ge", lconst, inputs_digest(K, B, cover), notes)


def eval_fradelizi_bound(K: Polytope, H: Subspace, measure: BodyMeasure | None = None,
                         center_tol: float = 1e-7) -> VerificationReport:
    """max_x |K cap (x + H^perp)| <= ((n+1)/(n-d+1))^{n-d} |K cap H^perp| for centred K."""
    c = K.centroid()
    if np.linalg.norm(c) > center_tol * max(K.diameter, 1.0):
        raise ValueError(f"body is not centred (centroid norm {np.linalg.norm(c):.3g})")
    m = _measure(K, measure)
    n, d = K.dim, H.dim
    best = m.max_section(H)
    origin = m.section(orth_complement(H))
    lconst = math.log(fradelizi_factor(n, d))
    return make_report("fradelizi", d, _log(best), lconst + _log(origin), "le", lconst,
                       inputs_digest(K, H.frame))


# ---------------------------------------------------------------------------
# classical special cases

def _skew_basis(n: int, theta: float) -> Basis:
    M = np.eye(n)
    M[:, 1] = 0.0
    M[0, 1], M[1, 1] = math.cos(theta), math.sin(theta)
    return Basis(M)


def eval_classics(K: Polytope, theta: float = math.pi / 3, box_covers_m: int = 4) -> list[VerificationReport]:
    """The classical inequalities as specializations of the general evaluators.

    Each report's statement is ``classic:<name>``; notes record the general
    statement and variant that produced it. Statements whose hypotheses K
    does not meet (origin interior, maximal section at 0, n too small) are
    skipped with no report.
    """
    n = K.dim
    I = Basis.canonical(n)
    m = BodyMeasure(K)
    origin_ok = K.A is not None and bool((K.b > K.eps).all())
    out = []

    def tag(rep, name, note):
        rep.statement = f"classic:{name}"
        rep.notes.append(note)
        out.append(rep)

    tag(eval_affine_bt(K, I, lw_cover(n), 1, m), "loomis_whitney", "affine_bt/1, canonical basis, LW cover")
    if origin_ok:
        tag(eval_dual_bt(K, I, lw_cover(n), 1, m), "meyer", "dual_bt/1, canonical basis, LW cover")
    for k in range(1, box_covers_m + 1):
        for mm in range(k, box_covers_m + 1):
            for c in enumerate_equal_weight_covers(n, k, mm):
                tag(eval_affine_bt(K, I, c, 3, m), "bollobas_thomason",
                    f"affine_bt/3, canonical basis, cover {c.subsets}")
                if origin_ok:
                    tag(eval_dual_bt(K, I, c, 3, m), "dual_bollobas_thomason",
                        f"dual_bt/3, canonical basis, cover {c.subsets}")
    if n >= 3:
        pc = partition_cover(n, [1, 2])
        tag(eval_local_lw(K, I, pc, 1, m), "local_lw_orthonormal", "local_lw/1, S={1,2}, partition")
        Bs = _skew_basis(n, theta)
        tag(eval_local_lw(K, Bs, pc, 1, BodyMeasure(K)), "local_lw_skew",
            f"local_lw/1, S={{1,2}}, angle {theta:.6g}")
        d = min(n - 1, 3)
        S = list(range(1, d + 1))
        cov = partition_cover(n, S) if d == 2 else _relabelled_lw(n, S)
        k = int(1 / cov.weights[0])
        rep = eval_local_lw(K, I, cov, 2, m)
        classical = local_bt_equal_constant(n, d, k, cov.m)
        rep = _rescale_constant(rep, classical)
        tag(rep, "local_bt_equal_weights", f"local_lw/2, S={S}, classical binomial constant")
        if origin_ok:
            Hperp_ok = _max_at_origin(m, _span_of(I, [1, 2]))
            if Hperp_ok:
                rep = eval_restricted_dual(K, I, pc, 1, centered_mode=True, measure=m)
                rep = _rescale_constant(rep, pair_section_constant(2, 1), ge=True)
                tag(rep, "dual_restricted_pair", "restricted_dual_centered/1, S={1,2}, partition")
    return out


def _relabelled_lw(n: int, S) -> IndexCover:
    return relabel(lw_cover(len(S)), S, n)


def _max_at_origin(m: BodyMeasure, H: Subspace, rtol: float = 1e-6) -> bool:
    return m.max_section(H) <= m.section(orth_complement(H)) * (1 + rtol)


def _rescale_constant(rep: VerificationReport, constant: float, ge: bool = False) -> VerificationReport:
    """Swap the report's constant for another one (same lhs and product of volumes)."""
    factor = constant / rep.constant
    rep.rhs *= factor
    rep.ratio = rep.ratio / factor if ge else rep.ratio * factor
    rep.constant = constant
    return rep


def gl_transform(K: Polytope, B: Basis, T, variant: int = 1) -> tuple[Polytope, Basis]:
    """The action of T under which the variant's ratio is invariant.

    Variants 1 and 2 project along spans of the w_i, so w moves with K:
    (TK, T w). Variants 3 and 4 project onto spans of the w_i, whose kernels
    are spans of the dual basis, so w moves contragrediently: (TK, T^{-T} w).
    """
    T = np.asarray(T, dtype=float)
    if variant in (1, 2):
        return K.linear_map(T), B.transformed(T)
    return K.linear_map(T), B.transformed(np.linalg.inv(T).T)


def translate_to_interior(K: Polytope) -> Polytope:
    """Translate so the centroid (hence an interior point) is the origin."""
    return K.centered()
