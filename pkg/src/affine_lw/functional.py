"""Log-concave functions with closed-form integrals and the functional inequalities.

Three families are exact: the indicator of K, e^{-||x||_K} ("exp_norm") and
(1 - ||x||_K)_+ ("cone"). Each is carried on a subspace (``carrier``) with the
body K expressed in the carrier's frame, and each family is closed under
projection P_H f(x) = sup_{y in H^perp} f(x + y) and under restriction to a
linear subspace. Integrals of powers f^q over a k-dimensional carrier:

    indicator   |K|
    exp_norm    k! |K| / q^k
    cone        |K| k! Gamma(q+1) / Gamma(k+q+1)
"""
from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate as spi

from .constants import PrefactorSpec, log_bl, log_factorial, log_prefactor, equal_weight
from .covers import CoverError, IndexCover, lw_cover, validate
from .inequalities import (BodyMeasure, VerificationReport, _log, _weighted_log_sum, cover_geometry,
                           inputs_digest, make_report)
from .linalg import Basis, Subspace, orth_complement
from .polytope import (AffineSlice, Polytope, h_to_v, minkowski_functional, project, section,
                       standard_body)

FAMILIES = ("indicator", "exp_norm", "cone")
DEFAULT_MC_SAMPLES = 1_000_000


@dataclass(frozen=True)
class LogConcaveFn:
    """f = height * g(coords) on ``carrier`` where g is the family profile of ``body``.

    ``body`` lives in the carrier's frame coordinates. A blackbox function
    supplies ``evaluator`` (ambient points -> values) and ``support_box``;
    its log-concavity is the caller's responsibility.
    """

    family: str
    body: Polytope | None
    carrier: Subspace
    height: float = 1.0
    evaluator: Callable | None = field(default=None, compare=False)
    support_box: tuple | None = None

    def __post_init__(self):
        if self.family not in FAMILIES + ("blackbox",):
            raise ValueError(f"unknown family {self.family!r}")
        if self.family in ("exp_norm", "cone") and self.body is not None and self.body.dim > 0:
            b = self.body
            if b.A is None or (b.b <= b.eps).any():
                raise ValueError(f"{self.family} needs a body with the origin in its interior")

    @property
    def dim(self) -> int:
        return self.carrier.dim

    @property
    def sup(self) -> float:
        return self.height

    def __call__(self, x) -> np.ndarray | float:
        """Evaluate at ambient points (which are first projected to the carrier)."""
        if self.family == "blackbox":
            return self.evaluator(x)
        y = self.carrier.coords(np.atleast_2d(x))
        if self.dim == 0:
            vals = np.ones(len(y))
        elif self.family == "indicator":
            vals = self.body.contains(y, tol=0.0).astype(float)
        else:
            r = minkowski_functional(self.body, y)
            vals = np.exp(-r) if self.family == "exp_norm" else np.maximum(1.0 - r, 0.0)
        vals = self.height * np.asarray(vals, dtype=float)
        return float(vals[0]) if np.ndim(x) == 1 else vals


def indicator(K: Polytope) -> LogConcaveFn:
    return LogConcaveFn("indicator", K, Subspace.full(K.dim))


def exp_norm(K: Polytope) -> LogConcaveFn:
    return LogConcaveFn("exp_norm", K, Subspace.full(K.dim))


def cone(K: Polytope) -> LogConcaveFn:
    return LogConcaveFn("cone", K, Subspace.full(K.dim))


def make_fn(family: str, K: Polytope) -> LogConcaveFn:
    return {"indicator": indicator, "exp_norm": exp_norm, "cone": cone}[family](K)


def blackbox(evaluator, support_box, n: int) -> LogConcaveFn:
    lo, hi = (np.asarray(v, dtype=float) for v in support_box)
    return LogConcaveFn("blackbox", None, Subspace.full(n), evaluator=evaluator, support_box=(lo, hi))


def _require_closed(f: LogConcaveFn, what: str):
    if f.family == "blackbox":
        raise ValueError(f"{what} is only exact for closed-form families")


def _carrier_map(f: LogConcaveFn, H: Subspace) -> np.ndarray:
    """Matrix taking carrier coordinates to H coordinates (H must lie inside the carrier)."""
    if not f.carrier.contains(H):
        raise ValueError("subspace is not contained in the function's carrier")
    return f.carrier.frame.T @ H.frame  # columns: H's frame in carrier coordinates


# per-body memo of derived bodies, keyed by operation and rounded subspace frame
_DERIVED: "weakref.WeakKeyDictionary[Polytope, dict]" = weakref.WeakKeyDictionary()


def _memo(f: LogConcaveFn, op: str, H: Subspace, build):
    key = (op, f.carrier.frame.shape, np.round(f.carrier.projector(), 12).tobytes(),
           np.round(H.projector(), 12).tobytes(), np.round(H.frame, 12).tobytes())
    table = _DERIVED.setdefault(f.body, {})
    if key not in table:
        table[key] = build()
    return LogConcaveFn(f.family, table[key], H, f.height)


def project_fn(f: LogConcaveFn, H: Subspace) -> LogConcaveFn:
    """P_H f, which stays in the family with the projected body."""
    _require_closed(f, "projection")
    return _memo(f, "project", H, lambda: _project_fn(f, H).body)


def restrict_fn(f: LogConcaveFn, E: Subspace) -> LogConcaveFn:
    """f restricted to a linear subspace E (uses ||x||_K = ||x||_{K cap E} on E)."""
    _require_closed(f, "restriction")
    return _memo(f, "restrict", E, lambda: _restrict_fn(f, E).body)


def _project_fn(f: LogConcaveFn, H: Subspace) -> LogConcaveFn:
    C = _carrier_map(f, H)
    if H.dim == 0:
        body = Polytope(np.zeros((1, 0)), np.zeros((0, 0)), np.zeros(0), dim=0)
    else:
        body = Polytope.from_points(f.body.vertices @ C, allow_flat=True)
    return LogConcaveFn(f.family, body, H, f.height)


def _restrict_fn(f: LogConcaveFn, E: Subspace) -> LogConcaveFn:
    C = _carrier_map(f, E)
    k = E.dim
    if k == 0:
        inside = f.family != "indicator" or bool((f.body.b >= -f.body.eps).all())
        body = Polytope(np.zeros((1 if inside else 0, 0)), np.zeros((0, 0)), np.zeros(0), dim=0,
                        flat=not inside)
        return LogConcaveFn(f.family, body, E, f.height)
    if k == f.dim:
        return LogConcaveFn(f.family, Polytope.from_points(f.body.vertices @ C), E, f.height)
    # C has orthonormal columns, so section coordinates are already E's frame coordinates
    sec = section(f.body, AffineSlice(np.zeros(f.dim), Subspace(C, f.dim)))
    if sec.is_empty:
        return LogConcaveFn(f.family, Polytope.empty(k), E, f.height)
    return LogConcaveFn(f.family, sec, E, f.height)


def integrate_power(f: LogConcaveFn, q: float = 1.0) -> float:
    """Integral of f^q over the carrier."""
    if q <= 0:
        raise ValueError("power must be positive")
    if f.family == "blackbox":
        return mc_integrate(f, seed=0, power=q)[0]
    k = f.dim
    vol = f.body.volume()
    h = f.height ** q
    if f.family == "indicator" or k == 0:
        return h * vol
    if f.family == "exp_norm":
        return h * math.factorial(k) * vol / q ** k
    return h * vol * math.exp(log_factorial(k) + math.lgamma(q + 1) - math.lgamma(k + q + 1))


def integrate(f: LogConcaveFn) -> float:
    return integrate_power(f, 1.0)


def restrict_integrate(f: LogConcaveFn, E: Subspace, power: float = 1.0) -> float:
    """Integral over E of (f restricted to E)^power."""
    return integrate_power(restrict_fn(f, E), power)


def lp_norm(f: LogConcaveFn, p: float) -> float:
    if p < 1:
        raise ValueError(f"L^p norm needs p >= 1, got {p}")
    return integrate_power(f, p) ** (1.0 / p)


def mc_integrate(f: LogConcaveFn, seed: int, samples: int = DEFAULT_MC_SAMPLES, power: float = 1.0,
                 chunk: int = 100_000) -> tuple[float, float]:
    """Plain Monte Carlo integral of f^power over its support box (blackbox or compact families)."""
    if f.family == "blackbox":
        if f.support_box is None:
            raise ValueError("blackbox integration needs a support box")
        lo, hi = f.support_box
        to_ambient = None
    else:
        if f.family == "exp_norm":
            raise ValueError("exp_norm has unbounded support; use the exact integral")
        lo, hi = f.body.bbox()
        to_ambient = f.carrier
    rng = np.random.default_rng(seed)
    box = float(np.prod(hi - lo))
    total = total_sq = 0.0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        y = lo + (hi - lo) * rng.random((m, len(lo)))
        x = y if to_ambient is None else to_ambient.embed(y)
        v = np.asarray(f(x), dtype=float) ** power
        total += v.sum()
        total_sq += (v * v).sum()
        done += m
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    return box * mean, box * math.sqrt(var / samples)


# ---------------------------------------------------------------------------
# functional evaluators (full covers)

def _full_cover(cover: IndexCover):
    validate(cover)
    if not cover.is_full:
        raise CoverError("this statement needs a cover of the whole of [n]")


def _even_needs_p(cover: IndexCover, variant: int):
    if variant in (2, 4) and cover.p <= 1:
        raise CoverError(f"variant {variant} needs p > 1 (got p = {cover.p})")


def _fn_digest(f: LogConcaveFn, *rest):
    return inputs_digest(f.family, f.body, f.carrier.frame, f.height, *rest)


def eval_gn(f: LogConcaveFn, B: Basis, cover: IndexCover, variant: int) -> VerificationReport:
    """L^p (or L^{p/(p-1)}) norm of f against the integrals of its projections.

    Only compactly supported families qualify; p must exceed 1.
    """
    _full_cover(cover)
    if f.family == "exp_norm":
        raise ValueError("this statement needs compact support; exp_norm is supported on all of R^n")
    if f.family == "blackbox":
        raise ValueError("blackbox functions are not evaluated exactly here")
    p = float(cover.p)
    if p <= 1:
        raise CoverError("the L^p form needs p > 1; a p = 1 cover is rejected")
    geo = cover_geometry(B, cover, variant)
    q = p if variant in (1, 3) else p / (p - 1)
    lhs = _log(lp_norm(f, q))
    lconst = log_bl(variant, B, cover) / p
    rhs = lconst + _weighted_log_sum(cover, [integrate(project_fn(f, F)) for F in geo.family]) / p
    return make_report("gagliardo_nirenberg", variant, lhs, rhs, "le", lconst, _fn_digest(f, B, cover),
                       [f"family={f.family}", f"norm exponent {q:.6g}"])


def _sup_lhs(f: LogConcaveFn, total: float, variant: int, p: float) -> float:
    if variant in (1, 3):
        return (p - 1) * _log(f.sup) + _log(total)
    return _log(f.sup) + (p - 1) * _log(total)


def eval_functional_bt(f: LogConcaveFn, B: Basis, cover: IndexCover, variant: int) -> VerificationReport:
    """||f||_inf^{p-1} ||f||_1 (or ||f||_inf ||f||_1^{p-1}) against projected integrals."""
    _full_cover(cover)
    _even_needs_p(cover, variant)
    _require_closed(f, "this evaluator")
    geo = cover_geometry(B, cover, variant)
    p = float(cover.p)
    lhs = _sup_lhs(f, integrate(f), variant, p)
    lconst = log_bl(variant, B, cover) + log_prefactor(PrefactorSpec("functional_bt", variant), cover)
    rhs = lconst + _weighted_log_sum(cover, [integrate(project_fn(f, F)) for F in geo.family])
    notes = [f"family={f.family}"]
    if variant in (1, 3):
        # the Hoelder step needs p_j d_j / n <= 1, automatic for positive terms summing to 1
        terms = [float(w) * len(s) / cover.n for w, s in zip(cover.weights, cover.subsets)]
        notes.append(f"max p_j d_j/n = {max(terms):.6g}")
    return make_report("functional_bt", variant, lhs, rhs, "le", lconst, _fn_digest(f, B, cover), notes)


def eval_functional_local(f: LogConcaveFn, B: Basis, cover: IndexCover, variant: int) -> VerificationReport:
    """Restricted functional form: ||P_{H^perp} f||_1 and ||f||_1 against projected integrals."""
    validate(cover)
    if cover.is_full:
        raise CoverError("the restricted statement needs S strictly inside [n]")
    _even_needs_p(cover, variant)
    _require_closed(f, "this evaluator")
    geo = cover_geometry(B, cover, variant)
    p = float(cover.p)
    perp = integrate(project_fn(f, geo.H_perp))
    total = integrate(f)
    if variant in (1, 3):
        lhs = (p - 1) * _log(perp) + _log(total)
    else:
        lhs = _log(perp) + (p - 1) * _log(total)
    lconst = log_bl(variant, B, cover) + log_prefactor(PrefactorSpec("functional_local", variant), cover)
    rhs = lconst + _weighted_log_sum(cover, [integrate(project_fn(f, F)) for F in geo.family])
    return make_report("functional_local", variant, lhs, rhs, "le", lconst, _fn_digest(f, B, cover),
                       [f"family={f.family}"])


REVERSE_STATEMENTS = ("reverse_powers", "reverse_sections", "reverse_gamma")


def eval_reverse_family(f: LogConcaveFn, B: Basis, cover: IndexCover, statement: str,
                        variant: int) -> VerificationReport:
    """Lower bounds of integrals of f by integrals of its restrictions to subspaces.

    ``reverse_powers``: powers f^n on the left and f^{dim F_j} on the right.
    ``reverse_sections``: no powers, sup-norm weights as in the functional form.
    ``reverse_gamma``: equal weights and f(0) = ||f||_inf, Gamma-type constant.
    """
    _full_cover(cover)
    _even_needs_p(cover, variant)
    _require_closed(f, "this evaluator")
    if statement not in REVERSE_STATEMENTS:
        raise ValueError(f"unknown statement {statement!r}")
    geo = cover_geometry(B, cover, variant)
    n = cover.n
    p = float(cover.p)
    notes = [f"family={f.family}"]
    if statement == "reverse_gamma":
        equal_weight(cover)
        f0 = f(np.zeros(n))
        if abs(f0 - f.sup) > 1e-9 * f.sup:
            raise ValueError(f"f(0) = {f0} differs from the sup {f.sup}")
    if statement == "reverse_powers":
        total = integrate_power(f, n)
        lhs = _log(total) * (1 if variant in (1, 3) else p - 1)
        vals = [restrict_integrate(f, F, power=F.dim) if F.dim else f(np.zeros(n)) ** 0
                for F in geo.family]
    else:
        lhs = _sup_lhs(f, integrate(f), variant, p)
        vals = [restrict_integrate(f, F) for F in geo.family]
    lconst = -log_bl(variant, B, cover) + log_prefactor(PrefactorSpec(statement, variant), cover)
    rhs = lconst + _weighted_log_sum(cover, vals)
    return make_report(statement, variant, lhs, rhs, "ge", lconst, _fn_digest(f, B, cover), notes)


# ---------------------------------------------------------------------------
# min corollary via Monte Carlo

@dataclass
class MinIntegrand:
    """x -> min_j f_j(P_{F_j} x) / ||f_j||_inf with the f_j living on the F_j."""

    fns: tuple[LogConcaveFn, ...]

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_2d(x)
        out = np.ones(len(x))
        for f in self.fns:
            out = np.minimum(out, np.asarray(f(x), dtype=float) / f.sup)
        return out

    def support(self) -> Polytope:
        """L = {x : P_{F_j} x in P_{F_j} support(f_j) for all j} as a polytope."""
        rows, rhs = [], []
        for f in self.fns:
            if f.dim == 0:
                continue
            rows.append(f.body.A @ f.carrier.frame.T)
            rhs.append(f.body.b)
        return Polytope.from_halfspaces(np.vstack(rows), np.concatenate(rhs))


def min_corollary_functions(K: Polytope, B: Basis, cover: IndexCover, variant: int,
                            family: str = "exp_norm") -> tuple[LogConcaveFn, ...]:
    """Default generator: f_j = family(P_{F_j} K) for a single body K."""
    geo = cover_geometry(B, cover, variant)
    f = make_fn(family, K)
    return tuple(project_fn(f, F) for F in geo.family)


def mc_min_integral(fns, seed: int, samples: int = DEFAULT_MC_SAMPLES,
                    chunk: int = 100_000) -> tuple[float, float]:
    """Monte Carlo integral of the min integrand, with its standard error.

    Compact families: uniform samples in the bounding box of the support L.
    exp_norm: importance sampling X = R U with U uniform in a box B containing
    L and R ~ Gamma(n+1), whose density e^{-||x||_B} / (n! |B|) dominates the
    integrand up to the constant n! |B|, so the weights are bounded.
    """
    g = MinIntegrand(tuple(fns))
    n = g.fns[0].carrier.ambient_dim
    L = g.support()
    lo, hi = L.bbox()
    rng = np.random.default_rng(seed)
    families = {f.family for f in g.fns}
    heavy = "exp_norm" in families
    if heavy:
        if families != {"exp_norm"}:
            raise ValueError("mixed exp_norm and compact families are not supported")
        if (lo >= 0).any() or (hi <= 0).any():
            raise ValueError("support must contain the origin in its interior")
        box = Polytope.from_points(np.array(np.meshgrid(*zip(lo, hi))).reshape(n, -1).T)
        scale = math.factorial(n) * box.volume()
    else:
        scale = float(np.prod(hi - lo))
    total = total_sq = 0.0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        u = lo + (hi - lo) * rng.random((m, n))
        if heavy:
            r = rng.gamma(n + 1, size=m)
            x = u * r[:, None]
            w = g(x) * np.exp(minkowski_functional(box, x))
        else:
            w = g(u)
        total += w.sum()
        total_sq += (w * w).sum()
        done += m
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    return scale * mean, scale * math.sqrt(var / samples)


def exact_min_integral(fns) -> float:
    """Closed form when every f_j is family(P_j K) of one family: family integral over L."""
    g = MinIntegrand(tuple(fns))
    fam = {f.family for f in g.fns}
    if len(fam) != 1:
        raise ValueError("closed form needs a single family")
    L = g.support()
    return integrate(LogConcaveFn(fam.pop(), L, Subspace.full(L.dim)))


def eval_min_corollary(fns, B: Basis, cover: IndexCover, variant: int, seed: int = 0,
                       samples: int = DEFAULT_MC_SAMPLES) -> VerificationReport:
    """Integral of the min of normalized pullbacks (MC) against the product of normalized integrals."""
    _full_cover(cover)
    _even_needs_p(cover, variant)
    geo = cover_geometry(B, cover, variant)
    fns = tuple(fns)
    if len(fns) != cover.m:
        raise ValueError(f"need {cover.m} functions, got {len(fns)}")
    for f, F in zip(fns, geo.family):
        if not f.carrier.equals(F):
            raise ValueError("each f_j must live on the subspace of its variant")
    p = float(cover.p)
    est, se = mc_min_integral(fns, seed, samples)
    power = 1.0 if variant in (1, 3) else p - 1
    lhs = power * _log(est)
    lconst = log_bl(variant, B, cover) + log_prefactor(PrefactorSpec("min_corollary", variant), cover)
    rhs = lconst + _weighted_log_sum(cover, [integrate(f) / f.sup for f in fns])
    sigma = power * se / est if est > 0 else float("inf")
    rep = make_report("min_corollary", variant, lhs, rhs, "le", lconst,
                      inputs_digest(*[f.body for f in fns], B, cover, seed, samples),
                      [f"mc_estimate={est:.10g} se={se:.3g} samples={samples}"], method="mc", sigma=sigma)
    return rep


# ---------------------------------------------------------------------------
# Berwald-type monotonicity

BERWALD_GAMMAS = (-0.5, -0.25, 0.5, 1.0, 2.0, 3.0, 5.0)


@dataclass(frozen=True)
class PiecewiseLinearConcave:
    """h(t) = min_i (a_i t + b_i) on [0, inf) with a_i, b_i >= 0."""

    slopes: tuple[float, ...]
    intercepts: tuple[float, ...]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        a = np.asarray(self.slopes)
        b = np.asarray(self.intercepts)
        return np.min(np.multiply.outer(t, a) + b, axis=-1)

    def breakpoints(self) -> list[float]:
        pts = set()
        a, b = self.slopes, self.intercepts
        for i in range(len(a)):
            for j in range(i + 1, len(a)):
                if a[i] != a[j]:
                    t = (b[j] - b[i]) / (a[i] - a[j])
                    if t > 0:
                        pts.add(float(t))
        return sorted(pts)


def random_concave(rng: np.random.Generator, pieces: int = 4) -> PiecewiseLinearConcave:
    a = rng.exponential(1.0, pieces)
    b = rng.exponential(1.0, pieces)
    a[rng.random(pieces) < 0.2] = 0.0
    if rng.random() < 0.3:
        # h(0) = 0; this piece needs a positive slope or h vanishes identically
        b[0] = 0.0
        a[0] = max(a[0], rng.exponential(1.0) + 1e-3)
    return PiecewiseLinearConcave(tuple(a), tuple(b))


def berwald_phi(h, gamma: float, breakpoints=(), epsabs: float = 1e-12) -> float:
    """(Gamma(1+gamma)^{-1} int_0^inf h^gamma e^{-t} dt)^{1/gamma} for concave h >= 0."""
    if gamma == 0:
        raise ValueError("gamma = 0 is the limiting case and is not implemented")
    if gamma <= -1:
        raise ValueError("gamma must exceed -1")
    probe = np.asarray(h(np.linspace(0, 50, 201)), dtype=float)
    if (probe < -1e-14).any():
        raise ValueError("h is negative somewhere")
    h0 = float(h(0.0))
    knots = sorted({0.0, *[t for t in breakpoints if t > 0], 1.0})
    knots = [t for t in knots if t < 60] + [60.0]
    total = 0.0
    for lo, hi in zip(knots[:-1], knots[1:]):
        if lo == 0.0 and h0 <= 0.0:
            # h vanishes at 0: integrate t^gamma * (h(t)/t)^gamma e^{-t} with an algebraic weight
            g = lambda t: (float(h(t)) / t) ** gamma * math.exp(-t) if t > 0 else _slope0(h) ** gamma
            val, _ = spi.quad(g, lo, hi, weight="alg", wvar=(gamma, 0.0), epsabs=epsabs, limit=200)
        else:
            val, _ = spi.quad(lambda t: max(float(h(t)), 0.0) ** gamma * math.exp(-t), lo, hi,
                              epsabs=epsabs, epsrel=1e-13, limit=200)
        total += val
    tail, _ = spi.quad(lambda t: max(float(h(t)), 0.0) ** gamma * math.exp(-t), 60.0, np.inf,
                       epsabs=epsabs, limit=200)
    total += tail
    return (total / math.gamma(1 + gamma)) ** (1.0 / gamma)


def _slope0(h, dt: float = 1e-9) -> float:
    return float(h(dt)) / dt


@dataclass
class BerwaldReport:
    gammas: tuple[float, ...]
    values: tuple[float, ...]
    max_increase: float  # largest Phi(gamma_{k+1}) - Phi(gamma_k), should be <= tol

    def monotone(self, tol: float = 1e-8) -> bool:
        return self.max_increase <= tol


def berwald_monotone_check(h, gammas=BERWALD_GAMMAS, breakpoints=()) -> BerwaldReport:
    if hasattr(h, "breakpoints") and not breakpoints:
        breakpoints = h.breakpoints()
    gs = tuple(sorted(gammas))
    vals = tuple(berwald_phi(h, g, breakpoints) for g in gs)
    inc = max((b - a) for a, b in zip(vals[:-1], vals[1:])) if len(vals) > 1 else 0.0
    return BerwaldReport(gs, vals, inc)


def epigraph_berwald_phi(K: Polytope, gamma: float) -> float:
    """Phi_gamma over the epigraph set of e^{-||x||_K} in the plane.

    C = {(x, t) : ||x||_K <= t} and h(x, t) = t * phi(x / t) with phi(x) the
    distance from x to the lower boundary of K along e_1 (concave on K, so
    h is concave on C). Integrating t out leaves
    Phi^gamma = Gamma(n+gamma+1) / (Gamma(2+gamma) n! |K|) * int_{P K} l(u)^{gamma+1} du
    with l the chord length of K along e_1.
    """
    if K.dim != 2:
        raise ValueError("the epigraph check is implemented for planar bodies")
    if gamma == 0 or gamma <= -1:
        raise ValueError("gamma must be > -1 and nonzero")
    ys = np.unique(K.vertices[:, 1])
    e1 = Subspace(np.array([[1.0], [0.0]]))

    def chord(u):
        return section(K, AffineSlice(np.array([0.0, u]), e1)).volume()

    total = 0.0
    for lo, hi in zip(ys[:-1], ys[1:]):
        val, _ = spi.quad(lambda u: chord(u) ** (gamma + 1), lo, hi, epsabs=1e-13, epsrel=1e-12)
        total += val
    n = 2
    log_phi_pow = (math.lgamma(n + gamma + 1) - math.lgamma(2 + gamma) - math.log(math.factorial(n))
                   - math.log(K.volume()) + math.log(total))
    return math.exp(log_phi_pow / gamma)


def epigraph_monotone_check(K: Polytope, gammas=BERWALD_GAMMAS) -> BerwaldReport:
    gs = tuple(sorted(gammas))
    vals = tuple(epigraph_berwald_phi(K, g) for g in gs)
    inc = max((b - a) for a, b in zip(vals[:-1], vals[1:]))
    return BerwaldReport(gs, vals, inc)


# ---------------------------------------------------------------------------
# sharp unconditional instance

def extremal_cube(n: int) -> Polytope:
    """[-1, 1]^n / (2 n!^{1/n}), so that e^{-||x||_K} is a probability density."""
    return standard_body("ccube", n).scale(1.0 / (2 * math.factorial(n) ** (1.0 / n)))


def unconditional_product(K: Polytope) -> float:
    """prod_j of the integral of e^{-||x||_K} over the coordinate hyperplane x_j = 0."""
    n = K.dim
    f = exp_norm(K)
    prod = 1.0
    for j in range(n):
        E = orth_complement(Subspace(np.eye(n)[:, [j]]))
        prod *= restrict_integrate(f, E)
    return prod


def normalize_density(K: Polytope) -> Polytope:
    """Rescale K so that e^{-||x||_K} has integral 1, i.e. |K| = 1/n!."""
    n = K.dim
    return K.scale((1.0 / (math.factorial(n) * K.volume())) ** (1.0 / n))


def random_unconditional(rng: np.random.Generator, n: int, num_points: int = 6) -> Polytope:
    """Hull of random points and all their coordinate sign flips, normalized to |K| = 1/n!."""
    pts = np.abs(rng.standard_normal((num_points, n))) + 0.05
    signs = np.array(np.meshgrid(*[[-1.0, 1.0]] * n)).reshape(n, -1).T
    allpts = (pts[:, None, :] * signs[None, :, :]).reshape(-1, n)
    return normalize_density(Polytope.from_points(allpts))


def bobkov_nazarov_check(n: int, K: Polytope | None = None) -> VerificationReport:
    """prod_j int_{x_j = 0} p >= n!/n^n for p = e^{-||x||_K}, K unconditional with |K| = 1/n!.

    Defaults to the extremal scaled cube, where equality holds.
    """
    if not 2 <= n <= 6:
        raise ValueError("n must be in 2..6")
    K = extremal_cube(n) if K is None else K
    if abs(math.factorial(n) * K.volume() - 1) > 1e-9:
        raise ValueError("the density must integrate to 1 (|K| = 1/n!)")
    lhs = unconditional_product(K)
    lrhs = log_factorial(n) - n * math.log(n)
    return make_report("bobkov_nazarov", 1, _log(lhs), lrhs, "ge", lrhs, inputs_digest(K, n))


def bobkov_nazarov_from_functional(n: int) -> float:
    """The bound implied by the functional form with the LW cover: ((n-1)!)^n / (n!)^{n-1}."""
    c = lw_cover(n)
    lconst = log_prefactor(PrefactorSpec("functional_bt", 1), c)
    return math.exp(-(n - 1) * lconst)
