"""Brascamp-Lieb type constants of a basis and a cover, and the combinatorial prefactors.

BL1 uses the wedges of the complements S \\ S_j, BL2 the wedges of the S_j
themselves. Both are evaluated in log space because the weights are
rationals such as 1/(n-1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .covers import CoverError, IndexCover, cover_stats, validate
from .linalg import Basis, RankDeficiencyError, dual_basis, subset_wedges, wedge

_FACTORIALS = [math.factorial(k) for k in range(21)]


def factorial(k: int) -> int:
    return _FACTORIALS[k] if 0 <= k <= 20 else math.factorial(k)


def log_factorial(k: int) -> float:
    return math.log(factorial(k))


def log_binomial(a, b) -> float:
    """log C(a, b); exact integers when possible, lgamma otherwise."""
    if float(a).is_integer() and float(b).is_integer():
        return math.log(math.comb(int(a), int(b)))
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


def _mask(indices) -> int:
    return sum(1 << (i - 1) for i in indices)


def _log_wedges(B: Basis, cover: IndexCover):
    """(log wedge of S, [log wedge of S_j], [log wedge of S \\ S_j])."""
    if B.n != cover.n:
        raise ValueError(f"basis has n={B.n} but the cover lives on [{cover.n}]")
    vecs = B.vectors
    wS = wedge(vecs[[i - 1 for i in cover.S]])
    if wS <= 1e-12 * max(1.0, np.linalg.norm(vecs, axis=1).max()) ** cover.d:
        raise RankDeficiencyError("the vectors indexed by S are linearly dependent")
    inside = [wedge(vecs[[i - 1 for i in s]]) for s in cover.subsets]
    outside = [wedge(vecs[[i - 1 for i in c]]) if c else 1.0 for c in cover.complements()]
    return math.log(wS), [math.log(w) for w in inside], [math.log(w) for w in outside]


def log_bl1(B: Basis, cover: IndexCover) -> float:
    validate(cover)
    lS, _, lout = _log_wedges(B, cover)
    p = float(cover.p)
    return sum(float(w) * x for w, x in zip(cover.weights, lout)) - (p - 1) * lS


def log_bl2(B: Basis, cover: IndexCover) -> float:
    validate(cover)
    lS, lin, _ = _log_wedges(B, cover)
    return sum(float(w) * x for w, x in zip(cover.weights, lin)) - lS


def _checked_exp(log_value: float, direct) -> float:
    value = math.exp(log_value)
    if 1e-6 <= value <= 1e6:
        d = direct()
        if abs(d - value) > 1e-9 * value:
            raise ArithmeticError(f"log-space value {value!r} disagrees with direct {d!r}")
    return value


def bl1(B: Basis, cover: IndexCover) -> float:
    """prod_j |wedge_{k in S\\S_j} w_k|^{p_j} / |wedge_{i in S} w_i|^{p-1}."""
    def direct():
        vecs = B.vectors
        num = 1.0
        for w, c in zip(cover.weights, cover.complements()):
            num *= wedge(vecs[[i - 1 for i in c]]) ** float(w) if c else 1.0
        return num / wedge(vecs[[i - 1 for i in cover.S]]) ** float(cover.p - 1)
    return _checked_exp(log_bl1(B, cover), direct)


def bl2(B: Basis, cover: IndexCover) -> float:
    """prod_j |wedge_{k in S_j} w_k|^{p_j} / |wedge_{i in S} w_i|."""
    def direct():
        vecs = B.vectors
        num = 1.0
        for w, s in zip(cover.weights, cover.subsets):
            num *= wedge(vecs[[i - 1 for i in s]]) ** float(w)
        return num / wedge(vecs[[i - 1 for i in cover.S]])
    return _checked_exp(log_bl2(B, cover), direct)


@dataclass
class DualityCheck:
    residual: float
    per_j_residual: float
    bl1_dual: float
    bl2: float

    @property
    def max_residual(self) -> float:
        return max(self.residual, self.per_j_residual)


def bl_duality_check(B: Basis, cover: IndexCover) -> DualityCheck:
    """Compare BL1 of the dual basis with BL2 of the basis, globally and per subset."""
    if not cover.is_full:
        raise CoverError("the duality identity needs a cover of the whole of [n]")
    V = dual_basis(B)
    a = bl1(V, cover)
    b = bl2(B, cover)
    vv, ww = V.vectors, B.vectors
    total = wedge(ww)
    per_j = 0.0
    for s, c in zip(cover.subsets, cover.complements()):
        lhs = wedge(vv[[i - 1 for i in c]]) if c else 1.0
        rhs = wedge(ww[[i - 1 for i in s]]) / total
        per_j = max(per_j, abs(lhs - rhs) / rhs)
    return DualityCheck(abs(a - b) / b, per_j, a, b)


def bl_duality_residual(B: Basis, cover: IndexCover) -> float:
    return bl_duality_check(B, cover).max_residual


class CoverTable:
    """Covers of [n] packed as weight matrices, for evaluating many covers at once."""

    def __init__(self, covers: list[IndexCover]):
        if not covers:
            raise ValueError("empty cover list")
        n = covers[0].n
        size = 1 << n
        self.n = n
        self.inside = np.zeros((len(covers), size))
        self.outside = np.zeros((len(covers), size))
        self.p = np.zeros(len(covers))
        full = (1 << n) - 1
        for row, cover in enumerate(covers):
            if cover.n != n or not cover.is_full:
                raise CoverError("CoverTable needs full covers of one [n]")
            validate(cover)
            for w, mask in zip(cover.weights, cover.masks()):
                self.inside[row, mask] += float(w)
                self.outside[row, full ^ mask] += float(w)
            self.p[row] = float(cover.p)
        self.used = np.flatnonzero(self.inside.any(axis=0))

    def log_bl1(self, wedges: np.ndarray) -> np.ndarray:
        lw = np.log(wedges)
        return self.outside @ lw - (self.p - 1) * lw[-1]

    def log_bl2(self, wedges: np.ndarray) -> np.ndarray:
        lw = np.log(wedges)
        return self.inside @ lw - lw[-1]


def batch_duality_residuals(B: Basis, table: CoverTable) -> tuple[np.ndarray, float]:
    """Duality residual of every cover in ``table`` plus the per-subset identity residual."""
    V = dual_basis(B)
    ww = subset_wedges(B)
    vw = subset_wedges(V)
    a = np.exp(table.log_bl1(vw))
    b = np.exp(table.log_bl2(ww))
    full = (1 << B.n) - 1
    used = table.used
    lhs = vw[full ^ used]
    rhs = ww[used] / ww[full]
    return np.abs(a - b) / b, float(np.max(np.abs(lhs - rhs) / rhs))


# ---------------------------------------------------------------------------
# combinatorial prefactors

STATEMENTS = (
    "affine_bt",
    "local_lw",
    "dual_bt",
    "restricted_dual",
    "restricted_dual_centered",
    "gagliardo_nirenberg",
    "functional_bt",
    "min_corollary",
    "functional_local",
    "reverse_powers",
    "reverse_sections",
    "reverse_gamma",
)


@dataclass(frozen=True)
class PrefactorSpec:
    statement: str
    variant: int

    def __post_init__(self):
        if self.statement not in STATEMENTS:
            raise KeyError(f"unknown statement {self.statement!r}")
        if self.variant not in (1, 2, 3, 4):
            raise KeyError(f"variant must be 1..4, got {self.variant}")


def equal_weight(cover: IndexCover) -> Fraction:
    w = set(cover.weights)
    if len(w) != 1:
        raise CoverError("this statement needs all weights equal")
    return w.pop()


def log_gamma_factor(d: int, m: int, p) -> float:
    """log Gamma(1 + d*m/p)^{p/m}."""
    p = float(p)
    return (p / m) * math.lgamma(1 + d * m / p)


def log_prefactor(spec: PrefactorSpec, cover: IndexCover, n: int | None = None) -> float:
    """Log of the combinatorial factor multiplying the BL constant in a statement.

    ``n`` defaults to cover.n. For the full-cover statements d = |S| = n.
    """
    validate(cover)
    n = cover.n if n is None else n
    st = cover_stats(cover)
    w = [float(x) for x in cover.weights]
    p = float(st.p)
    d = st.d
    odd = spec.variant in (1, 3)
    name = spec.statement

    if name in ("affine_bt", "gagliardo_nirenberg"):
        return 0.0
    if name == "local_lw":
        if odd:
            return sum(wj * log_binomial(n - d + dj, dj) for wj, dj in zip(w, st.d_j)) - log_binomial(n, d)
        return sum(wj * log_binomial(n - dj, n - d) for wj, dj in zip(w, st.d_j)) - (p - 1) * log_binomial(n, d)
    if name == "dual_bt":
        if odd:
            return sum(wj * log_factorial(dj) for wj, dj in zip(w, st.d_j)) - log_factorial(n)
        return sum(wj * log_factorial(dt) for wj, dt in zip(w, st.d_tilde)) - (p - 1) * log_factorial(n)
    if name in ("functional_bt", "min_corollary"):
        if odd:
            return log_factorial(n) - sum(wj * log_factorial(dj) for wj, dj in zip(w, st.d_j))
        return (p - 1) * log_factorial(n) - sum(wj * log_factorial(dt) for wj, dt in zip(w, st.d_tilde))
    if name == "functional_local":
        if odd:
            return log_factorial(d) - sum(wj * log_factorial(dj) for wj, dj in zip(w, st.d_j))
        return (p - 1) * log_factorial(d) - sum(wj * log_factorial(dt) for wj, dt in zip(w, st.d_tilde))
    if name in ("restricted_dual", "reverse_powers", "reverse_sections"):
        def xlogx(k):
            return k * math.log(k) if k > 0 else 0.0
        if odd:
            return sum(wj * xlogx(dj) for wj, dj in zip(w, st.d_j)) - xlogx(d)
        return sum(wj * xlogx(dt) for wj, dt in zip(w, st.d_tilde)) - (p - 1) * xlogx(d)
    if name in ("reverse_gamma", "restricted_dual_centered"):
        ew = float(equal_weight(cover))
        if odd:
            return sum(ew * log_factorial(dj) for dj in st.d_j) - ew * math.lgamma(1 + d / ew)
        return sum(ew * log_factorial(dt) for dt in st.d_tilde) - ew * math.lgamma(1 + d * (p - 1) / ew)
    raise KeyError(name)


def prefactor(spec: PrefactorSpec, cover: IndexCover, n: int | None = None) -> float:
    return math.exp(log_prefactor(spec, cover, n))


def uses_bl1(variant: int) -> bool:
    """Variants 1 and 4 carry BL1, variants 2 and 3 carry BL2."""
    return variant in (1, 4)


def log_bl(variant: int, B: Basis, cover: IndexCover) -> float:
    return log_bl1(B, cover) if uses_bl1(variant) else log_bl2(B, cover)


def loomis_whitney_constant(n: int) -> float:
    return 1.0


def meyer_constant(n: int) -> float:
    """(n!)^{1/(n-1)} / n^{n/(n-1)}."""
    return math.exp(log_factorial(n) / (n - 1) - n / (n - 1) * math.log(n))


def local_lw_constant(n: int, inner: float = 0.0) -> float:
    """2(n-1) / (n sqrt(1 - <w1,w2>^2)) for unit w1, w2."""
    return 2 * (n - 1) / (n * math.sqrt(1 - inner * inner))


def local_bt_equal_constant(n: int, d: int, k: int, m: int) -> float:
    """C(n - kd/m, n - d)^{m/k} / C(n, d)^{m/k - 1}, generalized binomial via Gamma."""
    r = m / k
    return math.exp(r * log_binomial(n - k * d / m, n - d) - (r - 1) * log_binomial(n, d))


def pair_section_constant(d: int, d1: int) -> float:
    """C(d, d1)^{-1}."""
    return 1.0 / math.comb(d, d1)


def fradelizi_factor(n: int, d: int) -> float:
    """((n+1)/(n-d+1))^{n-d}."""
    return ((n + 1) / (n - d + 1)) ** (n - d)


def constants_report(B: Basis, cover: IndexCover) -> dict:
    """Every constant attached to (basis, cover) as a JSON-ready dict."""
    validate(cover)
    out = {
        "n": B.n,
        "p": str(cover.p),
        "bl1": bl1(B, cover),
        "bl2": bl2(B, cover),
    }
    if cover.is_full:
        check = bl_duality_check(B, cover)
        out["duality_residual"] = check.max_residual
    prefactors = {}
    for name in STATEMENTS:
        for v in (1, 2, 3, 4):
            try:
                prefactors[f"{name}/{v}"] = prefactor(PrefactorSpec(name, v), cover)
            except CoverError:
                continue
    out["prefactors"] = prefactors
    return out
