"""Seeded random instances, catalog-wide verification, equality regression and tightness search."""
from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .covers import CoverError, IndexCover, all_equal_weight_covers, lw_cover, partition_cover, relabel
from .functional import (FAMILIES, bobkov_nazarov_check, cone, eval_functional_bt, eval_functional_local,
                         eval_gn, eval_min_corollary, eval_reverse_family, exp_norm, indicator,
                         min_corollary_functions)
from .inequalities import (VERIFY_TOL, BodyMeasure, VerificationReport, eval_affine_bt, eval_classics,
                           eval_dual_bt, eval_fradelizi_bound, eval_local_lw, eval_restricted_dual,
                           inputs_digest, _span_of)
from .linalg import Basis, random_basis
from .polytope import OriginNotInteriorError, Polytope, body_from_spec, mc_volume, random_polytope, standard_body

# (statement, variants) in evaluation order
CATALOG = (
    ("affine_bt", (1, 2, 3, 4)),
    ("local_lw", (1, 2, 3, 4)),
    ("dual_bt", (1, 2, 3, 4)),
    ("restricted_dual", (1, 2, 3, 4)),
    ("restricted_dual_centered", (1, 2, 3, 4)),
    ("fradelizi", (0,)),
    ("functional_bt", (1, 2, 3, 4)),
    ("functional_local", (1, 2, 3, 4)),
    ("gagliardo_nirenberg", (1, 2, 3, 4)),
    ("reverse_powers", (1, 2, 3, 4)),
    ("reverse_sections", (1, 2, 3, 4)),
    ("reverse_gamma", (1, 2, 3, 4)),
    ("min_corollary", (1, 2, 3, 4)),
)
STATEMENT_NAMES = tuple(s for s, _ in CATALOG)
FUNCTIONAL = {"functional_bt", "functional_local", "gagliardo_nirenberg", "reverse_powers",
              "reverse_sections", "reverse_gamma", "min_corollary"}
MC_RESAMPLE_SIGMAS = 5.0


@dataclass
class SuiteConfig:
    seed: int = 0
    dims: list = field(default_factory=lambda: [2, 3])
    bodies_per_dim: dict | int = 50
    basis_condition_cap: float = 20.0
    cover_source: str = "enumerated"  # or "explicit"
    covers: list = field(default_factory=list)  # explicit covers as JSON dicts
    cover_max_m: dict | int = field(default_factory=lambda: {2: 4, 3: 4, 4: 3, 5: 2, 6: 2})
    statements: list = field(default_factory=lambda: [[s, list(v)] for s, v in CATALOG])
    tol: float = VERIFY_TOL
    nsigma: float = 3.0
    mc_samples: int = 200_000
    num_points: int = 12
    threads: int = 1

    def __post_init__(self):
        if not self.dims or any(not 2 <= n <= 6 for n in self.dims):
            raise ValueError(f"dims must lie in 2..6, got {self.dims}")
        if self.basis_condition_cap <= 1 or self.tol <= 0 or self.mc_samples <= 0 or self.threads < 1:
            raise ValueError("caps, tolerances, sample counts and threads must be positive")
        if self.cover_source not in ("enumerated", "explicit"):
            raise ValueError(f"unknown cover source {self.cover_source!r}")
        names = {s for s, _ in self.statements}
        unknown = names - set(STATEMENT_NAMES)
        if unknown:
            raise ValueError(f"unknown statements {sorted(unknown)}")

    def count(self, n: int) -> int:
        b = self.bodies_per_dim
        return int(b[n] if isinstance(b, dict) else b)

    def max_m(self, n: int) -> int:
        c = self.cover_max_m
        return int(c[n] if isinstance(c, dict) else c)

    @classmethod
    def from_json(cls, data) -> "SuiteConfig":
        if isinstance(data, str):
            data = json.loads(data)
        data = dict(data)
        for key in ("bodies_per_dim", "cover_max_m"):
            if isinstance(data.get(key), dict):
                data[key] = {int(k): v for k, v in data[key].items()}
        allowed = set(cls.__dataclass_fields__)
        extra = set(data) - allowed
        if extra:
            raise ValueError(f"unknown config keys {sorted(extra)}")
        return cls(**data)

    def to_json(self) -> dict:
        return asdict(self)


def default_config() -> SuiteConfig:
    """The acceptance run: 50 bodies for n = 2, 3 and 10 for n = 4."""
    return SuiteConfig(dims=[2, 3, 4], bodies_per_dim={2: 50, 3: 50, 4: 10})


# ---------------------------------------------------------------------------
# instances

@dataclass
class Instance:
    seed: int
    n: int
    body: Polytope
    basis: Basis
    covers: list

    @property
    def digest(self) -> str:
        return inputs_digest(self.body, self.basis, [c.to_json() for c in self.covers])

    def dump(self) -> dict:
        return {"seed": self.seed, "n": self.n, "body": self.body.to_json(),
                "basis": self.basis.to_json()}


def instance_seed(seed: int, n: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, n, index]).generate_state(1)[0])


def instance_covers(n: int, max_m: int) -> list[IndexCover]:
    """Enumerated equal-weight covers of [n] and of each proper prefix S = {1..d}, plus LW and partition."""
    out = list(all_equal_weight_covers(n, max_m))
    for d in range(1, n):
        S = list(range(1, d + 1))
        out.extend(relabel(c, S, n) for c in all_equal_weight_covers(d, min(max_m, 3)))
    for extra in (lw_cover(n), partition_cover(n)):
        if not any(extra.same_as(c) for c in out):
            out.append(extra)
    return out


def random_instance(seed: int, n: int, cap: float = 20.0, max_m: int | None = None,
                    num_points: int = 12) -> Instance:
    """Centred random polytope (origin interior), a basis with condition <= cap, and covers."""
    if not 2 <= n <= 6:
        raise ValueError(f"n must be in 2..6, got {n}")
    rng = np.random.default_rng(seed)
    body = random_polytope(int(rng.integers(2**31)), n, num_points=num_points)
    basis = random_basis(rng, n, cond_cap=cap)
    if max_m is None:
        max_m = 4 if n <= 3 else 3 if n == 4 else 2
    return Instance(seed, n, body, basis, instance_covers(n, max_m))


def symmetrized(K: Polytope) -> Polytope:
    """conv(K, -K): symmetric, so every maximal parallel section passes through 0."""
    return Polytope.from_points(np.vstack([K.vertices, -K.vertices]))


# ---------------------------------------------------------------------------
# evaluation of one instance

def _status(rep: VerificationReport, tol: float, nsigma: float) -> str:
    if rep.degenerate:
        return "degenerate"
    if rep.method == "mc":
        if rep.ratio >= 1 - nsigma * rep.sigma:
            return "ok"
        return "resample" if rep.ratio >= 1 - MC_RESAMPLE_SIGMAS * rep.sigma else "fail"
    return "ok" if rep.ratio >= 1 - tol else "fail"


def _family_for(index: int) -> str:
    return FAMILIES[index % len(FAMILIES)]


def evaluate(statement: str, variant: int, K: Polytope, B: Basis, cover: IndexCover | None,
             family: str | None = None, measure: BodyMeasure | None = None, sym: Polytope | None = None,
             seed: int = 0, mc_samples: int = 20_000, sym_measure: BodyMeasure | None = None):
    """One catalog evaluation. Raises CoverError / ValueError when hypotheses fail."""
    if statement == "affine_bt":
        return eval_affine_bt(K, B, cover, variant, measure)
    if statement == "local_lw":
        return eval_local_lw(K, B, cover, variant, measure)
    if statement == "dual_bt":
        return eval_dual_bt(K, B, cover, variant, measure)
    if statement == "restricted_dual":
        return eval_restricted_dual(K, B, cover, variant, measure=measure)
    if statement == "restricted_dual_centered":
        body = symmetrized(K) if sym is None else sym
        return eval_restricted_dual(body, B, cover, variant, centered_mode=True, measure=sym_measure)
    if statement == "fradelizi":
        return eval_fradelizi_bound(K, _span_of(B, list(range(1, variant + 1))), measure)
    f = {"indicator": indicator, "exp_norm": exp_norm, "cone": cone}[family](K)
    if statement == "functional_bt":
        return eval_functional_bt(f, B, cover, variant)
    if statement == "functional_local":
        return eval_functional_local(f, B, cover, variant)
    if statement == "gagliardo_nirenberg":
        return eval_gn(f, B, cover, variant)
    if statement in ("reverse_powers", "reverse_sections", "reverse_gamma"):
        return eval_reverse_family(f, B, cover, statement, variant)
    if statement == "min_corollary":
        fns = min_corollary_functions(K, B, cover, variant, family)
        return eval_min_corollary(fns, B, cover, variant, seed=seed, samples=mc_samples)
    raise KeyError(statement)


def _applicable(statement: str, cover: IndexCover, n: int) -> bool:
    full = statement in ("affine_bt", "dual_bt", "functional_bt", "gagliardo_nirenberg", "reverse_powers",
                         "reverse_sections", "reverse_gamma", "min_corollary")
    if full != cover.is_full:
        return False
    if statement in ("reverse_gamma", "restricted_dual_centered") and len(set(cover.weights)) != 1:
        return False
    if statement == "min_corollary":
        # MC is costly: LW and partition covers only
        return cover.same_as(lw_cover(n)) or cover.same_as(partition_cover(n))
    return True


def run_instance(args) -> list[dict]:
    """All applicable (statement, variant, cover) records for one instance."""
    config, n, index = args
    seed = instance_seed(config.seed, n, index)
    inst = random_instance(seed, n, config.basis_condition_cap, config.max_m(n), config.num_points)
    covers = inst.covers
    if config.cover_source == "explicit":
        covers = [IndexCover.from_json(c) for c in config.covers if int(c["n"]) == n]
    K, B = inst.body, inst.basis
    measure = BodyMeasure(K)
    sym = symmetrized(K)
    sym_measure = BodyMeasure(sym)
    family = _family_for(index)
    wanted = [(s, list(v)) for s, v in config.statements]
    records = []
    base = {"instance": inst.digest, "n": n, "index": index, "seed": seed}
    for statement, variants in wanted:
        if statement == "fradelizi":
            jobs = [(d, None) for d in range(1, n)]
        else:
            jobs = [(v, c) for c in covers for v in variants if _applicable(statement, c, n)]
        for variant, cover in jobs:
            fam = family if statement in FUNCTIONAL else None
            try:
                rep = evaluate(statement, variant, K, B, cover, fam, measure, sym, seed=seed + variant,
                               mc_samples=config.mc_samples, sym_measure=sym_measure)
            except (CoverError, OriginNotInteriorError):
                continue
            except ValueError as exc:
                if statement == "gagliardo_nirenberg" and fam == "exp_norm":
                    continue
                if statement == "restricted_dual_centered" and "exceeds the origin section" in str(exc):
                    continue
                raise
            status = _status(rep, config.tol, config.nsigma)
            if status == "resample":
                # borderline MC result: one fresh draw at 4x the samples decides
                retry = evaluate(statement, variant, K, B, cover, fam, seed=seed + variant + 1_000_003,
                                 mc_samples=4 * config.mc_samples)
                status = "ok_resampled" if _status(retry, config.tol, config.nsigma) == "ok" else "fail"
            rec = dict(base, statement=statement, variant=variant,
                       cover=None if cover is None else cover.to_json(), family=fam,
                       ratio=rep.ratio, lhs=rep.lhs, rhs=rep.rhs, constant=rep.constant,
                       method=rep.method, sigma=rep.sigma, status=status, digest=rep.inputs_digest)
            if rep.method == "mc":
                rec["mc_samples"] = config.mc_samples
            if status != "ok":
                rec["dump"] = inst.dump()
                rec["notes"] = rep.notes
            records.append(rec)
    return records


@dataclass
class SuiteResult:
    records: list
    summary: dict

    @property
    def failures(self) -> list:
        return [r for r in self.records if r["status"] == "fail"]

    def jsonl(self) -> str:
        return "\n".join(json.dumps(r, sort_keys=True) for r in self.records)


def summarize(records: list, config: SuiteConfig) -> dict:
    table: dict = {}
    for r in records:
        key = f"{r['statement']}/{r['variant']}"
        e = table.setdefault(key, {"count": 0, "min_ratio": math.inf, "degenerate": 0})
        e["count"] += 1
        if r["status"] == "degenerate":
            e["degenerate"] += 1
        elif r["ratio"] < e["min_ratio"]:
            e["min_ratio"] = r["ratio"]
    digest = hashlib.sha256(
        "\n".join(json.dumps(r, sort_keys=True) for r in records).encode()).hexdigest()[:16]
    statuses: dict = {}
    for r in records:
        statuses[r["status"]] = statuses.get(r["status"], 0) + 1
    return {"evaluations": len(records), "failures": statuses.get("fail", 0), "statuses": statuses,
            "min_ratio": table, "digest": digest, "config": config.to_json()}


def run_suite(config: SuiteConfig | None = None) -> SuiteResult:
    """Evaluate every applicable (instance, statement, variant, cover); failures are data."""
    config = config or SuiteConfig()
    jobs = [(config, n, i) for n in config.dims for i in range(config.count(n))]
    if config.threads > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            chunks = list(pool.map(run_instance, jobs))
    else:
        chunks = [run_instance(j) for j in jobs]
    # deterministic merge: job order, then evaluation order within an instance
    records = [r for chunk in chunks for r in chunk]
    return SuiteResult(records, summarize(records, config))


def replay(record: dict, mc_samples: int | None = None) -> VerificationReport:
    """Re-evaluate one record from its instance dump (or regenerate from its seed)."""
    if "dump" in record:
        d = record["dump"]
        K = body_from_spec(d["body"])
        B = Basis.from_json(d["basis"])
    else:
        inst = random_instance(record["seed"], record["n"])
        K, B = inst.body, inst.basis
    cover = IndexCover.from_json(record["cover"]) if record.get("cover") else None
    samples = mc_samples or record.get("mc_samples", 20_000)
    return evaluate(record["statement"], record["variant"], K, B, cover, record.get("family"),
                    seed=record["seed"] + record["variant"], mc_samples=samples)


# ---------------------------------------------------------------------------
# equality regression

def equality_regression(n_values=(2, 3)) -> list[tuple[str, VerificationReport]]:
    """Known equality cases; every ratio should be 1 to 1e-9."""
    out = []
    for n in n_values:
        for rep in eval_classics(standard_body("ccube", n)):
            if rep.statement in ("classic:loomis_whitney", "classic:bollobas_thomason"):
                out.append((f"cube{n}", rep))
        cube = standard_body("cube", n)
        out.append((f"cube{n}", eval_affine_bt(cube, Basis.canonical(n), lw_cover(n), 1)))
        cross = standard_body("cross", n)
        for rep in eval_classics(cross):
            if rep.statement in ("classic:meyer", "classic:dual_bollobas_thomason"):
                out.append((f"cross{n}", rep))
        out.append((f"cross{n}", eval_dual_bt(cross, Basis.canonical(n), lw_cover(n), 1)))
        box = standard_body("box", n, sides=np.linspace(0.5, 2.5, n))
        for rep in eval_classics(box):
            if rep.statement == "classic:bollobas_thomason":
                out.append((f"box{n}", rep))
    for n in range(2, 6):
        out.append((f"bn{n}", bobkov_nazarov_check(n)))
    return out


# ---------------------------------------------------------------------------
# tightness search

TIGHTNESS_TARGETS = {
    "loomis_whitney": ("affine_bt", 1, "lw", False),
    "meyer": ("dual_bt", 1, "lw", False),
}


@dataclass
class TightnessResult:
    statement: str
    variant: int
    best_ratio: float
    trace: list
    body: dict
    basis: dict
    cover: dict
    suspect: bool  # ratio below 1 - tol: numerically suspect, replay at finer settings

    def to_json(self) -> dict:
        return asdict(self)


def _search_ratio(statement, variant, K, B, cover):
    try:
        rep = evaluate(statement, variant, K, B, cover, family="exp_norm")
    except (CoverError, OriginNotInteriorError, ValueError):
        return math.inf
    return math.inf if rep.degenerate else rep.ratio


def tightness_search(statement: str, variant: int = 1, n: int = 3, budget: int = 200, seed: int = 0,
                     cover: IndexCover | None = None, restarts: int = 20, move_basis: bool | None = None,
                     tol: float = VERIFY_TOL) -> TightnessResult:
    """Random multi-start plus accept-if-lower jitter of vertices (and basis entries).

    ``statement`` is a catalog name or a classical target ('loomis_whitney',
    'meyer'), which fix the canonical basis and the LW cover. ``budget`` is
    the total number of ratio evaluations across restarts.
    """
    fixed_basis = False
    if statement in TIGHTNESS_TARGETS:
        statement, variant, _, _ = TIGHTNESS_TARGETS[statement]
        cover = lw_cover(n)
        fixed_basis = True
    if move_basis is None:
        move_basis = not fixed_basis
    cover = cover or lw_cover(n)
    rng = np.random.default_rng(seed)
    per_start = max(budget // max(restarts, 1), 1)
    best = (math.inf, None, None)
    trace = []
    for _ in range(restarts):
        K = random_polytope(int(rng.integers(2**31)), n, num_points=2 * n + 4)
        B = Basis.canonical(n) if fixed_basis else random_basis(rng, n)
        r = _search_ratio(statement, variant, K, B, cover)
        for _ in range(per_start):
            if r < best[0]:
                best = (r, K, B)
            trace.append(best[0])
            V = K.vertices + rng.normal(0, 0.05 * K.diameter, K.vertices.shape)
            try:
                K2 = Polytope.from_points(V)
                if statement in ("dual_bt", "restricted_dual"):
                    K2 = K2.centered()
                B2 = B
                if move_basis:
                    B2 = Basis(B.matrix + rng.normal(0, 0.02, B.matrix.shape))
            except ValueError:
                continue
            r2 = _search_ratio(statement, variant, K2, B2, cover)
            if r2 < r:
                K, B, r = K2, B2, r2
        if r < best[0]:
            best = (r, K, B)
    ratio, K, B = best
    return TightnessResult(statement, variant, ratio, trace, K.to_json(), B.to_json(), cover.to_json(),
                           suspect=ratio < 1 - tol)


# ---------------------------------------------------------------------------
# oracle

def oracle_check(K: Polytope, seed: int = 0, samples: int = 1_000_000) -> dict:
    """Exact volume against the Monte Carlo estimate."""
    exact = K.volume()
    est = mc_volume(K, seed, samples)
    z = (est.estimate - exact) / est.std_error if est.std_error > 0 else 0.0
    return {"exact": exact, "estimate": est.estimate, "std_error": est.std_error, "z": z,
            "samples": est.samples, "within_3sigma": abs(z) <= 3.0}
