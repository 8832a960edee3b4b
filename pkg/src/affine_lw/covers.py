"""Uniform covers of index sets with positive rational weights.

Indices are 1-based throughout, matching the usual [n] = {1, ..., n}.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

MAX_DENOMINATOR = 10**6
MAX_ENUM_N = 8
MAX_ENUM_M = 6


class CoverError(ValueError):
    pass


def _frac(w) -> Fraction:
    if isinstance(w, (list, tuple)):
        w = Fraction(int(w[0]), int(w[1]))
    f = Fraction(w)
    if f.denominator > MAX_DENOMINATOR:
        raise CoverError(f"weight {w} has denominator above {MAX_DENOMINATOR}")
    return f


@dataclass(frozen=True)
class IndexCover:
    """Subsets S_1..S_m of a ground set S within [n], with weights p_1..p_m > 0.

    Construction canonicalizes (sorted tuples, Fraction weights) but does not
    validate the cover identity; call :func:`validate` for that.
    """

    n: int
    S: tuple[int, ...]
    subsets: tuple[tuple[int, ...], ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        S = tuple(sorted(set(int(i) for i in self.S)))
        subsets = tuple(tuple(sorted(set(int(i) for i in s))) for s in self.subsets)
        weights = tuple(_frac(w) for w in self.weights)
        if len(subsets) != len(weights):
            raise CoverError(f"{len(subsets)} subsets but {len(weights)} weights")
        if not subsets:
            raise CoverError("a cover needs at least one subset")
        if any(i < 1 or i > self.n for i in S):
            raise CoverError(f"ground set {S} not inside [1..{self.n}]")
        for s in subsets:
            if not s:
                raise CoverError("subsets must be nonempty")
            if not set(s) <= set(S):
                raise CoverError(f"subset {s} is not contained in S={S}")
        if any(w <= 0 for w in weights):
            raise CoverError("weights must be positive")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "subsets", subsets)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def of(cls, n: int, subsets, weights, S=None) -> "IndexCover":
        if S is None:
            S = range(1, n + 1)
        return cls(n, tuple(S), tuple(tuple(s) for s in subsets), tuple(weights))

    @property
    def m(self) -> int:
        return len(self.subsets)

    @property
    def d(self) -> int:
        return len(self.S)

    @property
    def is_full(self) -> bool:
        return self.d == self.n

    @cached_property
    def p(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def complements(self) -> tuple[tuple[int, ...], ...]:
        """S \\ S_j for each j."""
        ground = set(self.S)
        return tuple(tuple(sorted(ground - set(s))) for s in self.subsets)

    def masks(self) -> list[int]:
        """Bitmask (bit i-1 for index i) of each subset."""
        return [sum(1 << (i - 1) for i in s) for s in self.subsets]

    def key(self):
        """Order-independent identity: the multiset of (subset, weight) pairs."""
        return (self.n, self.S, tuple(sorted(zip(self.subsets, self.weights))))

    def same_as(self, other: "IndexCover") -> bool:
        return self.key() == other.key()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "S": list(self.S),
            "subsets": [list(s) for s in self.subsets],
            "weights": [[w.numerator, w.denominator] for w in self.weights],
        }

    @classmethod
    def from_json(cls, data) -> "IndexCover":
        if isinstance(data, str):
            data = json.loads(data)
        n = int(data["n"])
        return cls(n, tuple(data.get("S", range(1, n + 1))),
                   tuple(tuple(s) for s in data["subsets"]),
                   tuple(_frac(w) for w in data["weights"]))


def validate(cover: IndexCover) -> None:
    """Raise CoverError unless sum_j p_j 1[i in S_j] == 1 for every i in S."""
    for i in cover.S:
        total = sum((w for s, w in zip(cover.subsets, cover.weights) if i in s), Fraction(0))
        if total != 1:
            raise CoverError(f"index {i} has weight sum {total}, expected 1")


def is_valid(cover: IndexCover) -> bool:
    try:
        validate(cover)
    except CoverError:
        return False
    return True


def complement_cover(cover: IndexCover) -> IndexCover:
    """The cover (S \\ S_j) with weights p_j / (p - 1)."""
    validate(cover)
    p = cover.p
    if p == 1:
        raise CoverError("p = 1: complement weights p_j/(p-1) are undefined")
    comps = cover.complements()
    if any(not c for c in comps):
        raise CoverError("some S_j equals S, so its complement is empty")
    out = IndexCover(cover.n, cover.S, comps, tuple(w / (p - 1) for w in cover.weights))
    validate(out)
    return out


@dataclass(frozen=True)
class CoverStats:
    p: Fraction
    d: int
    d_j: tuple[int, ...]
    d_tilde: tuple[int, ...]


def cover_stats(cover: IndexCover) -> CoverStats:
    """p, d = |S|, d_j = |S_j| and d~_j = d - d_j (which is n - d_j for full covers)."""
    d = cover.d
    dj = tuple(len(s) for s in cover.subsets)
    return CoverStats(cover.p, d, dj, tuple(d - x for x in dj))


def lw_cover(n: int) -> IndexCover:
    """S_j = [n] \\ {j} with weights 1/(n-1)."""
    if n < 2:
        raise CoverError("the Loomis-Whitney cover needs n >= 2")
    full = set(range(1, n + 1))
    return IndexCover.of(n, [sorted(full - {j}) for j in range(1, n + 1)], [Fraction(1, n - 1)] * n)


def partition_cover(n: int, S=None) -> IndexCover:
    """Singletons {i}, i in S, each with weight 1."""
    S = tuple(range(1, n + 1)) if S is None else tuple(S)
    return IndexCover.of(n, [[i] for i in S], [1] * len(S), S)


def relabel(cover: IndexCover, S, n: int) -> IndexCover:
    """Transport a cover of [d] onto the ground set S (sorted) inside [n]."""
    S = tuple(sorted(S))
    if len(S) != cover.n or not cover.is_full:
        raise CoverError("relabel expects a full cover of [d] with d = |S|")
    subsets = [tuple(S[i - 1] for i in s) for s in cover.subsets]
    return IndexCover(n, S, tuple(subsets), cover.weights)


def enumerate_equal_weight_covers(n: int, k: int, m: int) -> list[IndexCover]:
    """All multisets of m nonempty subsets of [n] covering every index exactly k times.

    Each subset gets weight 1/k. Output order is deterministic (lexicographic
    in the bitmask sequence); covers differing only by subset order appear once.
    """
    if n > MAX_ENUM_N or m > MAX_ENUM_M:
        raise CoverError(f"enumeration limited to n <= {MAX_ENUM_N}, m <= {MAX_ENUM_M}")
    if n < 1 or m < 1 or k < 1:
        return []
    if k > m:
        return []
    masks = list(range(1, 1 << n))
    bits = [[i for i in range(n) if mask >> i & 1] for mask in masks]
    found: list[tuple[int, ...]] = []
    counts = [0] * n
    chosen: list[int] = []

    def rec(start: int, remaining: int):
        if remaining == 0:
            if all(c == k for c in counts):
                found.append(tuple(chosen))
            return
        # every index still needs k - c more appearances, at most one per slot
        if any(k - c > remaining for c in counts):
            return
        for pos in range(start, len(masks)):
            b = bits[pos]
            if any(counts[i] >= k for i in b):
                continue
            for i in b:
                counts[i] += 1
            chosen.append(pos)
            rec(pos, remaining - 1)
            chosen.pop()
            for i in b:
                counts[i] -= 1

    rec(0, m)
    w = Fraction(1, k)
    out = []
    for combo in found:
        subsets = tuple(tuple(i + 1 for i in bits[pos]) for pos in combo)
        out.append(IndexCover(n, tuple(range(1, n + 1)), subsets, (w,) * m))
    return out


def all_equal_weight_covers(n: int, max_m: int) -> list[IndexCover]:
    """Every equal-weight cover of [n] with m <= max_m (all k)."""
    out = []
    for m in range(1, max_m + 1):
        for k in range(1, m + 1):
            out.extend(enumerate_equal_weight_covers(n, k, m))
    return out


def named_cover(name: str, n: int) -> IndexCover:
    """'lw', 'partition', or 'bt-k<k>-m<m>[-<index>]' (an enumerated cover)."""
    if name == "lw":
        return lw_cover(n)
    if name == "partition":
        return partition_cover(n)
    if name.startswith("bt-"):
        parts = name.split("-")
        try:
            k = int(parts[1].lstrip("k"))
            m = int(parts[2].lstrip("m"))
            idx = int(parts[3]) if len(parts) > 3 else 0
        except (IndexError, ValueError):
            raise CoverError(f"malformed cover name {name!r}") from None
        covers = enumerate_equal_weight_covers(n, k, m)
        if idx >= len(covers):
            raise CoverError(f"{name!r}: only {len(covers)} covers with k={k}, m={m} on [{n}]")
        return covers[idx]
    raise CoverError(f"unknown cover name {name!r}")
