# 2026-10-19 | v0.3.0 | Color families satisfying the coverage condition
"""
families.py

A color family is a set of functions f : [N] -> [c] such that for every
proper N-coloring h of G some f ∘ h is a proper c-coloring of G.

This module:
- Verifies coverage (exhaustive, or Monte-Carlo above the budget)
- Builds families: random (Las Vegas), greedy set cover, explicit
  (Reed-Solomon outer code over an inner family on [q]), disjunct (stars)
- Picks a construction for a disjunct's NaeStructure (`build_family`)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable

import numpy as np

from coloring.chromatic import (
    NaeStructure,
    as_distribution,
    edge_columns,
    partition_chromatic_polynomial,
    proper_colorings,
    proper_mask,
    refine_distribution,
    theta,
    theta_star_lower,
    uniform,
)
from coloring.codes import ReedSolomonCode, disjunct_matrix, message_length, next_prime_power, rs_code
from config import VERIFY_BUDGET, EngineConfig
from core.errors import (
    CodeParameterError,
    ConstructionBug,
    CoverageGap,
    ExplicitBudgetExceeded,
    FamilyBudgetExceeded,
    FamilyConstructionFailed,
    InvalidDistribution,
    QuotientBudgetExceeded,
    VerificationBudgetExceeded,
)
from core.hypergraph import Hypergraph
from core.seeding import SeedStreams

log = logging.getLogger(__name__)

CERT_EXHAUSTIVE = "exhaustive"
CERT_CONSTRUCTION = "construction"


def monte_carlo(samples: int) -> str:
    return f"monte-carlo({samples})"


# =====================================================
# FAMILY
# =====================================================

@dataclass(frozen=True, eq=False)
class ConcatenatedForm:
    """Member (i, j) maps x to inner_j(codeword_x[i])."""

    code: ReedSolomonCode
    inner: "ColorFamily"


@dataclass(frozen=True, eq=False)
class ColorFamily:
    c: int
    N: int
    provenance: str
    certification: str
    functions: np.ndarray | None = None
    concatenated: ConcatenatedForm | None = None
    p: tuple[Fraction, ...] | None = None
    theta: Fraction | None = None

    @property
    def size(self) -> int:
        if self.concatenated is not None:
            return self.concatenated.code.n * self.concatenated.inner.size
        return len(self.functions)

    def __len__(self) -> int:
        return self.size

    def function(self, i: int) -> np.ndarray:
        """Values of member i on [N]."""
        if self.concatenated is None:
            return self.functions[i]
        form = self.concatenated
        position, j = divmod(i, form.inner.size)
        symbols = form.code.codewords(self.N)[:, position]
        return form.inner.function(j)[symbols]

    def evaluate(self, i: int, x: int) -> int:
        if self.concatenated is None:
            return int(self.functions[i, x])
        form = self.concatenated
        position, j = divmod(i, form.inner.size)
        return form.inner.evaluate(j, form.code.symbol(x, position))

    def matrix(self) -> np.ndarray:
        """(|F|, N) value matrix."""
        if self.concatenated is None:
            return self.functions
        form = self.concatenated
        words = form.code.codewords(self.N)
        inner = form.inner.matrix()
        return np.concatenate([inner[:, words[:, i]] for i in range(form.code.n)], axis=0)

    def subset(self, start: int, stop: int) -> "ColorFamily":
        return replace(self, functions=self.matrix()[start:stop], concatenated=None)

    def extended(self, extra: np.ndarray) -> "ColorFamily":
        rows = np.asarray(extra, dtype=np.int64).reshape(-1, self.N)
        return replace(self, functions=np.concatenate([self.matrix(), rows]), concatenated=None)


def identity_family(N: int, c: int | None = None) -> ColorFamily:
    """The single injective map [N] -> [c]; covers every G when N ≤ c."""
    c = N if c is None else c
    if N > c:
        raise CodeParameterError(f"no injective map from [{N}] into [{c}]")
    return ColorFamily(c, N, "identity", CERT_CONSTRUCTION, np.arange(N, dtype=np.int64)[None, :])


# =====================================================
# COVERAGE
# =====================================================

def coverage_mask(G: Hypergraph, functions: np.ndarray, H: np.ndarray) -> np.ndarray:
    """Rows of H (proper N-colorings) that some function turns into a proper coloring."""
    edges = edge_columns(G)
    covered = np.zeros(len(H), dtype=bool)
    for f in functions:
        todo = ~covered
        if not todo.any():
            break
        covered[todo] = proper_mask(f[H[todo]], edges)
    return covered


def sample_proper_colorings(G: Hypergraph, N: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    """Rejection sampling of uniform proper N-colorings."""
    n = len(G.vertices)
    edges = edge_columns(G)
    kept = []
    total = draws = 0
    while total < samples and draws < 64 * samples:
        batch = rng.integers(0, N, size=(samples, n))
        draws += samples
        good = batch[proper_mask(batch, edges)]
        kept.append(good)
        total += len(good)
    if not kept:
        return np.zeros((0, n), dtype=np.int64)
    return np.concatenate(kept)[:samples]


def verify_coverage(G: Hypergraph, c: int, family: ColorFamily, N: int, budget: int, samples: int,
                    rng: np.random.Generator | None = None) -> str:
    """
    Exhaustive over every proper N-coloring when N^|U| ≤ budget, otherwise
    over `samples` sampled ones. Returns the certification level; a coloring
    left uncovered raises CoverageGap.
    """
    n = len(G.vertices)
    if N ** n <= budget:
        H = proper_colorings(G, N, budget)
        level = CERT_EXHAUSTIVE
    else:
        rng = rng or np.random.default_rng(0)
        H = sample_proper_colorings(G, N, samples, rng)
        level = monte_carlo(len(H))
    functions = family.matrix()
    if functions.size and functions.max() >= c:
        raise ConstructionBug(f"family uses a color ≥ c={c}")
    covered = coverage_mask(G, functions, H)
    if not covered.all():
        raise CoverageGap(H[int(np.argmin(covered))])
    return level


# =====================================================
# RANDOM (Las Vegas)
# =====================================================

def log_colorings(G: Hypergraph, N: int, cap: int) -> float:
    """ln P(G,N), or the |U|·ln N ceiling when quotients are over the cap."""
    try:
        P = partition_chromatic_polynomial(G, N, cap)
    except QuotientBudgetExceeded:
        return len(G.vertices) * math.log(max(N, 1))
    return math.log(P) if P > 1 else 0.0


def family_size(G: Hypergraph, N: int, theta_value: Fraction, cap: int) -> int:
    """⌈ln P(G,N) / θ(p)⌉, at least 1."""
    if theta_value <= 0:
        raise InvalidDistribution("θ(p) is 0: p gives some image no proper coloring")
    return max(1, math.ceil(Fraction(log_colorings(G, N, cap)) / Fraction(theta_value)))


def check_family_cells(rows: int, N: int, budget: int) -> None:
    if rows * N > budget:
        raise FamilyBudgetExceeded(f"{rows} functions over N={N} exceed FAMILY_CELL_BUDGET={budget}")


def random_family(G: Hypergraph, c: int, p: Iterable, N: int, streams: SeedStreams,
                  config: EngineConfig = EngineConfig(), label: str = "family",
                  theta_value: Fraction | None = None) -> ColorFamily:
    """
    Samples ⌈ln P(G,N)/θ(p)⌉ functions with P[f(x)=i] = p_i and keeps the
    first draw that passes verification.
    """
    probs = as_distribution(p, c)
    if theta_value is None:
        theta_value = theta(G, c, probs, N, config.quotient_cap)
    size = family_size(G, N, theta_value, config.quotient_cap)
    check_family_cells(size, N, config.family_cell_budget)
    weights = np.array([float(x) for x in probs])
    weights /= weights.sum()

    for attempt in range(config.family_retry_cap):
        rng = streams.generator(label, "random", attempt)
        functions = rng.choice(c, size=(size, N), p=weights).astype(np.int64)
        family = ColorFamily(c, N, "random", CERT_CONSTRUCTION, functions, p=probs, theta=theta_value)
        try:
            level = verify_coverage(G, c, family, N, config.verify_budget, config.monte_carlo_samples,
                                    streams.generator(label, "verify", attempt))
        except CoverageGap as gap:
            log.debug("[Family] attempt %d of size %d misses %s", attempt, size, gap.uncovered)
            continue
        log.debug("[Family] random |F|=%d after %d attempt(s), %s", size, attempt + 1, level)
        return replace(family, certification=level)
    raise FamilyConstructionFailed(
        f"no random family of size {size} passed verification in {config.family_retry_cap} attempts")


# =====================================================
# GREEDY SET COVER
# =====================================================

def candidate_pool(c: int, N: int, count: int, rng: np.random.Generator, limit: int) -> np.ndarray:
    """Every function [N] -> [c] when there are at most `limit`, else `count` random ones."""
    if c ** N <= limit:
        return np.indices((c,) * N, dtype=np.int64).reshape(N, -1).T
    return rng.integers(0, c, size=(count, N))


def greedy_cover_family(G: Hypergraph, c: int, N: int, candidates: np.ndarray,
                        budget: int = VERIFY_BUDGET) -> ColorFamily:
    """Repeatedly take the candidate covering the most uncovered colorings (ties: lowest index)."""
    n = len(G.vertices)
    if N ** n > budget:
        raise VerificationBudgetExceeded(f"{N}^{n} proper-coloring universe exceeds the budget {budget}")
    candidates = np.asarray(candidates, dtype=np.int64).reshape(-1, N)
    H = proper_colorings(G, N, budget)
    edges = edge_columns(G)
    cover = np.stack([proper_mask(f[H], edges) for f in candidates]) if len(candidates) else \
        np.zeros((0, len(H)), dtype=bool)

    uncovered = np.ones(len(H), dtype=bool)
    chosen: list[int] = []
    while uncovered.any():
        gains = (cover & uncovered).sum(axis=1) if len(cover) else np.zeros(1, dtype=int)
        best = int(np.argmax(gains))
        if gains[best] == 0:
            raise CoverageGap(H[int(np.argmax(uncovered))])
        chosen.append(best)
        uncovered &= ~cover[best]
    log.debug("[Family] greedy picked %d of %d candidates for %d colorings", len(chosen), len(candidates), len(H))
    return ColorFamily(c, N, "greedy", CERT_EXHAUSTIVE, candidates[chosen].reshape(-1, N))


# =====================================================
# STRONGLY EXPLICIT (code concatenation)
# =====================================================

def _inner_family(G: Hypergraph, c: int, q: int, p, streams: SeedStreams, config: EngineConfig,
                  label: str) -> ColorFamily:
    inner_config = replace(config, verify_budget=config.inner_verify_budget)
    if c ** q <= config.exhaustive_pool_limit:
        pool = candidate_pool(c, q, 0, streams.generator(label, "inner-pool"), config.exhaustive_pool_limit)
        return greedy_cover_family(G, c, q, pool, config.inner_verify_budget)
    return random_family(G, c, p, q, streams, inner_config, f"{label}/inner")


def explicit_family(G: Hypergraph, c: int, N: int, p: Iterable, streams: SeedStreams,
                    config: EngineConfig = EngineConfig(), label: str = "family") -> ColorFamily:
    """
    Outer RS code over F_q in which any |U| distinct codewords have a
    position with pairwise distinct symbols: n > C(|U|,2)(d-1). The inner
    family covers proper q-colorings; member (i, j) evaluates on demand.
    """
    k = len(G.vertices)
    pairs = max(1, k * (k - 1) // 2)
    q = 2
    while True:
        q = next_prime_power(q)
        if q ** k > config.inner_verify_budget:
            raise ExplicitBudgetExceeded(
                f"no alphabet q with q^{k} ≤ INNER_VERIFY_BUDGET={config.inner_verify_budget} fits N={N}")
        d = message_length(q, N)
        n = pairs * (d - 1) + 1
        if n <= q:
            break
        q += 1

    probs = as_distribution(p, c)
    inner = _inner_family(G, c, q, probs, streams, config, label)
    if d == 1:
        family = ColorFamily(c, N, "explicit", CERT_CONSTRUCTION, inner.matrix()[:, :N], p=probs)
    else:
        family = ColorFamily(c, N, "explicit", CERT_CONSTRUCTION, None,
                             ConcatenatedForm(rs_code(q, d, n), inner), p=probs)
    if N ** k <= config.verify_budget:
        try:
            level = verify_coverage(G, c, family, N, config.verify_budget, 0)
        except CoverageGap as gap:
            raise ConstructionBug(f"explicit family misses {gap.uncovered}") from None
        family = replace(family, certification=level)
    log.debug("[Family] explicit q=%d d=%d n=%d |inner|=%d |F|=%d", q, d, n, inner.size, family.size)
    return family


# =====================================================
# DISJUNCT MATRICES (stars)
# =====================================================

def star_center(G: Hypergraph):
    """The center of G if G is a star of binary edges, else None."""
    edges = G.distinct_edges()
    if not edges or not all(len(e) == 2 for e in edges):
        return None
    for v in G.vertices:
        if all(v in e for e in edges) and len(edges) == len(G.vertices) - 1:
            return v
    return None


def disjunct_family(G: Hypergraph, N: int, config: EngineConfig = EngineConfig()) -> ColorFamily:
    """
    Rows of a k-disjunct matrix (k = number of leaves) as 2-colorings: a row
    with a 1 at h(center) and 0 on h(leaves) splits every edge of the star.
    """
    center = star_center(G)
    if center is None:
        raise CodeParameterError("disjunct families need a star-shaped NAE structure")
    k = len(G.vertices) - 1
    dm = disjunct_matrix(k, N, config.verify_budget)
    family = ColorFamily(2, N, "disjunct", CERT_CONSTRUCTION, dm.matrix.astype(np.int64))
    if N ** len(G.vertices) <= config.verify_budget:
        family = replace(family, certification=verify_coverage(G, 2, family, N, config.verify_budget, 0))
    return family


# =====================================================
# SELECTION
# =====================================================

def _starting_distribution(structure: NaeStructure, cap: int) -> tuple[Fraction, ...]:
    """theta_star_lower's p or uniform, whichever has the larger θ (ties keep the former)."""
    G, c = structure.G, structure.c
    start = theta_star_lower(G, structure.N, cap)
    candidates = [tuple(p) for p in (start.p, uniform(c)) if len(p) == c]
    return max(candidates, key=lambda p: theta(G, c, p, images=structure.quotients))


def build_family(structure: NaeStructure, mode: str, streams: SeedStreams,
                 config: EngineConfig = EngineConfig(), label: str = "family", p=None) -> ColorFamily:
    """
    p defaults to the better of the structure-aware starting point and
    uniform (optionally refined). With N ≤ c the identity map is the whole
    family. `auto` uses a verified random family when N^|U| is within the
    verification budget, else the explicit construction, else a Monte-Carlo
    random family.
    """
    G, N, c = structure.G, structure.N, structure.c
    if N <= c and mode in ("auto", "random", "greedy", "explicit"):
        log.debug("[Family] N=%d ≤ c=%d, identity map", N, c)
        family = identity_family(N, c)
        return replace(family, p=uniform(c), theta=Fraction(1, c ** len(G.vertices)))

    if structure.exact:
        if p is None:
            p = _starting_distribution(structure, config.quotient_cap)
        p = as_distribution(p, c)
        if config.refine_theta:
            p, theta_value = refine_distribution(G, c, p, N=N, cap=config.quotient_cap)
        else:
            theta_value = theta(G, c, p, images=structure.quotients)
    else:
        p = as_distribution(uniform(c) if p is None else p, c)
        theta_value = Fraction(1, c ** len(G.vertices))

    if mode == "auto":
        if N ** len(G.vertices) <= config.verify_budget:
            mode = "random"
        else:
            try:
                return replace(explicit_family(G, c, N, p, streams, config, label), theta=theta_value)
            except ExplicitBudgetExceeded as exc:
                log.warning("[Family] %s; using a Monte-Carlo certified random family", exc)
                mode = "random"

    if mode == "random":
        return random_family(G, c, p, N, streams, config, label, theta_value)
    if mode == "greedy":
        size = family_size(G, N, theta_value, config.quotient_cap)
        check_family_cells(config.greedy_pool_factor * size, N, config.family_cell_budget)
        pool = candidate_pool(c, N, config.greedy_pool_factor * size, streams.generator(label, "pool"),
                              config.exhaustive_pool_limit)
        return replace(greedy_cover_family(G, c, N, pool, config.verify_budget), p=p, theta=theta_value)
    if mode == "explicit":
        return replace(explicit_family(G, c, N, p, streams, config, label), theta=theta_value)
    if mode == "disjunct":
        return replace(disjunct_family(G, N, config), theta=theta_value)
    raise CodeParameterError(f"unknown family mode {mode}")
