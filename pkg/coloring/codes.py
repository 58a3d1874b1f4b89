# 2026-10-19 | v0.3.0 | Reed-Solomon codes and k-disjunct matrices
"""
codes.py

This module:
- Builds Reed-Solomon codes over F_q (galois field arrays) with symbol access on demand
- Builds Kautz-Singleton k-disjunct matrices (RS outer code, unary inner code)
- Verifies k-disjunctness exhaustively

Message x ∈ [q^d] is read as base-q digits (m_0, ..., m_{d-1}); its codeword
is the polynomial Σ m_j t^j evaluated at the field elements 0..n-1 (galois'
integer representation).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import galois
import numpy as np

from config import VERIFY_BUDGET
from core.errors import CodeParameterError, ConstructionBug

log = logging.getLogger(__name__)


def next_prime_power(n: int) -> int:
    q = max(n, 2)
    while not galois.is_prime_power(q):
        q += 1
    return q


def _ints(x) -> np.ndarray:
    return x.view(np.ndarray).astype(np.int64)


# =====================================================
# REED-SOLOMON
# =====================================================

@dataclass(frozen=True, eq=False)
class ReedSolomonCode:
    field: type[galois.FieldArray]
    d: int
    n: int

    @property
    def q(self) -> int:
        return self.field.order

    @property
    def size(self) -> int:
        return self.q ** self.d

    @property
    def distance(self) -> int:
        return self.n - self.d + 1

    def _generator(self) -> galois.FieldArray:
        points = self.field(np.arange(self.n))
        rows = [self.field.Ones(self.n)]
        for _ in range(1, self.d):
            rows.append(rows[-1] * points)
        return self.field(np.stack([_ints(r) for r in rows]))

    def generator_matrix(self) -> np.ndarray:
        """G[j, i] = α_i^j, so codeword = message · G over F_q."""
        return _ints(self._generator())

    def message(self, x: int) -> np.ndarray:
        if not 0 <= x < self.size:
            raise CodeParameterError(f"message {x} outside [0, {self.size})")
        return np.array([(x // self.q ** j) % self.q for j in range(self.d)], dtype=np.int64)

    def symbol(self, x: int, position: int) -> int:
        """Symbol `position` of codeword x without building the codeword."""
        poly = galois.Poly(self.message(x), field=self.field, order="asc")
        return int(poly(self.field(position)))

    def codewords(self, count: int | None = None) -> np.ndarray:
        """(count, n) matrix of the first `count` codewords."""
        count = self.size if count is None else count
        if count > self.size:
            raise CodeParameterError(f"{count} codewords requested from a code of size {self.size}")
        xs = np.arange(count, dtype=np.int64)
        digits = np.stack([(xs // self.q ** j) % self.q for j in range(self.d)], axis=1)
        return _ints(self.field(digits) @ self._generator())

    def min_distance(self) -> int:
        """Exhaustive: the code is linear, so this is the least nonzero codeword weight."""
        words = self.codewords()
        weights = (words[1:] != 0).sum(axis=1)
        return int(weights.min()) if len(weights) else self.n


def rs_code(q: int, d: int, n: int) -> ReedSolomonCode:
    if not galois.is_prime_power(q):
        raise CodeParameterError(f"q={q} is not a prime power")
    if not 1 <= d <= n <= q:
        raise CodeParameterError(f"Reed-Solomon needs 1 ≤ d ≤ n ≤ q, got d={d} n={n} q={q}")
    return ReedSolomonCode(galois.GF(q), d, n)


def message_length(q: int, N: int) -> int:
    """Smallest d ≥ 1 with q^d ≥ N."""
    d = 1
    while q ** d < N:
        d += 1
    return d


# =====================================================
# DISJUNCT MATRICES
# =====================================================

@dataclass(frozen=True, eq=False)
class DisjunctMatrix:
    matrix: np.ndarray
    k: int
    code: ReedSolomonCode | None = None
    verified: bool = False

    @property
    def t(self) -> int:
        return self.matrix.shape[0]

    @property
    def N(self) -> int:
        return self.matrix.shape[1]


def kautz_singleton(code: ReedSolomonCode, N: int) -> np.ndarray:
    """Row (i, s) has a 1 in column x iff codeword x has symbol s at position i."""
    words = code.codewords(N)
    rows = np.zeros((code.n * code.q, N), dtype=bool)
    for i in range(code.n):
        rows[i * code.q + words[:, i], np.arange(N)] = True
    return rows


def _coverable(target: int, masks: list[int], k: int, widest: int) -> bool:
    """Can at most k masks cover `target`? Branches on the lowest uncovered row."""
    if target == 0:
        return True
    if k == 0 or target.bit_count() > k * widest:
        return False
    row = target & -target
    return any(_coverable(target & ~m, masks, k - 1, widest) for m in masks if m & row)


def is_k_disjunct(matrix: np.ndarray, k: int) -> bool:
    """
    No column lies inside the union of k others. Per column j only rows with
    a 1 at j matter; masks of other columns are restricted to those rows and
    dominated masks are dropped before the cover search.
    """
    matrix = np.asarray(matrix, dtype=bool)
    N = matrix.shape[1]
    k = min(k, N - 1)
    masks = [int.from_bytes(np.packbits(matrix[:, j], bitorder="little").tobytes(), "little") for j in range(N)]
    for j in range(N):
        target = masks[j]
        if target == 0:
            return False
        if k <= 0:
            continue
        restricted = {masks[s] & target for s in range(N) if s != j}
        restricted.discard(0)
        maximal = [m for m in restricted if not any(m != o and m | o == o for o in restricted)]
        widest = max((m.bit_count() for m in maximal), default=0)
        if _coverable(target, maximal, k, widest):
            return False
    return True


def disjunct_matrix(k: int, N: int, verify_budget: int = VERIFY_BUDGET) -> DisjunctMatrix:
    """
    Identity when k ≥ √N; otherwise Kautz-Singleton over the smallest prime
    power q whose RS length n = k(d-1)+1 fits in q, d = ⌈log_q N⌉. Verified
    exhaustively when N² is within the verification budget.
    """
    if k < 1 or N < 1:
        raise CodeParameterError(f"disjunct matrix needs k ≥ 1 and N ≥ 1, got k={k} N={N}")
    if k * k >= N:
        return DisjunctMatrix(np.eye(N, dtype=bool), k, None, True)

    q = 2
    while True:
        if galois.is_prime_power(q):
            d = message_length(q, N)
            n = k * (d - 1) + 1
            if n <= q:
                break
        q += 1
    code = rs_code(q, d, n)
    matrix = kautz_singleton(code, N)
    verified = False
    if N * N <= verify_budget:
        if not is_k_disjunct(matrix, k):
            raise ConstructionBug(f"Kautz-Singleton matrix q={q} d={d} n={n} is not {k}-disjunct")
        verified = True
    log.debug("[Codes] %d-disjunct %dx%d from RS(q=%d, d=%d, n=%d)", k, matrix.shape[0], N, q, d, n)
    return DisjunctMatrix(matrix, k, code, verified)
