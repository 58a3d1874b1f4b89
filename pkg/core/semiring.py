# 2026-10-19 | v0.3.0 | Commutative semirings for InsideOut
"""
semiring.py

Provided instances:
- BooleanSemiring        (or, and)
- BitVectorSemiring(r)   (bitwise max, bitwise min) over r-bit vectors
- NaturalCountSemiring   (+, ×), positive queries only

BitVector values are Python ints used as packed bit sets: bit i is the
i-th rank-1 term. `words()` exposes the ⌈r/64⌉ uint64 words.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import reduce
from typing import Any, Iterable

import numpy as np


class Semiring(ABC):
    name: str = "semiring"

    @property
    @abstractmethod
    def zero(self) -> Any: ...

    @property
    @abstractmethod
    def one(self) -> Any: ...

    @abstractmethod
    def plus(self, a, b): ...

    @abstractmethod
    def times(self, a, b): ...

    def is_zero(self, a) -> bool:
        return a == self.zero

    def sum(self, values: Iterable) -> Any:
        return reduce(self.plus, values, self.zero)

    def product(self, values: Iterable) -> Any:
        return reduce(self.times, values, self.one)


@dataclass(frozen=True)
class BooleanSemiring(Semiring):
    name: str = "boolean"

    @property
    def zero(self) -> bool:
        return False

    @property
    def one(self) -> bool:
        return True

    def plus(self, a, b):
        return a or b

    def times(self, a, b):
        return a and b


@dataclass(frozen=True)
class NaturalCountSemiring(Semiring):
    name: str = "count"

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def plus(self, a, b):
        return a + b

    def times(self, a, b):
        return a * b


@dataclass(frozen=True)
class BitVectorSemiring(Semiring):
    r: int = 1
    name: str = "bitvector"

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("BitVector width must be positive")

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return (1 << self.r) - 1

    def plus(self, a, b):
        return a | b

    def times(self, a, b):
        return a & b

    # -------------------------------------------------
    # Packing helpers
    # -------------------------------------------------

    @property
    def word_count(self) -> int:
        return (self.r + 63) // 64

    def words(self, value: int) -> np.ndarray:
        raw = value.to_bytes(self.word_count * 8, "little")
        return np.frombuffer(raw, dtype="<u8").copy()

    def from_bits(self, bits: np.ndarray) -> int:
        """Pack a boolean array of length r (bit i at index i)."""
        packed = np.packbits(np.asarray(bits, dtype=bool), bitorder="little")
        return int.from_bytes(packed.tobytes(), "little")

    def from_bit_matrix(self, bits: np.ndarray) -> list[int]:
        """Pack each row of a (m, r) boolean matrix."""
        packed = np.packbits(np.asarray(bits, dtype=bool), axis=1, bitorder="little")
        return [int.from_bytes(row.tobytes(), "little") for row in packed]

    def bits(self, value: int) -> np.ndarray:
        raw = np.frombuffer(value.to_bytes(self.word_count * 8, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.r].astype(bool)


BOOLEAN = BooleanSemiring()
COUNT = NaturalCountSemiring()
