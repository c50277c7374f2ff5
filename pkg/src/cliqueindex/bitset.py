"""Compressed fixed-stride bitsets over a dense row-id universe.

A bitset knows its universe size n and stores only nonzero 4096-bit
blocks, each as a Python int.  Empty blocks cost nothing; a full block is
the all-ones int, so long runs in either direction stay cheap.  This is
the in-process stand-in for the compressed bit arrays a bitmap join index
would keep on disk.
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

STRIDE = 4096
_STRIDE_BYTES = STRIDE // 8
_FULL_BLOCK = (1 << STRIDE) - 1


class CompressedBitset:
    __slots__ = ("n", "blocks", "_cardinality")

    def __init__(self, n: int, blocks: dict[int, int] | None = None):
        self.n = n
        self.blocks = blocks or {}
        self._cardinality: int | None = None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def empty(cls, n: int) -> "CompressedBitset":
        return cls(n)

    @classmethod
    def full(cls, n: int) -> "CompressedBitset":
        blocks = {b: _FULL_BLOCK for b in range(n // STRIDE)}
        tail = n % STRIDE
        if tail:
            blocks[n // STRIDE] = (1 << tail) - 1
        return cls(n, blocks)

    @classmethod
    def from_ids(cls, n: int, ids: Iterable[int]) -> "CompressedBitset":
        blocks: dict[int, int] = {}
        for rid in ids:
            if not 0 <= rid < n:
                raise ValueError(f"row id {rid} outside universe 0..{n - 1}")
            blocks[rid // STRIDE] = blocks.get(rid // STRIDE, 0) | (1 << (rid % STRIDE))
        return cls(n, blocks)

    @classmethod
    def from_sorted_array(cls, n: int, ids: np.ndarray) -> "CompressedBitset":
        """Bulk build from an ascending unique int array."""
        if len(ids) == 0:
            return cls(n)
        if ids[0] < 0 or ids[-1] >= n:
            raise ValueError("row ids outside universe")
        block_ids = ids >> 12
        firsts = np.searchsorted(block_ids, np.unique(block_ids))
        bounds = list(firsts) + [len(ids)]
        blocks: dict[int, int] = {}
        for s, e in zip(bounds, bounds[1:]):
            b = int(block_ids[s])
            bits = np.zeros(STRIDE, dtype=bool)
            bits[ids[s:e] & (STRIDE - 1)] = True
            packed = np.packbits(bits, bitorder="little").tobytes()
            blocks[b] = int.from_bytes(packed, "little")
        return cls(n, blocks)

    # -- algebra ---------------------------------------------------------------

    def _check(self, other: "CompressedBitset") -> None:
        if self.n != other.n:
            raise ValueError(f"universe mismatch: {self.n} vs {other.n}")

    def __and__(self, other: "CompressedBitset") -> "CompressedBitset":
        self._check(other)
        small, large = (self, other) if len(self.blocks) <= len(other.blocks) else (other, self)
        out: dict[int, int] = {}
        for b, v in small.blocks.items():
            w = large.blocks.get(b)
            if w is not None:
                merged = v & w
                if merged:
                    out[b] = merged
        return CompressedBitset(self.n, out)

    def __or__(self, other: "CompressedBitset") -> "CompressedBitset":
        self._check(other)
        out = dict(self.blocks)
        for b, v in other.blocks.items():
            out[b] = out.get(b, 0) | v
        return CompressedBitset(self.n, out)

    def __sub__(self, other: "CompressedBitset") -> "CompressedBitset":
        self._check(other)
        out: dict[int, int] = {}
        for b, v in self.blocks.items():
            w = other.blocks.get(b)
            merged = v & ~w if w is not None else v
            if merged:
                out[b] = merged
        return CompressedBitset(self.n, out)

    def complement(self) -> "CompressedBitset":
        """All row ids of the universe not in this set."""
        out: dict[int, int] = {}
        whole, tail = divmod(self.n, STRIDE)
        for b in range(whole):
            v = _FULL_BLOCK ^ self.blocks.get(b, 0)
            if v:
                out[b] = v
        if tail:
            v = ((1 << tail) - 1) ^ self.blocks.get(whole, 0)
            if v:
                out[whole] = v
        return CompressedBitset(self.n, out)

    # -- inspection --------------------------------------------------------------

    def cardinality(self) -> int:
        if self._cardinality is None:
            self._cardinality = sum(v.bit_count() for v in self.blocks.values())
        return self._cardinality

    def __len__(self) -> int:
        return self.cardinality()

    def __bool__(self) -> bool:
        return bool(self.blocks)

    def __contains__(self, rid: int) -> bool:
        if not 0 <= rid < self.n:
            return False
        return bool(self.blocks.get(rid // STRIDE, 0) >> (rid % STRIDE) & 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CompressedBitset):
            return NotImplemented
        return self.n == other.n and self.blocks == other.blocks

    def __iter__(self) -> Iterator[int]:
        for b in sorted(self.blocks):
            v = self.blocks[b]
            base = b * STRIDE
            while v:
                low = v & -v
                yield base + low.bit_length() - 1
                v ^= low

    def to_array(self) -> np.ndarray:
        """Ascending row ids as an int64 array."""
        if not self.blocks:
            return np.empty(0, dtype=np.int64)
        parts = []
        for b in sorted(self.blocks):
            raw = self.blocks[b].to_bytes(_STRIDE_BYTES, "little")
            bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
            parts.append(np.flatnonzero(bits).astype(np.int64) + b * STRIDE)
        return np.concatenate(parts)

    def to_ids(self) -> list[int]:
        return [int(r) for r in self.to_array()]

    def byte_size(self) -> int:
        """Approximate compressed footprint: stored block payloads plus keys."""
        return sum((v.bit_length() + 7) // 8 + 8 for v in self.blocks.values())

    def __repr__(self) -> str:
        return f"CompressedBitset(n={self.n}, cardinality={self.cardinality()})"
