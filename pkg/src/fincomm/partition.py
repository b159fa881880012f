"""Equivalence relations on ``{0..n-1}`` in canonical block-label form."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class PartitionError(ValueError):
    pass


def _canonical(labels: Sequence[int]) -> tuple[int, ...]:
    remap: dict[int, int] = {}
    out = []
    for v in labels:
        if v not in remap:
            remap[v] = len(remap)
        out.append(remap[v])
    return tuple(out)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if rx < ry:
            self.parent[ry] = rx
        else:
            self.parent[rx] = ry
        return True

    def labels(self) -> tuple[int, ...]:
        return _canonical([self.find(x) for x in range(len(self.parent))])


@dataclass(frozen=True)
class Partition:
    """Block labels, numbered in order of each block's least element.

    Equal partitions have identical ``labels``.  ``<=`` is refinement.
    """
    labels: tuple[int, ...]

    def __post_init__(self):
        if _canonical(self.labels) != tuple(self.labels):
            raise PartitionError(f"labels {self.labels} are not canonical; "
                                 f"use Partition.from_labels")

    @classmethod
    def from_labels(cls, labels: Iterable[int]) -> "Partition":
        return cls(_canonical([int(v) for v in labels]))

    @classmethod
    def equality(cls, n: int) -> "Partition":
        return cls(tuple(range(n)))

    @classmethod
    def total(cls, n: int) -> "Partition":
        return cls((0,) * n)

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        """Blocks may omit singletons but must not overlap."""
        labels = list(range(n))
        seen: set[int] = set()
        for block in blocks:
            block = [int(x) for x in block]
            for x in block:
                if not 0 <= x < n:
                    raise PartitionError(f"element {x} outside 0..{n - 1}")
                if x in seen:
                    raise PartitionError(f"element {x} occurs in two blocks")
                seen.add(x)
            if block:
                lo = min(block)
                for x in block:
                    labels[x] = lo
        return cls.from_labels(labels)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Partition":
        """Equivalence relation generated by ``pairs``."""
        uf = _UnionFind(n)
        for a, b in pairs:
            uf.union(int(a), int(b))
        return cls(uf.labels())

    @classmethod
    def from_matrix(cls, rel) -> "Partition":
        """Equivalence closure of a boolean relation matrix."""
        rel = np.asarray(rel, dtype=bool)
        xs, ys = np.nonzero(rel)
        return cls.from_pairs(len(rel), zip(xs.tolist(), ys.tolist()))

    @classmethod
    def parse(cls, text: str, n: int) -> "Partition":
        """Parse ``"0 1|2"``; omitted elements are singletons."""
        blocks = []
        for chunk in text.split("|"):
            try:
                blocks.append([int(t) for t in chunk.replace(",", " ").split()])
            except ValueError:
                raise PartitionError(f"bad partition syntax: {text!r}") from None
        return cls.from_blocks(n, blocks)

    @property
    def size(self) -> int:
        return len(self.labels)

    @cached_property
    def num_blocks(self) -> int:
        return max(self.labels, default=-1) + 1

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.labels, dtype=np.int64)

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for x, b in enumerate(self.labels):
            out[b].append(x)
        return out

    def related(self, x: int, y: int) -> bool:
        return self.labels[x] == self.labels[y]

    def pairs(self) -> list[tuple[int, int]]:
        """All related ordered pairs, lexicographically."""
        lab = self.labels
        return [(x, y) for x in range(self.size) for y in range(self.size)
                if lab[x] == lab[y]]

    def spanning_pairs(self) -> list[tuple[int, int]]:
        """Pairs ``(least, x)`` that generate the relation."""
        out = []
        for block in self.blocks():
            out.extend((block[0], x) for x in block[1:])
        return out

    def matrix(self) -> np.ndarray:
        a = self.array
        return a[:, None] == a[None, :]

    @property
    def is_equality(self) -> bool:
        return self.num_blocks == self.size

    @property
    def is_total(self) -> bool:
        return self.num_blocks <= 1

    def meet(self, other: "Partition") -> "Partition":
        self._check(other)
        return Partition(_canonical(list(zip(self.labels, other.labels))))

    def join(self, other: "Partition") -> "Partition":
        self._check(other)
        return Partition.from_pairs(self.size, self.spanning_pairs()
                                    + other.spanning_pairs())

    __and__ = meet
    __or__ = join

    def __le__(self, other: "Partition") -> bool:
        self._check(other)
        seen: dict[int, int] = {}
        for a, b in zip(self.labels, other.labels):
            if seen.setdefault(a, b) != b:
                return False
        return True

    def __lt__(self, other: "Partition") -> bool:
        return self != other and self <= other

    def __ge__(self, other: "Partition") -> bool:
        return other <= self

    def __gt__(self, other: "Partition") -> bool:
        return other < self

    def _check(self, other: "Partition") -> None:
        if not isinstance(other, Partition):
            raise TypeError(f"expected Partition, got {type(other).__name__}")
        if other.size != self.size:
            raise PartitionError(f"partitions of {self.size} and {other.size} "
                                 f"elements are incomparable")

    def __str__(self) -> str:
        return "|".join(" ".join(map(str, b)) for b in self.blocks())

    def compact(self) -> str:
        """Like ``str`` but without singleton blocks (``"-"`` for equality)."""
        nontrivial = [b for b in self.blocks() if len(b) > 1]
        if not nontrivial:
            return "-"
        return "|".join(" ".join(map(str, b)) for b in nontrivial)

    def __repr__(self) -> str:
        return f"Partition({str(self)!r})"
