"""Lattice points, boxes, bit-packed point sets and the witness search.

Points are plain tuples of positive integers.  A box ``[n] = [n_1] x ... x [n_d]``
indexes its points densely in row-major order (last coordinate fastest), so
the dense index order coincides with lexicographic order on the tuples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .errors import CapacityError, UsageError

Point = tuple[int, ...]

MAX_DIM = 3
MAX_VOLUME = 1 << 24


def as_point(coords: Iterable[int]) -> Point:
    p = tuple(int(c) for c in coords)
    if not 1 <= len(p) <= MAX_DIM:
        raise UsageError(f"dimension must be between 1 and {MAX_DIM}, got {len(p)}")
    return p


def min_max_coord(p: Sequence[int]) -> tuple[int, int]:
    """Return ``(min(p), max(p))``."""
    if not p:
        raise UsageError("empty point")
    return min(p), max(p)


def add_points(p: Point, q: Point) -> Point:
    if len(p) != len(q):
        raise UsageError(f"dimension mismatch: {p} + {q}")
    return tuple(a + b for a, b in zip(p, q))


def sub_points(p: Point, q: Point) -> Point:
    if len(p) != len(q):
        raise UsageError(f"dimension mismatch: {p} - {q}")
    return tuple(a - b for a, b in zip(p, q))


def leq(p: Point, q: Point) -> bool:
    """Coordinate-wise ``p <= q``."""
    return len(p) == len(q) and all(a <= b for a, b in zip(p, q))


@dataclass(frozen=True)
class Box:
    """The lattice box ``[n_1] x ... x [n_d]``."""

    extent: Point
    strides: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        extent = as_point(self.extent)
        if any(c < 1 for c in extent):
            raise UsageError(f"box extents must be positive, got {extent}")
        if math.prod(extent) > MAX_VOLUME:
            raise CapacityError(
                f"box {extent} has {math.prod(extent)} points; limit is {MAX_VOLUME}"
            )
        strides = []
        acc = 1
        for c in reversed(extent):
            strides.append(acc)
            acc *= c
        object.__setattr__(self, "extent", extent)
        object.__setattr__(self, "strides", tuple(reversed(strides)))

    @property
    def dim(self) -> int:
        return len(self.extent)

    @property
    def volume(self) -> int:
        return math.prod(self.extent)

    def __contains__(self, p: object) -> bool:
        return (
            isinstance(p, tuple)
            and len(p) == len(self.extent)
            and all(1 <= c <= n for c, n in zip(p, self.extent))
        )

    def index(self, p: Point) -> int:
        if p not in self:
            raise UsageError(f"point {p} is not in box {self.extent}")
        return sum((c - 1) * s for c, s in zip(p, self.strides))

    def point(self, i: int) -> Point:
        if not 0 <= i < self.volume:
            raise UsageError(f"index {i} out of range for box {self.extent}")
        coords = []
        for s in self.strides:
            q, i = divmod(i, s)
            coords.append(q + 1)
        return tuple(coords)

    def points(self) -> Iterator[Point]:
        """All points in dense-index order."""
        return itertools.product(*(range(1, n + 1) for n in self.extent))


@dataclass(frozen=True)
class Instance:
    """One k-sum b-free problem: forbid ``a_1 + ... + a_k = target`` inside ``box``."""

    k: int
    target: Point
    box: Box

    def __post_init__(self) -> None:
        if self.k < 2:
            raise UsageError(f"k must be at least 2, got {self.k}")
        target = as_point(self.target)
        if len(target) != self.box.dim:
            raise UsageError(
                f"target {target} and box {self.box.extent} differ in dimension"
            )
        object.__setattr__(self, "target", target)

    @classmethod
    def of(cls, k: int, target: Iterable[int] | int, extent: Iterable[int] | int) -> Instance:
        if isinstance(target, int):
            target = (target,)
        if isinstance(extent, int):
            extent = (extent,)
        return cls(k, as_point(target), Box(as_point(extent)))

    @classmethod
    def square(cls, k: int, n: int, dim: int = 2) -> Instance:
        """The diagonal instance ``b = n = (n, ..., n)``."""
        return cls.of(k, (n,) * dim, (n,) * dim)

    @property
    def vacuous(self) -> bool:
        # every summand coordinate is >= 1, so b_i < k admits no solution
        return any(b < self.k for b in self.target)

    @property
    def diagonal(self) -> bool:
        return self.target == self.box.extent

    def candidates(self) -> list[Point]:
        """Box points small enough to occur in some solution, in index order."""
        if self.vacuous:
            return []
        ranges = [
            range(1, min(n, b - self.k + 1) + 1)
            for n, b in zip(self.box.extent, self.target)
        ]
        return list(itertools.product(*ranges))


class PointSet:
    """A subset of a box stored as a packed bit array, with cached cardinality."""

    __slots__ = ("box", "_bits", "_count")

    def __init__(self, box: Box, points: Iterable[Point] = ()) -> None:
        self.box = box
        self._bits = bytearray((box.volume + 7) // 8)
        self._count = 0
        for p in points:
            self.add(p)

    @classmethod
    def full(cls, box: Box) -> PointSet:
        s = cls(box)
        for i in range(box.volume):
            s._bits[i >> 3] |= 1 << (i & 7)
        s._count = box.volume
        return s

    @classmethod
    def from_indices(cls, box: Box, indices: Iterable[int]) -> PointSet:
        s = cls(box)
        for i in indices:
            s.add_index(i)
        return s

    @classmethod
    def from_mask(cls, box: Box, mask: int) -> PointSet:
        if mask < 0 or mask >> box.volume:
            raise UsageError("mask has bits outside the box")
        s = cls(box)
        s._bits[:] = mask.to_bytes(len(s._bits), "little")
        s._count = mask.bit_count()
        return s

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self.box.volume:
            raise UsageError(f"index {i} out of range for box {self.box.extent}")

    def has_index(self, i: int) -> bool:
        return 0 <= i < self.box.volume and bool(self._bits[i >> 3] >> (i & 7) & 1)

    def add_index(self, i: int) -> None:
        self._check_index(i)
        byte, bit = i >> 3, 1 << (i & 7)
        if not self._bits[byte] & bit:
            self._bits[byte] |= bit
            self._count += 1

    def discard_index(self, i: int) -> None:
        self._check_index(i)
        byte, bit = i >> 3, 1 << (i & 7)
        if self._bits[byte] & bit:
            self._bits[byte] &= ~bit & 0xFF
            self._count -= 1

    def add(self, p: Point) -> None:
        self.add_index(self.box.index(p))

    def discard(self, p: Point) -> None:
        self.discard_index(self.box.index(p))

    def __contains__(self, p: object) -> bool:
        return p in self.box and self.has_index(self.box.index(p))  # type: ignore[arg-type]

    def __len__(self) -> int:
        return self._count

    @property
    def cardinality(self) -> int:
        return self._count

    def popcount(self) -> int:
        """Recount the membership bits from scratch."""
        return self.to_mask().bit_count()

    def to_mask(self) -> int:
        return int.from_bytes(self._bits, "little")

    def indices(self) -> Iterator[int]:
        for byte_no, byte in enumerate(self._bits):
            while byte:
                low = byte & -byte
                yield (byte_no << 3) + low.bit_length() - 1
                byte ^= low

    def points(self) -> Iterator[Point]:
        return (self.box.point(i) for i in self.indices())

    def __iter__(self) -> Iterator[Point]:
        return self.points()

    def copy(self) -> PointSet:
        s = PointSet(self.box)
        s._bits[:] = self._bits
        s._count = self._count
        return s

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.box == other.box and self._bits == other._bits

    def __repr__(self) -> str:
        return f"PointSet(box={self.box.extent}, size={self._count})"


@dataclass(frozen=True)
class Witness:
    """k members of a set (repetition allowed) summing to the target."""

    summands: tuple[Point, ...]

    def total(self) -> Point:
        acc = self.summands[0]
        for p in self.summands[1:]:
            acc = add_points(acc, p)
        return acc


def iter_solutions(points: Sequence[Point], target: Point, k: int) -> Iterator[tuple[Point, ...]]:
    """Yield every multiset of ``k`` entries of ``points`` summing to ``target``.

    ``points`` must be sorted lexicographically and duplicate-free.  Each
    multiset is produced once, as a non-decreasing tuple.  Branches are cut
    when the residual cannot be covered by the remaining summands, judged by
    coordinate-wise minima and maxima over the still-available suffix.
    """
    m = len(points)
    if m == 0 or k < 1:
        return
    d = len(target)
    lookup = {p: i for i, p in enumerate(points)}
    suf_min = [list(points[-1]) for _ in range(m)]
    suf_max = [list(points[-1]) for _ in range(m)]
    for j in range(m - 2, -1, -1):
        p = points[j]
        suf_min[j] = [min(a, b) for a, b in zip(p, suf_min[j + 1])]
        suf_max[j] = [max(a, b) for a, b in zip(p, suf_max[j + 1])]

    chosen: list[Point] = []

    def rec(start: int, residual: Point, remaining: int) -> Iterator[tuple[Point, ...]]:
        if remaining == 1:
            j = lookup.get(residual)
            if j is not None and j >= start:
                yield (*chosen, residual)
            return
        rest = remaining - 1
        for j in range(start, m):
            p = points[j]
            # first coordinates are non-decreasing along the sorted list
            if p[0] * remaining > residual[0]:
                break
            r = tuple(residual[i] - p[i] for i in range(d))
            lo, hi = suf_min[j], suf_max[j]
            if any(r[i] < rest * lo[i] or r[i] > rest * hi[i] for i in range(d)):
                continue
            chosen.append(p)
            yield from rec(j, r, rest)
            chosen.pop()

    lo, hi = suf_min[0], suf_max[0]
    if all(k * lo[i] <= target[i] <= k * hi[i] for i in range(d)):
        yield from rec(0, target, k)


def _check_compatible(s: PointSet, inst: Instance) -> None:
    if s.box.dim != inst.box.dim:
        raise UsageError(
            f"set lives in dimension {s.box.dim}, instance in dimension {inst.box.dim}"
        )
    if s.box != inst.box:
        raise UsageError(f"set box {s.box.extent} differs from instance box {inst.box.extent}")


def find_witness(s: PointSet, inst: Instance) -> Optional[Witness]:
    """Return k members of ``s`` summing to the target, or None if ``s`` is free."""
    _check_compatible(s, inst)
    if inst.vacuous or not len(s):
        return None
    cap = tuple(b - inst.k + 1 for b in inst.target)
    members = [p for p in s.points() if all(c <= u for c, u in zip(p, cap))]
    for summands in iter_solutions(members, inst.target, inst.k):
        return Witness(summands)
    return None


def is_free(s: PointSet, inst: Instance) -> bool:
    return find_witness(s, inst) is None
