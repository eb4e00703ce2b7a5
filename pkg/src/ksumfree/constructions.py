"""Explicit k-sum free sets, each paired with an independent size count."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import UsageError
from .lattice import Box, Instance, PointSet, find_witness, is_free, leq

VERIFY_LIMIT = 1 << 16


@dataclass
class ConstructionReport:
    name: str
    set: PointSet
    predicted_size: int
    instance: Instance
    # None when the freeness check was skipped (box above VERIFY_LIMIT)
    free: Optional[bool] = None
    # optimum claimed in closed form, when one is known for this instance
    reference_size: Optional[int] = None

    @property
    def size(self) -> int:
        return self.set.cardinality


def _finish(report: ConstructionReport, verify: Optional[bool]) -> ConstructionReport:
    if verify is None:
        verify = report.instance.box.volume <= VERIFY_LIMIT
    if verify:
        report.free = find_witness(report.set, report.instance) is None
    return report


def halfplane_2d(k: int, n: tuple[int, int], verify: Optional[bool] = None) -> ConstructionReport:
    """Points strictly above the line ``n2*x1 + n1*x2 = 2*n1*n2/k``.

    Summing k such inequalities contradicts ``a_1 + ... + a_k = n``, so the
    set is k-sum n-free.
    """
    if k < 2:
        raise UsageError(f"k must be at least 2, got {k}")
    if len(n) != 2:
        raise UsageError(f"halfplane construction needs a 2-d extent, got {n}")
    n1, n2 = n
    inst = Instance.of(k, n, n)
    rhs = 2 * n1 * n2
    s = PointSet(inst.box)
    for p in inst.box.points():
        if k * (n2 * p[0] + n1 * p[1]) > rhs:
            s.add(p)
    # per-column count: x2 > (2*n1*n2 - k*n2*x1) / (k*n1)
    predicted = 0
    for x1 in range(1, n1 + 1):
        floor_x2 = (rhs - k * n2 * x1) // (k * n1)
        predicted += n2 - min(n2, max(0, floor_x2))
    return _finish(ConstructionReport("halfplane", s, predicted, inst), verify)


def halfplane_bound(k: int, n: tuple[int, int]) -> Fraction:
    """Guaranteed size of the half-plane set: ``|n| - 2*n1*n2/k**2``."""
    n1, n2 = n
    return n1 * n2 - Fraction(2 * n1 * n2, k * k)


def oned_tail(k: int, n: int, verify: Optional[bool] = None) -> ConstructionReport:
    """``{x in [n] : x > n/k}``, of size ``n - floor(n/k)``."""
    if k < 2 or n < 1:
        raise UsageError(f"need k >= 2 and n >= 1, got k={k}, n={n}")
    inst = Instance.of(k, n, n)
    s = PointSet(inst.box, ((x,) for x in range(1, n + 1) if k * x > n))
    report = ConstructionReport("tail", s, n - n // k, inst)
    if k == 2:
        report.reference_size = -(-n // 2)
    return _finish(report, verify)


def odd_or_large(n: int) -> list[int]:
    """Integers of [n] that are odd or exceed floor(n/2).

    This is the classical extremal set for ``x + y = z``.  It is generally
    not 2-sum n-free (1 + 5 = 6), so ``oned_odd_or_large`` does not emit it.
    """
    return [x for x in range(1, n + 1) if x % 2 == 1 or x > n // 2]


def oned_odd_or_large(n: int, verify: Optional[bool] = None) -> ConstructionReport:
    """Maximum 2-sum n-free subset of [n]: the upper half ``{x > n/2}``."""
    if n < 1:
        raise UsageError(f"n must be positive, got {n}")
    inst = Instance.of(2, n, n)
    s = PointSet(inst.box, ((x,) for x in range(1, n + 1) if 2 * x > n))
    report = ConstructionReport("odd-or-large", s, -(-n // 2), inst, reference_size=-(-n // 2))
    return _finish(report, verify)


def _count_sum_above(n: int, d: int, threshold: int) -> int:
    """Number of points of [n]^d whose coordinate sum exceeds ``threshold``."""
    ways = {0: 1}
    for _ in range(d):
        nxt: dict[int, int] = {}
        for total, w in ways.items():
            for c in range(1, n + 1):
                nxt[total + c] = nxt.get(total + c, 0) + w
        ways = nxt
    return sum(w for total, w in ways.items() if total > threshold)


def k2_ddim_formula(n: int, d: int) -> int:
    return n**d - -(-((n - 1) ** d) // 2)


def simplex_k2(n: int, d: int, verify: Optional[bool] = None) -> ConstructionReport:
    """``{x in [n]^d : x_1 + ... + x_d > d*n/2}`` for k = 2, b = (n, ..., n).

    The report's ``reference_size`` is the exact optimum ``n^d - ceil((n-1)^d/2)``;
    the simplex set can fall short of it (e.g. n=3, d=2 gives 6 < 7).
    """
    if not 1 <= d <= 3:
        raise UsageError(f"d must be 1, 2 or 3, got {d}")
    if n < 1:
        raise UsageError(f"n must be positive, got {n}")
    inst = Instance.square(2, n, d)
    s = PointSet(inst.box, (p for p in inst.box.points() if 2 * sum(p) > d * n))
    predicted = _count_sum_above(n, d, (d * n) // 2)
    report = ConstructionReport("simplex", s, predicted, inst, reference_size=k2_ddim_formula(n, d))
    return _finish(report, verify)


def box_complement_reduction(
    inst: Instance, inner: PointSet, verify: Optional[bool] = None
) -> ConstructionReport:
    """``([n] \\ [b]) | inner`` for an inner set that is k-sum b-free in [b].

    No solution can use a point outside [b], since every summand has
    positive coordinates.
    """
    b = inst.target
    if not leq(b, inst.box.extent):
        raise UsageError(f"target {b} does not fit in box {inst.box.extent}")
    inner_box = Box(b)
    if inner.box != inner_box:
        raise UsageError(f"inner set must live in [b] = {b}, got box {inner.box.extent}")
    if not is_free(inner, Instance(inst.k, b, inner_box)):
        raise UsageError("inner set is not k-sum b-free")
    s = PointSet(inst.box)
    for p in inst.box.points():
        if not leq(p, b):
            s.add(p)
    for p in inner.points():
        s.add(p)
    predicted = inst.box.volume - math.prod(b) + inner.cardinality
    return _finish(ConstructionReport("complement", s, predicted, inst), verify)


def best_construction(inst: Instance) -> Optional[PointSet]:
    """A free set for a diagonal instance from the matching construction, if any."""
    if not inst.diagonal:
        return None
    n = inst.box.extent
    if len(n) == 1:
        return oned_tail(inst.k, n[0], verify=False).set
    if len(n) == 2:
        return halfplane_2d(inst.k, (n[0], n[1]), verify=False).set
    return None
